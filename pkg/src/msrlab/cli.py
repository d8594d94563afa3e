"""Command-line front end.

Subcommands: verify, repair, certify, bounds, table, search.  Exit codes:
0 success, 1 property violation, 2 malformed input or flags, 3 internal
consistency failure.  `--json` switches any report to a machine-readable
block with stable key order.  MSRLAB_THREADS sets the default shard count
for search.
"""

from __future__ import annotations

import argparse
import contextlib
import itertools
import json
import os
import random
import sys
import time
from fractions import Fraction

from . import bounds as bounds_mod
from . import certificates as cert_mod
from .code import erasure_decode, mds_check, normalize
from .codefile import (
    format_code_file,
    parse_data_file,
    read_code_file,
    write_code_file,
)
from .errors import (
    CodeFileError,
    MsrLabError,
    ParamError,
    SingularStack,
)
from .field import FieldSpec, default_modulus
from .repair import node_contents, repair_node, verify_scheme
from .search import (
    EXHAUSTIVE,
    EXHAUSTIVE_CAP,
    RANDOM,
    SearchConfig,
    estimate_exhaustive_candidates,
    search_codes,
)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


def _range_spec(text: str) -> range:
    """Parse 'a:b' or 'a:b:step' into an inclusive range."""
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise argparse.ArgumentTypeError(f"range must be a:b or a:b:step, got {text!r}")
    try:
        nums = [int(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"range bounds must be integers: {text!r}")
    start, stop = nums[0], nums[1]
    step = nums[2] if len(nums) == 3 else 1
    if step < 1 or stop < start:
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    return range(start, stop + 1, step)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="msrlab",
        description="Verify, certify, bound and search linear MSR array codes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="MDS and repair-scheme verification")
    p_verify.add_argument("file")
    p_verify.add_argument("--json", action="store_true")

    p_repair = sub.add_parser("repair", help="run a single-node repair")
    p_repair.add_argument("file")
    p_repair.add_argument("--node", type=int, required=True)
    p_repair.add_argument("--data", required=True,
                          help="data file path, or 'random' with --seed")
    p_repair.add_argument("--seed", type=int, default=0)
    p_repair.add_argument("--json", action="store_true")

    p_certify = sub.add_parser("certify", help="independence certificates")
    p_certify.add_argument("file")
    p_certify.add_argument("--delta-cap", type=int, default=cert_mod.DELTA_FAMILY_CAP)
    p_certify.add_argument("--json", action="store_true")

    p_bounds = sub.add_parser("bounds", help="systematic-length bounds for one (l, r)")
    p_bounds.add_argument("--l", type=int, required=True)
    p_bounds.add_argument("--r", type=int, required=True)
    p_bounds.add_argument("--compare", action="store_true",
                          help="include the earlier published bounds")
    p_bounds.add_argument("--json", action="store_true")

    p_table = sub.add_parser("table", help="bound table over an (l, r) grid")
    p_table.add_argument("--l", type=_range_spec, required=True, metavar="A:B[:STEP]")
    p_table.add_argument("--r", type=_range_spec, required=True, metavar="A:B")
    p_table.add_argument("--format", choices=("csv", "md"), default="csv")

    p_search = sub.add_parser("search", help="search valid (code, scheme) pairs")
    p_search.add_argument("--q", type=int, required=True, help="field characteristic")
    p_search.add_argument("--m", type=int, default=1, help="extension degree")
    p_search.add_argument("--modulus", default=None,
                          help="hex modulus for extension fields (default: built-in)")
    p_search.add_argument("--l", type=int, required=True)
    p_search.add_argument("--r", type=int, required=True)
    p_search.add_argument("--k", type=int, required=True)
    mode = p_search.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true", default=True)
    mode.add_argument("--budget", type=int, default=0,
                      help="randomized mode with this candidate budget")
    p_search.add_argument("--seed", type=int, default=0)
    p_search.add_argument("--shards", type=int, default=0,
                          help="parallel shards (default: MSRLAB_THREADS or 1)")
    p_search.add_argument("--emit", default=None, metavar="DIR",
                          help="write found pairs as code files into DIR")
    p_search.add_argument("--json", action="store_true")

    return parser


def _load(path, out, err):
    code, scheme = read_code_file(_read_text(path))
    if not code.normalized:
        print(f"note: {path} was not normalized; normalized on load", file=err)
        code = normalize(code)
    return code, scheme


def _read_text(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CodeFileError(f"cannot read {path}: {exc}") from exc


def _emit_json(out, payload):
    print(json.dumps(payload, indent=2), file=out)


# -- subcommands -----------------------------------------------------------


def _cmd_verify(args, out, err) -> int:
    code, scheme = _load(args.file, out, err)
    mds = mds_check(code)
    scheme_report = verify_scheme(code, scheme) if scheme is not None else None
    ok = mds.ok and (scheme_report is None or scheme_report.ok)
    if args.json:
        payload = {
            "command": "verify",
            "file": args.file,
            "mds": mds.as_dict(),
            "scheme": scheme_report.as_dict() if scheme_report else None,
            "ok": ok,
        }
        _emit_json(out, payload)
    else:
        p = code.params
        print(f"code: n={p.n} k={p.k} r={p.r} l={p.l} over {p.field}", file=out)
        if mds.ok:
            print("mds: ok", file=out)
        else:
            u, j = mds.witness
            print(f"mds: FAIL at parity rows {list(u)} x systematic columns {list(j)}",
                  file=out)
        if scheme_report is None:
            print("scheme: not present (skipped)", file=out)
        elif scheme_report.ok:
            print("scheme: ok", file=out)
        else:
            print(f"scheme: FAIL ({len(scheme_report.violations)} violations)", file=out)
            for v in scheme_report.violations:
                print(f"  {v.describe()}", file=out)
    return EXIT_OK if ok else EXIT_VIOLATION


def _cmd_repair(args, out, err) -> int:
    code, scheme = _load(args.file, out, err)
    p = code.params
    if scheme is None:
        raise CodeFileError(f"{args.file} carries no repair scheme blocks")
    if not 1 <= args.node <= p.k:
        raise ParamError(f"--node must be a systematic index in [1, {p.k}]")
    if args.data == "random":
        rng = random.Random(args.seed)
        data = tuple(
            tuple(rng.randrange(p.field.q) for _ in range(p.l)) for _ in range(p.k)
        )
    else:
        data = parse_data_file(_read_text(args.data), p.field, p.k, p.l)
    report = verify_scheme(code, scheme)
    if not report.ok:
        print(f"scheme: FAIL ({len(report.violations)} violations); not repairing",
              file=out)
        return EXIT_VIOLATION
    contents = node_contents(code, data)
    result = repair_node(code, scheme, args.node, contents)
    match = result.reconstructed == data[args.node - 1]
    if args.json:
        payload = {
            "command": "repair",
            "file": args.file,
            "node": args.node,
            "reconstructed": list(result.reconstructed),
            "downloaded_symbols": result.downloaded_symbols,
            "match": match,
        }
        _emit_json(out, payload)
    else:
        print(f"repairing node {args.node}: downloaded {result.downloaded_symbols} "
              f"symbols ({p.l // p.r} per helper)", file=out)
        print("reconstructed: " + " ".join(str(x) for x in result.reconstructed),
              file=out)
        print(f"match: {'ok' if match else 'MISMATCH'}", file=out)
    if not match:
        raise SingularStack("reconstruction differs from the erased column")
    return EXIT_OK


def _subsets_for_profile(k: int):
    if 2 ** k <= 4096:
        for m in range(1, k + 1):
            yield from itertools.combinations(range(1, k + 1), m)
    else:
        for m in range(1, k + 1):
            yield tuple(range(1, m + 1))


def _cmd_certify(args, out, err) -> int:
    code, scheme = _load(args.file, out, err)
    p = code.params
    if scheme is None:
        raise CodeFileError(f"{args.file} carries no repair scheme blocks")
    indep = cert_mod.encoding_independence(code)
    spanning = cert_mod.min_spanning_size(scheme, p.l)
    partition = cert_mod.find_partition(scheme, p.l)
    family = None
    if partition is not None:
        family = cert_mod.delta_family_certificate(code, scheme, partition,
                                                   cap=args.delta_cap)
    profiles = [
        cert_mod.dim_profile(scheme, subset, p.l, p.r)
        for subset in _subsets_for_profile(p.k)
    ]
    profiles_ok = all(pr.ok for pr in profiles)
    ok = indep.ok and profiles_ok and (
        family is None or (family.nonzero_ok and family.independent_ok)
    )
    if args.json:
        payload = {
            "command": "certify",
            "file": args.file,
            "encoding_independence": indep.as_dict(),
            "min_spanning_size": spanning.as_dict(),
            "partition": partition.as_dict() if partition else None,
            "delta_family": family.as_dict() if family else None,
            "dim_profiles": [pr.as_dict() for pr in profiles],
            "ok": ok,
        }
        _emit_json(out, payload)
    else:
        print(f"encoding independence: rank {indep.rank} / expected {indep.expected}: "
              f"{'ok' if indep.ok else 'FAIL'}", file=out)
        print(f"min spanning size: exists={spanning.lambda_exists} "
              f"every={spanning.lambda_every}", file=out)
        if partition is None:
            print("partition: none (repair subspaces never span; product family "
                  "not applicable)", file=out)
        else:
            desc = " ".join(
                "[" + " ".join(str(i) for i in b) + ("" if f else " *") + "]"
                for b, f in zip(partition.blocks, partition.standard_flags)
            )
            print(f"partition: {desc} (* = non-standard)", file=out)
            print(f"product family: count {family.count}, "
                  f"nonzero {'ok' if family.nonzero_ok else 'FAIL'}, "
                  f"rank {family.rank}: "
                  f"{'ok' if family.independent_ok else 'FAIL'}", file=out)
        print(f"dimension profiles: {len(profiles)} subsets, "
              f"{'all ok' if profiles_ok else 'FAIL'}", file=out)
        print(f"certify: {'ok' if ok else 'FAIL'}", file=out)
    return EXIT_OK if ok else EXIT_VIOLATION


def _fmt_real(x: float) -> str:
    return f"{x:.1f}"


def _fmt_fraction(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f} ({float(f):.1f})"


def _cmd_bounds(args, out, err) -> int:
    report = bounds_mod.evaluate_bounds(args.l, args.r)
    if args.json:
        payload = {"command": "bounds", "report": report.as_dict(),
                   "compare": bool(args.compare)}
        _emit_json(out, payload)
        return EXIT_OK
    print(f"l={report.l} r={report.r} t={report.t}", file=out)
    lam = ("= " if report.lambda_is_exact else "<= ") + str(report.lambda_int)
    print(f"partition size lambda: {lam} (real {_fmt_real(report.lambda_real)})",
          file=out)
    print(f"quadratic bound (l^2-1)/(r-1): {_fmt_fraction(report.quadratic)}",
          file=out)
    print(f"r-log bound 2*lambda*log_r(l): real {_fmt_real(report.rlog_real)}, "
          f"floor {report.rlog_floor}", file=out)
    if args.compare:
        print(f"prior binomial bound l*C(l, l/r): {report.prior_tamo}", file=out)
        print(f"prior quadratic bound l^2: {report.prior_goparaju_quadratic}",
              file=out)
        print(f"prior base-2 log bound 2*lambda*log2(l): "
              f"real {_fmt_real(report.prior_goparaju_log_real)}, "
              f"floor {report.prior_goparaju_log_floor}", file=out)
    return EXIT_OK


_TABLE_COLUMNS = (
    ("l", lambda b: str(b.l)),
    ("r", lambda b: str(b.r)),
    ("t", lambda b: str(b.t)),
    ("lambda", lambda b: str(b.lambda_int)),
    ("quadratic", lambda b: str(b.quadratic)),
    ("rlog_real", lambda b: _fmt_real(b.rlog_real)),
    ("rlog_floor", lambda b: str(b.rlog_floor)),
    ("prior_tamo", lambda b: str(b.prior_tamo)),
    ("prior_quadratic", lambda b: str(b.prior_goparaju_quadratic)),
    ("prior_log_real", lambda b: _fmt_real(b.prior_goparaju_log_real)),
    ("prior_log_floor", lambda b: str(b.prior_goparaju_log_floor)),
)


def _cmd_table(args, out, err) -> int:
    reports = bounds_mod.bound_grid(args.l, args.r)
    headers = [name for name, _ in _TABLE_COLUMNS]
    rows = [[fmt(b) for _, fmt in _TABLE_COLUMNS] for b in reports]
    if args.format == "csv":
        print(",".join(headers), file=out)
        for row in rows:
            print(",".join(row), file=out)
    else:
        widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h)
                  for i, h in enumerate(headers)]
        print("| " + " | ".join(h.ljust(w) for h, w in zip(headers, widths)) + " |",
              file=out)
        print("|" + "|".join("-" * (w + 2) for w in widths) + "|", file=out)
        for row in rows:
            print("| " + " | ".join(c.ljust(w) for c, w in zip(row, widths)) + " |",
                  file=out)
    return EXIT_OK


def _cmd_search(args, out, err) -> int:
    if args.m > 1:
        modulus = int(args.modulus, 16) if args.modulus else default_modulus(args.m)
        fieldspec = FieldSpec(args.q, args.m, modulus)
    else:
        if args.modulus:
            raise ParamError("--modulus applies to extension fields (--m > 1) only")
        fieldspec = FieldSpec(args.q)
    shards = args.shards
    if shards < 1:
        shards = int(os.environ.get("MSRLAB_THREADS", "1") or "1")
        shards = max(shards, 1)
    mode = RANDOM if args.budget else EXHAUSTIVE
    cfg = SearchConfig(fieldspec, args.l, args.r, args.k, mode=mode,
                       seed=args.seed, budget=args.budget, shards=shards)
    start = time.monotonic()
    result = search_codes(cfg, progress=err)
    elapsed = time.monotonic() - start
    emitted = []
    if args.emit:
        os.makedirs(args.emit, exist_ok=True)
        for idx, (code, scheme) in enumerate(result.found):
            path = os.path.join(args.emit, f"code{idx:06d}.msr")
            write_code_file(path, code, scheme)
            emitted.append(path)
    if args.json:
        payload = {
            "command": "search",
            "field": repr(fieldspec),
            "l": args.l, "r": args.r, "k": args.k,
            "mode": mode,
            "shards": shards,
            "examined": result.examined,
            "found": len(result.found),
            "emitted": emitted,
        }
        _emit_json(out, payload)
    else:
        print(f"search: field {fieldspec} l={args.l} r={args.r} k={args.k} "
              f"mode={mode} shards={shards}", file=out)
        print(f"examined {result.examined} candidates in {elapsed:.1f}s", file=out)
        print(f"found {len(result.found)} valid (code, scheme) pairs", file=out)
        if args.emit:
            print(f"emitted {len(emitted)} files to {args.emit}", file=out)
    return EXIT_OK


_HANDLERS = {
    "verify": _cmd_verify,
    "repair": _cmd_repair,
    "certify": _cmd_certify,
    "bounds": _cmd_bounds,
    "table": _cmd_table,
    "search": _cmd_search,
}


def dispatch(argv, stdout=None, stderr=None) -> int:
    """Parse argv and run the selected subcommand; returns the exit code."""
    out = stdout if stdout is not None else sys.stdout
    err = stderr if stderr is not None else sys.stderr
    parser = build_parser()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        try:
            args = parser.parse_args(list(argv))
        except SystemExit as exc:
            return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
        try:
            return _HANDLERS[args.command](args, out, err)
        except SingularStack as exc:
            print(f"internal consistency failure: {exc}", file=err)
            return EXIT_INTERNAL
        except MsrLabError as exc:
            print(f"error: {exc}", file=err)
            return EXIT_USAGE


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))
