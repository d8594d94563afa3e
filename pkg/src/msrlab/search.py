"""Exhaustive and randomized search for valid (code, scheme) pairs.

The exhaustive enumerator walks normalized codes (first parity row fixed to
identities) column by column.  Candidates for one systematic node are pairs
(C(2..r, i), S_i) with C drawn from GL(l, q) and S_i a canonical-basis
repair subspace; two pruning phases apply:

  phase 1 - per node, the images of S_i under its own column must split the
            full space as a direct sum;
  phase 2 - across nodes, every previously fixed subspace must be fixed by
            the new column and vice versa (tracked through precomputed
            stabilizer sets, which shrink the admissible GL set as the
            prefix grows).

Every surviving assignment is checked with the real MDS and scheme
verifiers before being emitted, so soundness never rests on the pruning.
Results are reported in lexicographic order of their flattened entry
encoding, independent of shard count.  Found counts are lower-bound
evidence for the searched field only; an exhaustive run that finds nothing
is a nonexistence proof for that field alone.
"""

from __future__ import annotations

import hashlib
import itertools
import multiprocessing
from dataclasses import dataclass

from .code import Code, CodeParams, mds_check
from .errors import ParamError, TooLarge
from .field import FieldSpec
from .matrix import Matrix, _row_reduce
from .repair import RepairScheme, verify_scheme
from .subspace import span

EXHAUSTIVE_CAP = 10 ** 9

EXHAUSTIVE = "exhaustive"
RANDOM = "random"


@dataclass(frozen=True)
class SearchConfig:
    field: FieldSpec
    l: int
    r: int
    k: int
    mode: str = EXHAUSTIVE
    seed: int = 0
    budget: int = 0
    shards: int = 1

    def __post_init__(self):
        if self.mode not in (EXHAUSTIVE, RANDOM):
            raise ParamError(f"unknown search mode {self.mode!r}")
        if self.r < 2:
            raise ParamError("search needs r >= 2")
        if self.l % self.r != 0:
            raise ParamError(f"r = {self.r} must divide l = {self.l}")
        if self.k < 1:
            raise ParamError("search needs k >= 1")
        if self.shards < 1:
            raise ParamError("shards must be >= 1")
        if self.mode == RANDOM and self.budget < 1:
            raise ParamError("random mode needs a positive budget")

    @property
    def params(self) -> CodeParams:
        return CodeParams(self.field, self.k + self.r, self.k, self.r, self.l)


@dataclass
class SearchResult:
    found: list
    examined: int

    def as_dict(self):
        return {"found": len(self.found), "examined": self.examined}


def gl_order(q: int, l: int) -> int:
    out = 1
    ql = q ** l
    for i in range(l):
        out *= ql - q ** i
    return out


def gaussian_binomial(l: int, d: int, q: int) -> int:
    """Number of d-dimensional subspaces of F_q^l."""
    num = den = 1
    for i in range(d):
        num *= q ** (l - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def estimate_exhaustive_candidates(field: FieldSpec, l: int, r: int, k: int) -> int:
    """Upper estimate of the candidates an exhaustive run can visit.

    The first node ranges over all |GL|^(r-1) * N_S pairs; once a prefix
    subspace is fixed, later columns are confined to its GL stabilizer, of
    size |GL| / N_S by orbit counting (GL acts transitively on subspaces of
    one dimension).  The estimate is the product of these per-level widths.
    """
    q = field.q
    g = gl_order(q, l)
    n_s = gaussian_binomial(l, l // r, q)
    level1 = g ** (r - 1) * n_s
    if k == 1:
        return level1
    branch = n_s * (g // n_s) ** (r - 1)
    return level1 * branch ** (k - 1)


# ---------------------------------------------------------------------------
# Precomputed per-(field, l, r) tables, shared across shards via fork.
# ---------------------------------------------------------------------------

_TABLES: dict = {}


class _Tables:
    def __init__(self, fieldspec: FieldSpec, l: int, r: int):
        self.field = fieldspec
        self.l = l
        self.r = r
        self.beta = l // r
        self.gl = _enumerate_gl(fieldspec, l)
        self.subspaces = _enumerate_subspaces(fieldspec, l, self.beta)
        self.identity = Matrix.identity(fieldspec, l)
        self._stab = None
        self._valid = {}

    @property
    def stab(self):
        """stab[s] = GL indices whose right action fixes subspace s."""
        if self._stab is None:
            stabs = []
            for smat in self.subspaces:
                target = smat
                members = set()
                for gi, g in enumerate(self.gl):
                    if span(smat @ g).basis == target:
                        members.add(gi)
                stabs.append(frozenset(members))
            self._stab = stabs
        return self._stab

    def candidate_valid(self, s_idx: int, ctuple) -> bool:
        """Phase-1 filter: S and its images under the column split F^l."""
        key = (s_idx, ctuple)
        cached = self._valid.get(key)
        if cached is None:
            smat = self.subspaces[s_idx]
            rows = smat.row_lists()
            for ci in ctuple:
                rows.extend((smat @ self.gl[ci]).row_lists())
            cached = len(_row_reduce(rows, self.field, reduced=False)) == self.l
            self._valid[key] = cached
        return cached


def _enumerate_gl(fieldspec: FieldSpec, l: int) -> list:
    """All invertible l x l matrices in entry-lexicographic order."""
    q = fieldspec.q
    out = []
    for entries in itertools.product(range(q), repeat=l * l):
        m = Matrix._raw(fieldspec, l, l, entries)
        if m.rank() == l:
            out.append(m)
    return out


def _enumerate_subspaces(fieldspec: FieldSpec, l: int, d: int) -> list:
    """Canonical bases of all d-dimensional subspaces of F_q^l.

    Enumerates reduced-echelon matrices directly: one pivot-column set at a
    time (lexicographic), filling the free entries in lexicographic order.
    """
    q = fieldspec.q
    out = []
    for pivots in itertools.combinations(range(l), d):
        # Free entries sit right of the row's pivot in non-pivot columns.
        free = [
            (row, col)
            for row, pc in enumerate(pivots)
            for col in range(pc + 1, l)
            if col not in pivots
        ]
        for values in itertools.product(range(q), repeat=len(free)):
            rows = [[0] * l for _ in range(d)]
            for row, pc in enumerate(pivots):
                rows[row][pc] = 1
            for (row, col), v in zip(free, values):
                rows[row][col] = v
            out.append(Matrix.from_rows(fieldspec, rows))
    return out


def _tables_for(fieldspec: FieldSpec, l: int, r: int) -> _Tables:
    key = (fieldspec, l, r)
    tab = _TABLES.get(key)
    if tab is None:
        tab = _Tables(fieldspec, l, r)
        _TABLES[key] = tab
    return tab


def pair_encoding(code: Code, scheme: RepairScheme) -> tuple:
    """Flat integer encoding of a (code, scheme) pair; the sort key for
    deterministic output ordering."""
    p = code.params
    parts = []
    for j in range(1, p.k + 1):
        for u in range(2, p.r + 1):
            parts.extend(code.matrix(u, j).entries)
    for i in range(1, p.k + 1):
        parts.extend(scheme.matrix_for(i).entries)
    return tuple(parts)


def _build_pair(cfg: SearchConfig, tab: _Tables, chosen) -> tuple:
    ident_row = (tab.identity,) * cfg.k
    enc = [ident_row]
    for ui in range(cfg.r - 1):
        enc.append(tuple(tab.gl[ct[ui]] for ct, _s in chosen))
    code = Code(cfg.params, enc, validate=False)
    scheme = RepairScheme.constant([tab.subspaces[s] for _ct, s in chosen])
    return code, scheme


def _iter_exhaustive(cfg: SearchConfig, shard: int, nshards: int, counter: list):
    """DFS over node candidates; yields valid pairs in visit order.

    `counter` is a single-cell list accumulating the examined-candidate
    count.  Sharding splits the first level by candidate index.
    """
    tab = _tables_for(cfg.field, cfg.l, cfg.r)
    n_gl = len(tab.gl)
    n_sub = len(tab.subspaces)
    stab = tab.stab
    k, r = cfg.k, cfg.r

    def rec(chosen, allowed):
        if len(chosen) == k:
            code, scheme = _build_pair(cfg, tab, chosen)
            if mds_check(code).ok and verify_scheme(code, scheme).ok:
                yield code, scheme
            return
        allowed_sorted = sorted(allowed)
        for s in range(n_sub):
            st = stab[s]
            if any(c not in st for ct, _si in chosen for c in ct):
                continue
            for ctuple in itertools.product(allowed_sorted, repeat=r - 1):
                counter[0] += 1
                if not tab.candidate_valid(s, ctuple):
                    continue
                yield from rec(chosen + [(ctuple, s)], allowed & st)

    idx = -1
    full = frozenset(range(n_gl))
    for s in range(n_sub):
        st = stab[s]
        for ctuple in itertools.product(range(n_gl), repeat=r - 1):
            idx += 1
            if idx % nshards != shard:
                continue
            counter[0] += 1
            if not tab.candidate_valid(s, ctuple):
                continue
            yield from rec([(ctuple, s)], full & st)


def _hash_stream(seed: int, counter: int):
    """Endless deterministic integer stream keyed by (seed, counter) only,
    so output is independent of how counters are split across shards."""
    block = 0
    while True:
        data = b"%d:%d:%d" % (seed, counter, block)
        digest = hashlib.blake2b(data, digest_size=64).digest()
        for off in range(0, 64, 8):
            yield int.from_bytes(digest[off:off + 8], "little")
        block += 1


def _sample_matrix(stream, fieldspec, rows, cols, full_rank_rows=None):
    q = fieldspec.q
    while True:
        entries = [next(stream) % q for _ in range(rows * cols)]
        m = Matrix._raw(fieldspec, rows, cols, entries)
        need = rows if full_rank_rows is None else full_rank_rows
        if m.rank() == need:
            return m


def _random_candidate(cfg: SearchConfig, counter: int):
    stream = _hash_stream(cfg.seed, counter)
    f = cfg.field
    ident_row = (Matrix.identity(f, cfg.l),) * cfg.k
    enc = [ident_row]
    for _u in range(cfg.r - 1):
        enc.append(tuple(_sample_matrix(stream, f, cfg.l, cfg.l) for _ in range(cfg.k)))
    beta = cfg.l // cfg.r
    mats = []
    for _i in range(cfg.k):
        raw = _sample_matrix(stream, f, beta, cfg.l)
        mats.append(span(raw).basis)  # canonical repair subspace
    code = Code(cfg.params, enc, validate=False)
    scheme = RepairScheme.constant(mats)
    return code, scheme


def _run_shard(args) -> tuple:
    cfg, shard = args
    found = []
    counter = [0]
    if cfg.mode == EXHAUSTIVE:
        for pair in _iter_exhaustive(cfg, shard, cfg.shards, counter):
            found.append(pair)
    else:
        for c in range(cfg.budget):
            if c % cfg.shards != shard:
                continue
            counter[0] += 1
            code, scheme = _random_candidate(cfg, c)
            if mds_check(code).ok and verify_scheme(code, scheme).ok:
                found.append((code, scheme))
    return found, counter[0]


def search_codes(cfg: SearchConfig, progress=None) -> SearchResult:
    """Run the configured search and return all valid pairs, sorted.

    `progress` is an optional text stream receiving one line per finished
    shard.  Exhaustive mode refuses (TooLarge) when the candidate estimate
    exceeds the cap.
    """
    if cfg.mode == EXHAUSTIVE:
        est = estimate_exhaustive_candidates(cfg.field, cfg.l, cfg.r, cfg.k)
        if est > EXHAUSTIVE_CAP:
            raise TooLarge(
                f"exhaustive estimate {est} exceeds cap {EXHAUSTIVE_CAP}; "
                "use random mode with a budget"
            )
        _tables_for(cfg.field, cfg.l, cfg.r)  # build before forking
    shard_args = [(cfg, s) for s in range(cfg.shards)]
    if cfg.shards == 1:
        outputs = [_run_shard(shard_args[0])]
    else:
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(processes=cfg.shards) as pool:
            outputs = pool.map(_run_shard, shard_args)
    found = []
    examined = 0
    for s, (part, count) in enumerate(outputs):
        found.extend(part)
        examined += count
        if progress is not None:
            print(f"shard {s + 1}/{cfg.shards}: examined {count}, found {len(part)}",
                  file=progress)
    # Deterministic order and (random-mode) de-duplication.
    by_key = {pair_encoding(c, s): (c, s) for c, s in found}
    ordered = [by_key[key] for key in sorted(by_key)]
    return SearchResult(ordered, examined)


@dataclass(frozen=True)
class PerK:
    k: int
    mode: str
    found: int
    examined: int

    @property
    def exhaustive(self) -> bool:
        return self.mode == EXHAUSTIVE

    def as_dict(self):
        return {"k": self.k, "mode": self.mode, "found": self.found,
                "examined": self.examined}


@dataclass(frozen=True)
class MaxKReport:
    """Largest k with a found instance; a field-relative lower bound on the
    true maximum.  Only exhaustively searched k values support nonexistence
    claims."""

    k_star: int
    per_k: tuple

    def as_dict(self):
        return {"k_star": self.k_star, "per_k": [p.as_dict() for p in self.per_k]}


def max_feasible_k(
    field: FieldSpec,
    l: int,
    r: int,
    k_cap: int,
    budget: int = 0,
    seed: int = 0,
    shards: int = 1,
) -> MaxKReport:
    """Probe k = 1..k_cap with exhaustive search where feasible, else the
    seeded randomized search with the stated budget."""
    if r < 2:
        raise ParamError("need r >= 2")
    if k_cap < 1:
        raise ParamError("need k_cap >= 1")
    if k_cap * (r - 1) > l * l - 1:
        raise ParamError(
            f"k_cap = {k_cap} exceeds the quadratic bound (l^2-1)/(r-1)"
        )
    per_k = []
    k_star = 0
    for k in range(1, k_cap + 1):
        est = estimate_exhaustive_candidates(field, l, r, k)
        if est <= EXHAUSTIVE_CAP:
            cfg = SearchConfig(field, l, r, k, mode=EXHAUSTIVE, shards=shards)
        else:
            if budget < 1:
                raise ParamError(
                    f"k = {k} is not exhaustively searchable; provide a budget"
                )
            cfg = SearchConfig(field, l, r, k, mode=RANDOM, seed=seed,
                               budget=budget, shards=shards)
        res = search_codes(cfg)
        per_k.append(PerK(k, cfg.mode, len(res.found), res.examined))
        if res.found:
            k_star = k
    return MaxKReport(k_star, tuple(per_k))
