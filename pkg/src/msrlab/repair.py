"""Repair schemes and the interference-alignment verifier and executor.

A repair scheme assigns each systematic node i a full-row-rank (l/r) x l
projection matrix: either one matrix per node (constant mode, the helper-
independent normal form) or one per (node, helper) pair.  verify_scheme
checks the alignment and spanning conditions exactly; repair_node runs the
actual repair, downloading l/r symbols from each of the n - 1 helpers.
"""

from __future__ import annotations

from dataclasses import dataclass

from .code import Code
from .errors import ParamError, SchemeInvalid, ShapeError, SingularError, SingularStack
from .matrix import Matrix, mat_vec, represent_rows, solve_square, vec_sub, vstack
from .subspace import Relation, is_direct_sum, span

CONSTANT = "constant"
PER_HELPER = "per_helper"


class RepairScheme:
    """Projection matrices used by helpers during single-node repair."""

    __slots__ = ("mode", "k", "n", "_mats")

    def __init__(self, mode: str, k: int, mats, n: int | None = None):
        if mode not in (CONSTANT, PER_HELPER):
            raise ParamError(f"unknown scheme mode {mode!r}")
        if k < 1:
            raise ParamError("scheme needs k >= 1")
        if mode == CONSTANT:
            mats = tuple(mats)
            if len(mats) != k:
                raise ShapeError(f"constant scheme needs {k} matrices, got {len(mats)}")
            sample = mats[0]
        else:
            if n is None or n <= k:
                raise ParamError("per-helper scheme needs n > k")
            mats = dict(mats)
            expect = {(i, nu) for i in range(1, k + 1) for nu in range(1, n + 1) if nu != i}
            if set(mats) != expect:
                raise ShapeError("per-helper scheme must cover every (node, helper) pair")
            sample = next(iter(mats.values()))
        field, rows, cols = sample.field, sample.rows, sample.cols
        values = mats if mode == CONSTANT else mats.values()
        for m in values:
            if not isinstance(m, Matrix):
                raise ShapeError("scheme entries must be matrices")
            if m.field != field or m.rows != rows or m.cols != cols:
                raise ShapeError("scheme matrices must share one shape and field")
            if m.rank() != rows:
                raise ShapeError("repair matrices must have full row rank")
        if rows < 1 or cols % rows != 0:
            raise ShapeError(
                f"repair matrices must be (l/r) x l with l/r dividing l, got {rows}x{cols}"
            )
        self.mode = mode
        self.k = k
        self.n = n
        self._mats = mats

    @classmethod
    def constant(cls, mats) -> "RepairScheme":
        return cls(CONSTANT, len(tuple(mats)), mats)

    @classmethod
    def per_helper(cls, k: int, n: int, mats) -> "RepairScheme":
        return cls(PER_HELPER, k, mats, n=n)

    def matrix_for(self, i: int, nu: int | None = None) -> Matrix:
        """Projection used when helper nu serves the repair of node i."""
        if self.mode == CONSTANT:
            return self._mats[i - 1]
        return self._mats[(i, nu)]

    def as_per_helper(self, n: int) -> "RepairScheme":
        """Constant scheme re-expressed with one matrix per helper."""
        if self.mode == PER_HELPER:
            return self
        mats = {
            (i, nu): self._mats[i - 1]
            for i in range(1, self.k + 1)
            for nu in range(1, n + 1)
            if nu != i
        }
        return RepairScheme(PER_HELPER, self.k, mats, n=n)

    @property
    def field(self):
        return self._sample().field

    @property
    def ambient(self) -> int:
        return self._sample().cols

    @property
    def beta(self) -> int:
        return self._sample().rows

    def _sample(self) -> Matrix:
        if self.mode == CONSTANT:
            return self._mats[0]
        return next(iter(self._mats.values()))

    def __eq__(self, other):
        return (
            isinstance(other, RepairScheme)
            and self.mode == other.mode
            and self.k == other.k
            and self.n == other.n
            and self._mats == other._mats
        )

    def __ne__(self, other):
        return not self.__eq__(other)

    def __repr__(self):
        return f"RepairScheme({self.mode}, k={self.k}, shape {self.beta}x{self.ambient})"


@dataclass(frozen=True)
class Violation:
    kind: str  # "alignment" or "span"
    i: int
    u: int | None = None
    j: int | None = None

    def describe(self) -> str:
        if self.kind == "alignment":
            return f"node {self.i}: projection not aligned under C(u={self.u}, j={self.j})"
        return f"node {self.i}: repair images do not split the full space"

    def as_dict(self):
        d = {"kind": self.kind, "i": self.i}
        if self.u is not None:
            d["u"] = self.u
        if self.j is not None:
            d["j"] = self.j
        return d


@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    violations: tuple

    def as_dict(self):
        return {"ok": self.ok, "violations": [v.as_dict() for v in self.violations]}


def _check_shapes(code: Code, scheme: RepairScheme):
    p = code.params
    if p.l % p.r != 0:
        raise ParamError(f"repair needs r = {p.r} to divide l = {p.l}")
    if scheme.field != p.field:
        raise ShapeError("scheme field differs from code field")
    if scheme.k != p.k:
        raise ShapeError(f"scheme covers {scheme.k} nodes, code has {p.k}")
    if scheme.ambient != p.l or scheme.beta != p.l // p.r:
        raise ShapeError(
            f"scheme matrices must be {p.l // p.r}x{p.l}, got {scheme.beta}x{scheme.ambient}"
        )
    if scheme.mode == PER_HELPER and scheme.n != p.n:
        raise ShapeError(f"scheme assumes n={scheme.n}, code has n={p.n}")


def verify_scheme(code: Code, scheme: RepairScheme) -> VerifyReport:
    """Exact check of the alignment and spanning repair conditions.

    Constant mode checks, for every node i: the projection subspace is fixed
    by every cross matrix C(u,j), j != i, u in [2, r]; and the images under
    the node's own column (including the normalized identity row) split F^l
    as a direct sum.  Per-helper mode checks the analogous per-helper
    conditions for u in [1, r].  All violations are collected, ordered by
    (i, u, j), with each node's span failure listed after its alignment
    failures.
    """
    _check_shapes(code, scheme)
    if not code.normalized:
        raise ParamError("verify_scheme expects a normalized code")
    p = code.params
    violations = []
    if scheme.mode == CONSTANT:
        for i in range(1, p.k + 1):
            si = span(scheme.matrix_for(i))
            for u in range(2, p.r + 1):
                for j in range(1, p.k + 1):
                    if j == i:
                        continue
                    if si.apply(code.matrix(u, j)).compare(si) is not Relation.EQUAL:
                        violations.append(Violation("alignment", i, u, j))
            parts = [si] + [si.apply(code.matrix(u, i)) for u in range(2, p.r + 1)]
            if not is_direct_sum(parts):
                violations.append(Violation("span", i))
    else:
        for i in range(1, p.k + 1):
            helper_spans = {
                nu: span(scheme.matrix_for(i, nu))
                for nu in range(1, p.n + 1)
                if nu != i
            }
            for u in range(1, p.r + 1):
                pu = helper_spans[p.k + u]
                for j in range(1, p.k + 1):
                    if j == i:
                        continue
                    if pu.apply(code.matrix(u, j)).compare(helper_spans[j]) is not Relation.EQUAL:
                        violations.append(Violation("alignment", i, u, j))
            parts = [
                helper_spans[p.k + u].apply(code.matrix(u, i)) for u in range(1, p.r + 1)
            ]
            if not is_direct_sum(parts):
                violations.append(Violation("span", i))
    return VerifyReport(not violations, tuple(violations))


@dataclass(frozen=True)
class RepairResult:
    reconstructed: tuple
    downloaded_symbols: int

    def as_dict(self):
        return {
            "reconstructed": list(self.reconstructed),
            "downloaded_symbols": self.downloaded_symbols,
        }


def node_contents(code: Code, data) -> tuple:
    """All n node columns for the given data: systematic columns verbatim,
    then the encoded parity columns."""
    from .code import encode

    return tuple(tuple(w) for w in data) + encode(code, data)


def repair_node(code: Code, scheme: RepairScheme, i: int, contents) -> RepairResult:
    """Reconstruct systematic node i from l/r symbols per surviving node.

    Every helper nu transmits its projected column; cross-node interference
    inside the parity projections is cancelled through the alignment
    witnesses, and the cleaned blocks stack into an invertible l x l system
    for the lost column.  Raises SchemeInvalid when an alignment witness does
    not exist, and SingularStack when the stacked system is singular (which
    cannot happen for a scheme that passed verification).
    """
    _check_shapes(code, scheme)
    p = code.params
    if not 1 <= i <= p.k:
        raise ParamError(f"repair target must be a systematic node in [1, {p.k}]")
    contents = [tuple(w) for w in contents]
    if len(contents) != p.n or any(len(w) != p.l for w in contents):
        raise ShapeError(f"need all {p.n} node columns of length {p.l}")
    field = p.field
    received = {}
    for nu in range(1, p.n + 1):
        if nu == i:
            continue
        received[nu] = mat_vec(scheme.matrix_for(i, nu), contents[nu - 1])
    stacked_blocks = []
    rhs = []
    for u in range(1, p.r + 1):
        su = scheme.matrix_for(i, p.k + u)
        clean = received[p.k + u]
        for j in range(1, p.k + 1):
            if j == i:
                continue
            witness = represent_rows(su @ code.matrix(u, j), scheme.matrix_for(i, j))
            if witness is None:
                raise SchemeInvalid(
                    f"no alignment witness for node {i} under C(u={u}, j={j})"
                )
            clean = vec_sub(field, clean, mat_vec(witness, received[j]))
        stacked_blocks.append(su @ code.matrix(u, i))
        rhs.extend(clean)
    system = vstack(stacked_blocks)
    try:
        reconstructed = solve_square(system, rhs)
    except SingularError as exc:
        raise SingularStack(
            f"stacked repair system for node {i} is singular"
        ) from exc
    return RepairResult(reconstructed, (p.n - 1) * (p.l // p.r))
