"""Executable linear-independence certificates for verified codes.

The certificates turn the structural facts behind the systematic-length
bounds into concrete rank computations on a given code and repair scheme:
independence of the encoding-matrix family, the product family built from a
partition of the systematic nodes, spanning thresholds, and dimension
profiles of repair-subspace unions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .bounds import dim_lower_bound, partition_size_t
from .code import Code
from .errors import (
    FamilyTooLarge,
    NonSpanningBlock,
    ParamError,
    RangeError,
    ShapeError,
)
from .matrix import Matrix, _row_reduce, mat_rank, vstack
from .repair import CONSTANT, RepairScheme
from .subspace import span

DELTA_FAMILY_CAP = 10 ** 6


@dataclass(frozen=True)
class Partition:
    """Ordered disjoint blocks covering the systematic indices [1, k].

    `standard_flags[b]` records whether block b's repair subspaces span the
    full space.  At most one block may be non-standard and it must come
    first.
    """

    blocks: tuple
    standard_flags: tuple

    def __post_init__(self):
        blocks = tuple(tuple(sorted(b)) for b in self.blocks)
        flags = tuple(bool(f) for f in self.standard_flags)
        if len(blocks) != len(flags) or not blocks:
            raise ParamError("partition needs matching nonempty blocks and flags")
        seen = set()
        for b in blocks:
            if not b:
                raise ParamError("empty partition block")
            if seen & set(b):
                raise ParamError("partition blocks overlap")
            seen |= set(b)
        k = max(seen)
        if seen != set(range(1, k + 1)):
            raise ParamError("partition blocks must cover [1, k]")
        nonstandard = [b for b, f in enumerate(flags) if not f]
        if len(nonstandard) > 1 or (nonstandard and nonstandard[0] != 0):
            raise ParamError("at most one non-standard block, and it must be first")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "standard_flags", flags)

    @property
    def k(self) -> int:
        return sum(len(b) for b in self.blocks)

    def as_dict(self):
        return {
            "blocks": [list(b) for b in self.blocks],
            "standard_flags": list(self.standard_flags),
        }


@dataclass(frozen=True)
class IndependenceReport:
    rank: int
    expected: int
    ok: bool

    def as_dict(self):
        return {"rank": self.rank, "expected": self.expected, "ok": self.ok}


def encoding_independence(code: Code) -> IndependenceReport:
    """Rank of {I} union {C(u,i): u in [2,r]} as vectors of length l^2.

    For a verified repair scheme these k(r-1)+1 matrices are linearly
    independent, which is what bounds k by (l^2-1)/(r-1).
    """
    if not code.normalized:
        raise ParamError("encoding_independence expects a normalized code")
    p = code.params
    vecs = [Matrix.identity(p.field, p.l).vectorize()]
    for u in range(2, p.r + 1):
        for i in range(1, p.k + 1):
            vecs.append(code.matrix(u, i).vectorize())
    expected = p.k * (p.r - 1) + 1
    rank = mat_rank(vstack(vecs))
    return IndependenceReport(rank, expected, rank == expected)


def gamma(code: Code, block, u: int) -> Matrix:
    """Identity for u = 1, else the entrywise sum of C(u, j) over the block."""
    p = code.params
    if not 1 <= u <= p.r:
        raise RangeError(f"parity row u = {u} outside [1, {p.r}]")
    block = tuple(block)
    if any(not 1 <= j <= p.k for j in block):
        raise RangeError(f"block {block} outside [1, {p.k}]")
    if u == 1:
        return Matrix.identity(p.field, p.l)
    acc = Matrix.zeros(p.field, p.l, p.l)
    for j in block:
        acc = acc + code.matrix(u, j)
    return acc


def delta(code: Code, partition: Partition, word) -> Matrix:
    """Left-to-right product of the per-block sums selected by the word."""
    word = tuple(word)
    if len(word) != len(partition.blocks):
        raise ShapeError(
            f"word length {len(word)} differs from block count {len(partition.blocks)}"
        )
    acc = gamma(code, partition.blocks[0], word[0])
    for block, u in zip(partition.blocks[1:], word[1:]):
        acc = acc @ gamma(code, block, u)
    return acc


@dataclass(frozen=True)
class DeltaFamilyReport:
    count: int
    nonzero_ok: bool
    first_zero_word: tuple | None
    rank: int
    independent_ok: bool
    first_dependent_word: tuple | None
    fits_matrix_space: bool  # count <= l^2, forced whenever the family is independent

    def as_dict(self):
        return {
            "count": self.count,
            "nonzero_ok": self.nonzero_ok,
            "first_zero_word": list(self.first_zero_word) if self.first_zero_word else None,
            "rank": self.rank,
            "independent_ok": self.independent_ok,
            "first_dependent_word": (
                list(self.first_dependent_word) if self.first_dependent_word else None
            ),
            "fits_matrix_space": self.fits_matrix_space,
        }


def _scheme_spans(scheme: RepairScheme):
    if scheme.mode != CONSTANT:
        raise ParamError("certificates need a constant-mode scheme")
    return [span(scheme.matrix_for(i)) for i in range(1, scheme.k + 1)]


def _spans_full(spans, indices, l: int) -> bool:
    mats = [spans[i - 1].basis for i in indices if spans[i - 1].dim]
    if not mats:
        return l == 0
    return mat_rank(vstack(mats)) == l


def delta_family_certificate(
    code: Code,
    scheme: RepairScheme,
    partition: Partition,
    cap: int = DELTA_FAMILY_CAP,
) -> DeltaFamilyReport:
    """Enumerate all r^p product matrices and certify non-zeroness and
    joint linear independence by exact rank.

    Words run in lexicographic order; the first zero matrix and the first
    vector that fails to extend the rank are reported as counterexamples.
    Raises NonSpanningBlock if a block flagged standard does not span, and
    FamilyTooLarge beyond the cap (a sampled family would certify nothing).
    """
    p = code.params
    if partition.k != p.k:
        raise ShapeError(f"partition covers {partition.k} nodes, code has {p.k}")
    spans = _scheme_spans(scheme)
    for block, flag in zip(partition.blocks, partition.standard_flags):
        if flag and not _spans_full(spans, block, p.l):
            raise NonSpanningBlock(f"block {block} flagged standard does not span")
    nblocks = len(partition.blocks)
    count = p.r ** nblocks
    if count > cap:
        raise FamilyTooLarge(f"family of {count} matrices exceeds cap {cap}")
    gammas = [
        [gamma(code, block, u) for u in range(1, p.r + 1)]
        for block in partition.blocks
    ]
    reduced_rows = []  # (pivot_col, normalized row) pairs, insertion-ordered
    field = p.field
    sub, mul, inv = field.sub, field.mul, field.inv
    rank = 0
    first_zero = None
    first_dependent = None
    for word in itertools.product(range(1, p.r + 1), repeat=nblocks):
        mat = gammas[0][word[0] - 1]
        for b in range(1, nblocks):
            mat = mat @ gammas[b][word[b] - 1]
        if first_zero is None and mat.is_zero():
            first_zero = word
        vec = list(mat.entries)
        for pc, prow in reduced_rows:
            f = vec[pc]
            if f:
                vec = [sub(x, mul(f, y)) for x, y in zip(vec, prow)]
        pivot = next((c for c, x in enumerate(vec) if x), None)
        if pivot is None:
            if first_dependent is None:
                first_dependent = word
        else:
            iv = inv(vec[pivot])
            reduced_rows.append((pivot, [mul(iv, x) for x in vec]))
            rank += 1
    return DeltaFamilyReport(
        count=count,
        nonzero_ok=first_zero is None,
        first_zero_word=first_zero,
        rank=rank,
        independent_ok=rank == count,
        first_dependent_word=first_dependent,
        fits_matrix_space=count <= p.l * p.l,
    )


@dataclass(frozen=True)
class SpanningSizeReport:
    lambda_exists: int | None
    lambda_every: int | None

    def as_dict(self):
        return {"lambda_exists": self.lambda_exists, "lambda_every": self.lambda_every}


def min_spanning_size(scheme: RepairScheme, l: int) -> SpanningSizeReport:
    """Smallest subset sizes at which repair subspaces span the full space.

    `lambda_exists` is the least m with SOME m-subset spanning; `lambda_every`
    the least m with EVERY m-subset spanning.  Both are None when even the
    full set fails to span.
    """
    spans = _scheme_spans(scheme)
    k = scheme.k
    if not _spans_full(spans, range(1, k + 1), l):
        return SpanningSizeReport(None, None)
    lam_exists = None
    lam_every = None
    for m in range(1, k + 1):
        subsets = list(itertools.combinations(range(1, k + 1), m))
        hits = [_spans_full(spans, s, l) for s in subsets]
        if lam_exists is None and any(hits):
            lam_exists = m
        if lam_every is None and all(hits):
            lam_every = m
        if lam_exists is not None and lam_every is not None:
            break
    return SpanningSizeReport(lam_exists, lam_every)


def find_partition(scheme: RepairScheme, l: int) -> Partition | None:
    """Greedy partition of [1, k] into spanning blocks.

    Packs ascending indices, closing each block as soon as its subspaces
    span; when the trailing remainder cannot span, the leading indices are
    reserved as the (single, first) non-standard block and the rest is
    re-packed.  Returns None when the full set does not span, i.e. when no
    spanning block can be formed at all.
    """
    spans = _scheme_spans(scheme)
    k = scheme.k
    if not _spans_full(spans, range(1, k + 1), l):
        return None

    def greedy(indices):
        blocks, cur = [], []
        for i in indices:
            cur.append(i)
            if _spans_full(spans, cur, l):
                blocks.append(tuple(cur))
                cur = []
        return blocks, cur

    blocks, leftover = greedy(range(1, k + 1))
    if not leftover:
        return Partition(tuple(blocks), (True,) * len(blocks))
    for lead_size in range(1, k):
        lead = tuple(range(1, lead_size + 1))
        rest_blocks, rest_left = greedy(range(lead_size + 1, k + 1))
        if rest_blocks and not rest_left:
            lead_standard = _spans_full(spans, lead, l)
            return Partition(
                (lead,) + tuple(rest_blocks),
                (lead_standard,) + (True,) * len(rest_blocks),
            )
    # Descending pack: close blocks from the top, leftover prefix leads.
    blocks, cur = [], []
    for i in range(k, 0, -1):
        cur.append(i)
        if _spans_full(spans, cur, l):
            blocks.append(tuple(sorted(cur)))
            cur = []
    blocks.reverse()
    if not cur:
        return Partition(tuple(blocks), (True,) * len(blocks))
    lead = tuple(sorted(cur))
    return Partition((lead,) + tuple(blocks), (False,) + (True,) * len(blocks))


@dataclass(frozen=True)
class DimProfileReport:
    subset: tuple
    m: int
    dim: int
    t: int
    bound_explicit: Fraction
    bound_geometric: Fraction
    ok: bool

    def as_dict(self):
        return {
            "subset": list(self.subset),
            "m": self.m,
            "dim": self.dim,
            "t": self.t,
            "bound_explicit": str(self.bound_explicit),
            "bound_geometric": str(self.bound_geometric),
            "ok": self.ok,
        }


def dim_profile(scheme: RepairScheme, subset, l: int, r: int) -> DimProfileReport:
    """Measured dimension of a repair-subspace union against its bounds.

    For m <= t the dimension must equal m*l/r exactly; beyond t it must
    reach the explicit lower bound, and it must always reach the ceiling of
    the geometric bound.
    """
    subset = tuple(sorted(subset))
    if not subset:
        raise ParamError("dim_profile needs a nonempty subset")
    spans = _scheme_spans(scheme)
    if any(not 1 <= i <= scheme.k for i in subset):
        raise ParamError(f"subset {subset} outside [1, {scheme.k}]")
    mats = [spans[i - 1].basis for i in subset if spans[i - 1].dim]
    dim = mat_rank(vstack(mats)) if mats else 0
    m = len(subset)
    t = partition_size_t(l, r)
    b = dim_lower_bound(m, l, r)
    geo_ceil = -(-b.geometric.numerator // b.geometric.denominator)
    if m <= t:
        ok = Fraction(dim) == b.thm_explicit
    else:
        ok = Fraction(dim) >= b.thm_explicit
    ok = ok and dim >= geo_ceil
    return DimProfileReport(subset, m, dim, t, b.thm_explicit, b.geometric, ok)
