"""Systematic {n = k + r, k, l} array codes over a finite field.

A code is the r x k grid of invertible l x l encoding matrices: parity node u
stores the sum over systematic nodes j of C(u,j) applied to node j's column.
Node indices, parity rows u and systematic columns j are all 1-based in the
public API, matching the on-disk format.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import FieldError, ParamError, ShapeError, SingularError, SingularSystem
from .field import FieldSpec
from .matrix import Matrix, _row_reduce, mat_inverse, mat_vec, vec_add


@dataclass(frozen=True)
class CodeParams:
    """Parameter set of a systematic array code.

    Encoding, MDS checking and erasure decoding work for any r >= 1; the
    repair machinery additionally needs r to divide l so the per-helper
    download beta = l/r is integral.
    """

    field: FieldSpec
    n: int
    k: int
    r: int
    l: int

    def __post_init__(self):
        if self.k < 1 or self.r < 1 or self.l < 1:
            raise ParamError(f"k, r, l must be positive, got k={self.k} r={self.r} l={self.l}")
        if self.n != self.k + self.r:
            raise ParamError(f"n = {self.n} but k + r = {self.k + self.r}")

    @property
    def repairable(self) -> bool:
        return self.l % self.r == 0

    @property
    def beta(self) -> int:
        """Per-helper repair download, l/r symbols."""
        if self.l % self.r != 0:
            raise ParamError(f"beta undefined: r = {self.r} does not divide l = {self.l}")
        return self.l // self.r

    @property
    def B(self) -> int:
        """Total data symbols, k*l."""
        return self.k * self.l

    @property
    def alpha(self) -> int:
        """Per-node storage, equal to l."""
        return self.l

    @property
    def d(self) -> int:
        """Number of repair helpers, n - 1."""
        return self.n - 1


class Code:
    """Parameters plus the grid of invertible encoding matrices."""

    __slots__ = ("params", "enc")

    def __init__(self, params: CodeParams, enc, validate: bool = True):
        enc = tuple(tuple(row) for row in enc)
        if len(enc) != params.r or any(len(row) != params.k for row in enc):
            raise ShapeError(
                f"encoding grid must be {params.r} x {params.k}"
            )
        if validate:
            l = params.l
            for u, row in enumerate(enc, start=1):
                for j, c in enumerate(row, start=1):
                    if not isinstance(c, Matrix):
                        raise ShapeError(f"C(u={u}, j={j}) is not a matrix")
                    if c.field != params.field:
                        raise FieldError(f"C(u={u}, j={j}) uses a different field")
                    if c.rows != l or c.cols != l:
                        raise ShapeError(f"C(u={u}, j={j}) must be {l}x{l}")
                    if c.rank() != l:
                        raise SingularError(f"C(u={u}, j={j}) is singular")
        self.params = params
        self.enc = enc

    def matrix(self, u: int, j: int) -> Matrix:
        """Encoding matrix for parity row u in [1, r], systematic column j in [1, k]."""
        return self.enc[u - 1][j - 1]

    @property
    def normalized(self) -> bool:
        """True when the first parity row consists of identity matrices."""
        return all(c.is_identity() for c in self.enc[0])

    def __eq__(self, other):
        return isinstance(other, Code) and self.params == other.params and self.enc == other.enc

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash((self.params, self.enc))

    def __repr__(self):
        p = self.params
        return f"Code(n={p.n}, k={p.k}, l={p.l} over {p.field})"


@dataclass(frozen=True)
class MdsReport:
    ok: bool
    witness: tuple | None  # (parity rows U, systematic columns J), 1-based

    def as_dict(self):
        return {
            "ok": self.ok,
            "witness": None if self.witness is None else
            {"parity_rows": list(self.witness[0]), "systematic_columns": list(self.witness[1])},
        }


def encode(code: Code, data) -> tuple:
    """Parity node contents for the given k data columns of length l."""
    p = code.params
    data = [tuple(w) for w in data]
    if len(data) != p.k or any(len(w) != p.l for w in data):
        raise ShapeError(f"data must be {p.k} columns of length {p.l}")
    q = p.field.q
    for w in data:
        for e in w:
            if not isinstance(e, int) or not 0 <= e < q:
                raise FieldError(f"data entry {e!r} is not a canonical element of {p.field}")
    parities = []
    for u in range(1, p.r + 1):
        acc = (0,) * p.l
        for j in range(1, p.k + 1):
            acc = vec_add(p.field, acc, mat_vec(code.matrix(u, j), data[j - 1]))
        parities.append(acc)
    return tuple(parities)


def _block_rows(code: Code, parity_rows, columns) -> list[list[int]]:
    """Rows of the block matrix (C(u,j)) for u in parity_rows, j in columns."""
    l = code.params.l
    out = []
    for u in parity_rows:
        mats = [code.matrix(u, j) for j in columns]
        for i in range(l):
            row = []
            for m in mats:
                row.extend(m.row(i))
            out.append(row)
    return out


def mds_check(code: Code) -> MdsReport:
    """Every square block selection of the encoding grid must be invertible.

    Checks, for every block size s, every choice of s parity rows against
    every choice of s systematic columns.  The witness is the first failing
    selection in (size, rows, columns)-lexicographic order.
    """
    p = code.params
    for s in range(1, min(p.r, p.k) + 1):
        for parity_rows in itertools.combinations(range(1, p.r + 1), s):
            for columns in itertools.combinations(range(1, p.k + 1), s):
                rows = _block_rows(code, parity_rows, columns)
                if len(_row_reduce(rows, p.field, reduced=False)) < s * p.l:
                    return MdsReport(False, (parity_rows, columns))
    return MdsReport(True, None)


def erasure_decode(code: Code, survivors, stored) -> tuple:
    """Recover the k data columns from any k surviving nodes.

    `survivors` are k distinct node indices in [1, n]; `stored` holds their
    column vectors.  Raises SingularSystem when the survivor set is not
    information-complete (an MDS violation).
    """
    p = code.params
    survivors = list(survivors)
    stored = [tuple(w) for w in stored]
    if len(survivors) != p.k or len(set(survivors)) != p.k:
        raise ParamError(f"need exactly {p.k} distinct survivor indices")
    if any(not 1 <= v <= p.n for v in survivors):
        raise ParamError(f"survivor indices must lie in [1, {p.n}]")
    if len(stored) != p.k or any(len(w) != p.l for w in stored):
        raise ShapeError(f"stored vectors must be {p.k} columns of length {p.l}")
    l, k = p.l, p.k
    size = k * l
    rows = []
    for nu, w in zip(survivors, stored):
        if nu <= k:
            for i in range(l):
                row = [0] * size + [w[i]]
                row[(nu - 1) * l + i] = 1
                rows.append(row)
        else:
            u = nu - k
            mats = [code.matrix(u, j) for j in range(1, k + 1)]
            for i in range(l):
                row = []
                for m in mats:
                    row.extend(m.row(i))
                row.append(w[i])
                rows.append(row)
    pivots = _row_reduce(rows, p.field, reduced=True, limit=size)
    if len(pivots) < size:
        raise SingularSystem(
            f"survivor set {sorted(survivors)} does not determine the data"
        )
    flat = [rows[i][size] for i in range(size)]
    return tuple(tuple(flat[j * l:(j + 1) * l]) for j in range(k))


def normalize(code: Code) -> Code:
    """Equivalent code with the first parity row normalized to identities.

    Corresponds to the data change of basis W'_j = C(1,j) W_j; the MDS
    verdict and repair verifiability are unaffected.  Idempotent.
    """
    if code.normalized:
        return code
    p = code.params
    inverses = [mat_inverse(code.matrix(1, j)) for j in range(1, p.k + 1)]
    enc = tuple(
        tuple(code.matrix(u, j) @ inverses[j - 1] for j in range(1, p.k + 1))
        for u in range(1, p.r + 1)
    )
    return Code(p, enc, validate=False)
