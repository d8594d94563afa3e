"""Dense matrices over a finite field with exact elimination.

Entries are stored row-major as a flat tuple of canonical integers, so
matrices are immutable, hashable and safe to share.  Row reduction uses
first-nonzero pivoting; there are no numerical heuristics because every
operation is exact.
"""

from __future__ import annotations

from .errors import FieldError, ShapeError, SingularError
from .field import FieldSpec


class Matrix:
    """Immutable rows x cols matrix over a FieldSpec."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field: FieldSpec, rows: int, cols: int, entries):
        entries = tuple(entries)
        if rows < 0 or cols < 0 or len(entries) != rows * cols:
            raise ShapeError(
                f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(entries)}"
            )
        q = field.q
        for e in entries:
            if not isinstance(e, int) or not 0 <= e < q:
                raise FieldError(f"entry {e!r} is not a canonical element of {field}")
        self.field = field
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def _raw(cls, field, rows, cols, entries):
        # Internal constructor for entries already known to be canonical.
        m = object.__new__(cls)
        m.field = field
        m.rows = rows
        m.cols = cols
        m.entries = tuple(entries)
        return m

    @classmethod
    def from_rows(cls, field: FieldSpec, rows) -> "Matrix":
        rows = [tuple(r) for r in rows]
        n = len(rows)
        c = len(rows[0]) if rows else 0
        if any(len(r) != c for r in rows):
            raise ShapeError("ragged rows")
        return cls(field, n, c, [e for r in rows for e in r])

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        return cls._raw(field, n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "Matrix":
        return cls._raw(field, rows, cols, [0] * (rows * cols))

    # -- structure -------------------------------------------------------------

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def row_lists(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_identity(self) -> bool:
        if self.rows != self.cols:
            return False
        n = self.cols
        return all(
            e == (1 if i == j else 0)
            for i in range(n)
            for j, e in enumerate(self.row(i))
        )

    def transpose(self) -> "Matrix":
        r, c, e = self.rows, self.cols, self.entries
        return Matrix._raw(self.field, c, r, [e[i * c + j] for j in range(c) for i in range(r)])

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in self.row(i)) for i in range(self.rows))
        return f"Matrix({self.field}, {self.rows}x{self.cols}: {body})"

    # -- arithmetic ------------------------------------------------------------

    def _check_same_field(self, other):
        if self.field != other.field:
            raise FieldError(f"mixed fields {self.field} and {other.field}")

    def __add__(self, other):
        self._check_same_field(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeError("matrix addition needs equal shapes")
        add = self.field.add
        return Matrix._raw(
            self.field, self.rows, self.cols,
            [add(a, b) for a, b in zip(self.entries, other.entries)],
        )

    def __sub__(self, other):
        self._check_same_field(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeError("matrix subtraction needs equal shapes")
        sub = self.field.sub
        return Matrix._raw(
            self.field, self.rows, self.cols,
            [sub(a, b) for a, b in zip(self.entries, other.entries)],
        )

    def scale(self, c: int) -> "Matrix":
        mul = self.field.mul
        return Matrix._raw(self.field, self.rows, self.cols, [mul(c, e) for e in self.entries])

    def __matmul__(self, other):
        return mat_mul(self, other)

    def rank(self) -> int:
        return mat_rank(self)

    def rref(self) -> "Matrix":
        rows = self.row_lists()
        _row_reduce(rows, self.field, reduced=True)
        return Matrix._raw(self.field, self.rows, self.cols, [e for r in rows for e in r])

    def inverse(self) -> "Matrix":
        return mat_inverse(self)

    def vectorize(self) -> "Matrix":
        return vectorize(self)


def _row_reduce(rows: list[list[int]], field: FieldSpec, reduced: bool = True,
                limit: int | None = None) -> list[int]:
    """In-place Gaussian elimination with first-nonzero pivoting.

    Returns the pivot column list.  `limit` restricts pivot search to the
    first `limit` columns (used for augmented matrices).
    """
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    span = ncols if limit is None else limit
    inv, mul, sub = field.inv, field.mul, field.sub
    pivots = []
    r = 0
    for c in range(span):
        pr = -1
        for i in range(r, nrows):
            if rows[i][c]:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            rows[r], rows[pr] = rows[pr], rows[r]
        prow = rows[r]
        pv = prow[c]
        if pv != 1:
            iv = inv(pv)
            prow = rows[r] = [mul(iv, x) for x in prow]
        lo = 0 if reduced else r + 1
        for i in range(lo, nrows):
            if i == r:
                continue
            f = rows[i][c]
            if f:
                ri = rows[i]
                rows[i] = [sub(x, mul(f, y)) for x, y in zip(ri, prow)]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return pivots


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    """Matrix product over the common field."""
    if a.field != b.field:
        raise FieldError(f"mixed fields {a.field} and {b.field}")
    if a.cols != b.rows:
        raise ShapeError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    dot = a.field.dot
    cols_b = [b.entries[j::b.cols] for j in range(b.cols)]
    out = []
    for i in range(a.rows):
        arow = a.row(i)
        for col in cols_b:
            out.append(dot(arow, col))
    return Matrix._raw(a.field, a.rows, b.cols, out)


def mat_vec(m: Matrix, v) -> tuple:
    """Matrix-vector product m @ v with v a column vector."""
    v = tuple(v)
    if len(v) != m.cols:
        raise ShapeError(f"vector length {len(v)} does not match {m.rows}x{m.cols}")
    dot = m.field.dot
    return tuple(dot(m.row(i), v) for i in range(m.rows))


def vec_add(field: FieldSpec, a, b) -> tuple:
    add = field.add
    return tuple(add(x, y) for x, y in zip(a, b))


def vec_sub(field: FieldSpec, a, b) -> tuple:
    sub = field.sub
    return tuple(sub(x, y) for x, y in zip(a, b))


def mat_rank(a: Matrix) -> int:
    """Rank over the field by exact row reduction."""
    rows = a.row_lists()
    return len(_row_reduce(rows, a.field, reduced=False))


def mat_inverse(a: Matrix) -> Matrix:
    """Inverse of a square matrix; raises SingularError when singular."""
    if a.rows != a.cols:
        raise ShapeError(f"cannot invert non-square {a.rows}x{a.cols} matrix")
    n = a.rows
    rows = [list(a.row(i)) + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    pivots = _row_reduce(rows, a.field, reduced=True, limit=n)
    if len(pivots) < n:
        raise SingularError(f"matrix of rank {len(pivots)} < {n} has no inverse")
    return Matrix._raw(a.field, n, n, [e for r in rows for e in r[n:]])


def vectorize(a: Matrix) -> Matrix:
    """Row-major flattening of a matrix into a 1 x (rows*cols) matrix."""
    return Matrix._raw(a.field, 1, a.rows * a.cols, a.entries)


def vstack(mats) -> Matrix:
    """Stack matrices with equal column counts on top of each other."""
    mats = list(mats)
    if not mats:
        raise ShapeError("nothing to stack")
    field, cols = mats[0].field, mats[0].cols
    for m in mats[1:]:
        if m.field != field:
            raise FieldError("mixed fields in stack")
        if m.cols != cols:
            raise ShapeError("mixed column counts in stack")
    entries = []
    for m in mats:
        entries.extend(m.entries)
    return Matrix._raw(field, sum(m.rows for m in mats), cols, entries)


def solve_square(a: Matrix, b) -> tuple:
    """Solve a @ x = b for square a; raises SingularError when singular."""
    if a.rows != a.cols:
        raise ShapeError("solve_square needs a square matrix")
    b = tuple(b)
    if len(b) != a.rows:
        raise ShapeError("right-hand side length mismatch")
    n = a.rows
    rows = [list(a.row(i)) + [b[i]] for i in range(n)]
    pivots = _row_reduce(rows, a.field, reduced=True, limit=n)
    if len(pivots) < n:
        raise SingularError(f"system of rank {len(pivots)} < {n} is singular")
    return tuple(rows[i][n] for i in range(n))


def represent_rows(a: Matrix, b: Matrix) -> Matrix | None:
    """Matrix X with X @ b == a, or None when some row of a is outside the
    row space of b."""
    if a.field != b.field:
        raise FieldError("mixed fields")
    if a.cols != b.cols:
        raise ShapeError("column counts differ")
    field = b.field
    width = b.cols
    d = b.rows
    # Reduce b while tracking the transform: rows of reduced = T @ rows of b.
    rows = [list(b.row(i)) + [1 if j == i else 0 for j in range(d)] for i in range(d)]
    pivots = _row_reduce(rows, field, reduced=True, limit=width)
    sub, mul = field.sub, field.mul
    out = []
    for i in range(a.rows):
        v = list(a.row(i))
        x = [0] * d
        for t, pc in enumerate(pivots):
            f = v[pc]
            if f:
                red = rows[t]
                for c in range(width):
                    v[c] = sub(v[c], mul(f, red[c]))
                for c in range(d):
                    x[c] = field.add(x[c], mul(f, red[width + c]))
        if any(v):
            return None
        out.extend(x)
    return Matrix._raw(field, a.rows, d, out)
