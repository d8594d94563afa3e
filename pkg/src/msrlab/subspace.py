"""Row spaces in canonical form and the subspace calculus built on them.

A Subspace is the row space of a matrix, stored as the unique reduced
row-echelon basis with zero rows dropped.  Canonical bases make subspace
identity a structural equality, which keeps every comparison exact.
"""

from __future__ import annotations

from enum import Enum

from .errors import NotInvariant, ShapeError
from .matrix import Matrix, _row_reduce, mat_rank, represent_rows, vstack


class Relation(Enum):
    EQUAL = "equal"
    A_IN_B = "a_in_b"
    B_IN_A = "b_in_a"
    INCOMPARABLE = "incomparable"


class Subspace:
    """A subspace of F^ambient represented by its canonical row basis."""

    __slots__ = ("field", "ambient", "basis", "dim")

    def __init__(self, field, ambient: int, basis: Matrix):
        # `basis` must already be in reduced echelon form with no zero rows;
        # use span() to build a Subspace from an arbitrary generating matrix.
        self.field = field
        self.ambient = ambient
        self.basis = basis
        self.dim = basis.rows

    def _check_compatible(self, other: "Subspace"):
        if self.field != other.field or self.ambient != other.ambient:
            raise ShapeError("subspaces live in different ambient spaces")

    def is_full(self) -> bool:
        return self.dim == self.ambient

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.field == other.field
            and self.ambient == other.ambient
            and self.basis == other.basis
        )

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash((self.ambient, self.basis))

    def __repr__(self):
        return f"Subspace(dim {self.dim} of {self.field}^{self.ambient})"

    # -- calculus ---------------------------------------------------------------

    def sum(self, other: "Subspace") -> "Subspace":
        """Smallest subspace containing both operands."""
        self._check_compatible(other)
        if self.dim == 0:
            return other
        if other.dim == 0:
            return self
        return span(vstack([self.basis, other.basis]))

    def intersect(self, other: "Subspace") -> "Subspace":
        """Intersection via the Zassenhaus block construction."""
        self._check_compatible(other)
        l = self.ambient
        if self.dim == 0 or other.dim == 0:
            return _zero(self.field, l)
        rows = [list(self.basis.row(i)) * 2 for i in range(self.dim)]
        rows += [list(other.basis.row(i)) + [0] * l for i in range(other.dim)]
        _row_reduce(rows, self.field, reduced=True)
        inter = [r[l:] for r in rows if not any(r[:l]) and any(r[l:])]
        return span(Matrix.from_rows(self.field, inter) if inter else Matrix.zeros(self.field, 0, l))

    def leq(self, other: "Subspace") -> bool:
        """Inclusion test: every vector of self lies in other."""
        self._check_compatible(other)
        if self.dim > other.dim:
            return False
        if self.dim == 0:
            return True
        return mat_rank(vstack([other.basis, self.basis])) == other.dim

    def compare(self, other: "Subspace") -> Relation:
        """Exact relation between two subspaces."""
        self._check_compatible(other)
        if self.basis == other.basis:
            return Relation.EQUAL
        if self.leq(other):
            return Relation.A_IN_B
        if other.leq(self):
            return Relation.B_IN_A
        return Relation.INCOMPARABLE

    def apply(self, c: Matrix) -> "Subspace":
        """Image of the subspace under right multiplication by c."""
        if c.field != self.field:
            raise ShapeError("operator field mismatch")
        if c.rows != self.ambient or c.cols != self.ambient:
            raise ShapeError(
                f"operator must be {self.ambient}x{self.ambient}, got {c.rows}x{c.cols}"
            )
        if self.dim == 0:
            return self
        return span(self.basis @ c)

    def invariance_witness(self, c: Matrix) -> Matrix:
        """Matrix P with basis @ c == P @ basis, when the image stays inside.

        P exists iff apply(c) is contained in the subspace, and is invertible
        iff the image equals the subspace.  Raises NotInvariant otherwise.
        """
        if c.field != self.field:
            raise ShapeError("operator field mismatch")
        if c.rows != self.ambient or c.cols != self.ambient:
            raise ShapeError(
                f"operator must be {self.ambient}x{self.ambient}, got {c.rows}x{c.cols}"
            )
        image = self.basis @ c
        witness = represent_rows(image, self.basis)
        if witness is None:
            raise NotInvariant("operator image leaves the subspace")
        return witness


def _zero(field, ambient: int) -> Subspace:
    return Subspace(field, ambient, Matrix.zeros(field, 0, ambient))


def span(m: Matrix) -> Subspace:
    """Row space of a matrix in canonical (reduced echelon) form."""
    rows = m.row_lists()
    _row_reduce(rows, m.field, reduced=True)
    kept = [r for r in rows if any(r)]
    basis = (
        Matrix.from_rows(m.field, kept) if kept else Matrix.zeros(m.field, 0, m.cols)
    )
    return Subspace(m.field, m.cols, basis)


def full_space(field, ambient: int) -> Subspace:
    return Subspace(field, ambient, Matrix.identity(field, ambient))


def is_direct_sum(parts) -> bool:
    """True iff the iterated sum of the parts has dimension equal to the sum
    of their dimensions (equivalently, all pairwise intersections are trivial
    and the parts are jointly independent)."""
    parts = list(parts)
    if not parts:
        raise ShapeError("is_direct_sum needs at least one part")
    field, ambient = parts[0].field, parts[0].ambient
    for s in parts[1:]:
        if s.field != field or s.ambient != ambient:
            raise ShapeError("subspaces live in different ambient spaces")
    total = sum(s.dim for s in parts)
    if total == 0:
        return True
    if total > ambient:
        return False
    stacked = vstack([s.basis for s in parts if s.dim])
    return mat_rank(stacked) == total


def sum_all(parts) -> Subspace:
    """Iterated sum of a nonempty sequence of subspaces."""
    parts = list(parts)
    if not parts:
        raise ShapeError("sum_all needs at least one part")
    field, ambient = parts[0].field, parts[0].ambient
    for s in parts[1:]:
        if s.field != field or s.ambient != ambient:
            raise ShapeError("subspaces live in different ambient spaces")
    nonzero = [s.basis for s in parts if s.dim]
    if not nonzero:
        return _zero(field, ambient)
    return span(vstack(nonzero))
