"""Subspace calculus: canonical spans, sum/intersection, invariance."""

import itertools
import random

import pytest

from msrlab import (
    FieldSpec,
    Matrix,
    Relation,
    full_space,
    is_direct_sum,
    mat_inverse,
    mat_rank,
    span,
    sum_all,
    vstack,
)
from msrlab.errors import NotInvariant, ShapeError
from oracles import all_subspace_bases, subspace_vectors


def M(field, rows):
    return Matrix.from_rows(field, rows)


def unit_span(field, l, i):
    return span(M(field, [[1 if j == i else 0 for j in range(l)]]))


def random_subspace(field, l, rng, max_rows=None):
    rows = rng.randrange(0, (max_rows or l) + 1)
    return span(Matrix(field, rows, l, [rng.randrange(field.q) for _ in range(rows * l)]))


def test_span_examples(gf5):
    s = span(M(gf5, [[1, 0], [2, 0]]))
    assert s.dim == 1 and s.basis == M(gf5, [[1, 0]])
    assert span(Matrix.zeros(gf5, 2, 2)).dim == 0
    inv = M(gf5, [[1, 2], [3, 2]])
    assert mat_rank(inv) == 2
    assert span(inv) == full_space(gf5, 2)


def test_span_canonical_identity(gf5, rng):
    # Same row space in scrambled order and scaling gives the same object.
    base = M(gf5, [[1, 0, 2], [0, 1, 3]])
    scrambled = M(gf5, [[0, 2, 6 % 5], [1, 0, 2], [1, 2, 3]])  # combos of the rows
    assert span(base) == span(scrambled)
    assert hash(span(base)) == hash(span(scrambled))


def test_sum_examples(gf2):
    e1, e2 = unit_span(gf2, 2, 0), unit_span(gf2, 2, 1)
    assert e1.sum(e2) == full_space(gf2, 2)
    assert e1.sum(e1) == e1


def test_sum_dim3_with_vector_enumeration(gf2):
    a = span(M(gf2, [[1, 1, 0, 0], [0, 0, 1, 0]]))
    b = span(M(gf2, [[0, 1, 1, 0]]))
    total = a.sum(b)
    assert total.dim == 3
    # Oracle: enumerate all 2^3 combinations of the three generators.
    members = subspace_vectors(vstack([a.basis, b.basis]).rref())
    gen = subspace_vectors(M(gf2, [[1, 1, 0, 0], [0, 0, 1, 0], [0, 1, 1, 0]]))
    assert members == gen
    assert len(gen) == 2 ** 3
    assert subspace_vectors(total.basis) == gen


def test_intersect_examples(gf2):
    l = 3
    a = span(M(gf2, [[1, 0, 0], [0, 1, 0]]))
    b = span(M(gf2, [[0, 1, 0], [0, 0, 1]]))
    assert a.intersect(b) == unit_span(gf2, 3, 1)
    assert a.intersect(a) == a


def test_intersect_random_gf3_matches_enumeration(gf3):
    rng = random.Random(7)
    for _ in range(100):
        a = random_subspace(gf3, 4, rng)
        b = random_subspace(gf3, 4, rng)
        got = a.intersect(b)
        common = subspace_vectors(a.basis) & subspace_vectors(b.basis)
        assert subspace_vectors(got.basis) == common


def test_intersect_all_pairs_small():
    """Zassenhaus against common-vector enumeration, exhaustively at l <= 3."""
    for q in (2, 3):
        f = FieldSpec(q)
        for l in (1, 2, 3):
            bases = []
            for d in range(l + 1):
                bases.extend(all_subspace_bases(f, l, d))
            spans = [span(b) for b in bases]
            members = {s: subspace_vectors(s.basis) for s in spans}
            for a in spans:
                for b in spans:
                    got = a.intersect(b)
                    assert subspace_vectors(got.basis) == (members[a] & members[b])


def test_modular_identity_random_pairs():
    configs = [
        (FieldSpec(2), 4),
        (FieldSpec(3), 4),
        (FieldSpec(5), 4),
        (FieldSpec(2, 2, 0x7), 4),
    ]
    for f, l in configs:
        rng = random.Random(f.q * 31 + l)
        for _ in range(1000):
            a = random_subspace(f, l, rng)
            b = random_subspace(f, l, rng)
            s = a.sum(b)
            i = a.intersect(b)
            assert a.dim + b.dim == s.dim + i.dim


def test_compare_examples(gf2):
    e1, e2 = unit_span(gf2, 2, 0), unit_span(gf2, 2, 1)
    both = e1.sum(e2)
    assert e1.compare(both) is Relation.A_IN_B
    assert both.compare(e1) is Relation.B_IN_A
    assert e1.compare(e2) is Relation.INCOMPARABLE
    reordered = span(M(gf2, [[0, 1], [1, 0]]))
    assert both.compare(reordered) is Relation.EQUAL


def test_compare_partial_order(gf3):
    rng = random.Random(11)
    subs = [random_subspace(gf3, 4, rng) for _ in range(60)]
    # seed nested chains: subspaces of subspaces
    for s in list(subs):
        if s.dim >= 1:
            rows = rng.randrange(1, s.dim + 1)
            coeffs = Matrix(gf3, rows, s.dim,
                            [rng.randrange(3) for _ in range(rows * s.dim)])
            subs.append(span(coeffs @ s.basis))
    for a in subs[:40]:
        assert a.leq(a)
    for _ in range(2000):
        a, b, c = rng.choice(subs), rng.choice(subs), rng.choice(subs)
        if a.leq(b) and b.leq(a):
            assert a == b
        if a.leq(b) and b.leq(c):
            assert a.leq(c)


def test_is_direct_sum_examples(gf2, gf5):
    e1, e2 = unit_span(gf2, 2, 0), unit_span(gf2, 2, 1)
    assert is_direct_sum([e1, e2])
    assert not is_direct_sum([e1, e1])
    assert is_direct_sum([e1])
    with pytest.raises(ShapeError):
        is_direct_sum([])
    with pytest.raises(ShapeError):
        is_direct_sum([e1, unit_span(gf5, 2, 0)])


def test_direct_sum_selections_independent():
    """From a direct sum, one nonzero vector per part is independent.

    Exhaustive over all selections for q <= 3, l <= 4; random otherwise.
    """
    for q, l, parts_rows in (
        (2, 4, [[[1, 0, 0, 0], [0, 1, 0, 0]], [[0, 0, 1, 0]], [[0, 0, 0, 1]]]),
        (3, 4, [[[1, 0, 1, 0], [0, 1, 0, 1]], [[0, 0, 1, 2]]]),
        (5, 3, [[[1, 0, 2]], [[0, 1, 1]], [[4, 1, 0]]]),
    ):
        f = FieldSpec(q)
        parts = [span(M(f, rows)) for rows in parts_rows]
        assert is_direct_sum(parts)
        choices = [sorted(subspace_vectors(p.basis) - {(0,) * l}) for p in parts]
        if q <= 3:
            combos = itertools.product(*choices)
        else:
            rng = random.Random(5)
            combos = ([rng.choice(c) for c in choices] for _ in range(100))
        for selection in combos:
            stacked = M(f, list(selection))
            assert mat_rank(stacked) == len(parts)


def _random_frame(field, l, s_dim, rng):
    """Random invertible frame; its top s_dim rows span the test subspace."""
    while True:
        t = Matrix(field, l, l, [rng.randrange(field.q) for _ in range(l * l)])
        if t.rank() == l:
            break
    sub = span(Matrix._raw(field, s_dim, l, t.entries[: s_dim * l]))
    return t, mat_inverse(t), sub


def _operator_fixing(field, l, s_dim, t, tinv, rng):
    """Random operator whose right action maps the frame subspace into itself.

    In frame coordinates the operator has a zero upper-right block, so rows
    starting in the subspace stay there; conjugating by the frame moves the
    construction to the standard coordinates.
    """
    rows = []
    for i in range(l):
        row = []
        for j in range(l):
            if i < s_dim and j >= s_dim:
                row.append(0)
            else:
                row.append(rng.randrange(field.q))
        rows.append(row)
    return tinv @ M(field, rows) @ t


def test_closure_under_sum_and_product(gf5):
    rng = random.Random(3)
    for _ in range(100):
        t, tinv, s = _random_frame(gf5, 4, 2, rng)
        c1 = _operator_fixing(gf5, 4, 2, t, tinv, rng)
        c2 = _operator_fixing(gf5, 4, 2, t, tinv, rng)
        assert s.apply(c1).leq(s)
        assert s.apply(c2).leq(s)
        assert s.apply(c1 + c2).leq(s)
        assert s.apply(c1 @ c2).leq(s)


def test_apply_examples(gf2):
    e1 = unit_span(gf2, 2, 0)
    ident = Matrix.identity(gf2, 2)
    swap = M(gf2, [[0, 1], [1, 0]])
    proj = M(gf2, [[1, 0], [0, 0]])
    assert e1.apply(ident) == e1
    assert e1.apply(swap) == unit_span(gf2, 2, 1)
    assert full_space(gf2, 2).apply(proj).dim == 1
    with pytest.raises(ShapeError):
        e1.apply(M(gf2, [[1, 0]]))


def test_invariance_witness_examples(gf5):
    s = span(M(gf5, [[1, 0]]))
    diag = M(gf5, [[2, 0], [0, 3]])
    p = s.invariance_witness(diag)
    assert p == M(gf5, [[2]])
    swap = M(gf5, [[0, 1], [1, 0]])
    with pytest.raises(NotInvariant):
        s.invariance_witness(swap)


def test_invariance_witness_random(gf3):
    rng = random.Random(17)
    for _ in range(150):
        t, tinv, s = _random_frame(gf3, 4, 2, rng)
        c = _operator_fixing(gf3, 4, 2, t, tinv, rng)
        p = s.invariance_witness(c)
        assert p @ s.basis == s.basis @ c
        # invertible witness exactly when the image fills the subspace
        image = s.apply(c)
        assert (mat_rank(p) == s.dim) == (image == s)


def test_sum_all(gf2):
    parts = [unit_span(gf2, 3, i) for i in range(3)]
    assert sum_all(parts) == full_space(gf2, 3)
    assert sum_all([parts[0]]) == parts[0]
