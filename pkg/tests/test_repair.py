"""Repair-scheme verification and the repair executor."""

import random

import pytest

from msrlab import (
    Code,
    CodeParams,
    Matrix,
    RepairScheme,
    erasure_decode,
    encode,
    node_contents,
    repair_node,
    verify_scheme,
)
from msrlab.errors import ParamError, SchemeInvalid, ShapeError
from conftest import random_invertible


def M(field, rows):
    return Matrix.from_rows(field, rows)


def swap_code(field):
    """k=1, r=2, l=2 code with the swap as second parity."""
    params = CodeParams(field, 3, 1, 2, 2)
    return Code(params, [
        (Matrix.identity(field, 2),),
        (M(field, [[0, 1], [1, 0]]),),
    ])


def test_scheme_validation(gf2):
    with pytest.raises(ShapeError):
        RepairScheme.constant([M(gf2, [[0, 0]])])  # rank 0
    with pytest.raises(ShapeError):
        RepairScheme.constant([M(gf2, [[1, 0]]), M(gf2, [[1, 0, 0]])])
    scheme = RepairScheme.constant([M(gf2, [[1, 0]])])
    assert scheme.beta == 1 and scheme.ambient == 2


def test_verify_swap_scheme_ok(gf2):
    code = swap_code(gf2)
    scheme = RepairScheme.constant([M(gf2, [[1, 0]])])
    report = verify_scheme(code, scheme)
    assert report.ok and not report.violations


def test_verify_identity_parity_fails(gf2):
    params = CodeParams(gf2, 3, 1, 2, 2)
    code = Code(params, [
        (Matrix.identity(gf2, 2),),
        (Matrix.identity(gf2, 2),),
    ])
    scheme = RepairScheme.constant([M(gf2, [[1, 0]])])
    report = verify_scheme(code, scheme)
    assert not report.ok
    assert [v.kind for v in report.violations] == ["span"]
    assert report.violations[0].i == 1


def test_verify_fixture_pairs(fixture_pairs):
    for (q, k), pairs in fixture_pairs.items():
        for code, scheme in pairs:
            assert verify_scheme(code, scheme).ok, (q, k)


def test_verify_requires_normalized(gf5, rng):
    params = CodeParams(gf5, 3, 1, 2, 2)
    c = M(gf5, [[2, 0], [0, 2]])
    code = Code(params, [(c,), (M(gf5, [[0, 1], [1, 0]]),)])
    scheme = RepairScheme.constant([M(gf5, [[1, 0]])])
    with pytest.raises(ParamError):
        verify_scheme(code, scheme)


def test_verify_alignment_violation_reported(gf5, fixture_pairs):
    # Corrupt a k=2 fixture: replace node 1's projection with one that the
    # cross matrix C(2,2) does not fix.
    code, scheme = fixture_pairs[(5, 2)][0]
    from msrlab import span

    lines = [M(gf5, [[1, c]]) for c in range(5)] + [M(gf5, [[0, 1]])]
    c22 = code.matrix(2, 2)
    bad = None
    for cand in lines:
        s = span(cand)
        if s.apply(c22) != s:
            bad = cand
            break
    assert bad is not None
    broken = RepairScheme.constant([bad, scheme.matrix_for(2)])
    report = verify_scheme(code, broken)
    assert not report.ok
    assert any(v.kind == "alignment" and v.i == 1 and v.j == 2 for v in report.violations)


def test_repair_swap_example(gf2):
    code = swap_code(gf2)
    scheme = RepairScheme.constant([M(gf2, [[1, 0]])])
    result = repair_node(code, scheme, 1, node_contents(code, [(1, 0)]))
    assert result.reconstructed == (1, 0)
    assert result.downloaded_symbols == 2
    zero = repair_node(code, scheme, 1, node_contents(code, [(0, 0)]))
    assert zero.reconstructed == (0, 0)


def test_repair_fixtures_match_truth(fixture_pairs):
    rng = random.Random(404)
    for (q, k), pairs in fixture_pairs.items():
        for code, scheme in pairs[:4]:
            p = code.params
            for _ in range(25):
                data = [tuple(rng.randrange(p.field.q) for _ in range(p.l))
                        for _ in range(p.k)]
                contents = node_contents(code, data)
                for i in range(1, p.k + 1):
                    res = repair_node(code, scheme, i, contents)
                    assert res.reconstructed == data[i - 1]
                    assert res.downloaded_symbols == (p.n - 1) * (p.l // p.r)


def test_repair_matches_erasure_decode(fixture_pairs):
    rng = random.Random(405)
    code, scheme = fixture_pairs[(5, 2)][0]
    p = code.params
    data = [tuple(rng.randrange(5) for _ in range(p.l)) for _ in range(p.k)]
    contents = node_contents(code, data)
    survivors = [2, 3]  # decode without node 1
    decoded = erasure_decode(code, survivors, [contents[nu - 1] for nu in survivors])
    repaired = repair_node(code, scheme, 1, contents)
    assert repaired.reconstructed == decoded[0]


def test_repair_tensor_fixture(tensor_fixture):
    code, scheme = tensor_fixture
    assert verify_scheme(code, scheme).ok
    rng = random.Random(406)
    p = code.params
    for _ in range(10):
        data = [tuple(rng.randrange(5) for _ in range(4)) for _ in range(4)]
        contents = node_contents(code, data)
        for i in range(1, 5):
            res = repair_node(code, scheme, i, contents)
            assert res.reconstructed == data[i - 1]
            assert res.downloaded_symbols == (p.n - 1) * p.beta == 10


def test_verify_invariant_under_row_basis_change(fixture_pairs, gf5):
    rng = random.Random(407)
    for code, scheme in fixture_pairs[(5, 2)][:3]:
        beta = code.params.l // code.params.r
        mats = []
        for i in range(1, code.params.k + 1):
            rmat = random_invertible(gf5, beta, rng)
            mats.append(rmat @ scheme.matrix_for(i))
        changed = RepairScheme.constant(mats)
        assert verify_scheme(code, changed).ok
        # and a failing scheme stays failing
    code, scheme = fixture_pairs[(5, 2)][0]
    broken = RepairScheme.constant([M(gf5, [[0, 1]]), M(gf5, [[0, 1]])])
    before = verify_scheme(code, broken).ok
    rmat = random_invertible(gf5, 1, rng)
    still_broken = RepairScheme.constant([rmat @ M(gf5, [[0, 1]]),
                                          rmat @ M(gf5, [[0, 1]])])
    assert verify_scheme(code, still_broken).ok == before


def test_constant_scheme_passes_per_helper(fixture_pairs):
    for (q, k), pairs in fixture_pairs.items():
        for code, scheme in pairs[:2]:
            ph = scheme.as_per_helper(code.params.n)
            assert ph.mode == "per_helper"
            assert verify_scheme(code, ph).ok, (q, k)


def test_per_helper_repair(fixture_pairs):
    rng = random.Random(408)
    code, scheme = fixture_pairs[(3, 2)][0]
    ph = scheme.as_per_helper(code.params.n)
    p = code.params
    data = [tuple(rng.randrange(3) for _ in range(p.l)) for _ in range(p.k)]
    contents = node_contents(code, data)
    for i in (1, 2):
        res = repair_node(code, ph, i, contents)
        assert res.reconstructed == data[i - 1]


def test_repair_scheme_invalid_raises(gf5, fixture_pairs):
    code, scheme = fixture_pairs[(5, 2)][0]
    from msrlab import span

    c22 = code.matrix(2, 2)
    bad = None
    for c in range(5):
        cand = M(gf5, [[1, c]])
        s = span(cand)
        if s.apply(c22) != s:
            bad = cand
            break
    broken = RepairScheme.constant([bad, scheme.matrix_for(2)])
    data = [(1, 2), (3, 4)]
    with pytest.raises(SchemeInvalid):
        repair_node(code, broken, 1, node_contents(code, data))


def test_repair_validation_errors(fixture_pairs):
    code, scheme = fixture_pairs[(5, 2)][0]
    contents = node_contents(code, [(0, 0), (0, 0)])
    with pytest.raises(ParamError):
        repair_node(code, scheme, 3, contents)  # parity node
    with pytest.raises(ShapeError):
        repair_node(code, scheme, 1, contents[:2])


def test_per_helper_scheme_shape_validation(gf2):
    mats = {(1, 2): M(gf2, [[1, 0]])}
    with pytest.raises(ShapeError):
        RepairScheme.per_helper(1, 3, mats)  # missing (1, 3)
