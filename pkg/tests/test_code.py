"""Array-code model: encoding, MDS verification, decoding, normalization."""

import itertools
import random

import pytest

from msrlab import (
    Code,
    CodeParams,
    FieldSpec,
    Matrix,
    encode,
    erasure_decode,
    mds_check,
    normalize,
)
from msrlab.errors import ParamError, ShapeError, SingularError, SingularSystem
from conftest import random_code, random_invertible
from oracles import mds_by_decode


def scalar_code(field, rows):
    """Code with l = 1 from a grid of scalars (first row all ones = identity)."""
    r, k = len(rows), len(rows[0])
    params = CodeParams(field, k + r, k, r, 1)
    enc = [tuple(Matrix(field, 1, 1, [x]) for x in row) for row in rows]
    return Code(params, enc)


def test_params_validation(gf5):
    with pytest.raises(ParamError):
        CodeParams(gf5, 4, 2, 1, 1)  # n != k + r
    with pytest.raises(ParamError):
        CodeParams(gf5, 4, 1, 3, 2, ).beta  # r does not divide l: beta undefined
    assert not CodeParams(gf5, 4, 1, 3, 2).repairable
    p = CodeParams(gf5, 6, 4, 2, 4)
    assert (p.beta, p.B, p.alpha, p.d) == (2, 16, 4, 5)
    assert p.repairable


def test_code_validation(gf5):
    params = CodeParams(gf5, 3, 2, 1, 1)
    good = Matrix(gf5, 1, 1, [2])
    bad = Matrix(gf5, 1, 1, [0])
    with pytest.raises(SingularError):
        Code(params, [(good, bad)])
    with pytest.raises(ShapeError):
        Code(params, [(good,)])
    code = Code(params, [(good, good)])
    assert not code.normalized
    assert code.matrix(1, 2) == good


def test_encode_identity_example(gf5):
    params = CodeParams(gf5, 2, 1, 1, 2)
    code = Code(params, [(Matrix.identity(gf5, 2),)])
    assert encode(code, [(1, 2)]) == ((1, 2),)


def test_encode_zero_and_linearity(gf5, rng):
    code = random_code(gf5, 4, 2, 2, rng)
    zero = ((0, 0), (0, 0))
    assert encode(code, zero) == zero
    for _ in range(20):
        w1 = [tuple(rng.randrange(5) for _ in range(2)) for _ in range(2)]
        w2 = [tuple(rng.randrange(5) for _ in range(2)) for _ in range(2)]
        ws = [tuple(gf5.add(a, b) for a, b in zip(x, y)) for x, y in zip(w1, w2)]
        p1, p2, ps = encode(code, w1), encode(code, w2), encode(code, ws)
        for a, b, s in zip(p1, p2, ps):
            assert tuple(gf5.add(x, y) for x, y in zip(a, b)) == s


def test_encode_shape_errors(gf5, rng):
    code = random_code(gf5, 4, 2, 2, rng)
    with pytest.raises(ShapeError):
        encode(code, [(1, 2)])
    with pytest.raises(ShapeError):
        encode(code, [(1, 2, 3), (0, 1, 2)])


def test_mds_small_scalar_example(gf5):
    # 2x2 grid of scalars [[1,1],[1,2]]: every block selection invertible.
    code = scalar_code(gf5, [[1, 1], [1, 2]])
    assert mds_check(code).ok
    # Decode oracle agrees across all survivor pairs and all 25 data values.
    for a in range(5):
        for b in range(5):
            data = [(a,), (b,)]
            contents = list(data) + list(encode(code, data))
            for survivors in itertools.combinations(range(1, 5), 2):
                got = erasure_decode(code, survivors,
                                     [contents[nu - 1] for nu in survivors])
                assert got == tuple(data)


def test_mds_duplicate_columns_witness(gf5):
    code = scalar_code(gf5, [[1, 1], [2, 2]])
    report = mds_check(code)
    assert not report.ok
    assert report.witness == ((1, 2), (1, 2))


def test_mds_k1_always_ok(gf5, rng):
    for _ in range(10):
        code = random_code(gf5, 3, 1, 2, rng)
        assert mds_check(code).ok


def test_erasure_decode_systematic_survivors(gf5, rng):
    code = random_code(gf5, 4, 2, 2, rng)
    data = [(1, 2), (3, 4)]
    got = erasure_decode(code, [1, 2], data)
    assert got == tuple(tuple(w) for w in data)


def test_erasure_decode_singular_on_clash(gf5):
    code = scalar_code(gf5, [[1, 1], [2, 2]])
    data = [(1,), (2,)]
    contents = list(data) + list(encode(code, data))
    with pytest.raises(SingularSystem):
        erasure_decode(code, [3, 4], [contents[2], contents[3]])


def test_erasure_decode_validation(gf5, rng):
    code = random_code(gf5, 4, 2, 2, rng)
    with pytest.raises(ParamError):
        erasure_decode(code, [1], [(1, 2)])
    with pytest.raises(ParamError):
        erasure_decode(code, [1, 1], [(1, 2), (1, 2)])
    with pytest.raises(ParamError):
        erasure_decode(code, [1, 5], [(1, 2), (1, 2)])


def test_round_trip_all_survivor_sets(gf5, gf3, rng):
    for f in (gf5, gf3):
        for _ in range(5):
            code = random_code(f, 4, 2, 2, rng)
            if not mds_check(code).ok:
                continue
            data = [tuple(rng.randrange(f.q) for _ in range(2)) for _ in range(2)]
            contents = list(data) + list(encode(code, data))
            for survivors in itertools.combinations(range(1, 5), 2):
                got = erasure_decode(code, survivors,
                                     [contents[nu - 1] for nu in survivors])
                assert got == tuple(data)


def test_mds_equals_decode_oracle_small(gf2, gf3, rng):
    """Block-submatrix criterion against the decode oracle on random codes."""
    disagreements = 0
    for f in (gf2, gf3):
        for n in (3, 4, 5):
            for k in range(1, n):
                for l in (1, 2):
                    for _ in range(8):
                        code = random_code(f, n, k, l, rng)
                        if mds_check(code).ok != mds_by_decode(code):
                            disagreements += 1
    assert disagreements == 0


def test_normalize_idempotent_and_equivalent(gf5, rng):
    for _ in range(100):
        code = random_code(gf5, 4, 2, 2, rng)
        norm = normalize(code)
        assert norm.normalized
        assert normalize(norm) is norm
        assert mds_check(code).ok == mds_check(norm).ok


def test_normalize_preserves_parities(gf5, rng):
    # Encoding transformed data with the normalized code gives the original
    # parities: C(u,j) C(1,j)^-1 (C(1,j) W_j) = C(u,j) W_j.
    from msrlab import mat_vec

    for _ in range(20):
        code = random_code(gf5, 5, 2, 2, rng)
        norm = normalize(code)
        data = [tuple(rng.randrange(5) for _ in range(2)) for _ in range(2)]
        transformed = [mat_vec(code.matrix(1, j), data[j - 1]) for j in (1, 2)]
        assert encode(norm, transformed) == encode(code, data)


def test_already_normalized_identical(gf5, rng):
    code = random_code(gf5, 4, 2, 2, rng, normalized=True)
    assert normalize(code) is code
