"""Shared fixtures: small fields and search-produced (code, scheme) pairs."""

import itertools
import random

import pytest

from msrlab import (
    Code,
    CodeParams,
    FieldSpec,
    Matrix,
    RepairScheme,
    SearchConfig,
    search_codes,
)
from msrlab.search import _iter_exhaustive


@pytest.fixture(scope="session")
def gf2():
    return FieldSpec(2)


@pytest.fixture(scope="session")
def gf3():
    return FieldSpec(3)


@pytest.fixture(scope="session")
def gf5():
    return FieldSpec(5)


@pytest.fixture(scope="session")
def gf4():
    return FieldSpec(2, 2, 0x7)


def first_found(field, l, r, k, limit):
    """First `limit` valid pairs in deterministic DFS emission order."""
    counter = [0]
    return list(itertools.islice(_iter_exhaustive(
        SearchConfig(field, l, r, k), 0, 1, counter), limit))


@pytest.fixture(scope="session")
def fixture_pairs(gf2, gf3, gf5):
    """Curated valid (code, scheme) pairs per (field, k), via exhaustive search."""
    out = {}
    for field, name in ((gf2, 2), (gf3, 3), (gf5, 5)):
        for k in (1, 2, 3):
            pairs = first_found(field, 2, 2, k, limit=8)
            out[(name, k)] = pairs
    return out


def make_tensor_fixture(field):
    """Hand-built {n=6, k=4, l=4, r=2} code with block repair structure.

    The ambient space is a tensor product of two planes; nodes 1-2 act on
    the left factor, nodes 3-4 on the right.  Eigenvalue-disjoint factors
    keep all cross differences invertible, so the code is MDS, and the two
    node pairs give two spanning partition blocks.
    """
    def kron(a, b):
        rows = []
        for i in range(a.rows):
            for ii in range(b.rows):
                row = []
                for j in range(a.cols):
                    for jj in range(b.cols):
                        row.append(field.mul(a.entries[i * a.cols + j],
                                             b.entries[ii * b.cols + jj]))
                rows.append(row)
        return Matrix.from_rows(field, rows)

    i2 = Matrix.identity(field, 2)
    m1 = Matrix.from_rows(field, [[1, 1], [0, 1]])
    m2 = Matrix.from_rows(field, [[1, 0], [1, 1]])
    n1 = Matrix.from_rows(field, [[2, 1], [0, 2]])
    n2 = Matrix.from_rows(field, [[2, 0], [1, 2]])
    enc2 = (kron(m1, i2), kron(m2, i2), kron(i2, n1), kron(i2, n2))
    params = CodeParams(field, 6, 4, 2, 4)
    code = Code(params, [(Matrix.identity(field, 4),) * 4, enc2])

    def kv(u, v):
        return tuple(field.mul(x, y) for x in u for y in v)

    e1, e2 = (1, 0), (0, 1)
    scheme = RepairScheme.constant([
        Matrix.from_rows(field, [kv(e1, e1), kv(e1, e2)]),
        Matrix.from_rows(field, [kv(e2, e1), kv(e2, e2)]),
        Matrix.from_rows(field, [kv(e1, e1), kv(e2, e1)]),
        Matrix.from_rows(field, [kv(e1, e2), kv(e2, e2)]),
    ])
    return code, scheme


@pytest.fixture(scope="session")
def tensor_fixture(gf5):
    return make_tensor_fixture(gf5)


def random_invertible(field, n, rng):
    while True:
        m = Matrix(field, n, n, [rng.randrange(field.q) for _ in range(n * n)])
        if m.rank() == n:
            return m


def random_code(field, n, k, l, rng, normalized=False):
    r = n - k
    params = CodeParams(field, n, k, r, l)
    enc = []
    for u in range(r):
        if normalized and u == 0:
            enc.append(tuple(Matrix.identity(field, l) for _ in range(k)))
        else:
            enc.append(tuple(random_invertible(field, l, rng) for _ in range(k)))
    return Code(params, enc)


@pytest.fixture
def rng():
    return random.Random(20240811)
