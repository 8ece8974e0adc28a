import random

import pytest

from kummercert.cohomology import random_unimodular
from kummercert.jordan import (
    JordanType,
    NotUnipotentError,
    direct_sum,
    jordan_type_unipotent,
    realize,
    tensor,
    types_up_to_dim,
    wedge,
)
from kummercert.linalg import BadDegreeError, FpMatrix, exterior_power, kronecker

N1 = JordanType(1, 0, 0)
N2 = JordanType(0, 1, 0)
N3 = JordanType(0, 0, 1)
EMPTY = JordanType(0, 0, 0)


def test_jordan_type_of_identity():
    assert jordan_type_unipotent(FpMatrix.identity(3, 5)) == JordanType(5, 0, 0)


def test_jordan_type_of_full_block():
    block = FpMatrix.from_rows(3, [[1, 1, 0], [0, 1, 1], [0, 0, 1]])
    assert jordan_type_unipotent(block) == N3


def test_jordan_type_rejects_non_unipotent():
    with pytest.raises(NotUnipotentError):
        jordan_type_unipotent(FpMatrix.from_rows(3, [[0, 1], [1, 0]]))


def test_jordan_type_over_f2():
    assert jordan_type_unipotent(FpMatrix.from_rows(2, [[1, 1], [0, 1]])) == N2


def test_jordan_type_empty():
    assert jordan_type_unipotent(FpMatrix.zeros(3, 0, 0)) == EMPTY


def test_realize_roundtrip():
    for t in types_up_to_dim(6):
        assert jordan_type_unipotent(realize(t)) == t


def test_conjugation_invariance():
    rng = random.Random(23)
    for t in types_up_to_dim(5):
        n = t.dimension
        if n == 0:
            continue
        p, pinv = random_unimodular(rng, n)
        conjugated = (p.reduce_mod(3) @ realize(t)) @ pinv.reduce_mod(3)
        assert jordan_type_unipotent(conjugated) == t


# ------------------------------------------------------------------ the ring


def test_direct_sum():
    assert direct_sum(N1, N3) == JordanType(1, 0, 1)
    assert direct_sum(EMPTY, N2) == N2
    four = EMPTY
    for _ in range(4):
        four = direct_sum(four, N2)
    assert four == JordanType(0, 4, 0)


def test_tensor_table():
    assert tensor(N1, N3) == N3
    assert tensor(N2, N2) == JordanType(1, 0, 1)
    assert tensor(N2, N3) == JordanType(0, 0, 2)
    assert tensor(N3, N3) == JordanType(0, 0, 3)


def test_tensor_ring_laws_exhaustive():
    small = types_up_to_dim(4)
    for a in small:
        assert tensor(N1, a) == a
        for b in small:
            assert tensor(a, b) == tensor(b, a)
            assert tensor(a, b).dimension == a.dimension * b.dimension
    tiny = types_up_to_dim(3)
    for a in tiny:
        for b in tiny:
            for c in tiny:
                assert tensor(a, tensor(b, c)) == tensor(tensor(a, b), c)
                assert tensor(a, direct_sum(b, c)) == direct_sum(tensor(a, b), tensor(a, c))


def test_wedge_of_four_planes():
    base = JordanType(0, 4, 0)
    assert wedge(base, 2) == JordanType(10, 0, 6)
    assert wedge(base, 3) == JordanType(0, 16, 8)
    assert wedge(base, 4) == JordanType(19, 0, 17)


def test_wedge_base_cases_against_matrices():
    # wedge^2 N2 = N1, wedge^2 N3 = N3, wedge^3 N3 = N1.
    for t, k in ((N2, 2), (N3, 2), (N3, 3)):
        lifted = realize(t).lift()
        observed = jordan_type_unipotent(exterior_power(lifted, k).reduce_mod(3))
        assert wedge(t, k) == observed
    assert wedge(N2, 2) == N1
    assert wedge(N3, 2) == N3
    assert wedge(N3, 3) == N1


def test_wedge_degenerate_degrees():
    assert wedge(EMPTY, 0) == N1
    assert wedge(N3, 0) == N1
    with pytest.raises(BadDegreeError):
        wedge(N2, 3)


def test_wedge_dimension_bookkeeping():
    from math import comb

    for t in types_up_to_dim(6):
        for k in range(t.dimension + 1):
            assert wedge(t, k).dimension == comb(t.dimension, k)


def test_oracle_agreement_spot_checks():
    rng = random.Random(29)
    pool = [t for t in types_up_to_dim(5) if t.dimension]
    for _ in range(10):
        a, b = rng.choice(pool), rng.choice(pool)
        assert tensor(a, b) == jordan_type_unipotent(kronecker(realize(a), realize(b)))
        k = rng.randint(0, a.dimension)
        lifted = realize(a).lift()
        assert wedge(a, k) == jordan_type_unipotent(exterior_power(lifted, k).reduce_mod(3))
