import json
import random
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kummercert.linalg import (
    BadDegreeError,
    ExactSolveError,
    FinAbGroup,
    FpMatrix,
    IntMatrix,
    cokernel,
    exterior_power,
    kernel_basis,
    kronecker,
    rank_fp,
    smith_normal_form,
    solve_exact,
)

FIXTURES = json.loads((Path(__file__).parent / "fixtures" / "matrices.json").read_text())


def fixture_matrix(name):
    return IntMatrix.from_json(json.dumps(FIXTURES[name]))


# ---------------------------------------------------------------- FinAbGroup


def test_group_validation():
    with pytest.raises(ValueError):
        FinAbGroup(-1)
    with pytest.raises(ValueError):
        FinAbGroup(0, (1,))
    with pytest.raises(ValueError):
        FinAbGroup(0, (4, 6))  # 4 does not divide 6


def test_group_canonicalization():
    assert FinAbGroup.from_factors(0, [2, 3]) == FinAbGroup(0, (6,))
    assert FinAbGroup.from_factors(0, [2, 2]) == FinAbGroup(0, (2, 2))
    assert FinAbGroup.from_factors(1, [4, 6]) == FinAbGroup(1, (2, 12))
    assert FinAbGroup(0, (3,)).multiple(3) == FinAbGroup(0, (3, 3, 3))
    assert FinAbGroup.free(2).direct_sum(FinAbGroup(0, (3,))) == FinAbGroup(2, (3,))


def test_group_rendering():
    assert str(FinAbGroup.zero()) == "0"
    assert str(FinAbGroup.free(1)) == "Z"
    assert str(FinAbGroup(81)) == "Z^81"
    assert str(FinAbGroup(1, (2, 6))) == "Z + Z/2 + Z/6"
    assert FinAbGroup(0, (9,)).torsion_primes() == frozenset({3})


# ------------------------------------------------------------------- F_p rank


def test_rank_identity():
    assert rank_fp(FpMatrix.identity(3, 4)) == 4


def test_rank_zero_matrix():
    assert rank_fp(FpMatrix.zeros(3, 3, 5)) == 0


def test_rank_requires_prime_modulus():
    with pytest.raises(ValueError):
        FpMatrix.identity(4, 2)


def test_rank_of_shifted_sigma_is_four():
    # Four size-2 Jordan blocks mod 3 force rank(s - 1) = 8 - 4 = 4.
    from kummercert.kummer import build_sigma_h1

    sigma = build_sigma_h1().matrix.reduce_mod(3)
    shifted = sigma - FpMatrix.identity(3, 8)
    assert rank_fp(shifted) == 4


def test_rank_product_bound():
    rng = random.Random(7)
    for _ in range(25):
        a = FpMatrix.from_rows(5, [[rng.randrange(5) for _ in range(4)] for _ in range(4)])
        b = FpMatrix.from_rows(5, [[rng.randrange(5) for _ in range(4)] for _ in range(4)])
        assert rank_fp(a @ b) <= min(rank_fp(a), rank_fp(b))


# ----------------------------------------------------------------------- SNF


def assert_snf_contract(m):
    u, d, v = smith_normal_form(m)
    assert u @ m @ v == d
    assert abs(u.det()) == 1
    assert abs(v.det()) == 1
    diag = [d.data[i][i] for i in range(min(d.rows, d.cols))]
    for i in range(d.rows):
        for j in range(d.cols):
            if i != j:
                assert d.data[i][j] == 0
    nonzero = [x for x in diag if x]
    assert all(x > 0 for x in nonzero)
    for a, b in zip(nonzero, nonzero[1:]):
        assert b % a == 0
    assert diag[len(nonzero):] == [0] * (len(diag) - len(nonzero))
    return u, d, v


def test_snf_coprime_diagonal():
    _, d, _ = smith_normal_form(fixture_matrix("coprime_diag"))
    assert [d.data[0][0], d.data[1][1]] == [1, 6]


def test_snf_zero_matrix():
    u, d, v = smith_normal_form(IntMatrix.zeros(2, 3))
    assert d == IntMatrix.zeros(2, 3)
    assert u == IntMatrix.identity(2)
    assert v == IntMatrix.identity(3)


def test_snf_already_diagonal():
    _, d, _ = smith_normal_form(fixture_matrix("multiplication_by_3"))
    assert d.data[0][0] == 3


def test_snf_empty():
    assert_snf_contract(IntMatrix.zeros(0, 0))
    assert_snf_contract(IntMatrix.zeros(0, 3))
    assert_snf_contract(IntMatrix.zeros(3, 0))


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 5),
    st.integers(1, 5),
    st.data(),
)
def test_snf_contract_randomized(rows, cols, data):
    entries = data.draw(
        st.lists(
            st.lists(st.integers(-30, 30), min_size=cols, max_size=cols),
            min_size=rows,
            max_size=rows,
        )
    )
    assert_snf_contract(IntMatrix(entries))


# ----------------------------------------------------------- cokernel, kernel


def test_cokernel_examples():
    assert cokernel(fixture_matrix("multiplication_by_3")) == FinAbGroup(0, (3,))
    assert cokernel(IntMatrix.identity(2)) == FinAbGroup.zero()
    # By-hand Smith form of [[1,1],[2,2]] is diag(1, 0): free of rank 1.
    assert cokernel(fixture_matrix("rank_one_pair")) == FinAbGroup.free(1)


def test_kernel_of_identity_is_empty():
    basis = kernel_basis(IntMatrix.identity(3))
    assert basis.shape == (3, 0)


def test_kernel_of_zero_is_everything():
    basis = kernel_basis(IntMatrix.zeros(2, 2))
    assert basis.shape == (2, 2)
    assert abs(basis.det()) == 1


def test_kernel_of_vanishing_norm():
    # 1 + T + T^2 = 0 for the companion matrix of x^2 + x + 1.
    t = fixture_matrix("rotation")
    norm = IntMatrix.identity(2) + t + t @ t
    assert norm.is_zero()
    assert kernel_basis(norm).shape == (2, 2)


def test_kernel_columns_are_killed_and_saturated():
    rng = random.Random(11)
    for _ in range(20):
        m = IntMatrix([[rng.randint(-9, 9) for _ in range(4)] for _ in range(3)])
        basis = kernel_basis(m)
        product = m @ basis
        assert product.is_zero()
        # Saturation: the basis extends to a basis of Z^4, so its own
        # Smith diagonal is all ones.
        _, d, _ = smith_normal_form(basis)
        diag = [d.data[i][i] for i in range(min(d.rows, d.cols))]
        assert all(x == 1 for x in diag)


# ----------------------------------------------------------------- exact solve


def test_solve_exact_roundtrip():
    rng = random.Random(13)
    for _ in range(20):
        a = IntMatrix([[rng.randint(-5, 5) for _ in range(3)] for _ in range(4)])
        x = IntMatrix([[rng.randint(-5, 5) for _ in range(2)] for _ in range(3)])
        b = a @ x
        solved = solve_exact(a, b)
        assert a @ solved == b


def test_solve_exact_rejects_non_integral():
    with pytest.raises(ExactSolveError):
        solve_exact(IntMatrix([[2]]), IntMatrix([[1]]))
    with pytest.raises(ExactSolveError):
        solve_exact(IntMatrix([[1], [1]]), IntMatrix([[1], [2]]))


# ------------------------------------------------------------- exterior power


def test_exterior_degree_zero():
    assert exterior_power(fixture_matrix("rotation"), 0) == IntMatrix([[1]])
    assert exterior_power(IntMatrix.zeros(0, 0), 0) == IntMatrix([[1]])


def test_exterior_top_is_determinant():
    m = IntMatrix([[2, 0], [0, 2]])
    assert exterior_power(m, 2) == IntMatrix([[4]])


def test_exterior_bad_degree():
    with pytest.raises(BadDegreeError):
        exterior_power(IntMatrix.identity(2), 3)


def test_exterior_functoriality():
    rng = random.Random(17)
    for _ in range(15):
        n = rng.randint(2, 6)
        a = IntMatrix([[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)])
        b = IntMatrix([[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)])
        for k in range(n + 1):
            assert exterior_power(a @ b, k) == exterior_power(a, k) @ exterior_power(b, k)


def test_exterior_preserves_order_three():
    rot = fixture_matrix("rotation")
    m = IntMatrix.block_diag([rot, rot, IntMatrix.identity(1)])
    for k in range(m.rows + 1):
        power = exterior_power(m, k)
        assert power.mat_pow(3).is_identity()


# --------------------------------------------------------------------- mixed


def test_kronecker_shape_and_order():
    a = FpMatrix.from_rows(3, [[1, 1], [0, 1]])
    b = FpMatrix.identity(3, 3)
    k = kronecker(a, b)
    assert (k.rows, k.cols) == (6, 6)
    # Left factor is the outer block index.
    assert k.array[0, 3] == 1 and k.array[0, 1] == 0


def test_lift_reduce_roundtrip():
    m = fixture_matrix("rotation")
    assert m.reduce_mod(3).lift() == IntMatrix([[0, 2], [1, 2]])


def test_empty_matrices_everywhere():
    empty = IntMatrix.zeros(0, 0)
    assert cokernel(empty) == FinAbGroup.zero()
    assert kernel_basis(empty).shape == (0, 0)
    assert rank_fp(FpMatrix.zeros(3, 0, 0)) == 0
    assert empty.det() == 1
    assert IntMatrix.zeros(2, 0) @ IntMatrix.zeros(0, 3) == IntMatrix.zeros(2, 3)
    assert cokernel(IntMatrix.zeros(2, 0)) == FinAbGroup.free(2)
