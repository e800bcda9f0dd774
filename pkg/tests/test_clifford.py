from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from heckedirac.clifford import (CliffordAlgebra, clifford_mul, coroot_algebra, coroot_spin_module, epsilon,
                                 f_alpha, pin_check, projection_matrix, spin_module, transpose)

from conftest import cover, root_system

C3 = CliffordAlgebra((F(1), F(1), F(1)))


def elements(alg):
    coef = st.fractions(min_value=-3, max_value=3, max_denominator=4)
    return st.dictionaries(st.integers(0, (1 << alg.n) - 1), coef, max_size=4).map(
        lambda d: sum((alg.blade(m, c) for m, c in d.items()), alg.scalar(0)))


def test_basic_products():
    w1, w2 = C3.basis_vector(0), C3.basis_vector(1)
    assert clifford_mul(w1, w1) == C3.scalar(-1)
    assert clifford_mul(w1, w2) == C3.blade(0b11)
    assert clifford_mul(w2, w1) == C3.blade(0b11, F(-1))
    b = C3.blade(0b11)
    assert clifford_mul(b, b) == C3.scalar(-1)


def test_transpose_and_epsilon_examples():
    b = C3.blade(0b11)
    assert transpose(b) == C3.blade(0b11, F(-1))
    assert epsilon(b) == b
    assert epsilon(C3.basis_vector(2)) == C3.blade(0b100, F(-1))


@settings(max_examples=40, deadline=None)
@given(elements(C3), elements(C3), elements(C3))
def test_algebra_laws(a, b, c):
    assert clifford_mul(clifford_mul(a, b), c) == clifford_mul(a, clifford_mul(b, c))
    assert transpose(clifford_mul(a, b)) == clifford_mul(transpose(b), transpose(a))
    assert epsilon(clifford_mul(a, b)) == clifford_mul(epsilon(a), epsilon(b))
    assert transpose(transpose(a)) == a
    assert epsilon(epsilon(a)) == a


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        clifford_mul(C3.scalar(1), CliffordAlgebra((F(1),)).scalar(1))


def test_pin_check_examples():
    w1 = C3.basis_vector(0)
    assert pin_check(w1)
    assert pin_check(C3.scalar(-1))
    assert not pin_check(C3.scalar(1) + w1)
    m = projection_matrix(C3.scalar(-1))
    assert [[int(x) for x in r] for r in m] == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


@pytest.mark.parametrize("label", ["A1", "A2", "B2", "G2", "B3"])
def test_f_alpha_square_and_projection(label):
    rs = root_system(label)
    alg = coroot_algebra(rs)
    for i in rs.positive_roots:
        f = cover(label).pin_vector(i)
        sq = clifford_mul(f, f) + alg.scalar(1)
        assert sq.max_abs() < 1e-12
        assert pin_check(f)
        M = alg.projection_coroot_matrix(f)
        R = rs.reflection_matrix(i)
        assert max(abs(complex(M[r][k] - R[r][k])) for r in range(rs.rank) for k in range(rs.rank)) < 1e-10


def test_a2_f_alpha_scalar_part():
    rs = root_system("A2")
    a1, a2 = rs.simple_indices
    prod = clifford_mul(f_alpha(rs, rs.roots[a1]), f_alpha(rs, rs.roots[a2]))
    assert abs(complex(prod.scalar_part()) - 0.5) < 1e-12


def test_f_relation_a2():
    rs = root_system("A2")
    cv = cover("A2")
    a1, a2 = rs.simple_indices
    theta = rs.index(tuple(x + y for x, y in zip(rs.roots[a1], rs.roots[a2])))
    lhs = clifford_mul(cv.pin_vector(a2), cv.pin_vector(a1)) + clifford_mul(cv.pin_vector(a1), cv.pin_vector(theta))
    assert lhs.max_abs() < 1e-12


def test_projection_is_homomorphism():
    rs = root_system("B2")
    alg = coroot_algebra(rs)
    cv = cover("B2")
    for a in rs.positive_roots:
        for b in rs.positive_roots:
            fa, fb = cv.pin_vector(a), cv.pin_vector(b)
            lhs = np.array(alg.projection_coroot_matrix(clifford_mul(fa, fb)), dtype=float)
            rhs = np.array(rs.reflection_matrix(a), dtype=float) @ np.array(rs.reflection_matrix(b), dtype=float)
            assert np.abs(lhs - rhs).max() < 1e-10


@pytest.mark.parametrize("n,dim", [(1, 1), (2, 2), (3, 2), (4, 4)])
def test_spin_module_invariants(n, dim):
    for ch in (1, -1):
        S = spin_module(n, ch)
        assert S.dim == dim
        assert S.relation_residual() < 1e-12
        assert S.hermitian_residual() < 1e-12
        assert abs(S.pin_character_norm() - 1) < 1e-8


def test_odd_rank_modules_inequivalent():
    Sp, Sm = spin_module(3, 1), spin_module(3, -1)
    vol_p = Sp.gamma_on[0] @ Sp.gamma_on[1] @ Sp.gamma_on[2]
    vol_m = Sm.gamma_on[0] @ Sm.gamma_on[1] @ Sm.gamma_on[2]
    # the volume element is central and acts by opposite scalars
    assert abs(np.trace(vol_p) + np.trace(vol_m)) < 1e-12 and abs(np.trace(vol_p)) > 1


def test_rank_two_product_traceless():
    S = spin_module(2)
    assert abs(np.trace(S.gamma_on[0] @ S.gamma_on[1])) < 1e-12


def test_coroot_spin_module_matches_gram():
    rs = root_system("G2")
    S = coroot_spin_module(rs)
    alg = coroot_algebra(rs)
    for i in range(rs.rank):
        for j in range(rs.rank):
            ai = alg.from_coroot(tuple(1 if k == i else 0 for k in range(rs.rank)))
            aj = alg.from_coroot(tuple(1 if k == j else 0 for k in range(rs.rank)))
            lhs = S.gamma(ai) @ S.gamma(aj) + S.gamma(aj) @ S.gamma(ai)
            assert np.abs(lhs + 2 * float(rs.gram[i][j]) * np.eye(S.dim)).max() < 1e-12


def test_spin_module_rejects_bad_input():
    with pytest.raises(ValueError):
        spin_module(0)
    with pytest.raises(ValueError):
        spin_module(2, 3)
