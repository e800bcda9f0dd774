import random
from fractions import Fraction as F

import numpy as np
import pytest

from heckedirac.clifford import coroot_spin_module
from heckedirac.dirac import build_dirac
from heckedirac.hmod import one_dimensional
from heckedirac.vogan import (TensorAlgebra, class_sum_elements, cubic_invariant, dbar_squared_residual,
                              differential_d, filtered_checks, graded_algebra, graded_decomposition_check,
                              graded_differential, koszul_cohomology, odd_derivation_failures,
                              reflection_kernel_failures, solve_zeta, span_rank, zeta_scalar_on,
                              zeta_vs_omega_wtilde)

from conftest import cover, hecke, root_system

EXACT = ["A1", "A2", "B2"]


def graded(label, cap=6):
    return graded_algebra(root_system(label), degree_cap=cap, cover=cover(label), W=cover(label).weyl)


@pytest.mark.parametrize("label", EXACT)
def test_dbar_squared_zero(label):
    assert dbar_squared_residual(graded(label), 3) == 0


@pytest.mark.parametrize("label", EXACT)
def test_odd_derivation(label):
    assert odd_derivation_failures(graded(label), 40, seed=3) == 0


@pytest.mark.parametrize("label", EXACT)
def test_reflections_in_kernel(label):
    assert reflection_kernel_failures(graded(label)) == 0


@pytest.mark.parametrize("label", EXACT)
def test_koszul_scalar_line(label):
    assert koszul_cohomology(root_system(label), 3, graded(label))["cohomology"] == [1, 0, 0]


def test_graded_differential_rejects_filtered():
    T = TensorAlgebra(hecke("A1"), cover("A1"))
    with pytest.raises(ValueError):
        graded_differential(T, T.one())


def test_differential_on_scalars_and_vectors():
    T = graded("A2")
    assert differential_d(T, T.one()) == {}
    v = T.from_clifford(T.cl.basis_vector(0))
    assert differential_d(T, v)  # D v + v D = 2 x_v (x) 1, nonzero
    assert T.parity(v) == 1 and T.degree(v) == 0


@pytest.mark.parametrize("label", EXACT)
def test_graded_decomposition(label):
    dec = graded_decomposition_check(root_system(label), 3, graded(label))
    assert dec["decomposition_holds"] and dec["group_span_in_kernel"]
    ref = dec["refinement"]
    assert ref["holds"] and ref["projectors_idempotent"] and ref["projectors_orthogonal"]
    assert ref["maps_triv_to_sgn"]
    assert ref["center_dim"] == sum(cover(label).genuine)  # rho(-g) = -rho(g)


@pytest.mark.parametrize("label", EXACT)
def test_filtered_checks(label):
    fc = filtered_checks(hecke(label), 3, cover(label))
    assert fc and all(fc.values()), fc


def test_projectors_orthogonal_idempotents():
    T = TensorAlgebra(hecke("A2"), cover("A2"))
    rng = random.Random(1)
    for _ in range(5):
        a = T.random_element(rng, 2)
        pt, ps = T.p_triv(a), T.p_sgn(a)
        assert T.p_triv(pt) == pt and T.p_sgn(ps) == ps
        assert T.p_sgn(pt) == {} and T.p_triv(ps) == {}


def test_class_sums_are_distinct():
    T = graded("A2")
    sums = class_sum_elements(T)
    assert span_rank([e for _, e, _ in sums]) == len(sums)


def test_rho_inverse():
    T = TensorAlgebra(hecke("B2"), cover("B2"))
    for g in range(len(T.cover.group.elements)):
        assert T.mul(T.rho(g), T.rho_inv(g)) == T.one()


# zeta


def test_zeta_of_one():
    H = hecke("A2")
    zr = solve_zeta(H, H.identity(), cover("A2"))
    assert zr.residual == 0 and zr.unique and zr.a == {} and zr.b == {}
    cov = cover("A2")
    identity_class = cov.group.class_of[cov.group.identity]
    assert zr.coefficients == {identity_class: 1}


@pytest.mark.parametrize("label,expected", [("A1", {0: F(1, 2)}), ("A2", {0: F(3, 2), 3: F(1, 2)})])
def test_zeta_casimir_exact(label, expected):
    H = hecke(label)
    zr = solve_zeta(H, H.casimir(), cover(label))
    assert zr.coefficients == expected
    assert zr.unique and zr.b_equals_a_feasible and zr.residual == 0
    cmp = zeta_vs_omega_wtilde(H, zr, cover(label))
    assert cmp["exact_match"] and cmp["max_difference"] == 0


def test_zeta_casimir_b2_irrational():
    H = hecke("B2")
    zr = solve_zeta(H, H.casimir(), cover("B2"))
    cmp = zeta_vs_omega_wtilde(H, zr, cover("B2"))
    assert cmp["max_difference"] < 1e-12 and zr.unique
    assert abs(complex(zr.coefficients[4]) - np.sqrt(2)) < 1e-12


def test_zeta_casimir_witness():
    # Omega (x) 1 = rho(zeta) - D^2, so a = -D/2 + ... is one admissible choice
    H = hecke("A1")
    zr = solve_zeta(H, H.casimir(), cover("A1"))
    T = TensorAlgebra(H, cover("A1"))
    D = T.dirac()
    lhs = T.from_hecke(H.casimir())
    rhs = T.add(T.mul(D, zr.a), T.mul(zr.b, D))
    # residual part is rho(zeta)
    diff = T.add(lhs, rhs, scales=[1, -1])
    assert all(k[0] in range(len(H.W.elements)) and k[1] == (0,) for k in diff)


def test_zeta_float_route_agrees():
    H = hecke("A2")
    exact = solve_zeta(H, H.casimir(), cover("A2"))
    flt = solve_zeta(H, H.casimir(), cover("A2"), force_float=True)
    assert not flt.exact and flt.residual < 1e-9
    for k, v in exact.coefficients.items():
        assert abs(flt.coefficients.get(k, 0.0) - float(v)) < 1e-9


def test_zeta_acts_as_central_character():
    H = hecke("A2")
    zr = solve_zeta(H, H.casimir(), cover("A2"))
    for kind in ("trivial", "steinberg"):
        X = one_dimensional(H, kind)
        ctx = build_dirac(X, coroot_spin_module(H.rs, 1), cover("A2"))
        Z = zeta_scalar_on(ctx, zr)
        z = complex(X.numeric(X.pi(H.casimir()))[0, 0])
        assert np.abs(Z - z * np.eye(ctx.dim)).max() < 1e-10


def test_zeta_cubic_a2_vanishes_on_kernel():
    H = hecke("A2", degree_cap=5)
    z = cubic_invariant(H)
    assert not z.is_zero()
    zr = solve_zeta(H, z, cover("A2"))
    assert zr.unique and zr.residual == 0 and zr.coefficients == {}
    for kind in ("trivial", "steinberg"):
        X = one_dimensional(H, kind)
        assert X.numeric(X.pi(z))[0, 0] == 0  # so chi_nu(z) = sigma(zeta(z)) = 0


def test_zeta_rejects_noncentral():
    H = hecke("A1")
    with pytest.raises(ValueError):
        solve_zeta(H, H.x(0), cover("A1"))
