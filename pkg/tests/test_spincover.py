from fractions import Fraction as F

import numpy as np
import pytest

from heckedirac.spincover import (c_sigma, c_sigma_tilde, exact_value, omega_w, omega_wtilde, r2_circ,
                                  reflection_indices)

from conftest import cover, root_system


@pytest.mark.parametrize("label,order", [("A1", 4), ("A2", 12), ("B2", 16), ("G2", 24), ("A3", 48)])
def test_orders(label, order):
    cv = cover(label)
    assert len(cv) == order == 2 * len(cv.weyl)
    kernel = sorted(g for g in range(order) if cv.proj[g] == 0)
    assert kernel == sorted([0, cv.minus_one])


def test_a1_cyclic_of_order_four():
    cv = cover("A1")
    f = cv.root_element(cv.rs.simple_indices[0])
    g = cv.group
    assert g.mul(f, f) == cv.minus_one
    assert g.mul(g.mul(f, f), g.mul(f, f)) == 0


def test_a2_classes_and_genuine_degrees():
    cv = cover("A2")
    assert len(cv.group.classes) == 6
    ct = cv.group.character_table()
    gen = sorted(d for d, flag in zip(ct.degrees, cv.genuine) if flag)
    assert gen == [1, 1, 2]


def test_projection_is_homomorphism():
    cv = cover("B2")
    g, W = cv.group, cv.weyl
    for a in range(len(g)):
        for b in range(len(g)):
            assert cv.proj[g.mul(a, b)] == W.mul(cv.proj[a], cv.proj[b])


def test_wrel_and_lift():
    for label in ("A2", "B2", "G2"):
        cv = cover(label)
        assert cv.wrel_residual() < 1e-12
        for w in range(len(cv.weyl)):
            assert cv.proj[cv.lift(w)] == w


def _genuine_values(label, c=None):
    cv = cover(label)
    c = c or cv.rs.parameters()
    return sorted(exact_value(c_sigma_tilde(cv, c, k)["formula"]) for k, g in enumerate(cv.genuine) if g)


def test_genuine_c_values_a1_a2():
    assert _genuine_values("A1") == [F(1, 2), F(1, 2)]
    assert _genuine_values("A2") == [F(1, 2), F(1, 2), F(2)]


@pytest.mark.parametrize("label", ["A1", "A2", "B2", "G2"])
def test_two_routes_agree_and_central(label):
    cv = cover(label)
    c = cv.rs.parameters()
    z = omega_wtilde(cv, c)
    assert z.central_residual() < 1e-10
    for k in range(len(cv.genuine)):
        r = c_sigma_tilde(cv, c, k)
        assert r["agreement"] < 1e-8 and r["off_scalar_residual"] < 1e-8


def test_a1_omega_wtilde_is_half():
    cv = cover("A1")
    z = omega_wtilde(cv, cv.rs.parameters())
    assert z.coeffs == {} and z.scalar == F(1, 2)


def test_a2_spin_value_two():
    cv = cover("A2")
    ct = cv.group.character_table()
    k = next(k for k, (d, g) in enumerate(zip(ct.degrees, cv.genuine)) if g and d == 2)
    assert abs(c_sigma_tilde(cv, cv.rs.parameters(), k)["eigenvalue"] - 2) < 1e-10


def test_w_level_values_a2():
    rs = root_system("A2")
    W = cover("A2").weyl
    c = rs.parameters()
    ct = W.character_table()
    vals = {}
    for k, (d, row) in enumerate(zip(ct.degrees, ct.values)):
        vals[(d, round(row[W.class_of[W.gen_index[0]]].real))] = exact_value(c_sigma(W, rs, c, k)["formula"])
    assert vals[(1, 1)] == 2  # trivial
    assert vals[(1, -1)] == 2  # sign
    assert vals[(2, 0)] == F(5, 4)
    assert omega_w(rs, W, c).central_residual() < 1e-12


def test_r2_circ_a2():
    rs = root_system("A2")
    a1, a2 = rs.simple_indices
    theta = rs.index(tuple(x + y for x, y in zip(rs.roots[a1], rs.roots[a2])))
    assert sorted(r2_circ(rs)) == sorted([(theta, a1), (theta, a2)])
    assert len(r2_circ(rs, include_diagonal=True)) == 5


def test_reflection_indices_are_involutions():
    rs = root_system("G2")
    W = cover("G2").weyl
    refl = reflection_indices(rs, W)
    for i in rs.positive_roots:
        assert W.mul(refl[i], refl[i]) == 0


def test_unequal_parameters_b2():
    rs = root_system("B2")
    vals = _genuine_values("B2", rs.parameters({"long": 1, "short": 2}))
    assert len(vals) == 2
    assert all(v > 0 for v in vals)


def test_exact_value_snaps():
    assert exact_value(0.5 + 1e-13) == F(1, 2)
    assert isinstance(exact_value(np.sqrt(2)), float)
