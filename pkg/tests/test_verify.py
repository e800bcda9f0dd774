from fractions import Fraction as F

import numpy as np
import pytest

from heckedirac.verify import (SUITES, Check, Setup, conjugation_formula_residual, jsonable, run_suites,
                               hecke_suite, spin_suite, cohomology_suite, differential_suite, tt_commutator_formula)

from conftest import hecke, root_system


def setup(label, short=None, long=None):
    rs = root_system(label)
    c = rs.parameters() if short is None else rs.parameters({"short": short, "long": long})
    return Setup(rs, c, seed=0)


def assert_all_pass(checks):
    bad = [(c.name, c.residual) for c in checks if c.status == "fail"]
    assert not bad, bad


@pytest.mark.parametrize("label,short,long", [("A1", None, None), ("A2", None, None), ("B2", None, None),
                                              ("G2", None, None), ("B2", 1, 2), ("G2", 1, 2)])
def test_hecke_suite_exact(label, short, long):
    checks = hecke_suite(setup(label, short, long))
    assert len(checks) == 10
    assert all(c.status == "pass" and c.residual == 0 for c in checks), [(c.name, c.residual) for c in checks]


@pytest.mark.parametrize("label", ["A1", "A2", "B2", "G2", "A3"])
def test_spin_suite(label):
    assert_all_pass(spin_suite(setup(label)))


@pytest.mark.parametrize("label", ["A1", "A2", "B2"])
def test_cohomology_suite(label):
    checks = cohomology_suite(setup(label))
    assert_all_pass(checks)
    assert {c.name for c in checks} >= {"isotypic_square", "vogan_length_orbit"}


def test_differential_suite_a1():
    checks = differential_suite(setup("A1"))
    assert len(checks) == 9
    assert all(c.status == "pass" for c in checks)


def test_float_root_system_skips_exact_checks():
    st = setup("I2(5)")
    assert not st.exact
    two = hecke_suite(st)
    assert {c.status for c in two} == {"skipped"}
    assert all(c.data["reason"] for c in two)
    assert {c.status for c in differential_suite(st)} == {"skipped"}
    assert_all_pass(spin_suite(st))


def test_conjugation_and_commutator_helpers():
    H = hecke("B2")
    assert conjugation_formula_residual(H) == 0
    e = [tuple(F(int(i == j)) for j in range(2)) for i in range(2)]
    f = tt_commutator_formula(H, e[0], e[1])
    assert not f.is_zero() and (f + tt_commutator_formula(H, e[1], e[0])).is_zero()
    assert tt_commutator_formula(H, e[0], e[0]).is_zero()
    T0, T1 = H.T_omega(e[0]), H.T_omega(e[1])
    assert (T0 * T1 - T1 * T0 - f).is_zero()


def test_check_to_json():
    rec = Check("x", "anchor", "pass", F(1, 3), {"v": np.float64(0.1), "q": F(2, 4), "z": 1 + 0j}).to_json()
    assert rec == {"name": "x", "anchor": "anchor", "status": "pass", "residual": "1/3",
                   "data": {"v": 0.1, "q": "1/2", "z": 1.0}}
    assert Check("y", "a", "fail", 1.23456789e-13).to_json()["residual"] == 1.235e-13


def test_jsonable():
    assert jsonable({1: [F(3, 1), np.int64(2), np.bool_(True)]}) == {"1": ["3", 2, True]}
    assert jsonable(complex(1, 2)) == [1.0, 2.0]


def test_run_suites_records_suite():
    recs = run_suites(setup("A1"), ["spin"])
    assert recs and {r["suite"] for r in recs} == {"spin"}
    assert list(SUITES) == ["hecke", "spin", "cohomology", "differential"]


def test_setup_random_nus_seeded():
    a, b = setup("A2"), setup("A2")
    assert a.random_nus(3) == b.random_nus(3)
    assert a.chiralities() == [1] and setup("A1").chiralities() == [1, -1]
