from fractions import Fraction as F

import pytest

from heckedirac.rootsys import (ConfigurationError, build_root_system, coreflect, dual_inner_product,
                                parse_series, reflect)

from conftest import root_system

CRYSTAL = ["A1", "A2", "A3", "B2", "B3", "C3", "D4", "G2", "F4"]


@pytest.mark.parametrize("label,count", [("A1", 2), ("A2", 6), ("B3", 18), ("C3", 18), ("D4", 24),
                                         ("G2", 12), ("F4", 48), ("I2(5)", 10)])
def test_root_counts(label, count):
    rs = root_system(label)
    assert len(rs.roots) == count
    assert len(rs.positive_roots) == count // 2


def test_a2_gram_standard_normalization():
    rs = root_system("A2")
    assert rs.gram[0][0] == 2 and rs.gram[1][1] == 2 and rs.gram[0][1] == -1


def test_g2_two_lengths():
    rs = root_system("G2")
    assert sorted(set(rs.root_class)) == ["long", "short"]


@pytest.mark.parametrize("label", CRYSTAL)
def test_pairing_is_two_and_reduced(label):
    rs = root_system(label)
    for a, av in zip(rs.roots, rs.coroots):
        assert rs.pair(a, av) == 2
        assert not rs.is_root(tuple(2 * x for x in a))


@pytest.mark.parametrize("label", CRYSTAL)
def test_length_product_is_four(label):
    rs = root_system(label)
    for a, av in zip(rs.roots, rs.coroots):
        assert dual_inner_product(rs, a, a) * rs.coinner(av, av) == 4


@pytest.mark.parametrize("label", ["A2", "B2", "G2", "F4"])
def test_long_coroots_have_norm_two(label):
    rs = root_system(label)
    assert max(rs.coinner(av, av) for av in rs.coroots) == 2


@pytest.mark.parametrize("label", ["A2", "B2", "G2", "B3"])
def test_reflections_permute_roots_and_adjointness(label):
    rs = root_system(label)
    for i in range(len(rs.roots)):
        a = rs.roots[i]
        for v in rs.roots:
            r = reflect(rs, a, v)
            assert rs.is_root(r)
            assert reflect(rs, a, r) == v
        for v in rs.roots:
            for w in rs.coroots:
                # (v, s w) = (s v, w)
                assert rs.pair(v, coreflect(rs, a, w)) == rs.pair(reflect(rs, a, v), w)


def test_w_invariance_of_inner_product():
    rs = root_system("B2")
    for a in rs.roots:
        for b in rs.roots:
            for c in rs.roots:
                assert rs.inner(reflect(rs, c, a), reflect(rs, c, b)) == rs.inner(a, b)


def test_a2_reflection_examples():
    rs = root_system("A2")
    a1, a2 = rs.roots[rs.simple_indices[0]], rs.roots[rs.simple_indices[1]]
    theta = tuple(x + y for x, y in zip(a1, a2))
    assert reflect(rs, a1, a2) == theta
    assert reflect(rs, theta, a1) == tuple(-x for x in a2)
    assert reflect(rs, a1, a1) == tuple(-x for x in a1)
    assert dual_inner_product(rs, a1, a1) == 2


def test_reflect_rejects_non_root():
    rs = root_system("A2")
    with pytest.raises(ValueError):
        reflect(rs, (F(1), F(1, 2)), rs.roots[0])


def test_parameters_constant_on_orbits():
    rs = root_system("B2")
    c = rs.parameters({"long": 1, "short": 2})
    # reflections preserve the parameter
    for i, a in enumerate(rs.roots):
        for b in rs.roots:
            assert c(rs.index(reflect(rs, b, a))) == c(i)
    with pytest.raises(ConfigurationError):
        rs.parameters({"medium": 1})


def test_simply_laced_ignores_short():
    rs = root_system("A2")
    assert rs.parameters({"short": 5}).values == {"long": 1}


@pytest.mark.parametrize("bad", [("A", 0), ("B", 1), ("D", 2), ("E", 6), ("G2", 3)])
def test_unsupported_raises(bad):
    with pytest.raises(ConfigurationError):
        build_root_system(*bad)


def test_parse_series_forms():
    assert parse_series("B2") == ("B", 2, None)
    assert parse_series("b", 3) == ("B", 3, None)
    assert parse_series("I2(5)") == ("I2", 2, 5)
    assert parse_series("I2", m=7) == ("I2", 2, 7)


def test_i2_is_float_only():
    rs = root_system("I2(5)")
    assert not rs.exact and not rs.crystallographic
    assert root_system("A2").exact


def test_ambient_round_trip_and_span_check():
    rs = root_system("A2")
    nu = rs.from_ambient((1, 0, -1))
    assert rs.to_ambient(nu) == (1, 0, -1)
    assert rs.inner(nu, nu) == 2
    with pytest.raises(ConfigurationError):
        rs.from_ambient((1, 1, 1))
    with pytest.raises(ConfigurationError):
        rs.from_ambient((1, 0))


def test_json_export_uses_fraction_strings():
    data = root_system("B2").to_json()
    flat = str(data)
    assert "Fraction" not in flat
