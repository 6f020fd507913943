from fractions import Fraction as F
import math

import pytest
from hypothesis import given, strategies as st

from cylpdm.ambiguity import (
    NAMED_ORDERINGS,
    AmbiguityParameters,
    NamedOrderingSet,
    OrderingError,
    ell_tilde,
    ell_tilde_rescaled_special,
    reality_ok_coulomb,
    reality_ok_harmonic,
    zeta,
    zeta_minus_beta,
    zeta_minus_beta_expanded,
)

GW = NAMED_ORDERINGS["GoraWilliams"]
LK = NAMED_ORDERINGS["LiKuhn"]
BDD = NAMED_ORDERINGS["BenDanielDuke"]
ZK = NAMED_ORDERINGS["ZhuKroemer"]
MM = NAMED_ORDERINGS["MustafaMazharimousavi"]

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=64)


@st.composite
def orderings(draw):
    a, b = draw(fractions), draw(fractions)
    return AmbiguityParameters(a, b, -1 - a - b)


def test_named_sets_sum_to_minus_one():
    assert len(NAMED_ORDERINGS) == 5
    for p in NAMED_ORDERINGS.values():
        assert p.alpha + p.beta + p.gamma == -1
        assert all(isinstance(x, F) for x in (p.alpha, p.beta, p.gamma))


def test_named_lookup():
    assert NamedOrderingSet.get("ZhuKroemer").params == ZK
    assert [s.name for s in NamedOrderingSet.all()] == list(NAMED_ORDERINGS)
    with pytest.raises(OrderingError):
        NamedOrderingSet.get("Nope")


def test_rejects_bad_sum():
    with pytest.raises(OrderingError):
        AmbiguityParameters(0, 0, 0)


def test_explicit_rational_triple_accepted():
    p = AmbiguityParameters(F(-1, 3), F(-1, 3), F(-1, 3))
    assert zeta(p) == F(-1, 3) * F(-4, 3) * 2 - F(-1, 3) * F(2, 3)


@pytest.mark.parametrize("p, expected", [(ZK, F(3, 2)), (GW, F(2)), (BDD, F(0))])
def test_zeta_examples(p, expected):
    assert zeta(p) == expected


@pytest.mark.parametrize("p, expected", [(ZK, F(3, 2)), (MM, F(11, 8)), (GW, F(2))])
def test_zeta_minus_beta_examples(p, expected):
    assert zeta_minus_beta(p) == expected


@pytest.mark.parametrize(
    "p, m, expected", [(GW, 0, False), (ZK, 0, True), (GW, 2, True)]
)
def test_reality_harmonic_examples(p, m, expected):
    assert reality_ok_harmonic(p, m) is expected


@pytest.mark.parametrize(
    "p, m, expected", [(GW, 0, False), (BDD, 0, True), (GW, 1, True)]
)
def test_reality_coulomb_examples(p, m, expected):
    assert reality_ok_coulomb(p, m) is expected


def test_ell_tilde_examples():
    # BenDanielDuke: zeta - beta = 1 gives radicand 3/4 + 1/4 - 0 = 1
    e = ell_tilde(F(1, 2), 0, BDD)
    assert e.radicand == 1 and e.value == 1.0
    z = ell_tilde(F(1, 2), 0, ZK)
    assert z.radicand == 0 and z.value == 0.0 and z.near_critical
    g = ell_tilde(-1, 0, GW)
    assert g.radicand == F(-1, 4) and not g.is_real and g.value is None
    assert str(g) == "complex"
    assert ell_tilde(-1, 0, BDD).value == 0.5


def test_ell_tilde_rejects_negative_m():
    with pytest.raises(ValueError):
        ell_tilde(0.5, -1, BDD)


@pytest.mark.parametrize("m, p, E, expected", [(0, BDD, 0, 1), (0, ZK, 0, 0), (1, BDD, F(1, 2), 3)])
def test_rescaled_special_examples(m, p, E, expected):
    assert ell_tilde_rescaled_special(m, p, E) == expected


@given(orderings())
def test_zeta_minus_beta_matches_expansion(p):
    assert zeta_minus_beta(p) == zeta_minus_beta_expanded(p)


@given(orderings(), st.integers(0, 6), st.integers(0, 6))
def test_constraints_monotone_in_m(p, m1, m2):
    lo, hi = sorted((m1, m2))
    if reality_ok_harmonic(p, lo):
        assert reality_ok_harmonic(p, hi)
    if reality_ok_coulomb(p, lo):
        assert reality_ok_coulomb(p, hi)


@given(orderings(), st.integers(0, 6))
def test_ell_real_iff_constraint(p, m):
    assert ell_tilde(F(1, 2), m, p).is_real == reality_ok_harmonic(p, m)
    assert ell_tilde(-1, m, p).is_real == reality_ok_coulomb(p, m)


@given(orderings(), st.integers(0, 6))
def test_harmonic_constraint_is_stricter_than_coulomb(p, m):
    # (m^2 + 3)/2 <= 2 m^2 + 3/2 for every m
    if reality_ok_harmonic(p, m):
        assert reality_ok_coulomb(p, m)


@given(orderings(), st.integers(0, 4))
def test_ell_value_squares_to_radicand(p, m):
    e = ell_tilde(F(1, 2), m, p)
    if e.is_real:
        assert math.isclose(e.value**2, float(e.radicand), rel_tol=1e-12, abs_tol=1e-15)
