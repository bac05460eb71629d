import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp, mpf

from thetamix.constants import PhysicalConstants, derive_all
from thetamix.mixing import (
    ChargeEnergyPair,
    ChargeMassPair,
    MixingError,
    boost_exact,
    boost_invariant,
    boost_linear,
    energy_per_charge,
    linear_vs_exact_residual,
)
from thetamix.units import CHARGE, ENERGY, MASS, Quantity

PC = PhysicalConstants.default()
DC = derive_all(PC)
W = energy_per_charge(DC, PC).value  # erg per statC
M_ELECTRON = 9.1093837015e-28
M_PROTON = 1.6726e-24
TEST_PAIR = ChargeMassPair(Quantity(1.0, MASS), Quantity(1e-4, CHARGE))


def pair(E, Q):
    return ChargeEnergyPair(Quantity(E, ENERGY), Quantity(Q, CHARGE))


def norm(s):
    """Euclidean size of a state once Q is expressed in erg."""
    return math.hypot(s.E.value, W * s.Q.value)


def dist(a, b):
    return math.hypot(a.E.value - b.E.value, W * (a.Q.value - b.Q.value))


def test_zero_theta_is_identity(pc, dc):
    s = pair(3.0, -2e-5)
    assert boost_exact(s, 0.0, dc, pc) == s


def test_ln2_boost_normalized(pc, dc):
    # cosh(ln 2) = 5/4, sinh(ln 2) = 3/4
    out = boost_exact(pair(W, 0.0), math.log(2.0), dc, pc)
    assert out.E.value / W == pytest.approx(1.25, rel=1e-15)
    assert out.Q.value == pytest.approx(0.75, rel=1e-15)


def test_electron_at_rest(pc, dc):
    c2 = pc.c.value**2
    theta = 1e-6
    out = boost_exact(pair(M_ELECTRON * c2, -pc.q.value), theta, dc, pc)
    mp.dps = 30
    # independent oracle: (ell q / (hbar c)) sinh(theta) m c^2 at 30 digits
    ell = mpf(DC.ell.value)
    expected = ell * mpf(pc.q.value) / (mpf(pc.hbar.value) * mpf(pc.c.value)) * mp.sinh(mpf(theta)) * mpf(M_ELECTRON) * mpf(pc.c.value) ** 2
    dq = out.Q.value - (-pc.q.value * math.cosh(theta))
    assert dq == pytest.approx(float(expected), rel=1e-9)
    # same shift from the linear map
    lin, deltas = boost_linear(ChargeMassPair(Quantity(M_ELECTRON, MASS), Quantity(-pc.q.value, CHARGE)), theta, dc)
    assert deltas.delta_e.value == pytest.approx(dq, rel=1e-9)


def test_invariant_examples(pc, dc):
    s = pair(1.25 * W, 0.75)
    assert boost_invariant(s, dc, pc).value / W**2 == pytest.approx(1.0, rel=1e-14)
    assert boost_invariant(s, dc, pc).dim == ENERGY**2
    assert boost_invariant(pair(7.0, 0.0), dc, pc).value == 49.0


def test_overflow_guard(pc, dc):
    with pytest.raises(MixingError, match="overflow"):
        boost_exact(pair(1.0, 0.0), 701.0, dc, pc)


states = st.builds(
    pair,
    st.floats(-1e6, 1e6).filter(lambda v: abs(v) > 1e-6),
    st.floats(-1e6, 1e6).map(lambda v: v / W),
)
thetas = st.floats(-5.0, 5.0)


# Tolerances are relative to the largest state norm in the chain: a boost
# stretches one light-cone component by e^|theta|, so rounding in a stored
# intermediate is only resolvable at that scale.
@settings(max_examples=300)
@given(states, thetas, thetas)
def test_group_law(s, t1, t2):
    b1 = boost_exact(s, t1, DC, PC)
    two = boost_exact(b1, t2, DC, PC)
    one = boost_exact(s, t1 + t2, DC, PC)
    assert dist(one, two) <= 1e-12 * max(norm(s), norm(b1), norm(one))


@settings(max_examples=300)
@given(states, thetas)
def test_inverse(s, t):
    b = boost_exact(s, t, DC, PC)
    back = boost_exact(b, -t, DC, PC)
    assert dist(back, s) <= 1e-12 * max(norm(s), norm(b))


@settings(max_examples=300)
@given(states, thetas)
def test_invariant_preserved(s, t):
    b = boost_exact(s, t, DC, PC)
    i0 = boost_invariant(s, DC, PC).value
    i1 = boost_invariant(b, DC, PC).value
    assert abs(i1 - i0) <= 1e-12 * max(norm(s), norm(b)) ** 2


def test_linear_zero_theta(dc):
    s = ChargeMassPair(Quantity(2.0, MASS), Quantity(3e-4, CHARGE))
    out, d = boost_linear(s, 0.0, dc)
    assert out == s
    assert d.delta_m.value == 0.0 and d.delta_e.value == 0.0


def test_linear_mass_to_charge(dc):
    out, _ = boost_linear(ChargeMassPair(Quantity(1.0, MASS), Quantity(0.0, CHARGE)), 1e-9, dc)
    assert out.e.value == pytest.approx(5.703983843823599e-13, rel=1e-14)
    assert out.m.value == 1.0


def test_linear_proton(pc, dc):
    theta = -5.0006e-10
    _, d = boost_linear(ChargeMassPair(Quantity(M_PROTON, MASS), Quantity(pc.q.value, CHARGE)), theta, dc)
    # theta m sqrt(kappa) and theta q / sqrt(kappa), evaluated by hand
    assert d.delta_e.value == pytest.approx(-4.7709e-37, rel=1e-4)
    assert d.delta_m.value == pytest.approx(-4.2109e-16, rel=1e-4)


def test_physical_pair_rejects_negative_mass():
    with pytest.raises(MixingError):
        ChargeMassPair.physical(-1.0, 0.0)
    assert ChargeMassPair.physical(1.0, 2.0).m.value == 1.0


@given(
    st.floats(-1e3, 1e3).filter(lambda v: abs(v) > 1e-3),
    st.floats(-1e-1, 1e-1).filter(lambda v: abs(v) > 1e-6),
    st.floats(-1.0, 1.0).filter(lambda v: abs(v) > 1e-6),
)
def test_delta_product_identity(m, e, theta):
    _, d = boost_linear(ChargeMassPair(Quantity(m, MASS), Quantity(e, CHARGE)), theta, DC)
    prod = d.delta_m.value * d.delta_e.value
    expected = theta * theta * m * e
    assert abs(prod - expected) <= 1e-15 * abs(expected)


def test_residual_zero_theta(pc, dc):
    assert linear_vs_exact_residual(TEST_PAIR, 0.0, dc, pc) == 0.0


@pytest.mark.parametrize("theta", [1e-2, 1e-3])
def test_residual_is_second_order(pc, dc, theta):
    ratio = linear_vs_exact_residual(TEST_PAIR, theta, dc, pc) / linear_vs_exact_residual(
        TEST_PAIR, theta / 2, dc, pc
    )
    assert 3.6 <= ratio <= 4.4


def test_residual_rounding_floor(pc, dc):
    assert linear_vs_exact_residual(TEST_PAIR, 1e-8, dc, pc) < 1e-15


def test_residual_needs_positive_mass(pc, dc):
    with pytest.raises(MixingError):
        linear_vs_exact_residual(ChargeMassPair(Quantity(0.0, MASS), Quantity(1.0, CHARGE)), 0.1, dc, pc)


@pytest.mark.parametrize("theta", [1e-1, 1e-2, 1e-3])
def test_linear_breaks_invariant_at_second_order(pc, dc, theta):
    c2 = pc.c.value**2
    s = pair(TEST_PAIR.m.value * c2, TEST_PAIR.e.value)
    lin, _ = boost_linear(TEST_PAIR, theta, dc)
    i0 = boost_invariant(s, dc, pc).value
    i1 = boost_invariant(pair(lin.m.value * c2, lin.e.value), dc, pc).value
    # the linear map has determinant 1 - theta^2, so I' = (1 - theta^2) I exactly
    assert i1 - i0 == pytest.approx(-(theta**2) * i0, rel=1e-6)
