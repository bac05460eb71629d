from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from thetamix.constants import CHARGE_PER_MASS, PhysicalConstants, derive_all, derive_sigma
from thetamix.potential import (
    COUPLING_DIM,
    PairCoupling,
    ParticleSpecies,
    PotentialError,
    coupling_primed,
    coupling_unprimed,
    potential_energy,
    primed_remainder,
    radial_force,
)
from thetamix.units import ENERGY, LENGTH, Quantity

PC = PhysicalConstants.default()
DC = derive_all(PC)
K = PC.k_newton.value
Q_E = PC.q.value
M_EARTH = 5.9722e27
M_PROTON = 1.6726e-24
M_ELECTRON = 9.1093837015e-28


def species(m, e, label="p"):
    return ParticleSpecies.cgs(label, m, e)


def sig(x):
    return Quantity(x, CHARGE_PER_MASS)


def test_pure_newton():
    A = coupling_unprimed(species(2.0, 0.0), species(3.0, 0.0), sig(0.0), PC)
    assert A.A.value == -K * 6.0
    assert A.A.dim == COUPLING_DIM
    assert A.attractive


def test_pure_coulomb():
    A = coupling_unprimed(species(0.0, 2e-3), species(0.0, -5e-3), sig(0.0), PC)
    assert A.A.value == 2e-3 * -5e-3


def test_proton_earth_cross_term():
    proton = species(M_PROTON, Q_E, "proton")
    earth = species(M_EARTH, 0.0, "earth")
    sigma = -2.2670451214933886e-13
    A = coupling_unprimed(proton, earth, sig(sigma), PC).A.value
    newton = -K * M_PROTON * M_EARTH
    # sigma q M_E by hand (30-digit evaluation): -6.503177435784896e5 erg cm
    assert A - newton == pytest.approx(-650317.7435784896, rel=1e-10)
    assert A - newton < 0


def test_primed_at_zero_theta_matches_unprimed():
    p1, p2 = species(1.3, 2e-4), species(0.7, -1e-4)
    assert coupling_primed(p1, p2, 0.0, DC, PC) == coupling_unprimed(p1, p2, sig(0.0), PC)


def test_remainder_identity_symbolic():
    th, kap, k, m1, m2, e1, e2 = sp.symbols("theta kappa k m1 m2 e1 e2", real=True)
    s = sp.sqrt(kap)
    mp1, ep1 = m1 + th * e1 / s, e1 + th * m1 * s
    mp2, ep2 = m2 + th * e2 / s, e2 + th * m2 * s
    primed = ep1 * ep2 - k * mp1 * mp2
    sigma = th * (s - k / s)
    unprimed = e1 * e2 - k * m1 * m2 + sigma * (e1 * m2 + m1 * e2)
    assert sp.simplify(primed - unprimed - th**2 * (kap * m1 * m2 - k * e1 * e2 / kap)) == 0


@given(
    st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=5, max_size=5),
    st.floats(-2.0, 2.0),
)
def test_remainder_identity_exact_rationals(vals, theta):
    # exact brute-force expansion with rational stand-ins for sqrt(kappa) and k
    s, k = Fraction(DC.sqrt_kappa.value), Fraction(K)
    m1, m2 = abs(Fraction(vals[0])), abs(Fraction(vals[1]))
    e1, e2 = Fraction(vals[2]) * s, Fraction(vals[3]) * s
    t = Fraction(theta)
    primed = (e1 + t * m1 * s) * (e2 + t * m2 * s) - k * (m1 + t * e1 / s) * (m2 + t * e2 / s)
    unprimed = e1 * e2 - k * m1 * m2 + t * (s - k / s) * (e1 * m2 + m1 * e2)
    assert primed - unprimed == t * t * (s * s * m1 * m2 - k * e1 * e2 / (s * s))


def _random_pair(rng):
    s = DC.sqrt_kappa.value
    m1, m2 = 10 ** rng.uniform(-2, 2, 2)
    e1, e2 = rng.uniform(-3, 3, 2) * s * np.array([m1, m2])
    theta = rng.choice([-1, 1]) * rng.uniform(0.1, 1.0)
    return species(m1, e1), species(m2, e2), theta


def test_remainder_identity_floats():
    rng = np.random.default_rng(20261016)
    for _ in range(500):
        p1, p2, theta = _random_pair(rng)
        diff = coupling_primed(p1, p2, theta, DC, PC).A.value - coupling_unprimed(
            p1, p2, derive_sigma(DC, PC, theta), PC
        ).A.value
        rem = primed_remainder(p1, p2, theta, DC, PC).value
        # scale of the two remainder terms, immune to their mutual cancellation
        scale = theta**2 * (DC.kappa.value * p1.m.value * p2.m.value
                            + K * abs(p1.e.value * p2.e.value) / DC.kappa.value)
        assert abs(diff - rem) <= 1e-12 * scale


def test_electron_pair_tiny_theta():
    e = species(M_ELECTRON, -Q_E)
    theta = 1e-9
    Ap = coupling_primed(e, e, theta, DC, PC).A.value
    A = coupling_unprimed(e, e, derive_sigma(DC, PC, theta), PC).A.value
    rem = primed_remainder(e, e, theta, DC, PC).value
    assert abs(rem / A) < 1e-18
    assert abs(Ap - A) <= 4e-16 * abs(A)


@given(
    st.floats(0, 1e3), st.floats(-1, 1), st.floats(0, 1e3), st.floats(-1, 1), st.floats(-1e-3, 1e-3)
)
def test_exchange_symmetry(m1, e1, m2, e2, sigma):
    a = coupling_unprimed(species(m1, e1), species(m2, e2), sig(sigma), PC)
    b = coupling_unprimed(species(m2, e2), species(m1, e1), sig(sigma), PC)
    assert a == b


@given(st.floats(0, 1e3), st.floats(-1, 1), st.floats(0, 1e3), st.floats(-1, 1))
def test_zero_sigma_is_newton_plus_coulomb_bitwise(m1, e1, m2, e2):
    A = coupling_unprimed(species(m1, e1), species(m2, e2), sig(0.0), PC).A.value
    assert A == e1 * e2 - K * (m1 * m2)


def test_potential_examples():
    newton = PairCoupling(Quantity(-K, COUPLING_DIM))
    V = potential_energy(newton, Quantity(1.0, LENGTH))
    assert V.value == -6.67430e-8
    assert V.dim == ENERGY
    coul = PairCoupling(Quantity(Q_E * Q_E, COUPLING_DIM))
    assert potential_energy(coul, Quantity(1.0, LENGTH)).value == pytest.approx(2.30707754861661841e-19, rel=1e-15)
    r = Quantity(3.7, LENGTH)
    assert potential_energy(coul, 2.0 * r).value == pytest.approx(potential_energy(coul, r).value / 2, rel=1e-15)


@pytest.mark.parametrize("r", [0.0, -1.0])
def test_nonpositive_separation(r):
    A = PairCoupling(Quantity(1.0, COUPLING_DIM))
    with pytest.raises(PotentialError, match="non-positive separation"):
        potential_energy(A, Quantity(r, LENGTH))
    with pytest.raises(PotentialError):
        radial_force(A, Quantity(r, LENGTH))


def test_force_signs():
    newton = coupling_unprimed(species(1.0, 0.0), species(1.0, 0.0), sig(0.0), PC)
    assert radial_force(newton, Quantity(1.0, LENGTH)).value < 0
    zero = PairCoupling(Quantity(0.0, COUPLING_DIM))
    assert radial_force(zero, Quantity(1.0, LENGTH)).value == 0.0


@pytest.mark.parametrize("r", np.logspace(-2, 6, 9))
@pytest.mark.parametrize("A_val", [-K, Q_E**2, 0.37])
def test_force_is_minus_potential_gradient(r, A_val):
    A = PairCoupling(Quantity(A_val, COUPLING_DIM))
    h = 1e-5 * r
    dV = (potential_energy(A, Quantity(r + h, LENGTH)).value
          - potential_energy(A, Quantity(r - h, LENGTH)).value) / (2 * h)
    F = radial_force(A, Quantity(r, LENGTH)).value
    assert -dV == pytest.approx(F, rel=1e-8)
