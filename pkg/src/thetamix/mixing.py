"""Energy/charge mixing under a hyperbolic angle theta.

Exact form, acting on an (E, Q) pair::

    E' = cosh(theta) E + (hbar c / (ell q)) sinh(theta) Q
    Q' = cosh(theta) Q + (ell q / (hbar c)) sinh(theta) E

It is a hyperbolic rotation once Q is expressed in energy units, so
``E^2 - (hbar c / (ell q))^2 Q^2`` is preserved.

Linearized nonrelativistic form, acting on (m, e) with E = m c^2::

    m' = m + theta e / sqrt(kappa)
    e' = e + theta m sqrt(kappa)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .constants import DerivedConstants, PhysicalConstants
from .units import CHARGE, ENERGY, MASS, Quantity, UnitsError

__all__ = [
    "MixingError",
    "ChargeEnergyPair",
    "ChargeMassPair",
    "LinearDeltas",
    "MAX_ABS_THETA",
    "energy_per_charge",
    "boost_exact",
    "boost_invariant",
    "boost_linear",
    "linear_vs_exact_residual",
]

# cosh overflows a double just above 710
MAX_ABS_THETA = 700.0


class MixingError(ValueError):
    pass


@dataclass(frozen=True)
class ChargeEnergyPair:
    E: Quantity
    Q: Quantity

    def __post_init__(self):
        self.E.require(ENERGY, "E")
        self.Q.require(CHARGE, "Q")


@dataclass(frozen=True)
class ChargeMassPair:
    m: Quantity
    e: Quantity

    def __post_init__(self):
        self.m.require(MASS, "m")
        self.e.require(CHARGE, "e")

    @classmethod
    def physical(cls, m_g: float, e_statC: float) -> ChargeMassPair:
        """Constructor for real particles: rejects negative mass."""
        if m_g < 0:
            raise MixingError(f"physical mass must be non-negative, got {m_g}")
        return cls(Quantity(m_g, MASS), Quantity(e_statC, CHARGE))


@dataclass(frozen=True)
class LinearDeltas:
    delta_m: Quantity
    delta_e: Quantity


def energy_per_charge(dc: DerivedConstants, pc: PhysicalConstants) -> Quantity:
    """hbar c / (ell q), in erg/statC."""
    return (pc.hbar * pc.c / (dc.ell * pc.q)).require(ENERGY / CHARGE, "hbar c/(ell q)")


def _check_theta(theta: float) -> float:
    theta = float(theta)
    if not math.isfinite(theta) or abs(theta) > MAX_ABS_THETA:
        raise MixingError(f"|theta| = {abs(theta)} exceeds {MAX_ABS_THETA}: cosh overflow")
    return theta


def boost_exact(
    s: ChargeEnergyPair, theta: float, dc: DerivedConstants, pc: PhysicalConstants
) -> ChargeEnergyPair:
    """Exact hyperbolic mixing of (E, Q) by ``theta``.

    With a = e^theta, b = e^-theta and u, v = E +/- wQ (w = hbar c / (ell q))
    the map is E' = (a u + b v) / 2, wQ' = (a u - b v) / 2, which is the
    cosh/sinh form term by term. It is evaluated in exact rational arithmetic
    and rounded once: the naive float form loses everything to cancellation
    between cosh and sinh when the state is close to light-like (E ~ -wQ).
    """
    theta = _check_theta(theta)
    w = energy_per_charge(dc, pc)
    # dimension audit of both mixing terms
    (w * s.Q).require(ENERGY, "w Q")
    (s.E / w).require(CHARGE, "E / w")
    a, b = Fraction(math.exp(theta)), Fraction(math.exp(-theta))
    wf = Fraction(w.value)
    E = Fraction(s.E.value)
    wQ = wf * Fraction(s.Q.value)
    au, bv = a * (E + wQ), b * (E - wQ)
    try:
        E_new = float((au + bv) / 2)
        Q_new = float((au - bv) / (2 * wf))
    except OverflowError:
        raise MixingError("non-finite result") from None
    return ChargeEnergyPair(Quantity(E_new, s.E.dim), Quantity(Q_new, s.Q.dim))


def boost_invariant(s: ChargeEnergyPair, dc: DerivedConstants, pc: PhysicalConstants) -> Quantity:
    """E^2 - (hbar c/(ell q))^2 Q^2, in erg^2."""
    qe = energy_per_charge(dc, pc) * s.Q
    return s.E * s.E - qe * qe


def boost_linear(
    s: ChargeMassPair, theta: float, dc: DerivedConstants
) -> tuple[ChargeMassPair, LinearDeltas]:
    """First-order mixing of (m, e). Meant for |theta| << 1; no limit is enforced."""
    theta = float(theta)
    if not math.isfinite(theta):
        raise UnitsError("non-finite result")
    delta_m = (theta * s.e / dc.sqrt_kappa).require(MASS, "delta_m")
    delta_e = (theta * s.m * dc.sqrt_kappa).require(CHARGE, "delta_e")
    return ChargeMassPair(s.m + delta_m, s.e + delta_e), LinearDeltas(delta_m, delta_e)


def _rel_dev(exact: float, approx: float) -> float:
    scale = max(abs(exact), abs(approx))
    return 0.0 if scale == 0.0 else abs(exact - approx) / scale


def linear_vs_exact_residual(
    s: ChargeMassPair, theta: float, dc: DerivedConstants, pc: PhysicalConstants
) -> float:
    """Largest relative gap between the linear and exact mixing of (m, e).

    The pair is embedded as (E, Q) = (m c^2, e) and pushed through
    :func:`boost_exact`; the linear result goes through the same c^2 scaling
    so the comparison carries no embedding round-off (theta = 0 gives 0).
    Relative gaps are scale-free, so comparing E = m c^2 is the same as
    comparing m.
    """
    if s.m.value <= 0:
        raise MixingError("residual needs m > 0 for the E = m c^2 embedding")
    c2 = pc.c * pc.c
    exact = boost_exact(ChargeEnergyPair(s.m * c2, s.e), theta, dc, pc)
    lin, _ = boost_linear(s, theta, dc)
    E_lin = lin.m * c2
    return max(_rel_dev(exact.E.value, E_lin.value), _rel_dev(exact.Q.value, lin.e.value))
