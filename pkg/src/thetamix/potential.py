"""Two-body Newton-Coulomb law with the charge-mass cross term.

For intrinsic pairs (m1, e1) and (m2, e2) the pair potential is V = A / r
with coupling

    A = e1 e2 - k m1 m2 + sigma (e1 m2 + m1 e2)

Sign convention, used throughout the package: A > 0 (V > 0) is repulsive,
and radial force is positive outward.

The "primed" form evaluates A' = e1' e2' - k m1' m2' on the linearly mixed
parameters. Expanding it gives exactly

    A' = A + theta^2 (kappa m1 m2 - k e1 e2 / kappa)

so both forms agree to first order in theta.
"""

from __future__ import annotations

from dataclasses import dataclass

from .constants import DerivedConstants, PhysicalConstants, derive_sigma
from .mixing import ChargeMassPair, boost_linear
from .units import CHARGE, ENERGY, LENGTH, MASS, Quantity, UnitsError

__all__ = [
    "PotentialError",
    "ParticleSpecies",
    "PairCoupling",
    "COUPLING_DIM",
    "coupling_unprimed",
    "coupling_unprimed_raw",
    "coupling_primed",
    "primed_remainder",
    "coupling_for_theta",
    "potential_energy",
    "radial_force",
]

COUPLING_DIM = ENERGY * LENGTH


class PotentialError(ValueError):
    pass


@dataclass(frozen=True)
class ParticleSpecies:
    label: str
    m: Quantity
    e: Quantity

    def __post_init__(self):
        self.m.require(MASS, f"{self.label}.m")
        self.e.require(CHARGE, f"{self.label}.e")
        if self.m.value < 0:
            raise PotentialError(f"{self.label}: mass must be non-negative")

    @classmethod
    def cgs(cls, label: str, m_g: float, e_statC: float) -> ParticleSpecies:
        return cls(label, Quantity(m_g, MASS), Quantity(e_statC, CHARGE))


@dataclass(frozen=True)
class PairCoupling:
    A: Quantity

    def __post_init__(self):
        self.A.require(COUPLING_DIM, "coupling")

    @property
    def attractive(self) -> bool:
        return self.A.value < 0


def coupling_unprimed_raw(m1: float, e1: float, m2: float, e2: float, sigma: float, k: float) -> float:
    """Plain-float coupling in CGS numbers; the hot path of the N-body loop."""
    # k (m1 m2) keeps the result exactly symmetric under particle exchange
    return e1 * e2 - k * (m1 * m2) + sigma * (e1 * m2 + m1 * e2)


def coupling_unprimed(
    p1: ParticleSpecies, p2: ParticleSpecies, sigma: Quantity, pc: PhysicalConstants
) -> PairCoupling:
    # dimension audit of each term; the value goes through the raw routine so
    # the simulator and this function agree bit for bit
    coulomb = p1.e * p2.e
    newton = pc.k_newton * p1.m * p2.m
    cross = sigma * (p1.e * p2.m + p1.m * p2.e)
    for term in (coulomb, newton, cross):
        term.require(COUPLING_DIM, "coupling term")
    value = coupling_unprimed_raw(
        p1.m.value, p1.e.value, p2.m.value, p2.e.value, sigma.value, pc.k_newton.value
    )
    return PairCoupling(Quantity(value, COUPLING_DIM))


def coupling_primed(
    p1: ParticleSpecies,
    p2: ParticleSpecies,
    theta: float,
    dc: DerivedConstants,
    pc: PhysicalConstants,
) -> PairCoupling:
    """Coupling in observable (linearly mixed) variables: e1' e2' - k m1' m2'."""
    o1, _ = boost_linear(ChargeMassPair(p1.m, p1.e), theta, dc)
    o2, _ = boost_linear(ChargeMassPair(p2.m, p2.e), theta, dc)
    A = o1.e * o2.e - pc.k_newton * o1.m * o2.m
    return PairCoupling(A)


def primed_remainder(
    p1: ParticleSpecies,
    p2: ParticleSpecies,
    theta: float,
    dc: DerivedConstants,
    pc: PhysicalConstants,
) -> Quantity:
    """theta^2 (kappa m1 m2 - k e1 e2 / kappa): what the primed form adds to the unprimed one."""
    val = theta * theta * (dc.kappa * p1.m * p2.m - pc.k_newton * p1.e * p2.e / dc.kappa)
    return val.require(COUPLING_DIM, "remainder")


def _check_r(r: Quantity) -> Quantity:
    r.require(LENGTH, "separation")
    if r.value <= 0:
        raise PotentialError("non-positive separation")
    return r


def potential_energy(A: PairCoupling, r: Quantity) -> Quantity:
    """V = A / r in erg."""
    return (A.A / _check_r(r)).require(ENERGY, "potential")


def radial_force(A: PairCoupling, r: Quantity) -> Quantity:
    """F = -dV/dr = A / r^2 in dyn; positive pushes the pair apart."""
    r = _check_r(r)
    try:
        return A.A / (r * r)
    except UnitsError as exc:
        raise PotentialError(str(exc)) from exc


# convenience for callers that hold sigma via theta
def coupling_for_theta(p1, p2, theta, dc, pc) -> PairCoupling:
    return coupling_unprimed(p1, p2, derive_sigma(dc, pc, theta), pc)
