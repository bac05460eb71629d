"""Planet-scale consequences of the charge-mass cross term.

A body of mass M carries an effective charge Q = e_intrinsic + sigma M.
From that follow its surface radial field (point monopole), the value of
theta that reproduces a measured fair-weather field, the dipole moment of
the same charge spread uniformly through a rigidly rotating sphere, and the
sign of the interaction with charged cosmic-ray particles.

Modeling limits: no atmospheric screening, no induced charges, and the
dipole uses the uniform-sphere closure mu = Q omega R^2 / (5 c).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .constants import CHARGE_PER_MASS, DerivedConstants, PhysicalConstants
from .potential import ParticleSpecies, PotentialError
from .units import (
    CHARGE,
    EFIELD,
    ENERGY,
    LENGTH,
    MAGNETIC_MOMENT,
    MASS,
    TIME,
    Quantity,
    from_si,
)

__all__ = [
    "GeosphereError",
    "CelestialBody",
    "EarthFitResult",
    "EARTH",
    "EARTH_SOURCES",
    "OBSERVED_EARTH_DIPOLE_G_CM3",
    "FAIRWEATHER_FIELD_V_PER_M",
    "ERG_PER_EV",
    "effective_charge",
    "surface_field",
    "fit_theta_from_field",
    "fit_theta_from_field_si",
    "magnetic_dipole",
    "charge_sign_energy",
    "load_body",
]

OMEGA_DIM = TIME.inverse()

# present-day geomagnetic dipole moment, ~8.0e22 A m^2
OBSERVED_EARTH_DIPOLE_G_CM3 = 8.0e25
# clear-sky field magnitude at ground level; it points down
FAIRWEATHER_FIELD_V_PER_M = 100.0
ERG_PER_EV = 1.602176634e-12

EARTH_SOURCES = {
    "mass_g": (5.9722e27, "IAU 2015 / JPL DE nominal Earth mass"),
    "radius_cm": (6.371e8, "IUGG mean Earth radius"),
    "omega_per_s": (7.2921e-5, "sidereal rotation rate (IERS 7.292115e-5, 5 s.f.)"),
}


class GeosphereError(ValueError):
    pass


@dataclass(frozen=True)
class CelestialBody:
    label: str
    M: Quantity
    R: Quantity
    omega: Quantity
    e_intrinsic: Quantity = Quantity(0.0, CHARGE)

    def __post_init__(self):
        self.M.require(MASS, "M")
        self.R.require(LENGTH, "R")
        self.omega.require(OMEGA_DIM, "omega")
        self.e_intrinsic.require(CHARGE, "e_intrinsic")
        if self.M.value <= 0:
            raise GeosphereError(f"{self.label}: mass must be positive")
        if self.R.value <= 0:
            raise GeosphereError(f"{self.label}: radius must be positive")
        if self.omega.value < 0:
            raise GeosphereError(f"{self.label}: omega must be non-negative")

    @classmethod
    def cgs(cls, label, mass_g, radius_cm, omega_per_s=0.0, e_statC=0.0) -> CelestialBody:
        return cls(
            label,
            Quantity(mass_g, MASS),
            Quantity(radius_cm, LENGTH),
            Quantity(omega_per_s, OMEGA_DIM),
            Quantity(e_statC, CHARGE),
        )


EARTH = CelestialBody.cgs(
    "Earth",
    EARTH_SOURCES["mass_g"][0],
    EARTH_SOURCES["radius_cm"][0],
    EARTH_SOURCES["omega_per_s"][0],
)


@dataclass(frozen=True)
class EarthFitResult:
    sigma: Quantity
    theta: float
    Q_eff: Quantity
    field_check: Quantity


def _check_sigma(sigma: Quantity) -> Quantity:
    return sigma.require(CHARGE_PER_MASS, "sigma")


def effective_charge(body: CelestialBody, sigma: Quantity) -> Quantity:
    return body.e_intrinsic + _check_sigma(sigma) * body.M


def surface_field(body: CelestialBody, sigma: Quantity) -> Quantity:
    """Radial field at the surface in statV/cm, positive outward."""
    Q = effective_charge(body, sigma)
    return (Q / (body.R * body.R)).require(EFIELD, "surface field")


def fit_theta_from_field(
    body: CelestialBody,
    target_field: Quantity,
    dc: DerivedConstants,
    pc: PhysicalConstants,
) -> EarthFitResult:
    """Solve target = (e_intrinsic + sigma M) / R^2 for sigma, then theta.

    The model is linear in theta, so the inversion is exact; ``field_check``
    re-evaluates :func:`surface_field` at the fitted sigma.
    """
    target_field.require(EFIELD, "target field")
    if dc.sigma_per_theta.value == 0:
        raise GeosphereError("sigma_per_theta is zero; theta is not identifiable")
    sigma = ((target_field * body.R * body.R - body.e_intrinsic) / body.M).require(
        CHARGE_PER_MASS, "sigma"
    )
    theta = float(sigma / dc.sigma_per_theta)
    return EarthFitResult(
        sigma=sigma,
        theta=theta,
        Q_eff=effective_charge(body, sigma),
        field_check=surface_field(body, sigma),
    )


def fit_theta_from_field_si(body, field_v_per_m: float, dc, pc) -> EarthFitResult:
    return fit_theta_from_field(body, from_si(field_v_per_m, "electric_field"), dc, pc)


def magnetic_dipole(body: CelestialBody, sigma: Quantity, pc: PhysicalConstants) -> Quantity:
    """mu = Q omega R^2 / (5 c) in G cm^3 (= erg/G) for a uniformly charged spinning sphere."""
    Q = effective_charge(body, sigma)
    mu = Q * body.omega * body.R * body.R / (5.0 * pc.c)
    return mu.require(MAGNETIC_MOMENT, "dipole moment")


def charge_sign_energy(
    p: ParticleSpecies,
    body: CelestialBody,
    sigma: Quantity,
    r: Quantity,
    pc: PhysicalConstants,
) -> Quantity:
    """sigma-induced electrostatic energy e_p sigma M / r; negative means attraction."""
    r.require(LENGTH, "r")
    if r.value <= 0:
        raise PotentialError("non-positive separation")
    U = p.e * (_check_sigma(sigma) * body.M) / r
    return U.require(ENERGY, "interaction energy")


def load_body(path: str | Path) -> CelestialBody:
    """Read a body from JSON: {"label", "mass_g", "radius_cm", "omega_per_s", "e_statC"}."""
    with open(path) as fh:
        data = json.load(fh)
    try:
        return CelestialBody.cgs(
            data.get("label", Path(path).stem),
            float(data["mass_g"]),
            float(data["radius_cm"]),
            float(data.get("omega_per_s", 0.0)),
            float(data.get("e_statC", 0.0)),
        )
    except KeyError as exc:
        raise GeosphereError(f"{path}: missing field {exc}") from None
