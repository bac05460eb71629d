"""Pinned fundamental constants and the derived mixing constants.

The derived chain is

    ell     = L_p * sqrt(10 / (3 alpha) * (1 + 2 sin^2 theta_W))
    kappa   = q^2 ell^2 c^2 / hbar^2
    sigma   = theta * (sqrt(kappa) - k / sqrt(kappa))

All values are Gaussian CGS. ``sqrt(kappa)`` and ``sigma`` are charge per
mass (statC/g); ``kappa`` has the same dimension as Newton's constant.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, fields, replace
from fractions import Fraction
from pathlib import Path

from .units import (
    CHARGE,
    DIMENSIONLESS,
    ENERGY,
    LENGTH,
    MASS,
    TIME,
    Dimension,
    Quantity,
    UnitsError,
    qty_pow,
)

__all__ = [
    "ConstantsError",
    "PhysicalConstants",
    "DerivedConstants",
    "CONSTANT_SOURCES",
    "CHARGE_PER_MASS",
    "NEWTON_DIM",
    "derive_ell",
    "derive_kappa",
    "derive_sigma",
    "derive_all",
    "load_constants",
]

NEWTON_DIM = Dimension(g=-1, cm=3, s=-2)
CHARGE_PER_MASS = CHARGE / MASS
ACTION = ENERGY * TIME
SPEED = LENGTH / TIME


class ConstantsError(ValueError):
    pass


# name -> (value, dimension, unit label, source note)
CONSTANT_SOURCES: dict[str, tuple[float, Dimension, str, str]] = {
    "hbar": (1.054571817e-27, ACTION, "erg·s", "CODATA 2018, exact (h exact / 2pi)"),
    "c": (2.99792458e10, SPEED, "cm/s", "SI defining constant, exact"),
    "q": (4.80320471e-10, CHARGE, "statC", "CODATA 2018 elementary charge in Gaussian units"),
    "k_newton": (6.67430e-8, NEWTON_DIM, "cm^3 g^-1 s^-2", "CODATA 2018"),
    "L_p": (1.616255e-33, LENGTH, "cm", "CODATA 2018 Planck length"),
    "alpha": (7.2973525693e-3, DIMENSIONLESS, "1", "CODATA 2018 fine-structure constant"),
    "sin2_theta_w": (
        0.23121,
        DIMENSIONLESS,
        "1",
        "PDG effective weak mixing angle (MS-bar at M_Z); no running applied",
    ),
}


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: Quantity
    c: Quantity
    q: Quantity
    k_newton: Quantity
    L_p: Quantity
    alpha: Quantity
    sin2_theta_w: Quantity

    def __post_init__(self):
        for f in fields(self):
            name = f.name
            val = getattr(self, name)
            if not isinstance(val, Quantity):
                val = Quantity(float(val), CONSTANT_SOURCES[name][1])
                object.__setattr__(self, name, val)
            val.require(CONSTANT_SOURCES[name][1], name)
            if name == "sin2_theta_w":
                if not 0.0 <= val.value <= 1.0:
                    raise ConstantsError(f"sin2_theta_w must lie in [0, 1], got {val.value}")
            elif val.value <= 0.0:
                raise ConstantsError(f"{name} must be strictly positive, got {val.value}")

    @classmethod
    def default(cls) -> PhysicalConstants:
        return cls(**{name: Quantity(v, d) for name, (v, d, _u, _s) in CONSTANT_SOURCES.items()})

    def with_overrides(self, **values: float) -> PhysicalConstants:
        unknown = set(values) - set(CONSTANT_SOURCES)
        if unknown:
            raise ConstantsError(f"unknown constant(s): {', '.join(sorted(unknown))}")
        return replace(
            self, **{k: Quantity(float(v), CONSTANT_SOURCES[k][1]) for k, v in values.items()}
        )

    def as_floats(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name).value for f in fields(self)}

    def fingerprint(self) -> str:
        """SHA-256 over the canonical JSON of the seven input values."""
        blob = json.dumps(self.as_floats(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


@dataclass(frozen=True)
class DerivedConstants:
    ell: Quantity
    kappa: Quantity
    sqrt_kappa: Quantity
    sigma_per_theta: Quantity

    def as_floats(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name).value for f in fields(self)}


def derive_ell(pc: PhysicalConstants) -> Quantity:
    """Mixing length from the Planck length, alpha and sin^2 theta_W."""
    if pc.alpha.value <= 0:
        raise ConstantsError("alpha must be positive")
    if not 0.0 <= pc.sin2_theta_w.value <= 1.0:
        raise ConstantsError("sin2_theta_w must lie in [0, 1]")
    factor = 10.0 / (3.0 * pc.alpha) * (1.0 + 2.0 * pc.sin2_theta_w)
    ell = pc.L_p * qty_pow(factor, Fraction(1, 2))
    return ell.require(LENGTH, "ell")


def derive_kappa(pc: PhysicalConstants, ell: Quantity) -> tuple[Quantity, Quantity]:
    """Return ``(kappa, sqrt_kappa)``; sqrt_kappa = q ell c / hbar in statC/g."""
    ell.require(LENGTH, "ell")
    if ell.value <= 0:
        raise ConstantsError("ell must be positive")
    sqrt_kappa = (pc.q * ell * pc.c / pc.hbar).require(CHARGE_PER_MASS, "sqrt_kappa")
    kappa = (sqrt_kappa * sqrt_kappa).require(NEWTON_DIM, "kappa")
    return kappa, sqrt_kappa


def _sigma_per_theta(sqrt_kappa: Quantity, pc: PhysicalConstants) -> Quantity:
    return (sqrt_kappa - pc.k_newton / sqrt_kappa).require(CHARGE_PER_MASS, "sigma_per_theta")


def derive_sigma(dc: DerivedConstants, pc: PhysicalConstants, theta: float) -> Quantity:
    """Charge-per-mass cross coupling for mixing angle ``theta``."""
    theta = float(theta)
    if not math.isfinite(theta):
        raise UnitsError("non-finite result")
    return (theta * dc.sigma_per_theta).require(CHARGE_PER_MASS, "sigma")


def derive_all(pc: PhysicalConstants | None = None) -> DerivedConstants:
    pc = pc or PhysicalConstants.default()
    ell = derive_ell(pc)
    kappa, sqrt_kappa = derive_kappa(pc, ell)
    return DerivedConstants(ell, kappa, sqrt_kappa, _sigma_per_theta(sqrt_kappa, pc))


def load_constants(path: str | Path | None = None) -> PhysicalConstants:
    """Defaults, optionally overridden by a JSON object holding any subset of the seven inputs."""
    pc = PhysicalConstants.default()
    if path is None:
        return pc
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ConstantsError(f"{path}: expected a JSON object")
    return pc.with_overrides(**data)
