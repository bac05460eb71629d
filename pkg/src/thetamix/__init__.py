"""Charge-mass mixing: derived constants, (E, Q) boosts, the corrected
Newton-Coulomb law, planet-scale estimators and an N-body integrator."""

from .constants import (
    DerivedConstants,
    PhysicalConstants,
    derive_all,
    derive_ell,
    derive_kappa,
    derive_sigma,
    load_constants,
)
from .units import Dimension, DimensionError, Quantity, UnitsError

__version__ = "0.1.0"

__all__ = [
    "Dimension",
    "DimensionError",
    "Quantity",
    "UnitsError",
    "PhysicalConstants",
    "DerivedConstants",
    "derive_all",
    "derive_ell",
    "derive_kappa",
    "derive_sigma",
    "load_constants",
]
