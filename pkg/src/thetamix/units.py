"""Gaussian-CGS quantities with rational dimension exponents.

Every physical value in the package is a :class:`Quantity`: a finite float
tagged with exponents of gram, centimeter and second. Charge is the derived
dimension g^(1/2) cm^(3/2) s^-1 (statcoulomb), which is why exponents are
:class:`fractions.Fraction` rather than integers.

SI only appears at the I/O boundary through :func:`to_si` / :func:`from_si`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

__all__ = [
    "DimensionError",
    "UnitsError",
    "Dimension",
    "Quantity",
    "qty_mul",
    "qty_div",
    "qty_add",
    "qty_sub",
    "qty_pow",
    "to_si",
    "from_si",
    "SI_CONVERSIONS",
    "DIMENSIONLESS",
    "MASS",
    "LENGTH",
    "TIME",
    "CHARGE",
    "ENERGY",
    "EFIELD",
    "MAGNETIC_MOMENT",
]


class UnitsError(ValueError):
    """Raised for invalid quantity arithmetic (non-finite results, bad powers)."""


class DimensionError(UnitsError):
    """Raised when two quantities of different dimension are combined additively."""


def _frac(x) -> Fraction:
    if isinstance(x, float):
        # limit_denominator guards against 0.1-style binary noise
        return Fraction(x).limit_denominator(1000)
    return Fraction(x)


@dataclass(frozen=True, init=False)
class Dimension:
    """Exponents of (gram, centimeter, second), each a reduced rational."""

    g: Fraction
    cm: Fraction
    s: Fraction

    def __init__(self, g=0, cm=0, s=0):
        # Fraction normalises to lowest terms with a positive denominator
        object.__setattr__(self, "g", _frac(g))
        object.__setattr__(self, "cm", _frac(cm))
        object.__setattr__(self, "s", _frac(s))

    # field-level access mirroring the (num, den) storage view
    @property
    def g_num(self) -> int:
        return self.g.numerator

    @property
    def g_den(self) -> int:
        return self.g.denominator

    @property
    def cm_num(self) -> int:
        return self.cm.numerator

    @property
    def cm_den(self) -> int:
        return self.cm.denominator

    @property
    def s_num(self) -> int:
        return self.s.numerator

    @property
    def s_den(self) -> int:
        return self.s.denominator

    def __mul__(self, other: Dimension) -> Dimension:
        return Dimension(self.g + other.g, self.cm + other.cm, self.s + other.s)

    def __truediv__(self, other: Dimension) -> Dimension:
        return Dimension(self.g - other.g, self.cm - other.cm, self.s - other.s)

    def __pow__(self, p) -> Dimension:
        p = _frac(p)
        return Dimension(self.g * p, self.cm * p, self.s * p)

    def inverse(self) -> Dimension:
        return Dimension(-self.g, -self.cm, -self.s)

    @property
    def is_dimensionless(self) -> bool:
        return self.g == 0 and self.cm == 0 and self.s == 0

    def __str__(self) -> str:
        parts = []
        for name, exp in (("g", self.g), ("cm", self.cm), ("s", self.s)):
            if exp == 0:
                continue
            parts.append(name if exp == 1 else f"{name}^{exp}")
        return "·".join(parts) if parts else "1"


DIMENSIONLESS = Dimension()
MASS = Dimension(g=1)
LENGTH = Dimension(cm=1)
TIME = Dimension(s=1)
CHARGE = Dimension(g=Fraction(1, 2), cm=Fraction(3, 2), s=-1)
ENERGY = Dimension(g=1, cm=2, s=-2)
# statV/cm = statC/cm^2
EFIELD = CHARGE / LENGTH**2
# erg/G = statC·cm
MAGNETIC_MOMENT = CHARGE * LENGTH


def _check_finite(value: float) -> float:
    if not math.isfinite(value):
        raise UnitsError("non-finite result")
    return value


@dataclass(frozen=True)
class Quantity:
    """A finite float with a Gaussian-CGS :class:`Dimension`."""

    value: float
    dim: Dimension = DIMENSIONLESS

    def __post_init__(self):
        object.__setattr__(self, "value", _check_finite(float(self.value)))

    def __mul__(self, other):
        return qty_mul(self, _as_qty(other))

    def __rmul__(self, other):
        return qty_mul(_as_qty(other), self)

    def __truediv__(self, other):
        return qty_div(self, _as_qty(other))

    def __rtruediv__(self, other):
        return qty_div(_as_qty(other), self)

    def __add__(self, other):
        return qty_add(self, _as_qty(other))

    def __radd__(self, other):
        return qty_add(_as_qty(other), self)

    def __sub__(self, other):
        return qty_sub(self, _as_qty(other))

    def __rsub__(self, other):
        return qty_sub(_as_qty(other), self)

    def __neg__(self):
        return Quantity(-self.value, self.dim)

    def __abs__(self):
        return Quantity(abs(self.value), self.dim)

    def __pow__(self, p):
        return qty_pow(self, p)

    def __float__(self) -> float:
        if not self.dim.is_dimensionless:
            raise DimensionError(f"cannot convert quantity of dimension {self.dim} to float")
        return self.value

    def _cmp_value(self, other) -> float:
        other = _as_qty(other)
        if other.dim != self.dim:
            raise DimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return other.value

    def __lt__(self, other):
        return self.value < self._cmp_value(other)

    def __le__(self, other):
        return self.value <= self._cmp_value(other)

    def __gt__(self, other):
        return self.value > self._cmp_value(other)

    def __ge__(self, other):
        return self.value >= self._cmp_value(other)

    def require(self, dim: Dimension, what: str = "quantity") -> Quantity:
        """Return self if it has dimension ``dim``, else raise DimensionError."""
        if self.dim != dim:
            raise DimensionError(f"{what}: expected dimension {dim}, got {self.dim}")
        return self

    def __str__(self) -> str:
        return f"{self.value:.10g} {self.dim}"


def _as_qty(x) -> Quantity:
    if isinstance(x, Quantity):
        return x
    return Quantity(float(x))


def qty_mul(a: Quantity, b: Quantity) -> Quantity:
    return Quantity(_check_finite(a.value * b.value), a.dim * b.dim)


def qty_div(a: Quantity, b: Quantity) -> Quantity:
    if b.value == 0.0:
        raise UnitsError("non-finite result (division by zero)")
    return Quantity(_check_finite(a.value / b.value), a.dim / b.dim)


def qty_add(a: Quantity, b: Quantity) -> Quantity:
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return Quantity(_check_finite(a.value + b.value), a.dim)


def qty_sub(a: Quantity, b: Quantity) -> Quantity:
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return Quantity(_check_finite(a.value - b.value), a.dim)


def qty_pow(a: Quantity, p) -> Quantity:
    """Raise ``a`` to a rational power ``p``.

    Fractional powers of negative values are rejected rather than returning
    a complex number.
    """
    if not isinstance(p, (int, Rational, Fraction)):
        p = _frac(p)
    p = Fraction(p)
    if p == 0:
        return Quantity(1.0)
    if p.denominator != 1 and a.value < 0:
        raise UnitsError(f"negative base {a.value!r} with fractional power {p}")
    if p == Fraction(1, 2):
        value = math.sqrt(a.value)
    elif p.denominator == 1:
        try:
            value = a.value ** int(p)
        except (OverflowError, ZeroDivisionError) as exc:
            raise UnitsError("non-finite result") from exc
    else:
        try:
            value = a.value ** float(p)
        except (OverflowError, ZeroDivisionError) as exc:
            raise UnitsError("non-finite result") from exc
    return Quantity(_check_finite(value), a.dim**p)


# (kind, dimension, SI unit, Gaussian unit, SI value of one Gaussian unit)
SI_CONVERSIONS: dict[str, tuple[Dimension, str, str, float]] = {
    "mass": (MASS, "kg", "g", 1e-3),
    "length": (LENGTH, "m", "cm", 1e-2),
    "time": (TIME, "s", "s", 1.0),
    "charge": (CHARGE, "C", "statC", 1.0 / 2997924580.0),
    "electric_field": (EFIELD, "V/m", "statV/cm", 29979.2458),
    "energy": (ENERGY, "J", "erg", 1e-7),
    "magnetic_moment": (MAGNETIC_MOMENT, "J/T", "erg/G", 1e-3),
    "charge_per_mass": (CHARGE / MASS, "C/kg", "statC/g", 1.0 / 2997924580.0 / 1e-3),
}


def _mechanical_si(dim: Dimension) -> tuple[float, str]:
    """SI factor and unit for a charge-free dimension with integer exponents."""
    exps = (dim.g, dim.cm, dim.s)
    if any(e.denominator != 1 for e in exps):
        raise UnitsError(f"unsupported dimension for SI conversion: {dim}")
    g, cm, s = (int(e) for e in exps)
    factor = 1e-3**g * 1e-2**cm
    parts = []
    for name, e in (("kg", g), ("m", cm), ("s", s)):
        if e:
            parts.append(name if e == 1 else f"{name}^{e}")
    return factor, " ".join(parts) or "1"


def _kind_of(dim: Dimension) -> str:
    for kind, (d, *_rest) in SI_CONVERSIONS.items():
        if d == dim:
            return kind
    raise UnitsError(f"unsupported dimension for SI conversion: {dim}")


def to_si(a: Quantity) -> tuple[float, str]:
    """Return ``(value, unit)`` in SI.

    Table kinds use their exact factor. Any other dimension with integer
    exponents has no charge content and converts as a plain mechanical
    unit (g -> kg, cm -> m); half-integer dimensions outside the table raise.
    """
    try:
        _dim, si_unit, _gauss, factor = SI_CONVERSIONS[_kind_of(a.dim)]
    except UnitsError:
        factor, si_unit = _mechanical_si(a.dim)
    return a.value * factor, si_unit


def from_si(value: float, kind: str) -> Quantity:
    """Build a Gaussian quantity from an SI value; ``kind`` is a key of SI_CONVERSIONS."""
    try:
        dim, _si, _gauss, factor = SI_CONVERSIONS[kind]
    except KeyError:
        raise UnitsError(f"unsupported SI kind: {kind!r}") from None
    return Quantity(value / factor, dim)
