"""von Roos ordering-parameter algebra.

All quantities built from (alpha, beta, gamma) are kept as exact rationals so
that boundary cases of the reality constraints (for instance Zhu-Kroemer at
m = 0, which sits exactly on the harmonic bound) cannot flip under rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Union[Fraction, int, str]


class OrderingError(ValueError):
    """Raised for ordering triples that violate alpha + beta + gamma = -1."""


def to_fraction(value: Rational | float, field: str = "value") -> Fraction:
    """Parse ints, floats (exactly), Fractions and "p/q" strings."""
    if isinstance(value, bool):
        raise OrderingError(f"{field}: boolean is not a rational number")
    try:
        if isinstance(value, str):
            return Fraction(value.strip())
        return Fraction(value)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise OrderingError(f"{field}: cannot parse {value!r} as a rational") from exc


@dataclass(frozen=True)
class AmbiguityParameters:
    alpha: Fraction
    beta: Fraction
    gamma: Fraction

    def __post_init__(self) -> None:
        for name in ("alpha", "beta", "gamma"):
            object.__setattr__(self, name, to_fraction(getattr(self, name), name))
        total = self.alpha + self.beta + self.gamma
        if total != -1:
            raise OrderingError(
                f"alpha + beta + gamma must equal -1, got {total} "
                f"for ({self.alpha}, {self.beta}, {self.gamma})"
            )

    def __str__(self) -> str:
        return f"({self.alpha}, {self.beta}, {self.gamma})"


NAMED_ORDERINGS: dict[str, AmbiguityParameters] = {
    "GoraWilliams": AmbiguityParameters(Fraction(-1), Fraction(0), Fraction(0)),
    "LiKuhn": AmbiguityParameters(Fraction(0), Fraction(-1, 2), Fraction(-1, 2)),
    "BenDanielDuke": AmbiguityParameters(Fraction(0), Fraction(-1), Fraction(0)),
    "ZhuKroemer": AmbiguityParameters(Fraction(-1, 2), Fraction(0), Fraction(-1, 2)),
    "MustafaMazharimousavi": AmbiguityParameters(
        Fraction(-1, 4), Fraction(-1, 2), Fraction(-1, 4)
    ),
}


@dataclass(frozen=True)
class NamedOrderingSet:
    name: str
    params: AmbiguityParameters

    @classmethod
    def get(cls, name: str) -> "NamedOrderingSet":
        try:
            return cls(name, NAMED_ORDERINGS[name])
        except KeyError:
            known = ", ".join(NAMED_ORDERINGS)
            raise OrderingError(f"unknown ordering set {name!r} (known: {known})") from None

    @classmethod
    def all(cls) -> list["NamedOrderingSet"]:
        return [cls(name, params) for name, params in NAMED_ORDERINGS.items()]


def zeta(p: AmbiguityParameters) -> Fraction:
    a, b, g = p.alpha, p.beta, p.gamma
    return a * (a - 1) + g * (g - 1) - b * (b + 1)


def zeta_minus_beta(p: AmbiguityParameters) -> Fraction:
    return zeta(p) - p.beta


def zeta_minus_beta_expanded(p: AmbiguityParameters) -> Fraction:
    """Same quantity written as a(a-1) + g(g-1) - b(b+2)."""
    a, b, g = p.alpha, p.beta, p.gamma
    return a * (a - 1) + g * (g - 1) - b * (b + 2)


def reality_ok_harmonic(p: AmbiguityParameters, m: int) -> bool:
    """Real energies for the g ~ rho**2 family need zeta - beta <= (m**2 + 3)/2."""
    return zeta_minus_beta(p) <= Fraction(m * m + 3, 2)


def reality_ok_coulomb(p: AmbiguityParameters, m: int) -> bool:
    """Real energies for the g ~ 1/rho family need zeta - beta <= 2 m**2 + 3/2."""
    return zeta_minus_beta(p) <= 2 * m * m + Fraction(3, 2)


@dataclass(frozen=True)
class EllTilde:
    """Effective angular index of the radial equation.

    ``radicand`` is the squared value (exact when upsilon is exactly
    representable); ``value`` is the nonnegative root, or None when the
    radicand is negative. ``str()`` of a complex instance is "complex".
    """

    upsilon: float
    m: int
    radicand: Fraction

    @property
    def is_real(self) -> bool:
        return self.radicand >= 0

    @property
    def value(self) -> float | None:
        if self.radicand < 0:
            return None
        return math.sqrt(self.radicand)

    @property
    def near_critical(self) -> bool:
        """0 <= value < 1/2: inverse-square coefficient between -1/4 and 0."""
        return self.is_real and self.radicand < Fraction(1, 4)

    def __str__(self) -> str:
        return "complex" if self.value is None else repr(self.value)


def ell_tilde(upsilon: float | Fraction, m: int, p: AmbiguityParameters) -> EllTilde:
    if m < 0:
        raise ValueError(f"magnetic quantum number must be >= 0, got {m}")
    u = to_fraction(upsilon, "upsilon")
    radicand = (
        u * (u + 1)
        + m * m
        + Fraction(1, 4)
        - (2 * u + 1) ** 2 * (zeta_minus_beta(p) - 1) / 2
    )
    return EllTilde(float(upsilon), m, radicand)


def ell_tilde_rescaled_special(m: int, p: AmbiguityParameters, E):
    """Squared index for the 1/rho**2 mass (upsilon = -3/2, b = 2), energy absorbed.

    Returns an exact Fraction for rational E, a float otherwise.
    """
    return (m * m + 3) - 2 * zeta_minus_beta(p) + 2 * E
