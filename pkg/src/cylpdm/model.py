"""Mass profiles, potential components and the separable composition V(rho, z).

Only azimuthally symmetric settings are constructible: the azimuthal potential
is zero and the angular and axial mass factors are identically one, so the
potential is assembled from a radial and an axial piece as

    2 g(rho) V(rho, z) = Vr(rho) + Vz(z)

Impenetrable walls evaluate to ``INFINITE_WALL`` (IEEE infinity), never to a
large finite number.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

INFINITE_WALL = math.inf


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class MassProfile:
    """Radial power-law mass g(rho) = (b/2) rho**(2*upsilon + 1)."""

    upsilon: float
    b: float

    def __post_init__(self) -> None:
        if self.b == 0:
            raise ModelError("mass scale b must be non-zero")

    def __call__(self, rho):
        return mass_at(self, rho)

    def derivative(self, rho):
        p = 2 * self.upsilon + 1
        return 0.5 * self.b * p * np.asarray(rho, dtype=float) ** (p - 1)

    def second_derivative(self, rho):
        p = 2 * self.upsilon + 1
        return 0.5 * self.b * p * (p - 1) * np.asarray(rho, dtype=float) ** (p - 2)


def mass_at(mp: MassProfile, rho):
    r = np.asarray(rho, dtype=float)
    if np.any(r <= 0):
        raise ModelError("mass profile is defined for rho > 0 only")
    out = 0.5 * mp.b * r ** (2 * mp.upsilon + 1)
    return float(out) if out.ndim == 0 else out


# radial pieces -------------------------------------------------------------


@dataclass(frozen=True)
class HarmonicRadial:
    """Vr(rho) = a**2 rho**2 / 4."""

    a: float

    def __call__(self, rho):
        return 0.25 * self.a**2 * np.asarray(rho, dtype=float) ** 2


@dataclass(frozen=True)
class CoulombRadial:
    """Vr(rho) = -2 A_tilde / rho."""

    A_tilde: float

    def __call__(self, rho):
        return -2.0 * self.A_tilde / np.asarray(rho, dtype=float)


@dataclass(frozen=True)
class NoRadial:
    def __call__(self, rho):
        return np.zeros_like(np.asarray(rho, dtype=float))


RadialPotential = Union[HarmonicRadial, CoulombRadial, NoRadial]


# axial pieces --------------------------------------------------------------


@dataclass(frozen=True)
class InfiniteWell:
    """Zero on 0 < z < L, impenetrable elsewhere."""

    L: float

    def __post_init__(self) -> None:
        if not self.L > 0:
            raise ModelError(f"well width L must be positive, got {self.L}")

    def finite(self, z):
        z = np.asarray(z, dtype=float)
        return (z > 0) & (z < self.L)

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        return np.where(self.finite(z), 0.0, INFINITE_WALL)


@dataclass(frozen=True)
class Morse:
    """D (exp(-2 eps z) - 2 exp(-eps z)), minimum -D at z = 0."""

    D: float
    epsilon: float

    def __post_init__(self) -> None:
        if not (self.D > 0 and self.epsilon > 0):
            raise ModelError("Morse needs D > 0 and epsilon > 0")

    def finite(self, z):
        return np.ones_like(np.asarray(z, dtype=float), dtype=bool)

    def __call__(self, z):
        x = np.exp(-self.epsilon * np.asarray(z, dtype=float))
        return self.D * (x * x - 2.0 * x)


@dataclass(frozen=True)
class RosenMorseTrig:
    """U0 cot**2(pi z / d) on the open interval (0, d)."""

    U0: float
    d: float

    def __post_init__(self) -> None:
        if not (self.U0 > 0 and self.d > 0):
            raise ModelError("trigonometric Rosen-Morse needs U0 > 0 and d > 0")

    def finite(self, z):
        z = np.asarray(z, dtype=float)
        return (z > 0) & (z < self.d)

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        inside = self.finite(z)
        safe = np.where(inside, z, 0.5 * self.d)
        value = self.U0 / np.tan(np.pi * safe / self.d) ** 2
        return np.where(inside, value, INFINITE_WALL)


@dataclass(frozen=True)
class FreeAxial:
    def finite(self, z):
        return np.ones_like(np.asarray(z, dtype=float), dtype=bool)

    def __call__(self, z):
        return np.zeros_like(np.asarray(z, dtype=float))


AxialPotential = Union[InfiniteWell, Morse, RosenMorseTrig, FreeAxial]


@dataclass(frozen=True)
class PotentialConfig:
    radial: RadialPotential
    axial: AxialPotential
    azimuthal_symmetric: bool = True

    def __post_init__(self) -> None:
        if not self.azimuthal_symmetric:
            raise ModelError("only azimuthally symmetric configurations are supported")


@dataclass(frozen=True)
class FullPotential:
    """V(rho, z) = [Vr(rho) + Vz(z)] / (2 g(rho)), vectorised over broadcastable inputs."""

    mass: MassProfile
    radial: RadialPotential
    axial: AxialPotential

    def __call__(self, rho, z):
        rho = np.asarray(rho, dtype=float)
        z = np.asarray(z, dtype=float)
        if np.any(rho <= 0):
            raise ModelError("V(rho, z) is not defined at rho <= 0")
        rho, z = np.broadcast_arrays(rho, z)
        vz = self.axial(z)
        wall = np.isinf(vz)
        finite_vz = np.where(wall, 0.0, vz)
        out = (self.radial(rho) + finite_vz) / (2.0 * mass_at(self.mass, rho))
        out = np.where(wall, INFINITE_WALL, out)
        return float(out) if out.ndim == 0 else out


def compose_full_potential(mp: MassProfile, vr: RadialPotential, vz: AxialPotential) -> FullPotential:
    return FullPotential(mp, vr, vz)


def potential_identity_residual(mp, vr, vz, samples, V=None, relative=False) -> float:
    """Max over (rho, z) samples of |2 g V - Vr - Vz|.

    ``V`` defaults to the composed potential. With ``relative=True`` each
    mismatch is divided by 1 + |2gV| + |Vr| + |Vz|.
    """
    pts = np.asarray(samples, dtype=float).reshape(-1, 2)
    rho, z = pts[:, 0], pts[:, 1]
    if V is None:
        V = compose_full_potential(mp, vr, vz)
    lhs = 2.0 * mass_at(mp, rho) * np.asarray(V(rho, z), dtype=float)
    r_part = vr(rho)
    z_part = vz(z)
    if not np.all(np.isfinite(lhs)) or not np.all(np.isfinite(z_part)):
        raise ModelError("identity residual needs samples inside the finite-potential region")
    mismatch = np.abs(lhs - r_part - z_part)
    if relative:
        mismatch = mismatch / (1.0 + np.abs(lhs) + np.abs(r_part) + np.abs(z_part))
    return float(np.max(mismatch))


class SeparabilityCase(enum.Enum):
    I_fk_unit = "I"
    II_kg_unit = "II"
    III_fg_unit = "III"
    IV_upsilon_neg32_k = "IV"
    V_upsilon_neg32_f = "V"
    NotSeparable = "none"


def classify_separability(upsilon: float, f_is_unit: bool, k_is_unit: bool, g_is_unit: bool) -> SeparabilityCase:
    """First matching case in I..V order; overlapping conditions resolve to the lowest."""
    special = upsilon == -1.5
    if f_is_unit and k_is_unit:
        return SeparabilityCase.I_fk_unit
    if k_is_unit and g_is_unit:
        return SeparabilityCase.II_kg_unit
    if f_is_unit and g_is_unit:
        return SeparabilityCase.III_fg_unit
    if special and f_is_unit and not k_is_unit:
        return SeparabilityCase.IV_upsilon_neg32_k
    if special and k_is_unit and not f_is_unit:
        return SeparabilityCase.V_upsilon_neg32_f
    return SeparabilityCase.NotSeparable
