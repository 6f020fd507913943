"""Closed-form separation constants and energies for the two radial families.

Harmonic family: g = b rho**2 / 2 (upsilon = 1/2) with Vr = a**2 rho**2 / 4,

    E = a**2/(4b) - (1/(4b)) [kz2 / (2 n_rho + ell + 1)]**2

Coulomb family: g = b / (2 rho) (upsilon = -1) with Vr = -2 A_tilde / rho,

    E = +/- (kz / bt) (n_rho + ell + 1) - A_tilde / bt,    bt = b/2

Energies that require a negative radicand are returned as ``COMPLEX``.
The Morse separation constant used by the spectra is the linear form
sqrt(D)/eps - n - 1/2 (``axial_morse_kz2_linear``); the textbook Morse
level is available as ``axial_morse_kz2_standard`` for comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Sequence

from .ambiguity import (
    AmbiguityParameters,
    ell_tilde,
    reality_ok_coulomb,
    reality_ok_harmonic,
)
from .model import (
    AxialPotential,
    CoulombRadial,
    FreeAxial,
    HarmonicRadial,
    InfiniteWell,
    MassProfile,
    ModelError,
    Morse,
    RadialPotential,
    RosenMorseTrig,
)

HARMONIC = "harmonic"
COULOMB = "coulomb"
FAMILY_UPSILON = {HARMONIC: 0.5, COULOMB: -1.0}

PLUS, MINUS, NO_BRANCH = "plus", "minus", "n/a"
_BRANCH_ORDER = {NO_BRANCH: 0, PLUS: 0, MINUS: 1}


class _Complex:
    """Marker for an energy that is not real. Singleton, falsy, prints as 'complex'."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "complex"

    def __bool__(self) -> bool:
        return False

    def __reduce__(self):
        return (_Complex, ())


COMPLEX = _Complex()


def is_complex(value) -> bool:
    return value is COMPLEX


# axial separation constants -------------------------------------------------


def axial_well_kz2(L: float, n_z: int) -> float:
    if n_z < 1:
        raise ValueError(f"well levels start at n_z = 1, got {n_z}")
    if not L > 0:
        raise ValueError(f"L must be positive, got {L}")
    return (n_z * math.pi / L) ** 2


class MorseKz2(NamedTuple):
    value: float
    valid: bool


def axial_morse_kz2_linear(D: float, epsilon: float, n_tilde_z: int) -> MorseKz2:
    """sqrt(D)/eps - n - 1/2, not squared or scaled by eps**2; ``valid`` is the positivity condition."""
    if n_tilde_z < 0:
        raise ValueError(f"Morse levels start at 0, got {n_tilde_z}")
    value = math.sqrt(D) / epsilon - n_tilde_z - 0.5
    return MorseKz2(value, value > 0)


def axial_morse_kz2_standard(D: float, epsilon: float, n_tilde_z: int) -> MorseKz2:
    """Textbook bound level -eps**2 (sqrt(D)/eps - n - 1/2)**2; invalid above dissociation."""
    s = math.sqrt(D) / epsilon - n_tilde_z - 0.5
    return MorseKz2(-(epsilon**2) * s * s, s > 0)


def rosen_morse_C(U0: float, d: float) -> float:
    return math.pi / (2 * d) * (1 + math.sqrt(1 + 4 * U0 * d * d / math.pi**2))


def axial_rosen_morse_kz2(U0: float, d: float, n_tilde_z: int) -> float:
    if n_tilde_z < 0:
        raise ValueError(f"Rosen-Morse levels start at 0, got {n_tilde_z}")
    C = rosen_morse_C(U0, d)
    return (C * d + n_tilde_z * math.pi) ** 2 / d**2 - U0


def first_axial_level(vz: AxialPotential) -> int:
    return 1 if isinstance(vz, InfiniteWell) else 0


def axial_level_index(vz: AxialPotential, n_axial: int) -> int:
    """Zero-based position of an axial quantum number in the ordered spectrum."""
    return n_axial - first_axial_level(vz)


def axial_kz2(vz: AxialPotential, n_axial: int) -> MorseKz2:
    """Separation constant for any supported axial piece, with a validity flag."""
    if isinstance(vz, InfiniteWell):
        return MorseKz2(axial_well_kz2(vz.L, n_axial), True)
    if isinstance(vz, Morse):
        return axial_morse_kz2_linear(vz.D, vz.epsilon, n_axial)
    if isinstance(vz, RosenMorseTrig):
        return MorseKz2(axial_rosen_morse_kz2(vz.U0, vz.d, n_axial), True)
    if isinstance(vz, FreeAxial):
        raise ModelError("a free axial motion has a continuous kz2; no discrete spectrum")
    raise ModelError(f"unsupported axial potential {vz!r}")


# energies --------------------------------------------------------------------


def harmonic_energy_from_ell(a: float, b: float, n_rho: int, ell: float, kz2: float) -> float:
    if b == 0:
        raise ValueError("b must be non-zero")
    return a * a / (4 * b) - (kz2 / (2 * n_rho + ell + 1)) ** 2 / (4 * b)


def harmonic_energy(a, b, m, n_rho, kz2, p: AmbiguityParameters):
    if not reality_ok_harmonic(p, m):
        return COMPLEX
    ell = ell_tilde(0.5, m, p).value
    return harmonic_energy_from_ell(a, b, n_rho, ell, kz2)


def harmonic_kz2_relation(a: float, b: float, E: float, n_rho: int, ell: float) -> float:
    """kz2 = -sqrt(a**2 - 4bE) (2 n_rho + ell + 1), the inverse of ``harmonic_energy``."""
    radicand = a * a - 4 * b * E
    if radicand < 0:
        raise ValueError(f"a**2 - 4bE = {radicand} < 0: no real kz2")
    return -math.sqrt(radicand) * (2 * n_rho + ell + 1)


def coulomb_energy_from_ell(A_tilde, b, n_rho, ell, kz, branch) -> float:
    if b == 0:
        raise ValueError("b must be non-zero")
    if branch not in (PLUS, MINUS):
        raise ValueError(f"branch must be {PLUS!r} or {MINUS!r}, got {branch!r}")
    bt = b / 2
    sign = 1.0 if branch == PLUS else -1.0
    return sign * kz / bt * (n_rho + ell + 1) - A_tilde / bt


def coulomb_energy(A_tilde, b, m, n_rho, kz, p: AmbiguityParameters, branch):
    if not reality_ok_coulomb(p, m):
        return COMPLEX
    ell = ell_tilde(-1.0, m, p).value
    return coulomb_energy_from_ell(A_tilde, b, n_rho, ell, kz, branch)


# spectrum assembly -----------------------------------------------------------


@dataclass(frozen=True)
class QuantumNumbers:
    n_rho: int
    m: int
    n_axial: int

    def __post_init__(self) -> None:
        if self.n_rho < 0 or self.m < 0 or self.n_axial < 0:
            raise ValueError(f"quantum numbers must be nonnegative: {self}")


@dataclass(frozen=True)
class QuantumRanges:
    n_rho: Sequence[int]
    m: Sequence[int]
    n_axial: Sequence[int]

    def tuples(self, vz: AxialPotential) -> list[QuantumNumbers]:
        lowest = first_axial_level(vz)
        bad = [n for n in self.n_axial if n < lowest]
        if bad:
            raise ModelError(f"axial levels for {type(vz).__name__} start at {lowest}; got {bad}")
        return [
            QuantumNumbers(int(nr), int(m), int(nz))
            for nr in sorted(set(self.n_rho))
            for m in sorted(set(self.m))
            for nz in sorted(set(self.n_axial))
        ]


@dataclass
class SpectrumLine:
    qn: QuantumNumbers
    kz2: float
    E_analytic: object  # float or COMPLEX
    branch: str = NO_BRANCH
    constraint_ok: bool = True
    kz2_valid: bool = True
    ell: float | None = None
    kz2_oracle: float | None = None
    E_oracle: float | None = None
    residual_kz2: float | None = None
    residual_E: float | None = None
    status: str = ""
    flags: tuple[str, ...] = field(default_factory=tuple)
    extras: dict = field(default_factory=dict)

    @property
    def sort_key(self):
        return (self.qn.n_rho, self.qn.m, self.qn.n_axial, _BRANCH_ORDER[self.branch])

    def with_flags(self, *new: str) -> "SpectrumLine":
        return replace(self, flags=tuple(dict.fromkeys(self.flags + new)))


def check_family(family: str, mp: MassProfile, vr: RadialPotential) -> None:
    if family == HARMONIC:
        if mp.upsilon != 0.5 or not isinstance(vr, HarmonicRadial):
            raise ModelError("harmonic family needs upsilon = 1/2 and a HarmonicRadial potential")
    elif family == COULOMB:
        if mp.upsilon != -1.0 or not isinstance(vr, CoulombRadial):
            raise ModelError("coulomb family needs upsilon = -1 and a CoulombRadial potential")
    else:
        raise ModelError(f"unknown family {family!r}")


def assemble_spectrum(family, mp: MassProfile, vr, vz, p: AmbiguityParameters, ranges: QuantumRanges) -> list[SpectrumLine]:
    check_family(family, mp, vr)
    lines: list[SpectrumLine] = []
    for qn in ranges.tuples(vz):
        kz2, kz2_valid = axial_kz2(vz, qn.n_axial)
        flags: tuple[str, ...] = () if kz2_valid else ("morse_condition_violated",)
        if family == HARMONIC:
            ok = reality_ok_harmonic(p, qn.m)
            ell = ell_tilde(0.5, qn.m, p)
            E = harmonic_energy(vr.a, mp.b, qn.m, qn.n_rho, kz2, p)
            if not ok:
                flags += ("constraint_violated",)
            elif ell.near_critical:
                flags += ("near_critical",)
            lines.append(SpectrumLine(qn, kz2, E, NO_BRANCH, ok, kz2_valid, ell.value, flags=flags))
            continue
        ok = reality_ok_coulomb(p, qn.m)
        ell = ell_tilde(-1.0, qn.m, p)
        line_flags = flags
        if not ok:
            line_flags += ("constraint_violated",)
        elif ell.near_critical:
            line_flags += ("near_critical",)
        if kz2 < 0:
            line_flags += ("kz_imaginary",)
        for branch in (PLUS, MINUS):
            if kz2 < 0:
                E = COMPLEX
            else:
                E = coulomb_energy(vr.A_tilde, mp.b, qn.m, qn.n_rho, math.sqrt(kz2), p, branch)
            lines.append(SpectrumLine(qn, kz2, E, branch, ok, kz2_valid, ell.value, flags=line_flags))
    lines.sort(key=lambda line: line.sort_key)
    return lines
