"""Pointwise checks of the substitution identities used in the separation.

Each check evaluates both sides with closed-form derivatives of smooth test
functions and returns the largest mismatch scaled by 1 + |lhs| + |rhs|.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..ambiguity import AmbiguityParameters, NAMED_ORDERINGS, ell_tilde, zeta
from ..model import (
    CoulombRadial,
    HarmonicRadial,
    InfiniteWell,
    MassProfile,
    Morse,
    RosenMorseTrig,
    potential_identity_residual,
)


@dataclass(frozen=True)
class TestFunction:
    name: str
    f: Callable
    d1: Callable
    d2: Callable

    __test__ = False  # not a pytest class


def gaussian(width: float = 1.0) -> TestFunction:
    s = 1.0 / width**2
    return TestFunction(
        f"exp(-x^2/{width:g}^2)",
        lambda x: np.exp(-s * x * x),
        lambda x: -2 * s * x * np.exp(-s * x * x),
        lambda x: (4 * s * s * x * x - 2 * s) * np.exp(-s * x * x),
    )


def poly_exp() -> TestFunction:
    # (1 + x^2) exp(-x), positive everywhere
    return TestFunction(
        "(1+x^2)exp(-x)",
        lambda x: (1 + x * x) * np.exp(-x),
        lambda x: (2 * x - 1 - x * x) * np.exp(-x),
        lambda x: (x * x - 4 * x + 3) * np.exp(-x),
    )


def trig_shift(amplitude: float = 0.5, freq: float = 1.0, offset: float = 1.0) -> TestFunction:
    a, w, c = amplitude, freq, offset
    return TestFunction(
        f"{c:g}+{a:g}cos({w:g}x)",
        lambda x: c + a * np.cos(w * x),
        lambda x: -a * w * np.sin(w * x),
        lambda x: -a * w * w * np.cos(w * x),
    )


def unit() -> TestFunction:
    return TestFunction(
        "1",
        lambda x: np.ones_like(x),
        lambda x: np.zeros_like(x),
        lambda x: np.zeros_like(x),
    )


def _scaled(lhs, rhs) -> float:
    return float(np.max(np.abs(lhs - rhs) / (1.0 + np.abs(lhs) + np.abs(rhs))))


def sqrt_substitution_residual(weight: TestFunction, reduced: TestFunction, x) -> float:
    """Y = sqrt(w) Yt turns Y''/Y - (w'/w) Y'/Y into -3/4 (w'/w)^2 + w''/(2w) + Yt''/Yt.

    Serves both the axial (w = k, Y = Z) and azimuthal (w = f, Y = Phi) forms.
    """
    x = np.asarray(x, dtype=float)
    w, w1, w2 = weight.f(x), weight.d1(x), weight.d2(x)
    t, t1, t2 = reduced.f(x), reduced.d1(x), reduced.d2(x)
    s = np.sqrt(w)
    Y = s * t
    Y1 = w1 / (2 * s) * t + s * t1
    Y2 = (w2 / (2 * s) - w1 * w1 / (4 * w * s)) * t + (w1 / s) * t1 + s * t2
    lhs = Y2 / Y - (w1 / w) * (Y1 / Y)
    rhs = -0.75 * (w1 / w) ** 2 + 0.5 * w2 / w + t2 / t
    return _scaled(lhs, rhs)


def radial_substitution_residual(upsilon: float, b: float, U: TestFunction, rho) -> float:
    """R = rho^u U with g = (b/2) rho^(2u+1): R''/R - (g'/g - 1/rho) R'/R = U''/U - u(u+1)/rho^2."""
    rho = np.asarray(rho, dtype=float)
    mp = MassProfile(upsilon, b)
    u = upsilon
    P, P1, P2 = rho**u, u * rho ** (u - 1), u * (u - 1) * rho ** (u - 2)
    Uf, U1, U2 = U.f(rho), U.d1(rho), U.d2(rho)
    R = P * Uf
    R1 = P1 * Uf + P * U1
    R2 = P2 * Uf + 2 * P1 * U1 + P * U2
    g, g1 = mp(rho), mp.derivative(rho)
    lhs = R2 / R - (g1 / g - 1 / rho) * (R1 / R)
    rhs = U2 / Uf - u * (u + 1) / rho**2
    return _scaled(lhs, rhs)


def radial_coefficient_residual(upsilon: float, b: float, p: AmbiguityParameters, m: int, rho) -> float:
    """Mass terms of the radial bracket collapse to the inverse-square coefficient of ell.

    zeta/2 (g'/g)^2 - (beta+1)/2 (g'/(rho g) + g''/g) - u(u+1)/rho^2 - m^2/rho^2
    must equal -(ell^2 - 1/4)/rho^2.
    """
    rho = np.asarray(rho, dtype=float)
    mp = MassProfile(upsilon, b)
    g, g1, g2 = mp(rho), mp.derivative(rho), mp.second_derivative(rho)
    z = float(zeta(p))
    beta = float(p.beta)
    u = upsilon
    lhs = 0.5 * z * (g1 / g) ** 2 - 0.5 * (beta + 1) * (g1 / (rho * g) + g2 / g) - (u * (u + 1) + m * m) / rho**2
    rhs = -(float(ell_tilde(upsilon, m, p).radicand) - 0.25) / rho**2
    return _scaled(lhs, rhs)


def axial_coefficient_residual(k: TestFunction, Zt: TestFunction, p: AmbiguityParameters, z) -> float:
    """Axial bracket of the general equation equals Zt''/Zt + (2 zeta - 3)/4 (k'/k)^2 - beta/2 k''/k."""
    z = np.asarray(z, dtype=float)
    w, w1, w2 = k.f(z), k.d1(z), k.d2(z)
    t, t1, t2 = Zt.f(z), Zt.d1(z), Zt.d2(z)
    s = np.sqrt(w)
    Y = s * t
    Y1 = w1 / (2 * s) * t + s * t1
    Y2 = (w2 / (2 * s) - w1 * w1 / (4 * w * s)) * t + (w1 / s) * t1 + s * t2
    ze, beta = float(zeta(p)), float(p.beta)
    lhs = Y2 / Y - (w1 / w) * (Y1 / Y) + 0.5 * ze * (w1 / w) ** 2 - 0.5 * (beta + 1) * w2 / w
    rhs = t2 / t + (2 * ze - 3) / 4 * (w1 / w) ** 2 - 0.5 * beta * w2 / w
    return _scaled(lhs, rhs)


# reference composed potentials ---------------------------------------------

REFERENCE_COMPOSITIONS = {
    "harmonic/well": (MassProfile(0.5, 2.0), HarmonicRadial(2.0), InfiniteWell(np.pi)),
    "harmonic/morse": (MassProfile(0.5, 2.0), HarmonicRadial(2.0), Morse(4.0, 1.0)),
    "harmonic/rosen_morse": (MassProfile(0.5, 2.0), HarmonicRadial(2.0), RosenMorseTrig(1.0, np.pi)),
    "coulomb/well": (MassProfile(-1.0, 2.0), CoulombRadial(1.0), InfiniteWell(np.pi)),
    "coulomb/morse": (MassProfile(-1.0, 2.0), CoulombRadial(1.0), Morse(4.0, 1.0)),
    "coulomb/rosen_morse": (MassProfile(-1.0, 2.0), CoulombRadial(1.0), RosenMorseTrig(1.0, np.pi)),
}


def sample_points(vz, n: int, rng: np.random.Generator, rho_range=(0.05, 10.0)) -> np.ndarray:
    rho = rng.uniform(*rho_range, size=n)
    if isinstance(vz, InfiniteWell):
        z = rng.uniform(0.0, vz.L, size=n)
    elif isinstance(vz, RosenMorseTrig):
        z = rng.uniform(0.02 * vz.d, 0.98 * vz.d, size=n)
    else:
        z = rng.uniform(-2.0, 10.0, size=n)
    return np.column_stack([rho, z])


def identity_residuals(n_samples: int = 10_000, seed: int = 0) -> dict[str, float]:
    """Residual of every identity on deterministic samples; keys are stable names."""
    rng = np.random.default_rng(seed)
    report: dict[str, float] = {}
    for name, (mp, vr, vz) in REFERENCE_COMPOSITIONS.items():
        pts = sample_points(vz, n_samples, rng)
        report[f"composition:{name}"] = potential_identity_residual(mp, vr, vz, pts, relative=True)

    z = np.linspace(-3.0, 3.0, 241)
    phi = np.linspace(0.0, 2 * np.pi, 241)
    rho = np.linspace(0.1, 4.0, 241)
    report["axial_substitution:k=2+sin"] = sqrt_substitution_residual(
        TestFunction("2+sin", lambda x: 2 + np.sin(x), np.cos, lambda x: -np.sin(x)), poly_exp(), z
    )
    report["axial_substitution:k=1"] = sqrt_substitution_residual(unit(), gaussian(), z)
    report["azimuthal_substitution:f=1+0.5cos"] = sqrt_substitution_residual(
        trig_shift(), trig_shift(0.3, 2.0, 2.0), phi
    )
    report["azimuthal_substitution:f=1"] = sqrt_substitution_residual(unit(), trig_shift(0.3, 2.0, 2.0), phi)
    for u in (0.5, -1.0, -1.5, 0.3):
        report[f"radial_substitution:upsilon={u:g}"] = radial_substitution_residual(u, 2.0, gaussian(), rho)
    for setname, p in NAMED_ORDERINGS.items():
        for u in (0.5, -1.0):
            report[f"radial_coefficient:{setname}:upsilon={u:g}"] = radial_coefficient_residual(u, 2.0, p, 1, rho)
        report[f"axial_coefficient:{setname}"] = axial_coefficient_residual(
            trig_shift(0.4, 1.0, 1.5), gaussian(2.0), p, z
        )
    return report
