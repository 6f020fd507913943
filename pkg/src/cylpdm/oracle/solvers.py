"""Finite-difference eigensolvers for the axial and radial separated equations.

Both operators are discretised with second-order central differences and
Dirichlet ends, giving symmetric tridiagonal matrices handled by the Sturm
bisection in :mod:`cylpdm.oracle.tridiag`. Each level is extrapolated once
(grids N and 2N+1, spacing exactly halved); the reported convergence estimate
is the change of that extrapolated value when the pair is shifted to
(2N+1, 4N+3).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..ambiguity import AmbiguityParameters, ell_tilde
from ..analytic import COULOMB, HARMONIC, check_family
from ..model import (
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
from .grid import Grid1D, richardson
from .tridiag import tridiag_lowest_eigs

log = logging.getLogger(__name__)

DEFAULT_POINTS = 2000
AXIAL_TOLERANCE = 1e-6
RADIAL_TOLERANCE = 1e-5
NEAR_CRITICAL_FACTOR = 100.0
# Morse wall is cut where D exp(-2 eps z) ~ 1e6 D
MORSE_WALL_FACTOR = 1e6
MORSE_RIGHT = 30.0


class OracleError(RuntimeError):
    pass


class BracketError(OracleError):
    def __init__(self, message: str, F_lo: float | None = None, F_hi: float | None = None):
        super().__init__(message)
        self.F_lo = F_lo
        self.F_hi = F_hi


@dataclass(frozen=True)
class EigenResult:
    level_index: int
    value: float
    grid: Grid1D
    convergence_estimate: float
    converged: bool
    flags: tuple[str, ...] = ()


def _dirichlet_eigs(potential: Callable, grid: Grid1D, k: int) -> np.ndarray:
    x = grid.points()
    inv_h2 = 1.0 / grid.h**2
    diag = 2.0 * inv_h2 + np.asarray(potential(x), dtype=float)
    off = np.full(grid.n_points - 1, -inv_h2)
    return tridiag_lowest_eigs(diag, off, k)


def extrapolated_levels(potential, grid: Grid1D, k: int, estimate: bool = True):
    """(values, estimates) for the ``k`` lowest levels of -d2/dx2 + potential."""
    fine = grid.refined()
    v1 = _dirichlet_eigs(potential, grid, k)
    v2 = _dirichlet_eigs(potential, fine, k)
    values, err = richardson(v1, v2)
    if estimate:
        v4 = _dirichlet_eigs(potential, fine.refined(), k)
        values_fine, _ = richardson(v2, v4)
        err = np.abs(values - values_fine)
    return np.atleast_1d(values), np.atleast_1d(err)


def _results(values, errors, grid, tolerance, flags=()):
    out = []
    for j, (v, e) in enumerate(zip(values, errors)):
        ok = bool(e <= tolerance * max(abs(v), 1.0))
        out.append(EigenResult(j, float(v), grid, float(e), ok, tuple(flags)))
    return out


# axial --------------------------------------------------------------------


def default_axial_grid(vz: AxialPotential, n_points: int = DEFAULT_POINTS, morse_window=None) -> Grid1D:
    if isinstance(vz, InfiniteWell):
        return Grid1D(0.0, vz.L, n_points)
    if isinstance(vz, RosenMorseTrig):
        # interior nodes start one spacing off each singular end
        return Grid1D(0.0, vz.d, n_points)
    if isinstance(vz, Morse):
        if morse_window is not None:
            return Grid1D(float(morse_window[0]), float(morse_window[1]), n_points)
        left = -math.log(MORSE_WALL_FACTOR) / (2.0 * vz.epsilon)
        return Grid1D(left, MORSE_RIGHT / vz.epsilon, n_points)
    if isinstance(vz, FreeAxial):
        raise ModelError("free axial motion has no discrete spectrum to solve for")
    raise ModelError(f"unsupported axial potential {vz!r}")


def solve_axial(
    vz: AxialPotential,
    grid: Grid1D | None = None,
    n_levels: int = 1,
    n_points: int = DEFAULT_POINTS,
    tolerance: float = AXIAL_TOLERANCE,
    morse_window=None,
) -> list[EigenResult]:
    """Lowest ``n_levels`` of [-d2/dz2 + Vz] Z = kz2 Z; values are kz2."""
    if grid is None:
        grid = default_axial_grid(vz, n_points, morse_window)
    values, errors = extrapolated_levels(vz, grid, n_levels)
    return _results(values, errors, grid, tolerance)


# radial -------------------------------------------------------------------


def radial_operator_potential(ell: float, vr: RadialPotential, mp: MassProfile, E: float):
    """(ell**2 - 1/4)/rho**2 + Vr(rho) - b rho**(2 upsilon + 1) E."""
    centrifugal = ell * ell - 0.25
    power = 2.0 * mp.upsilon + 1.0

    def potential(rho):
        return centrifugal / rho**2 + vr(rho) - mp.b * rho**power * E

    return potential


def _check_ell(ell) -> float:
    if ell is None:
        raise ValueError("ell is complex: the reality constraint is violated")
    ell = float(ell)
    if not ell >= 0:
        raise ValueError(f"ell must be a nonnegative real number, got {ell}")
    return ell


def radial_grid(
    vr: RadialPotential,
    mp: MassProfile,
    ell: float,
    E: float,
    n_levels: int,
    n_points: int = DEFAULT_POINTS,
    rho_cap: float | None = None,
) -> Grid1D:
    """Dirichlet grid on (0, rho_max) wide enough for the requested levels.

    Supported for the harmonic (upsilon = 1/2) and Coulomb (upsilon = -1)
    pairings; other settings must pass an explicit grid.
    """
    top = n_levels - 1
    if mp.upsilon == 0.5 and isinstance(vr, HarmonicRadial):
        c = 0.25 * vr.a**2 - mp.b * E
        if c <= 0:
            if rho_cap is None:
                raise OracleError(f"radial operator is not confining (a**2/4 - bE = {c:.6g} <= 0)")
            return Grid1D(0.0, rho_cap, n_points)
        rho_max = math.sqrt((2.0 * (2 * top + ell + 1) + 60.0) / math.sqrt(c))
    elif mp.upsilon == -1.0 and isinstance(vr, CoulombRadial):
        charge = vr.A_tilde + 0.5 * mp.b * E
        if charge <= 0:
            if rho_cap is None:
                raise OracleError(f"radial Coulomb term is not attractive (charge {charge:.6g} <= 0)")
            return Grid1D(0.0, rho_cap, n_points)
        nu = top + ell + 1.0
        rho_max = (36.0 + 4.0 * nu) * nu / charge
    else:
        raise OracleError("no default radial grid for this mass/potential pairing; pass grid=")
    if rho_cap is not None:
        rho_max = min(rho_max, rho_cap)
    return Grid1D(0.0, rho_max, n_points)


def solve_radial_linear(
    ell: float,
    vr: RadialPotential,
    mp: MassProfile,
    E_fixed: float,
    grid: Grid1D | None = None,
    n_levels: int = 1,
    n_points: int = DEFAULT_POINTS,
    tolerance: float = RADIAL_TOLERANCE,
    estimate: bool = True,
) -> list[EigenResult]:
    """Lowest levels of the radial operator at fixed energy; compare values with -kz2.

    Channels with ell < 1/2 are flagged ``near_critical`` and judged against
    a tolerance widened by ``NEAR_CRITICAL_FACTOR``.
    """
    ell = _check_ell(ell)
    if grid is None:
        grid = radial_grid(vr, mp, ell, E_fixed, n_levels, n_points)
    if grid.x_min < 0:
        raise ValueError("radial grid must lie on rho >= 0")
    potential = radial_operator_potential(ell, vr, mp, E_fixed)
    values, errors = extrapolated_levels(potential, grid, n_levels, estimate)
    flags = ()
    if ell < 0.5:
        flags = ("near_critical",)
        tolerance *= NEAR_CRITICAL_FACTOR
    return _results(values, errors, grid, tolerance, flags)


# self-consistent energy ---------------------------------------------------


@dataclass(frozen=True)
class SelfConsistentSolution:
    energy: float
    residual: float
    iterations: int
    bracket: tuple[float, float]
    convergence_estimate: float
    converged: bool
    grid: Grid1D | None = None
    flags: tuple[str, ...] = field(default_factory=tuple)


def _default_bracket(family, mp, vr, ell, n_rho, kz2, grow):
    if mp.b <= 0:
        raise OracleError("default energy bracket assumes b > 0; pass bracket= explicitly")
    if family == HARMONIC:
        top = vr.a**2 / (4 * mp.b)
        shift = (kz2 / (2 * n_rho + ell + 1)) ** 2 / (4 * mp.b)
        return top - 10.0 * shift * grow, top
    bt = mp.b / 2
    bottom = -vr.A_tilde / bt
    return bottom, bottom + 2.0 * math.sqrt(kz2) * (n_rho + ell + 1) / bt * grow


def selfconsistent_solution(
    family: str,
    mp: MassProfile,
    vr: RadialPotential,
    p: AmbiguityParameters | None,
    m: int,
    n_rho: int,
    kz2: float,
    bracket: tuple[float, float] | None = None,
    n_points: int = DEFAULT_POINTS,
    tolerance: float = 1e-8,
    ell: float | None = None,
    max_expand: int = 6,
    max_iter: int = 200,
) -> SelfConsistentSolution:
    """Find E with lambda_{n_rho}(E) + kz2 = 0, E entering the radial operator.

    ``ell`` overrides the index derived from (upsilon, m, p).
    """
    check_family(family, mp, vr)
    if ell is None:
        ell = ell_tilde(mp.upsilon, m, p).value
    ell = _check_ell(ell)
    flags = ("near_critical",) if ell < 0.5 else ()

    if kz2 == 0:
        # the radial spectrum accumulates at zero exactly where confinement is lost
        shift = vr.a**2 / (4 * mp.b) if family == HARMONIC else -2.0 * vr.A_tilde / mp.b
        return SelfConsistentSolution(shift, 0.0, 0, (shift, shift), 0.0, True, None, flags + ("shift_only",))
    if family == HARMONIC and kz2 > 0:
        raise BracketError("harmonic radial operator is positive; a root needs kz2 <= 0")
    if family == COULOMB and kz2 < 0:
        raise BracketError("Coulomb radial bound states are negative; a root needs kz2 >= 0")

    n_levels = n_rho + 1
    if family == HARMONIC:
        cap = 100.0 * (2 * n_rho + ell + 2) / math.sqrt(abs(kz2))

        def grid_for(E):
            return radial_grid(vr, mp, ell, E, n_levels, n_points, rho_cap=cap)

    else:
        kappa = math.sqrt(kz2)
        nu = n_rho + ell + 1.0
        fixed = Grid1D(0.0, (36.0 + 4.0 * nu) / kappa, n_points)

        def grid_for(E):
            return fixed

    def F(E, estimate=False):
        g = grid_for(E)
        pot = radial_operator_potential(ell, vr, mp, E)
        values, errors = extrapolated_levels(pot, g, n_levels, estimate)
        return values[n_rho] + kz2, errors[n_rho], g

    if bracket is None:
        for attempt in range(max_expand + 1):
            lo, hi = _default_bracket(family, mp, vr, ell, n_rho, kz2, 2.0**attempt)
            F_lo, F_hi = F(lo)[0], F(hi)[0]
            if F_lo * F_hi < 0:
                break
        else:
            raise BracketError(f"no sign change after {max_expand} expansions", F_lo, F_hi)
    else:
        lo, hi = map(float, bracket)
        F_lo, F_hi = F(lo)[0], F(hi)[0]
        if F_lo * F_hi >= 0:
            raise BracketError(f"F has no sign change on [{lo}, {hi}]", F_lo, F_hi)

    target = tolerance * (1.0 + abs(kz2))
    mid, F_mid = lo, F_lo
    it = 0
    for it in range(1, max_iter + 1):
        mid = 0.5 * (lo + hi)
        F_mid = F(mid)[0]
        if abs(F_mid) <= target:
            break
        if (F_mid < 0) == (F_lo < 0):
            lo, F_lo = mid, F_mid
        else:
            hi, F_hi = mid, F_mid
        if hi - lo <= 4 * np.finfo(float).eps * max(abs(mid), 1.0):
            break

    F_final, lam_err, g = F(mid, estimate=True)
    slope = abs((F_hi - F_lo) / (hi - lo)) if hi != lo else math.inf
    e_err = lam_err / slope if slope > 0 else math.inf
    lam_tol = RADIAL_TOLERANCE * (NEAR_CRITICAL_FACTOR if flags else 1.0)
    converged = abs(F_final) <= 10 * target and lam_err <= lam_tol * max(abs(kz2), 1.0)
    log.debug("self-consistent E=%.12g F=%.3g after %d iterations", mid, F_final, it)
    return SelfConsistentSolution(mid, float(F_final), it, (lo, hi), float(e_err), bool(converged), g, flags)


def solve_selfconsistent_E(family, mp, vr, p, m, n_rho, kz2, bracket=None, **kwargs) -> float:
    return selfconsistent_solution(family, mp, vr, p, m, n_rho, kz2, bracket, **kwargs).energy
