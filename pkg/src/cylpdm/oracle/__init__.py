"""Independent numerical checks of the closed-form spectra."""

from .grid import Grid1D, richardson
from .identities import identity_residuals
from .solvers import (
    BracketError,
    EigenResult,
    OracleError,
    SelfConsistentSolution,
    default_axial_grid,
    radial_grid,
    selfconsistent_solution,
    solve_axial,
    solve_radial_linear,
    solve_selfconsistent_E,
)
from .tridiag import sturm_count, tridiag_lowest_eigs

__all__ = [
    "BracketError",
    "EigenResult",
    "Grid1D",
    "OracleError",
    "SelfConsistentSolution",
    "default_axial_grid",
    "identity_residuals",
    "radial_grid",
    "richardson",
    "selfconsistent_solution",
    "solve_axial",
    "solve_radial_linear",
    "solve_selfconsistent_E",
    "sturm_count",
    "tridiag_lowest_eigs",
]
