from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MIN_POINTS = 16


@dataclass(frozen=True)
class Grid1D:
    """Uniform Dirichlet grid: ``n_points`` interior nodes strictly inside (x_min, x_max)."""

    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self) -> None:
        if not self.x_min < self.x_max:
            raise ValueError(f"need x_min < x_max, got [{self.x_min}, {self.x_max}]")
        if self.n_points < MIN_POINTS:
            raise ValueError(f"need at least {MIN_POINTS} interior points, got {self.n_points}")

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points + 1)

    def points(self) -> np.ndarray:
        return self.x_min + self.h * np.arange(1, self.n_points + 1)

    def refined(self) -> "Grid1D":
        """Same interval with exactly half the spacing (2N + 1 interior points)."""
        return Grid1D(self.x_min, self.x_max, 2 * self.n_points + 1)

    def describe(self) -> str:
        return f"[{self.x_min:.6g}, {self.x_max:.6g}] N={self.n_points}"


def richardson(value_N, value_2N, order: int = 2):
    """Extrapolate two solves whose spacing differs by a factor of two.

    Returns (extrapolated, error_estimate) where the estimate is
    |value_2N - value_N| / (2**order - 1). Works elementwise on arrays.
    """
    f = 2.0**order
    v1 = np.asarray(value_N, dtype=float)
    v2 = np.asarray(value_2N, dtype=float)
    extrapolated = (f * v2 - v1) / (f - 1.0)
    error = np.abs(v2 - v1) / (f - 1.0)
    if extrapolated.ndim == 0:
        return float(extrapolated), float(error)
    return extrapolated, error
