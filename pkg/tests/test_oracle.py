import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cylpdm.ambiguity import NAMED_ORDERINGS
from cylpdm.analytic import COULOMB, HARMONIC, axial_rosen_morse_kz2, harmonic_energy_from_ell
from cylpdm.model import CoulombRadial, FreeAxial, HarmonicRadial, InfiniteWell, MassProfile, ModelError, Morse, RosenMorseTrig
from cylpdm.oracle import (
    BracketError,
    Grid1D,
    richardson,
    selfconsistent_solution,
    solve_axial,
    solve_radial_linear,
    solve_selfconsistent_E,
)
from cylpdm.oracle.solvers import _dirichlet_eigs, extrapolated_levels

BDD = NAMED_ORDERINGS["BenDanielDuke"]
PHI = (1 + math.sqrt(5)) / 2


def zero(x):
    return np.zeros_like(x)


def test_grid_geometry():
    g = Grid1D(0.0, 1.0, 99)
    assert g.h == pytest.approx(0.01)
    assert g.points()[0] == pytest.approx(0.01) and g.points()[-1] == pytest.approx(0.99)
    assert g.refined().h == pytest.approx(g.h / 2, rel=1e-15)
    with pytest.raises(ValueError):
        Grid1D(1.0, 0.0, 100)
    with pytest.raises(ValueError):
        Grid1D(0.0, 1.0, 4)


def test_richardson_converged_and_model():
    assert richardson(2.5, 2.5) == (2.5, 0.0)
    lam, c, h = 3.0, 0.7, 0.1
    value, _ = richardson(lam + c * h**2, lam + c * (h / 2) ** 2)
    assert value == pytest.approx(lam, rel=1e-14)
    v, e = richardson(np.array([1.0, 2.0]), np.array([1.0, 2.0]))
    assert np.all(e == 0) and np.all(v == [1.0, 2.0])


def test_richardson_well_ground_level():
    g = Grid1D(0.0, 1.0, 500)
    v, _ = richardson(_dirichlet_eigs(zero, g, 1)[0], _dirichlet_eigs(zero, g.refined(), 1)[0])
    assert abs(v - math.pi**2) <= 1e-7 * math.pi**2


def test_second_order_convergence_factor():
    g = Grid1D(0.0, 1.0, 200)
    errs = [abs(_dirichlet_eigs(zero, x, 1)[0] - math.pi**2) for x in (g, g.refined(), g.refined().refined())]
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.01)
    assert errs[1] / errs[2] == pytest.approx(4.0, rel=0.01)


@pytest.mark.parametrize("L", [1.0, math.pi])
def test_well_levels(L):
    res = solve_axial(InfiniteWell(L), n_levels=3)
    for n, r in enumerate(res, start=1):
        assert r.converged
        assert r.value == pytest.approx((n * math.pi / L) ** 2, rel=1e-6)


def test_morse_matches_standard_closed_form():
    res = solve_axial(Morse(4.0, 1.0), n_levels=2)
    assert res[0].value == pytest.approx(-2.25, abs=1e-6)
    assert res[1].value == pytest.approx(-0.25, abs=1e-6)
    assert all(r.converged for r in res)


def test_morse_window_truncation_is_stable():
    base = solve_axial(Morse(4.0, 1.0))[0].value
    wider = solve_axial(Morse(4.0, 1.0), morse_window=(-math.log(1e6) / 2, 45.0), n_points=3000)[0].value
    assert wider == pytest.approx(base, abs=1e-6)


def test_rosen_morse_ground_level():
    r = solve_axial(RosenMorseTrig(1.0, math.pi))[0]
    assert r.value == pytest.approx(PHI, rel=1e-6)
    assert r.value == pytest.approx(axial_rosen_morse_kz2(1.0, math.pi, 0), rel=1e-6)


def test_free_axial_has_no_oracle_grid():
    with pytest.raises(ModelError):
        solve_axial(FreeAxial())


@settings(max_examples=15)
@given(st.floats(0.1, 20.0), st.floats(0.2, 0.8))
def test_positive_perturbation_raises_levels(amp, centre):
    g = Grid1D(0.0, 1.0, 300)
    base = _dirichlet_eigs(zero, g, 3)
    bumped = _dirichlet_eigs(lambda x: amp * np.exp(-((x - centre) ** 2) / 0.01), g, 3)
    assert np.all(bumped >= base - 1e-9)


@given(st.floats(-50.0, 50.0))
def test_constant_shift_shifts_levels(c):
    g = Grid1D(0.0, 1.0, 100)
    base = _dirichlet_eigs(zero, g, 2)
    shifted = _dirichlet_eigs(lambda x: np.full_like(x, c), g, 2)
    np.testing.assert_allclose(shifted, base + c, atol=1e-7 * (abs(c) + base[-1]))


# radial channel: a**2/4 - bE = 1 gives the potential rho**2


@pytest.mark.parametrize("ell", [0.5, 1.0, math.sqrt(2)])
def test_radial_oscillator_levels(ell):
    res = solve_radial_linear(ell, HarmonicRadial(2.0), MassProfile(0.5, 1.0), 0.0, n_levels=3)
    for n, r in enumerate(res):
        assert r.value == pytest.approx(2 * (2 * n + ell + 1), rel=1e-5)


def test_radial_half_oscillator_ground_level():
    assert solve_radial_linear(0.5, HarmonicRadial(2.0), MassProfile(0.5, 1.0), 0.0)[0].value == pytest.approx(3.0, rel=1e-6)


def test_radial_coulomb_level_against_shifted_quantum_number():
    # effective charge A + bE/2 = 1 with ell = 1/2: the ODE gives -1, the shifted denominator gives -1/2.25
    r = solve_radial_linear(0.5, CoulombRadial(1.0), MassProfile(-1.0, 2.0), 0.0)[0]
    assert r.converged
    assert r.value == pytest.approx(-1.0, rel=1e-5)
    assert abs(r.value - (-1 / 1.5**2)) > 0.1


def test_radial_near_critical_flag():
    r = solve_radial_linear(0.2, HarmonicRadial(2.0), MassProfile(0.5, 1.0), 0.0)[0]
    assert "near_critical" in r.flags
    assert r.value == pytest.approx(2 * 1.2, rel=1e-2)


def test_radial_rejects_complex_ell():
    with pytest.raises(ValueError):
        solve_radial_linear(None, HarmonicRadial(2.0), MassProfile(0.5, 1.0), 0.0)


def test_extrapolated_levels_report_estimates():
    values, est = extrapolated_levels(zero, Grid1D(0.0, 1.0, 400), 2)
    assert values.shape == est.shape == (2,)
    assert np.all(est < 1e-8)


# self-consistent energy


def test_selfconsistent_shift_only():
    sol = selfconsistent_solution(HARMONIC, MassProfile(0.5, 2.0), HarmonicRadial(2.0), BDD, 0, 0, 0.0)
    assert sol.energy == 0.5 and "shift_only" in sol.flags
    E = solve_selfconsistent_E(COULOMB, MassProfile(-1.0, 2.0), CoulombRadial(1.0), BDD, 0, 0, 0.0)
    assert E == -1.0


def test_selfconsistent_harmonic_example():
    E = solve_selfconsistent_E(HARMONIC, MassProfile(0.5, 2.0), HarmonicRadial(2.0), None, 0, 0, -2.0, ell=1.0)
    assert E == pytest.approx(0.375, abs=1e-5)


@pytest.mark.parametrize("n_rho", [0, 2])
def test_selfconsistent_harmonic_matches_closed_form(n_rho):
    sol = selfconsistent_solution(HARMONIC, MassProfile(0.5, 2.0), HarmonicRadial(2.0), BDD, 1, n_rho, -3.0)
    ell = math.sqrt(2.0)  # BenDanielDuke, m = 1: radicand 1 + 1
    assert sol.converged
    assert sol.energy == pytest.approx(harmonic_energy_from_ell(2.0, 2.0, n_rho, ell, -3.0), abs=1e-5)


def test_selfconsistent_coulomb_quantum_number():
    sol = selfconsistent_solution(COULOMB, MassProfile(-1.0, 2.0), CoulombRadial(1.0), BDD, 0, 0, 1.0)
    assert sol.converged
    # kz / b~ (n + ell + 1/2) - A / b~ with kz = 1, ell = 1/2, b~ = 1
    assert sol.energy == pytest.approx(0.0, abs=1e-6)


def test_bracket_failures():
    mp, vr = MassProfile(0.5, 2.0), HarmonicRadial(2.0)
    with pytest.raises(BracketError):
        selfconsistent_solution(HARMONIC, mp, vr, BDD, 0, 0, 1.0)
    with pytest.raises(BracketError) as info:
        selfconsistent_solution(HARMONIC, mp, vr, BDD, 0, 0, -2.0, bracket=(0.0, 0.1))
    assert info.value.F_lo is not None and info.value.F_hi is not None
    with pytest.raises(BracketError):
        selfconsistent_solution(COULOMB, MassProfile(-1.0, 2.0), CoulombRadial(1.0), BDD, 0, 0, -1.0)
