"""Exit criteria for the toolkit, one test per criterion with its tolerance and time budget."""

import math
import time
from fractions import Fraction
from pathlib import Path

import pytest

from cylpdm.ambiguity import NAMED_ORDERINGS, reality_ok_coulomb, reality_ok_harmonic, zeta_minus_beta
from cylpdm.analytic import (
    COULOMB,
    HARMONIC,
    MINUS,
    PLUS,
    QuantumRanges,
    assemble_spectrum,
    axial_morse_kz2_linear,
    axial_rosen_morse_kz2,
    harmonic_energy,
)
from cylpdm.cli import run
from cylpdm.commands import DOC_MORSE, EXIT_OK, cmd_verify
from cylpdm.config import load_config
from cylpdm.model import CoulombRadial, HarmonicRadial, InfiniteWell, MassProfile, Morse, RosenMorseTrig
from cylpdm.oracle import identity_residuals, selfconsistent_solution, solve_axial, solve_radial_linear, solve_selfconsistent_E

CONFIGS = Path(__file__).resolve().parent.parent / "configs"
BDD = NAMED_ORDERINGS["BenDanielDuke"]


def report(cid, detail):
    print(f"criterion {cid}: {detail}")


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


@pytest.mark.acceptance(1, "ambiguity table: only GoraWilliams fails both constraints at m=0")
def test_criterion_1_ambiguity_table():
    with Timer() as t:
        fails_both = [
            name
            for name, p in NAMED_ORDERINGS.items()
            if not reality_ok_harmonic(p, 0) and not reality_ok_coulomb(p, 0)
        ]
        boundary = {name: zeta_minus_beta(NAMED_ORDERINGS[name]) for name in ("ZhuKroemer", "LiKuhn")}
    assert fails_both == ["GoraWilliams"]
    assert boundary == {"ZhuKroemer": Fraction(3, 2), "LiKuhn": Fraction(3, 2)}
    assert all(reality_ok_harmonic(NAMED_ORDERINGS[n], 0) for n in boundary)
    report(1, f"fails both = {fails_both}, boundary = {boundary}, {t.elapsed * 1e3:.3f} ms")
    assert t.elapsed < 1e-3


@pytest.mark.acceptance(2, "identity residuals: compositions <= 1e-12, substitutions <= 1e-9")
def test_criterion_2_identity_residuals():
    with Timer() as t:
        residuals = identity_residuals(n_samples=10_000, seed=0)
    compositions = {k: v for k, v in residuals.items() if k.startswith("composition:")}
    others = {k: v for k, v in residuals.items() if not k.startswith("composition:")}
    assert len(compositions) == 6
    assert max(compositions.values()) <= 1e-12
    assert max(others.values()) <= 1e-9
    report(2, f"max composition {max(compositions.values()):.2e}, max substitution {max(others.values()):.2e}, {t.elapsed:.2f} s")
    assert t.elapsed < 1.0


@pytest.mark.acceptance(3, "axial well oracle: relative error <= 1e-6")
def test_criterion_3_axial_well():
    worst = 0.0
    with Timer() as t:
        for L in (1.0, math.pi, 2 * math.pi):
            res = solve_axial(InfiniteWell(L), n_levels=5, n_points=2000)
            for n_z, r in enumerate(res, start=1):
                exact = (n_z * math.pi / L) ** 2
                worst = max(worst, abs(r.value - exact) / exact)
    report(3, f"worst relative error {worst:.2e}, {t.elapsed:.2f} s")
    assert worst <= 1e-6
    assert t.elapsed < 5.0


@pytest.mark.acceptance(4, "Rosen-Morse oracle matches the closed form to 1e-4 relative")
def test_criterion_4_rosen_morse():
    worst = 0.0
    with Timer() as t:
        for U0, d in ((1.0, math.pi), (5.0, 1.0)):
            res = solve_axial(RosenMorseTrig(U0, d), n_levels=3, n_points=2000)
            for n, r in enumerate(res):
                exact = axial_rosen_morse_kz2(U0, d, n)
                worst = max(worst, abs(r.value - exact) / abs(exact))
    report(4, f"worst relative error {worst:.2e}, {t.elapsed:.2f} s")
    assert worst <= 1e-4
    assert t.elapsed < 10.0


@pytest.mark.acceptance(5, "Morse ground level: oracle -2.25, linear form 1.5, classified as documented")
def test_criterion_5_morse_documented(capsys):
    with Timer() as t:
        oracle = solve_axial(Morse(4.0, 1.0), n_levels=1)[0].value
        linear = axial_morse_kz2_linear(4.0, 1.0, 0).value
        cfg = load_config(CONFIGS / "harmonic_morse.yaml")
        verify = cmd_verify(cfg)
        code = run(["verify", "--config", str(CONFIGS / "harmonic_morse.yaml")])
    err = capsys.readouterr().err
    ground = next(x for x in verify.lines if x.qn.n_axial == 0)
    assert oracle == pytest.approx(-2.25, abs=1e-4)
    assert linear == pytest.approx(1.5, abs=1e-15)
    assert ground.status == DOC_MORSE
    assert verify.exit_code == EXIT_OK and code == 0
    assert "note:" in err and DOC_MORSE in err
    report(5, f"oracle {oracle:.8f}, linear form {linear}, status {ground.status}, exit {code}, {t.elapsed:.2f} s")
    assert t.elapsed < 5.0


@pytest.mark.acceptance(6, "radial oscillator levels 2(2n+ell+1) to 1e-5 relative")
def test_criterion_6_radial_harmonic():
    worst = 0.0
    # a**2/4 - bE = 1 makes the confining term exactly rho**2
    with Timer() as t:
        for ell in (0.5, 1.0, math.sqrt(2.0)):
            res = solve_radial_linear(ell, HarmonicRadial(2.0), MassProfile(0.5, 1.0), 0.0, n_levels=3)
            for n, r in enumerate(res):
                exact = 2 * (2 * n + ell + 1)
                worst = max(worst, abs(r.value - exact) / exact)
    report(6, f"worst relative error {worst:.2e}, {t.elapsed:.2f} s")
    assert worst <= 1e-5
    assert t.elapsed < 10.0


@pytest.mark.acceptance(7, "self-consistent harmonic energy matches the closed form to 1e-5")
def test_criterion_7_selfconsistent_round_trip():
    mp, vr = MassProfile(0.5, 2.0), HarmonicRadial(2.0)
    worst = 0.0
    with Timer() as t:
        for kz2 in (-2.0, -1.0, -0.5):
            for n_rho in (0, 1):
                E_oracle = solve_selfconsistent_E(HARMONIC, mp, vr, BDD, 0, n_rho, kz2)
                E_closed = harmonic_energy(2.0, 2.0, 0, n_rho, kz2, BDD)
                worst = max(worst, abs(E_oracle - E_closed))
        shift_oracle = solve_selfconsistent_E(HARMONIC, mp, vr, BDD, 0, 0, 0.0)
        shift_closed = harmonic_energy(2.0, 2.0, 0, 0, 0.0, BDD)
    assert shift_oracle == shift_closed == 2.0**2 / (4 * 2.0)
    report(7, f"worst |dE| {worst:.2e}, shift {shift_oracle}, {t.elapsed:.2f} s")
    assert worst <= 1e-5
    assert t.elapsed < 30.0


@pytest.mark.acceptance(8, "Coulomb branch sum exact; conformance column populated; oracle self-consistent")
def test_criterion_8_coulomb():
    mp, vr = MassProfile(-1.0, 2.0), CoulombRadial(1.0)
    bt = mp.b / 2
    with Timer() as t:
        worst_sum = 0.0
        for vz, levels in ((InfiniteWell(math.pi), [1, 2, 3]), (RosenMorseTrig(1.0, math.pi), [0, 1])):
            lines = assemble_spectrum(COULOMB, mp, vr, vz, BDD, QuantumRanges([0, 1, 2], [0, 1], levels))
            for plus, minus in zip(lines[::2], lines[1::2]):
                assert (plus.branch, minus.branch) == (PLUS, MINUS) and plus.qn == minus.qn
                worst_sum = max(worst_sum, abs(plus.E_analytic + minus.E_analytic + 2 * vr.A_tilde / bt))

        verify = cmd_verify(load_config(CONFIGS / "coulomb_well.yaml"))
        for line in verify.lines:
            assert line.extras["coulomb_denominator_oracle"] is not None
            assert line.extras["coulomb_denominator_closed_form"] == line.qn.n_rho + line.ell + 1

        worst_est = 0.0
        for kz2 in (1.0, 4.0):
            for n_rho in (0, 1):
                sol = selfconsistent_solution(COULOMB, mp, vr, BDD, 0, n_rho, kz2)
                assert sol.converged
                worst_est = max(worst_est, sol.convergence_estimate)
    assert worst_sum <= 1e-12
    assert worst_est <= 1e-5
    dens = [(x.qn.n_rho, round(x.extras["coulomb_denominator_oracle"], 6)) for x in verify.lines if x.branch == PLUS]
    report(8, f"branch sum error {worst_sum:.1e}, oracle denominators {dens}, convergence {worst_est:.1e}, {t.elapsed:.2f} s")
    assert t.elapsed < 30.0


@pytest.mark.acceptance(9, "two verify runs give byte-identical CSV")
def test_criterion_9_determinism(tmp_path):
    names = ["harmonic_well", "coulomb_well", "harmonic_morse", "harmonic_rosen_morse"]
    outputs = []
    for attempt in range(2):
        blobs = []
        for name in names:
            out = tmp_path / f"{name}.{attempt}.csv"
            assert run(["verify", "--config", str(CONFIGS / f"{name}.yaml"), "--out", str(out)]) == 0
            blobs.append(out.read_bytes())
        outputs.append(blobs)
    assert outputs[0] == outputs[1]
    report(9, f"{len(names)} configs, {sum(map(len, outputs[0]))} bytes identical")
