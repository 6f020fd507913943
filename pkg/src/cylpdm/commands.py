"""Command implementations behind the CLI; each returns data, never prints."""

from __future__ import annotations

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

from .ambiguity import (
    NAMED_ORDERINGS,
    AmbiguityParameters,
    reality_ok_coulomb,
    reality_ok_harmonic,
    zeta,
    zeta_minus_beta,
)
from .analytic import (
    COULOMB,
    HARMONIC,
    PLUS,
    SpectrumLine,
    assemble_spectrum,
    axial_level_index,
    axial_morse_kz2_standard,
    harmonic_energy_from_ell,
    is_complex,
)
from .config import ConfigError, RunConfig, config_from_dict, parse_ordering, set_dotted
from .model import Morse
from .oracle import BracketError, OracleError, identity_residuals, selfconsistent_solution, solve_axial
from .oracle.solvers import NEAR_CRITICAL_FACTOR

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_CONFIG = 2
EXIT_UNCONVERGED = 3

AGREE = "agree"
DOC_MORSE = "documented:morse_kz2"
DOC_COULOMB = "documented:coulomb_denominator"
NEAR_CRITICAL = "near_critical"
CONSTRAINT = "constraint_violated"
UNEXPECTED = "unexpected"
UNCONVERGED = "unconverged"

_STATUS_RANK = {AGREE: 0, NEAR_CRITICAL: 1, DOC_MORSE: 2, DOC_COULOMB: 2, CONSTRAINT: 3, UNCONVERGED: 4, UNEXPECTED: 5}


# ambiguity table -------------------------------------------------------------

AMBIGUITY_COLUMNS = (
    "set",
    "alpha",
    "beta",
    "gamma",
    "m",
    "zeta",
    "zeta_minus_beta",
    "harmonic_ok",
    "coulomb_ok",
    "flags",
)


def ambiguity_row(name: str, p: AmbiguityParameters, m: int) -> dict:
    zmb = zeta_minus_beta(p)
    flags = []
    if zmb == Fraction(m * m + 3, 2):
        flags.append("harmonic_boundary")
    if zmb == 2 * m * m + Fraction(3, 2):
        flags.append("coulomb_boundary")
    return {
        "set": name,
        "alpha": p.alpha,
        "beta": p.beta,
        "gamma": p.gamma,
        "m": m,
        "zeta": zeta(p),
        "zeta_minus_beta": zmb,
        "harmonic_ok": reality_ok_harmonic(p, m),
        "coulomb_ok": reality_ok_coulomb(p, m),
        "flags": ";".join(flags),
    }


def cmd_ambiguity_table(orderings: Sequence | None = None, m_range: Sequence[int] = (0,)) -> list[dict]:
    """One row per (ordering, m). ``orderings`` holds names or explicit triples."""
    if orderings is None:
        parsed = list(NAMED_ORDERINGS.items())
    else:
        parsed = [parse_ordering(o, f"orderings[{i}]") for i, o in enumerate(orderings)]
    return [ambiguity_row(name, p, m) for name, p in parsed for m in m_range]


# spectrum ----------------------------------------------------------------------


def cmd_spectrum(cfg: RunConfig) -> list[SpectrumLine]:
    return assemble_spectrum(cfg.family, cfg.mass, cfg.radial, cfg.axial, cfg.ordering, cfg.ranges)


# verify ------------------------------------------------------------------------


@dataclass
class VerifyReport:
    lines: list[SpectrumLine]
    counts: dict[str, int] = field(default_factory=dict)
    exit_code: int = EXIT_OK

    @property
    def notes(self) -> list[str]:
        out = []
        for status, n in sorted(self.counts.items()):
            if status.startswith("documented") or status in (NEAR_CRITICAL, CONSTRAINT):
                out.append(f"{n} line(s) {status}")
        return out

    def summary(self) -> str:
        parts = [f"{k}={v}" for k, v in sorted(self.counts.items())]
        return "verify summary: " + (", ".join(parts) if parts else "no lines")


def _rel_close(x: float, y: float, tol: float) -> bool:
    return abs(x - y) <= tol * max(abs(y), 1.0)


@dataclass(frozen=True)
class _AxialCheck:
    value: float
    converged: bool
    status: str
    flags: tuple[str, ...]


def _check_axial(cfg: RunConfig, lines, grid_points, tol) -> dict[int, _AxialCheck]:
    levels = sorted({line.qn.n_axial for line in lines})
    top = max(axial_level_index(cfg.axial, n) for n in levels)
    results = solve_axial(cfg.axial, n_levels=top + 1, n_points=grid_points, morse_window=cfg.oracle.morse_window)
    analytic = {line.qn.n_axial: line.kz2 for line in lines}
    out = {}
    for n in levels:
        res = results[axial_level_index(cfg.axial, n)]
        flags: tuple[str, ...] = ()
        if _rel_close(res.value, analytic[n], tol):
            status = AGREE
        elif isinstance(cfg.axial, Morse):
            std = axial_morse_kz2_standard(cfg.axial.D, cfg.axial.epsilon, n)
            if not std.valid:
                status, flags = DOC_MORSE, ("axial_continuum",)
            elif _rel_close(res.value, std.value, tol):
                status, flags = DOC_MORSE, ("kz2_matches_standard_morse",)
            else:
                status = UNEXPECTED
        else:
            status = UNEXPECTED
        if not res.converged and "axial_continuum" not in flags:
            flags += ("axial_unconverged",)
            status = _unconverged(status)
        out[n] = _AxialCheck(res.value, res.converged, status, flags)
    return out


def _worse(a: str, b: str) -> str:
    return a if _STATUS_RANK[a] >= _STATUS_RANK[b] else b


def _unconverged(status: str) -> str:
    # a mismatch from an unconverged oracle is not evidence of a discrepancy
    return UNCONVERGED if status == UNEXPECTED else _worse(status, UNCONVERGED)


def _verify_tuple(cfg: RunConfig, group: list[SpectrumLine], axial: _AxialCheck, grid_points: int, tol_E: float):
    """Self-consistent energy for one (n_rho, m, n_axial) tuple; returns updated lines."""
    head = group[0]
    qn = head.qn
    kz2 = axial.value
    base = [replace(line, kz2_oracle=kz2, residual_kz2=kz2 - line.kz2) for line in group]
    base = [line.with_flags(*axial.flags) for line in base]

    if not head.constraint_ok:
        return [replace(line, status=_worse(CONSTRAINT, axial.status)) for line in base]
    if "axial_continuum" in axial.flags:
        return [replace(line, status=axial.status).with_flags("no_bound_axial_level") for line in base]

    near = "near_critical" in head.flags
    tol_line = tol_E * (NEAR_CRITICAL_FACTOR if near else 1.0)
    mismatch_status = NEAR_CRITICAL if near else UNEXPECTED
    ell = head.ell

    if cfg.family == HARMONIC:
        flags: tuple[str, ...] = ()
        kz2_use = kz2
        if kz2 > 0:
            # energy depends on kz2 only through its square; the radial
            # operator is positive, so solve on the mirrored sign
            kz2_use = -kz2
            flags += ("kz2_sign_mirrored",)
        try:
            sol = selfconsistent_solution(
                HARMONIC, cfg.mass, cfg.radial, cfg.ordering, qn.m, qn.n_rho, kz2_use, n_points=grid_points
            )
        except (BracketError, OracleError) as exc:
            log.warning("self-consistent solve failed for %s: %s", qn, exc)
            return [replace(line, status=UNCONVERGED).with_flags(*flags, "bracket_failure") for line in base]
        line = base[0]
        res_E = sol.energy - line.E_analytic
        if _rel_close(sol.energy, line.E_analytic, tol_line):
            status = AGREE
        elif axial.status == DOC_MORSE:
            expected = harmonic_energy_from_ell(cfg.radial.a, cfg.mass.b, qn.n_rho, ell, kz2)
            status = DOC_MORSE if _rel_close(sol.energy, expected, tol_line) else UNEXPECTED
        else:
            status = mismatch_status
        if not sol.converged:
            status = _unconverged(status)
            flags += ("energy_unconverged",)
        status = _unconverged(status) if not axial.converged else _worse(status, axial.status)
        return [replace(line, E_oracle=sol.energy, residual_E=res_E, status=status).with_flags(*flags, *sol.flags)]

    # coulomb: kz enters as a square root of the axial constant
    if kz2 <= 0:
        return [replace(line, status=_worse(DOC_MORSE if axial.status == DOC_MORSE else UNEXPECTED, axial.status))
                .with_flags("no_bound_state") for line in base]
    kz = math.sqrt(kz2)
    try:
        sol = selfconsistent_solution(
            COULOMB, cfg.mass, cfg.radial, cfg.ordering, qn.m, qn.n_rho, kz2, n_points=grid_points
        )
    except (BracketError, OracleError) as exc:
        log.warning("self-consistent solve failed for %s: %s", qn, exc)
        return [replace(line, status=UNCONVERGED).with_flags("bracket_failure") for line in base]
    bt = cfg.mass.b / 2
    charge = cfg.radial.A_tilde + bt * sol.energy
    denominator = charge / kz
    closed_form = qn.n_rho + ell + 1.0
    extras = {
        "coulomb_denominator_oracle": denominator,
        "coulomb_denominator_closed_form": closed_form,
    }
    den_flag = f"denominator_oracle={denominator:.8f};denominator_closed_form={closed_form:.8f}"
    out = []
    for line in base:
        if line.branch == PLUS:
            complex_E = is_complex(line.E_analytic)
            res_E = None if complex_E else sol.energy - line.E_analytic
            if complex_E:
                status = UNEXPECTED
            elif _rel_close(sol.energy, line.E_analytic, tol_line):
                status = AGREE
            elif axial.status == DOC_MORSE:
                status = DOC_MORSE
            elif abs(denominator - (qn.n_rho + ell + 0.5)) <= tol_line * closed_form:
                status = DOC_COULOMB
            else:
                status = mismatch_status
            if not sol.converged:
                status = _unconverged(status)
            status = _unconverged(status) if not axial.converged else _worse(status, axial.status)
            new = replace(line, E_oracle=sol.energy, residual_E=res_E, status=status, extras=dict(extras))
            out.append(new.with_flags(den_flag, *sol.flags))
        else:
            # attractive charge is required for a bound state, so the
            # negative-kz branch has no radial solution
            status = _worse(DOC_MORSE if axial.status == DOC_MORSE else DOC_COULOMB, axial.status)
            new = replace(line, status=status, extras=dict(extras))
            out.append(new.with_flags("no_bound_state", den_flag))
    return out


def cmd_verify(cfg: RunConfig, grid_points: int | None = None, tolerance: float | None = None,
               workers: int | None = None) -> VerifyReport:
    lines = cmd_spectrum(cfg)
    if not cfg.oracle.enabled:
        return VerifyReport(lines, {"oracle_disabled": len(lines)}, EXIT_OK)
    grid_points = grid_points or cfg.oracle.grid_points
    tol_kz2 = tolerance if tolerance is not None else cfg.oracle.kz2_tolerance
    tol_E = tolerance if tolerance is not None else cfg.oracle.energy_tolerance
    workers = workers or cfg.workers

    axial = _check_axial(cfg, lines, grid_points, tol_kz2)
    groups: dict[tuple, list[SpectrumLine]] = {}
    for line in lines:
        groups.setdefault((line.qn.n_rho, line.qn.m, line.qn.n_axial), []).append(line)
    keys = sorted(groups)

    def job(key):
        return _verify_tuple(cfg, groups[key], axial[key[2]], grid_points, tol_E)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(job, keys))
    else:
        parts = [job(k) for k in keys]
    verified = sorted(itertools.chain.from_iterable(parts), key=lambda line: line.sort_key)

    counts: dict[str, int] = {}
    for line in verified:
        counts[line.status] = counts.get(line.status, 0) + 1
    if counts.get(UNEXPECTED):
        code = EXIT_MISMATCH
    elif counts.get(UNCONVERGED):
        code = EXIT_UNCONVERGED
    else:
        code = EXIT_OK
    return VerifyReport(verified, counts, code)


# identity check ------------------------------------------------------------------

IDENTITY_COLUMNS = ("identity", "residual", "tolerance", "ok")
COMPOSITION_TOLERANCE = 1e-12
SUBSTITUTION_TOLERANCE = 1e-9


def cmd_identity_check(n_samples: int = 10_000, seed: int = 0, tolerance: float | None = None) -> list[dict]:
    rows = []
    for name, value in identity_residuals(n_samples, seed).items():
        tol = tolerance
        if tol is None:
            tol = COMPOSITION_TOLERANCE if name.startswith("composition:") else SUBSTITUTION_TOLERANCE
        rows.append({"identity": name, "residual": value, "tolerance": tol, "ok": value <= tol})
    return rows


# sweep -------------------------------------------------------------------------


@dataclass
class SweepResult:
    rows: list[dict]
    columns: tuple[str, ...]
    failures: list[dict]
    exit_code: int


def _sweep_cells(cfg: RunConfig):
    sweep = cfg.sweep
    orderings = sweep.orderings if sweep.orderings is not None else [None]
    ms = sweep.m if sweep.m is not None else [None]
    names = sorted(sweep.parameters)
    combos = list(itertools.product(*[sweep.parameters[n] for n in names])) if names else [()]
    cells = []
    for ordering, m, combo in itertools.product(orderings, ms, combos):
        raw = cfg.raw
        if ordering is not None:
            raw = set_dotted(raw, "ordering", ordering)
        if m is not None:
            raw = set_dotted(raw, "quantum.m", [m])
        for name, value in zip(names, combo):
            raw = set_dotted(raw, name, value)
        raw = dict(raw)
        raw.pop("sweep", None)
        key = {
            "cell": len(cells),
            "ordering": parse_ordering(ordering)[0] if ordering is not None else cfg.ordering_name,
            "m_cell": "" if m is None else m,
        }
        key.update({n: v for n, v in zip(names, combo)})
        cells.append((key, raw))
    return cells, names


def cmd_sweep(cfg: RunConfig, workers: int | None = None, grid_points: int | None = None,
              tolerance: float | None = None) -> SweepResult:
    from .report import SPECTRUM_COLUMNS, spectrum_row

    if cfg.sweep is None:
        raise ConfigError("sweep", "section is required for the sweep command")
    sweep = cfg.sweep
    workers = workers or cfg.workers

    if sweep.command == "ambiguity":
        orderings = sweep.orderings if sweep.orderings is not None else list(NAMED_ORDERINGS)
        ms = sweep.m if sweep.m is not None else list(cfg.ranges.m)
        rows = cmd_ambiguity_table(orderings, ms)
        return SweepResult(rows, AMBIGUITY_COLUMNS, [], EXIT_OK)

    cells, names = _sweep_cells(cfg)
    # validate every cell before any numerical work
    configs = [config_from_dict(raw) for _, raw in cells]

    def run(i):
        key, cell_cfg = cells[i][0], configs[i]
        try:
            if sweep.command == "verify":
                report = cmd_verify(cell_cfg, grid_points, tolerance, workers=1)
                lines, code = report.lines, report.exit_code
            else:
                lines, code = cmd_spectrum(cell_cfg), EXIT_OK
        except (ValueError, RuntimeError) as exc:
            return key, [], {"cell": key["cell"], "error": str(exc)}, EXIT_MISMATCH
        return key, [dict(key, **spectrum_row(line)) for line in lines], None, code

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, range(len(cells))))
    else:
        results = [run(i) for i in range(len(cells))]
    results.sort(key=lambda r: r[0]["cell"])

    rows, failures = [], []
    for _, cell_rows, failure, _code in results:
        rows.extend(cell_rows)
        if failure:
            failures.append(failure)
    codes = {r[3] for r in results}
    if EXIT_MISMATCH in codes:
        code = EXIT_MISMATCH
    elif EXIT_UNCONVERGED in codes:
        code = EXIT_UNCONVERGED
    else:
        code = EXIT_OK
    columns = ("cell", "ordering", "m_cell", *names, *SPECTRUM_COLUMNS)
    return SweepResult(rows, columns, failures, code)
