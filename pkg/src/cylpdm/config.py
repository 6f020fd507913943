"""Run configuration: a YAML document with nested sections.

Example::

    family: harmonic            # or coulomb
    mass: {b: 2}                # upsilon defaults from the family (1/2 or -1)
    radial: {a: 2}              # coulomb: {A_tilde: 1}
    axial: {kind: well, L: pi}  # morse: {D, epsilon}; rosen_morse: {U0, d}
    ordering: BenDanielDuke     # or {alpha: "-1/3", beta: "-1/3", gamma: "-1/3"}
    quantum: {n_rho: [0, 1], m: [0], n_axial: "1..2"}
    oracle: {enabled: true, grid_points: 2000}
    output: {path: out.csv, format: csv}

Real numbers accept "p/q", "pi", "k*pi" and "pi/k". Ordering parameters are
parsed as exact rationals, so write them as strings ("-1/3") or integers.
"""

from __future__ import annotations

import copy
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

import yaml

from .ambiguity import NAMED_ORDERINGS, AmbiguityParameters, OrderingError
from .analytic import COULOMB, FAMILY_UPSILON, HARMONIC, QuantumRanges, first_axial_level
from .model import (
    CoulombRadial,
    HarmonicRadial,
    InfiniteWell,
    MassProfile,
    ModelError,
    Morse,
    RosenMorseTrig,
)

FORMATS = ("csv", "json", "table")
SWEEP_COMMANDS = ("ambiguity", "spectrum", "verify")


class ConfigError(ValueError):
    def __init__(self, field_path: str, message: str):
        super().__init__(f"{field_path}: {message}")
        self.field = field_path


_PI_FORM = re.compile(r"^\s*([+-]?[0-9.eE+-]*)\s*\*?\s*pi\s*(?:/\s*([0-9.eE+-]+))?\s*$")


def parse_real(value: Any, field_path: str) -> float:
    if isinstance(value, bool) or value is None:
        raise ConfigError(field_path, f"expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        text = value.strip()
        match = _PI_FORM.match(text)
        if match:
            coef = match.group(1)
            scale = 1.0 if coef in ("", "+") else -1.0 if coef == "-" else float(coef)
            div = float(match.group(2)) if match.group(2) else 1.0
            return scale * math.pi / div
        try:
            return float(Fraction(text))
        except (ValueError, ZeroDivisionError):
            pass
    raise ConfigError(field_path, f"cannot parse {value!r} as a real number")


def _parse_rational(value: Any, field_path: str) -> Fraction:
    if isinstance(value, float):
        raise ConfigError(field_path, f"write ordering parameters as exact rationals (e.g. \"-1/2\"), got {value!r}")
    if isinstance(value, bool) or value is None:
        raise ConfigError(field_path, f"expected a rational, got {value!r}")
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigError(field_path, f"cannot parse {value!r} as a rational") from None


def parse_ordering(value: Any, field_path: str = "ordering") -> tuple[str, AmbiguityParameters]:
    if isinstance(value, str):
        if value in NAMED_ORDERINGS:
            return value, NAMED_ORDERINGS[value]
        parts = [s for s in re.split(r"[,\s]+", value.strip().strip("()")) if s]
        if len(parts) != 3:
            raise ConfigError(field_path, f"unknown ordering {value!r}; use a named set or 'alpha,beta,gamma'")
        value = dict(zip(("alpha", "beta", "gamma"), parts))
    if isinstance(value, (list, tuple)) and len(value) == 3:
        value = dict(zip(("alpha", "beta", "gamma"), value))
    if not isinstance(value, dict):
        raise ConfigError(field_path, f"expected a named set or an (alpha, beta, gamma) mapping, got {value!r}")
    missing = [k for k in ("alpha", "beta", "gamma") if k not in value]
    if missing:
        raise ConfigError(field_path, f"missing {', '.join(missing)}")
    triple = [_parse_rational(value[k], f"{field_path}.{k}") for k in ("alpha", "beta", "gamma")]
    try:
        params = AmbiguityParameters(*triple)
    except OrderingError as exc:
        raise ConfigError(field_path, str(exc)) from None
    return f"({triple[0]},{triple[1]},{triple[2]})", params


def parse_int_range(value: Any, field_path: str) -> list[int]:
    if isinstance(value, bool):
        raise ConfigError(field_path, f"expected integers, got {value!r}")
    if isinstance(value, int):
        items = [value]
    elif isinstance(value, str) and ".." in value:
        lo, _, hi = value.partition("..")
        try:
            items = list(range(int(lo), int(hi) + 1))
        except ValueError:
            raise ConfigError(field_path, f"bad range {value!r}; use 'a..b'") from None
    elif isinstance(value, str):
        try:
            items = [int(tok) for tok in value.split(",")]
        except ValueError:
            raise ConfigError(field_path, f"expected an integer list or 'a..b', got {value!r}") from None
    elif isinstance(value, (list, tuple)):
        items = []
        for v in value:
            if isinstance(v, bool) or not isinstance(v, int):
                raise ConfigError(field_path, f"expected integers, got {v!r}")
            items.append(v)
    else:
        raise ConfigError(field_path, f"expected an integer list or 'a..b', got {value!r}")
    if not items:
        raise ConfigError(field_path, "range is empty")
    if any(i < 0 for i in items):
        raise ConfigError(field_path, f"quantum numbers must be >= 0, got {items}")
    return sorted(set(items))


@dataclass(frozen=True)
class OracleSettings:
    enabled: bool = True
    grid_points: int = 2000
    kz2_tolerance: float = 1e-6
    energy_tolerance: float = 1e-5
    morse_window: tuple[float, float] | None = None


@dataclass(frozen=True)
class SweepSpec:
    command: str
    orderings: list[Any] | None
    m: list[int] | None
    parameters: dict[str, list[Any]]


@dataclass
class RunConfig:
    family: str
    mass: MassProfile
    radial: Any
    axial: Any
    ordering_name: str
    ordering: AmbiguityParameters
    ranges: QuantumRanges
    oracle: OracleSettings = field(default_factory=OracleSettings)
    output_path: Path | None = None
    output_format: str = "csv"
    workers: int = 1
    sweep: SweepSpec | None = None
    raw: dict = field(default_factory=dict, repr=False)


def _section(raw: dict, key: str, required: bool = True) -> dict:
    value = raw.get(key)
    if value is None:
        if required:
            raise ConfigError(key, "section is required")
        return {}
    if not isinstance(value, dict):
        raise ConfigError(key, f"expected a mapping, got {type(value).__name__}")
    return value


def _build_axial(sec: dict):
    kind = str(sec.get("kind", "")).lower()
    try:
        if kind in ("well", "infinite_well"):
            return InfiniteWell(parse_real(sec.get("L"), "axial.L"))
        if kind == "morse":
            return Morse(parse_real(sec.get("D"), "axial.D"), parse_real(sec.get("epsilon"), "axial.epsilon"))
        if kind in ("rosen_morse", "rosen-morse", "rosenmorse"):
            return RosenMorseTrig(parse_real(sec.get("U0"), "axial.U0"), parse_real(sec.get("d"), "axial.d"))
    except ModelError as exc:
        raise ConfigError("axial", str(exc)) from None
    raise ConfigError("axial.kind", f"expected well, morse or rosen_morse, got {sec.get('kind')!r}")


def config_from_dict(raw: dict) -> RunConfig:
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "configuration must be a mapping")
    family = raw.get("family")
    if family not in (HARMONIC, COULOMB):
        raise ConfigError("family", f"expected 'harmonic' or 'coulomb', got {family!r}")

    mass_sec = _section(raw, "mass")
    upsilon = parse_real(mass_sec.get("upsilon", FAMILY_UPSILON[family]), "mass.upsilon")
    if upsilon != FAMILY_UPSILON[family]:
        raise ConfigError("mass.upsilon", f"family {family} requires upsilon = {FAMILY_UPSILON[family]}, got {upsilon}")
    b = parse_real(mass_sec.get("b"), "mass.b")
    if b == 0:
        raise ConfigError("mass.b", "must be non-zero")
    mass = MassProfile(upsilon, b)

    rad = _section(raw, "radial")
    kind = str(rad.get("kind", family)).lower()
    if kind != family:
        raise ConfigError("radial.kind", f"family {family} requires a {family} radial potential, got {kind!r}")
    radial = (
        HarmonicRadial(parse_real(rad.get("a"), "radial.a"))
        if family == HARMONIC
        else CoulombRadial(parse_real(rad.get("A_tilde"), "radial.A_tilde"))
    )
    axial = _build_axial(_section(raw, "axial"))

    if "ordering" not in raw:
        raise ConfigError("ordering", "is required")
    ordering_name, ordering = parse_ordering(raw["ordering"])

    q = _section(raw, "quantum", required=False)
    lowest = first_axial_level(axial)
    ranges = QuantumRanges(
        parse_int_range(q.get("n_rho", [0]), "quantum.n_rho"),
        parse_int_range(q.get("m", [0]), "quantum.m"),
        parse_int_range(q.get("n_axial", [lowest]), "quantum.n_axial"),
    )
    if min(ranges.n_axial) < lowest:
        raise ConfigError("quantum.n_axial", f"levels for this axial potential start at {lowest}")

    o = _section(raw, "oracle", required=False)
    window = o.get("morse_window")
    if window is not None:
        if not (isinstance(window, (list, tuple)) and len(window) == 2):
            raise ConfigError("oracle.morse_window", "expected [z_left, z_right]")
        window = (parse_real(window[0], "oracle.morse_window"), parse_real(window[1], "oracle.morse_window"))
    grid_points = o.get("grid_points", 2000)
    if isinstance(grid_points, bool) or not isinstance(grid_points, int) or grid_points < 16:
        raise ConfigError("oracle.grid_points", f"expected an integer >= 16, got {grid_points!r}")
    oracle = OracleSettings(
        enabled=bool(o.get("enabled", True)),
        grid_points=grid_points,
        kz2_tolerance=parse_real(o.get("kz2_tolerance", 1e-6), "oracle.kz2_tolerance"),
        energy_tolerance=parse_real(o.get("energy_tolerance", 1e-5), "oracle.energy_tolerance"),
        morse_window=window,
    )

    out = _section(raw, "output", required=False)
    fmt = out.get("format", "csv")
    if fmt not in FORMATS:
        raise ConfigError("output.format", f"expected one of {FORMATS}, got {fmt!r}")
    workers = raw.get("workers", 1)
    if isinstance(workers, bool) or not isinstance(workers, int) or workers < 1:
        raise ConfigError("workers", f"expected a positive integer, got {workers!r}")

    sweep = None
    if raw.get("sweep") is not None:
        sweep = _parse_sweep(_section(raw, "sweep"))

    return RunConfig(
        family=family,
        mass=mass,
        radial=radial,
        axial=axial,
        ordering_name=ordering_name,
        ordering=ordering,
        ranges=ranges,
        oracle=oracle,
        output_path=Path(out["path"]) if out.get("path") else None,
        output_format=fmt,
        workers=workers,
        sweep=sweep,
        raw=copy.deepcopy(raw),
    )


def _parse_sweep(sec: dict) -> SweepSpec:
    command = sec.get("command", "spectrum")
    if command not in SWEEP_COMMANDS:
        raise ConfigError("sweep.command", f"expected one of {SWEEP_COMMANDS}, got {command!r}")
    orderings = sec.get("orderings")
    if orderings is not None:
        if not isinstance(orderings, list) or not orderings:
            raise ConfigError("sweep.orderings", "expected a non-empty list")
        for i, o in enumerate(orderings):
            parse_ordering(o, f"sweep.orderings[{i}]")
    m = parse_int_range(sec["m"], "sweep.m") if sec.get("m") is not None else None
    params = sec.get("parameters") or {}
    if not isinstance(params, dict):
        raise ConfigError("sweep.parameters", "expected a mapping of dotted paths to value lists")
    for key, values in params.items():
        if not isinstance(values, list) or not values:
            raise ConfigError(f"sweep.parameters.{key}", "expected a non-empty list of values")
        if "." not in key:
            raise ConfigError(f"sweep.parameters.{key}", "use a dotted path such as axial.L")
    return SweepSpec(command, orderings, m, {k: list(v) for k, v in params.items()})


def set_dotted(raw: dict, path: str, value: Any) -> dict:
    out = copy.deepcopy(raw)
    node = out
    keys = path.split(".")
    for key in keys[:-1]:
        node = node.setdefault(key, {})
        if not isinstance(node, dict):
            raise ConfigError(path, f"{key} is not a section")
    node[keys[-1]] = value
    return out


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read configuration: {exc.strerror}") from None
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(str(path), f"invalid YAML: {exc}") from None
    return config_from_dict(raw)
