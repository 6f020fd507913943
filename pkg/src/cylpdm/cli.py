"""Command-line entry point: argument parsing, dispatch and output routing."""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .analytic import QuantumRanges, first_axial_level
from .commands import (
    AMBIGUITY_COLUMNS,
    EXIT_CONFIG,
    EXIT_MISMATCH,
    EXIT_OK,
    IDENTITY_COLUMNS,
    cmd_ambiguity_table,
    cmd_identity_check,
    cmd_spectrum,
    cmd_sweep,
    cmd_verify,
)
from .config import FORMATS, ConfigError, RunConfig, load_config, parse_int_range
from .model import ModelError
from .report import SPECTRUM_COLUMNS, line_record, render, spectrum_row


def _common(parser: argparse.ArgumentParser, config_required: bool) -> None:
    parser.add_argument("--config", type=Path, required=config_required, help="YAML run configuration")
    parser.add_argument("--out", type=Path, help="write output here instead of stdout")
    parser.add_argument("--format", choices=FORMATS, help="output format (default: config or csv)")
    parser.add_argument("--grid-points", type=int, help="interior points of the coarse oracle grid")
    parser.add_argument("--levels", type=int, help="use the first K radial and axial levels")
    parser.add_argument("--workers", type=int, help="concurrent workers for verify and sweep")
    parser.add_argument("--tolerance", type=float, help="agreement tolerance override")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cylpdm",
        description="Closed-form spectra and finite-difference checks for radial power-law PDM problems.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ambiguity-table", help="ordering-parameter table with reality checks")
    _common(p, config_required=False)
    p.add_argument("--ordering", action="append", help="named set or 'alpha,beta,gamma' (repeatable)")
    p.add_argument("--m", default="0", help="magnetic quantum numbers, e.g. 0,1,2 or 0..2")

    p = sub.add_parser("spectrum", help="analytic spectrum for a configuration")
    _common(p, config_required=True)

    p = sub.add_parser("verify", help="analytic spectrum checked against the finite-difference oracle")
    _common(p, config_required=True)
    p.add_argument("--no-oracle", action="store_true", help="skip the oracle; emit empty oracle columns")

    p = sub.add_parser("identity-check", help="residuals of the separation identities")
    _common(p, config_required=False)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("sweep", help="run spectrum/verify/ambiguity over a parameter grid")
    _common(p, config_required=True)
    return parser


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _load(args) -> RunConfig:
    cfg = load_config(args.config)
    if args.levels is not None:
        if args.levels < 1:
            raise ConfigError("--levels", "must be >= 1")
        lowest = first_axial_level(cfg.axial)
        cfg.ranges = QuantumRanges(
            list(range(args.levels)), cfg.ranges.m, list(range(lowest, lowest + args.levels))
        )
        cfg.raw["quantum"] = dict(cfg.raw.get("quantum") or {}, n_rho=list(cfg.ranges.n_rho), n_axial=list(cfg.ranges.n_axial))
    if args.grid_points is not None and args.grid_points < 16:
        raise ConfigError("--grid-points", "must be >= 16")
    if args.workers is not None and args.workers < 1:
        raise ConfigError("--workers", "must be >= 1")
    return cfg


def _fmt(args, cfg: RunConfig | None) -> tuple[str, Path | None]:
    fmt = args.format or (cfg.output_format if cfg else "csv")
    out = args.out or (cfg.output_path if cfg else None)
    return fmt, out


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = _load(args) if args.config is not None else None
        if args.command == "ambiguity-table":
            orderings = args.ordering
            if orderings is None and cfg is not None:
                orderings = [cfg.raw["ordering"]]
            rows = cmd_ambiguity_table(orderings, parse_int_range(args.m, "--m"))
            fmt, out = _fmt(args, cfg)
            _emit(render(rows, AMBIGUITY_COLUMNS, fmt), out)
            return EXIT_OK

        if args.command == "identity-check":
            rows = cmd_identity_check(args.samples, args.seed, args.tolerance)
            fmt, out = _fmt(args, cfg)
            _emit(render(rows, IDENTITY_COLUMNS, fmt), out)
            bad = [r["identity"] for r in rows if not r["ok"]]
            if bad:
                print(f"identity residuals above tolerance: {', '.join(bad)}", file=sys.stderr)
                return EXIT_MISMATCH
            return EXIT_OK

        fmt, out = _fmt(args, cfg)
        if args.command == "spectrum":
            lines = cmd_spectrum(cfg)
            _emit(render([spectrum_row(x) for x in lines], SPECTRUM_COLUMNS, fmt, [line_record(x) for x in lines]), out)
            return EXIT_OK

        if args.command == "verify":
            if args.no_oracle:
                cfg.oracle = replace(cfg.oracle, enabled=False)
            report = cmd_verify(cfg, args.grid_points, args.tolerance, args.workers)
            lines = report.lines
            _emit(render([spectrum_row(x) for x in lines], SPECTRUM_COLUMNS, fmt, [line_record(x) for x in lines]), out)
            print(report.summary(), file=sys.stderr)
            for note in report.notes:
                print(f"note: {note}", file=sys.stderr)
            return report.exit_code

        if args.command == "sweep":
            result = cmd_sweep(cfg, args.workers, args.grid_points, args.tolerance)
            _emit(render(result.rows, result.columns, fmt), out)
            for failure in result.failures:
                print(f"cell {failure['cell']} failed: {failure['error']}", file=sys.stderr)
            return result.exit_code
    except (ConfigError, ModelError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    raise AssertionError(f"unhandled command {args.command}")


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
