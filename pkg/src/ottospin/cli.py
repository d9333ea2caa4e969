"""Command-line front end: deterministic CSV/JSON emission of sweep tables,
work/heat atom distributions, and process-matrix diagnostics.

Exit codes: 0 success, 1 configuration problem (bad flags, bad config file,
out-of-range values), 2 I/O problem (unreadable config, unwritable output).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import fields
from pathlib import Path
from typing import Sequence

import numpy as np

from .config import (
    ConfigError,
    RunConfig,
    apply_overrides,
    parse_config,
    to_cycle_config,
)
from .cycle import (
    MONTE_CARLO_FIELDS,
    CycleReport,
    cycle_with_uncertainty,
    endpoint_hamiltonians,
)
from .process import (
    choi_from_unitary,
    depolarizing_process,
    mix_processes,
    process_trace_distance,
    unitality_defect,
)
from .propagator import evolve_unitary, transition_probability
from .tpm import (
    engine_heat_distribution,
    engine_work_distribution,
    lorentzian_broaden,
)

_REPORT_COLUMNS = tuple(f.name for f in fields(CycleReport))
_STDDEV_COLUMNS = tuple(f"{name}_stddev" for name in MONTE_CARLO_FIELDS)

_SWEEP_COLUMNS_DOC = (
    "CSV columns: "
    + ", ".join(_REPORT_COLUMNS)
    + ", plus Monte Carlo spread columns "
    + ", ".join(_STDDEV_COLUMNS)
    + ". Energies are peV, times us, power peV/ms."
)
_DIST_COLUMNS_DOC = (
    "CSV columns: energy_pev, probability (one row per atom). With --out and "
    "a positive lorentzian_fwhm_pev, a broadened curve with columns "
    "energy_pev, density is written next to it as <stem>_curve.csv."
)
_QPT_COLUMNS_DOC = (
    "CSV columns: row, col, real, imag (16 rows of the 4x4 process matrix "
    "over the basis i*I, sigma_x, sigma_y, sigma_z). With --out, a summary "
    "with columns tau_us, noise_mix, unitality_defect, "
    "trace_distance_to_ideal is written as <stem>_summary.csv; without "
    "--out both tables go to stdout."
)


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage problems; those are config errors here."""

    def error(self, message: str):  # noqa: A003 - argparse API
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _add_common_flags(parser: argparse.ArgumentParser, *, tau: bool, mc: bool) -> None:
    parser.add_argument("--config", metavar="PATH", help="configuration file")
    parser.add_argument("--out", metavar="PATH", help="output file (default stdout)")
    parser.add_argument("--format", choices=("csv", "json"), help="output format")
    parser.add_argument(
        "--hot", choices=("A", "B"), help="hot-reservoir preset (21.5 / 40.5 peV)"
    )
    parser.add_argument("--seed", type=int, help="Monte Carlo seed")
    if tau:
        parser.add_argument("--tau", type=float, metavar="US", help="drive duration")
    if mc:
        parser.add_argument(
            "--mc-samples", type=int, metavar="N", help="Monte Carlo sample count"
        )


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="ottospin",
        description=(
            "Deterministic simulator for a finite-time two-level Otto engine: "
            "drive propagators, two-point-measurement statistics, cycle "
            "figures of merit, and process diagnostics."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    sweep = sub.add_parser(
        "sweep",
        help="figures of merit across the drive-duration grid",
        description="One row per drive duration in the configured tau grid.",
        epilog=_SWEEP_COLUMNS_DOC,
    )
    _add_common_flags(sweep, tau=False, mc=True)

    cycle = sub.add_parser(
        "cycle",
        help="figures of merit for a single drive duration",
        description="Single-row report for one drive duration.",
        epilog=_SWEEP_COLUMNS_DOC,
    )
    _add_common_flags(cycle, tau=True, mc=True)

    work = sub.add_parser(
        "work-dist",
        help="work atom distribution (and broadened curve)",
        description="Exact work distribution of the full cycle at one drive duration.",
        epilog=_DIST_COLUMNS_DOC,
    )
    _add_common_flags(work, tau=True, mc=False)

    heat = sub.add_parser(
        "heat-dist",
        help="hot-reservoir heat atom distribution",
        description="Exact heat distribution at one drive duration.",
        epilog=_DIST_COLUMNS_DOC,
    )
    _add_common_flags(heat, tau=True, mc=False)

    qpt = sub.add_parser(
        "qpt",
        help="process matrix of the expansion drive plus diagnostics",
        description=(
            "Process matrix of the expansion propagator, optionally mixed "
            "with the fully depolarizing channel by [process] noise_mix."
        ),
        epilog=_QPT_COLUMNS_DOC,
    )
    _add_common_flags(qpt, tau=True, mc=False)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 0
    try:
        cfg = _load_run_config(args)
        handler = {
            "sweep": _cmd_sweep,
            "cycle": _cmd_cycle,
            "work-dist": _cmd_work_dist,
            "heat-dist": _cmd_heat_dist,
            "qpt": _cmd_qpt,
        }[args.command]
        handler(cfg)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def _load_run_config(args: argparse.Namespace) -> RunConfig:
    if args.config is not None:
        cfg = parse_config(Path(args.config).read_text(encoding="utf-8"))
    else:
        cfg = RunConfig()
    return apply_overrides(
        cfg,
        hot_option=args.hot,
        seed=args.seed,
        output_format=args.format,
        output_path=args.out,
        tau_us=getattr(args, "tau", None),
        mc_samples=getattr(args, "mc_samples", None),
    )


# --- commands ----------------------------------------------------------------

def _cmd_sweep(cfg: RunConfig) -> None:
    _emit_report_rows(cfg, cfg.tau_list_us)


def _cmd_cycle(cfg: RunConfig) -> None:
    _emit_report_rows(cfg, (cfg.tau_us,))


def _emit_report_rows(cfg: RunConfig, taus: Sequence[float]) -> None:
    rows = []
    for tau in taus:
        report, spread = cycle_with_uncertainty(
            to_cycle_config(cfg, tau),
            rel_noise=cfg.mc_noise_width,
            n_samples=cfg.mc_samples,
            seed=cfg.seed,
        )
        row = [getattr(report, name) for name in _REPORT_COLUMNS]
        row.extend(spread[name].stddev for name in MONTE_CARLO_FIELDS)
        rows.append(row)
    header = [*_REPORT_COLUMNS, *_STDDEV_COLUMNS]
    _write_text(cfg.output_path, _render_table(cfg.output_format, header, rows))


def _distribution_payload(cfg: RunConfig, kind: str):
    cycle_cfg = to_cycle_config(cfg)
    h_cold, h_hot = endpoint_hamiltonians(cycle_cfg.protocol)
    forward = evolve_unitary(cycle_cfg.protocol, cycle_cfg.n_steps)
    swap_prob = transition_probability(forward, h_cold, h_hot)
    if kind == "work":
        dist = engine_work_distribution(cycle_cfg.protocol, cycle_cfg.thermal, swap_prob)
    else:
        dist = engine_heat_distribution(cycle_cfg.protocol, cycle_cfg.thermal, swap_prob)
    curve = None
    if cfg.lorentzian_fwhm_pev > 0.0:
        grid = np.linspace(cfg.curve_min_pev, cfg.curve_max_pev, cfg.curve_points)
        curve = (grid, lorentzian_broaden(dist, cfg.lorentzian_fwhm_pev, grid))
    return swap_prob, dist, curve


def _cmd_work_dist(cfg: RunConfig) -> None:
    _emit_distribution(cfg, "work")


def _cmd_heat_dist(cfg: RunConfig) -> None:
    _emit_distribution(cfg, "heat")


def _emit_distribution(cfg: RunConfig, kind: str) -> None:
    swap_prob, dist, curve = _distribution_payload(cfg, kind)
    if cfg.output_format == "json":
        payload = {
            "kind": kind,
            "tau_us": cfg.tau_us,
            "transition_prob": swap_prob,
            "atoms": [
                {"energy_pev": e, "probability": p}
                for e, p in zip(dist.energies_pev, dist.probabilities)
            ],
            "curve": None
            if curve is None
            else {
                "fwhm_pev": cfg.lorentzian_fwhm_pev,
                "energy_pev": list(curve[0]),
                "density": list(curve[1]),
            },
        }
        _write_text(cfg.output_path, _render_json(payload))
        return
    atom_rows = [[e, p] for e, p in zip(dist.energies_pev, dist.probabilities)]
    _write_text(
        cfg.output_path,
        _render_table("csv", ["energy_pev", "probability"], atom_rows),
    )
    if curve is not None and cfg.output_path is not None:
        curve_rows = [[e, d] for e, d in zip(curve[0], curve[1])]
        _write_text(
            _sibling_path(cfg.output_path, "_curve"),
            _render_table("csv", ["energy_pev", "density"], curve_rows),
        )


def _cmd_qpt(cfg: RunConfig) -> None:
    cycle_cfg = to_cycle_config(cfg)
    forward = evolve_unitary(cycle_cfg.protocol, cycle_cfg.n_steps)
    ideal = choi_from_unitary(forward)
    if cfg.process_noise_mix > 0.0:
        actual = mix_processes(ideal, depolarizing_process(), cfg.process_noise_mix)
    else:
        actual = ideal
    defect = unitality_defect(actual)
    delta = process_trace_distance(actual, ideal)

    if cfg.output_format == "json":
        payload = {
            "tau_us": cfg.tau_us,
            "noise_mix": cfg.process_noise_mix,
            "matrix_real": actual.matrix.real.tolist(),
            "matrix_imag": actual.matrix.imag.tolist(),
            "unitality_defect": defect,
            "trace_distance_to_ideal": delta,
        }
        _write_text(cfg.output_path, _render_json(payload))
        return
    entry_rows = [
        [row, col, actual.matrix[row, col].real, actual.matrix[row, col].imag]
        for row in range(4)
        for col in range(4)
    ]
    matrix_table = _render_table("csv", ["row", "col", "real", "imag"], entry_rows)
    summary_table = _render_table(
        "csv",
        ["tau_us", "noise_mix", "unitality_defect", "trace_distance_to_ideal"],
        [[cfg.tau_us, cfg.process_noise_mix, defect, delta]],
    )
    if cfg.output_path is None:
        _write_text(None, matrix_table + "\n" + summary_table)
    else:
        _write_text(cfg.output_path, matrix_table)
        _write_text(_sibling_path(cfg.output_path, "_summary"), summary_table)


# --- rendering ----------------------------------------------------------------

def _format_cell(value: object) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def _jsonable(value: object) -> object:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _render_table(fmt: str, header: Sequence[str], rows: Sequence[Sequence]) -> str:
    if fmt == "json":
        records = [
            {name: _jsonable(cell) for name, cell in zip(header, row)} for row in rows
        ]
        return _render_json(records)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_format_cell(cell) for cell in row])
    return buffer.getvalue()


def _render_json(payload: object) -> str:
    return json.dumps(payload, indent=2, allow_nan=False, default=_jsonable) + "\n"


def _sibling_path(path: str, suffix: str) -> str:
    base = Path(path)
    return str(base.with_name(base.stem + suffix + (base.suffix or ".csv")))


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


if __name__ == "__main__":
    raise SystemExit(main())
