"""Command-line entry point.

``airnoma run`` executes one configuration, or every labeled variant of a
named preset, and writes one delimited table per variant plus a JSON run
manifest into the output directory.  Unless plots are disabled it also
renders the matching figure next to the tables.  ``airnoma presets``
lists the available recipes and ``airnoma schema`` prints the canonical
configuration document with every field at its default.

All failures exit nonzero with a single-line JSON error record on
stderr so callers never have to scrape tracebacks.
"""
from __future__ import annotations

import argparse
import importlib.metadata
import json
import os
import sys
import time
from dataclasses import replace
from math import degrees
from pathlib import Path

from . import plots
from .config import RunConfig, Task, apply_overrides, default_config, parse_config
from .errors import AirnomaError, ValidationError
from .experiments import altitude_sweep, beam_scan, scan_rows
from .geometry import Coverage, coverage_status, required_vertical_beamwidth
from .montecarlo import actual_order_histogram
from .presets import PRESETS

__all__ = ["main", "run"]

# Column order of the sweep/scan tables.  p_out_i is the far (weak) user,
# p_out_j the near (strong) user; p_e1..p_e4 are the presence events
# neither / far only / near only / both inside the radiated annulus.
SWEEP_COLUMNS = ("h", "p_dbm", "D_star", "method", "sum_rate_noma",
                 "sum_rate_oma", "p_out_i", "p_out_j", "p_e1", "p_e2",
                 "p_e3", "p_e4", "err_estimates")

HISTOGRAM_COLUMNS = ("h", "position", "freq_strong", "freq_weak", "trials_used")
COVERAGE_COLUMNS = ("h", "required_beamwidth_deg", "available_beamwidth_deg",
                    "covered")

_DEFAULT_PLOT = {Task.SWEEP: "rates", Task.SCAN_CURVE: "scan",
                 Task.HISTOGRAM: "order_hist", Task.COVERAGE: "coverage"}


def _sweep_record(row) -> dict:
    return {
        "h": row.altitude,
        "p_dbm": row.power_dbm,
        "D_star": row.boresight,
        "method": row.method,
        "sum_rate_noma": row.sum_rate_noma,
        "sum_rate_oma": row.sum_rate_oma,
        "p_out_i": row.outage_weak,
        "p_out_j": row.outage_strong,
        "p_e1": row.event_neither,
        "p_e2": row.event_weak_only,
        "p_e3": row.event_strong_only,
        "p_e4": row.event_both,
        "err_estimates": json.dumps(row.errors, sort_keys=True),
    }


def _execute(cfg: RunConfig):
    """Run one configuration and return (plot payload, table records)."""
    plan, hpp, model = cfg.plan, cfg.hpp, cfg.model
    geom = hpp.geometry
    if cfg.task is Task.SWEEP:
        rows = altitude_sweep(plan, hpp, cfg.noma, model, sim=cfg.sim)
        return rows, [_sweep_record(r) for r in rows]
    if cfg.task is Task.SCAN_CURVE:
        rows = []
        for h in plan.altitude_grid:
            hpp_h = replace(hpp, geometry=replace(geom, altitude=h))
            for p in plan.power_grid_dbm:
                noma_p = replace(cfg.noma, budget=replace(cfg.noma.budget,
                                                          tx_power_dbm=p))
                scan = beam_scan(hpp_h, noma_p, model, plan)
                rows.extend(scan_rows(scan, h, p))
        return rows, [_sweep_record(r) for r in rows]
    if cfg.task is Task.HISTOGRAM:
        # The beam is placed by the rate-optimal scan at the first grid power.
        noma_p = replace(cfg.noma, budget=replace(cfg.noma.budget,
                                                  tx_power_dbm=plan.power_grid_dbm[0]))
        rows = []
        for h in plan.altitude_grid:
            hpp_h = replace(hpp, geometry=replace(geom, altitude=h))
            scan = beam_scan(hpp_h, noma_p, model, plan)
            hist = actual_order_histogram(hpp_h, scan.region, noma_p, model,
                                          cfg.sim)
            rows.extend({"altitude": h, "position": int(pos),
                         "freq_strong": float(s), "freq_weak": float(w),
                         "trials_used": hist["trials_used"]}
                        for pos, s, w in zip(hist["positions"],
                                             hist["strong"], hist["weak"]))
        records = [{"h": r["altitude"], **{k: r[k] for k in HISTOGRAM_COLUMNS[1:]}}
                   for r in rows]
        return rows, records
    rows = []
    for h in plan.altitude_grid:
        geom_h = replace(geom, altitude=h)
        rows.append({"altitude": h,
                     "required_beamwidth_deg":
                         degrees(required_vertical_beamwidth(geom_h)),
                     "available_beamwidth_deg": degrees(geom_h.vertical_beamwidth),
                     "covered": coverage_status(geom_h) is Coverage.FULL})
    records = [{"h": r["altitude"], **{k: r[k] for k in COVERAGE_COLUMNS[1:]}}
               for r in rows]
    return rows, records


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):  # includes numpy scalars; shortest repr
        return repr(float(value))
    return str(value)


def _write_table(records: list[dict], columns, path: Path, fmt: str) -> None:
    if fmt == "json":
        path.write_text(json.dumps(records, indent=1) + "\n")
        return
    import csv

    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for rec in records:
            writer.writerow([_cell(rec[c]) for c in columns])


def _versions() -> dict:
    import matplotlib
    import numpy
    import scipy

    try:
        package = importlib.metadata.version("artifact")
    except importlib.metadata.PackageNotFoundError:
        package = "unknown"
    return {"python": sys.version.split()[0], "numpy": numpy.__version__,
            "scipy": scipy.__version__, "matplotlib": matplotlib.__version__,
            "package": package}


def run(variants: list[tuple[str, RunConfig]], base_name: str,
        plot_kind: str | None = None) -> dict:
    """Execute labeled configurations, write tables, figure, and manifest.

    Returns the manifest dict.  All variants must share one task, output
    directory, and format; the preset layer guarantees this and ad hoc
    callers get a ValidationError otherwise.
    """
    if not variants:
        raise ValidationError("nothing to run: no variants")
    first = variants[0][1]
    if any(c.task is not first.task or c.out_dir != first.out_dir
           or c.out_format != first.out_format for _, c in variants):
        raise ValidationError("variants must share task, directory, and format")

    columns = {Task.HISTOGRAM: HISTOGRAM_COLUMNS,
               Task.COVERAGE: COVERAGE_COLUMNS}.get(first.task, SWEEP_COLUMNS)
    out_dir = Path(first.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    started = time.perf_counter()

    datasets, entries, outputs = [], [], []
    for label, cfg in variants:
        rows, records = _execute(cfg)
        suffix = f"_{label}" if label else ""
        table = out_dir / f"{base_name}{suffix}.{cfg.out_format}"
        _write_table(records, columns, table, cfg.out_format)
        datasets.append((label, rows))
        entries.append({"label": label, "config": cfg.to_dict(),
                        "seed": cfg.sim.seed, "rows": len(records),
                        "output": table.name})
        outputs.append(table.name)
        print(f"wrote {table} ({len(records)} rows)")

    if first.plots:
        figure = out_dir / f"{base_name}.png"
        plots.render(plot_kind or _DEFAULT_PLOT[first.task], datasets, figure)
        outputs.append(figure.name)
        print(f"wrote {figure}")

    manifest = {"name": base_name, "task": first.task.value,
                "seed": first.sim.seed, "variants": entries,
                "outputs": outputs, "versions": _versions(),
                "wall_time_s": round(time.perf_counter() - started, 3)}
    manifest_path = out_dir / f"{base_name}_manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=1) + "\n")
    print(f"wrote {manifest_path}")
    return manifest


def _flag_overrides(args) -> list[str]:
    sets = list(args.set or [])
    if args.altitude:
        sets.append("sweep.altitudes_m=" + json.dumps(args.altitude))
    if args.power:
        sets.append("sweep.powers_dbm=" + json.dumps(args.power))
    if args.trials is not None:
        sets.append(f"sim.trials={args.trials}")
    if args.seed is not None:
        sets.append(f"sim.seed={args.seed}")
    if args.out is not None:
        sets.append("output.directory=" + json.dumps(args.out))
    if args.format is not None:
        sets.append("output.format=" + json.dumps(args.format))
    if args.no_plots:
        sets.append("output.plots=false")
    return sets


def _cmd_run(args) -> int:
    if args.workers is not None:
        os.environ["AIRNOMA_WORKERS"] = str(args.workers)
    sets = _flag_overrides(args)

    if args.preset is not None:
        preset = PRESETS.get(args.preset)
        if preset is None:
            raise ValidationError(
                f"unknown preset {args.preset!r}; see 'airnoma presets'")
        variants = [(label, parse_config(apply_overrides(delta, sets)))
                    for label, delta in preset.variants]
        run(variants, preset.name, preset.plot)
        return 0
    base = parse_config(args.config).to_dict() if args.config else default_config()
    cfg = parse_config(apply_overrides(base, sets))
    name = Path(args.config).stem if args.config else "run"
    run([("", cfg)], name)
    return 0


def _cmd_presets(_args) -> int:
    for name in sorted(PRESETS, key=lambda n: (len(n), n)):
        print(f"{name:<8} {PRESETS[name].description}")
    return 0


def _cmd_schema(_args) -> int:
    print(json.dumps(default_config(), indent=2))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="airnoma",
        description="Outage sum rates of aerial NOMA over a scanned annular "
                    "sector: analytic, simulated, and asymptotic.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a preset or configuration")
    src = p_run.add_mutually_exclusive_group()
    src.add_argument("--preset", help="named recipe; see 'airnoma presets'")
    src.add_argument("--config", help="path to a JSON configuration document")
    p_run.add_argument("--set", action="append", metavar="PATH=VALUE",
                       help="override one field, e.g. sim.trials=50000")
    p_run.add_argument("--altitude", action="append", type=float, metavar="M",
                       help="replace the altitude grid (repeatable)")
    p_run.add_argument("--power", action="append", type=float, metavar="DBM",
                       help="replace the power grid (repeatable)")
    p_run.add_argument("--trials", type=int, help="simulation trials")
    p_run.add_argument("--seed", type=int, help="simulation seed")
    p_run.add_argument("--out", help="output directory")
    p_run.add_argument("--format", choices=("csv", "json"), help="table format")
    p_run.add_argument("--no-plots", action="store_true",
                       help="skip figure rendering")
    p_run.add_argument("--workers", type=int,
                       help="simulation worker processes (default 1)")
    p_run.set_defaults(func=_cmd_run)

    p_list = sub.add_parser("presets", help="list the named recipes")
    p_list.set_defaults(func=_cmd_presets)

    p_schema = sub.add_parser("schema", help="print the default configuration")
    p_schema.set_defaults(func=_cmd_schema)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except AirnomaError as exc:
        record = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        print(json.dumps(record), file=sys.stderr)
        return 1
    except Exception as exc:  # keep failures machine-readable end to end
        record = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        print(json.dumps(record), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
