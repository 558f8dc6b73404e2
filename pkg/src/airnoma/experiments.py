"""Boresight scanning and altitude/power sweeps.

Under partial coverage the boresight intersection distance is a free
parameter; the scan walks a grid between the two admissible extremes
and keeps the analytic sum rate maximizer.  Sweeps then evaluate every
requested method at that operating point, one row per altitude, power,
and method, in a fixed order so the emitted table is deterministic.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

from .errors import ValidationError
from .geometry import (
    Coverage,
    RadiatedRegion,
    RegionGeometry,
    bisecting_boresight,
    boresight_limits,
    coverage_status,
    radiated_region,
)
from .montecarlo import Ordering, SimSpec, simulate_report
from .outage import NomaPairConfig, OutageReport, analytic_report, asymptotic_report
from .propagation import ChannelModel
from .quadrature import DEFAULT_SPEC, QuadSpec
from .userstats import HppConfig, OrderStatDistributions

__all__ = [
    "Method",
    "Objective",
    "SweepPlan",
    "ScanResult",
    "SweepRow",
    "default_altitude_grid",
    "beam_scan",
    "altitude_sweep",
]


class Method(enum.Enum):
    ANALYTIC = "analytic"
    MONTECARLO = "montecarlo"
    ASYMPTOTIC = "asymptotic"


class Objective(enum.Enum):
    NOMA_SUM_RATE = "noma_sum_rate"


def default_altitude_grid() -> tuple[float, ...]:
    return tuple(np.arange(10.0, 150.0 + 1e-9, 2.5))


@dataclass(frozen=True)
class SweepPlan:
    """Grids and methods of one sweep."""

    altitude_grid: tuple[float, ...]
    power_grid_dbm: tuple[float, ...]
    d_scan_step: float = 1.0
    objective: Objective = Objective.NOMA_SUM_RATE
    methods: frozenset[Method] = frozenset({Method.ANALYTIC})

    def __post_init__(self):
        object.__setattr__(self, "altitude_grid", tuple(float(h) for h in self.altitude_grid))
        object.__setattr__(self, "power_grid_dbm", tuple(float(p) for p in self.power_grid_dbm))
        object.__setattr__(self, "objective", Objective(self.objective))
        object.__setattr__(self, "methods", frozenset(Method(m) for m in self.methods))
        for name, grid in (("altitude_grid", self.altitude_grid),
                           ("power_grid_dbm", self.power_grid_dbm)):
            if not grid:
                raise ValidationError(f"{name} must not be empty")
            if any(b <= a for a, b in zip(grid, grid[1:])):
                raise ValidationError(f"{name} must be strictly increasing")
        if self.d_scan_step <= 0:
            raise ValidationError("d_scan_step must be positive")
        if not self.methods:
            raise ValidationError("methods must not be empty")


@dataclass(frozen=True)
class ScanResult:
    """Outcome of one boresight scan at a fixed altitude and power."""

    boresight: float  # maximizer; the bisecting boresight under full coverage
    best_rate: float
    boresights: tuple[float, ...]
    reports: tuple[OutageReport, ...]  # analytic report per grid point
    coverage: Coverage
    region: RadiatedRegion

    @property
    def rates(self) -> tuple[float, ...]:
        return tuple(r.sum_rate_noma for r in self.reports)


def _scan_grid(geom: RegionGeometry, step: float) -> list[float]:
    lo, hi = boresight_limits(geom)
    grid = list(np.arange(lo, hi, step))
    if not grid or hi - grid[-1] > 1e-9:
        grid.append(hi)
    return [float(d) for d in grid]


def beam_scan(hpp: HppConfig, cfg: NomaPairConfig, model: ChannelModel,
              plan: SweepPlan, spec: QuadSpec = DEFAULT_SPEC) -> ScanResult:
    """Grid-search the boresight distance for the best analytic NOMA sum
    rate; ties go to the smaller distance.  Under full coverage there is
    nothing to scan and the single bisecting pointing is returned."""
    geom = hpp.geometry
    dists = OrderStatDistributions.from_config(hpp, cfg.pair)
    if coverage_status(geom) is Coverage.FULL:
        region = radiated_region(geom, boresight=bisecting_boresight(geom))
        report = analytic_report(geom, region, cfg, model, dists, spec)
        return ScanResult(boresight=region.boresight, best_rate=report.sum_rate_noma,
                          boresights=(region.boresight,), reports=(report,),
                          coverage=Coverage.FULL, region=region)
    grid = _scan_grid(geom, plan.d_scan_step)
    reports = []
    best = 0
    for idx, d in enumerate(grid):
        region = radiated_region(geom, boresight=d)
        reports.append(analytic_report(geom, region, cfg, model, dists, spec))
        if reports[idx].sum_rate_noma > reports[best].sum_rate_noma:
            best = idx
    return ScanResult(boresight=grid[best], best_rate=reports[best].sum_rate_noma,
                      boresights=tuple(grid), reports=tuple(reports),
                      coverage=Coverage.PARTIAL,
                      region=radiated_region(geom, boresight=grid[best]))


@dataclass(frozen=True)
class SweepRow:
    """One evaluated operating point; the serializers consume these."""

    altitude: float
    power_dbm: float
    boresight: float
    method: str
    sum_rate_noma: float
    sum_rate_oma: float
    outage_weak: float
    outage_strong: float
    event_neither: float
    event_weak_only: float
    event_strong_only: float
    event_both: float
    errors: dict


def _method_label(method: Method, sim: SimSpec | None) -> str:
    if (method is Method.MONTECARLO and sim is not None
            and sim.ordering is Ordering.FULL_CSI):
        return "montecarlo_full_csi"
    return method.value


def _row(altitude: float, power_dbm: float, boresight: float, label: str,
         report: OutageReport) -> SweepRow:
    ev = report.tail_events
    return SweepRow(altitude=altitude, power_dbm=power_dbm, boresight=boresight,
                    method=label, sum_rate_noma=report.sum_rate_noma,
                    sum_rate_oma=report.sum_rate_oma,
                    outage_weak=report.outage_weak,
                    outage_strong=report.outage_strong,
                    event_neither=ev.neither, event_weak_only=ev.weak_only,
                    event_strong_only=ev.strong_only, event_both=ev.both,
                    errors=dict(report.errors))


def scan_rows(scan: ScanResult, altitude: float, power_dbm: float) -> list[SweepRow]:
    """One row per scanned boresight, for rate-versus-pointing datasets."""
    return [_row(altitude, power_dbm, d, Method.ANALYTIC.value, rep)
            for d, rep in zip(scan.boresights, scan.reports)]


def altitude_sweep(plan: SweepPlan, hpp: HppConfig, cfg: NomaPairConfig,
                   model: ChannelModel, sim: SimSpec | None = None,
                   spec: QuadSpec = DEFAULT_SPEC) -> list[SweepRow]:
    """Scan the boresight at every (altitude, power) point, then evaluate
    the requested methods at the maximizer.  Rows come out ordered by
    altitude, power, then method name."""
    if Method.MONTECARLO in plan.methods and sim is None:
        raise ValidationError("a SimSpec is required when methods include montecarlo")
    rows: list[SweepRow] = []
    for h in plan.altitude_grid:
        hpp_h = replace(hpp, geometry=replace(hpp.geometry, altitude=h))
        dists = OrderStatDistributions.from_config(hpp_h, cfg.pair)
        for p in plan.power_grid_dbm:
            cfg_p = replace(cfg, budget=replace(cfg.budget, tx_power_dbm=p))
            scan = beam_scan(hpp_h, cfg_p, model, plan, spec)
            for method in sorted(plan.methods, key=lambda m: m.value):
                if method is Method.ANALYTIC:
                    report = scan.reports[scan.boresights.index(scan.boresight)]
                elif method is Method.MONTECARLO:
                    report = simulate_report(hpp_h, scan.region, cfg_p, model, sim)
                else:
                    report = asymptotic_report(hpp_h.geometry, scan.region, cfg_p,
                                               model, dists, spec)
                rows.append(_row(h, p, scan.boresight,
                                 _method_label(method, sim), report))
    return rows
