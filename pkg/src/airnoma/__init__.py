"""Outage analysis of aerial NOMA over a beam-scanned annular sector.

A low-altitude base station serves two users picked by distance order
from a Poisson field inside a narrow annular sector, splitting power
between a near user with a high rate target and a far user with a low
one.  The package evaluates the resulting outage probabilities and
outage sum rates three ways: closed-form expressions integrated by
adaptive quadrature, chunked Monte Carlo over the random field, and
high-power asymptotics.  On top sit the beam-scanning search for the
rate-optimal boresight, altitude/power sweeps, and a CLI that renders
each named experiment to tables and figures.
"""
from .errors import (AirnomaError, EventImpossible, InfeasiblePowerSplit,
                     NonPositiveDistance, OrderViolation, OutOfScanRange,
                     ParseError, PartialCoverageRequired, QuadratureFailure,
                     RadiusOutOfRegion, RankOutOfRange, ToleranceNotMet,
                     ValidationError)
from .geometry import (Coverage, RadiatedRegion, RegionGeometry,
                       bisecting_boresight, boresight_limits, coverage_fraction,
                       coverage_status, radiated_region,
                       required_vertical_beamwidth)
from .propagation import (ChannelModel, CloseInModel, DistancePowerLaw,
                          LinkBudget, beam_gain, beam_gain_exact,
                          effective_gain_cdf, fejer_kernel, path_loss)
from .userstats import (HppConfig, OrderStatDistributions, RankPair,
                        prob_count_in)
from .outage import (CountSet, Event, EventProbabilities, NomaPairConfig,
                     OutageReport, SicThresholds, analytic_report,
                     asymptotic_outage, asymptotic_report,
                     combine_unconditional, cond_outage_tail,
                     cond_outage_window, event_bounds, event_probabilities,
                     event_probability, oma_thresholds, outage_sum_rate,
                     sic_thresholds, sum_rate_noma, sum_rate_oma,
                     unconditional_outage)
from .quadrature import (QuadSpec, gauss_legendre, integrate_1d,
                         integrate_2d_triangular, integrate_3d_theta)
from .montecarlo import (Ordering, SimEstimate, SimSpec,
                         actual_order_histogram, sample_field,
                         simulate_report)
from .experiments import (Method, Objective, ScanResult, SweepPlan, SweepRow,
                          altitude_sweep, beam_scan, default_altitude_grid,
                          scan_rows)
from .config import (RunConfig, Task, apply_overrides, config_to_dict,
                     default_config, parse_config)
from .presets import PRESETS, Preset

try:
    from importlib.metadata import version as _version

    __version__ = _version("artifact")
except Exception:  # not installed; running from a source tree
    __version__ = "0.0.0"

__all__ = [
    "AirnomaError", "ValidationError", "ParseError", "PartialCoverageRequired",
    "OutOfScanRange", "NonPositiveDistance", "RankOutOfRange",
    "RadiusOutOfRegion", "OrderViolation", "InfeasiblePowerSplit",
    "ToleranceNotMet", "QuadratureFailure", "EventImpossible",
    "Coverage", "RegionGeometry", "RadiatedRegion",
    "required_vertical_beamwidth", "coverage_status", "boresight_limits",
    "radiated_region", "coverage_fraction", "bisecting_boresight",
    "ChannelModel", "DistancePowerLaw", "CloseInModel", "LinkBudget",
    "fejer_kernel", "beam_gain", "beam_gain_exact", "path_loss",
    "effective_gain_cdf",
    "HppConfig", "RankPair", "OrderStatDistributions", "prob_count_in",
    "CountSet", "Event", "EventProbabilities", "NomaPairConfig",
    "SicThresholds", "OutageReport", "sic_thresholds", "oma_thresholds",
    "event_bounds", "event_probabilities", "event_probability",
    "cond_outage_window", "cond_outage_tail", "asymptotic_outage",
    "combine_unconditional", "unconditional_outage", "outage_sum_rate",
    "sum_rate_noma", "sum_rate_oma",
    "analytic_report", "asymptotic_report",
    "QuadSpec", "gauss_legendre", "integrate_1d", "integrate_2d_triangular",
    "integrate_3d_theta",
    "Ordering", "SimSpec", "SimEstimate", "sample_field", "simulate_report",
    "actual_order_histogram",
    "Method", "Objective", "SweepPlan", "ScanResult", "SweepRow",
    "default_altitude_grid", "beam_scan", "altitude_sweep", "scan_rows",
    "Task", "RunConfig", "default_config", "parse_config", "apply_overrides",
    "config_to_dict",
    "Preset", "PRESETS",
    "__version__",
]
