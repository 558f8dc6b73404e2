"""Run configuration: schema, defaults, parsing, and serialization.

A run is described by one JSON document.  Units at this boundary are
human-facing (degrees, dBm, meters); parsing converts angles to radians
and everything downstream is SI plus dB quantities carried explicitly.
Unknown keys are rejected with their full path so typos fail loudly.
"""
from __future__ import annotations

import copy
import enum
import json
from dataclasses import dataclass
from math import radians
from pathlib import Path

from .errors import ParseError
from .experiments import Method, Objective, SweepPlan, default_altitude_grid
from .montecarlo import SimSpec
from .outage import NomaPairConfig
from .propagation import ChannelModel, CloseInModel, DistancePowerLaw, LinkBudget
from .geometry import RegionGeometry
from .userstats import HppConfig, RankPair

__all__ = ["Task", "RunConfig", "default_config", "parse_config",
           "apply_overrides", "config_to_dict"]


class Task(enum.Enum):
    SWEEP = "sweep"  # altitude/power sweep, one row per operating point
    SCAN_CURVE = "scan_curve"  # rate versus boresight at fixed altitudes
    HISTOGRAM = "histogram"  # gain-order positions of the distance-selected pair
    COVERAGE = "coverage"  # required vertical beamwidth versus altitude


def default_config() -> dict:
    """Canonical document with every field at its baseline value."""
    return {
        "task": "sweep",
        "geometry": {
            "inner_radius_m": 25.0,
            "outer_radius_m": 100.0,
            "sector_width_deg": 0.5,
            "altitude_m": 50.0,
            "vertical_beamwidth_deg": 28.0,
        },
        "channel": {
            "path_loss": "distance_power",
            "path_loss_exponent": 2.0,
            "carrier_ghz": 30.0,
            "array_size": 10,
        },
        "link": {"tx_power_dbm": 10.0, "noise_dbm": -35.0},
        "users": {"density_per_m2": 1.0, "strong_rank": 20, "weak_rank": 30},
        "rates": {"strong_bpcu": 6.0, "weak_bpcu": 0.5},
        "power_split": {"strong": 0.25, "weak": 0.75},
        "sweep": {
            "altitudes_m": list(default_altitude_grid()),
            "powers_dbm": [10.0, 20.0, 30.0],
            "scan_step_m": 1.0,
            "objective": "noma_sum_rate",
            "methods": ["analytic", "montecarlo"],
        },
        "sim": {
            "trials": 100_000,
            "seed": 0,
            "ordering": "distance",
            "csi_ranks": None,
            "chunk": 1 << 17,
        },
        "output": {"directory": "out", "format": "csv", "plots": True},
    }


@dataclass(frozen=True)
class RunConfig:
    """Validated, typed view of one configuration document."""

    task: Task
    hpp: HppConfig
    model: ChannelModel
    noma: NomaPairConfig
    plan: SweepPlan
    sim: SimSpec
    out_dir: str
    out_format: str
    plots: bool
    document: dict  # merged canonical form; round-trips losslessly

    def to_dict(self) -> dict:
        return copy.deepcopy(self.document)


def _merge(base: dict, override: dict, path: str = "") -> dict:
    out = copy.deepcopy(base)
    for key, value in override.items():
        where = f"{path}.{key}" if path else key
        if key not in base:
            raise ParseError(f"{where}: unknown key")
        if isinstance(base[key], dict):
            if not isinstance(value, dict):
                raise ParseError(f"{where}: expected an object")
            out[key] = _merge(base[key], value, where)
        else:
            out[key] = copy.deepcopy(value)
    return out


def _need(doc: dict, section: str, key: str, kinds, allow_none: bool = False):
    value = doc[section][key]
    if value is None and allow_none:
        return None
    if isinstance(value, bool) and bool not in (kinds if isinstance(kinds, tuple) else (kinds,)):
        raise ParseError(f"{section}.{key}: expected {kinds}, got a boolean")
    if not isinstance(value, kinds):
        raise ParseError(f"{section}.{key}: expected {kinds}, got {type(value).__name__}")
    return value


def _float(doc, section, key) -> float:
    return float(_need(doc, section, key, (int, float)))


def _float_list(doc, section, key) -> list[float]:
    raw = _need(doc, section, key, list)
    out = []
    for idx, item in enumerate(raw):
        if isinstance(item, bool) or not isinstance(item, (int, float)):
            raise ParseError(f"{section}.{key}[{idx}]: expected a number")
        out.append(float(item))
    return out


def parse_config(source) -> RunConfig:
    """Build a RunConfig from a dict, JSON text path, or Path.

    Structural problems raise ParseError naming the offending field;
    domain invariants (rank order, power split, grids) surface as the
    library's own ValidationError.
    """
    if isinstance(source, (str, Path)):
        path = Path(source)
        if not path.exists():
            raise ParseError(f"config file not found: {path}")
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: invalid JSON ({exc})") from None
    elif isinstance(source, dict):
        data = source
    else:
        raise ParseError(f"unsupported config source {type(source).__name__}")
    if not isinstance(data, dict):
        raise ParseError("config root: expected an object")
    doc = _merge(default_config(), data)

    if not isinstance(doc["task"], str):
        raise ParseError("task: expected a string")
    try:
        task = Task(doc["task"])
    except ValueError:
        raise ParseError(f"task: unknown task {doc['task']!r}") from None

    geometry = RegionGeometry(
        inner_radius=_float(doc, "geometry", "inner_radius_m"),
        outer_radius=_float(doc, "geometry", "outer_radius_m"),
        half_angle=radians(0.5 * _float(doc, "geometry", "sector_width_deg")),
        altitude=_float(doc, "geometry", "altitude_m"),
        vertical_beamwidth=radians(_float(doc, "geometry", "vertical_beamwidth_deg")),
    )
    hpp = HppConfig(geometry=geometry,
                    density=_float(doc, "users", "density_per_m2"))

    kind = _need(doc, "channel", "path_loss", str)
    if kind == "distance_power":
        variant = DistancePowerLaw(exponent=_float(doc, "channel", "path_loss_exponent"))
    elif kind == "close_in":
        variant = CloseInModel(carrier_ghz=_float(doc, "channel", "carrier_ghz"))
    else:
        raise ParseError(f"channel.path_loss: unknown model {kind!r}")
    model = ChannelModel(path_loss=variant,
                         array_size=int(_need(doc, "channel", "array_size", int)),
                         sector_half_angle=geometry.half_angle)

    budget = LinkBudget(tx_power_dbm=_float(doc, "link", "tx_power_dbm"),
                        noise_dbm=_float(doc, "link", "noise_dbm"))
    pair = RankPair(strong=int(_need(doc, "users", "strong_rank", int)),
                    weak=int(_need(doc, "users", "weak_rank", int)))
    noma = NomaPairConfig(pair=pair, budget=budget,
                          rate_strong=_float(doc, "rates", "strong_bpcu"),
                          rate_weak=_float(doc, "rates", "weak_bpcu"),
                          power_frac_strong=_float(doc, "power_split", "strong"),
                          power_frac_weak=_float(doc, "power_split", "weak"))

    try:
        methods = frozenset(Method(m) for m in _need(doc, "sweep", "methods", list))
        objective = Objective(_need(doc, "sweep", "objective", str))
    except ValueError as exc:
        raise ParseError(f"sweep: {exc}") from None
    plan = SweepPlan(altitude_grid=tuple(_float_list(doc, "sweep", "altitudes_m")),
                     power_grid_dbm=tuple(_float_list(doc, "sweep", "powers_dbm")),
                     d_scan_step=_float(doc, "sweep", "scan_step_m"),
                     objective=objective, methods=methods)

    ranks = _need(doc, "sim", "csi_ranks", list, allow_none=True)
    if ranks is not None:
        if len(ranks) != 2 or not all(isinstance(r, int) for r in ranks):
            raise ParseError("sim.csi_ranks: expected [strong, weak] integer positions")
        ranks = (ranks[0], ranks[1])
    try:
        sim = SimSpec(trials=int(_need(doc, "sim", "trials", int)),
                      seed=int(_need(doc, "sim", "seed", int)),
                      ordering=_need(doc, "sim", "ordering", str),
                      csi_ranks=ranks,
                      chunk=int(_need(doc, "sim", "chunk", int)))
    except ValueError as exc:
        raise ParseError(f"sim.ordering: {exc}") from None

    fmt = _need(doc, "output", "format", str)
    if fmt not in ("csv", "json"):
        raise ParseError(f"output.format: expected 'csv' or 'json', got {fmt!r}")
    return RunConfig(task=task, hpp=hpp, model=model, noma=noma, plan=plan,
                     sim=sim, out_dir=_need(doc, "output", "directory", str),
                     out_format=fmt, plots=bool(doc["output"]["plots"]),
                     document=doc)


def apply_overrides(data: dict, assignments: list[str]) -> dict:
    """Apply ``section.key=value`` strings; values parse as JSON first,
    falling back to a bare string."""
    out = copy.deepcopy(data)
    for text in assignments:
        target, sep, raw = text.partition("=")
        if not sep:
            raise ParseError(f"override {text!r}: expected path=value")
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        node = out
        parts = target.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ParseError(f"override {target}: {part} is not an object")
        node[parts[-1]] = value
    return out


def config_to_dict(cfg: RunConfig) -> dict:
    return cfg.to_dict()
