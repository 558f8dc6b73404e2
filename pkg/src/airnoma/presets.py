"""Named run recipes, one per headline result.

Each preset bundles one or more labeled configuration deltas against the
baseline document plus the plot kind used to render the combined
dataset.  Labels become file suffixes so multi-variant presets emit one
table per variant next to a single figure.
"""
from __future__ import annotations

from dataclasses import dataclass

__all__ = ["Preset", "PRESETS"]


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    plot: str  # plots.render kind
    variants: tuple[tuple[str, dict], ...]  # (label, config delta)


def _altitudes(start: float, stop: float, step: float) -> list[float]:
    out, h = [], start
    while h <= stop + 1e-9:
        out.append(round(h, 6))
        h += step
    return out


_COARSE_H = _altitudes(10.0, 150.0, 5.0)
_FINE_H = _altitudes(10.0, 150.0, 2.5)

PRESETS: dict[str, Preset] = {}


def _add(name: str, description: str, plot: str, *variants: tuple[str, dict]):
    PRESETS[name] = Preset(name=name, description=description, plot=plot,
                           variants=tuple(variants))


_add(
    "fig2",
    "Required vertical beamwidth versus altitude for three inner radii.",
    "coverage",
    ("L1_0", {"task": "coverage", "geometry": {"inner_radius_m": 0.0},
              "sweep": {"altitudes_m": _FINE_H, "methods": ["analytic"]}}),
    ("L1_25", {"task": "coverage",
               "sweep": {"altitudes_m": _FINE_H, "methods": ["analytic"]}}),
    ("L1_85", {"task": "coverage", "geometry": {"inner_radius_m": 85.0},
               "sweep": {"altitudes_m": _FINE_H, "methods": ["analytic"]}}),
)

_add(
    "fig3",
    "NOMA and orthogonal sum rates versus altitude, ranks (20, 30).",
    "rates",
    ("", {"sweep": {"altitudes_m": _FINE_H}}),
)

_add(
    "fig4",
    "Outage probabilities of both served users versus altitude, ranks (20, 30).",
    "outage",
    ("", {"sweep": {"altitudes_m": _FINE_H}}),
)

_add(
    "fig5",
    "Presence-event probabilities versus altitude at 10 dBm, ranks (20, 30).",
    "events",
    ("", {"sweep": {"altitudes_m": _FINE_H, "powers_dbm": [10.0],
                    "methods": ["analytic"]}}),
)

_add(
    "fig6",
    "Distance ordering versus instantaneous-gain ordering, ranks (20, 25).",
    "rates",
    ("distance", {"users": {"weak_rank": 25},
                  "sweep": {"altitudes_m": _COARSE_H}}),
    ("full_csi", {"users": {"weak_rank": 25},
                  "sweep": {"altitudes_m": _COARSE_H, "methods": ["montecarlo"]},
                  "sim": {"ordering": "full_csi"}}),
)

_add(
    "fig7",
    "Gain-order positions actually occupied by the distance-selected pair.",
    "order_hist",
    ("", {"task": "histogram", "users": {"weak_rank": 25},
          "link": {"tx_power_dbm": 20.0},
          "sweep": {"altitudes_m": [60.0, 120.0], "powers_dbm": [20.0],
                    "methods": ["montecarlo"]}}),
)

_add(
    "fig8",
    "Effect of pair separation on sum rates at 20 dBm, strong rank 20.",
    "rates",
    ("i_21", {"users": {"weak_rank": 21}, "link": {"tx_power_dbm": 20.0},
              "sweep": {"altitudes_m": _FINE_H, "powers_dbm": [20.0],
                        "methods": ["analytic"]}}),
    ("i_25", {"users": {"weak_rank": 25}, "link": {"tx_power_dbm": 20.0},
              "sweep": {"altitudes_m": _FINE_H, "powers_dbm": [20.0],
                        "methods": ["analytic"]}}),
    ("i_30", {"link": {"tx_power_dbm": 20.0},
              "sweep": {"altitudes_m": _FINE_H, "powers_dbm": [20.0],
                        "methods": ["analytic"]}}),
)

_add(
    "fig9",
    "Sum rate and event probabilities along the boresight scan at 50 m.",
    "scan",
    ("", {"task": "scan_curve",
          "sweep": {"altitudes_m": [50.0], "methods": ["analytic"]}}),
)

_add(
    "fig10",
    "Sum rates under the close-in mmWave path loss with a 100-element array.",
    "rates",
    ("", {"users": {"weak_rank": 25},
          "channel": {"path_loss": "close_in", "array_size": 100},
          "sweep": {"altitudes_m": _FINE_H, "powers_dbm": [60.0, 70.0]}}),
)

_add(
    "fig11",
    "High-power conditional outages against their asymptotic slopes.",
    "asymptotic",
    ("", {"sweep": {"altitudes_m": [10.0, 50.0],
                    "powers_dbm": [50.0, 52.5, 55.0, 57.5, 60.0, 62.5, 65.0,
                                   67.5, 70.0],
                    "methods": ["analytic", "asymptotic"]}}),
)
