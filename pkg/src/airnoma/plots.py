"""Figure rendering for run datasets.

Each kind takes the labeled per-variant payloads a run produced and
draws one PNG.  Rendering is best effort presentation; nothing here
feeds back into the numbers.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

__all__ = ["render"]

_STYLES = ["-", "--", "-.", ":"]
_MARKERS = ["o", "s", "^", "v", "d", "x"]


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _series(rows, key):
    return [getattr(r, key) for r in rows]


def _grouped(rows):
    """Yield ((method, power), subrows) by first appearance."""
    seen = {}
    for r in rows:
        seen.setdefault((r.method, r.power_dbm), []).append(r)
    return seen.items()


def _name(label, method, power, many_powers):
    parts = [p for p in (label, method) if p]
    if many_powers:
        parts.append(f"{power:g} dBm")
    return ", ".join(parts)


def _rates(datasets, path):
    fig, ax = plt.subplots(figsize=(7, 5))
    for vi, (label, rows) in enumerate(datasets):
        powers = sorted({r.power_dbm for r in rows})
        for (method, power), sub in _grouped(rows):
            solid = "analytic" in method
            ax.plot(_series(sub, "altitude"), _series(sub, "sum_rate_noma"),
                    linestyle="-" if solid else "none",
                    marker=None if solid else _MARKERS[vi % len(_MARKERS)],
                    markersize=4,
                    label=_name(label, method, power, len(powers) > 1) + " NOMA")
            if solid:
                ax.plot(_series(sub, "altitude"), _series(sub, "sum_rate_oma"),
                        linestyle="--",
                        label=_name(label, method, power, len(powers) > 1) + " OMA")
    ax.set_xlabel("altitude [m]")
    ax.set_ylabel("outage sum rate [BPCU]")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=7)
    _save(fig, path)


def _outage(datasets, path):
    fig, ax = plt.subplots(figsize=(7, 5))
    for vi, (label, rows) in enumerate(datasets):
        powers = sorted({r.power_dbm for r in rows})
        for (method, power), sub in _grouped(rows):
            solid = "analytic" in method
            for key, suffix in (("outage_strong", "near user"),
                                ("outage_weak", "far user")):
                ax.semilogy(_series(sub, "altitude"), _series(sub, key),
                            linestyle="-" if solid else "none",
                            marker=None if solid else _MARKERS[vi % len(_MARKERS)],
                            markersize=4,
                            label=_name(label, method, power, len(powers) > 1)
                            + " " + suffix)
    ax.set_xlabel("altitude [m]")
    ax.set_ylabel("outage probability")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=7)
    _save(fig, path)


_EVENT_KEYS = (("event_neither", "neither served"),
               ("event_weak_only", "far only"),
               ("event_strong_only", "near only"),
               ("event_both", "both served"))


def _events(datasets, path, x_key="altitude", x_label="altitude [m]"):
    fig, ax = plt.subplots(figsize=(7, 5))
    for label, rows in datasets:
        analytic = [r for r in rows if "analytic" in r.method] or rows
        for (key, name), style in zip(_EVENT_KEYS, _STYLES):
            ax.plot(_series(analytic, x_key), _series(analytic, key),
                    linestyle=style, label=", ".join(p for p in (label, name) if p))
    ax.set_xlabel(x_label)
    ax.set_ylabel("event probability")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    _save(fig, path)


def _scan(datasets, path):
    fig, (top, bottom) = plt.subplots(2, 1, figsize=(7, 8), sharex=True)
    for label, rows in datasets:
        for (method, power), sub in _grouped(rows):
            top.plot(_series(sub, "boresight"), _series(sub, "sum_rate_noma"),
                     marker=".", label=_name(label, method, power, True))
        powers = sorted({r.power_dbm for r in rows})
        low = [r for r in rows if r.power_dbm == powers[0]]
        for (key, name), style in zip(_EVENT_KEYS, _STYLES):
            bottom.plot(_series(low, "boresight"), _series(low, key),
                        linestyle=style, label=name)
    top.set_ylabel("outage sum rate [BPCU]")
    top.grid(True, alpha=0.3)
    top.legend(fontsize=8)
    bottom.set_xlabel("boresight ground distance [m]")
    bottom.set_ylabel("event probability")
    bottom.grid(True, alpha=0.3)
    bottom.legend(fontsize=8)
    _save(fig, path)


def _asymptotic(datasets, path):
    fig, ax = plt.subplots(figsize=(7, 5))
    for label, rows in datasets:
        altitudes = sorted({r.altitude for r in rows})
        for hi, h in enumerate(altitudes):
            for method in ("analytic", "asymptotic"):
                sub = [r for r in rows if r.altitude == h and r.method == method]
                if not sub:
                    continue
                for key, suffix in (("outage_strong", "near"), ("outage_weak", "far")):
                    ax.semilogy(_series(sub, "power_dbm"), _series(sub, key),
                                linestyle="-" if method == "analytic" else "--",
                                marker=_MARKERS[hi], markersize=4,
                                label=f"h={h:g} m {method} {suffix}")
    ax.set_xlabel("transmit power [dBm]")
    ax.set_ylabel("outage probability")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=7)
    _save(fig, path)


def _coverage(datasets, path):
    fig, ax = plt.subplots(figsize=(7, 5))
    beamwidth = None
    for label, table in datasets:
        ax.plot([row["altitude"] for row in table],
                [row["required_beamwidth_deg"] for row in table], label=label)
        beamwidth = table[0]["available_beamwidth_deg"] if table else beamwidth
    if beamwidth is not None:
        ax.axhline(beamwidth, color="gray", linestyle=":",
                   label=f"available ({beamwidth:g} deg)")
    ax.set_xlabel("altitude [m]")
    ax.set_ylabel("required vertical beamwidth [deg]")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    _save(fig, path)


def _order_hist(datasets, path):
    tables = [t for _, t in datasets]
    groups = sorted({row["altitude"] for table in tables for row in table})
    fig, axes = plt.subplots(len(groups), 1, figsize=(7, 4 * len(groups)),
                             squeeze=False)
    for ax, h in zip(axes[:, 0], groups):
        for label, table in datasets:
            rows = [r for r in table if r["altitude"] == h]
            pos = [r["position"] for r in rows]
            width = 0.4
            ax.bar([p - 0.5 * width for p in pos],
                   [r["freq_strong"] for r in rows], width=width,
                   label=(label + " " if label else "") + "near pick")
            ax.bar([p + 0.5 * width for p in pos],
                   [r["freq_weak"] for r in rows], width=width,
                   label=(label + " " if label else "") + "far pick")
        ax.set_title(f"altitude {h:g} m")
        ax.set_xlabel("position in the gain-descending order")
        ax.set_ylabel("frequency")
        ax.legend(fontsize=8)
    _save(fig, path)


_KINDS = {
    "rates": _rates,
    "outage": _outage,
    "events": _events,
    "scan": _scan,
    "asymptotic": _asymptotic,
    "coverage": _coverage,
    "order_hist": _order_hist,
}


def render(kind: str, datasets, path) -> None:
    """Draw the named figure kind from labeled per-variant payloads."""
    if kind not in _KINDS:
        raise ValueError(f"unknown plot kind {kind!r}")
    _KINDS[kind](datasets, path)
