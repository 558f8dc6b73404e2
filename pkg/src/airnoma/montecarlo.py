"""Simulation oracle for the hybrid pair transmission.

Draws whole user fields, orders them by distance or by instantaneous
effective gain, runs the presence-event and decoding logic trial by
trial, and tallies every probability and sum rate empirically.  The
engine shares no formulas with the analytic path beyond the channel
model itself, which makes the two mutual cross-checks.

Trials are processed in fixed-size chunks, each driven by its own child
of the root seed sequence with a fixed draw order (counts, radii,
azimuth offsets, fading).  Tallies are integer counts, so reduction
over chunks is exact and the report is bit-identical for any worker
count.  Set AIRNOMA_WORKERS to process chunks in parallel.
"""
from __future__ import annotations

import enum
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .geometry import RadiatedRegion
from .outage import (
    EventProbabilities,
    NomaPairConfig,
    OutageReport,
    oma_thresholds,
)
from .propagation import ChannelModel, fejer_kernel, path_loss
from .userstats import HppConfig

__all__ = [
    "Ordering",
    "SimSpec",
    "SimEstimate",
    "sample_field",
    "simulate_report",
    "actual_order_histogram",
]

_HIST_LEN = 512  # rank histogram capacity; counts this size are never reached


class Ordering(enum.Enum):
    DISTANCE = "distance"
    FULL_CSI = "full_csi"


@dataclass(frozen=True)
class SimSpec:
    """Size, seed, and ordering scheme of a simulation run."""

    trials: int = 1_000_000
    seed: int = 0
    ordering: Ordering = Ordering.DISTANCE
    # gain-descending positions (strong, weak) selected under full-CSI
    # ordering; defaults to the distance ranks so both feedback schemes
    # pick the same order of channel quality
    csi_ranks: tuple[int, int] | None = None
    chunk: int = 1 << 17  # trials per chunk; part of the stream layout

    def __post_init__(self):
        object.__setattr__(self, "ordering", Ordering(self.ordering))
        if self.trials <= 0:
            raise ValidationError("trials must be positive")
        if self.chunk <= 0:
            raise ValidationError("chunk size must be positive")
        if self.csi_ranks is not None:
            s, w = self.csi_ranks
            if not 1 <= s < w:
                raise ValidationError("csi_ranks must satisfy 1 <= strong < weak")


@dataclass(frozen=True)
class SimEstimate:
    """Empirical estimate with a three-sigma half width."""

    mean: float
    half_width_3sigma: float
    trials_used: int

    @classmethod
    def from_counts(cls, successes: int, trials: int) -> "SimEstimate":
        p = successes / trials
        return cls(mean=p,
                   half_width_3sigma=3.0 * np.sqrt(p * (1.0 - p) / trials),
                   trials_used=trials)

    @classmethod
    def from_moments(cls, mean: float, variance: float,
                     trials: int) -> "SimEstimate":
        return cls(mean=mean,
                   half_width_3sigma=3.0 * np.sqrt(max(variance, 0.0) / trials),
                   trials_used=trials)


def sample_field(cfg: HppConfig, rng) -> tuple[np.ndarray, np.ndarray]:
    """One field draw: Poisson count, then area-uniform radii and
    azimuths uniform over the sector (centered at azimuth zero)."""
    g = cfg.geometry
    k = int(rng.poisson(cfg.mean_count))
    u = rng.random(k)
    d = np.sqrt(g.inner_radius ** 2
                + u * (g.outer_radius ** 2 - g.inner_radius ** 2))
    theta = rng.uniform(-g.half_angle, g.half_angle, k)
    return d, theta


@dataclass
class _Tally:
    """Integer counts accumulated over trials; merging is exact."""

    trials: int = 0
    window: int = 0  # strong rank exists, weak does not
    tail: int = 0  # both exist
    window_in: int = 0  # lone strong user inside the annulus
    window_ok: int = 0
    e2: int = 0
    e3: int = 0
    e4: int = 0
    e2_weak_ok: int = 0
    e3_strong_ok: int = 0
    e4_strong_ok: int = 0
    e4_weak_ok: int = 0
    e4_both_ok: int = 0
    e4_strong_ok_oma: int = 0
    e4_weak_ok_oma: int = 0
    e4_both_ok_oma: int = 0
    hist_strong: np.ndarray = field(
        default_factory=lambda: np.zeros(_HIST_LEN, dtype=np.int64))
    hist_weak: np.ndarray = field(
        default_factory=lambda: np.zeros(_HIST_LEN, dtype=np.int64))

    def merge(self, other: "_Tally") -> None:
        for name in self.__dataclass_fields__:
            mine = getattr(self, name)
            if isinstance(mine, np.ndarray):
                mine += getattr(other, name)
            else:
                setattr(self, name, mine + getattr(other, name))


def _run_chunk(args) -> _Tally:
    hpp, region, cfg, model, sim, want_hist, n, child_seed = args
    rng = np.random.default_rng(child_seed)
    g = hpp.geometry
    tally = _Tally(trials=n)

    counts = rng.poisson(hpp.mean_count, n)
    total = int(counts.sum())
    u = rng.random(total)
    d = np.sqrt(g.inner_radius ** 2
                + u * (g.outer_radius ** 2 - g.inner_radius ** 2))
    offset = rng.uniform(-g.half_angle, g.half_angle, total)
    fading = rng.standard_exponential(total)

    fid = np.repeat(np.arange(n), counts)
    starts = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=starts[1:])
    gain = fading * fejer_kernel(model.array_size, offset) \
        / path_loss(model, np.hypot(d, g.altitude))

    if sim.ordering is Ordering.DISTANCE:
        strong_rank, weak_rank = cfg.pair.strong, cfg.pair.weak
        order = np.lexsort((d, fid))
    else:
        strong_rank, weak_rank = sim.csi_ranks or (cfg.pair.strong, cfg.pair.weak)
        order = np.lexsort((-gain, fid))
    d_sel = d[order]
    gain_sel = gain[order]

    rho = cfg.budget.tx_snr
    eps_s, eps_w = cfg.eps_strong, cfg.eps_weak
    bs2, bw2 = cfg.power_frac_strong, cfg.power_frac_weak
    oma = oma_thresholds(cfg)

    def inside(radii):
        return (radii >= region.inner) & (radii <= region.outer)

    # window set: the lone strong-ranked user, served alone at full power
    win = (counts >= strong_rank) & (counts < weak_rank)
    pos = starts[:-1][win] + (strong_rank - 1)
    win_in = inside(d_sel[pos])
    win_ok = win_in & (rho * gain_sel[pos] >= eps_s)
    tally.window = int(np.count_nonzero(win))
    tally.window_in = int(np.count_nonzero(win_in))
    tally.window_ok = int(np.count_nonzero(win_ok))

    # tail set: both ranks exist
    tl = counts >= weak_rank
    pos_s = starts[:-1][tl] + (strong_rank - 1)
    pos_w = starts[:-1][tl] + (weak_rank - 1)
    ds, dw = d_sel[pos_s], d_sel[pos_w]
    gs, gw = gain_sel[pos_s], gain_sel[pos_w]
    in_s, in_w = inside(ds), inside(dw)
    e2 = ~in_s & in_w
    e3 = in_s & ~in_w
    e4 = in_s & in_w
    tally.tail = int(np.count_nonzero(tl))
    tally.e2 = int(np.count_nonzero(e2))
    tally.e3 = int(np.count_nonzero(e3))
    tally.e4 = int(np.count_nonzero(e4))

    # lone-user decoding at full power
    tally.e2_weak_ok = int(np.count_nonzero(e2 & (rho * gw >= eps_w)))
    tally.e3_strong_ok = int(np.count_nonzero(e3 & (rho * gs >= eps_s)))

    # superposed decoding: the weak message is decoded against the strong
    # user's power at both receivers; the strong user then cancels it and
    # decodes its own message interference-free
    weak_msg_at_w = rho * gw * bw2 >= eps_w * (rho * gw * bs2 + 1.0)
    weak_msg_at_s = rho * gs * bw2 >= eps_w * (rho * gs * bs2 + 1.0)
    own_at_s = rho * gs * bs2 >= eps_s
    noma_s_ok = e4 & weak_msg_at_s & own_at_s
    noma_w_ok = e4 & weak_msg_at_w
    tally.e4_strong_ok = int(np.count_nonzero(noma_s_ok))
    tally.e4_weak_ok = int(np.count_nonzero(noma_w_ok))
    tally.e4_both_ok = int(np.count_nonzero(noma_s_ok & noma_w_ok))

    # orthogonal benchmark: halved resources double the in-slot rate need
    oma_s_ok = e4 & (gs >= oma.strong_pair)
    oma_w_ok = e4 & (gw >= oma.weak_pair)
    tally.e4_strong_ok_oma = int(np.count_nonzero(oma_s_ok))
    tally.e4_weak_ok_oma = int(np.count_nonzero(oma_w_ok))
    tally.e4_both_ok_oma = int(np.count_nonzero(oma_s_ok & oma_w_ok))

    if want_hist and tally.tail:
        # gain-descending position of each user within its own field
        gorder = np.lexsort((-gain, fid))
        local = np.arange(total, dtype=np.int64) - np.repeat(starts[:-1], counts)
        gain_pos = np.empty(total, dtype=np.int64)
        gain_pos[gorder] = local
        picked_s = order[pos_s]
        picked_w = order[pos_w]
        tally.hist_strong += np.bincount(
            np.minimum(gain_pos[picked_s], _HIST_LEN - 1), minlength=_HIST_LEN)
        tally.hist_weak += np.bincount(
            np.minimum(gain_pos[picked_w], _HIST_LEN - 1), minlength=_HIST_LEN)
    return tally


def _worker_count() -> int:
    raw = os.environ.get("AIRNOMA_WORKERS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _run_chunks(hpp, region, cfg, model, sim, want_hist) -> _Tally:
    sizes = [sim.chunk] * (sim.trials // sim.chunk)
    if sim.trials % sim.chunk:
        sizes.append(sim.trials % sim.chunk)
    children = np.random.SeedSequence(sim.seed).spawn(len(sizes))
    jobs = [(hpp, region, cfg, model, sim, want_hist, n, child)
            for n, child in zip(sizes, children)]
    tally = _Tally()
    workers = min(_worker_count(), len(jobs))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_run_chunk, jobs):
                tally.merge(part)
    else:
        for job in jobs:
            tally.merge(_run_chunk(job))
    return tally


def simulate_report(hpp: HppConfig, region: RadiatedRegion, cfg: NomaPairConfig,
                    model: ChannelModel, sim: SimSpec) -> OutageReport:
    """Empirical outage report over ``sim.trials`` independent fields.

    Every probability is a plain count ratio; conditional entries are
    omitted when their conditioning event never occurred.  The errors
    map holds three-sigma half widths and the trials map the matching
    denominators.
    """
    if abs(model.sector_half_angle - hpp.geometry.half_angle) > 1e-12:
        raise ValidationError("channel model and geometry disagree on the sector")
    t = _run_chunks(hpp, region, cfg, model, sim, want_hist=False)
    n = t.trials
    cond: dict[str, float] = {}
    errors: dict[str, float] = {}
    trials: dict[str, int] = {}

    def put(key, successes, denom):
        if denom <= 0:
            return
        est = SimEstimate.from_counts(successes, denom)
        cond[key] = est.mean
        errors[key] = est.half_width_3sigma
        trials[key] = denom

    put("window_strong", t.window_in - t.window_ok, t.window_in)
    put("weak_only_weak", t.e2 - t.e2_weak_ok, t.e2)
    put("strong_only_strong", t.e3 - t.e3_strong_ok, t.e3)
    put("both_strong", t.e4 - t.e4_strong_ok, t.e4)
    put("both_weak", t.e4 - t.e4_weak_ok, t.e4)
    put("both_strong_oma", t.e4 - t.e4_strong_ok_oma, t.e4)
    put("both_weak_oma", t.e4 - t.e4_weak_ok_oma, t.e4)

    window_events = EventProbabilities(
        neither=1.0 - (t.window_in / t.window if t.window else 0.0),
        weak_only=0.0,
        strong_only=t.window_in / t.window if t.window else 0.0,
        both=0.0)
    tail_events = EventProbabilities(
        neither=(t.tail - t.e2 - t.e3 - t.e4) / t.tail if t.tail else 1.0,
        weak_only=t.e2 / t.tail if t.tail else 0.0,
        strong_only=t.e3 / t.tail if t.tail else 0.0,
        both=t.e4 / t.tail if t.tail else 0.0)
    for key, succ, denom in (("event_window_strong_only", t.window_in, t.window),
                             ("event_tail_weak_only", t.e2, t.tail),
                             ("event_tail_strong_only", t.e3, t.tail),
                             ("event_tail_both", t.e4, t.tail)):
        if denom > 0:
            est = SimEstimate.from_counts(succ, denom)
            errors[key] = est.half_width_3sigma
            trials[key] = denom

    success_s = t.window_ok + t.e3_strong_ok + t.e4_strong_ok
    success_w = t.e2_weak_ok + t.e4_weak_ok
    success_s_oma = t.window_ok + t.e3_strong_ok + t.e4_strong_ok_oma
    success_w_oma = t.e2_weak_ok + t.e4_weak_ok_oma
    unconditional = {
        "window_prob": SimEstimate.from_counts(t.window, n),
        "tail_prob": SimEstimate.from_counts(t.tail, n),
        "outage_strong": SimEstimate.from_counts(n - success_s, n),
        "outage_weak": SimEstimate.from_counts(n - success_w, n),
        "oma_outage_strong": SimEstimate.from_counts(n - success_s_oma, n),
        "oma_outage_weak": SimEstimate.from_counts(n - success_w_oma, n),
    }
    for key, est in unconditional.items():
        errors[key] = est.half_width_3sigma
        trials[key] = est.trials_used

    def rate_estimate(s_ok, w_ok, both_ok):
        p_s, p_w, p_b = s_ok / n, w_ok / n, both_ok / n
        mean = cfg.rate_strong * p_s + cfg.rate_weak * p_w
        var = (cfg.rate_strong ** 2 * p_s * (1.0 - p_s)
               + cfg.rate_weak ** 2 * p_w * (1.0 - p_w)
               + 2.0 * cfg.rate_strong * cfg.rate_weak * (p_b - p_s * p_w))
        return SimEstimate.from_moments(mean, var, n)

    rate_noma = rate_estimate(success_s, success_w, t.e4_both_ok)
    rate_oma = rate_estimate(success_s_oma, success_w_oma, t.e4_both_ok_oma)
    errors["sum_rate_noma"] = rate_noma.half_width_3sigma
    errors["sum_rate_oma"] = rate_oma.half_width_3sigma
    trials["sum_rate_noma"] = trials["sum_rate_oma"] = n

    return OutageReport(
        method="montecarlo",
        window_prob=t.window / n,
        tail_prob=t.tail / n,
        window_events=window_events,
        tail_events=tail_events,
        cond_outage=cond,
        outage_strong=(n - success_s) / n,
        outage_weak=(n - success_w) / n,
        oma_outage_strong=(n - success_s_oma) / n,
        oma_outage_weak=(n - success_w_oma) / n,
        sum_rate_noma=rate_noma.mean,
        sum_rate_oma=rate_oma.mean,
        rate_ceiling=cfg.rate_ceiling,
        errors=errors,
        trials=trials,
    )


def actual_order_histogram(hpp: HppConfig, region: RadiatedRegion,
                           cfg: NomaPairConfig, model: ChannelModel,
                           sim: SimSpec) -> dict:
    """Distribution of the gain-descending positions actually occupied by
    the distance-selected pair, over trials where the pair exists.

    Returns 1-based positions with normalized frequencies for the strong
    and weak selections.  Quantifies how far distance feedback strays
    from the instantaneous channel-quality order.
    """
    if Ordering(sim.ordering) is not Ordering.DISTANCE:
        raise ValidationError("actual-order histograms require distance ordering")
    t = _run_chunks(hpp, region, cfg, model, sim, want_hist=True)
    used = int(t.hist_strong.sum())
    top = max(int(np.max(np.nonzero(t.hist_strong + t.hist_weak)[0], initial=0)) + 1,
              1) if used else 1
    return {
        "positions": np.arange(1, top + 1),
        "strong": t.hist_strong[:top] / max(used, 1),
        "weak": t.hist_weak[:top] / max(used, 1),
        "trials_used": used,
    }
