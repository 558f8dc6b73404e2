"""Presence events, decode thresholds, and outage analysis of the
hybrid pair transmission.

The scheme serves a strong/weak rank pair.  Under the window count set
only the strong-ranked user exists; under the tail set both do.  Given
the radiated annulus, each count set splits into presence events: both
users inside, exactly one inside, or none.  Superposed transmission
runs only when both are present; a lone present user is served alone at
full power, and outage means the served user's effective gain falls
below its decode threshold.  Unconditional outage probabilities fold
count-set, event, and conditional-outage terms together; outage sum
rates weight each target rate by its non-outage probability.

The orthogonal benchmark differs only when both users are served: the
resource split doubles each user's in-slot rate requirement, while
single-user events are identical by construction.

All analytic evaluations integrate the distance densities against the
gain law with shared adaptive quadrature passes, so event masses and
outage numerators see the same subdivisions.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import (
    EventImpossible,
    InfeasiblePowerSplit,
    ValidationError,
)
from .geometry import RadiatedRegion, RegionGeometry
from .propagation import ChannelModel, LinkBudget, fejer_kernel, path_loss
from .quadrature import (
    DEFAULT_SPEC,
    QuadSpec,
    gauss_legendre,
    integrate_1d,
    integrate_2d_triangular,
    integrate_3d_theta,
)
from .userstats import OrderStatDistributions, RankPair

__all__ = [
    "CountSet",
    "Event",
    "EventProbabilities",
    "NomaPairConfig",
    "SicThresholds",
    "OutageReport",
    "sic_thresholds",
    "oma_thresholds",
    "event_bounds",
    "event_probabilities",
    "event_probability",
    "cond_outage_window",
    "cond_outage_tail",
    "asymptotic_outage",
    "combine_unconditional",
    "outage_sum_rate",
    "unconditional_outage",
    "sum_rate_noma",
    "sum_rate_oma",
    "analytic_report",
    "asymptotic_report",
]

# closure slack for probabilities assembled from quadrature results; a
# violation beyond this is a logic error, not roundoff, so raise instead
# of clamping
_PROB_SLACK = 1e-4


class CountSet(enum.Enum):
    WINDOW = "window"  # strong rank exists, weak rank does not
    TAIL = "tail"  # both ranks exist


class Event(enum.IntEnum):
    """Presence pattern of the pair within the radiated annulus."""

    NEITHER = 1
    WEAK_ONLY = 2
    STRONG_ONLY = 3
    BOTH = 4


@dataclass(frozen=True)
class EventProbabilities:
    """Presence-event masses under one count set; they partition."""

    neither: float
    weak_only: float
    strong_only: float
    both: float

    def __post_init__(self):
        vals = (self.neither, self.weak_only, self.strong_only, self.both)
        if any(v < -_PROB_SLACK or v > 1.0 + _PROB_SLACK for v in vals):
            raise ValidationError(f"event probability outside [0, 1]: {vals}")
        if abs(sum(vals) - 1.0) > _PROB_SLACK:
            raise ValidationError(f"event probabilities do not partition: {vals}")

    def __getitem__(self, event: Event) -> float:
        return {
            Event.NEITHER: self.neither,
            Event.WEAK_ONLY: self.weak_only,
            Event.STRONG_ONLY: self.strong_only,
            Event.BOTH: self.both,
        }[Event(event)]


@dataclass(frozen=True)
class NomaPairConfig:
    """Rates, power split, and link budget for the served rank pair."""

    pair: RankPair
    budget: LinkBudget
    rate_strong: float = 6.0  # BPCU target of the near user
    rate_weak: float = 0.5
    power_frac_strong: float = 0.25  # share of transmit power
    power_frac_weak: float = 0.75

    def __post_init__(self):
        if self.rate_strong < 0.0 or self.rate_weak < 0.0:
            raise ValidationError("target rates must be non-negative")
        for frac in (self.power_frac_strong, self.power_frac_weak):
            if not 0.0 < frac < 1.0:
                raise ValidationError("power fractions must lie in (0, 1)")
        if abs(self.power_frac_strong + self.power_frac_weak - 1.0) > 1e-9:
            raise ValidationError("power fractions must sum to 1")
        if self.power_frac_weak < self.power_frac_strong:
            raise ValidationError("the weak user must get at least half the power")

    @property
    def eps_strong(self) -> float:
        return 2.0 ** self.rate_strong - 1.0

    @property
    def eps_weak(self) -> float:
        return 2.0 ** self.rate_weak - 1.0

    @property
    def feasible(self) -> bool:
        """Whether the split leaves the weak user a positive SINR margin."""
        return self.power_frac_weak - self.power_frac_strong * self.eps_weak > 0.0

    @property
    def rate_ceiling(self) -> float:
        return self.rate_strong + self.rate_weak


@dataclass(frozen=True)
class SicThresholds:
    """Effective-gain decode thresholds per served situation."""

    weak_alone: float
    strong_alone: float
    weak_pair: float
    strong_pair: float


def sic_thresholds(cfg: NomaPairConfig) -> SicThresholds:
    """Gain thresholds under superposed transmission.

    A lone user decodes at full power, so its threshold is eps/rho.
    When both are served, the weak user sees the strong user's power as
    interference; the strong user first decodes and cancels the weak
    message (same SINR form) and then needs its own on the residual
    power, so its threshold is the larger of the two conditions.
    """
    rho = cfg.budget.tx_snr
    margin = cfg.power_frac_weak - cfg.power_frac_strong * cfg.eps_weak
    if margin <= 0.0:
        raise InfeasiblePowerSplit(
            f"power split leaves no margin for the weak user's rate "
            f"(margin {margin:.6g})")
    weak_pair = (cfg.eps_weak / rho) / margin
    return SicThresholds(
        weak_alone=cfg.eps_weak / rho,
        strong_alone=cfg.eps_strong / rho,
        weak_pair=weak_pair,
        strong_pair=max(weak_pair, cfg.eps_strong / (rho * cfg.power_frac_strong)),
    )


def oma_thresholds(cfg: NomaPairConfig, served: int = 2) -> SicThresholds:
    """Gain thresholds under orthogonal transmission.

    Lone-user thresholds match the superposed scheme (full power, full
    resources).  With both users served, each gets 1/``served`` of the
    resources at full power, so the in-slot requirement is
    2^(served * rate) - 1.  The pair scheme uses served=2; passing the
    full user count instead reproduces the orthogonal benchmark that
    splits resources among every user.
    """
    if served < 1:
        raise ValidationError("served count must be at least 1")
    rho = cfg.budget.tx_snr
    return SicThresholds(
        weak_alone=cfg.eps_weak / rho,
        strong_alone=cfg.eps_strong / rho,
        weak_pair=(2.0 ** (served * cfg.rate_weak) - 1.0) / rho,
        strong_pair=(2.0 ** (served * cfg.rate_strong) - 1.0) / rho,
    )


# =====================================================================
# presence events
# =====================================================================

def _covers(region: RadiatedRegion, geom: RegionGeometry) -> bool:
    return (region.inner <= geom.inner_radius + 1e-9
            and region.outer >= geom.outer_radius - 1e-9)


def event_bounds(event: Event, region: RadiatedRegion, geom: RegionGeometry):
    """Integration box {strong in inner, weak in outer} for a tail-set
    presence event; the both-present event carries the triangular inner
    limit strong <= weak.  Bounds feed integrate_2d_triangular directly.
    """
    event = Event(event)
    if event is Event.WEAK_ONLY:
        return (geom.inner_radius, region.inner), (region.inner, region.outer)
    if event is Event.STRONG_ONLY:
        return (region.inner, region.outer), (region.outer, geom.outer_radius)
    if event is Event.BOTH:
        return (region.inner, lambda l: l), (region.inner, region.outer)
    raise EventImpossible("the none-present event has no integration box")


def event_probabilities(count_set: CountSet, region: RadiatedRegion,
                        dists: OrderStatDistributions,
                        spec: QuadSpec | None = None) -> EventProbabilities:
    """Presence-event masses under the given count set.

    The none-present mass is the complement of the others, which closes
    the partition exactly.  When the annulus covers the whole user
    region the masses are the degenerate constants without quadrature.
    """
    spec = spec or DEFAULT_SPEC
    geom = dists.hpp.geometry
    count_set = CountSet(count_set)
    if count_set is CountSet.WINDOW:
        if _covers(region, geom):
            present = 1.0
        else:
            present, _ = integrate_1d(
                lambda r: dists.marginal_pdf(dists.pair.strong, r),
                region.inner, region.outer, spec)
        return EventProbabilities(neither=1.0 - present, weak_only=0.0,
                                  strong_only=present, both=0.0)
    if _covers(region, geom):
        return EventProbabilities(neither=0.0, weak_only=0.0,
                                  strong_only=0.0, both=1.0)
    masses = {}
    for event in (Event.WEAK_ONLY, Event.STRONG_ONLY, Event.BOTH):
        inner, outer = event_bounds(event, region, geom)
        masses[event], _ = integrate_2d_triangular(
            lambda r, l: dists.joint_pdf(r, l), inner, outer, spec)
    return EventProbabilities(
        neither=1.0 - sum(masses.values()),
        weak_only=masses[Event.WEAK_ONLY],
        strong_only=masses[Event.STRONG_ONLY],
        both=masses[Event.BOTH],
    )


def event_probability(event: Event, count_set: CountSet, region: RadiatedRegion,
                      dists: OrderStatDistributions,
                      spec: QuadSpec | None = None) -> float:
    """Mass of one presence event under the given count set."""
    return event_probabilities(count_set, region, dists, spec)[Event(event)]


# =====================================================================
# conditional outage integrands
# =====================================================================

def _outage_cdf(eta: float, pl_over_gain):
    """P{effective gain < eta} given path loss / beam gain at the spot."""
    with np.errstate(invalid="ignore", over="ignore"):
        out = -np.expm1(-eta * pl_over_gain)
    # a zero threshold at a pattern null is 0 * inf: never in outage
    return np.where(np.isnan(out), 0.0, out)


def _theta_mean_rule(model: ChannelModel, rule: int = 16):
    """Nodes and mean weights of the angular average over the sector."""
    x, w = gauss_legendre(rule)
    nodes = model.beam_angle + model.sector_half_angle * x
    return nodes, 0.5 * w


def _window_integrand(model, dists, eta_strong):
    """Vector integrand over the lone strong user's range: density,
    density-weighted outage, and the density-weighted path-loss moment
    used by the high-SNR approximation."""
    altitude = dists.hpp.geometry.altitude
    nodes, mean_w = _theta_mean_rule(model)
    gain = fejer_kernel(model.array_size, model.beam_angle - nodes)
    scale = float(model.array_size)

    def f(r):
        pdf = dists.marginal_pdf(dists.pair.strong, r)
        pl = path_loss(model, np.hypot(r, altitude))
        with np.errstate(divide="ignore"):
            ratio = pl[:, None] / gain[None, :]
        outage = _outage_cdf(eta_strong, ratio) @ mean_w
        return np.stack([pdf, pdf * outage, pdf * pl / scale], axis=-1)

    return f


def _tail_integrand(model, dists, etas):
    """Vector integrand over (theta, weak, strong) for one tail event.

    ``etas`` lists (threshold, which-user) pairs; emitted components are
    the joint density, one density-weighted outage term per threshold,
    then the density-weighted path-loss moments of the strong and weak
    positions.  The density components carry 1/(2*half_angle) so the
    theta integral restores plain event masses.
    """
    altitude = dists.hpp.geometry.altitude
    two_delta = 2.0 * model.sector_half_angle
    scale = float(model.array_size)

    def f(theta, l, r):
        pdf = dists.joint_pdf(r, l) / two_delta
        gain = fejer_kernel(model.array_size, model.beam_angle - theta)
        pl_strong = path_loss(model, np.hypot(r, altitude))
        pl_weak = path_loss(model, np.hypot(l, altitude))
        pl = {"strong": pl_strong, "weak": pl_weak}
        shape = np.broadcast_shapes(theta.shape, r.shape)
        comps = [np.broadcast_to(pdf, shape)]
        with np.errstate(divide="ignore"):
            for eta, user in etas:
                comps.append(pdf * _outage_cdf(eta, pl[user] / gain))
        comps.append(np.broadcast_to(pdf * pl_strong / scale, shape))
        comps.append(np.broadcast_to(pdf * pl_weak / scale, shape))
        return np.stack(comps, axis=-1)

    return f


def _theta_interval(model: ChannelModel) -> tuple[float, float]:
    return (model.beam_angle - model.sector_half_angle,
            model.beam_angle + model.sector_half_angle)


def _check_consistency(geom, cfg, model, dists):
    if dists.pair != cfg.pair:
        raise ValidationError("distance law and pair configuration disagree on ranks")
    if dists.hpp.geometry != geom:
        raise ValidationError("distance law built for a different geometry")
    if abs(model.sector_half_angle - geom.half_angle) > 1e-12:
        raise ValidationError("channel model and geometry disagree on the sector")


# =====================================================================
# conditional outage probabilities
# =====================================================================

def cond_outage_window(region: RadiatedRegion, cfg: NomaPairConfig,
                       model: ChannelModel, dists: OrderStatDistributions,
                       spec: QuadSpec | None = None) -> float:
    """Outage of the lone strong user given it lies in the annulus."""
    spec = spec or DEFAULT_SPEC
    eta = cfg.eps_strong / cfg.budget.tx_snr
    f = _window_integrand(model, dists, eta)
    (mass, numerator, _), _ = integrate_1d(f, region.inner, region.outer, spec)
    if mass <= 0.0:
        raise EventImpossible("the lone strong user cannot lie in the annulus")
    return numerator / mass


def cond_outage_tail(event: Event, user: str, region: RadiatedRegion,
                     cfg: NomaPairConfig, model: ChannelModel,
                     dists: OrderStatDistributions, scheme: str = "noma",
                     spec: QuadSpec | None = None) -> float:
    """Outage of one user given a tail-set presence event.

    ``user`` is "strong" or "weak" and must be served under the event;
    ``scheme`` picks the superposed ("noma") or orthogonal ("oma")
    thresholds, which differ only for the both-present event.  An
    infeasible power split makes both-present superposed outage 1 by
    convention.
    """
    spec = spec or DEFAULT_SPEC
    event = Event(event)
    if user not in ("strong", "weak"):
        raise ValidationError(f"unknown user {user!r}")
    if scheme not in ("noma", "oma"):
        raise ValidationError(f"unknown scheme {scheme!r}")
    served = {Event.WEAK_ONLY: ("weak",), Event.STRONG_ONLY: ("strong",),
              Event.BOTH: ("strong", "weak")}.get(event)
    if served is None:
        raise ValidationError("no user is served when neither is present")
    if user not in served:
        raise ValidationError(f"the {user} user is not served under {event.name}")
    if event is Event.BOTH and scheme == "noma" and not cfg.feasible:
        return 1.0
    thresholds = sic_thresholds(cfg) if scheme == "noma" else oma_thresholds(cfg)
    eta = {
        (Event.WEAK_ONLY, "weak"): thresholds.weak_alone,
        (Event.STRONG_ONLY, "strong"): thresholds.strong_alone,
        (Event.BOTH, "weak"): thresholds.weak_pair,
        (Event.BOTH, "strong"): thresholds.strong_pair,
    }[(event, user)]
    geom = dists.hpp.geometry
    inner, outer = event_bounds(event, region, geom)
    f = _tail_integrand(model, dists, [(eta, user)])
    values, _ = integrate_3d_theta(f, _theta_interval(model), outer, inner, spec)
    mass, numerator = values[0], values[1]
    if mass <= 0.0:
        raise EventImpossible(f"{event.name} has zero probability for this annulus")
    return numerator / mass


def asymptotic_outage(count_set: CountSet, event: Event, user: str,
                      region: RadiatedRegion, cfg: NomaPairConfig,
                      model: ChannelModel, dists: OrderStatDistributions,
                      spec: QuadSpec | None = None) -> float:
    """High-SNR approximation of a conditional outage probability.

    Linearizing the gain law and averaging the inverted beam pattern
    over the narrow sector turns the conditional outage into
    (1 + (pi*M*half_angle)^2/36) * eta * Psi / P{event}, where Psi is
    the density-weighted mean of path loss over array size across the
    event box.  The raw value is returned; it only approximates a
    probability once eta is small, so callers assembling reports cap it
    at 1.
    """
    spec = spec or DEFAULT_SPEC
    count_set, event = CountSet(count_set), Event(event)
    geom = dists.hpp.geometry
    factor = 1.0 + (math.pi * model.array_size * model.sector_half_angle) ** 2 / 36.0
    if count_set is CountSet.WINDOW:
        if event is not Event.STRONG_ONLY or user != "strong":
            raise ValidationError(
                "only the lone strong user is served under the window set")
        eta = cfg.eps_strong / cfg.budget.tx_snr
        f = _window_integrand(model, dists, eta)
        (mass, _, psi), _ = integrate_1d(f, region.inner, region.outer, spec)
        if mass <= 0.0:
            raise EventImpossible("the lone strong user cannot lie in the annulus")
        return factor * eta * psi / mass
    if event is Event.BOTH and not cfg.feasible:
        return 1.0
    thresholds = sic_thresholds(cfg)
    eta = {
        (Event.WEAK_ONLY, "weak"): thresholds.weak_alone,
        (Event.STRONG_ONLY, "strong"): thresholds.strong_alone,
        (Event.BOTH, "weak"): thresholds.weak_pair,
        (Event.BOTH, "strong"): thresholds.strong_pair,
    }.get((event, user))
    if eta is None:
        raise ValidationError(f"the {user} user is not served under {event.name}")
    inner, outer = event_bounds(event, region, geom)
    f = _tail_integrand(model, dists, [])
    values, _ = integrate_3d_theta(f, _theta_interval(model), outer, inner, spec)
    mass = values[0]
    psi = values[1] if user == "strong" else values[2]
    if mass <= 0.0:
        raise EventImpossible(f"{event.name} has zero probability for this annulus")
    return factor * eta * psi / mass


# =====================================================================
# unconditional combination and reports
# =====================================================================

def combine_unconditional(window_prob: float, tail_prob: float,
                          window_events: EventProbabilities,
                          tail_events: EventProbabilities,
                          cond: Mapping[str, float]) -> tuple[float, float]:
    """Fold count sets, presence events, and conditional outages into the
    pair's unconditional outage probabilities (strong, weak).

    ``cond`` maps "window_strong", "weak_only_weak",
    "strong_only_strong", "both_strong", "both_weak" to conditional
    outage values; keys may be omitted when the matching event mass is
    zero.  A user absent from the field or outside the annulus counts as
    in outage, which the complements capture.
    """
    def success(mass: float, key: str) -> float:
        if mass <= 0.0:
            return 0.0
        return mass * (1.0 - cond[key])

    strong = 1.0 - (window_prob * success(window_events.strong_only, "window_strong")
                    + tail_prob * (success(tail_events.strong_only, "strong_only_strong")
                                   + success(tail_events.both, "both_strong")))
    weak = 1.0 - tail_prob * (success(tail_events.weak_only, "weak_only_weak")
                              + success(tail_events.both, "both_weak"))
    return strong, weak


def outage_sum_rate(outage_strong: float, outage_weak: float,
                    cfg: NomaPairConfig) -> float:
    """Target rates weighted by their non-outage probabilities, BPCU."""
    return ((1.0 - outage_strong) * cfg.rate_strong
            + (1.0 - outage_weak) * cfg.rate_weak)


@dataclass(frozen=True)
class OutageReport:
    """Full outage picture of one operating point, by one method."""

    method: str  # "analytic" | "montecarlo" | "asymptotic"
    window_prob: float
    tail_prob: float
    window_events: EventProbabilities
    tail_events: EventProbabilities
    cond_outage: Mapping[str, float]
    outage_strong: float
    outage_weak: float
    oma_outage_strong: float
    oma_outage_weak: float
    sum_rate_noma: float
    sum_rate_oma: float
    rate_ceiling: float
    errors: Mapping[str, float] = field(default_factory=dict)
    trials: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        probs = {
            "window_prob": self.window_prob,
            "tail_prob": self.tail_prob,
            "outage_strong": self.outage_strong,
            "outage_weak": self.outage_weak,
            "oma_outage_strong": self.oma_outage_strong,
            "oma_outage_weak": self.oma_outage_weak,
            **{f"cond:{k}": v for k, v in self.cond_outage.items()},
        }
        for name, value in probs.items():
            if value < -_PROB_SLACK or value > 1.0 + _PROB_SLACK:
                raise ValidationError(f"{name} outside [0, 1]: {value}")
        for name, value in (("sum_rate_noma", self.sum_rate_noma),
                            ("sum_rate_oma", self.sum_rate_oma)):
            if value < -_PROB_SLACK or value > self.rate_ceiling * (1.0 + _PROB_SLACK):
                raise ValidationError(
                    f"{name} outside [0, {self.rate_ceiling}]: {value}")


def _oma_view(cond: Mapping[str, float]) -> dict:
    remapped = dict(cond)
    if "both_strong_oma" in cond:
        remapped["both_strong"] = cond["both_strong_oma"]
        remapped["both_weak"] = cond["both_weak_oma"]
    return remapped


def analytic_report(geom: RegionGeometry, region: RadiatedRegion,
                    cfg: NomaPairConfig, model: ChannelModel,
                    dists: OrderStatDistributions,
                    spec: QuadSpec | None = None) -> OutageReport:
    """Exact analytic outage report at one operating point.

    Each event domain is integrated once with a vector-valued integrand,
    so the event mass and every outage numerator share subdivisions.
    Events impossible for the annulus are omitted from the conditional
    map and contribute zero to the combinations.
    """
    spec = spec or DEFAULT_SPEC
    _check_consistency(geom, cfg, model, dists)
    covers = _covers(region, geom)
    sic = sic_thresholds(cfg) if cfg.feasible else None
    oma = oma_thresholds(cfg)
    cond: dict[str, float] = {}
    errors: dict[str, float] = {}

    f = _window_integrand(model, dists, oma.strong_alone)
    (w_mass, w_num, _), err = integrate_1d(f, region.inner, region.outer, spec)
    if w_mass <= 0.0:
        raise EventImpossible("the annulus carries no user mass")
    window_e3 = 1.0 if covers else w_mass
    cond["window_strong"] = w_num / w_mass
    errors["window"] = float(np.max(err))
    window_events = EventProbabilities(neither=1.0 - window_e3, weak_only=0.0,
                                       strong_only=window_e3, both=0.0)

    # lone-user events vanish at the scan endpoints (one annulus edge
    # touches the region boundary) and under full coverage; their
    # conditional outages are then omitted
    masses = {Event.WEAK_ONLY: 0.0, Event.STRONG_ONLY: 0.0, Event.BOTH: 0.0}
    theta = _theta_interval(model)
    if not covers:
        for event, key, etas in (
                (Event.WEAK_ONLY, "weak_only", [(oma.weak_alone, "weak")]),
                (Event.STRONG_ONLY, "strong_only", [(oma.strong_alone, "strong")])):
            inner, outer = event_bounds(event, region, geom)
            f = _tail_integrand(model, dists, etas)
            values, err = integrate_3d_theta(f, theta, outer, inner, spec)
            masses[event] = values[0]
            errors[key] = float(np.max(err))
            if values[0] > 0.0:
                cond[f"{key}_{etas[0][1]}"] = values[1] / values[0]

    etas = [(oma.strong_pair, "strong"), (oma.weak_pair, "weak")]
    if sic is not None:
        etas = [(sic.strong_pair, "strong"), (sic.weak_pair, "weak")] + etas
    inner, outer = event_bounds(Event.BOTH, region, geom)
    f = _tail_integrand(model, dists, etas)
    values, err = integrate_3d_theta(f, theta, outer, inner, spec)
    if values[0] <= 0.0:
        raise EventImpossible("the annulus carries no pair mass")
    both_mass = 1.0 if covers else values[0]
    masses[Event.BOTH] = both_mass
    errors["both"] = float(np.max(err))
    if sic is not None:
        cond["both_strong"] = values[1] / values[0]
        cond["both_weak"] = values[2] / values[0]
        cond["both_strong_oma"] = values[3] / values[0]
        cond["both_weak_oma"] = values[4] / values[0]
    else:
        cond["both_strong"] = 1.0
        cond["both_weak"] = 1.0
        cond["both_strong_oma"] = values[1] / values[0]
        cond["both_weak_oma"] = values[2] / values[0]

    tail_events = EventProbabilities(
        neither=1.0 - masses[Event.WEAK_ONLY] - masses[Event.STRONG_ONLY] - both_mass,
        weak_only=masses[Event.WEAK_ONLY],
        strong_only=masses[Event.STRONG_ONLY],
        both=both_mass,
    )
    return _assemble_report("analytic", cfg, dists, window_events, tail_events,
                            cond, errors, {})


def asymptotic_report(geom: RegionGeometry, region: RadiatedRegion,
                      cfg: NomaPairConfig, model: ChannelModel,
                      dists: OrderStatDistributions,
                      spec: QuadSpec | None = None) -> OutageReport:
    """High-SNR outage report; conditional approximations are capped at 1
    so the combinations remain probabilities at any power."""
    spec = spec or DEFAULT_SPEC
    _check_consistency(geom, cfg, model, dists)
    covers = _covers(region, geom)
    sic = sic_thresholds(cfg) if cfg.feasible else None
    oma = oma_thresholds(cfg)
    factor = 1.0 + (math.pi * model.array_size * model.sector_half_angle) ** 2 / 36.0
    cond: dict[str, float] = {}
    errors: dict[str, float] = {}

    f = _window_integrand(model, dists, 0.0)
    (w_mass, _, w_psi), err = integrate_1d(f, region.inner, region.outer, spec)
    if w_mass <= 0.0:
        raise EventImpossible("the annulus carries no user mass")
    window_e3 = 1.0 if covers else w_mass
    cond["window_strong"] = min(1.0, factor * oma.strong_alone * w_psi / w_mass)
    errors["window"] = float(np.max(err))
    window_events = EventProbabilities(neither=1.0 - window_e3, weak_only=0.0,
                                       strong_only=window_e3, both=0.0)

    masses = {Event.WEAK_ONLY: 0.0, Event.STRONG_ONLY: 0.0, Event.BOTH: 0.0}
    psis = {}
    theta = _theta_interval(model)
    events = [Event.BOTH] if covers else [Event.WEAK_ONLY, Event.STRONG_ONLY,
                                          Event.BOTH]
    for event in events:
        inner, outer = event_bounds(event, region, geom)
        f = _tail_integrand(model, dists, [])
        values, err = integrate_3d_theta(f, theta, outer, inner, spec)
        masses[event] = values[0]
        psis[event] = (values[1], values[2])  # strong, weak moments
        errors[event.name.lower()] = float(np.max(err))

    if masses[Event.BOTH] <= 0.0:
        raise EventImpossible("the annulus carries no pair mass")

    def capped(event, psi, eta):
        return min(1.0, factor * eta * psi / masses[event])

    if masses[Event.WEAK_ONLY] > 0.0:
        cond["weak_only_weak"] = capped(Event.WEAK_ONLY,
                                        psis[Event.WEAK_ONLY][1], oma.weak_alone)
    if masses[Event.STRONG_ONLY] > 0.0:
        cond["strong_only_strong"] = capped(Event.STRONG_ONLY,
                                            psis[Event.STRONG_ONLY][0],
                                            oma.strong_alone)
    psi_s, psi_w = psis[Event.BOTH]
    if sic is not None:
        cond["both_strong"] = capped(Event.BOTH, psi_s, sic.strong_pair)
        cond["both_weak"] = capped(Event.BOTH, psi_w, sic.weak_pair)
    else:
        cond["both_strong"] = 1.0
        cond["both_weak"] = 1.0
    cond["both_strong_oma"] = capped(Event.BOTH, psi_s, oma.strong_pair)
    cond["both_weak_oma"] = capped(Event.BOTH, psi_w, oma.weak_pair)

    both_mass = 1.0 if covers else masses[Event.BOTH]
    tail_events = EventProbabilities(
        neither=1.0 - masses[Event.WEAK_ONLY] - masses[Event.STRONG_ONLY] - both_mass,
        weak_only=masses[Event.WEAK_ONLY],
        strong_only=masses[Event.STRONG_ONLY],
        both=both_mass,
    )
    return _assemble_report("asymptotic", cfg, dists, window_events, tail_events,
                            cond, errors, {})


def _assemble_report(method, cfg, dists, window_events, tail_events, cond,
                     errors, trials) -> OutageReport:
    outage_strong, outage_weak = combine_unconditional(
        dists.window_prob, dists.tail_prob, window_events, tail_events, cond)
    oma_strong, oma_weak = combine_unconditional(
        dists.window_prob, dists.tail_prob, window_events, tail_events,
        _oma_view(cond))
    return OutageReport(
        method=method,
        window_prob=dists.window_prob,
        tail_prob=dists.tail_prob,
        window_events=window_events,
        tail_events=tail_events,
        cond_outage=dict(cond),
        outage_strong=outage_strong,
        outage_weak=outage_weak,
        oma_outage_strong=oma_strong,
        oma_outage_weak=oma_weak,
        sum_rate_noma=outage_sum_rate(outage_strong, outage_weak, cfg),
        sum_rate_oma=outage_sum_rate(oma_strong, oma_weak, cfg),
        rate_ceiling=cfg.rate_ceiling,
        errors=dict(errors),
        trials=dict(trials),
    )


def unconditional_outage(cfg: NomaPairConfig, geom: RegionGeometry,
                         region: RadiatedRegion, dists: OrderStatDistributions,
                         model: ChannelModel,
                         spec: QuadSpec | None = None) -> tuple[float, float]:
    """Unconditional outage probabilities (strong, weak) of the pair."""
    report = analytic_report(geom, region, cfg, model, dists, spec)
    return report.outage_strong, report.outage_weak


def sum_rate_noma(cfg: NomaPairConfig, geom: RegionGeometry,
                  region: RadiatedRegion, dists: OrderStatDistributions,
                  model: ChannelModel, spec: QuadSpec | None = None) -> float:
    """Outage sum rate of the superposed scheme, BPCU."""
    return analytic_report(geom, region, cfg, model, dists, spec).sum_rate_noma


def sum_rate_oma(cfg: NomaPairConfig, geom: RegionGeometry,
                 region: RadiatedRegion, dists: OrderStatDistributions,
                 model: ChannelModel, spec: QuadSpec | None = None) -> float:
    """Outage sum rate of the orthogonal benchmark, BPCU."""
    return analytic_report(geom, region, cfg, model, dists, spec).sum_rate_oma
