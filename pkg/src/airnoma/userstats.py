"""Poisson user counts over the annular sector and the conditional
distance laws of a ranked user pair.

Users form a homogeneous Poisson process on the sector, so the count K
is Poisson with mean  density * half_angle * (L2^2 - L1^2)  and the
expected number of users within ground distance r grows like r^2.  For
a pair of distance ranks (strong < weak, rank 1 nearest) two count
conditionings matter: the window set {strong <= K < weak}, where the
strong-ranked user exists but the weak-ranked one does not, and the
tail set {K >= weak}, where both exist.  This module evaluates the
window-set marginal density of a ranked distance and the tail-set joint
density of the pair, each normalized by its conditioning probability.

Factorial-heavy terms are evaluated in log domain and exponentiated at
the end, which keeps ranks up to a few hundred usable.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp, xlogy
from scipy.stats import poisson

from .errors import (
    OrderViolation,
    RadiusOutOfRegion,
    RankOutOfRange,
    ValidationError,
)
from .geometry import RegionGeometry

__all__ = [
    "HppConfig",
    "RankPair",
    "OrderStatDistributions",
    "prob_count_in",
]


@dataclass(frozen=True)
class HppConfig:
    """Homogeneous Poisson field of users over the sector geometry."""

    geometry: RegionGeometry
    density: float = 1.0  # users per m²

    def __post_init__(self):
        if self.density <= 0.0:
            raise ValidationError("user density must be positive")

    def mass_within(self, r):
        """Expected number of users within ground distance r of the origin."""
        g = self.geometry
        return self.density * g.half_angle * (np.square(r) - g.inner_radius ** 2)

    @property
    def mean_count(self) -> float:
        return float(self.mass_within(self.geometry.outer_radius))


@dataclass(frozen=True)
class RankPair:
    """Distance ranks of the served pair; rank 1 is the nearest user."""

    strong: int
    weak: int

    def __post_init__(self):
        if not 1 <= self.strong < self.weak:
            raise ValidationError("ranks must satisfy 1 <= strong < weak")


def prob_count_in(hpp: HppConfig, *, between=None, at_least=None,
                  exactly=None) -> float:
    """Probability that the user count K falls in the given set.

    Exactly one selector applies: ``between=(lo, hi)`` is the half-open
    window lo <= K < hi, ``at_least=n`` the tail K >= n, ``exactly=n`` a
    single count.  The survival function keeps tail masses accurate
    without forming 1 - CDF explicitly; for mean counts far beyond the
    ranks used here, scipy evaluates both pmf and tail through the
    regularized incomplete gamma function, which stays finite in log
    domain well past the range where factorials overflow.
    """
    chosen = [v for v in (between, at_least, exactly) if v is not None]
    if len(chosen) != 1:
        raise ValidationError("specify exactly one of between/at_least/exactly")
    mu = hpp.mean_count
    if between is not None:
        lo, hi = between
        if not 0 <= lo < hi:
            raise ValidationError("between=(lo, hi) requires 0 <= lo < hi")
        return float(poisson.cdf(hi - 1, mu) - poisson.cdf(lo - 1, mu))
    if at_least is not None:
        if at_least < 0:
            raise ValidationError("at_least must be non-negative")
        return float(poisson.sf(at_least - 1, mu))
    if exactly < 0:
        raise ValidationError("exactly must be non-negative")
    return float(poisson.pmf(exactly, mu))


@dataclass(frozen=True)
class OrderStatDistributions:
    """Conditional distance laws of a rank pair over a Poisson field.

    ``window_prob`` and ``tail_prob`` are the probabilities of the two
    conditioning count sets and double as the normalization constants of
    the densities below.
    """

    hpp: HppConfig
    pair: RankPair
    window_prob: float
    tail_prob: float

    @classmethod
    def from_config(cls, hpp: HppConfig, pair: RankPair) -> "OrderStatDistributions":
        window = prob_count_in(hpp, between=(pair.strong, pair.weak))
        tail = prob_count_in(hpp, at_least=pair.weak)
        return cls(hpp=hpp, pair=pair, window_prob=window, tail_prob=tail)

    # -- window set -------------------------------------------------

    def marginal_pdf(self, k: int, r):
        """Window-set density of the rank-k distance at ground range r.

        Defined for strong <= k < weak.  For k == strong the density is
        proper (integrates to 1); for larger k the rank exists only when
        K >= k, so the density is defective with total mass
        P{k <= K < weak} / window_prob.  Zero outside [L1, L2]; negative
        ranges are rejected as nonsensical.
        """
        pair, hpp = self.pair, self.hpp
        if not pair.strong <= k < pair.weak:
            raise RankOutOfRange(
                f"rank {k} outside window [{pair.strong}, {pair.weak})")
        rs = np.asarray(r, dtype=float)
        if np.any(rs < 0.0):
            raise RadiusOutOfRegion("ground range must be non-negative")
        g = hpp.geometry
        inside = (rs >= g.inner_radius) & (rs <= g.outer_radius)
        a = np.clip(hpp.mass_within(np.where(inside, rs, g.inner_radius)), 0.0, None)
        mu = hpp.mean_count
        tail_mass = np.clip(mu - a, 0.0, None)
        # partial exponential sum over the counts beyond rank k that keep
        # K inside the window
        m = np.arange(max(0, pair.strong - k), pair.weak - k, dtype=float)
        flat_tail = tail_mass.reshape(-1)
        log_terms = xlogy(m[:, None], flat_tail[None, :]) - gammaln(m + 1.0)[:, None]
        log_sum = logsumexp(log_terms, axis=0).reshape(tail_mass.shape)
        scale = hpp.density * g.half_angle
        with np.errstate(divide="ignore"):
            log_pdf = (np.log(2.0 * scale) + np.log(np.where(rs > 0.0, rs, 1.0))
                       + xlogy(k - 1.0, a) - gammaln(float(k)) - mu
                       + log_sum - np.log(self.window_prob))
        pdf = np.where(inside & (rs > 0.0), np.exp(log_pdf), 0.0)
        return float(pdf) if np.ndim(r) == 0 else pdf

    # -- tail set ---------------------------------------------------

    def joint_pdf(self, r_strong, r_weak):
        """Tail-set joint density of the pair's distances at
        (r_strong, r_weak); arguments broadcast.

        Raises OrderViolation when any r_strong > r_weak.  On the
        diagonal the density is zero whenever the ranks differ by two or
        more (the gap factor vanishes) and finite for adjacent ranks.
        """
        pair, hpp = self.pair, self.hpp
        rs = np.asarray(r_strong, dtype=float)
        rw = np.asarray(r_weak, dtype=float)
        if np.any(rs < 0.0) or np.any(rw < 0.0):
            raise RadiusOutOfRegion("ground range must be non-negative")
        if np.any(rs > rw):
            raise OrderViolation("strong user must not be farther than weak user")
        rs, rw = np.broadcast_arrays(rs, rw)
        g = hpp.geometry
        inside = ((rs >= g.inner_radius) & (rw <= g.outer_radius)
                  & (rs > 0.0) & (rw > 0.0))
        a_s = np.clip(hpp.mass_within(np.where(inside, rs, g.inner_radius)), 0.0, None)
        a_w = np.clip(hpp.mass_within(np.where(inside, rw, g.inner_radius)), 0.0, None)
        gap = np.clip(a_w - a_s, 0.0, None)
        scale = hpp.density * g.half_angle
        with np.errstate(divide="ignore"):
            log_pdf = (2.0 * np.log(2.0 * scale)
                       + np.log(np.where(inside, rs, 1.0))
                       + np.log(np.where(inside, rw, 1.0))
                       + xlogy(pair.strong - 1.0, a_s) - gammaln(float(pair.strong))
                       + xlogy(pair.weak - pair.strong - 1.0, gap)
                       - gammaln(float(pair.weak - pair.strong))
                       - a_w - np.log(self.tail_prob))
        pdf = np.where(inside, np.exp(log_pdf), 0.0)
        scalars = np.ndim(r_strong) == 0 and np.ndim(r_weak) == 0
        return float(pdf) if scalars else pdf

    def marginal_pdf_strong_tail(self, r):
        """Tail-set marginal density of the strong user's distance.

        Closed form of the joint density integrated over the weak user's
        range; serves as an internal consistency check on joint_pdf.
        """
        pair, hpp = self.pair, self.hpp
        rs = np.asarray(r, dtype=float)
        if np.any(rs < 0.0):
            raise RadiusOutOfRegion("ground range must be non-negative")
        g = hpp.geometry
        inside = (rs >= g.inner_radius) & (rs <= g.outer_radius) & (rs > 0.0)
        a = np.clip(hpp.mass_within(np.where(inside, rs, g.inner_radius)), 0.0, None)
        tail_mass = np.clip(hpp.mean_count - a, 0.0, None)
        scale = hpp.density * g.half_angle
        with np.errstate(divide="ignore"):
            log_pdf = (np.log(2.0 * scale) + np.log(np.where(inside, rs, 1.0))
                       + xlogy(pair.strong - 1.0, a) - gammaln(float(pair.strong))
                       - a + poisson.logsf(pair.weak - pair.strong - 1, tail_mass)
                       - np.log(self.tail_prob))
        pdf = np.where(inside, np.exp(log_pdf), 0.0)
        return float(pdf) if np.ndim(r) == 0 else pdf
