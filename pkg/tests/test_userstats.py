"""Count-set probabilities and the conditional distance laws, checked
against closed forms, against each other, and against conditioned
field simulations."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from airnoma import (
    HppConfig,
    OrderStatDistributions,
    OrderViolation,
    QuadSpec,
    RadiusOutOfRegion,
    RankPair,
    RankOutOfRange,
    ValidationError,
    integrate_1d,
    integrate_2d_triangular,
    prob_count_in,
)
from conftest import make_geometry

TIGHT = QuadSpec(rel_tol=1e-10, abs_tol=1e-13, max_subdivisions=128)

# frozen from scipy's Poisson distribution at the baseline intensity
MU_BASELINE = 40.9061543436171
WINDOW_20_30 = 0.03203902655519471
TAIL_30 = 0.9678537956619107
BELOW_20 = 0.00010717778289459221


@pytest.fixture(scope="module")
def hpp():
    return HppConfig(geometry=make_geometry(altitude=50.0), density=1.0)


def test_mean_count_baseline(hpp):
    assert hpp.mean_count == pytest.approx(MU_BASELINE, rel=1e-12)
    # restated: density * half_angle * (L2^2 - L1^2)
    assert hpp.mean_count == pytest.approx(
        math.radians(0.25) * (100.0 ** 2 - 25.0 ** 2), rel=1e-12)
    assert hpp.mass_within(25.0) == 0.0


def test_count_set_probabilities(hpp):
    assert prob_count_in(hpp, between=(20, 30)) == pytest.approx(WINDOW_20_30, rel=1e-10)
    assert prob_count_in(hpp, at_least=30) == pytest.approx(TAIL_30, rel=1e-10)
    below = prob_count_in(hpp, between=(1, 20)) + prob_count_in(hpp, exactly=0)
    assert below == pytest.approx(BELOW_20, rel=1e-9)
    # the three masses partition
    assert below + WINDOW_20_30 + TAIL_30 == pytest.approx(1.0, abs=1e-12)


def test_count_set_selectors_validate(hpp):
    with pytest.raises(ValidationError):
        prob_count_in(hpp, between=(5, 5))
    with pytest.raises(ValidationError):
        prob_count_in(hpp, between=(1, 5), at_least=3)
    with pytest.raises(ValidationError):
        prob_count_in(hpp)


@pytest.mark.parametrize("strong,weak", [(20, 25), (20, 30), (20, 21)])
def test_window_marginal_normalizes(hpp, strong, weak):
    dists = OrderStatDistributions.from_config(hpp, RankPair(strong, weak))
    total, err = integrate_1d(lambda r: dists.marginal_pdf(strong, r),
                              25.0, 100.0, TIGHT)
    assert abs(total - 1.0) <= 1e-8


@pytest.mark.parametrize("strong,weak", [(20, 25), (20, 30), (20, 21)])
def test_tail_joint_normalizes(hpp, strong, weak):
    dists = OrderStatDistributions.from_config(hpp, RankPair(strong, weak))
    total, err = integrate_2d_triangular(
        lambda r, l: dists.joint_pdf(r, l), (25.0, lambda l: l), (25.0, 100.0),
        TIGHT)
    assert abs(total - 1.0) <= 1e-8


def test_defective_marginals_above_strong_rank(hpp):
    # rank k in (strong, weak) exists only when K >= k, so the window-set
    # density integrates to P{k <= K < weak} / P{strong <= K < weak}
    dists = OrderStatDistributions.from_config(hpp, RankPair(20, 30))
    for k in (23, 29):
        total, _ = integrate_1d(lambda r: dists.marginal_pdf(k, r), 25.0, 100.0, TIGHT)
        expect = prob_count_in(hpp, between=(k, 30)) / dists.window_prob
        assert total == pytest.approx(expect, rel=1e-8)


def test_joint_marginalizes_to_strong_tail_density(hpp):
    dists = OrderStatDistributions.from_config(hpp, RankPair(20, 30))
    for r in (30.0, 55.0, 80.0, 95.0):
        num, _ = integrate_1d(lambda l: dists.joint_pdf(r, l), r, 100.0, TIGHT)
        assert num == pytest.approx(dists.marginal_pdf_strong_tail(r), rel=1e-7)


def test_joint_diagonal_behavior(hpp):
    gap2 = OrderStatDistributions.from_config(hpp, RankPair(20, 22))
    assert gap2.joint_pdf(60.0, 60.0) == 0.0
    adjacent = OrderStatDistributions.from_config(hpp, RankPair(20, 21))
    assert adjacent.joint_pdf(60.0, 60.0) > 0.0


def test_domain_errors(hpp):
    dists = OrderStatDistributions.from_config(hpp, RankPair(20, 30))
    with pytest.raises(RankOutOfRange):
        dists.marginal_pdf(30, 50.0)
    with pytest.raises(RankOutOfRange):
        dists.marginal_pdf(19, 50.0)
    with pytest.raises(OrderViolation):
        dists.joint_pdf(70.0, 60.0)
    with pytest.raises(RadiusOutOfRegion):
        dists.marginal_pdf(20, -1.0)
    with pytest.raises(ValidationError):
        RankPair(5, 5)
    with pytest.raises(ValidationError):
        HppConfig(geometry=make_geometry(), density=0.0)


def test_pdfs_vanish_outside_region(hpp):
    dists = OrderStatDistributions.from_config(hpp, RankPair(20, 30))
    assert dists.marginal_pdf(20, 10.0) == 0.0
    assert dists.marginal_pdf(20, 101.0) == 0.0
    assert dists.joint_pdf(10.0, 50.0) == 0.0
    assert dists.joint_pdf(30.0, 120.0) == 0.0


def _sorted_fields(hpp, n, seed):
    """Simulate n fields; returns counts and the per-field sorted distances."""
    g = hpp.geometry
    rng = np.random.default_rng(seed)
    counts = rng.poisson(hpp.mean_count, n)
    total = int(counts.sum())
    u = rng.random(total)
    d = np.sqrt(g.inner_radius ** 2 + u * (g.outer_radius ** 2 - g.inner_radius ** 2))
    fid = np.repeat(np.arange(n), counts)
    d_sorted = d[np.lexsort((d, fid))]
    starts = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=starts[1:])
    return counts, d_sorted, starts


def test_conditioned_histograms_match_densities(hpp):
    """Rejection-conditioned field draws reproduce both conditional laws."""
    n = 200_000
    counts, d_sorted, starts = _sorted_fields(hpp, n, seed=5)
    dists = OrderStatDistributions.from_config(hpp, RankPair(20, 30))

    win = (counts >= 20) & (counts < 30)
    d_strong_win = d_sorted[starts[:-1][win] + 19]
    edges = np.linspace(25.0, 100.0, 21)
    obs, _ = np.histogram(d_strong_win, bins=edges)
    m = d_strong_win.size
    assert m == pytest.approx(n * dists.window_prob,
                              abs=3.0 * math.sqrt(n * dists.window_prob) + 1.0)
    for i in range(edges.size - 1):
        p, _ = integrate_1d(lambda r: dists.marginal_pdf(20, r),
                            edges[i], edges[i + 1], TIGHT)
        assert abs(obs[i] - m * p) <= 3.0 * math.sqrt(m * p * (1.0 - p)) + 1.0

    tail = counts >= 30
    d_strong_tail = d_sorted[starts[:-1][tail] + 19]
    obs_t, _ = np.histogram(d_strong_tail, bins=edges)
    mt = d_strong_tail.size
    for i in range(edges.size - 1):
        p, _ = integrate_1d(lambda r: dists.marginal_pdf_strong_tail(r),
                            edges[i], edges[i + 1], TIGHT)
        assert abs(obs_t[i] - mt * p) <= 3.0 * math.sqrt(mt * p * (1.0 - p)) + 1.0


@settings(max_examples=30, deadline=None)
@given(r=st.floats(0.0, 120.0), strong=st.integers(1, 40),
       gap=st.integers(1, 20))
def test_marginal_pdf_non_negative(r, strong, gap):
    hpp = HppConfig(geometry=make_geometry(altitude=50.0), density=1.0)
    dists = OrderStatDistributions.from_config(hpp, RankPair(strong, strong + gap))
    v = dists.marginal_pdf(strong, r)
    assert v >= 0.0
    if not 25.0 <= r <= 100.0:
        assert v == 0.0
