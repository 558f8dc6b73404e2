"""End-to-end acceptance gate.

Each test covers one numbered criterion, prints a single
"criterion N: PASS/FAIL" line with the measured values, and then
asserts.  Criteria are statistical or anchored to published operating
points; tolerances are stated inline next to each check.
"""
import json
import math
import time

import numpy as np
import pytest

from airnoma import (
    CloseInModel,
    DistancePowerLaw,
    HppConfig,
    NomaPairConfig,
    OrderStatDistributions,
    Ordering,
    PRESETS,
    QuadSpec,
    RankPair,
    SimSpec,
    SweepPlan,
    altitude_sweep,
    analytic_report,
    asymptotic_report,
    beam_scan,
    bisecting_boresight,
    boresight_limits,
    actual_order_histogram,
    default_altitude_grid,
    integrate_1d,
    integrate_2d_triangular,
    radiated_region,
    simulate_report,
)
from airnoma.cli import main as cli_main
from conftest import make_geometry, make_model, make_noma

TIGHT = QuadSpec(rel_tol=1e-10, abs_tol=1e-13, max_subdivisions=128)


def _verdict(capsys, criterion: int, failures: list, note: str = ""):
    status = "PASS" if not failures else "FAIL — " + "; ".join(failures)
    line = f"criterion {criterion}: {status}"
    if note:
        line += f" [{note}]"
    with capsys.disabled():
        print("\n" + line)
    assert not failures, line


def _counts_close(p_obs: float, p_ref: float, m: int) -> bool:
    """Observed proportion consistent with m Bernoulli(p_ref) draws,
    three standard errors plus one count of discreteness slack."""
    p_ref = min(max(p_ref, 0.0), 1.0)  # quadrature roundoff can leave [0, 1]
    return abs(p_obs * m - m * p_ref) <= 3.0 * math.sqrt(
        m * p_ref * (1.0 - p_ref)) + 1.0


# ---------------------------------------------------------------------
# criterion 1 — conditional densities integrate to one
# ---------------------------------------------------------------------

def test_criterion_01_density_normalization(capsys, hpp50):
    failures = []
    for strong, weak in ((20, 25), (20, 30), (20, 21)):
        dists = OrderStatDistributions.from_config(hpp50, RankPair(strong, weak))
        lone, _ = integrate_1d(lambda r: dists.marginal_pdf(strong, r),
                               25.0, 100.0, TIGHT)
        joint, _ = integrate_2d_triangular(
            lambda r, l: dists.joint_pdf(r, l), (25.0, lambda l: l),
            (25.0, 100.0), TIGHT)
        for name, total in (("lone", lone), ("joint", joint)):
            if abs(total - 1.0) > 1e-8:
                failures.append(f"({strong},{weak}) {name} integrates to {total!r}")
    _verdict(capsys, 1, failures, "six integrals within 1e-8 of 1")


# ---------------------------------------------------------------------
# criterion 2 — conditioned field draws reproduce both densities
# ---------------------------------------------------------------------

def test_criterion_02_conditioned_field_histograms(capsys, hpp50, dists50):
    n_fields, chunks = 1_000_000, 4
    win_edges = np.linspace(25.0, 100.0, 21)
    edges = np.linspace(25.0, 100.0, 7)
    rng = np.random.default_rng(77)
    win_hist = np.zeros(win_edges.size - 1)
    joint_hist = np.zeros((edges.size - 1, edges.size - 1))
    m_win = m_tail = 0
    for _ in range(chunks):
        counts = rng.poisson(hpp50.mean_count, n_fields // chunks)
        total = int(counts.sum())
        u = rng.random(total)
        d = np.sqrt(25.0 ** 2 + u * (100.0 ** 2 - 25.0 ** 2))
        fid = np.repeat(np.arange(counts.size), counts)
        d_sorted = d[np.lexsort((d, fid))]
        starts = np.zeros(counts.size + 1, dtype=np.int64)
        np.cumsum(counts, out=starts[1:])
        win = (counts >= 20) & (counts < 30)
        tail = counts >= 30
        d_win = d_sorted[starts[:-1][win] + 19]
        d_s = d_sorted[starts[:-1][tail] + 19]
        d_w = d_sorted[starts[:-1][tail] + 29]
        win_hist += np.histogram(d_win, bins=win_edges)[0]
        joint_hist += np.histogram2d(d_s, d_w, bins=(edges, edges))[0]
        m_win += d_win.size
        m_tail += d_s.size

    failures = []
    for i in range(win_edges.size - 1):
        p, _ = integrate_1d(lambda r: dists50.marginal_pdf(20, r),
                            win_edges[i], win_edges[i + 1], TIGHT)
        if not _counts_close(win_hist[i] / m_win, p, m_win):
            failures.append(f"lone-user bin {i}: {win_hist[i]} vs {m_win * p:.1f}")
    for a in range(edges.size - 1):
        for b in range(edges.size - 1):
            if b < a:
                if joint_hist[a, b]:
                    failures.append(f"cell ({a},{b}) below the diagonal occupied")
                continue
            if a == b:
                p, _ = integrate_2d_triangular(
                    lambda r, l: dists50.joint_pdf(r, l),
                    (edges[a], lambda l: l), (edges[a], edges[a + 1]), TIGHT)
            else:
                p, _ = integrate_2d_triangular(
                    lambda r, l: dists50.joint_pdf(r, l),
                    (edges[a], edges[a + 1]), (edges[b], edges[b + 1]), TIGHT)
            if not _counts_close(joint_hist[a, b] / m_tail, p, m_tail):
                failures.append(
                    f"pair cell ({a},{b}): {joint_hist[a, b]} vs {m_tail * p:.1f}")
    _verdict(capsys, 2, failures,
             f"{m_win} lone-user fields in 20 bins, {m_tail} pair fields in 21 cells")


# ---------------------------------------------------------------------
# criterion 3 — quadrature and simulation agree across the battery
# ---------------------------------------------------------------------

def _compare_reports(tag, an, mc, n):
    failures = []

    def check(label, p_obs, p_ref, m):
        if not _counts_close(p_obs, p_ref, m):
            failures.append(f"{tag} {label}: mc {p_obs:.6g} vs {p_ref:.6g} (m={m})")

    check("window_prob", mc.window_prob, an.window_prob, n)
    check("tail_prob", mc.tail_prob, an.tail_prob, n)
    for key in ("outage_strong", "outage_weak", "oma_outage_strong",
                "oma_outage_weak"):
        check(key, getattr(mc, key), getattr(an, key), n)
    if "event_window_strong_only" in mc.trials:
        check("window strong-only", mc.window_events.strong_only,
              an.window_events.strong_only, mc.trials["event_window_strong_only"])
    if "event_tail_both" in mc.trials:
        m_tail = mc.trials["event_tail_both"]
        for event in ("weak_only", "strong_only", "both"):
            check(f"tail {event}", getattr(mc.tail_events, event),
                  getattr(an.tail_events, event), m_tail)
    for key, ref in an.cond_outage.items():
        if key in mc.cond_outage:
            check(f"cond {key}", mc.cond_outage[key], ref, mc.trials[key])
        else:
            event = key.removesuffix("_oma").rsplit("_", 1)[0]
            if event == "window":
                mass = an.window_events.strong_only * an.window_prob
            else:
                mass = getattr(an.tail_events, event) * an.tail_prob
            if mass * n > 9.0:
                failures.append(f"{tag} cond {key}: never observed yet "
                                f"expected {mass * n:.1f} occurrences")
    for key in ("sum_rate_noma", "sum_rate_oma"):
        gap = abs(getattr(mc, key) - getattr(an, key))
        if gap > mc.errors[key] + 1e-6:
            failures.append(f"{tag} {key}: gap {gap:.5f} > 3se {mc.errors[key]:.5f}")
    return failures


def _battery_point(h, p_dbm, pair, path_loss, trials, seed):
    geom = make_geometry(altitude=h)
    hpp = HppConfig(geometry=geom, density=1.0)
    model = make_model(geom, path_loss=path_loss)
    base = make_noma(power_dbm=p_dbm)
    cfg = NomaPairConfig(pair=RankPair(*pair), budget=base.budget)
    dists = OrderStatDistributions.from_config(hpp, cfg.pair)
    plan = SweepPlan(altitude_grid=(h,), power_grid_dbm=(p_dbm,), d_scan_step=1.0)
    scan = beam_scan(hpp, cfg, model, plan)
    an = analytic_report(geom, scan.region, cfg, model, dists)
    mc = simulate_report(hpp, scan.region, cfg, model,
                         SimSpec(trials=trials, seed=seed))
    return an, mc


def test_criterion_03_quadrature_vs_simulation_battery(capsys):
    trials = 1_000_000
    battery = [(h, p, (20, 30), DistancePowerLaw(2.0))
               for h in (10.0, 30.0, 50.0, 90.0, 130.0)
               for p in (10.0, 20.0, 30.0)]
    battery += [(10.0, 60.0, (20, 30), CloseInModel()),
                (30.0, 65.0, (20, 30), CloseInModel()),
                (50.0, 70.0, (20, 25), CloseInModel()),
                (90.0, 70.0, (20, 30), CloseInModel()),
                (130.0, 75.0, (20, 30), CloseInModel())]
    failures = []
    for idx, (h, p, pair, pl) in enumerate(battery):
        tag = f"[h={h:g} P={p:g} {type(pl).__name__}]"
        an, mc = _battery_point(h, p, pair, pl, trials, seed=3000 + idx)
        failures.extend(_compare_reports(tag, an, mc, trials))
    _verdict(capsys, 3, failures,
             f"{len(battery)} configurations x {trials} trials")


# ---------------------------------------------------------------------
# criteria 4 and 6 share one analytic altitude sweep
# ---------------------------------------------------------------------

@pytest.fixture(scope="module")
def analytic_sweep(hpp50, model50):
    plan = SweepPlan(altitude_grid=default_altitude_grid(),
                     power_grid_dbm=(10.0, 20.0, 30.0), d_scan_step=1.0)
    rows = altitude_sweep(plan, hpp50, make_noma(), model50)
    by_power = {p: [r for r in rows if r.power_dbm == p]
                for p in (10.0, 20.0, 30.0)}
    return by_power


def test_criterion_04_low_altitude_rate_anchor(capsys, analytic_sweep):
    failures = []
    rows10 = analytic_sweep[10.0]
    anchor = next(r for r in rows10 if r.altitude == 10.0)
    if abs(anchor.sum_rate_noma - 0.66) > 0.05:
        failures.append(f"rate at h=10, 10 dBm is {anchor.sum_rate_noma:.4f}, "
                        "want 0.66 +/- 0.05")
    for p_dbm, want in ((10.0, 27.5), (20.0, 25.0)):
        rows = analytic_sweep[p_dbm]
        best = max(rows, key=lambda r: r.sum_rate_noma)
        if best.altitude != want:
            failures.append(f"optimal altitude at {p_dbm:g} dBm is "
                            f"{best.altitude:g}, want {want:g} exactly")
    _verdict(capsys, 4, failures,
             f"anchor rate {anchor.sum_rate_noma:.4f} BPCU")


# ---------------------------------------------------------------------
# criterion 5 — boresight scan anchors at h = 50 m
# ---------------------------------------------------------------------

def test_criterion_05_boresight_scan_anchors(capsys, geom50, hpp50, model50):
    failures = []
    d1, d2 = boresight_limits(geom50)
    if abs(d1 - 42.8) > 0.05:
        failures.append(f"D1 = {d1:.4f}, want 42.8 +/- 0.05")
    if abs(d2 - 58.4) > 0.05:
        failures.append(f"D2 = {d2:.4f}, want 58.4 +/- 0.05")
    plan = SweepPlan(altitude_grid=(50.0,), power_grid_dbm=(10.0,),
                     d_scan_step=0.1)
    best = {}
    scans = {}
    for p_dbm in (10.0, 20.0, 30.0):
        cfg = make_noma(power_dbm=p_dbm)
        scan = beam_scan(hpp50, cfg, model50, plan)
        best[p_dbm] = scan.boresight
        scans[p_dbm] = scan
    for p_dbm, want in ((10.0, 45.0), (20.0, 48.0)):
        if abs(best[p_dbm] - want) > 1.0:
            failures.append(f"D* at {p_dbm:g} dBm is {best[p_dbm]:.2f}, "
                            f"want {want:g} +/- 1")
    scan30 = scans[30.0]
    peak = scan30.best_rate
    low = [(d, r) for d, r in zip(scan30.boresights, scan30.rates)
           if d >= 53.0 and r < 0.99 * peak]
    if low:
        d_bad, r_bad = low[0]
        failures.append(f"30 dBm rate at D={d_bad:.1f} is {r_bad:.4f}, "
                        f"more than 1% below the peak {peak:.4f}")
    _verdict(capsys, 5, failures,
             "D* by power: " + ", ".join(f"{p:g} dBm -> {d:.2f} m"
                                         for p, d in sorted(best.items())))


# ---------------------------------------------------------------------
# criterion 6 — superposed scheme dominates the orthogonal benchmark
# ---------------------------------------------------------------------

def test_criterion_06_noma_dominates_oma(capsys, analytic_sweep):
    failures = []
    for p_dbm in (20.0, 30.0):
        bad = [r for r in analytic_sweep[p_dbm]
               if r.sum_rate_noma < r.sum_rate_oma - 1e-9]
        if bad:
            failures.append(
                f"{p_dbm:g} dBm: orthogonal ahead at h={bad[0].altitude:g} "
                f"({bad[0].sum_rate_noma:.4f} < {bad[0].sum_rate_oma:.4f})")
    gap = max(abs(r.sum_rate_noma - r.sum_rate_oma)
              for r in analytic_sweep[10.0])
    if gap > 0.1:
        failures.append(f"10 dBm: curves {gap:.4f} BPCU apart, want <= 0.1")
    _verdict(capsys, 6, failures, f"largest 10 dBm gap {gap:.4f} BPCU")


# ---------------------------------------------------------------------
# criterion 7 — high-power behavior
# ---------------------------------------------------------------------

def test_criterion_07_high_power_asymptotics(capsys):
    failures = []
    for h in (10.0, 50.0):
        geom = make_geometry(altitude=h)
        hpp = HppConfig(geometry=geom, density=1.0)
        model = make_model(geom)
        dists = OrderStatDistributions.from_config(hpp, RankPair(20, 30))
        region = radiated_region(geom, bisecting_boresight(geom))
        cfg = make_noma(power_dbm=60.0)
        exact = analytic_report(geom, region, cfg, model, dists)
        approx = asymptotic_report(geom, region, cfg, model, dists)
        for key, ref in exact.cond_outage.items():
            rel = abs(approx.cond_outage[key] - ref) / ref
            if rel > 0.05:
                failures.append(f"h={h:g} {key}: {rel:.2%} relative gap")

    geom = make_geometry(altitude=50.0)
    hpp = HppConfig(geometry=geom, density=1.0)
    model = make_model(geom)
    dists = OrderStatDistributions.from_config(hpp, RankPair(20, 30))
    region = radiated_region(geom, bisecting_boresight(geom))
    powers = np.arange(50.0, 70.0 + 1e-9, 5.0)
    log_snr = (powers + 35.0) / 10.0  # log10 of the transmit SNR
    slopes = {}
    for user in ("strong", "weak"):
        outs = []
        for p_dbm in powers:
            rep = analytic_report(geom, region, make_noma(power_dbm=p_dbm),
                                  model, dists)
            outs.append(rep.cond_outage[f"both_{user}"])
        slopes[user] = float(np.polyfit(log_snr, np.log10(outs), 1)[0])
        if abs(slopes[user] + 1.0) > 0.05:
            failures.append(f"{user} user log-log slope {slopes[user]:.4f}, "
                            "want -1 +/- 0.05")
    _verdict(capsys, 7, failures,
             "slopes: " + ", ".join(f"{u} {s:.4f}" for u, s in slopes.items()))


# ---------------------------------------------------------------------
# criterion 8 — widening the pair separation never hurts the rate
# ---------------------------------------------------------------------

def test_criterion_08_user_separation_monotonicity(capsys, hpp50, model50):
    plan = SweepPlan(altitude_grid=(50.0,), power_grid_dbm=(20.0,),
                     d_scan_step=1.0)
    base = make_noma(power_dbm=20.0)
    rates = {}
    for weak in (21, 25, 30):
        cfg = NomaPairConfig(pair=RankPair(20, weak), budget=base.budget)
        rates[weak] = beam_scan(hpp50, cfg, model50, plan).best_rate
    failures = []
    if not rates[21] <= rates[25] + 1e-9 <= rates[30] + 2e-9:
        failures.append("sum rate not monotone in the weak rank: "
                        + ", ".join(f"i={k}: {v:.4f}" for k, v in rates.items()))
    _verdict(capsys, 8, failures,
             ", ".join(f"i={k}: {v:.4f}" for k, v in sorted(rates.items())))


# ---------------------------------------------------------------------
# criterion 9 — feedback schemes trade places with altitude
# ---------------------------------------------------------------------

def test_criterion_09_feedback_scheme_crossover(capsys, model50):
    failures = []
    trials = 400_000
    pair = RankPair(20, 25)
    grids = {20.0: (20.0, 30.0, 40.0), 30.0: (40.0, 60.0, 100.0, 120.0)}
    diffs = {}
    for p_dbm, alts in grids.items():
        signed = []
        for i, h in enumerate(alts):
            geom = make_geometry(altitude=h)
            hpp = HppConfig(geometry=geom, density=1.0)
            model = make_model(geom)
            cfg = NomaPairConfig(pair=pair,
                                 budget=make_noma(power_dbm=p_dbm).budget)
            plan = SweepPlan(altitude_grid=(h,), power_grid_dbm=(p_dbm,),
                             d_scan_step=1.0)
            region = beam_scan(hpp, cfg, model, plan).region
            seed = 300 + 10 * int(p_dbm) + i
            dist = simulate_report(hpp, region, cfg, model,
                                   SimSpec(trials=trials, seed=seed))
            csi = simulate_report(hpp, region, cfg, model,
                                  SimSpec(trials=trials, seed=seed,
                                          ordering=Ordering.FULL_CSI))
            gap = csi.sum_rate_noma - dist.sum_rate_noma
            err = csi.errors["sum_rate_noma"] + dist.errors["sum_rate_noma"]
            signed.append((h, gap, err))
        diffs[p_dbm] = signed
        plus = [h for h, gap, err in signed if gap > err]
        minus = [h for h, gap, err in signed if gap < -err]
        if not (plus and minus):
            failures.append(
                f"{p_dbm:g} dBm: no significant sign change across "
                + ", ".join(f"h={h:g}: {g:+.4f}+/-{e:.4f}" for h, g, e in signed))

    spans = {}
    for h in (60.0, 120.0):
        geom = make_geometry(altitude=h)
        hpp = HppConfig(geometry=geom, density=1.0)
        model = make_model(geom)
        cfg = NomaPairConfig(pair=pair, budget=make_noma(power_dbm=20.0).budget)
        hist = actual_order_histogram(hpp, radiated_region(
            geom, bisecting_boresight(geom)), cfg, model,
            SimSpec(trials=200_000, seed=29))
        top = int(hist["positions"][-1])
        within60 = float(hist["strong"][:60].sum() + hist["weak"][:60].sum()) / 2.0
        spans[h] = top
        if hist["positions"][0] != 1 or hist["strong"][0] <= 0.0:
            failures.append(f"h={h:g}: histogram misses the best-gain position")
        if top < 50:
            failures.append(f"h={h:g}: histogram stops at position {top}, "
                            "expected a span into the high 50s")
        if within60 < 0.98:
            failures.append(f"h={h:g}: only {within60:.3f} of the mass lies "
                            "within the first 60 positions")
    _verdict(capsys, 9, failures,
             "histogram spans: " + ", ".join(f"h={h:g} -> 1..{t}"
                                             for h, t in sorted(spans.items())))


# ---------------------------------------------------------------------
# criterion 10 — determinism, error bounds, runtime budget
# ---------------------------------------------------------------------

def test_criterion_10_determinism_and_runtime(capsys, tmp_path):
    failures = []

    battery = [(lambda x: x ** 3, 0.0, 1.0, 0.25),
               (np.sin, 0.0, math.pi, 2.0),
               (lambda x: np.exp(-x), 0.0, 1.0, 1.0 - math.exp(-1.0)),
               (lambda x: 1.0 / (1.0 + x * x), 0.0, 1.0, math.pi / 4.0),
               (lambda x: np.sqrt(np.abs(x)), -1.0, 1.0, 4.0 / 3.0)]
    for i, (f, lo, hi, truth) in enumerate(battery):
        value, err = integrate_1d(f, lo, hi, TIGHT)
        if abs(value - truth) > err + 1e-14:
            failures.append(f"integral {i}: true error {abs(value - truth):.2e} "
                            f"above the estimate {err:.2e}")

    for run in ("a", "b"):
        code = cli_main(["run", "--preset", "fig7", "--out",
                         str(tmp_path / run), "--trials", "20000", "--no-plots"])
        if code != 0:
            failures.append(f"fig7 rerun {run} exited {code}")
    for name in sorted(p.name for p in (tmp_path / "a").glob("*.csv")):
        if (tmp_path / "a" / name).read_bytes() != (tmp_path / "b" / name).read_bytes():
            failures.append(f"{name} differs between identically seeded runs")

    timings = {}
    for name in PRESETS:
        out = tmp_path / name
        start = time.perf_counter()
        code = cli_main(["run", "--preset", name, "--out", str(out)])
        wall = time.perf_counter() - start
        timings[name] = wall
        if code != 0:
            failures.append(f"{name} exited {code}")
            continue
        if wall >= 600.0:
            failures.append(f"{name} took {wall:.0f} s, budget is 600 s")
        manifest = json.loads((out / f"{name}_manifest.json").read_text())
        missing = [o for o in manifest["outputs"] if not (out / o).exists()]
        if missing:
            failures.append(f"{name} manifest lists missing outputs: {missing}")
    slowest = max(timings, key=timings.get)
    _verdict(capsys, 10, failures,
             f"slowest preset {slowest} at {timings[slowest]:.0f} s")
