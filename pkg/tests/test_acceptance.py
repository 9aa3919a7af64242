"""Exit criteria at full scale (runs=1000..2000, horizon=1e5).

Takes a couple of minutes on one core.  Each criterion prints a PASS/FAIL
line, repeated in the terminal summary.
"""
import math
from dataclasses import replace

import numpy as np
import pytest

from rmabsim.env import BandModel, expected_reward, stationary_idle_prob
from rmabsim.policies import PolicyConfig, PolicyState, confidence_term, select_arm_proposed, select_arm_ucb1
from rmabsim.regret import (
    GapProfile,
    empirical_slope,
    interval_growth_factor,
    sensing_count_bound,
    theoretical_slope,
    weak_regret,
)
from rmabsim.scenarios import get_scenario
from rmabsim.sim import SimulationConfig, interval_growth_stats, monte_carlo, run_episode

H = 100_000
LN_H = math.log(H)

pytestmark = pytest.mark.slow


def by_label(name):
    return {c.policy.label: monte_carlo(c) for c in get_scenario(name).configs}


@pytest.fixture(scope="module")
def fig3():
    res = by_label("fig3_markov_regret")
    assert all(r.config.runs == 1000 and r.config.horizon == H for r in res.values())
    return res


@pytest.fixture(scope="module")
def fig4():
    res = by_label("fig4_bernoulli_regret")
    assert all(r.config.runs == 1000 and r.config.horizon == H for r in res.values())
    return res


def final(res):
    tr = res.trace
    return tr.normalized[-1], tr.std_regret[-1] / LN_H / math.sqrt(tr.runs)


def test_c1_markov_ordering(fig3, record):
    p, sp = final(fig3["proposed"])
    ok = True
    parts = [f"proposed={p:.3f}+-{sp:.3f}"]
    for other in ("dsee_10", "ucb1"):
        x, sx = final(fig3[other])
        margin = x - p - 2 * math.hypot(sp, sx)
        ok &= margin > 0
        parts.append(f"{other}={x:.3f}+-{sx:.3f} (margin {margin:.3f})")
    record("C1 fig3 ordering", ok, ", ".join(parts))
    assert ok


def test_c2_bernoulli_ordering(fig4, record):
    p, sp = final(fig4["proposed"])
    d, sd = final(fig4["dsee_log"])
    u, su = final(fig4["ucb1"])
    ucb_worst = (u - p > 2 * math.hypot(su, sp)) and (u - d > 2 * math.hypot(su, sd))
    rel = abs(p - d) / ((p + d) / 2)
    ok = ucb_worst and rel <= 0.25
    record(
        "C2 fig4 ordering",
        ok,
        f"proposed={p:.3f}+-{sp:.3f}, dsee_log={d:.3f}+-{sd:.3f}, ucb1={u:.3f}+-{su:.3f}, "
        f"ucb1 worst by >2se: {ucb_worst}, |P-D|/mean={rel:.3f} (limit 0.25)",
    )
    assert ok


def test_c3_slope_match(record):
    (cfg,) = get_scenario("fig2_markov_slope").configs
    assert cfg.runs >= 2000 and cfg.horizon == H
    res = monte_carlo(cfg)
    t = res.trace.times
    slope = empirical_slope(res.trace)
    mask = (t >= 10**4) & (t <= 10**5)
    value = float(np.mean(t[mask] * slope[mask]))
    target = theoretical_slope(1, cfg.gaps)
    ok = abs(value / target - 1) <= 0.5
    record("C3 fig2 slope", ok, f"mean t*slope over [1e4,1e5] = {value:.4f}, sum 1/gap = {target:.4f} (+-50%)")
    assert ok


def test_c4_log_growth(fig3, record):
    tr = fig3["proposed"].trace
    a, b = tr.normalized[tr.at(10**4)], tr.normalized[tr.at(10**5)]
    ratio = b / a
    ok = 1 / 1.3 <= ratio <= 1.3
    record("C4 normalized regret flattening", ok, f"R/ln t: {a:.3f} at 1e4, {b:.3f} at 1e5, ratio {ratio:.3f}")
    assert ok


def test_c5_sensing_count_bound(fig3, record):
    res = fig3["proposed"]
    gaps = res.config.gaps
    counts = res.mean_counts[res.trace.at(H)]
    ok = True
    parts = []
    for n in gaps.suboptimal_arms:
        bound = 3 * sensing_count_bound(H, n + 1, interval_growth_factor(gaps.gaps[n]))
        ok &= counts[n] <= bound
        parts.append(f"arm {n}: {counts[n]:.2f} <= {bound:.2f}")
    record("C5 sensing-count bound (slack 3)", ok, "; ".join(parts))
    assert ok


def test_c6_interval_growth(record):
    bands = (BandModel.bernoulli(0.9, 1.0, 0.0), BandModel.bernoulli(0.4, 1.0, 0.0))
    cfg = SimulationConfig(bands, PolicyConfig("proposed"), H, 2000, 2024)
    assert cfg.gaps.gaps[1] == pytest.approx(0.5, rel=1e-12)
    res = monte_carlo(cfg, keep_logs=True)
    st = interval_growth_stats(res.logs, 1)
    j = int(np.flatnonzero(st.included >= 500).max())
    ratio = st.mean_ratio[j]
    ok = 1.1 <= ratio <= 2.0
    record(
        "C6 interval growth",
        ok,
        f"k={st.k[j]} ({st.included[j]} runs): mean z[k+1]/z[k] = {ratio:.4f} in [1.1, 2.0]; "
        f"exp(0.25) = {interval_growth_factor(0.5):.4f}",
    )
    assert ok


def close(a, b, rel=1e-12):
    return a == b if b == 0 else abs(a - b) <= rel * abs(b)


def test_c7_exactness(record):
    checks = {}
    checks["stationary 1/3"] = close(stationary_idle_prob(0.1, 0.2), 1 / 3)
    checks["stationary 1/2"] = close(stationary_idle_prob(0.5, 0.5), 0.5)
    checks["stationary 5/6"] = close(stationary_idle_prob(0.5, 0.1), 5 / 6)
    checks["reward bernoulli"] = close(expected_reward(BandModel.bernoulli(0.3, 1, 0.1)), 0.37)
    checks["reward markov"] = close(expected_reward(BandModel.markov(0.5, 0.1, 1, 0.1)), 0.85)
    checks["reward constant"] = close(expected_reward(BandModel.markov(0.2, 0.7, 0.5, 0.5)), 0.5)
    checks["c(17,17)"] = confidence_term(17, 17) == 0.0
    checks["c(e)"] = close(confidence_term(10 * math.e, 10), 1.0)
    checks["c(100,10)"] = close(confidence_term(100, 10), math.sqrt(math.log(10)))
    g2 = GapProfile((0.85, 0.4))
    checks["regret 2.25"] = close(weak_regret([5, 5], g2, 10), 2.25)
    checks["regret best only"] = weak_regret([10, 0], g2, 10) == 0.0
    checks["regret t=0"] = weak_regret([0, 0], g2, 0) == 0.0
    gm = get_scenario("fig2_markov_slope").configs[0].gaps
    checks["slope fig2"] = close(theoretical_slope(1000, gm), (1 / 0.45 + 1 / 0.525 + 1 / 0.57 + 1 / 0.6) / 1000)
    checks["slope unit"] = theoretical_slope(1, GapProfile((1.0, 0.0))) == 1.0
    checks["bound t=z1"] = sensing_count_bound(9, 9, 1.5) == 1.0
    checks["bound e^3"] = close(sensing_count_bound(5 * math.e**3, 5, math.e), 4.0)
    checks["bound 0.45"] = close(sensing_count_bound(10**4, 1, interval_growth_factor(0.45)), math.log(10**4) / 0.2025 + 1)
    checks["growth 0"] = interval_growth_factor(0.0) == 1.0
    checks["growth 1"] = close(interval_growth_factor(1.0), math.e)
    checks["growth 0.45"] = close(interval_growth_factor(0.45), math.exp(0.2025))

    s = PolicyState(2, t=3)
    s.counts, s.sums, s.last_sensed = [1, 1], [0.9, 0.1], [1, 2]
    checks["proposed pick"] = select_arm_proposed(s) == 0
    checks["ucb1 pick"] = select_arm_ucb1(s) == 0

    cfg = replace(get_scenario("fig3_markov_regret").configs[0], policy=PolicyConfig("oracle"), runs=20, horizon=5000)
    checks["oracle regret 0"] = bool(np.all(monte_carlo(cfg).trace.mean_regret == 0.0))

    for policy in (PolicyConfig("proposed"), PolicyConfig("ucb1"), PolicyConfig("dsee", dsee_d=10.0)):
        c = replace(cfg, policy=policy, runs=12, horizon=20_000)
        a, b = monte_carlo(c), monte_carlo(c, workers=4, order=list(range(11, -1, -1)))
        checks[f"parallel {policy.label}"] = np.array_equal(a.trace.mean_regret, b.trace.mean_regret) and np.array_equal(
            a.trace.std_regret, b.trace.std_regret
        )
        long = run_episode(replace(c, record_choices=True), 5)
        short = run_episode(replace(c, horizon=6000, record_choices=True), 5)
        checks[f"prefix {policy.label}"] = np.array_equal(long.choices[:6000], short.choices)

    failed = [k for k, v in checks.items() if not v]
    record("C7 exactness suite", not failed, f"{len(checks) - len(failed)}/{len(checks)} checks" + (f", failed: {failed}" if failed else ""))
    assert not failed
