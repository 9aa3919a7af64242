import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rmabsim.env import (
    BandModel,
    BandState,
    DegenerateChainError,
    InitMode,
    expected_reward,
    sample_initial_state,
    stationary_idle_prob,
    step,
    transition,
)

prob = st.floats(0.0, 1.0)


def stationary_by_eigen(p10, p01):
    """Left Perron vector of the 2x2 transition matrix (state 0 = idle)."""
    P = np.array([[1 - p01, p01], [p10, 1 - p10]])
    A = np.vstack([P.T - np.eye(2), np.ones(2)])
    pi, *_ = np.linalg.lstsq(A, np.array([0.0, 0.0, 1.0]), rcond=None)
    return pi[0]


@pytest.mark.parametrize(
    "p10, p01, expected",
    [(0.1, 0.2, Fraction(1, 3)), (0.5, 0.5, Fraction(1, 2)), (0.5, 0.1, Fraction(5, 6))],
)
def test_stationary_idle_prob_examples(p10, p01, expected):
    assert stationary_idle_prob(p10, p01) == pytest.approx(float(expected), rel=1e-12)
    assert stationary_idle_prob(p10, p01) == pytest.approx(stationary_by_eigen(p10, p01), rel=1e-12)


@settings(max_examples=200)
@given(prob, prob)
def test_stationary_matches_linear_solve(p10, p01):
    if p10 + p01 < 1e-6:
        return
    assert stationary_idle_prob(p10, p01) == pytest.approx(stationary_by_eigen(p10, p01), abs=1e-9)


def test_degenerate_chain_rejected():
    with pytest.raises(DegenerateChainError):
        stationary_idle_prob(0.0, 0.0)
    with pytest.raises(DegenerateChainError):
        expected_reward(BandModel.markov(0.0, 0.0))
    with pytest.raises(DegenerateChainError):
        sample_initial_state(BandModel.markov(0.0, 0.0), np.random.default_rng(0))


def test_invalid_parameters():
    with pytest.raises(ValueError):
        BandModel.bernoulli(1.3)
    with pytest.raises(ValueError):
        BandModel.markov(0.1, 0.2, r_idle=2.0)


@pytest.mark.parametrize(
    "band, expected",
    [
        (BandModel.bernoulli(0.3, 1.0, 0.1), Fraction(3, 10) + Fraction(7, 10) * Fraction(1, 10)),
        (BandModel.markov(0.5, 0.1, 1.0, 0.1), Fraction(5, 6) + Fraction(1, 6) * Fraction(1, 10)),
        (BandModel.bernoulli(0.8, 0.5, 0.5), Fraction(1, 2)),
        (BandModel.markov(0.3, 0.9, 0.5, 0.5), Fraction(1, 2)),
    ],
)
def test_expected_reward_examples(band, expected):

    assert expected_reward(band) == pytest.approx(float(expected), rel=1e-12)


def test_initial_state_modes():
    rng = np.random.default_rng(1)
    assert sample_initial_state(BandModel.markov(0.1, 0.1, init_mode=InitMode.FIXED_IDLE), rng) == BandState(False)
    assert sample_initial_state(BandModel.markov(0.1, 0.1, init_mode="busy"), rng) == BandState(True)
    always_idle = BandModel.bernoulli(1.0)
    assert all(not sample_initial_state(always_idle, rng).occupied for _ in range(1000))


def test_initial_state_symmetric_chain_is_fair():
    rng = np.random.default_rng(2)
    band = BandModel.markov(0.5, 0.5)
    n = 20000
    idle = sum(not sample_initial_state(band, rng).occupied for _ in range(n))
    assert abs(idle / n - 0.5) < 3 * math.sqrt(0.25 / n)


def test_absorbing_and_alternating_chains():
    rng = np.random.default_rng(3)
    band = BandModel.markov(0.0, 0.0, r_idle=0.7, r_busy=0.2)
    s = BandState(False)
    for _ in range(100):
        s, r = step(band, s, rng)
        assert not s.occupied and r == 0.7
    flip = BandModel.markov(1.0, 1.0)
    s = BandState(False)
    seen = []
    for _ in range(10):
        s, _ = step(flip, s, rng)
        seen.append(s.occupied)
    assert seen == [True, False] * 5


def test_bernoulli_always_idle_rewards():
    rng = np.random.default_rng(4)
    band = BandModel.bernoulli(1.0, 0.9, 0.1)
    s = BandState(True)
    for _ in range(100):
        s, r = step(band, s, rng)
        assert r == 0.9


@settings(max_examples=50, deadline=None)
@given(prob, prob, prob, prob, st.integers(0, 2**32))
def test_rewards_in_unit_interval(p10, p01, r0, r1, seed):
    rng = np.random.default_rng(seed)
    band = BandModel.markov(p10, p01, r0, r1)
    s = BandState(bool(seed % 2))
    for _ in range(50):
        s, r = step(band, s, rng)
        assert 0.0 <= r <= 1.0


def _long_run(band, n, seed):
    rng = np.random.default_rng(seed)
    u = rng.random(n)
    s = sample_initial_state(band, rng)
    idle = 0
    total = 0.0
    for x in u:
        s = transition(band, s, x)
        idle += not s.occupied
        total += band.reward(s)
    return idle / n, total / n


@pytest.mark.parametrize("p10, p01", [(0.1, 0.2), (0.5, 0.1), (0.1, 0.5)])
def test_long_markov_trajectory_matches_stationary(p10, p01):
    band = BandModel.markov(p10, p01, 1.0, 0.1)
    n = 1_000_000
    pi0 = stationary_idle_prob(p10, p01)
    freq, mean = _long_run(band, n, seed=11)
    # autocorrelation inflates the i.i.d. standard error by (1 + rho) / (1 - rho)
    rho = 1.0 - p10 - p01
    inflate = math.sqrt((1 + rho) / (1 - rho))
    se = math.sqrt(pi0 * (1 - pi0) / n) * inflate
    assert abs(freq - pi0) < 3 * se
    assert abs(mean - expected_reward(band)) < 3 * se * 0.9
