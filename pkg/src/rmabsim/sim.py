"""Episode engine and Monte Carlo harness.

Seeding
-------
Run ``i`` of a batch with master seed ``s`` draws its environment
randomness from ``PCG64(SeedSequence(s, spawn_key=(i, ENV_STREAM)))``; the
policy stream uses ``POLICY_STREAM`` instead (reserved, the bundled
policies are deterministic).  The environment stream is consumed as one
uniform per band for the initial states, then one uniform per band per
step in band order.  Outputs therefore depend only on ``(config, seed)``,
not on how runs are scheduled, and a shorter horizon replays a prefix of a
longer one.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from . import _kernel
from .env import BandKind, BandModel, expected_reward, sample_initial_state, step
from .policies import LOG_TIME, PolicyConfig, PolicyKind, PolicyState, make_policy
from .regret import GapProfile, RegretTrace, log_grid, regret_matrix

logger = logging.getLogger(__name__)

ENV_STREAM = 0
POLICY_STREAM = 1
BLOCK = 1 << 16
CHOICES_DEFAULT_LIMIT = 100_000

_POLICY_CODES = {
    PolicyKind.PROPOSED: _kernel.PROPOSED,
    PolicyKind.UCB1: _kernel.UCB1,
    PolicyKind.DSEE: _kernel.DSEE,
    PolicyKind.ORACLE: _kernel.ORACLE,
}


@dataclass(frozen=True)
class SimulationConfig:
    bands: tuple[BandModel, ...]
    policy: PolicyConfig
    horizon: int
    runs: int = 1
    master_seed: int = 0
    per_decade: int = 200
    record_choices: bool | None = None
    max_sensing_times: int = 4096

    def __post_init__(self) -> None:
        object.__setattr__(self, "bands", tuple(self.bands))
        if not self.bands:
            raise ValueError("bands: need at least one band")
        n = len(self.bands)
        if self.horizon < n:
            raise ValueError(f"horizon={self.horizon} must be >= number of bands ({n})")
        if self.runs < 1:
            raise ValueError(f"runs={self.runs} must be >= 1")
        if not 0 <= self.master_seed < 2**64:
            raise ValueError(f"master_seed={self.master_seed} must be an unsigned 64-bit integer")
        if self.per_decade < 1:
            raise ValueError("per_decade must be >= 1")
        arm = self.policy.oracle_arm
        if arm is not None and arm >= n:
            raise ValueError(f"oracle_arm={arm} out of range for {n} bands")

    @property
    def n_arms(self) -> int:
        return len(self.bands)

    @property
    def gaps(self) -> GapProfile:
        return GapProfile(tuple(expected_reward(b) for b in self.bands))

    def resolved_policy(self) -> PolicyConfig:
        """Policy with the oracle arm filled in from the true means if unset."""
        if self.policy.kind is PolicyKind.ORACLE and self.policy.oracle_arm is None:
            return replace(self.policy, oracle_arm=self.gaps.best_arm)
        return self.policy

    def grid(self) -> np.ndarray:
        return log_grid(self.horizon, self.n_arms, self.per_decade)

    @property
    def keeps_choices(self) -> bool:
        if self.record_choices is None:
            return self.horizon <= CHOICES_DEFAULT_LIMIT
        return self.record_choices


@dataclass
class EpisodeLog:
    run_index: int
    grid: np.ndarray
    counts_at_grid: np.ndarray
    sensing_times: dict[int, np.ndarray]
    sensing_totals: dict[int, int]
    choices: np.ndarray | None = None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EpisodeLog):
            return NotImplemented
        same_choices = (self.choices is None and other.choices is None) or (
            self.choices is not None and other.choices is not None and np.array_equal(self.choices, other.choices)
        )
        return (
            self.run_index == other.run_index
            and np.array_equal(self.grid, other.grid)
            and np.array_equal(self.counts_at_grid, other.counts_at_grid)
            and self.sensing_times.keys() == other.sensing_times.keys()
            and all(np.array_equal(v, other.sensing_times[k]) for k, v in self.sensing_times.items())
            and self.sensing_totals == other.sensing_totals
            and same_choices
        )


def episode_rng(master_seed: int, run_index: int, stream: int = ENV_STREAM) -> np.random.Generator:
    seq = np.random.SeedSequence(master_seed, spawn_key=(run_index, stream))
    return np.random.Generator(np.random.PCG64(seq))


def _check_run_index(config: SimulationConfig, run_index: int) -> None:
    if not 0 <= run_index < config.runs:
        raise ValueError(f"run_index={run_index} outside [0, {config.runs})")


def run_episode(config: SimulationConfig, run_index: int = 0, engine: str = "compiled") -> EpisodeLog:
    """Simulate one episode.

    ``engine="python"`` steps the bands and policies object by object and
    is meant as a slow reference for the compiled loop.
    """
    _check_run_index(config, run_index)
    if engine == "compiled":
        return _run_compiled(config, run_index)
    if engine == "python":
        return _run_python(config, run_index)
    raise ValueError(f"unknown engine {engine!r}")


def _run_python(config: SimulationConfig, run_index: int) -> EpisodeLog:
    rng = episode_rng(config.master_seed, run_index)
    bands = config.bands
    policy = make_policy(config.resolved_policy(), config.n_arms)
    grid = config.grid()
    tracked = set(config.gaps.suboptimal_arms)

    states = [sample_initial_state(b, rng) for b in bands]
    ps = PolicyState(config.n_arms)
    counts_out = np.zeros((len(grid), config.n_arms), dtype=np.int64)
    sensing: dict[int, list[int]] = {n: [] for n in tracked}
    choices = [] if config.keeps_choices else None
    g = 0
    for t in range(1, config.horizon + 1):
        rewards = []
        for n, band in enumerate(bands):
            states[n], r = step(band, states[n], rng)
            rewards.append(r)
        arm = policy.select(ps)
        policy.observe(arm, rewards[arm])
        ps.update(arm, rewards[arm])
        if choices is not None:
            choices.append(arm)
        if arm in tracked:
            sensing[arm].append(t)
        if g < len(grid) and grid[g] == t:
            counts_out[g] = ps.counts
            g += 1
    cap = config.max_sensing_times
    return EpisodeLog(
        run_index=run_index,
        grid=grid,
        counts_at_grid=counts_out,
        sensing_times={n: np.asarray(v[:cap], dtype=np.int64) for n, v in sorted(sensing.items())},
        sensing_totals={n: len(v) for n, v in sorted(sensing.items())},
        choices=None if choices is None else np.asarray(choices, dtype=np.int32),
    )


def _run_compiled(config: SimulationConfig, run_index: int) -> EpisodeLog:
    rng = episode_rng(config.master_seed, run_index)
    bands = config.bands
    n = config.n_arms
    policy = config.resolved_policy()
    grid = config.grid()
    suboptimal = config.gaps.suboptimal_arms

    occupied = np.array([sample_initial_state(b, rng).occupied for b in bands], dtype=np.bool_)
    is_markov = np.array([b.kind is BandKind.MARKOV for b in bands], dtype=np.bool_)
    p_idle = np.array([b.p_idle for b in bands])
    p10 = np.array([b.p10 for b in bands])
    p01 = np.array([b.p01 for b in bands])
    r_idle = np.array([b.r_idle for b in bands])
    r_busy = np.array([b.r_busy for b in bands])

    dsee_log = policy.dsee_d == LOG_TIME
    dsee_d = 0.0 if dsee_log else float(policy.dsee_d)
    oracle_arm = -1 if policy.oracle_arm is None else int(policy.oracle_arm)

    scal = np.array([1, 0], dtype=np.int64)
    counts = np.zeros(n, dtype=np.int64)
    sums = np.zeros(n)
    comps = np.zeros(n)
    last = np.zeros(n, dtype=np.int64)
    dsee_int = np.zeros(7, dtype=np.int64)
    dsee_sums = np.zeros(n)
    dsee_counts = np.zeros(n, dtype=np.int64)
    counts_out = np.zeros((len(grid), n), dtype=np.int64)
    keep = config.keeps_choices
    choices = np.zeros(config.horizon if keep else 0, dtype=np.int32)
    track = np.zeros(n, dtype=np.bool_)
    track[suboptimal] = True
    sens_out = np.zeros((n, config.max_sensing_times), dtype=np.int64)
    sens_len = np.zeros(n, dtype=np.int64)

    done = 0
    while done < config.horizon:
        rows = min(BLOCK, config.horizon - done)
        u = rng.random((rows, n))
        _kernel.run_block(
            u, is_markov, p_idle, p10, p01, r_idle, r_busy, occupied,
            _POLICY_CODES[policy.kind], dsee_d, dsee_log, oracle_arm,
            scal, counts, sums, comps, last, dsee_int, dsee_sums, dsee_counts,
            grid, counts_out, keep, choices, track, sens_out, sens_len,
        )
        done += rows

    return EpisodeLog(
        run_index=run_index,
        grid=grid,
        counts_at_grid=counts_out,
        sensing_times={a: sens_out[a, : min(sens_len[a], config.max_sensing_times)].copy() for a in suboptimal},
        sensing_totals={a: int(sens_len[a]) for a in suboptimal},
        choices=choices if keep else None,
    )


@dataclass
class MonteCarloResult:
    config: SimulationConfig
    trace: RegretTrace
    mean_counts: np.ndarray
    logs: list[EpisodeLog] | None = field(default=None, repr=False)


def monte_carlo(
    config: SimulationConfig,
    workers: int = 1,
    keep_logs: bool = False,
    order: Iterable[int] | None = None,
) -> MonteCarloResult:
    """Run ``config.runs`` episodes and aggregate their weak regret.

    ``order`` permutes the execution order of run indices (for testing);
    results are always reduced in run-index order, so neither it nor
    ``workers`` changes the output.
    """
    run_ids = list(range(config.runs)) if order is None else list(order)
    if sorted(run_ids) != list(range(config.runs)):
        raise ValueError("order must be a permutation of the run indices")
    gaps = config.gaps
    grid = config.grid()
    regrets = np.empty((config.runs, len(grid)))
    count_sum = np.zeros((len(grid), config.n_arms), dtype=np.int64)
    logs: list[EpisodeLog | None] = [None] * config.runs

    def work(i: int) -> EpisodeLog:
        return run_episode(config, i)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            finished = list(pool.map(work, run_ids))
    else:
        finished = map(work, run_ids)
    for log in finished:
        regrets[log.run_index] = regret_matrix(log.counts_at_grid, gaps)
        if keep_logs:
            logs[log.run_index] = log
        else:
            # integer sums are order independent
            count_sum += log.counts_at_grid
    if keep_logs:
        count_sum = np.sum([log.counts_at_grid for log in logs], axis=0)

    logger.debug("monte_carlo: %d runs of %s done", config.runs, config.policy.label)
    trace = RegretTrace(grid, regrets.mean(axis=0), regrets.std(axis=0), runs=config.runs)
    return MonteCarloResult(config, trace, count_sum / config.runs, logs if keep_logs else None)


@dataclass(frozen=True)
class GrowthStats:
    """Across-run mean of z[k+1] / z[k] for k = 1, 2, ... (1-based k)."""

    k: np.ndarray
    mean_ratio: np.ndarray
    included: np.ndarray
    excluded: np.ndarray


def interval_growth_stats(logs: Sequence[EpisodeLog], arm: int) -> GrowthStats:
    """Mean ratio of consecutive sensing instants of a suboptimal arm.

    Runs without a (k+1)-th recorded sensing are left out of the mean for
    that k and counted in ``excluded``.
    """
    if not logs:
        raise ValueError("no episode logs given")
    if any(arm not in log.sensing_times for log in logs):
        raise ValueError(f"arm {arm} is optimal or untracked; sensing times are kept for suboptimal arms only")
    seqs = [np.asarray(log.sensing_times[arm], dtype=float) for log in logs]
    kmax = max((len(s) for s in seqs), default=0) - 1
    ks, means, inc, exc = [], [], [], []
    for k in range(1, kmax + 1):
        ratios = [s[k] / s[k - 1] for s in seqs if len(s) > k]
        ks.append(k)
        means.append(float(np.mean(ratios)))
        inc.append(len(ratios))
        exc.append(len(seqs) - len(ratios))
    return GrowthStats(
        np.asarray(ks, dtype=np.int64),
        np.asarray(means),
        np.asarray(inc, dtype=np.int64),
        np.asarray(exc, dtype=np.int64),
    )
