"""Arm-selection policies for the restless sensing bandit.

Arms are 0-based here; the clock ``t`` starts at 1, so during the
round-robin initialisation the arm chosen at time t is ``t - 1``.

Policies
--------
proposed
    index = sample mean + sqrt(ln(t / tau)), with tau the last time the arm
    was sensed.  The bonus is zero right after sensing and grows with the
    time elapsed since, so a suboptimal arm's sensing instants spread out
    geometrically.
ucb1
    index = sample mean + sqrt(2 ln t / T).
dsee
    Deterministic sequencing of exploration and exploitation epochs.
oracle
    Always the same arm (the best single arm when built from true means).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

__all__ = [
    "PolicyKind",
    "PolicyConfig",
    "PolicyState",
    "DSEEBook",
    "LOG_TIME",
    "confidence_term",
    "select_arm_proposed",
    "select_arm_ucb1",
    "select_arm_dsee",
    "select_arm_oracle",
    "make_policy",
    "Policy",
]

#: ``dsee_d`` value meaning D(t) = ln t.
LOG_TIME = "log"


class PolicyKind(str, enum.Enum):
    PROPOSED = "proposed"
    UCB1 = "ucb1"
    DSEE = "dsee"
    ORACLE = "oracle"


@dataclass(frozen=True)
class PolicyConfig:
    kind: PolicyKind
    dsee_d: float | str = 10.0
    oracle_arm: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", PolicyKind(self.kind))
        if self.kind is PolicyKind.DSEE:
            if self.dsee_d != LOG_TIME:
                d = float(self.dsee_d)
                if not d >= 0.0:
                    raise ValueError(f"dsee_d={self.dsee_d!r} must be >= 0 or {LOG_TIME!r}")
                object.__setattr__(self, "dsee_d", d)
        if self.oracle_arm is not None and int(self.oracle_arm) < 0:
            raise ValueError(f"oracle_arm={self.oracle_arm!r} must be a non-negative arm index")

    @property
    def label(self) -> str:
        if self.kind is PolicyKind.DSEE:
            return "dsee_log" if self.dsee_d == LOG_TIME else f"dsee_{self.dsee_d:g}"
        return self.kind.value


@dataclass
class PolicyState:
    """Per-arm statistics shared by every index policy.

    Reward sums are kept with Neumaier compensation and divided on read,
    so sample means stay exact to ~1 ulp over long horizons.
    """

    n_arms: int
    t: int = 1
    counts: list[int] = field(default_factory=list)
    sums: list[float] = field(default_factory=list)
    comps: list[float] = field(default_factory=list)
    last_sensed: list[int] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.n_arms < 1:
            raise ValueError("n_arms must be >= 1")
        for name, zero in (("counts", 0), ("sums", 0.0), ("comps", 0.0), ("last_sensed", 0)):
            if not getattr(self, name):
                setattr(self, name, [zero] * self.n_arms)

    def mean(self, arm: int) -> float:
        n = self.counts[arm]
        return (self.sums[arm] + self.comps[arm]) / n if n else 0.0

    @property
    def mean_rewards(self) -> list[float]:
        return [self.mean(n) for n in range(self.n_arms)]

    def update(self, arm: int, reward: float) -> PolicyState:
        """Record the reward of ``arm`` sensed at the current time and advance the clock."""
        if not 0.0 <= reward <= 1.0:
            raise ValueError(f"reward {reward!r} outside [0, 1]")
        s = self.sums[arm]
        total = s + reward
        if abs(s) >= abs(reward):
            self.comps[arm] += (s - total) + reward
        else:
            self.comps[arm] += (reward - total) + s
        self.sums[arm] = total
        self.counts[arm] += 1
        self.last_sensed[arm] = self.t
        self.t += 1
        return self


def confidence_term(t: int, tau: int) -> float:
    """sqrt(ln(t / tau)); zero at the sensing instant itself."""
    if tau < 1 or tau > t:
        raise ValueError(f"need 1 <= tau <= t, got tau={tau}, t={t}")
    return math.sqrt(math.log(t / tau))


def _argmax(values: Sequence[float]) -> int:
    best = 0
    for n in range(1, len(values)):
        if values[n] > values[best]:
            best = n
    return best


def proposed_indices(state: PolicyState) -> list[float]:
    t = state.t
    return [state.mean(n) + math.sqrt(math.log(t / state.last_sensed[n])) for n in range(state.n_arms)]


def select_arm_proposed(state: PolicyState) -> int:
    if state.t <= state.n_arms:
        return state.t - 1
    return _argmax(proposed_indices(state))


def ucb1_indices(state: PolicyState) -> list[float]:
    log_t = math.log(state.t)
    return [state.mean(n) + math.sqrt(2.0 * log_t / state.counts[n]) for n in range(state.n_arms)]


def select_arm_ucb1(state: PolicyState) -> int:
    if state.t <= state.n_arms:
        return state.t - 1
    return _argmax(ucb1_indices(state))


def select_arm_oracle(state: PolicyState, oracle_arm: int) -> int:
    if not 0 <= oracle_arm < state.n_arms:
        raise ValueError(f"oracle_arm {oracle_arm} out of range for {state.n_arms} arms")
    return oracle_arm


@dataclass
class DSEEBook:
    """Epoch bookkeeping for DSEE.

    Exploration epoch k (k = 1, 2, ...) cycles through the arms for
    ``N * 4**(k-1)`` steps; exploitation epoch k plays one arm for
    ``2 * 4**(k-1)`` steps.  The two kinds are numbered separately.  The
    first epoch is always exploration; afterwards, at each epoch boundary,
    exploration is chosen iff ``X < D(t) * ln t`` where X counts the
    exploration steps taken so far.
    """

    n_arms: int
    d: float | str = 10.0
    exploring: bool = True
    k_explore: int = 0
    k_exploit: int = 0
    remaining: int = 0
    position: int = 0
    explored: int = 0
    exploit_arm: int = 0
    sums: list[float] = field(default_factory=list)
    counts: list[int] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.sums:
            self.sums = [0.0] * self.n_arms
        if not self.counts:
            self.counts = [0] * self.n_arms

    def budget(self, t: int) -> float:
        log_t = math.log(t)
        d = log_t if self.d == LOG_TIME else float(self.d)
        return d * log_t

    def explore_means(self) -> list[float]:
        return [s / c if c else 0.0 for s, c in zip(self.sums, self.counts)]

    def record(self, arm: int, reward: float) -> None:
        if self.exploring:
            self.sums[arm] += reward
            self.counts[arm] += 1


def select_arm_dsee(state: PolicyState, book: DSEEBook) -> int:
    """Return the DSEE arm for the current time, starting a new epoch if due.

    Mutates ``book``; call :meth:`DSEEBook.record` with the observed reward.
    """
    if book.remaining == 0:
        if book.k_explore == 0 or book.explored < book.budget(state.t):
            book.exploring = True
            book.k_explore += 1
            book.remaining = book.n_arms * 4 ** (book.k_explore - 1)
            book.position = 0
        else:
            book.exploring = False
            book.k_exploit += 1
            book.remaining = 2 * 4 ** (book.k_exploit - 1)
            book.exploit_arm = _argmax(book.explore_means())
    book.remaining -= 1
    if book.exploring:
        arm = book.position % book.n_arms
        book.position += 1
        book.explored += 1
        return arm
    return book.exploit_arm


class Policy:
    """Stateful wrapper pairing a selection rule with its extra bookkeeping."""

    def __init__(self, config: PolicyConfig, n_arms: int):
        self.config = config
        self.n_arms = n_arms
        self.book = DSEEBook(n_arms, config.dsee_d) if config.kind is PolicyKind.DSEE else None
        if config.kind is PolicyKind.ORACLE and config.oracle_arm is None:
            raise ValueError("oracle policy needs a resolved oracle_arm")

    def select(self, state: PolicyState) -> int:
        kind = self.config.kind
        if kind is PolicyKind.PROPOSED:
            return select_arm_proposed(state)
        if kind is PolicyKind.UCB1:
            return select_arm_ucb1(state)
        if kind is PolicyKind.DSEE:
            return select_arm_dsee(state, self.book)
        return select_arm_oracle(state, self.config.oracle_arm)

    def observe(self, arm: int, reward: float) -> None:
        if self.book is not None:
            self.book.record(arm, reward)


def make_policy(config: PolicyConfig, n_arms: int) -> Policy:
    return Policy(config, n_arms)
