"""Band occupancy processes for the sensing bandit.

Each band is idle (state 0) or occupied (state 1).  Occupancy is either
i.i.d. Bernoulli in time or a two-state (Gilbert-Elliott style) Markov
chain.  The reward emitted at time t is the rate tied to the band's state
at time t, i.e. ``r_idle`` when idle and ``r_busy`` when occupied.  Setting
``r_busy = 0`` recovers the "idle-only" reward model.

All bands advance every step, sensed or not.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "BandKind",
    "InitMode",
    "BandModel",
    "BandState",
    "DegenerateChainError",
    "stationary_idle_prob",
    "expected_reward",
    "sample_initial_state",
    "step",
]


class DegenerateChainError(ValueError):
    """Raised when a two-state chain has no unique stationary distribution."""


class BandKind(str, enum.Enum):
    BERNOULLI = "bernoulli"
    MARKOV = "markov"


class InitMode(str, enum.Enum):
    STATIONARY = "stationary"
    FIXED_IDLE = "idle"
    FIXED_BUSY = "busy"


def _check_unit(name: str, value: float) -> None:
    if not (0.0 <= value <= 1.0) or math.isnan(value):
        raise ValueError(f"{name}={value!r} must lie in [0, 1]")


@dataclass(frozen=True)
class BandModel:
    """Immutable description of one band's reward process.

    ``p_idle`` is only used by Bernoulli bands; ``p10`` (busy -> idle) and
    ``p01`` (idle -> busy) only by Markov bands.
    """

    kind: BandKind
    r_idle: float = 1.0
    r_busy: float = 0.1
    p_idle: float = 0.5
    p10: float = 0.5
    p01: float = 0.5
    init_mode: InitMode = InitMode.STATIONARY

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", BandKind(self.kind))
        object.__setattr__(self, "init_mode", InitMode(self.init_mode))
        for name in ("r_idle", "r_busy", "p_idle", "p10", "p01"):
            object.__setattr__(self, name, float(getattr(self, name)))
            _check_unit(name, getattr(self, name))

    @classmethod
    def bernoulli(cls, p_idle: float, r_idle: float = 1.0, r_busy: float = 0.1, **kw) -> BandModel:
        return cls(BandKind.BERNOULLI, r_idle=r_idle, r_busy=r_busy, p_idle=p_idle, **kw)

    @classmethod
    def markov(cls, p10: float, p01: float, r_idle: float = 1.0, r_busy: float = 0.1, **kw) -> BandModel:
        return cls(BandKind.MARKOV, r_idle=r_idle, r_busy=r_busy, p10=p10, p01=p01, **kw)

    def idle_probability(self) -> float:
        """Long-run fraction of idle steps."""
        if self.kind is BandKind.BERNOULLI:
            return self.p_idle
        return stationary_idle_prob(self.p10, self.p01)

    def reward(self, state: BandState) -> float:
        return self.r_busy if state.occupied else self.r_idle


@dataclass(frozen=True)
class BandState:
    occupied: bool


IDLE = BandState(False)
BUSY = BandState(True)


def stationary_idle_prob(p10: float, p01: float) -> float:
    """Stationary probability of the idle state of a two-state chain.

    Solves the balance equation ``pi0 * p01 = (1 - pi0) * p10``.
    """
    _check_unit("p10", p10)
    _check_unit("p01", p01)
    total = p10 + p01
    if total <= 0.0:
        raise DegenerateChainError("p10 + p01 must be positive for a unique stationary distribution")
    return p10 / total


def expected_reward(band: BandModel) -> float:
    """Stationary mean reward of a band."""
    q = band.idle_probability()
    return q * band.r_idle + (1.0 - q) * band.r_busy


def sample_initial_state(band: BandModel, rng: np.random.Generator) -> BandState:
    """Draw the state at t = 0.

    One uniform is consumed regardless of ``init_mode`` so that the random
    stream layout does not depend on it.
    """
    u = rng.random()
    if band.init_mode is InitMode.FIXED_IDLE:
        return IDLE
    if band.init_mode is InitMode.FIXED_BUSY:
        return BUSY
    return BandState(not (u < band.idle_probability()))


def transition(band: BandModel, state: BandState, u: float) -> BandState:
    """Next state given a uniform draw ``u`` in [0, 1)."""
    if band.kind is BandKind.BERNOULLI:
        return BandState(not (u < band.p_idle))
    if state.occupied:
        return IDLE if u < band.p10 else BUSY
    return BUSY if u < band.p01 else IDLE


def step(band: BandModel, state: BandState, rng: np.random.Generator) -> tuple[BandState, float]:
    """Advance one band by one time step and return ``(new_state, reward)``."""
    new = transition(band, state, rng.random())
    return new, band.reward(new)
