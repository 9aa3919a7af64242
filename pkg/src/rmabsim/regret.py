"""Weak regret and the analytic quantities of the logarithmic-regret argument.

Regret is measured against the best single arm and estimated as
pseudo-regret: sum over arms of gap * (times sensed).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

__all__ = [
    "GapProfile",
    "RegretTrace",
    "weak_regret",
    "theoretical_slope",
    "sensing_count_bound",
    "interval_growth_factor",
    "empirical_slope",
    "normalize_regret",
    "log_grid",
]


@dataclass(frozen=True)
class GapProfile:
    mu: tuple[float, ...]
    mu_star: float = field(init=False)
    gaps: tuple[float, ...] = field(init=False)

    def __post_init__(self) -> None:
        mu = tuple(float(m) for m in self.mu)
        if not mu:
            raise ValueError("need at least one arm")
        star = max(mu)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "mu_star", star)
        object.__setattr__(self, "gaps", tuple(star - m for m in mu))

    @property
    def best_arm(self) -> int:
        """Lowest-index arm attaining the maximal mean."""
        return self.mu.index(self.mu_star)

    @property
    def suboptimal_arms(self) -> list[int]:
        return [n for n, g in enumerate(self.gaps) if g > 0.0]


@dataclass
class RegretTrace:
    times: np.ndarray
    mean_regret: np.ndarray
    std_regret: np.ndarray
    normalized: np.ndarray = None
    runs: int = 1

    def __post_init__(self) -> None:
        self.times = np.asarray(self.times, dtype=np.int64)
        self.mean_regret = np.asarray(self.mean_regret, dtype=float)
        self.std_regret = np.asarray(self.std_regret, dtype=float)
        if self.normalized is None:
            self.normalized = normalize_regret(self)
        if not (len(self.times) == len(self.mean_regret) == len(self.std_regret) == len(self.normalized)):
            raise ValueError("trace series must have equal lengths")

    def at(self, t: int) -> int:
        """Index of time ``t`` in the trace."""
        idx = int(np.searchsorted(self.times, t))
        if idx >= len(self.times) or self.times[idx] != t:
            raise KeyError(f"time {t} not on the trace grid")
        return idx


def weak_regret(counts: Sequence[int], gaps: GapProfile, t: int) -> float:
    """Pseudo-regret ``t * mu_star - sum(mu_n * T_n)`` for one count vector."""
    if len(counts) != len(gaps.mu):
        raise ValueError(f"got {len(counts)} counts for {len(gaps.mu)} arms")
    if sum(counts) != t:
        raise ValueError(f"counts sum to {sum(counts)}, expected t={t}")
    return math.fsum(g * c for g, c in zip(gaps.gaps, counts))


def regret_matrix(counts: np.ndarray, gaps: GapProfile) -> np.ndarray:
    """Vectorised :func:`weak_regret` over the last axis of a count array."""
    return np.asarray(counts, dtype=float) @ np.asarray(gaps.gaps)


def theoretical_slope(t: float, gaps: GapProfile) -> float:
    """Asymptotic regret slope ``sum(1 / Delta_n) / t`` over arms with positive gap."""
    if t < 1:
        raise ValueError("t must be >= 1")
    return math.fsum(1.0 / g for g in gaps.gaps if g > 0.0) / t


def sensing_count_bound(t: float, z1: float, growth: float) -> float:
    """Upper bound on how often an arm first sensed at ``z1`` is sensed by ``t``.

    ``growth`` is the factor by which consecutive sensing instants grow.
    """
    if growth <= 1.0:
        raise ValueError(f"growth factor must exceed 1, got {growth}")
    if not 1 <= z1 <= t:
        raise ValueError(f"need 1 <= z1 <= t, got z1={z1}, t={t}")
    return (math.log(t) - math.log(z1)) / math.log(growth) + 1.0


def interval_growth_factor(gap: float) -> float:
    """exp(gap**2)."""
    if gap < 0:
        raise ValueError("gap must be >= 0")
    return math.exp(gap * gap)


def normalize_regret(trace: RegretTrace) -> np.ndarray:
    """mean_regret / ln t; NaN where t < 2."""
    times = np.asarray(trace.times, dtype=float)
    out = np.full(len(times), np.nan)
    ok = times >= 2
    out[ok] = np.asarray(trace.mean_regret)[ok] / np.log(times[ok])
    return out


def _raw_slope(times: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Second-order central differences on a non-uniform grid, one-sided at the ends.

    Written as the spacing-weighted mean of the neighbouring one-sided
    differences, so a constant series gives exactly zero.
    """
    h = np.diff(times)
    d = np.diff(values) / h
    out = np.empty(len(times))
    out[0], out[-1] = d[0], d[-1]
    hm, hp = h[:-1], h[1:]
    out[1:-1] = (hp * d[:-1] + hm * d[1:]) / (hm + hp)
    return out


def empirical_slope(trace: RegretTrace, window: float = 1.5) -> np.ndarray:
    """Finite-difference slope of the mean regret, smoothed in log-time.

    Each raw slope is replaced by the plain average of raw slopes with
    times inside ``[t / sqrt(window), t * sqrt(window)]``.  Near the ends of
    the trace the window shrinks symmetrically (in log t) so it never
    becomes one-sided.  ``window <= 1`` disables smoothing.
    """
    times = np.asarray(trace.times, dtype=float)
    if len(times) < 3:
        raise ValueError("need at least 3 trace points to estimate a slope")
    raw = _raw_slope(times, np.asarray(trace.mean_regret, dtype=float))
    if window <= 1.0:
        return raw
    log_t = np.log(times)
    half = np.minimum.reduce([np.full(len(times), 0.5 * math.log(window)), log_t - log_t[0], log_t[-1] - log_t])
    eps = 1e-12
    lo = np.searchsorted(log_t, log_t - half - eps, side="left")
    hi = np.searchsorted(log_t, log_t + half + eps, side="right")
    return np.array([raw[a:b].mean() for a, b in zip(lo, hi)])


def log_grid(horizon: int, n_arms: int = 1, per_decade: int = 200) -> np.ndarray:
    """Recording times: 1..n_arms exactly, ``round(10**(k / per_decade))`` and ``horizon``.

    Grid points below the horizon do not depend on it, so the grid of a
    shorter run is a prefix of the grid of a longer one (up to the endpoint).
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    kmax = int(math.floor(math.log10(horizon) * per_decade)) + 1
    pts = np.rint(10.0 ** (np.arange(kmax + 1) / per_decade)).astype(np.int64)
    head = np.arange(1, min(n_arms, horizon) + 1, dtype=np.int64)
    grid = np.unique(np.concatenate([head, pts, [horizon]]))
    return grid[grid <= horizon]
