"""Restless multi-armed bandit sensing policies and a Monte Carlo harness for weak regret."""

__version__ = "0.1.0"

from .env import BandModel, BandState, expected_reward, stationary_idle_prob
from .policies import PolicyConfig, PolicyKind, PolicyState, confidence_term
from .regret import GapProfile, RegretTrace, empirical_slope, theoretical_slope, weak_regret
from .sim import EpisodeLog, SimulationConfig, interval_growth_stats, monte_carlo, run_episode

__all__ = [
    "BandModel",
    "BandState",
    "EpisodeLog",
    "GapProfile",
    "PolicyConfig",
    "PolicyKind",
    "PolicyState",
    "RegretTrace",
    "SimulationConfig",
    "confidence_term",
    "empirical_slope",
    "expected_reward",
    "interval_growth_stats",
    "monte_carlo",
    "run_episode",
    "stationary_idle_prob",
    "theoretical_slope",
    "weak_regret",
]
