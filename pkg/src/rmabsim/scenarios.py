"""Built-in experiment presets (five-band sensing scenarios)."""
from __future__ import annotations

from dataclasses import dataclass, replace

from .env import BandModel
from .policies import LOG_TIME, PolicyConfig, PolicyKind
from .sim import SimulationConfig

__all__ = ["Scenario", "SCENARIOS", "get_scenario", "MARKOV_P10", "MARKOV_P01", "BERNOULLI_P_IDLE"]

MARKOV_P10 = (0.1, 0.1, 0.5, 0.1, 0.1)
MARKOV_P01 = (0.2, 0.3, 0.1, 0.4, 0.5)
BERNOULLI_P_IDLE = (0.3, 0.36, 0.17, 0.25, 0.33)
R_IDLE, R_BUSY = 1.0, 0.1

DEFAULT_HORIZON = 100_000
DEFAULT_RUNS = 1000
DEFAULT_SEED = 2024


def markov_bands() -> tuple[BandModel, ...]:
    return tuple(BandModel.markov(a, b, R_IDLE, R_BUSY) for a, b in zip(MARKOV_P10, MARKOV_P01))


def bernoulli_bands() -> tuple[BandModel, ...]:
    return tuple(BandModel.bernoulli(p, R_IDLE, R_BUSY) for p in BERNOULLI_P_IDLE)


@dataclass(frozen=True)
class Scenario:
    name: str
    configs: tuple[SimulationConfig, ...]
    slope: bool = False

    def with_overrides(self, runs: int | None = None, horizon: int | None = None, seed: int | None = None) -> Scenario:
        changes = {
            k: v for k, v in (("runs", runs), ("horizon", horizon), ("master_seed", seed)) if v is not None
        }
        return replace(self, configs=tuple(replace(c, **changes) for c in self.configs))


def _configs(bands, policies, runs: int) -> tuple[SimulationConfig, ...]:
    return tuple(
        SimulationConfig(bands, p, horizon=DEFAULT_HORIZON, runs=runs, master_seed=DEFAULT_SEED) for p in policies
    )


SCENARIOS: dict[str, Scenario] = {
    "fig2_markov_slope": Scenario(
        "fig2_markov_slope",
        _configs(markov_bands(), [PolicyConfig(PolicyKind.PROPOSED)], runs=2000),
        slope=True,
    ),
    "fig3_markov_regret": Scenario(
        "fig3_markov_regret",
        _configs(
            markov_bands(),
            [PolicyConfig(PolicyKind.PROPOSED), PolicyConfig(PolicyKind.UCB1), PolicyConfig(PolicyKind.DSEE, dsee_d=10.0)],
            runs=DEFAULT_RUNS,
        ),
    ),
    "fig4_bernoulli_regret": Scenario(
        "fig4_bernoulli_regret",
        _configs(
            bernoulli_bands(),
            [PolicyConfig(PolicyKind.PROPOSED), PolicyConfig(PolicyKind.UCB1), PolicyConfig(PolicyKind.DSEE, dsee_d=LOG_TIME)],
            runs=DEFAULT_RUNS,
        ),
    ),
}


def get_scenario(name: str) -> Scenario:
    try:
        return SCENARIOS[name]
    except KeyError:
        raise KeyError(f"unknown scenario {name!r}; choose from {', '.join(SCENARIOS)}") from None
