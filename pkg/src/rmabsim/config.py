"""YAML configuration documents.

Schema (all keys at the top level are required unless marked optional)::

    bands:                      # one mapping per band, N >= 1
      - kind: markov            # markov | bernoulli
        p10: 0.1                # markov only: busy -> idle per step
        p01: 0.2                # markov only: idle -> busy per step
        r_idle: 1.0             # reward when idle, in [0, 1]
        r_busy: 0.1             # reward when occupied, in [0, 1]
        init: stationary        # optional: stationary | idle | busy
      - kind: bernoulli
        p_idle: 0.3             # bernoulli only: P(idle) per step
        r_idle: 1.0
        r_busy: 0.1
    policy:
      kind: proposed            # proposed | ucb1 | dsee | oracle
      dsee_d: 10                # dsee only: number >= 0 or "log" for D(t) = ln t
      oracle_arm: 2             # oracle only, optional: 0-based arm; default best arm
    horizon: 100000             # >= number of bands
    runs: 1000
    seed: 2024                  # unsigned 64-bit
    per_decade: 200             # optional: log-grid density
    record_choices: false       # optional: keep per-step choices
    max_sensing_times: 4096     # optional: sensing instants kept per arm

Arms are numbered from 0.
"""
from __future__ import annotations

import math
from typing import Any

import yaml

from .env import BandKind, BandModel, InitMode
from .policies import LOG_TIME, PolicyConfig, PolicyKind
from .sim import SimulationConfig

__all__ = ["ConfigError", "parse_config", "config_from_dict", "config_to_dict", "dump_config"]


class ConfigError(ValueError):
    """Invalid configuration document; the message names the offending field."""


_BAND_FIELDS = {
    BandKind.MARKOV: ({"kind", "p10", "p01", "r_idle", "r_busy"}, {"init"}),
    BandKind.BERNOULLI: ({"kind", "p_idle", "r_idle", "r_busy"}, {"init"}),
}
_TOP_REQUIRED = {"bands", "policy", "horizon", "runs", "seed"}
_TOP_OPTIONAL = {"per_decade", "record_choices", "max_sensing_times"}


def _check_keys(where: str, doc: Any, required: set[str], optional: set[str]) -> None:
    if not isinstance(doc, dict):
        raise ConfigError(f"{where}: expected a mapping, got {type(doc).__name__}")
    unknown = sorted(set(doc) - required - optional)
    if unknown:
        raise ConfigError(f"{where}.{unknown[0]}: unknown field" if where else f"{unknown[0]}: unknown field")
    missing = sorted(required - set(doc))
    if missing:
        raise ConfigError(f"{where}.{missing[0]}: missing required field" if where else f"{missing[0]}: missing required field")


def _prob(where: str, value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number in [0, 1], got {value!r}")
    value = float(value)
    if math.isnan(value) or not 0.0 <= value <= 1.0:
        raise ConfigError(f"{where}: {value!r} is outside [0, 1]")
    return value


def _int(where: str, value: Any, low: int, high: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where}: expected an integer, got {value!r}")
    if value < low or (high is not None and value > high):
        bound = f">= {low}" if high is None else f"in [{low}, {high}]"
        raise ConfigError(f"{where}: {value} must be {bound}")
    return value


def _band(i: int, doc: Any) -> BandModel:
    where = f"bands[{i}]"
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ConfigError(f"{where}.kind: missing required field")
    try:
        kind = BandKind(doc["kind"])
    except ValueError:
        raise ConfigError(f"{where}.kind: {doc['kind']!r} is not one of markov, bernoulli") from None
    required, optional = _BAND_FIELDS[kind]
    _check_keys(where, doc, required, optional)
    vals = {k: _prob(f"{where}.{k}", doc[k]) for k in required - {"kind"}}
    init = doc.get("init", InitMode.STATIONARY.value)
    try:
        init = InitMode(init)
    except ValueError:
        raise ConfigError(f"{where}.init: {init!r} is not one of stationary, idle, busy") from None
    if kind is BandKind.MARKOV and init is InitMode.STATIONARY and vals["p10"] + vals["p01"] == 0.0:
        raise ConfigError(f"{where}: p10 + p01 must be positive for a stationary initial state")
    return BandModel(kind, init_mode=init, **vals)


def _policy(doc: Any, n_arms: int) -> PolicyConfig:
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ConfigError("policy.kind: missing required field")
    try:
        kind = PolicyKind(doc["kind"])
    except ValueError:
        raise ConfigError(f"policy.kind: {doc['kind']!r} is not one of proposed, ucb1, dsee, oracle") from None
    optional = {"dsee_d"} if kind is PolicyKind.DSEE else {"oracle_arm"} if kind is PolicyKind.ORACLE else set()
    _check_keys("policy", doc, {"kind"}, optional)
    d: float | str = 10.0
    if "dsee_d" in doc:
        d = doc["dsee_d"]
        if d != LOG_TIME:
            if isinstance(d, bool) or not isinstance(d, (int, float)) or not d >= 0:
                raise ConfigError(f"policy.dsee_d: {d!r} must be a number >= 0 or {LOG_TIME!r}")
            d = float(d)
    arm = doc.get("oracle_arm")
    if arm is not None:
        arm = _int("policy.oracle_arm", arm, 0, n_arms - 1)
    return PolicyConfig(kind, dsee_d=d, oracle_arm=arm)


def config_from_dict(doc: Any) -> SimulationConfig:
    _check_keys("", doc, _TOP_REQUIRED, _TOP_OPTIONAL)
    if not isinstance(doc["bands"], list) or not doc["bands"]:
        raise ConfigError("bands: expected a non-empty list")
    bands = tuple(_band(i, b) for i, b in enumerate(doc["bands"]))
    n = len(bands)
    policy = _policy(doc["policy"], n)
    horizon = _int("horizon", doc["horizon"], 1)
    if horizon < n:
        raise ConfigError(f"horizon: {horizon} must be >= number of bands ({n})")
    extra: dict[str, Any] = {}
    if "per_decade" in doc:
        extra["per_decade"] = _int("per_decade", doc["per_decade"], 1)
    if "max_sensing_times" in doc:
        extra["max_sensing_times"] = _int("max_sensing_times", doc["max_sensing_times"], 0)
    if "record_choices" in doc:
        rc = doc["record_choices"]
        if rc is not None and not isinstance(rc, bool):
            raise ConfigError(f"record_choices: expected true, false or null, got {rc!r}")
        extra["record_choices"] = rc
    return SimulationConfig(
        bands=bands,
        policy=policy,
        horizon=horizon,
        runs=_int("runs", doc["runs"], 1),
        master_seed=_int("seed", doc["seed"], 0, 2**64 - 1),
        **extra,
    )


def parse_config(text: str) -> SimulationConfig:
    """Parse and validate a YAML (or JSON) configuration document."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"not a valid YAML document: {exc}") from None
    return config_from_dict(doc)


def _band_dict(b: BandModel) -> dict[str, Any]:
    d: dict[str, Any] = {"kind": b.kind.value}
    if b.kind is BandKind.MARKOV:
        d.update(p10=b.p10, p01=b.p01)
    else:
        d["p_idle"] = b.p_idle
    d.update(r_idle=b.r_idle, r_busy=b.r_busy, init=b.init_mode.value)
    return d


def config_to_dict(config: SimulationConfig) -> dict[str, Any]:
    pol: dict[str, Any] = {"kind": config.policy.kind.value}
    if config.policy.kind is PolicyKind.DSEE:
        pol["dsee_d"] = config.policy.dsee_d
    if config.policy.kind is PolicyKind.ORACLE and config.policy.oracle_arm is not None:
        pol["oracle_arm"] = config.policy.oracle_arm
    return {
        "bands": [_band_dict(b) for b in config.bands],
        "policy": pol,
        "horizon": config.horizon,
        "runs": config.runs,
        "seed": config.master_seed,
        "per_decade": config.per_decade,
        "record_choices": config.record_choices,
        "max_sensing_times": config.max_sensing_times,
    }


def dump_config(config: SimulationConfig) -> str:
    return yaml.safe_dump(config_to_dict(config), sort_keys=False)
