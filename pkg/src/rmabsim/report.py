"""CSV, manifest and gap-report writers, and scenario orchestration."""
from __future__ import annotations

import csv
import io
import json
import logging
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import __version__
from .config import config_to_dict
from .regret import (
    GapProfile,
    RegretTrace,
    empirical_slope,
    interval_growth_factor,
    sensing_count_bound,
    theoretical_slope,
)
from .scenarios import Scenario
from .sim import MonteCarloResult, SimulationConfig, monte_carlo

logger = logging.getLogger(__name__)

REGRET_HEADER = ("t", "mean_regret", "std_regret", "normalized_regret")
SLOPE_HEADER = ("t", "empirical_slope", "theoretical_slope")
GAP_HEADER = ("arm", "kind", "idle_prob", "mu", "gap", "growth_factor", "count_bound")


def fmt(x: float) -> str:
    """Shortest round-trip decimal; empty for NaN (undefined entries)."""
    x = float(x)
    return "" if math.isnan(x) else repr(x)


def _csv_text(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def regret_csv(trace: RegretTrace) -> str:
    rows = (
        (str(int(t)), fmt(m), fmt(s), fmt(z))
        for t, m, s, z in zip(trace.times, trace.mean_regret, trace.std_regret, trace.normalized)
    )
    return _csv_text(REGRET_HEADER, rows)


def slope_csv(trace: RegretTrace, gaps: GapProfile, window: float = 1.5) -> str:
    emp = empirical_slope(trace, window)
    rows = ((str(int(t)), fmt(e), fmt(theoretical_slope(int(t), gaps))) for t, e in zip(trace.times, emp))
    return _csv_text(SLOPE_HEADER, rows)


def read_csv(path: Path) -> dict[str, np.ndarray]:
    """Columns of a CSV written here; empty cells come back as NaN."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    return {
        name: np.array([float(r[i]) if r[i] else math.nan for r in body])
        for i, name in enumerate(header)
    }


def emit_gap_report(config: SimulationConfig) -> str:
    """Per-band stationary statistics, gaps, growth factors and count bounds."""
    gaps = config.gaps
    rows = []
    for n, band in enumerate(config.bands):
        gap = gaps.gaps[n]
        growth = interval_growth_factor(gap)
        bound = sensing_count_bound(config.horizon, n + 1, growth) if gap > 0 else math.nan
        rows.append(
            (str(n), band.kind.value, fmt(band.idle_probability()), fmt(gaps.mu[n]), fmt(gap), fmt(growth), fmt(bound))
        )
    return _csv_text(GAP_HEADER, rows)


def _write(path: Path, text: str) -> Path:
    with open(path, "w", newline="") as fh:
        fh.write(text)
    return path


def manifest(name: str, configs: Sequence[SimulationConfig], files: Sequence[str]) -> dict:
    return {
        "artifact": "rmabsim",
        "version": __version__,
        "scenario": name,
        "configs": [config_to_dict(c) for c in configs],
        "files": list(files),
    }


def write_results(
    name: str,
    results: Sequence[MonteCarloResult],
    out_dir: Path,
    slope: bool = False,
    plot: bool = True,
) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for res in results:
        label = res.config.policy.label
        written.append(_write(out_dir / f"regret_{label}.csv", regret_csv(res.trace)))
        if slope:
            written.append(_write(out_dir / f"slope_{label}.csv", slope_csv(res.trace, res.config.gaps)))
    if plot:
        from .plotting import plot_normalized_regret, plot_slope

        traces = {r.config.policy.label: r.trace for r in results}
        written.append(plot_normalized_regret(traces, out_dir / "regret.png", title=name))
        if slope:
            for res in results:
                tr = res.trace
                theo = np.array([theoretical_slope(int(t), res.config.gaps) for t in tr.times])
                written.append(plot_slope(tr.times, empirical_slope(tr), theo, out_dir / f"slope_{res.config.policy.label}.png"))
    files = [p.name for p in written]
    mpath = out_dir / "manifest.json"
    _write(mpath, json.dumps(manifest(name, [r.config for r in results], files), indent=2) + "\n")
    written.append(mpath)
    return written


def run_scenario(
    scenario: Scenario | SimulationConfig,
    out_dir: Path,
    runs: int | None = None,
    horizon: int | None = None,
    seed: int | None = None,
    plot: bool = True,
    workers: int = 1,
) -> list[Path]:
    """Simulate a preset (or a single config) and write its artifacts."""
    if isinstance(scenario, SimulationConfig):
        scenario = Scenario("custom", (scenario,))
    scenario = scenario.with_overrides(runs=runs, horizon=horizon, seed=seed)
    results = []
    for cfg in scenario.configs:
        logger.info("%s: %s, %d runs x %d steps", scenario.name, cfg.policy.label, cfg.runs, cfg.horizon)
        results.append(monte_carlo(cfg, workers=workers))
    return write_results(scenario.name, results, out_dir, slope=scenario.slope, plot=plot)
