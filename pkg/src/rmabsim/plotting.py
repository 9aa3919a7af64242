"""Figures written next to the CSV outputs.

Uses the object-oriented matplotlib API with the Agg canvas, so nothing
touches pyplot's global state and no display is needed.
"""
from __future__ import annotations

import math
from pathlib import Path
from typing import Mapping

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .regret import RegretTrace

GOLDEN = (math.sqrt(5) - 1.0) / 2.0


def pretty_figure(width: float = 7.0, height: float | None = None) -> tuple[Figure, object]:
    fig = Figure(figsize=(width, height or width * GOLDEN), facecolor="w")
    FigureCanvasAgg(fig)
    ax = fig.add_subplot(111)
    ax.grid(True, which="both", alpha=0.3)
    ax.tick_params(labelsize=11)
    return fig, ax


def _save(fig: Figure, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    return path


def plot_normalized_regret(traces: Mapping[str, RegretTrace], path: Path, title: str = "") -> Path:
    fig, ax = pretty_figure()
    for label, tr in traces.items():
        ok = tr.times >= 2
        ax.plot(tr.times[ok], tr.normalized[ok], label=label, lw=1.6)
    ax.set_xscale("log")
    ax.set_xlabel("t", fontsize=13)
    ax.set_ylabel("regret / ln t", fontsize=13)
    if title:
        ax.set_title(title, fontsize=13)
    ax.legend(frameon=False)
    return _save(fig, path)


def plot_slope(times: np.ndarray, empirical: np.ndarray, theoretical: np.ndarray, path: Path) -> Path:
    fig, ax = pretty_figure()
    ax.loglog(times, empirical, label="simulated", lw=1.6)
    ax.loglog(times, theoretical, "--", label="sum(1/gap) / t", lw=1.6)
    ax.set_xlabel("t", fontsize=13)
    ax.set_ylabel("d regret / dt", fontsize=13)
    ax.legend(frameon=False)
    return _save(fig, path)
