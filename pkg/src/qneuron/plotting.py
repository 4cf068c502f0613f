"""Histogram-style figures rendered next to the CLI's JSON/CSV artifacts."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["save_outcome_figure", "save_mode_figure", "save_comparison_figure"]

_BAR_COLOR = "#3b6ea5"
_REF_COLOR = "#b34a4a"


def save_outcome_figure(path, probabilities, counts=None, title: str = "") -> None:
    """Bar chart of the two measurement outcomes; shot counts annotate the bars."""
    labels = ["0", "1"]
    fig, ax = plt.subplots(figsize=(4.0, 3.0))
    bars = ax.bar(labels, probabilities, color=_BAR_COLOR, width=0.5)
    if counts is not None:
        for bar, count in zip(bars, counts):
            ax.annotate(
                str(count),
                (bar.get_x() + bar.get_width() / 2, bar.get_height()),
                ha="center",
                va="bottom",
                fontsize=8,
            )
    ax.set_xlabel("outcome")
    ax.set_ylabel("probability")
    ax.set_ylim(0, 1.05)
    if title:
        ax.set_title(title, fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_mode_figure(path, probabilities, title: str = "") -> None:
    """Per-qmode single-photon probabilities at the detectors."""
    probs = np.asarray(probabilities, dtype=float)
    fig, ax = plt.subplots(figsize=(max(4.0, 0.6 * len(probs)), 3.0))
    ax.bar([str(k) for k in range(len(probs))], probs, color=_BAR_COLOR, width=0.6)
    ax.set_xlabel("qmode")
    ax.set_ylabel("single-photon probability")
    ax.set_ylim(0, 1.05)
    if title:
        ax.set_title(title, fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_comparison_figure(path, reports) -> None:
    """Grouped bars: analytic value plus each backend, one group per pair."""
    if not isinstance(reports, list):
        reports = [reports]
    backend_names = sorted({name for rep in reports for name in rep["results"]})
    series = ["analytic"] + backend_names
    n_groups = len(reports)
    width = 0.8 / len(series)
    offsets = np.arange(n_groups)
    fig, ax = plt.subplots(figsize=(max(4.0, 1.6 * n_groups), 3.2))
    for i, name in enumerate(series):
        if name == "analytic":
            values = [rep["analytic"] for rep in reports]
            color = _REF_COLOR
        else:
            values = [rep["results"][name]["probability"] for rep in reports]
            color = None
        ax.bar(offsets + i * width, values, width=width, label=name, color=color)
    ax.set_xticks(offsets + 0.4 - width / 2)
    ax.set_xticklabels([f"pair {i} (N={rep['dimension']})" for i, rep in enumerate(reports)])
    ax.set_ylabel("output probability")
    ax.set_ylim(0, 1.05)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
