"""Figures rendered next to the text reports (PNG, non-interactive backend)."""

from __future__ import annotations

import os
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .report import RunReport


def _save(fig, out_dir: str, name: str) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_rates(rep: RunReport, out_dir: str) -> str:
    names = [n for n, (_, t) in rep.counts.items() if t]
    vals = [rep.rate(n) for n in names]
    fig, ax = plt.subplots(figsize=(5, 3.2))
    bars = ax.bar(names, vals, color="#4c72b0")
    for b, n in zip(bars, names):
        h, t = rep.counts[n]
        ax.annotate(f"{h}/{t}", (b.get_x() + b.get_width() / 2, b.get_height()),
                    ha="center", va="bottom", fontsize=8)
    ax.set_ylim(0, 1.1)
    ax.set_ylabel("rate")
    ax.set_title(rep.mode)
    return _save(fig, out_dir, "rates.png")


def plot_outcome_by_errors(rep: RunReport, out_dir: str, positive: str) -> str:
    """Fraction of trials whose verdict equals ``positive``, per planted error count."""
    by = defaultdict(lambda: [0, 0])
    for planted, verdict in zip(rep.column("planted"), rep.column("verdict")):
        cell = by[int(planted)]
        cell[0] += str(verdict) == positive
        cell[1] += 1
    xs = sorted(by)
    ys = [by[x][0] / by[x][1] for x in xs]
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.plot(xs, ys, "o-", color="#dd8452")
    if "e" in rep.params:
        ax.axvline(float(rep.params["e"]), ls="--", color="grey", lw=1, label="e")
    if "threshold" in rep.results:
        ax.axvline(float(rep.results["threshold"]), ls=":", color="black", lw=1, label="threshold")
    if ax.get_legend_handles_labels()[0]:
        ax.legend(fontsize=8)
    ax.set_ylim(-0.05, 1.05)
    ax.set_xlabel("planted errors")
    ax.set_ylabel(f"fraction {positive}")
    return _save(fig, out_dir, "outcome_by_errors.png")


def plot_bench(rep: RunReport, out_dir: str) -> str:
    series = defaultdict(list)
    for suite, case, n, sec in rep.trials:
        series[f"{suite}/{case}"].append((int(n), float(sec)))
    fig, ax = plt.subplots(figsize=(5, 3.2))
    for label, pts in sorted(series.items()):
        pts.sort()
        ax.plot([p[0] for p in pts], [p[1] for p in pts], "o-", label=label)
    ax.set_xlabel("n")
    ax.set_ylabel("seconds per word")
    ax.set_yscale("log")
    ax.legend(fontsize=8)
    return _save(fig, out_dir, "timing.png")


def render_figures(rep: RunReport, out_dir: str) -> list[str]:
    if rep.mode == "bench":
        return [plot_bench(rep, out_dir)]
    paths = [plot_rates(rep, out_dir)]
    if rep.trials and "planted" in rep.columns:
        positive = "ACCEPT" if rep.mode == "experiment-detect" else "AT_MOST_E"
        paths.append(plot_outcome_by_errors(rep, out_dir, positive))
    return paths
