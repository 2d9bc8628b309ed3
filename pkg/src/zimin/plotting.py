"""Figures for the report subcommands, rendered to files with the Agg backend."""
from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_threshold(est, path, reference: float | None = None):
    """Containment probability against length, with exact 95% intervals."""
    fig, ax = plt.subplots(figsize=(6, 4))
    lo = [p - c[0] for p, c in zip(est.probs, est.ci)]
    hi = [c[1] - p for p, c in zip(est.probs, est.ci)]
    ax.errorbar(est.lengths, est.probs, yerr=[lo, hi], fmt="o-", ms=3, capsize=2)
    ax.axhline(0.5, color="grey", lw=0.8, ls=":")
    if reference is not None:
        ax.axvline(reference, color="tab:red", lw=0.8, ls="--", label=f"q^(2^(n-1)-(n+1)/2) = {reference:.4g}")
        ax.legend(loc="lower right", fontsize=8)
    ax.set_xlabel("word length")
    ax.set_ylabel(f"P[contains Z_{est.n}]")
    ax.set_title(f"random words, q={est.q}, {est.trials} trials per length")
    ax.set_ylim(-0.02, 1.02)
    return _save(fig, path)


def plot_counts(counts, n: int, q: int, path):
    """``m(n,q,l)`` on a log scale; zero counts are left out."""
    fig, ax = plt.subplots(figsize=(6, 4))
    pts = [(L, c) for L, c in enumerate(counts) if c > 0]
    ax.semilogy([p[0] for p in pts], [p[1] for p in pts], "o-", ms=3)
    ax.set_xlabel("length")
    ax.set_ylabel(f"Z_{n}-free words")
    ax.set_title(f"m({n},{q},l)")
    return _save(fig, path)


def plot_bounds(rows, path):
    """log10 of each formula against q; ``rows`` holds ``(name, q, BoundValue)``."""
    fig, ax = plt.subplots(figsize=(6, 4))
    series: dict = {}
    for name, q, v in rows:
        lg = v.log2()
        if math.isfinite(lg):
            series.setdefault(name, []).append((q, lg * math.log10(2)))
    for name, pts in series.items():
        if len(pts) > 0:
            ax.plot([p[0] for p in pts], [p[1] for p in pts], "o-", ms=3, label=name)
    ax.set_xlabel("q")
    ax.set_ylabel("log10 value")
    ax.legend(fontsize=7)
    return _save(fig, path)
