"""Figure rendering for the CLI report paths (matplotlib, Agg backend)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def save_vep_curve(path, T, probability, error=None, title=None):
    """Log-log excitation probability versus switching timescale."""
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    T = np.asarray(T, dtype=float)
    p = np.asarray(probability, dtype=float)
    pos = p > 0
    ax.loglog(T[pos], p[pos], color="tab:blue", lw=1.5)
    if error is not None:
        err = np.asarray(error, dtype=float)
        lo = np.clip(p - err, 1e-300, None)
        ax.fill_between(T[pos], lo[pos], (p + err)[pos], alpha=0.25, color="tab:blue")
    ax.set_xlabel(r"switching timescale $T$ [eV$^{-1}$]")
    ax.set_ylabel("excitation probability")
    if title:
        ax.set_title(title, fontsize=9)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_boost_comparison(path, rest_value, boosted_value, boosted_sigma, v):
    """Rest-frame value vs boosted Monte Carlo estimate with 3-sigma band."""
    fig, ax = plt.subplots(figsize=(4.2, 3.2))
    ax.axhline(rest_value, color="k", lw=1.2, label="rest frame")
    ax.errorbar(
        [0.0],
        [boosted_value],
        yerr=[3.0 * boosted_sigma],
        fmt="o",
        color="tab:red",
        capsize=4,
        label=f"boosted (v = {v:g}), 3 s.e.",
    )
    ax.set_xticks([])
    ax.set_ylabel("excitation probability")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
