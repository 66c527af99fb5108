"""Companion figures rendered next to the delimited CLI outputs."""

from __future__ import annotations

import numpy as np

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

__all__ = ["save_curves_figure", "save_bryant_figure"]


def save_curves_figure(path: str, rho, A, V, dQ, bulk, residual, title: str = "") -> None:
    """Two-panel summary: the functionals and the identity balance."""
    rho = np.asarray(rho, dtype=float)
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.6, 4.2))
    ax1.plot(rho, A, label="A", color="tab:blue")
    if np.any(np.isfinite(V)):
        ax1.plot(rho, V, label="V", color="tab:orange")
    ax1.set_xscale("log")
    ax1.set_xlabel("level rho")
    ax1.set_ylabel("functional value")
    ax1.legend(loc="best", fontsize=8)
    ax1.set_title("area and volume functionals")

    ax2.plot(rho, dQ, label="dQ", color="tab:green")
    ax2.plot(rho, bulk, label="bulk", color="tab:red", linestyle="--")
    ax2.plot(rho, residual, label="residual", color="tab:gray", linestyle=":")
    ax2.set_xscale("log")
    ax2.set_xlabel("level rho")
    ax2.legend(loc="best", fontsize=8)
    ax2.set_title("derivative identity balance")

    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)


def save_bryant_figure(path: str, report) -> None:
    """Bracket values against probe radius with the predicted limit line."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.plot(report.probes, report.bracket_values, marker="o", color="tab:blue",
            label="bracket")
    ax.axhline(report.predicted_limit, color="tab:red", linestyle="--",
               label=f"predicted limit {report.predicted_limit:.6g}")
    ax.axhline(report.fitted_limit, color="tab:green", linestyle=":",
               label=f"fitted limit {report.fitted_limit:.6g}")
    ax.set_xscale("log")
    ax.set_xlabel("probe radius")
    ax.set_ylabel("bracket value")
    ax.set_title(f"coupling bracket at large radius, n = {report.n}")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
