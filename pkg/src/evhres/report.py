"""Figure rendering for pipeline artifacts.

Every figure is written straight to file; nothing is shown interactively.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .demand import DemandCurve, EvClassId
from .mcdm import RankedDesign
from .verify import VerificationReport

_CRITERIA_LABELS = ("EmR", "ReG", "EcF", "SS", "ESA")


def render_demand_figure(
    curve: DemandCurve,
    path: str | Path,
    class_curves: dict[EvClassId, DemandCurve] | None = None,
) -> None:
    """Daily station demand, optionally stacked by vehicle class."""
    hours = np.arange(curve.p.size)
    fig, ax = plt.subplots(figsize=(9, 5))
    if class_curves:
        bottom = np.zeros_like(curve.p)
        for cid, c in class_curves.items():
            ax.bar(hours, c.p, bottom=bottom, width=0.9, label=cid.value)
            bottom = bottom + c.p
    else:
        ax.bar(hours, curve.p, width=0.9, color="tab:blue")
    ax.plot(hours, curve.p, color="black", linewidth=1.2, drawstyle="steps-mid")
    ax.set_xlabel("Hour of day")
    ax.set_ylabel("Demand (kW)")
    ax.set_title(f"Charging station demand (peak {curve.peak_kw:.0f} kW)")
    if class_curves:
        ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_ranking_figure(designs: list[RankedDesign], path: str | Path, top_n: int = 12) -> None:
    """Grouped bars of the five criteria plus the merit figure per design."""
    shown = designs[:top_n]
    n = len(shown)
    fig, ax = plt.subplots(figsize=(max(8, 1.1 * n), 5.5))
    x = np.arange(n)
    width = 0.13
    for j, label in enumerate(_CRITERIA_LABELS):
        values = [d.scores.as_tuple()[j] * 100 for d in shown]
        ax.bar(x + (j - 2) * width, values, width, label=label, alpha=0.85)
    ax.plot(x, [d.cp * 100 for d in shown], "ko-", label="merit figure", linewidth=1.5)
    ax.set_xticks(x)
    ax.set_xticklabels([f"#{d.rank}\n{d.configuration.label}" for d in shown], fontsize=8)
    ax.set_ylabel("Score (%)")
    ax.set_ylim(0, 105)
    ax.set_title("Multicriteria assessment")
    ax.legend(ncol=3, fontsize=8)
    ax.grid(True, axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_verification_figure(report: VerificationReport, path: str | Path) -> None:
    """Power balance and state of charge across the scaled test day."""
    n = report.demand_kw.size
    t = (report.start_hour + np.arange(n) * report.step_minutes / 60.0)
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(10, 7), sharex=True)

    ax1.plot(t, report.demand_kw, color="black", linewidth=1.5, label="demand")
    ax1.plot(t, report.pv_kw, color="tab:orange", linewidth=1.0, label="solar PV")
    ax1.plot(t, report.wind_kw, color="tab:green", linewidth=1.0, label="wind")
    ax1.plot(t, report.battery_kw, color="tab:purple", linewidth=1.0, label="battery (+dis/-ch)")
    if np.any(report.grid_kw != 0):
        ax1.plot(t, report.grid_kw, color="tab:red", linewidth=1.0, label="grid (+imp/-exp)")
    if np.any(report.diesel_kw != 0):
        ax1.plot(t, report.diesel_kw, color="tab:brown", linewidth=1.0, label="diesel")
    ax1.set_ylabel("Power (kW)")
    verdict = "pass" if report.passed else f"fail ({report.failed_condition})"
    ax1.set_title(
        f"Scaled verification, {report.label} (1:{report.sf:.0f}) - {verdict}, "
        f"max loss {report.max_loss_rate:.1%}"
    )
    ax1.legend(ncol=3, fontsize=8)
    ax1.grid(True, alpha=0.3)

    soc_t = (report.start_hour + np.arange(report.soc.size) * report.step_minutes / 60.0)
    ax2.plot(soc_t, report.soc * 100, color="tab:blue", linewidth=1.5)
    ax2.set_ylabel("SOC (%)")
    ax2.set_xlabel("Hour (test day)")
    ax2.set_ylim(0, 105)
    ax2.grid(True, alpha=0.3)

    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
