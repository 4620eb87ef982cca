"""Matplotlib renderings of the tabular outputs, for the CLI --png paths."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .perturbation import StudyTable
from .regularity import ExponentTrace, VariationTable
from .solver import CurveSample


def save_curve_png(sample: CurveSample, path, dpi: int = 150) -> None:
    fig, ax = plt.subplots(figsize=(6.0, 6.0))
    vals = np.asarray(sample.values)
    if sample.space == "plane":
        ax.plot(vals.real, vals.imag, lw=0.8)
        ax.set_xlabel("Re G")
        ax.set_ylabel("Im G")
        ax.set_aspect("equal")
    else:
        ax.plot(sample.t, vals.real, lw=0.8)
        ax.set_xlabel("t")
        ax.set_ylabel("G(t)")
    title = f"depth {sample.depth}"
    ax.set_title(title)
    fig.savefig(path, dpi=dpi)
    plt.close(fig)


def save_variation_png(table: VariationTable, path, dpi: int = 150) -> None:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.semilogy(table.n, table.s, marker="o", ms=3, lw=0.8)
    ax.set_xlabel("n")
    ax.set_ylabel("S_n")
    ax.set_title(f"p-variation sums, p={table.p:g}")
    fig.savefig(path, dpi=dpi)
    plt.close(fig)


def save_trace_png(trace: ExponentTrace, path, dpi: int = 150) -> None:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    finite = np.isfinite(trace.values)
    ax.plot(trace.n[finite], trace.values[finite], lw=0.8)
    ax.set_xlabel("n")
    ax.set_ylabel("-log_m(M_n)/n")
    ax.set_title(f"exponent trace, seed {trace.seed}")
    fig.savefig(path, dpi=dpi)
    plt.close(fig)


def save_study_png(table: StudyTable, path, dpi: int = 150) -> None:
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 4.0))
    ax1.loglog(table.eps, table.sup_dist, marker="o", ms=4, lw=0.8)
    ax1.set_xlabel("eps")
    ax1.set_ylabel("sup |G_eps - G_0|")
    finite = np.isfinite(table.alpha)
    ax2.semilogx(np.asarray(table.eps)[finite], table.alpha[finite],
                 marker="o", ms=4, lw=0.8)
    if np.isfinite(table.alpha0):
        ax2.axhline(table.alpha0, color="gray", lw=0.6, ls="--")
    ax2.set_xlabel("eps")
    ax2.set_ylabel("alpha_eps")
    fig.suptitle(f"family {table.family}")
    fig.savefig(path, dpi=dpi)
    plt.close(fig)
