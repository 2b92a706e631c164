"""SVG figure emission for the CLI (decoration only; CSVs carry the data)."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def risk_curve_svg(path, lambdas, series, errorbars=None, title="risk vs lambda"):
    """Line plot of risk estimates against log-scaled lambda.

    ``series`` maps label -> values (None cells allowed); ``errorbars`` maps
    label -> symmetric half-widths.
    """
    fig, ax = plt.subplots(figsize=(7, 5))
    lam = np.asarray(lambdas, dtype=float)
    for label, vals in series.items():
        v = np.array([np.nan if x is None else float(x) for x in vals])
        if np.all(np.isnan(v)):
            continue
        if errorbars and label in errorbars:
            e = np.array([np.nan if x is None else float(x) for x in errorbars[label]])
            ax.errorbar(lam, v, yerr=e, label=label, capsize=2, marker="o", ms=3)
        else:
            ax.plot(lam, v, label=label, marker="o", ms=3)
    ax.set_xscale("log")
    ax.set_xlabel("lambda")
    ax.set_ylabel("estimated risk")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def timing_svg(path, sizes, series, title="wall time"):
    fig, ax = plt.subplots(figsize=(7, 5))
    s = np.asarray(sizes, dtype=float)
    for label, vals in series.items():
        ax.plot(s, np.asarray(vals, dtype=float), label=label, marker="o")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("problem size p")
    ax.set_ylabel("milliseconds")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def gap_svg(path, labels, gaps, title="leave-one-out approximation gap"):
    fig, ax = plt.subplots(figsize=(7, 5))
    ax.plot(range(len(labels)), gaps, marker="o")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=30)
    ax.set_yscale("log")
    ax.set_ylabel("max per-observation gap")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
