"""Figure rendering for report paths.

Figures are written next to the delimited/JSON reports so a benchmark or CV
run leaves both the numbers and a quick visual summary behind.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

_METHOD_LABELS = {
    "single_fidelity": "single fidelity",
    "additive": "additive",
    "direct_aug": "direct augmentation",
    "explicit_aug": "explicit map augmentation",
}


def plot_benchmark(report, path):
    """Median accuracy vs number of HF samples with interquartile bands."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for method in report.methods:
        rows = [r for r in report.rows if r.method == method]
        n_hf = [r.n_hf for r in rows]
        med = [r.report.median for r in rows]
        p25 = [r.report.p25 for r in rows]
        p75 = [r.report.p75 for r in rows]
        label = _METHOD_LABELS.get(method, method)
        line = ax.plot(n_hf, med, marker="o", label=label)[0]
        ax.fill_between(n_hf, p25, p75, alpha=0.2, color=line.get_color())
    ax.set_xlabel("HF training samples")
    ax.set_ylabel("normalized L2 accuracy")
    ax.set_title(f"{report.plan.n_reps} repetitions, {report.plan.n_lf} LF samples")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_cv_trace(result, path):
    """Objective evaluations of the weight search, best point highlighted."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ws = [w for w, _ in result.trace]
    vals = [v for _, v in result.trace]
    ax.scatter(ws, vals, s=18, alpha=0.7, label="evaluations")
    ax.scatter([result.w_syn_star], [result.objective_value], s=60, color="crimson", zorder=3, label="selected")
    ax.axvline(result.init, color="gray", linestyle="--", linewidth=1, label="init")
    ax.set_xscale("log")
    ax.set_xlabel("synthetic sample weight")
    ax.set_ylabel("LOOCV mean relative error")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_evaluation(relative_errors, path):
    """Per-test-sample relative errors as a stem-style summary plot."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(range(len(relative_errors)), relative_errors, color="steelblue")
    ax.set_xlabel("test sample")
    ax.set_ylabel("relative L2 error")
    ax.grid(True, axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
