"""Figure rendering for traces and experiment tables.

Everything here is a thin layer over matplotlib's Agg backend; figures are
written next to the CSV output they illustrate.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .controller import RelaxTrace  # noqa: E402
from .experiments import AttackPoint, CapacityResult, SweepCell  # noqa: E402


def save_trace_figure(trace: RelaxTrace, path: str | Path) -> Path:
    """Energy, peak centrality, and switch marks over the iterations."""
    ks = [r.k for r in trace.records]
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    ax1.semilogy(ks, [max(r.lyapunov_v, 1e-30) for r in trace.records], lw=1.2)
    ax1.set_ylabel("energy $\\|S - c\\|_2^2$")
    ax2.plot(ks, [r.kappa.max() for r in trace.records], lw=1.2, color="tab:orange")
    ax2.set_ylabel("peak centrality")
    ax2.set_xlabel("iteration")
    for ax in (ax1, ax2):
        for r in trace.records:
            if r.switched:
                ax.axvline(r.k, color="grey", alpha=0.25, lw=0.8)
    fig.suptitle(f"relaxation trace ({trace.status})")
    return _save(fig, path)


def save_capacity_figure(result: CapacityResult, path: str | Path) -> Path:
    """Measured capacity gain vs. structural reduction ratio, with y = x."""
    xs = [s.x for s in result.samples]
    ys = [s.y for s in result.samples]
    fig, ax = plt.subplots(figsize=(6, 5))
    for model, marker in (("ba", "o"), ("ws", "s")):
        pts = [(s.x, s.y) for s in result.samples if s.model == model]
        if pts:
            ax.scatter(*zip(*pts), marker=marker, alpha=0.7, label=model.upper())
    lim = max(xs + ys + [1.0]) * 1.05
    ax.plot([0, lim], [0, lim], "k--", lw=1, label="y = x")
    ax.set_xlim(0.9, lim)
    ax.set_ylim(0.9, lim)
    ax.set_xlabel("peak-centrality reduction ratio")
    ax.set_ylabel("measured capacity gain")
    ax.set_title(f"capacity validation ($R^2$ = {result.r_squared:.3f})")
    ax.legend()
    return _save(fig, path)


def save_sweep_figure(cells: list[SweepCell], path: str | Path) -> Path:
    """Throughput, loss rate, and latency per policy across the load grid."""
    policies = sorted({c.policy for c in cells})
    fig, axes = plt.subplots(1, 3, figsize=(13, 4))
    panels = (("throughput", "throughput [pkts/step]"),
              ("loss_rate", "loss rate"),
              ("mean_latency", "mean latency [steps]"))
    for ax, (fld, label) in zip(axes, panels):
        for pol in policies:
            pts = sorted((c.load, getattr(c.mean, fld), getattr(c.std, fld))
                         for c in cells if c.policy == pol)
            loads, means, stds = zip(*pts)
            ax.errorbar(loads, means, yerr=stds, marker="o", ms=3, capsize=2, label=pol)
        ax.set_xlabel("normalized load")
        ax.set_ylabel(label)
    axes[0].legend()
    fig.tight_layout()
    return _save(fig, path)


def save_attack_figure(points: list[AttackPoint], path: str | Path) -> Path:
    """Delivery-rate advantage over the removal-fraction grid."""
    fig, ax = plt.subplots(figsize=(6, 4.5))
    fr = [p.fraction * 100 for p in points]
    ax.errorbar(fr, [p.advantage_mean for p in points],
                yerr=[p.advantage_std for p in points], marker="o", capsize=3)
    ax.axhline(0.0, color="k", lw=0.8)
    ax.set_xlabel("nodes removed [%]")
    ax.set_ylabel("PDR advantage [%]")
    return _save(fig, path)


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path
