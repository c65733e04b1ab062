"""Figures written next to the CSV tables.  matplotlib is imported on first use."""

from __future__ import annotations

from collections import defaultdict


def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def frontier_figure(rows, path):
    """Degree against 1/eps, one line per r, from approx-frontier rows."""
    plt = _pyplot()
    by_r = defaultdict(list)
    for row in rows:
        by_r[row["r"]].append((row["eps"], row["degree"], row["max_dev"]))
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    for r in sorted(by_r):
        pts = sorted(by_r[r], reverse=True)
        ax1.plot([1 / e for e, _, _ in pts], [d for _, d, _ in pts], marker="o", label=f"r={r}")
        ax2.plot([e for e, _, _ in pts], [m for _, _, m in pts], marker="o", label=f"r={r}")
    ax1.set_xscale("log")
    ax1.set_xlabel("1/eps")
    ax1.set_ylabel("degree")
    ax1.legend(fontsize=8)
    lo = min(e for row in by_r.values() for e, _, _ in row)
    ax2.plot([lo, 0.5], [lo, 0.5], color="grey", linestyle="--", label="max_dev = eps")
    ax2.set_xscale("log")
    ax2.set_yscale("log")
    ax2.set_xlabel("eps")
    ax2.set_ylabel("max deviation")
    ax2.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def bench_figure(rows, path, cost="seconds"):
    """Cost column (seconds, queries, ...) and error above OPT per learner against n."""
    plt = _pyplot()
    by_l = defaultdict(list)
    for row in rows:
        by_l[row["learner"]].append(row)
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    for name in sorted(by_l):
        pts = sorted(by_l[name], key=lambda z: z["n"])
        ax1.plot([p["n"] for p in pts], [max(p[cost], 1e-9) for p in pts], marker="o", label=name)
        ax2.plot([p["n"] for p in pts], [p["error"] - p["opt"] for p in pts], marker="o", label=name)
    ax1.set_xlabel("n")
    ax1.set_ylabel(cost)
    ax1.set_yscale("log")
    ax1.legend(fontsize=8)
    ax2.set_xlabel("n")
    ax2.set_ylabel("error - OPT")
    ax2.axhline(0, color="grey", linewidth=0.8)
    ax2.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
