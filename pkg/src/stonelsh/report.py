"""Render trade-off figures from a metrics CSV.

One figure per cost metric (fraction compared, memory bits, total
complexity), each plotting average position error against that cost with
one curve per (L, delta) swept over T.  The exhaustive-search baseline
is drawn as a dashed reference line.
"""

from __future__ import annotations

import os
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .bench import MetricsRow

_PANELS = [
    ("frac_compared", "fraction of database compared", "tradeoff_frac_compared.png"),
    ("memory_bits", "table memory [bits]", "tradeoff_memory_bits.png"),
    ("total_complexity", "total complexity", "tradeoff_total_complexity.png"),
]


def _aggregate(rows: list[MetricsRow]):
    """Mean metrics per (L, delta, T) across repeat seeds."""
    grouped = defaultdict(list)
    for row in rows:
        grouped[(row.L, row.delta, row.T)].append(row)
    out = {}
    for key, rs in grouped.items():
        out[key] = {
            "frac_compared": sum(r.frac_compared for r in rs) / len(rs),
            "memory_bits": sum(r.memory_bits for r in rs) / len(rs),
            "total_complexity": sum(r.total_complexity for r in rs) / len(rs),
            "avg_err_m": sum(r.avg_err_m for r in rs) / len(rs),
            "baseline_err_m": sum(r.baseline_err_m for r in rs) / len(rs),
        }
    return out


def render_report(rows: list[MetricsRow], out_dir: str) -> list[str]:
    """Write the figures; returns the file paths."""
    os.makedirs(out_dir, exist_ok=True)
    agg = _aggregate(rows)
    curves = sorted({(L, d) for (L, d, _) in agg})
    baseline = sum(v["baseline_err_m"] for v in agg.values()) / len(agg)
    written = []
    for metric, label, fname in _PANELS:
        fig, ax = plt.subplots(figsize=(5.2, 4.0))
        for L, d in curves:
            pts = sorted(
                (t, agg[(L, d, t)]) for (l2, d2, t) in agg if (l2, d2) == (L, d)
            )
            xs = [v[metric] for _, v in pts]
            ys = [v["avg_err_m"] for _, v in pts]
            ax.plot(xs, ys, marker="o", label=f"L={L}, $\\delta$={d}")
        ax.axhline(baseline, color="k", ls="--", lw=1, label="exhaustive search")
        ax.set_xlabel(label)
        ax.set_ylabel("average distance error [m]")
        if metric != "frac_compared":
            ax.set_xscale("log")
        ax.legend(fontsize=8)
        fig.tight_layout()
        path = os.path.join(out_dir, fname)
        fig.savefig(path, dpi=150)
        plt.close(fig)
        written.append(path)
    return written
