"""Optional figures for growth reports.  matplotlib is imported lazily."""

from __future__ import annotations

import math
from pathlib import Path


def plot_report(rows: list[dict], path: str | Path) -> Path:
    """log log v against log R for the measured cells of a growth report."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 3.5))
    for col, label in (("v_G", "G"), ("v_W", "W"), ("delta_zeta", "inverted orbit")):
        pts = [(math.log(float(r["R_k"])), math.log(math.log(r[col])))
               for r in rows if isinstance(r[col], int) and r[col] > 2 and r["R_k"] > 1]
        if pts:
            xs, ys = zip(*pts)
            ax.plot(xs, ys, marker="o", label=label)
    ax.set_xlabel("log R_k")
    ax.set_ylabel("log log v(R_k)")
    ax.legend(frameon=False)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path)
    plt.close(fig)
    return path
