"""Delimited output and figure rendering for scan results.

CSV schemas follow the library contracts; floating values are written
with 17 significant digits so files round-trip exactly.  Figures are
optional companions rendered next to the delimited output.
"""

from __future__ import annotations

import csv
import json
import math
from typing import Optional, Sequence

from .conjecture import ConjectureParams, ScanRecord

SCAN_HEADER = ["C", "m", "n", "L", "K", "r", "alpha", "re", "im", "abs", "terms", "seconds"]


def fmt(x: float) -> str:
    return "%.17g" % (x + 0.0)  # +0.0 normalizes -0.0


def scan_rows(
    records: Sequence[ScanRecord], params: ConjectureParams, wall_times: bool = False
) -> list:
    rows = []
    for r in records:
        rows.append(
            {
                "C": fmt(r.big_c),
                "m": params.m,
                "n": params.n,
                "L": params.big_l,
                "K": params.big_k,
                "r": params.r,
                "alpha": fmt(params.alpha),
                "re": fmt(r.sum_re),
                "im": fmt(r.sum_im),
                "abs": fmt(r.abs_sum),
                "terms": r.terms,
                "seconds": fmt(r.seconds if wall_times else 0.0),
            }
        )
    return rows


def write_scan_csv(
    records: Sequence[ScanRecord],
    params: ConjectureParams,
    path: str,
    wall_times: bool = False,
) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=SCAN_HEADER)
        w.writeheader()
        for row in scan_rows(records, params, wall_times):
            w.writerow(row)


def write_json_rows(rows: Sequence[dict], path_or_handle) -> None:
    payload = json.dumps(list(rows), indent=2, sort_keys=True)
    if hasattr(path_or_handle, "write"):
        path_or_handle.write(payload + "\n")
    else:
        with open(path_or_handle, "w") as fh:
            fh.write(payload + "\n")


def render_scan_figure(
    records: Sequence[ScanRecord], slope: float, path: str, title: Optional[str] = None
) -> None:
    """Log-log plot of the unnormalized sum size against the window size,
    with the fitted growth line."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    cs = [r.big_c for r in records]
    sizes = [max(r.big_c * r.abs_sum, 1e-300) for r in records]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.loglog(cs, sizes, "o-", label="C * |sum|")
    if len(cs) >= 2:
        logc = [math.log(c) for c in cs]
        logs = [math.log(s) for s in sizes]
        intercept = sum(ls - slope * lc for ls, lc in zip(logs, logc)) / len(cs)
        fit = [math.exp(intercept + slope * lc) for lc in logc]
        ax.loglog(cs, fit, "--", label=f"fit slope {slope:+.3f}")
    ax.set_xlabel("window size C")
    ax.set_ylabel("unnormalized sum size")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_error_grid_figure(
    rows: Sequence[tuple], path: str, title: Optional[str] = None
) -> None:
    """Scatter of the orbit-count error N - 3X over sample points."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    xs = [r[0] for r in rows]
    ys = [r[1] for r in rows]
    errs = [r[3] - 3.0 * r[2] for r in rows]
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    sc = ax.scatter(xs, ys, c=errs, cmap="coolwarm", s=22)
    fig.colorbar(sc, ax=ax, label="N - 3X")
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
