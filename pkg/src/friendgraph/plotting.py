"""Report figures written next to the delimited metric tables."""

from __future__ import annotations

import io
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from friendgraph.metrics import METRIC_NAMES, MetricsReport  # noqa: E402
from friendgraph.tables import atomic_write_bytes  # noqa: E402

_RC = {
    "font.size": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 120,
    "figure.figsize": (4.5, 3.2),
}


def _save(fig, path) -> str:
    buf = io.BytesIO()
    fig.savefig(buf, format="png", bbox_inches="tight", metadata={"Software": None})
    plt.close(fig)
    atomic_write_bytes(path, buf.getvalue())
    return os.fspath(path)


def degree_distribution_figure(degrees: np.ndarray, path) -> str:
    """Log-log degree histogram (degree-0 nodes cannot be drawn and are skipped)."""
    counts = np.bincount(np.asarray(degrees, dtype=np.int64))
    k = np.flatnonzero(counts)
    k = k[k > 0]
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        if len(k):
            ax.loglog(k, counts[k] / counts.sum(), "o", ms=3, color="#1f5fa8")
        ax.set_xlabel("degree")
        ax.set_ylabel("fraction of nodes")
        ax.set_title("Degree distribution")
        return _save(fig, path)


def metric_histogram_figure(values: np.ndarray, name: str, path) -> str:
    values = np.asarray(values, dtype=np.float64)
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        if len(values):
            ax.hist(values, bins=min(50, max(len(values), 1)), color="#1f5fa8", log=True)
        ax.set_xlabel(name)
        ax.set_ylabel("nodes")
        ax.set_title(f"{name} distribution")
        return _save(fig, path)


def render_report_figures(report: MetricsReport, out_dir) -> list[str]:
    """Write one PNG per node metric plus the degree distribution; return the paths."""
    os.makedirs(out_dir, exist_ok=True)
    paths = [degree_distribution_figure(report.table["degree"], os.path.join(out_dir, "degree_distribution.png"))]
    for name in METRIC_NAMES:
        paths.append(metric_histogram_figure(report.table[name], name, os.path.join(out_dir, f"{name}_hist.png")))
    return paths
