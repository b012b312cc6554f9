"""Delimited/JSON artifacts and atomic file writes."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile

import numpy as np

from friendgraph.errors import GraphInputError
from friendgraph.metrics import METRIC_NAMES, MetricsReport, NodeMetricsTable

NODE_HEADER = ("node_id",) + METRIC_NAMES
POSITION_HEADER = ("node_id", "x", "y")


def atomic_write_bytes(path, data: bytes) -> None:
    """Write via a temp file in the target directory, then rename over ``path``."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_text(path, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))


def fmt(x: float) -> str:
    return f"{x:.6g}"


def node_metrics_csv(table: NodeMetricsTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(NODE_HEADER)
    cols = [table[name] for name in METRIC_NAMES]
    for i, node_id in enumerate(table.ids):
        row = [node_id, str(int(cols[0][i]))]
        row.extend(fmt(float(c[i])) for c in cols[1:])
        writer.writerow(row)
    return buf.getvalue()


def read_node_metrics_csv(path) -> NodeMetricsTable:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or header[0] != "node_id":
            raise GraphInputError(f"{path}: not a node metrics table (missing node_id header)")
        unknown = [h for h in header[1:] if h not in METRIC_NAMES]
        if unknown:
            raise GraphInputError(f"{path}: unknown metric columns {unknown}")
        ids = []
        rows = []
        for line_no, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise GraphInputError(f"{path}:{line_no}: expected {len(header)} fields, got {len(row)}")
            ids.append(row[0])
            try:
                rows.append([float(x) for x in row[1:]])
            except ValueError as exc:
                raise GraphInputError(f"{path}:{line_no}: {exc}") from None
    data = np.asarray(rows, dtype=np.float64).reshape(len(ids), len(header) - 1)
    columns = {name: data[:, k].copy() for k, name in enumerate(header[1:])}
    return NodeMetricsTable(tuple(ids), columns)


def edge_metrics_csv(g, edge_bc: np.ndarray) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("source", "target", "betweenness"))
    for (a, b), value in zip(g.edge_list(), edge_bc.tolist()):
        writer.writerow((a, b, fmt(value)))
    return buf.getvalue()


def report_json(report: MetricsReport) -> str:
    return json.dumps(report.as_dict(), indent=2) + "\n"


def positions_csv(ids, positions: np.ndarray) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(POSITION_HEADER)
    for node_id, (x, y) in zip(ids, positions.tolist()):
        writer.writerow((node_id, fmt(x), fmt(y)))
    return buf.getvalue()


def read_positions_csv(path) -> dict:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != POSITION_HEADER:
            raise GraphInputError(f"{path}: expected header {','.join(POSITION_HEADER)}")
        out = {}
        for line_no, row in enumerate(reader, start=2):
            try:
                out[row[0]] = (float(row[1]), float(row[2]))
            except (IndexError, ValueError):
                raise GraphInputError(f"{path}:{line_no}: malformed position row") from None
    return out
