"""Fruchterman-Reingold layout and SVG rendering."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Optional, Union
from xml.sax.saxutils import escape

import numpy as np

from friendgraph.errors import GraphInputError
from friendgraph.graph import SimpleGraph
from friendgraph.rng import XorShift64Star

MAX_LAYOUT_NODES = 50_000
EPSILON = 1e-9
R_MIN, R_MAX, R_DEFAULT = 2.0, 12.0, 4.0
_BLOCK_PAIRS = 1 << 20
_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class LayoutParams:
    width: float = 1000.0
    height: float = 1000.0
    iterations: int = 50
    initial_temperature: Optional[float] = None  # None -> width / 10
    rng_seed: int = 0

    def __post_init__(self):
        if not (self.width > 0 and self.height > 0):
            raise GraphInputError("width and height must be positive")
        if self.iterations < 0:
            raise GraphInputError("iterations must be >= 0")
        if self.initial_temperature is not None and self.initial_temperature < 0:
            raise GraphInputError("initial temperature must be >= 0")

    @property
    def temperature(self) -> float:
        return self.width / 10.0 if self.initial_temperature is None else self.initial_temperature


def _splitmix(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


def _pair_direction(seed: int, iteration: int, i: int, j: int) -> tuple[float, float]:
    """Seeded unit vector for coincident nodes ``i < j`` (``j`` gets the opposite)."""
    h = _splitmix(_splitmix(_splitmix(seed & _MASK) ^ iteration) ^ (i * 0x100000001B3 + j))
    angle = (h >> 11) * (2.0 * math.pi / (1 << 53))
    return math.cos(angle), math.sin(angle)


def initial_positions(n: int, params: LayoutParams) -> np.ndarray:
    if n == 1:
        return np.array([[params.width / 2.0, params.height / 2.0]])
    rng = XorShift64Star(params.rng_seed)
    pos = np.empty((n, 2))
    for i in range(n):
        pos[i, 0] = rng.random() * params.width
        pos[i, 1] = rng.random() * params.height
    return pos


def _repulsion_block(pos, lo, hi, k2, seed, iteration):
    delta = pos[lo:hi, None, :] - pos[None, :, :]
    d2 = np.einsum("ijk,ijk->ij", delta, delta)
    rows = np.arange(lo, hi)
    d2[rows - lo, rows] = np.inf  # no self-force
    close = d2 < EPSILON * EPSILON
    if close.any():
        for r, j in zip(*np.nonzero(close)):
            i = lo + int(r)
            j = int(j)
            ux, uy = _pair_direction(seed, iteration, min(i, j), max(i, j))
            sign = 1.0 if i < j else -1.0
            delta[r, j, 0] = sign * ux * EPSILON
            delta[r, j, 1] = sign * uy * EPSILON
            d2[r, j] = EPSILON * EPSILON
    # |F| = k^2 / d along delta / d
    return np.einsum("ijk,ij->ik", delta, k2 / d2)


def fruchterman_reingold(
    g: SimpleGraph, params: LayoutParams = LayoutParams(), threads: Optional[int] = None
) -> np.ndarray:
    """Return an ``(n, 2)`` array of positions aligned with ``g.ids``.

    Exact all-pairs repulsion ``k^2/d``, attraction ``d^2/k`` along edges,
    displacement capped by a temperature that cools linearly to zero, and
    positions clamped to the frame after every step.
    """
    n = g.n
    if n > MAX_LAYOUT_NODES:
        raise GraphInputError(
            f"layout of {n} nodes exceeds the {MAX_LAYOUT_NODES}-node limit; filter the graph first"
        )
    if n == 0:
        return np.zeros((0, 2))
    pos = initial_positions(n, params)
    if n == 1:
        return pos

    k = math.sqrt(params.width * params.height / n)
    k2 = k * k
    eu, ev = g.edge_index_arrays()
    rows_per_block = max(1, _BLOCK_PAIRS // n)
    blocks = [(lo, min(lo + rows_per_block, n)) for lo in range(0, n, rows_per_block)]
    pool = ThreadPoolExecutor(max_workers=threads) if threads and threads > 1 and len(blocks) > 1 else None
    t0 = params.temperature
    try:
        for it in range(params.iterations):
            temp = t0 * (1.0 - it / params.iterations)
            if pool is None:
                parts = [_repulsion_block(pos, lo, hi, k2, params.rng_seed, it) for lo, hi in blocks]
            else:
                parts = list(pool.map(lambda b: _repulsion_block(pos, b[0], b[1], k2, params.rng_seed, it), blocks))
            disp = np.concatenate(parts)

            delta = pos[eu] - pos[ev]
            dist = np.sqrt(np.einsum("ij,ij->i", delta, delta))
            pull = delta * (dist / k)[:, None]
            for axis in (0, 1):
                disp[:, axis] -= np.bincount(eu, weights=pull[:, axis], minlength=n)
                disp[:, axis] += np.bincount(ev, weights=pull[:, axis], minlength=n)

            length = np.sqrt(np.einsum("ij,ij->i", disp, disp))
            scale = np.zeros(n)
            np.divide(np.minimum(length, temp), length, out=scale, where=length > 0)
            pos = pos + disp * scale[:, None]
            np.clip(pos[:, 0], 0.0, params.width, out=pos[:, 0])
            np.clip(pos[:, 1], 0.0, params.height, out=pos[:, 1])
    finally:
        if pool is not None:
            pool.shutdown()
    return pos


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def node_radii(values: Optional[np.ndarray], n: int) -> np.ndarray:
    """Affine map of ``values`` onto [R_MIN, R_MAX]; constant R_DEFAULT without values."""
    if values is None:
        return np.full(n, R_DEFAULT)
    values = np.asarray(values, dtype=np.float64)
    lo, hi = (float(values.min()), float(values.max())) if n else (0.0, 0.0)
    if hi == lo:
        return np.full(n, (R_MIN + R_MAX) / 2.0)
    return R_MIN + (values - lo) * ((R_MAX - R_MIN) / (hi - lo))


def render_svg(
    g: SimpleGraph,
    positions: Union[np.ndarray, Mapping[str, tuple]],
    sizes: Optional[np.ndarray] = None,
    width: float = 1000.0,
    height: float = 1000.0,
) -> bytes:
    """SVG 1.1 drawing: edges as lines first, nodes as circles on top.

    ``positions`` is either an array aligned with ``g.ids`` or a mapping from
    node id to ``(x, y)``. ``sizes`` (aligned with ``g.ids``) sets the circle
    radii through ``node_radii``.
    """
    if isinstance(positions, Mapping):
        try:
            pos = np.array([positions[nid] for nid in g.ids], dtype=np.float64).reshape(g.n, 2)
        except KeyError as exc:
            raise GraphInputError(f"no position for node {exc.args[0]!r}") from None
    else:
        pos = np.asarray(positions, dtype=np.float64)
        if pos.shape != (g.n, 2):
            raise GraphInputError(f"positions shape {pos.shape} does not match {g.n} nodes")
    radii = node_radii(sizes, g.n)

    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>\n',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_fmt(width)}" '
        f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">\n',
    ]
    eu, ev = g.edge_index_arrays()
    if len(eu):
        out.append('<g stroke="#888888" stroke-width="0.5" stroke-opacity="0.6">\n')
        for a, b in zip(eu.tolist(), ev.tolist()):
            out.append(
                f'<line x1="{_fmt(pos[a, 0])}" y1="{_fmt(pos[a, 1])}" x2="{_fmt(pos[b, 0])}" y2="{_fmt(pos[b, 1])}"/>\n'
            )
        out.append("</g>\n")
    if g.n:
        out.append('<g fill="#1f5fa8" fill-opacity="0.85" stroke="#ffffff" stroke-width="0.5">\n')
        for i, node_id in enumerate(g.ids):
            out.append(
                f'<circle cx="{_fmt(pos[i, 0])}" cy="{_fmt(pos[i, 1])}" r="{_fmt(radii[i])}">'
                f"<title>{escape(node_id)}</title></circle>\n"
            )
        out.append("</g>\n")
    out.append("</svg>\n")
    return "".join(out).encode("utf-8")
