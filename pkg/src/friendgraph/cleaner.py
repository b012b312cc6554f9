"""Multigraph cleaning: drop duplicate nodes, self-loops and parallel edges.

Node ids are interned by sorting their 64-bit string hashes (verified
against the strings themselves, so collisions cannot merge distinct ids);
edges are then re-pointed to the unique ids, oriented as (min, max) and
deduplicated with a single sort, so the whole procedure is O(N log N) in the
number of input records. Sorting flat integer arrays keeps memory access
sequential, which matters more than hashing cost at a million records.
"""

from __future__ import annotations

import json
import operator
from itertools import chain
from dataclasses import asdict, dataclass

import numpy as np

from friendgraph.graph import MultiGraph, SimpleGraph


@dataclass(frozen=True)
class CleaningStats:
    duplicate_nodes_removed: int = 0
    parallel_edges_removed: int = 0
    self_loops_removed: int = 0

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2) + "\n"


def _intern_by_dict(flat: list) -> tuple[list, np.ndarray]:
    index: dict[str, int] = {}
    for node_id in flat:
        if node_id not in index:
            index[node_id] = len(index)
    inv = np.fromiter(map(index.__getitem__, flat), dtype=np.int64, count=len(flat))
    return list(index), inv


def _intern(flat: list) -> tuple[list, np.ndarray]:
    """Distinct ids plus the position of every record's id among them."""
    hashes = np.fromiter(map(hash, flat), dtype=np.int64, count=len(flat))
    order = np.argsort(hashes)
    sorted_hashes = hashes[order]
    starts = np.ones(len(flat), dtype=bool)
    starts[1:] = sorted_hashes[1:] != sorted_hashes[:-1]
    inv = np.empty(len(flat), dtype=np.int64)
    inv[order] = np.cumsum(starts) - 1
    unique = [flat[i] for i in order[starts].tolist()]
    if all(map(operator.eq, flat, map(unique.__getitem__, inv.tolist()))):
        return unique, inv
    return _intern_by_dict(flat)


def _clean_arrays(g: MultiGraph):
    flat = list(g.nodes)
    n_node_records = len(flat)
    flat.extend(chain.from_iterable(g.edges))
    first_seen, inv = _intern(flat)
    declared = np.zeros(len(first_seen), dtype=bool)
    declared[inv[:n_node_records]] = True
    duplicates = n_node_records - int(declared.sum())
    src = inv[n_node_records::2]
    dst = inv[n_node_records + 1::2]
    del flat

    order = sorted(range(len(first_seen)), key=first_seen.__getitem__)
    ids = [first_seen[i] for i in order]
    rank = np.empty(len(first_seen), dtype=np.int64)
    rank[np.asarray(order, dtype=np.int64)] = np.arange(len(first_seen), dtype=np.int64)

    src = rank[src]
    dst = rank[dst]
    loops = src == dst
    n_loops = int(loops.sum())
    src = src[~loops]
    dst = dst[~loops]
    lo = np.minimum(src, dst)
    hi = np.maximum(src, dst)
    n = max(len(ids), 1)
    keys = np.unique(lo * n + hi)
    u, v = np.divmod(keys, n)
    stats = CleaningStats(
        duplicate_nodes_removed=duplicates,
        parallel_edges_removed=int(len(src) - len(keys)),
        self_loops_removed=n_loops,
    )
    return ids, u, v, stats


def clean(g: MultiGraph) -> tuple[MultiGraph, CleaningStats]:
    """Return the simple form of ``g`` plus counters of what was removed.

    The output lists every distinct node id once, in sorted order, and every
    unordered non-loop endpoint pair once as ``(min_id, max_id)`` in sorted
    order. Cleaning never fails.
    """
    ids, u, v, stats = _clean_arrays(g)
    edges = list(zip(map(ids.__getitem__, u.tolist()), map(ids.__getitem__, v.tolist())))
    return MultiGraph(list(ids), edges), stats


def clean_to_simple(g: MultiGraph) -> tuple[SimpleGraph, CleaningStats]:
    """``freeze(clean(g)[0])`` without materializing the intermediate records."""
    ids, u, v, stats = _clean_arrays(g)
    return SimpleGraph.from_index_edges(ids, u, v), stats
