"""Compiled inner loops over CSR adjacency (numba, nogil so callers can thread)."""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def bfs_distance_stats(indptr, indices, sources):
    """Per source: sum of hop distances, reachable count (excl. source), eccentricity."""
    n = len(indptr) - 1
    k = len(sources)
    dist_sum = np.zeros(k, dtype=np.int64)
    reach = np.zeros(k, dtype=np.int64)
    ecc = np.zeros(k, dtype=np.int64)
    dist = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    for t in range(k):
        s = sources[t]
        dist[s] = 0
        queue[0] = s
        head = 0
        tail = 1
        total = 0
        far = 0
        while head < tail:
            v = queue[head]
            head += 1
            dv = dist[v] + 1
            for p in range(indptr[v], indptr[v + 1]):
                w = indices[p]
                if dist[w] < 0:
                    dist[w] = dv
                    total += dv
                    far = dv
                    queue[tail] = w
                    tail += 1
        dist_sum[t] = total
        reach[t] = tail - 1
        ecc[t] = far
        for i in range(tail):
            dist[queue[i]] = -1
    return dist_sum, reach, ecc


@njit(cache=True, nogil=True)
def brandes_accumulate(indptr, indices, slot_edge, n_edges, sources):
    """Brandes dependency accumulation from ``sources``.

    Returns node and edge scores summed over ordered (s, t) pairs; callers
    halve them for the undirected convention.
    """
    n = len(indptr) - 1
    node_bc = np.zeros(n, dtype=np.float64)
    edge_bc = np.zeros(n_edges, dtype=np.float64)
    dist = np.full(n, -1, dtype=np.int64)
    sigma = np.zeros(n, dtype=np.float64)
    delta = np.zeros(n, dtype=np.float64)
    order = np.empty(n, dtype=np.int64)
    for t in range(len(sources)):
        s = sources[t]
        dist[s] = 0
        sigma[s] = 1.0
        order[0] = s
        head = 0
        tail = 1
        while head < tail:
            v = order[head]
            head += 1
            dv = dist[v] + 1
            for p in range(indptr[v], indptr[v + 1]):
                w = indices[p]
                if dist[w] < 0:
                    dist[w] = dv
                    order[tail] = w
                    tail += 1
                if dist[w] == dv:
                    sigma[w] += sigma[v]
        # non-increasing distance order
        for i in range(tail - 1, 0, -1):
            w = order[i]
            dw = dist[w] - 1
            coeff = (1.0 + delta[w]) / sigma[w]
            for p in range(indptr[w], indptr[w + 1]):
                v = indices[p]
                if dist[v] == dw:
                    c = sigma[v] * coeff
                    edge_bc[slot_edge[p]] += c
                    delta[v] += c
            node_bc[w] += delta[w]
        for i in range(tail):
            v = order[i]
            dist[v] = -1
            sigma[v] = 0.0
            delta[v] = 0.0
    return node_bc, edge_bc


@njit(cache=True, nogil=True)
def triangle_counts(indptr, indices):
    """Number of triangles through each node (sorted neighbor lists required)."""
    n = len(indptr) - 1
    tri = np.zeros(n, dtype=np.int64)
    for u in range(n):
        for p in range(indptr[u], indptr[u + 1]):
            v = indices[p]
            if v <= u:
                continue
            # common neighbors w > v of u and v
            a = indptr[u]
            a_end = indptr[u + 1]
            b = indptr[v]
            b_end = indptr[v + 1]
            while a < a_end and indices[a] <= v:
                a += 1
            while b < b_end and indices[b] <= v:
                b += 1
            while a < a_end and b < b_end:
                x = indices[a]
                y = indices[b]
                if x == y:
                    tri[u] += 1
                    tri[v] += 1
                    tri[x] += 1
                    a += 1
                    b += 1
                elif x < y:
                    a += 1
                else:
                    b += 1
    return tri
