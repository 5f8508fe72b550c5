"""Vectorised Borůvka for minimum spanning forests under a strict total order.

Every caller in this package supplies distinct keys (ties are always broken by
edge id), so the minimum spanning forest is unique and Borůvka's simultaneous
hooking can never close a cycle.
"""

from __future__ import annotations

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components


def rank_keys(*keys) -> np.ndarray:
    """Dense ranks for lexicographic keys; the last key is the most significant."""
    order = np.lexsort(keys)
    rank = np.empty(len(order), dtype=np.int64)
    rank[order] = np.arange(len(order))
    return rank


def boruvka(n: int, eu: np.ndarray, ev: np.ndarray, rank: np.ndarray | None = None) -> np.ndarray:
    """Indices of the minimum spanning forest edges, ranks taken as the order.

    ``rank`` must be a permutation-like array of distinct integers; by default the
    edge index itself (which makes the result the spanning forest preferring
    smaller edge ids).
    """
    m = len(eu)
    if m == 0:
        return np.zeros(0, dtype=np.int64)
    if rank is None:
        rank = np.arange(m, dtype=np.int64)
    by_rank = np.empty(int(rank.max()) + 1, dtype=np.int64)
    by_rank[rank] = np.arange(m)
    comp = np.arange(n, dtype=np.int64)
    chosen: list[np.ndarray] = []
    alive = np.arange(m)
    sentinel = np.iinfo(np.int64).max
    while len(alive):
        cu, cv = comp[eu[alive]], comp[ev[alive]]
        keep = cu != cv
        alive, cu, cv = alive[keep], cu[keep], cv[keep]
        if not len(alive):
            break
        r = rank[alive]
        best = np.full(n, sentinel, dtype=np.int64)
        np.minimum.at(best, cu, r)
        np.minimum.at(best, cv, r)
        picked = np.unique(by_rank[best[best != sentinel]])
        chosen.append(picked)
        a = coo_matrix((np.ones(len(picked)), (comp[eu[picked]], comp[ev[picked]])), shape=(n, n))
        _, lab = connected_components(a, directed=False)
        comp = lab[comp]
    if not chosen:
        return np.zeros(0, dtype=np.int64)
    return np.sort(np.concatenate(chosen))


def spanning_forest(g, edge_ids=None, rank=None) -> np.ndarray:
    """Borůvka forest of the subgraph on ``edge_ids`` (graph edge ids returned)."""
    ids = np.arange(g.m) if edge_ids is None else np.asarray(edge_ids, dtype=np.int64)
    sub_rank = None if rank is None else rank_keys(ids, np.asarray(rank)[ids])
    local = boruvka(g.n, g.eu[ids], g.ev[ids], sub_rank)
    return ids[local]
