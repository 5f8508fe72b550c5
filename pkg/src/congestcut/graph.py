"""Undirected simple graphs with integer weights, cut arithmetic and traversals.

Vertices are the dense ids ``0..n-1``. Edges are stored once, canonically as
``(u, v)`` with ``u < v``, sorted lexicographically; the position of an edge in
that order is its *edge id* and is used everywhere for deterministic tie
breaking.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np


class GraphError(ValueError):
    """Raised for malformed graphs or invalid vertex sets."""


class CapacityError(ValueError):
    """Raised when an exhaustive routine is called on a graph that is too large."""


DEFAULT_WEIGHT_EXPONENT = 4
EXHAUSTIVE_LIMIT = 20


class Graph:
    """Immutable undirected simple graph.

    Attributes:
        n: number of vertices.
        eu, ev: endpoint arrays (``eu[i] < ev[i]``) of edge ``i``.
        w: integer weight of every edge.
        indptr, nbr, nbr_eid: CSR adjacency; the neighbours of ``x`` are
            ``nbr[indptr[x]:indptr[x+1]]`` reached via edges ``nbr_eid[...]``.
    """

    def __init__(self, n: int, edges: Iterable[Sequence[int]], weights: Iterable[int] | None = None,
                 weight_exponent: int = DEFAULT_WEIGHT_EXPONENT, check_weights: bool = True):
        if n < 0:
            raise GraphError("vertex count must be nonnegative")
        pairs = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        if weights is None:
            wts = np.ones(len(pairs), dtype=np.int64)
        else:
            wts = np.asarray(list(weights), dtype=np.int64).reshape(-1)
            if len(wts) != len(pairs):
                raise GraphError("one weight per edge is required")
        if len(pairs):
            if pairs.min() < 0 or pairs.max() >= n:
                raise GraphError("edge endpoint out of range")
            if np.any(pairs[:, 0] == pairs[:, 1]):
                raise GraphError("self-loops are not allowed")
        lo = np.minimum(pairs[:, 0], pairs[:, 1])
        hi = np.maximum(pairs[:, 0], pairs[:, 1])
        order = np.lexsort((hi, lo))
        lo, hi, wts = lo[order], hi[order], wts[order]
        if len(lo) > 1:
            dup = (lo[1:] == lo[:-1]) & (hi[1:] == hi[:-1])
            if dup.any():
                i = int(np.flatnonzero(dup)[0])
                raise GraphError(f"duplicate edge ({lo[i]}, {hi[i]})")
        if len(wts) and wts.min() < 1:
            raise GraphError("weights must be positive integers")
        self.weight_exponent = weight_exponent
        if check_weights and len(wts) and n > 1 and int(wts.max()) > n ** weight_exponent:
            raise GraphError(f"weight {int(wts.max())} exceeds n^{weight_exponent}")
        self.n = int(n)
        self.eu = lo
        self.ev = hi
        self.w = wts
        for arr in (self.eu, self.ev, self.w):
            arr.setflags(write=False)
        self._build_adjacency()
        self._edge_index: dict[tuple[int, int], int] | None = None

    def _build_adjacency(self) -> None:
        m = len(self.eu)
        src = np.concatenate([self.eu, self.ev])
        dst = np.concatenate([self.ev, self.eu])
        eid = np.concatenate([np.arange(m), np.arange(m)])
        order = np.lexsort((eid, dst, src))
        self.nbr = dst[order]
        self.nbr_eid = eid[order]
        counts = np.bincount(src, minlength=self.n) if m else np.zeros(self.n, dtype=np.int64)
        self.indptr = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
        self.degree = counts.astype(np.int64)
        self.wdegree = (np.bincount(self.eu, weights=self.w, minlength=self.n)
                        + np.bincount(self.ev, weights=self.w, minlength=self.n)).astype(np.int64) \
            if m else np.zeros(self.n, dtype=np.int64)

    @property
    def m(self) -> int:
        return len(self.eu)

    @property
    def weighted(self) -> bool:
        return bool(self.m and self.w.max() > 1)

    def edges(self) -> list[tuple[int, int]]:
        return list(zip(self.eu.tolist(), self.ev.tolist()))

    def neighbors(self, x: int) -> np.ndarray:
        return self.nbr[self.indptr[x]:self.indptr[x + 1]]

    def incident(self, x: int) -> np.ndarray:
        return self.nbr_eid[self.indptr[x]:self.indptr[x + 1]]

    def edge_id(self, u: int, v: int) -> int:
        if self._edge_index is None:
            self._edge_index = {(a, b): i for i, (a, b) in enumerate(self.edges())}
        key = (u, v) if u < v else (v, u)
        if key not in self._edge_index:
            raise KeyError(f"no edge {key}")
        return self._edge_index[key]

    def has_edge(self, u: int, v: int) -> bool:
        try:
            self.edge_id(u, v)
        except KeyError:
            return False
        return True

    def min_degree(self) -> int:
        return int(self.degree.min()) if self.n else 0

    def min_weighted_degree(self) -> int:
        return int(self.wdegree.min()) if self.n else 0

    def edge_subgraph(self, edge_ids) -> "Graph":
        """Graph on the same vertex set keeping only ``edge_ids`` (order preserved)."""
        ids = as_edge_ids(self, edge_ids)
        return Graph(self.n, np.stack([self.eu[ids], self.ev[ids]], axis=1), self.w[ids],
                     weight_exponent=self.weight_exponent, check_weights=False)

    def reweighted(self, weights) -> "Graph":
        return Graph(self.n, np.stack([self.eu, self.ev], axis=1), weights,
                     weight_exponent=self.weight_exponent, check_weights=False)

    def adjacency_matrix(self, dtype=np.int64) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=dtype)
        a[self.eu, self.ev] = self.w
        a[self.ev, self.eu] = self.w
        return a

    def validate(self) -> None:
        """Check that the CSR adjacency agrees with the edge list."""
        seen = np.zeros(self.m, dtype=np.int64)
        for x in range(self.n):
            for y, e in zip(self.neighbors(x).tolist(), self.incident(x).tolist()):
                if {x, y} != {int(self.eu[e]), int(self.ev[e])}:
                    raise GraphError(f"adjacency of {x} lists edge {e} with wrong endpoints")
                seen[e] += 1
        if np.any(seen != 2):
            raise GraphError("every edge must appear in exactly two adjacency lists")

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m}, weighted={self.weighted})"

    def __eq__(self, other) -> bool:
        return (isinstance(other, Graph) and self.n == other.n
                and np.array_equal(self.eu, other.eu) and np.array_equal(self.ev, other.ev)
                and np.array_equal(self.w, other.w))

    __hash__ = None


def as_edge_ids(g: Graph, edges) -> np.ndarray:
    """Normalise an edge filter (bool mask, id list or ``None`` for all) to sorted ids."""
    if edges is None:
        return np.arange(g.m)
    arr = np.asarray(edges)
    if arr.dtype == bool:
        if len(arr) != g.m:
            raise GraphError("edge mask has wrong length")
        return np.flatnonzero(arr)
    return np.unique(arr.astype(np.int64))


def as_mask(n: int, s) -> np.ndarray:
    """Boolean membership vector for a vertex set given as ids or a mask."""
    arr = np.asarray(s)
    if arr.dtype == bool:
        if len(arr) != n:
            raise GraphError("vertex mask has wrong length")
        return arr.copy()
    mask = np.zeros(n, dtype=bool)
    ids = np.asarray(list(s) if not isinstance(s, np.ndarray) else s, dtype=np.int64)
    if len(ids) and (ids.min() < 0 or ids.max() >= n):
        raise GraphError("vertex id out of range")
    mask[ids] = True
    return mask


def _proper(g: Graph, s) -> np.ndarray:
    mask = as_mask(g.n, s)
    k = int(mask.sum())
    if k == 0 or k == g.n:
        raise GraphError("vertex set must be a nonempty proper subset")
    return mask


def crossing_edges(g: Graph, s) -> np.ndarray:
    """Ids of edges with exactly one endpoint in ``s``."""
    mask = as_mask(g.n, s)
    return np.flatnonzero(mask[g.eu] != mask[g.ev])


def cut_weight(g: Graph, s) -> int:
    """Total weight of edges leaving ``s``."""
    mask = _proper(g, s)
    return int(g.w[mask[g.eu] != mask[g.ev]].sum())


def volume(g: Graph, s) -> int:
    """Sum of unweighted degrees over ``s``."""
    return int(g.degree[as_mask(g.n, s)].sum())


def conductance(g: Graph, s) -> Fraction:
    """Exact conductance of ``s``: unweighted crossing count over the smaller side volume."""
    mask = _proper(g, s)
    crossing = int(np.count_nonzero(mask[g.eu] != mask[g.ev]))
    vol_s = int(g.degree[mask].sum())
    denom = min(vol_s, 2 * g.m - vol_s)
    if denom == 0:
        raise GraphError("conductance undefined: a side has zero volume")
    return Fraction(crossing, denom)


def subset_masks(n: int, fixed: int | None = 0):
    """Yield boolean matrices covering all subsets in chunks (bit ``i`` = vertex ``i``).

    With ``fixed`` set, only subsets containing that vertex are produced (one side of
    each bipartition); the full set is skipped.
    """
    free = [i for i in range(n) if i != fixed] if fixed is not None else list(range(n))
    total = 1 << len(free)
    chunk = 1 << 15
    bits = np.arange(len(free), dtype=np.int64)
    for start in range(0, total, chunk):
        codes = np.arange(start, min(total, start + chunk), dtype=np.int64)
        sub = ((codes[:, None] >> bits[None, :]) & 1).astype(bool)
        out = np.zeros((len(codes), n), dtype=bool)
        out[:, free] = sub
        if fixed is not None:
            out[:, fixed] = True
        yield out


def graph_conductance_exhaustive(g: Graph) -> Fraction:
    """Minimum conductance over all nonempty proper subsets (``n <= 20``)."""
    if g.n > EXHAUSTIVE_LIMIT:
        raise CapacityError(f"exhaustive conductance needs n <= {EXHAUSTIVE_LIMIT}")
    if g.n < 2 or g.m == 0:
        raise GraphError("conductance needs at least one edge")
    best: Fraction | None = None
    total = 2 * g.m
    for block in subset_masks(g.n, fixed=0):
        block = block[block.sum(axis=1) < g.n]
        cross = (block[:, g.eu] != block[:, g.ev]).sum(axis=1)
        vol = block.astype(np.int64) @ g.degree
        denom = np.minimum(vol, total - vol)
        ok = denom > 0
        if not ok.any():
            continue
        cross, denom = cross[ok], denom[ok]
        ratio = cross / denom
        lo = ratio.min()
        for i in np.flatnonzero(ratio <= lo * (1 + 1e-12)):
            cand = Fraction(int(cross[i]), int(denom[i]))
            if best is None or cand < best:
                best = cand
    return best


def connected_components(g: Graph, edge_filter=None) -> list[np.ndarray]:
    """Components of the subgraph spanned by ``edge_filter``, ordered by smallest member.

    Vertices touching no filtered edge are left out.
    """
    ids = as_edge_ids(g, edge_filter)
    if len(ids) == 0:
        return []
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components as cc

    a = coo_matrix((np.ones(len(ids)), (g.eu[ids], g.ev[ids])), shape=(g.n, g.n))
    _, labels = cc(a, directed=False)
    touched = np.zeros(g.n, dtype=bool)
    touched[g.eu[ids]] = True
    touched[g.ev[ids]] = True
    groups: dict[int, list[int]] = {}
    for x in np.flatnonzero(touched).tolist():
        groups.setdefault(int(labels[x]), []).append(x)
    comps = [np.asarray(v, dtype=np.int64) for v in groups.values()]
    comps.sort(key=lambda c: int(c[0]))
    return comps


def component_labels(g: Graph, edge_filter=None) -> np.ndarray:
    """Per-vertex component label over the filtered edges (isolated vertices get their own)."""
    ids = as_edge_ids(g, edge_filter)
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components as cc

    a = coo_matrix((np.ones(len(ids)), (g.eu[ids], g.ev[ids])), shape=(g.n, g.n))
    return cc(a, directed=False)[1]


def is_connected(g: Graph, edge_filter=None) -> bool:
    if g.n <= 1:
        return True
    return len(np.unique(component_labels(g, edge_filter))) == 1


def bfs(g: Graph, root: int, edge_filter=None) -> "RootedTree":
    """Breadth-first tree from ``root`` over the filtered edges.

    Neighbours are scanned in edge-id order so the tree is deterministic.
    """
    from .tree import RootedTree

    allowed = None
    if edge_filter is not None:
        allowed = np.zeros(g.m, dtype=bool)
        allowed[as_edge_ids(g, edge_filter)] = True
    parent = np.full(g.n, -1, dtype=np.int64)
    level = np.full(g.n, -1, dtype=np.int64)
    level[root] = 0
    queue = deque([root])
    while queue:
        x = queue.popleft()
        lo, hi = g.indptr[x], g.indptr[x + 1]
        for y, e in zip(g.nbr[lo:hi].tolist(), g.nbr_eid[lo:hi].tolist()):
            if level[y] >= 0 or (allowed is not None and not allowed[e]):
                continue
            level[y] = level[x] + 1
            parent[y] = x
            queue.append(y)
    return RootedTree.from_parents(root, parent, level >= 0)


def bfs_levels(g: Graph, root: int, edge_filter=None) -> np.ndarray:
    """Unweighted distances from ``root`` (``-1`` where unreachable)."""
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import breadth_first_order

    ids = as_edge_ids(g, edge_filter)
    a = coo_matrix((np.ones(len(ids)), (g.eu[ids], g.ev[ids])), shape=(g.n, g.n)).tocsr()
    order, pred = breadth_first_order(a, root, directed=False, return_predecessors=True)
    level = np.full(g.n, -1, dtype=np.int64)
    level[root] = 0
    for x in order[1:].tolist():
        level[x] = level[pred[x]] + 1
    return level


def eccentricity(g: Graph, root: int, edge_filter=None) -> int:
    return int(bfs_levels(g, root, edge_filter).max())


def diameter_estimate(g: Graph) -> tuple[int, int]:
    """Double-sweep BFS: returns ``(D_lower, D_upper)`` with ``D_lower <= D <= D_upper = 2*D_lower``.

    The sweep starts at vertex 0, restarts from a farthest vertex and reports that
    vertex's eccentricity as the lower bound.
    """
    if g.n <= 1:
        return 0, 0
    lv = bfs_levels(g, 0)
    far = int(np.argmax(lv))
    ecc = int(bfs_levels(g, far).max())
    return ecc, 2 * ecc


@dataclass(frozen=True)
class CutResult:
    """A bipartition canonicalised to the side containing the smallest vertex id."""

    side: tuple[int, ...]
    value: int
    crossing_edges: tuple[tuple[int, int], ...] = field(default=())

    @staticmethod
    def from_side(g: Graph, s) -> "CutResult":
        mask = _proper(g, s)
        if not mask[0]:
            mask = ~mask
        ids = np.flatnonzero(mask[g.eu] != mask[g.ev])
        return CutResult(tuple(np.flatnonzero(mask).tolist()), int(g.w[ids].sum()),
                         tuple(zip(g.eu[ids].tolist(), g.ev[ids].tolist())))

    def to_dict(self) -> dict:
        return {"value": self.value, "side": list(self.side),
                "crossing_edges": [list(e) for e in self.crossing_edges]}
