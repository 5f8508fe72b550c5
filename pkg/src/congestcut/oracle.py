"""Ground-truth minimum cuts and seeded graph generators.

Nothing in here is used by the distributed pipeline itself; these routines are
the independent reference the pipeline is checked against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import (EXHAUSTIVE_LIMIT, CapacityError, CutResult, Graph, GraphError,
                    component_labels, subset_masks)


def stoer_wagner(g: Graph) -> CutResult:
    """Exact global minimum cut (dense Stoer-Wagner, O(n^3))."""
    if g.n < 2:
        raise GraphError("a cut needs at least two vertices")
    labels = component_labels(g)
    if len(np.unique(labels)) > 1:
        return CutResult.from_side(g, labels == labels[0])
    W = g.adjacency_matrix()
    members = [[x] for x in range(g.n)]
    active = np.ones(g.n, dtype=bool)
    best_value = None
    best_side: list[int] = []
    for _ in range(g.n - 1):
        verts = np.flatnonzero(active)
        start = int(verts[0])
        added = ~active.copy()
        added[start] = True
        key = W[start].copy()
        prev, last = start, start
        for _ in range(len(verts) - 1):
            cand = np.where(added, -1, key)
            nxt = int(np.argmax(cand))
            added[nxt] = True
            prev, last = last, nxt
            key += W[nxt]
        cut = int(key[last])
        if best_value is None or cut < best_value:
            best_value = cut
            best_side = list(members[last])
        W[prev] += W[last]
        W[:, prev] += W[:, last]
        W[prev, prev] = 0
        W[last] = 0
        W[:, last] = 0
        members[prev].extend(members[last])
        active[last] = False
    res = CutResult.from_side(g, best_side)
    assert res.value == best_value
    return res


@dataclass(frozen=True)
class MinCutEnumeration:
    lam: int
    cuts: tuple[tuple[int, ...], ...]

    def masks(self, n: int) -> np.ndarray:
        out = np.zeros((len(self.cuts), n), dtype=bool)
        for i, side in enumerate(self.cuts):
            out[i, list(side)] = True
        return out

    def nontrivial(self, n: int) -> list[tuple[int, ...]]:
        return [c for c in self.cuts if 1 < len(c) < n - 1]


def all_cut_values(g: Graph):
    """Yield ``(masks, values)`` blocks over every bipartition (side holding vertex 0)."""
    if g.n > EXHAUSTIVE_LIMIT:
        raise CapacityError(f"exhaustive cut enumeration needs n <= {EXHAUSTIVE_LIMIT}")
    w = g.w.astype(np.int64)
    for block in subset_masks(g.n, fixed=0):
        block = block[block.sum(axis=1) < g.n]
        if len(block) == 0:
            continue
        vals = (block[:, g.eu] != block[:, g.ev]).astype(np.int64) @ w
        yield block, vals


def enumerate_min_cuts(g: Graph) -> MinCutEnumeration:
    """Every bipartition achieving the minimum cut value (``n <= 20``)."""
    if g.n > EXHAUSTIVE_LIMIT:
        raise CapacityError(f"exhaustive cut enumeration needs n <= {EXHAUSTIVE_LIMIT}")
    if g.n < 2:
        raise GraphError("a cut needs at least two vertices")
    lam = None
    cuts: list[tuple[int, ...]] = []
    for block, vals in all_cut_values(g):
        lo = int(vals.min())
        if lam is None or lo < lam:
            lam, cuts = lo, []
        if lo == lam:
            for row in block[vals == lam]:
                cuts.append(tuple(np.flatnonzero(row).tolist()))
    return MinCutEnumeration(lam, tuple(cuts))


# ---------------------------------------------------------------- generators

def gnp(n: int, p: float, seed: int = 0, connected: bool = False) -> Graph:
    """Erdos-Renyi graph. With ``connected`` the draw is repeated until connected."""
    if not 0 <= p <= 1:
        raise GraphError("p must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    iu, iv = np.triu_indices(n, k=1)
    for _ in range(1000):
        keep = rng.random(len(iu)) < p
        g = Graph(n, np.stack([iu[keep], iv[keep]], axis=1))
        if not connected or _connected(g):
            return g
    raise GraphError(f"could not draw a connected G({n}, {p})")


def _connected(g: Graph) -> bool:
    return g.n <= 1 or len(np.unique(component_labels(g))) == 1


def with_random_weights(g: Graph, seed: int = 0, max_weight: int | None = None) -> Graph:
    """Same edges, weights uniform in ``1..max_weight`` (default ``n**4``)."""
    rng = np.random.default_rng(seed)
    top = max_weight if max_weight is not None else max(1, g.n) ** g.weight_exponent
    return g.reweighted(rng.integers(1, top + 1, size=g.m))


def weighted_gnp(n: int, p: float, seed: int = 0, max_weight: int | None = None) -> Graph:
    g = gnp(n, p, seed, connected=True)
    return with_random_weights(g, seed + 7919, max_weight)


def path(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("a cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def clique(n: int) -> Graph:
    iu, iv = np.triu_indices(n, k=1)
    return Graph(n, np.stack([iu, iv], axis=1))


def star(n: int) -> Graph:
    return Graph(n, [(0, i) for i in range(1, n)])


def grid(rows: int, cols: int) -> Graph:
    edges = []
    for r in range(rows):
        for c in range(cols):
            x = r * cols + c
            if c + 1 < cols:
                edges.append((x, x + 1))
            if r + 1 < rows:
                edges.append((x, x + cols))
    return Graph(rows * cols, edges)


def random_tree(n: int, seed: int = 0) -> Graph:
    rng = np.random.default_rng(seed)
    return Graph(n, [(int(rng.integers(0, i)), i) for i in range(1, n)])


def barbell(clique_size: int, bridge_count: int) -> Graph:
    """Two disjoint cliques with ``bridge_count`` vertex-disjoint bridges between them."""
    s = clique_size
    if s < 2 or not 1 <= bridge_count <= s:
        raise GraphError("barbell needs clique_size >= 2 and 1 <= bridge_count <= clique_size")
    iu, iv = np.triu_indices(s, k=1)
    edges = list(zip(iu.tolist(), iv.tolist())) + list(zip((iu + s).tolist(), (iv + s).tolist()))
    edges += [(i, s + i) for i in range(bridge_count)]
    return Graph(2 * s, edges)


def disjoint_union(*graphs: Graph) -> tuple[Graph, list[int]]:
    """Vertex-disjoint union; returns the graph and each part's id offset."""
    edges, weights, offsets, off = [], [], [], 0
    for h in graphs:
        offsets.append(off)
        edges += [(a + off, b + off) for a, b in h.edges()]
        weights += h.w.tolist()
        off += h.n
    return Graph(off, edges, weights, check_weights=False), offsets


def planted_cut(n: int, k: int, seed: int = 0, p_in: float = 0.5, shuffle: bool = True) -> Graph:
    """Two dense random halves joined by exactly ``k`` vertex-disjoint bridges; ``lambda == k``.

    Each half is redrawn until its own edge connectivity exceeds ``k``, so every cut
    other than the planted one crosses more than ``k`` edges. Vertex ids are
    shuffled unless ``shuffle`` is false.
    """
    h1, h2 = n // 2, n - n // 2
    if k < 1 or k > h1 - 2:
        raise GraphError(f"planted_cut({n}, {k}): need 1 <= k <= n//2 - 2")
    rng = np.random.default_rng(seed)
    halves = []
    for size in (h1, h2):
        for _ in range(200):
            sub = gnp(size, p_in, int(rng.integers(2 ** 31)))
            if sub.min_degree() > k and _connected(sub) and stoer_wagner(sub).value > k:
                halves.append(sub)
                break
        else:
            raise GraphError(f"planted_cut({n}, {k}): halves too sparse for p_in={p_in}")
    edges = [e for e in halves[0].edges()] + [(a + h1, b + h1) for a, b in halves[1].edges()]
    left = rng.choice(h1, size=k, replace=False)
    right = rng.choice(h2, size=k, replace=False) + h1
    edges += list(zip(left.tolist(), right.tolist()))
    if shuffle:
        perm = rng.permutation(n)
        edges = [(int(perm[a]), int(perm[b])) for a, b in edges]
    return Graph(n, edges)
