"""Minimum cuts that cut at most two edges of some spanning tree.

For a rooted tree ``T`` write ``desc(v)`` for the vertex set of the subtree of
``v``. Every cut crossing at most two tree edges has the form ``desc(v)`` or
``desc(u) xor desc(v)``, so the global minimum cut can be read off two tables:
``C1[v] = w(boundary of desc(v))`` and ``X[u, v]``, the weight of edges lying on
the boundary of both subtrees. The value of the pair cut is
``C1[u] + C1[v] - 2 X[u, v]``.

The tables are built here from 2-D prefix sums over the adjacency matrix laid
out in preorder (every subtree is a contiguous index interval). The recursion
used by the distributed protocol (local per-vertex contributions aggregated up
the tree) is implemented alongside and used as an independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import congest
from .certificate import lambda_oracle
from .config import Config
from .congest import Transcript, charge_oracle
from .forest import boruvka, rank_keys
from .graph import CutResult, Graph, GraphError, as_edge_ids, cut_weight, diameter_estimate, is_connected
from .tree import RootedTree


# ------------------------------------------------------------------ packing

@dataclass
class TreePacking:
    trees: list[np.ndarray]          # edge ids of each tree (in the packed graph)
    load: np.ndarray                 # number of trees using each edge

    def __len__(self) -> int:
        return len(self.trees)


def greedy_tree_packing(g: Graph, count: int, weights: np.ndarray | None = None) -> TreePacking:
    """Greedy packing: tree ``i`` is an MST under the loads of trees ``1..i-1``.

    An edge of weight ``w`` stands for ``w`` parallel unit edges, so the key is
    ``load / w``, then ``load``, then edge id. Edges of weight zero are ignored.
    """
    if count < 1:
        raise ValueError("count must be positive")
    w = g.w if weights is None else np.asarray(weights, dtype=np.int64)
    live = np.flatnonzero(w > 0)
    if not is_connected(g, live):
        raise GraphError("tree packing needs a connected graph")
    load = np.zeros(g.m, dtype=np.int64)
    trees = []
    ids = np.arange(g.m)
    for _ in range(count):
        rank = rank_keys(ids[live], load[live], load[live] / w[live])
        t = live[boruvka(g.n, g.eu[live], g.ev[live], rank)]
        load[t] += 1
        trees.append(t)
    return TreePacking(trees, load)


def skeleton_sample(g: Graph, lam_estimate: float, seed: int = 0, c_skel: float = 4.0
                    ) -> tuple[np.ndarray, float, int]:
    """Keep ``Binomial(w(e), p)`` of every edge's weight with ``p = 2^-i``.

    ``i`` is the smallest nonnegative integer bringing ``lam_estimate * p`` down to
    about ``c_skel * log2(n)^1.1``. Returns ``(retained weights, p, i)``.
    """
    if lam_estimate < 1:
        raise ValueError("lambda estimate must be at least 1")
    target = c_skel * max(math.log2(max(g.n, 2)), 1.0) ** 1.1
    i = max(0, math.ceil(math.log2(lam_estimate / target)))
    if i == 0:
        return g.w.copy(), 1.0, 0
    p = 2.0 ** -i
    rng = np.random.default_rng([seed, 15485863])
    return rng.binomial(g.w, p).astype(np.int64), p, i


def _complete(g: Graph, forest: np.ndarray) -> np.ndarray:
    # extend a forest to a spanning tree of g: forest edges first, then g by edge id
    rank = np.arange(g.m, dtype=np.int64) + len(forest)
    rank[forest] = np.arange(len(forest))
    order = np.argsort(rank)
    rank_dense = np.empty(g.m, dtype=np.int64)
    rank_dense[order] = np.arange(g.m)
    return boruvka(g.n, g.eu, g.ev, rank_dense)


@dataclass
class TreeSet:
    trees: list[RootedTree]
    edge_sets: list[np.ndarray]
    p: float
    count: int
    lam_estimate: int
    skeleton_connected: bool
    distinct: int = 0


def tree_count(n: int, c_pack: float) -> int:
    return max(1, math.ceil(c_pack * max(math.log2(max(n, 2)), 1.0) ** 2.2))


def spanning_tree_set(g: Graph, seed: int = 0, cfg: Config | None = None, lam_estimate: int | None = None,
                      transcript: Transcript | None = None, diameter: int | None = None,
                      extra_weights: np.ndarray | None = None) -> TreeSet:
    """Skeleton sample, greedy packing on it, completion to spanning trees of ``g``.

    ``extra_weights`` lets the caller pack on different weights than ``g.w`` (used
    for contracted graphs). Trees are rooted at vertex 0.
    """
    cfg = cfg or Config()
    if not is_connected(g):
        raise GraphError("spanning tree set needs a connected graph")
    D = diameter if diameter is not None else diameter_estimate(g)[1]
    if lam_estimate is None:
        lam_estimate = lambda_oracle(g, 1.0 - 1e-9, seed, cfg, transcript, D, label="lambda_estimate")
    base = g if extra_weights is None else g.reweighted(extra_weights)
    kept, p, _ = skeleton_sample(base, max(lam_estimate, 1), seed, cfg.c_skel)
    count = tree_count(g.n, cfg.c_pack)
    live = kept > 0
    connected = is_connected(g, live)
    if connected:
        packing = greedy_tree_packing(base, count, kept)
        edge_sets = packing.trees
    else:
        # pack every component of the skeleton, then join them with g-edges
        load = np.zeros(g.m, dtype=np.int64)
        ids = np.arange(g.m)
        lv = np.flatnonzero(live)
        edge_sets = []
        for _ in range(count):
            rank = rank_keys(ids[lv], load[lv], load[lv] / kept[lv]) if len(lv) else None
            f = lv[boruvka(g.n, g.eu[lv], g.ev[lv], rank)] if len(lv) else np.zeros(0, dtype=np.int64)
            load[f] += 1
            edge_sets.append(_complete(g, f))
    if transcript is not None:
        c = cfg.charge_c("c_slot_mst")
        for _ in range(count):
            charge_oracle(transcript, "c_slot_mst", n=g.n, l=1, D=D, c=c)
    trees, seen, uniq = [], {}, 0
    for t in edge_sets:
        key = t.tobytes()
        if key not in seen:
            seen[key] = RootedTree.from_edges(g.n, 0, list(zip(g.eu[t].tolist(), g.ev[t].tolist())))
            uniq += 1
        trees.append(seen[key])
    return TreeSet(trees, edge_sets, p, count, int(lam_estimate), connected, uniq)


# ------------------------------------------------------------- cut tables

@dataclass
class RespectTables:
    tree: RootedTree
    one: np.ndarray            # C(desc v); 0 at the root
    cross: np.ndarray          # X[u, v] = C(desc u, desc v); diagonal = one
    value: np.ndarray          # C(desc u xor desc v); diagonal = one


def respect_tables(g: Graph, tree: RootedTree) -> RespectTables:
    """All one- and two-edge tree cut values in O(n^2) via preorder prefix sums."""
    if tree.size != g.n:
        raise GraphError("tree must span the graph")
    n = g.n
    tin = tree.tin
    A = np.zeros((n + 1, n + 1), dtype=np.int64)
    np.add.at(A, (tin[g.eu] + 1, tin[g.ev] + 1), g.w)
    np.add.at(A, (tin[g.ev] + 1, tin[g.eu] + 1), g.w)
    S = A.cumsum(axis=0).cumsum(axis=1)
    lo, hi = tin, tree.tout
    rect = (S[hi[:, None], hi[None, :]] - S[lo[:, None], hi[None, :]]
            - S[hi[:, None], lo[None, :]] + S[lo[:, None], lo[None, :]])
    wdeg_pre = np.zeros(n + 1, dtype=np.int64)
    wdeg_pre[1:] = np.cumsum(g.wdegree[tree.preorder_arr])
    R = wdeg_pre[hi] - wdeg_pre[lo]
    one = R - np.diagonal(rect)
    # anc[v, u]: v is an ancestor of u
    anc = (lo[:, None] <= lo[None, :]) & (lo[None, :] < hi[:, None])
    cross = rect.copy()
    u_below = anc.T  # u_below[u, v]: u in desc(v)
    cross = np.where(u_below, R[:, None] - rect, cross)
    cross = np.where(anc, R[None, :] - rect, cross)
    np.fill_diagonal(cross, one)
    value = one[:, None] + one[None, :] - 2 * cross
    np.fill_diagonal(value, one)
    return RespectTables(tree, one, cross, value)


def local_contribution(g: Graph, tree: RootedTree, v: int, x: int) -> int:
    """``C(desc(v), {x})`` from what ``x`` knows: its edges and its neighbours' ancestors.

    For ``v`` not an ancestor of ``x`` this is the weight from ``x`` into
    ``desc(v)``; otherwise the weight from ``x`` to vertices outside ``desc(v)``.
    """
    inside = tree.is_ancestor(v, x)
    total = 0
    for y, e in zip(g.neighbors(x).tolist(), g.incident(x).tolist()):
        if tree.is_ancestor(v, y) != inside:
            total += int(g.w[e])
    return total


def one_respect_values(g: Graph, tree: RootedTree) -> np.ndarray:
    """``C(desc(v))`` for every ``v`` by summing local contributions over ``desc(v)``."""
    out = np.zeros(g.n, dtype=np.int64)
    for x in range(g.n):
        for v in tree.ancestors(x):
            out[v] += local_contribution(g, tree, v, x)
    out[tree.root] = 0
    return out


def cross_values(g: Graph, tree: RootedTree, u: int) -> np.ndarray:
    """``C(desc(u), desc(v))`` for every ``v`` with ``u`` outside ``desc(v)``; ``-1`` elsewhere.

    Computed as subtree sums of the per-vertex contributions ``C(desc(u), {x})``.
    """
    gx = np.array([local_contribution(g, tree, u, x) for x in range(g.n)], dtype=np.int64)
    pre = np.zeros(g.n + 1, dtype=np.int64)
    pre[1:] = np.cumsum(gx[tree.preorder_arr])
    f = pre[tree.tout] - pre[tree.tin]
    valid = np.array([not tree.is_ancestor(v, u) for v in range(g.n)])
    return np.where(valid, f, -1)


def side_of(tree: RootedTree, pair: tuple[int, ...]) -> np.ndarray:
    if len(pair) == 1:
        return tree.desc_mask(pair[0])
    return tree.desc_mask(pair[0]) ^ tree.desc_mask(pair[1])


@dataclass
class TwoRespectResult:
    value: int
    pair: tuple[int, ...]
    side: np.ndarray
    tables: RespectTables | None = field(default=None, repr=False)


def _argmin_tables(tab: RespectTables) -> tuple[int, tuple[int, ...]]:
    tree = tab.tree
    n = len(tab.one)
    ok = np.ones(n, dtype=bool)
    ok[tree.root] = False
    singles = np.where(ok, tab.one, np.iinfo(np.int64).max)
    v1 = int(np.argmin(singles))
    best_single = int(singles[v1])
    pairs = tab.value.copy()
    big = np.iinfo(np.int64).max
    pairs[~ok, :] = big
    pairs[:, ~ok] = big
    pairs[np.tril_indices(n)] = big      # keep u < v only
    flat = int(np.argmin(pairs))
    u2, v2 = divmod(flat, n)
    best_pair = int(pairs[u2, v2]) if n > 1 else big
    if best_single <= best_pair:
        return best_single, (v1,)
    return best_pair, (u2, v2)


def min_2respect(g: Graph, tree: RootedTree, keep_tables: bool = False) -> TwoRespectResult:
    """Smallest cut crossing at most two edges of ``tree``; ties to the smallest singleton, then pair."""
    if g.n < 2:
        raise GraphError("a cut needs at least two vertices")
    tab = respect_tables(g, tree)
    value, pair = _argmin_tables(tab)
    side = side_of(tree, pair)
    check = cut_weight(g, side)
    if check != value:
        raise AssertionError(f"table value {value} disagrees with recomputed cut {check} for {pair}")
    return TwoRespectResult(value, pair, side, tab if keep_tables else None)


def recover_cut_edges(g: Graph, tree: RootedTree, pair: tuple[int, ...]) -> dict[int, list[int]]:
    """Per vertex, the incident edges crossing the cut given by ``pair``.

    A vertex ``x`` is on the marked side iff exactly one of the pair's vertices is
    its ancestor, so each endpoint decides locally with ancestor tests.
    """
    def marked(x: int) -> bool:
        return sum(tree.is_ancestor(a, x) for a in pair) % 2 == 1

    side = [marked(x) for x in range(g.n)]
    out: dict[int, list[int]] = {}
    for x in range(g.n):
        for y, e in zip(g.neighbors(x).tolist(), g.incident(x).tolist()):
            if side[x] != side[y]:
                out.setdefault(x, []).append(int(e))
    return out


def _charge_tree(tr: Transcript, g: Graph, tree: RootedTree, cfg: Config, D: int) -> None:
    c = cfg.charge_c("tree_primitive")
    charge_oracle(tr, "tree_primitive", depth=tree.depth, c=c)          # ancestor downcast
    charge_oracle(tr, "tree_primitive", depth=tree.depth, c=c)          # ancestor lists to neighbours
    charge_oracle(tr, "tree_primitive", depth=tree.depth, c=c)          # one-respect aggregation
    charge_oracle(tr, "cross_values", depth=tree.depth, n=g.n, c=cfg.charge_c("cross_values"))
    charge_oracle(tr, "pair_broadcast", n=g.n, D=D, c=cfg.charge_c("pair_broadcast"))
    charge_oracle(tr, "tree_primitive", depth=tree.depth, c=c)          # global minimum


@dataclass
class ExactCutInfo:
    value: int
    tree_index: int
    pair: tuple[int, ...]
    tree_count: int
    distinct_trees: int
    p_skeleton: float
    lam_estimate: int
    skeleton_connected: bool


def min_cut_exact(g: Graph, seed: int = 0, cfg: Config | None = None, simulate: bool | None = None
                  ) -> tuple[CutResult, ExactCutInfo, Transcript]:
    """Tree-packing exact minimum cut of a connected weighted graph."""
    cfg = cfg or Config()
    simulate = cfg.simulate_protocols if simulate is None else simulate
    tr = Transcript()
    if g.n < 2:
        raise GraphError("a cut needs at least two vertices")
    D = diameter_estimate(g)[1]
    ts = spanning_tree_set(g, seed, cfg, transcript=tr, diameter=D)
    best: tuple[int, int, tuple[int, ...]] | None = None
    done: dict[int, TwoRespectResult] = {}
    simulated = 0
    for i, tree in enumerate(ts.trees):
        key = id(tree)
        if key not in done:
            if simulate and (cfg.simulate_max_trees == 0 or simulated < cfg.simulate_max_trees):
                res, sub = min_2respect_distributed(g, tree, seed, cfg)
                tr.absorb(sub, f"two_respect_tree_{i}")
                simulated += 1
            else:
                res = min_2respect(g, tree)
                _charge_tree(tr, g, tree, cfg, D)
            done[key] = res
        res = done[key]
        if best is None or res.value < best[0]:
            best = (res.value, i, res.pair)
    value, idx, pair = best
    tree = ts.trees[idx]
    recover_cut_edges(g, tree, pair)
    charge_oracle(tr, "broadcast", D=D, c=cfg.charge_c("broadcast"))
    cut = CutResult.from_side(g, side_of(tree, pair))
    assert cut.value == value
    info = ExactCutInfo(value, idx, pair, ts.count, ts.distinct, ts.p, ts.lam_estimate, ts.skeleton_connected)
    return cut, info, tr


# ------------------------------------------------- message-level simulation

class _NeighbourAncestors(congest.NodeProgram):
    # every node streams its ancestor list (root first, then itself) to all
    # neighbours, one id per round; a list has level + 1 entries
    def __init__(self, anc: list[int], rounds: int):
        self.anc = anc
        self.rounds = rounds
        self.heard: dict[int, list[int]] = {}

    def _send(self, ctx, r: int):
        if r - 1 < len(self.anc):
            return {y: (self.anc[r - 1],) for y in ctx.neighbors}
        return {}

    def init(self, ctx):
        if self.rounds == 0:
            ctx.halt()
            return {}
        return self._send(ctx, 1)

    def on_round(self, ctx, inbox):
        for s, (a,) in inbox:
            self.heard.setdefault(s, []).append(a)
        if ctx.round >= self.rounds:
            ctx.halt()
            return {}
        return self._send(ctx, ctx.round + 1)


def min_2respect_distributed(g: Graph, tree: RootedTree, seed: int = 0, cfg: Config | None = None
                             ) -> tuple[TwoRespectResult, Transcript]:
    """Message-level run of the table construction on the network ``g``.

    Steps: ancestors by downcast; ancestor lists to neighbours; ``C(desc v)`` by
    descendant-sum aggregation; all ``C(desc u, desc v)`` by one convergecast of
    ``n`` functions. The final exchange of one-respect values and the global
    minimum are charged.
    """
    cfg = cfg or Config()
    if tree.size != g.n:
        raise GraphError("tree must span the graph")
    kw = dict(bandwidth=cfg.bandwidth, audit=cfg.audit_bandwidth, word_exponent=g.weight_exponent + 2)
    tr = Transcript()
    t1, received = congest.downcast(tree, list(range(g.n)), seed=seed, **kw)
    tr.absorb(t1, "ancestor_downcast")
    anc = [received[x] + [x] for x in range(g.n)]
    progs = [_NeighbourAncestors(anc[x], tree.depth + 1) for x in range(g.n)]
    t2 = congest.run(g, progs, seed=seed, **kw)
    tr.absorb(t2, "ancestor_exchange")
    anc_sets = [set(a) for a in anc]
    nb_anc = [{y: set(lst) for y, lst in progs[x].heard.items()} for x in range(g.n)]
    wmap = [dict(zip(g.neighbors(x).tolist(), g.w[g.incident(x)].tolist())) for x in range(g.n)]

    def contrib(v: int, x: int) -> int:
        inside = v in anc_sets[x]
        return sum(wt for y, wt in wmap[x].items() if (v in nb_anc[x][y]) != inside)

    t3, one = congest.aggregate_descendant_sums(tree, contrib, seed=seed, **kw)
    tr.absorb(t3, "one_respect_aggregate")
    one[tree.root] = 0
    gmat = np.array([[contrib(u, x) for u in range(g.n)] for x in range(g.n)], dtype=np.int64)
    t4, F = congest.convergecast_subtree(tree, gmat, seed=seed, **kw)
    tr.absorb(t4, "cross_convergecast")
    # F[v, u] = C(desc u, desc v), meaningful when u is not in desc(v)
    n = g.n
    cross = np.zeros((n, n), dtype=np.int64)
    for u in range(n):
        for v in range(n):
            if u == v:
                cross[u, v] = one[u]
            elif not tree.is_ancestor(v, u):
                cross[u, v] = F[v, u]
            else:
                cross[u, v] = F[u, v]
    value = one[:, None] + one[None, :] - 2 * cross
    np.fill_diagonal(value, one)
    tab = RespectTables(tree, one, cross, value)
    D = diameter_estimate(g)[1]
    charge_oracle(tr, "pair_broadcast", n=n, D=D, c=cfg.charge_c("pair_broadcast"))
    charge_oracle(tr, "tree_primitive", depth=tree.depth, c=cfg.charge_c("tree_primitive"))
    val, pair = _argmin_tables(tab)
    side = side_of(tree, pair)
    check = cut_weight(g, side)
    if check != val:
        raise AssertionError(f"simulated table value {val} disagrees with recomputed cut {check}")
    return TwoRespectResult(val, pair, side, tab), tr


# --------------------------------------------------------- contracted graphs

def build_mapping(cg, tree: RootedTree) -> dict:
    """Physical edges realising the contracted tree plus one BFS tree per cluster.

    ``cg`` is a :class:`~congestcut.contraction.ContractedGraph`. Returns
    ``{"edges": multiset as {edge id: multiplicity}, "leaders": {super: r_C},
    "cluster_depths": {super: depth}}``. Edge ids refer to ``cg.base``.
    """
    from .graph import bfs

    g = cg.base
    counts: dict[int, int] = {}
    leaders: dict[int, int] = {}
    depths: dict[int, int] = {}
    for p, c in tree.edges():
        e = cg.representative_edge(p, c)
        counts[e] = counts.get(e, 0) + 1
    for s, cluster in cg.cluster_of_super.items():
        core = cg.members[s]
        if tree.parent[s] >= 0:
            e = cg.representative_edge(int(tree.parent[s]), s)
            a, b = int(g.eu[e]), int(g.ev[e])
            r = a if cg.super_of[a] == s else b
        else:
            r = int(min(core))
        leaders[s] = r
        inside = np.zeros(g.n, dtype=bool)
        inside[list(cluster)] = True
        filt = np.flatnonzero(inside[g.eu] & inside[g.ev])
        bt = bfs(g, r, filt)
        if int(bt.members.sum()) != len(cluster):
            raise GraphError(f"cluster of super-vertex {s} is disconnected")
        depths[s] = bt.depth
        for pp, cc in bt.edges():
            e = g.edge_id(pp, cc)
            counts[e] = counts.get(e, 0) + 1
    if counts and max(counts.values()) > 2:
        raise AssertionError("an edge appears more than twice in the mapping")
    return {"edges": counts, "leaders": leaders, "cluster_depths": depths}


def min_cut_contracted(g: Graph, cg, seed: int = 0, cfg: Config | None = None, eps: float = 0.1
                       ) -> tuple[CutResult, dict, Transcript]:
    """Minimum cut of ``g`` searched over cuts that keep every core together.

    Trees are packed on the contracted (certificate) graph ``cg.graph``; cut
    values are measured with the edges of ``g`` mapped onto super-vertices. The
    answer is compared with the smallest weighted degree of ``g``.
    """
    cfg = cfg or Config()
    tr = Transcript()
    cgraph = cg.graph
    evalg = cg.project(g)
    info: dict = {"super_vertices": cgraph.n}
    best_side = None
    best_val = None
    if cgraph.n >= 2 and is_connected(cgraph):
        D = diameter_estimate(cgraph)[1]
        ts = spanning_tree_set(cgraph, seed, cfg, transcript=None, diameter=D)
        lam_c = ts.lam_estimate
        # lambda estimate plus one packing tree each, every one a contracted-graph primitive
        for _ in range(ts.count + 1):
            charge_oracle(tr, "contracted_primitive", n=g.n, eps=eps, c=cfg.charge_c("contracted_primitive"))
        done: dict[int, TwoRespectResult] = {}
        for tree in ts.trees:
            if id(tree) in done:
                continue
            res = min_2respect(evalg, tree)
            done[id(tree)] = res
            for _ in range(5):
                charge_oracle(tr, "contracted_primitive", n=g.n, eps=eps,
                              c=cfg.charge_c("contracted_primitive"))
            charge_oracle(tr, "cross_values", depth=0, n=cgraph.n, c=cfg.charge_c("cross_values"))
            if best_val is None or res.value < best_val:
                best_val, best_side, best_tree = res.value, cg.expand(res.side), tree
        try:
            mapping = build_mapping(cg, best_tree)
            info["mapping"] = {"edges": len(mapping["edges"]),
                               "max_multiplicity": max(mapping["edges"].values(), default=0),
                               "cluster_depths": mapping["cluster_depths"]}
        except GraphError as exc:
            info["mapping_error"] = str(exc)
        info.update({"tree_count": ts.count, "distinct_trees": ts.distinct, "p_skeleton": ts.p,
                     "lambda_estimate_contracted": lam_c})
    deg_v = int(np.argmin(g.wdegree))
    deg_val = int(g.wdegree[deg_v])
    info["min_weighted_degree"] = deg_val
    if best_val is None or deg_val < best_val:
        side = np.zeros(g.n, dtype=bool)
        side[deg_v] = True
        info["answer_from"] = "degree"
    else:
        side = best_side
        info["answer_from"] = "tree"
    cut = CutResult.from_side(g, side)
    info["contracted_tree_value"] = best_val
    return cut, info, tr
