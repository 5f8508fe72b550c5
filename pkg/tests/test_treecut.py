from __future__ import annotations

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, strategies as st

from congestcut.config import Config
from congestcut.graph import Graph, GraphError, bfs, crossing_edges, cut_weight
from congestcut.oracle import (barbell, clique, cycle, gnp, path, random_tree, star, stoer_wagner,
                               weighted_gnp)
from congestcut.tree import RootedTree
from congestcut.treecut import (cross_values, greedy_tree_packing, min_2respect,
                                min_2respect_distributed, min_cut_exact, one_respect_values,
                                recover_cut_edges, respect_tables, side_of, skeleton_sample,
                                spanning_tree_set, tree_count)

from strategies import graphs


def _random_spanning_tree(g: Graph, seed: int) -> RootedTree:
    rng = np.random.default_rng(seed)
    h = nx.Graph()
    for u, v in g.edges():
        h.add_edge(u, v, weight=float(rng.random()))
    t = nx.minimum_spanning_tree(h)
    return RootedTree.from_edges(g.n, int(rng.integers(g.n)), list(t.edges()))


# ------------------------------------------------------------------ packing

def test_packing_c4():
    p = greedy_tree_packing(cycle(4), 2)
    assert p.load.max() <= 2
    assert all(len(t) == 3 for t in p.trees)


def test_packing_k4():
    p = greedy_tree_packing(clique(4), 3)
    assert p.load.sum() == 9
    assert p.load.max() <= 2


def test_packing_of_a_tree():
    g = random_tree(12, seed=3)
    p = greedy_tree_packing(g, 4)
    assert all(sorted(t.tolist()) == list(range(g.m)) for t in p.trees)
    assert (p.load == 4).all()


def test_packing_trees_are_load_minimal():
    for seed in range(5):
        g = weighted_gnp(24, 0.3, seed=seed, max_weight=6)
        p = greedy_tree_packing(g, 6)
        load = np.zeros(g.m)
        for t in p.trees:
            key = load / g.w
            h = nx.Graph()
            for i, (u, v) in enumerate(g.edges()):
                h.add_edge(u, v, weight=float(key[i]), eid=i)
            best = nx.minimum_spanning_tree(h).size(weight="weight")
            assert np.isclose(key[t].sum(), best)
            load[t] += 1


def test_packing_needs_connected_graph():
    with pytest.raises(GraphError):
        greedy_tree_packing(Graph(4, [(0, 1), (2, 3)]), 2)


# ------------------------------------------------------------------ skeleton

def test_skeleton_small_lambda_keeps_everything():
    g = gnp(64, 0.2, seed=1, connected=True)
    kept, p, i = skeleton_sample(g, 5, seed=0)
    assert p == 1.0 and i == 0 and (kept == g.w).all()
    assert stoer_wagner(g.reweighted(kept)).value == stoer_wagner(g).value


def test_skeleton_concentration_on_two_cliques():
    # 40 disjoint bridges between two K_48 halves, so lambda = 40
    g = barbell(48, 40)
    assert stoer_wagner(g).value == 40
    good = 0
    for seed in range(100):
        kept, p, _ = skeleton_sample(g, 40, seed=seed)
        assert p < 1
        live = np.flatnonzero(kept > 0)
        h = Graph(g.n, [g.edges()[e] for e in live], kept[live])
        good += 0.5 <= stoer_wagner(h).value / (p * 40) <= 1.5
    assert good >= 90


def test_tree_count_grows_polylog():
    assert tree_count(2, 2) == 2
    assert tree_count(1024, 2) == int(np.ceil(2 * 10 ** 2.2))


# ------------------------------------------------------------------ tree sets

def test_tree_input_gives_the_tree():
    g = random_tree(20, seed=5)
    ts = spanning_tree_set(g, seed=1)
    assert ts.distinct == 1
    assert all(sorted(e.tolist()) == list(range(g.m)) for e in ts.edge_sets)


def test_cycle_cuts_respect_every_tree():
    g = cycle(8)
    ts = spanning_tree_set(g, seed=2)
    for t in ts.trees:
        assert len(t.edges()) == 7
        for a in range(8):
            for b in range(a + 1, 8):
                side = list(range(a + 1, b + 1))
                if len(side) == 8:
                    continue
                tree_edges = {(min(p, c), max(p, c)) for p, c in t.edges()}
                cut = {g.edges()[e] for e in crossing_edges(g, side)}
                assert len(cut & tree_edges) <= 2


def test_tree_set_charges_one_mst_per_tree():
    from congestcut.congest import Transcript

    g = gnp(40, 0.3, seed=4, connected=True)
    tr = Transcript()
    ts = spanning_tree_set(g, seed=1, transcript=tr)
    labels = [c.label for c in tr.charges]
    assert labels.count("c_slot_mst") == ts.count
    assert labels[0] == "lambda_estimate"


# ------------------------------------------------------------------ tables

def test_one_respect_examples():
    t = bfs(path(4), 0)
    assert one_respect_values(path(4), t)[1:].tolist() == [1, 1, 1]
    s = star(6)
    assert one_respect_values(s, bfs(s, 0))[1:].tolist() == [1] * 5


def test_one_respect_matches_direct_cut():
    g = gnp(32, 0.4, seed=6, connected=True)
    t = _random_spanning_tree(g, 6)
    vals = one_respect_values(g, t)
    tab = respect_tables(g, t)
    for v in t.non_root():
        assert vals[v] == tab.one[v] == cut_weight(g, t.desc_mask(v))


def test_cross_values_on_path():
    g = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (1, 4)])
    t = RootedTree.from_edges(5, 2, [(2, 1), (1, 0), (2, 3), (3, 4)])
    # desc(1) = {0, 1}, desc(3) = {3, 4}: edges between them are (0,4) and (1,4)
    assert cross_values(g, t, 1)[3] == 2
    assert cross_values(g, t, 3)[1] == 2
    assert cross_values(g, t, 1)[2] == -1


def test_cross_values_single_vertex_and_ancestor_cases():
    g = weighted_gnp(20, 0.4, seed=2, max_weight=9)
    t = _random_spanning_tree(g, 2)
    tab = respect_tables(g, t)
    for u in range(g.n):
        cv = cross_values(g, t, u)
        du = t.desc_mask(u)
        for v in range(g.n):
            if u == v or t.is_ancestor(v, u):
                continue
            dv = t.desc_mask(v)
            if t.is_ancestor(u, v):
                # desc(v) inside desc(u): edges leaving both sets at once
                a, b = dv, ~du
            else:
                a, b = du, dv
            direct = int(g.w[(a[g.eu] & b[g.ev]) | (a[g.ev] & b[g.eu])].sum())
            assert cv[v] == direct == tab.cross[u, v]


def _check_identities(g: Graph, t: RootedTree) -> tuple[int, int]:
    tab = respect_tables(g, t)
    tree_ids = {g.edge_id(p, c) for p, c in t.edges()}
    mismatches = identity_failures = 0
    nr = t.non_root()
    for i, u in enumerate(nr):
        for v in nr[i + 1:]:
            side = t.desc_mask(u) ^ t.desc_mask(v)
            direct = int(g.w[side[g.eu] != side[g.ev]].sum())
            formula = int(tab.one[u] + tab.one[v] - 2 * tab.cross[u, v])
            mismatches += formula != direct or tab.value[u, v] != direct
            crossing = set(np.flatnonzero(side[g.eu] != side[g.ev]).tolist()) & tree_ids
            expected = {g.edge_id(u, int(t.parent[u])), g.edge_id(v, int(t.parent[v]))}
            identity_failures += crossing != expected
    return mismatches, identity_failures


@given(graphs(min_n=3, max_n=10, weighted=True, connected=True), st.integers(0, 2 ** 16))
def test_symmetric_difference_identity(g, seed):
    assert _check_identities(g, _random_spanning_tree(g, seed)) == (0, 0)


# ------------------------------------------------------------------ 2-respect

def test_min_2respect_cycle():
    g = cycle(6)
    t = bfs(g, 0)
    res = min_2respect(g, t)
    assert res.value == 2
    if len(res.pair) == 2:
        u, v = res.pair
        assert t.level[u] == t.level[v]
    flagged = recover_cut_edges(g, t, res.pair)
    assert len({e for es in flagged.values() for e in es}) == 2


def test_min_2respect_path_and_star_tree():
    g = path(5)
    res = min_2respect(g, bfs(g, 0))
    assert res.value == 1 and len(res.pair) == 1
    k5 = clique(5)
    res = min_2respect(k5, bfs(k5, 0))
    assert res.value == 4 and len(res.pair) == 1 and res.pair[0] != 0


def test_recover_cut_edges_matches_crossing_set():
    g = weighted_gnp(30, 0.3, seed=8)
    t = _random_spanning_tree(g, 8)
    for pair in [(3,), (4, 9), (1, 17)]:
        if t.root in pair:
            continue
        flagged = recover_cut_edges(g, t, pair)
        got = {e for es in flagged.values() for e in es}
        assert got == set(crossing_edges(g, side_of(t, pair)).tolist())
        assert all(len([x for x in flagged if e in flagged[x]]) == 2 for e in got)


def test_min_cut_exact_examples():
    g = Graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)], [5, 1, 7, 1])
    cut, info, tr = min_cut_exact(g, seed=0)
    assert cut.value == 2
    assert set(cut.crossing_edges) == {(1, 2), (0, 3)}
    t = Graph(6, [(0, 1), (1, 2), (1, 3), (3, 4), (3, 5)], [9, 4, 6, 3, 8])
    assert min_cut_exact(t, seed=1)[0].value == 3


@pytest.mark.parametrize("seed", range(12))
def test_min_cut_exact_matches_oracle(seed):
    n = 8 + 9 * seed
    g = weighted_gnp(n, 0.3, seed=seed)
    cut, info, tr = min_cut_exact(g, seed=seed)
    assert cut.value == stoer_wagner(g).value
    assert cut_weight(g, list(cut.side)) == cut.value
    assert tr.rounds > 0 and info.tree_count == tree_count(n, 2)


@given(graphs(min_n=2, max_n=9, weighted=True, connected=True), st.integers(0, 99))
def test_min_cut_exact_never_below_lambda(g, seed):
    assert min_cut_exact(g, seed=seed)[0].value == stoer_wagner(g).value


def test_distributed_tables_equal_centralised():
    g = weighted_gnp(24, 0.3, seed=3)
    t = _random_spanning_tree(g, 3)
    res_d, tr = min_2respect_distributed(g, t, cfg=Config(audit_bandwidth=True))
    res_c = min_2respect(g, t, keep_tables=True)
    assert res_d.value == res_c.value and res_d.pair == res_c.pair
    assert (res_d.tables.value == res_c.tables.value).all()
    assert tr.violations == []


def test_simulated_min_cut_exact():
    g = weighted_gnp(20, 0.3, seed=1)
    cfg = Config(simulate_protocols=True, audit_bandwidth=True)
    cut, info, tr = min_cut_exact(g, seed=0, cfg=cfg)
    assert cut.value == stoer_wagner(g).value
    assert tr.violations == []
    assert any(s["label"].startswith("two_respect_tree") and s["mode"] != "charged" for s in tr.stages)
