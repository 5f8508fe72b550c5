from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from congestcut.decomposition import (InvariantError, Thresholds, _acyclic, blackbox_partition,
                                      check_tripartition, find_sparse_index, high_diameter_cut,
                                      induced, low_conductance_cut, low_degree_peel,
                                      recursion_guard, tripartition)
from congestcut.graph import Graph, GraphError, conductance, graph_conductance_exhaustive
from congestcut.oracle import barbell, clique, cycle, disjoint_union, gnp, path, planted_cut, star

from strategies import graphs


def _valid_indices(a, F):
    D = len(a)
    S = np.concatenate([[0], np.cumsum(a)])
    return [j for j in range(math.ceil(D / 4), math.floor(3 * D / 4) + 1)
            if a[j - 1] * F <= min(S[j - 1], S[-1] - S[j])]


# ------------------------------------------------------------ sparse index

def test_sparse_index_all_ones():
    a = np.ones(400, dtype=np.int64)
    j = find_sparse_index(a, n_rho=1.0, log_m=2.0, m=1000)
    assert 100 <= j <= 300
    assert j in _valid_indices(a, 24.0)


def test_sparse_index_avoids_spike():
    a = np.ones(400, dtype=np.int64)
    a[200] = 10 ** 6
    j = find_sparse_index(a, n_rho=1.0, log_m=2.0)
    assert j != 201
    assert j in _valid_indices(a, 24.0)


def test_sparse_index_preconditions():
    with pytest.raises(ValueError):
        find_sparse_index(np.ones(10, dtype=np.int64), n_rho=1.0, log_m=2.0)
    with pytest.raises(ValueError):
        find_sparse_index(np.ones(400, dtype=np.int64), n_rho=1.0, log_m=2.0, m=10)


@given(st.lists(st.integers(1, 50), min_size=200, max_size=300))
def test_sparse_index_satisfies_inequality(seq):
    a = np.asarray(seq, dtype=np.int64)
    valid = _valid_indices(a, 12.0)
    if valid:
        assert find_sparse_index(a, 1.0, 1.0) in valid
    else:
        with pytest.raises(ValueError):
            find_sparse_index(a, 1.0, 1.0)


# ------------------------------------------------------------ high diameter

def _dumbbell_path(k: int, length: int) -> Graph:
    a = clique(k)
    edges = list(a.edges()) + [(x + k + length, y + k + length) for x, y in a.edges()]
    chain = [k - 1] + list(range(k, k + length)) + [k + length]
    edges += list(zip(chain, chain[1:]))
    return Graph(2 * k + length, edges)


def test_high_diameter_cut_lands_on_path():
    thr = Thresholds(n_gamma=2.0, n_rho=1.0, log_m=1.0)
    g = _dumbbell_path(6, 60)
    cut = high_diameter_cut(g, None, 0, thr)
    depth = cut.info["depth"]
    assert depth / 4 <= cut.info["level"] <= 3 * depth / 4
    assert len(cut.boundary) == 1
    u, v = int(g.eu[cut.boundary[0]]), int(g.ev[cut.boundary[0]])
    assert 5 <= u < 6 + 60 and 6 <= v <= 6 + 60
    vol_c = int(g.degree[cut.side].sum())
    assert cut.vol_c == vol_c
    assert len(cut.boundary) * thr.sparsity <= min(vol_c, 2 * g.m - vol_c)


def test_high_diameter_cut_preconditions():
    thr = Thresholds(n_gamma=4.0, n_rho=1.0, log_m=1.0)
    with pytest.raises(GraphError, match="low-degree"):
        high_diameter_cut(cycle(100), None, 0, thr)
    with pytest.raises(GraphError, match="diameter"):
        high_diameter_cut(cycle(20), None, 0, thr)


# ------------------------------------------------------------ peeling

def test_peel_clique_untouched():
    g = clique(8)
    res = low_degree_peel(g, None, n_gamma=5)
    assert len(res.remaining) == g.m and res.es == {}


def test_peel_star():
    g = star(11)
    res = low_degree_peel(g, None, n_gamma=3)
    # the ten leaves go in the first batch, leaving the centre with no edges
    assert res.iterations == 1 and res.removed_vertices == 10
    assert len(res.remaining) == 0
    assert sorted(res.es) == list(range(1, 11))


def test_peel_random_graph():
    g = gnp(80, 0.05, seed=4)
    res = low_degree_peel(g, None, n_gamma=8)
    owned = np.concatenate(list(res.es.values())) if res.es else np.zeros(0, dtype=np.int64)
    assert sorted(np.concatenate([owned, res.remaining]).tolist()) == list(range(g.m))
    assert _acyclic(g, res.es)
    assert all(len(v) <= 8 for v in res.es.values())
    deg = np.bincount(np.concatenate([g.eu[res.remaining], g.ev[res.remaining]]), minlength=g.n)
    assert (deg[deg > 0] > 4).all()


# ------------------------------------------------------------ low conductance

def test_low_conductance_two_cliques():
    g = barbell(12, 1)
    cut = low_conductance_cut(g, None, 1 / 13, seed=1)
    assert cut is not None
    side = set(np.flatnonzero(cut.side).tolist())
    assert side in (set(range(12)), set(range(12, 24)))
    assert float(conductance(g, cut.side)) <= 12 / 13


def test_low_conductance_expander_has_none():
    g = clique(8)
    phi = 1 / 24
    # no cut of K_8 reaches 12 phi = 1/2, so the sweep must come back empty
    assert graph_conductance_exhaustive(g) > 12 * phi
    assert low_conductance_cut(g, None, phi, seed=0) is None


def test_low_conductance_precondition():
    with pytest.raises(ValueError):
        low_conductance_cut(clique(4), None, 0.1)


# ------------------------------------------------------------ black box

def test_blackbox_single_clique():
    n_gamma = 3.0
    g = clique(2 * math.ceil(n_gamma))
    thr = Thresholds(n_gamma=n_gamma, n_rho=1.0, log_m=1.0)
    out = blackbox_partition(g, None, thr)
    assert len(out.parts) == 1 and out.parts[0].case == "C3-1"
    assert len(out.er) == 0
    assert float(graph_conductance_exhaustive(g)) > 12 * thr.phi


def test_blackbox_long_path():
    g = path(200)
    thr = Thresholds(n_gamma=5.0, n_rho=1.0, log_m=1.0)
    out = blackbox_partition(g, None, thr)
    assert out.parts == [] and len(out.er) == 0
    assert sum(len(v) for v in out.es.values()) == g.m


def test_blackbox_two_cliques_and_bridge():
    g = barbell(12, 1)
    thr = Thresholds(n_gamma=4.0, n_rho=1.0, log_m=1.0)
    out = blackbox_partition(g, None, thr, seed=2)
    assert out.er.tolist() == [g.edge_id(0, 12)]
    assert len(out.parts) == 2
    assert {p.route for p in out.parts} == {"low_conductance_cut"}
    # after the split both halves are expanders, so the recursion finalises them
    tp = tripartition(g, 0.5, 0.5, seed=2, thresholds=thr)
    assert len(tp.components) == 2 and tp.e_r.tolist() == out.er.tolist()


def test_blackbox_checks_reject_bad_output():
    g = barbell(12, 1)
    thr = Thresholds(n_gamma=4.0, n_rho=1.0, log_m=1.0)
    out = blackbox_partition(g, None, thr, seed=2)
    from congestcut.decomposition import check_blackbox

    out.er = out.er[:0]
    with pytest.raises(InvariantError):
        check_blackbox(g, np.arange(g.m), out, thr)


# ------------------------------------------------------------ tripartition

def test_tripartition_single_edge():
    g = path(2)
    tp = tripartition(g, 0.4, 0.1)
    assert len(tp.e_h) == 0 and len(tp.e_r) == 0
    assert tp.e_s_all().tolist() == [0]


def test_tripartition_gnp():
    g = gnp(100, 0.3, seed=8)
    tp = tripartition(g, 0.4, 0.1, seed=8)
    rep = check_tripartition(g, tp)
    assert rep["hard_ok"] and rep["min_degree_ok"]


def test_tripartition_disjoint_cliques_with_bridges():
    g0, offsets = disjoint_union(clique(20), clique(20), clique(20))
    bridges = [(offsets[0], offsets[1]), (offsets[1] + 1, offsets[2]), (offsets[2] + 1, offsets[0] + 1)]
    g = Graph(g0.n, list(g0.edges()) + bridges)
    thr = Thresholds(n_gamma=4.0, n_rho=1.0, log_m=1.0)
    tp = tripartition(g, 0.5, 0.5, seed=3, thresholds=thr)
    rep = check_tripartition(g, tp)
    assert rep["hard_ok"]
    bridge_ids = {g.edge_id(u, v) for u, v in bridges}
    assert bridge_ids <= set(tp.e_r.tolist()) | set(tp.e_s_all().tolist())
    assert set(tp.e_h.tolist()) == set(range(g.m)) - bridge_ids
    assert len(tp.components) == 3


def test_planted_cut_splits():
    g = planted_cut(400, 25, seed=2)
    tp = tripartition(g, 0.5, 0.5 / 11, seed=0)
    assert sorted(len(vs) for _, vs in tp.components) == [200, 200]
    assert len(tp.e_r) == 25
    assert check_tripartition(g, tp)["hard_ok"]


def test_recursion_guard():
    assert recursion_guard(100, 0.5) == 21


def test_induced_relabels():
    g = clique(5)
    sub, vs = induced(g, None, [1, 3, 4])
    assert sub.n == 3 and sub.m == 3


@given(graphs(min_n=2, max_n=30), st.floats(0.2, 0.8), st.floats(0.05, 0.5), st.integers(0, 1000))
def test_tripartition_hard_invariants(g, gamma, rho, seed):
    tp = tripartition(g, gamma, rho, seed=seed)
    assert check_tripartition(g, tp)["hard_ok"]
