from __future__ import annotations

import json

import networkx as nx
import numpy as np
import pytest

from congestcut import congest
from congestcut.congest import (BandwidthError, NodeProgram, Transcript, aggregate_descendant_sums,
                                build_bfs_tree, charge_oracle, convergecast_subtree, downcast,
                                flood_max, run)
from congestcut.graph import Graph, bfs
from congestcut.oracle import cycle, gnp, path, random_tree, star
from congestcut.tree import RootedTree


def _depth_bound(tree: RootedTree, k: int = 1) -> int:
    return 2 * tree.depth + k + 1


def test_flood_max_on_cycle():
    tr, best = flood_max(cycle(8), 8)
    assert best == [7] * 8
    assert tr.rounds <= 8


def test_single_node_halting_at_init():
    class Quiet(NodeProgram):
        def init(self, ctx):
            ctx.halt()
            return {}

    tr = run(Graph(1, []), [Quiet()])
    assert tr.rounds_elapsed == 0


def test_leader_election_within_diameter():
    g = gnp(32, 0.2, seed=3, connected=True)
    diam = nx.diameter(nx.Graph(g.edges()))
    tr, best = flood_max(g, diam)
    assert set(best) == {31}
    assert tr.rounds <= diam


def test_bandwidth_violation_raises_or_is_logged():
    class Chatty(NodeProgram):
        def init(self, ctx):
            return {y: (1, 2) for y in ctx.neighbors}

        def on_round(self, ctx, inbox):
            ctx.halt()
            return {}

    g = path(3)
    with pytest.raises(BandwidthError):
        run(g, [Chatty() for _ in range(3)])
    tr = run(g, [Chatty() for _ in range(3)], audit=True)
    assert len(tr.violations) == 4
    assert run(g, [Chatty() for _ in range(3)], bandwidth=2).violations == []


def test_oversized_word_is_a_violation():
    class Big(NodeProgram):
        def init(self, ctx):
            return {y: (ctx.n ** 5,) for y in ctx.neighbors}

    tr = run(path(2), [Big(), Big()], audit=True)
    assert tr.violations and tr.violations[0]["max_value"] == 2 ** 5


def test_downcast_on_path():
    t = bfs(path(5), 0)
    tr, got = downcast(t, list(range(5)))
    assert got[4] == [0, 1, 2, 3]
    assert tr.rounds <= 9


def test_downcast_on_star():
    t = bfs(star(6), 0)
    tr, got = downcast(t, [10, 11, 12, 13, 14, 15])
    assert all(got[x] == [10] for x in range(1, 6))
    assert tr.rounds <= 3


def test_downcast_matches_ancestors():
    g = gnp(64, 0.1, seed=1, connected=True)
    t = bfs(g, 0)
    tr, got = downcast(t, [100 + x for x in range(g.n)])
    for x in range(g.n):
        assert got[x] == [100 + a for a in t.ancestors(x)[:-1]]
    assert tr.rounds <= _depth_bound(t)


def test_aggregate_examples():
    t = bfs(path(6), 0)
    tr, f = aggregate_descendant_sums(t, lambda v, x: 1)
    assert f.tolist() == t.subtree_sizes().tolist()
    _, zero = aggregate_descendant_sums(t, lambda v, x: 0)
    assert not zero.any()


def test_aggregate_weighted_degrees():
    g = gnp(48, 0.15, seed=9, connected=True)
    t = bfs(g, 0)
    wdeg = g.wdegree
    tr, f = aggregate_descendant_sums(t, lambda v, x: int(wdeg[x]))
    offline = [int(wdeg[t.desc(v)].sum()) for v in range(g.n)]
    assert f.tolist() == offline
    assert tr.rounds <= _depth_bound(t)


def test_convergecast_examples():
    g = random_tree(25, seed=4)
    t = bfs(g, 0)
    _, f = convergecast_subtree(t, np.ones(g.n, dtype=np.int64))
    assert f[:, 0].tolist() == t.subtree_sizes().tolist()
    leaf = np.array([1 if not t.children[x] else 0 for x in range(g.n)])
    _, f = convergecast_subtree(t, leaf)
    assert f[:, 0].tolist() == [int(leaf[t.desc(v)].sum()) for v in range(g.n)]
    five = np.tile(np.arange(g.n)[:, None], (1, 5))
    tr, f = convergecast_subtree(t, five)
    assert all((f[:, j] == f[:, 0]).all() for j in range(5))
    assert tr.rounds <= 2 * t.depth + 6


def test_bfs_build_matches_levels():
    g = gnp(40, 0.1, seed=5, connected=True)
    tr, t = build_bfs_tree(g, 0)
    assert t.level.tolist() == bfs(g, 0).level.tolist()
    assert tr.rounds <= t.depth + 2


def test_charge_examples():
    tr = Transcript()
    assert charge_oracle(tr, "c_slot_mst", n=100, l=4, D=10).round_charge == 210
    assert charge_oracle(tr, "zero").round_charge == 0
    assert charge_oracle(tr, "lambda_estimate", n=100, D=10).round_charge == 140
    assert tr.rounds == 350
    with pytest.raises(KeyError):
        charge_oracle(tr, "no_such_label")


def test_formula_registry_texts():
    assert congest.CHARGE_FORMULAS["tree_primitive"].text == "c * (2 * depth + 1)"
    assert set(congest.CHARGE_FORMULAS) >= {"lambda_estimate", "lambda_approx", "low_conductance",
                                             "trim", "shave", "contracted_primitive"}


def test_transcript_determinism():
    g = gnp(30, 0.2, seed=2, connected=True)
    a, _ = build_bfs_tree(g, 3, seed=11)
    b, _ = build_bfs_tree(g, 3, seed=11)
    assert a.to_json() == b.to_json()
    json.loads(a.to_json())


def test_absorb_merges():
    outer = Transcript()
    inner = Transcript()
    charge_oracle(inner, "broadcast", D=4)
    outer.absorb(inner, "stage")
    assert outer.rounds == 4
    assert outer.stages[-1] == {"label": "stage", "mode": "charged", "rounds": 4}


def test_primitive_bounds_on_random_trees():
    for seed in range(6):
        g = random_tree(30, seed=seed)
        t = bfs(g, seed % 30)
        k = 1 + seed % 3
        vals = np.arange(g.n * k).reshape(g.n, k)
        tr_c, _ = convergecast_subtree(t, vals, audit=True)
        tr_d, _ = downcast(t, list(range(g.n)), audit=True)
        tr_a, _ = aggregate_descendant_sums(t, lambda v, x: v + x, audit=True)
        assert tr_c.rounds <= _depth_bound(t, k)
        assert tr_d.rounds <= _depth_bound(t)
        assert tr_a.rounds <= _depth_bound(t)
        assert not (tr_c.violations or tr_d.violations or tr_a.violations)
