from __future__ import annotations

import json
import math

import pytest

from congestcut.config import Config
from congestcut.congest import Transcript
from congestcut.graph import Graph
from congestcut.oracle import gnp, planted_cut, random_tree, stoer_wagner, weighted_gnp
from congestcut.pipeline import break_point, pipeline, report, rounds_sweep, select_branch


def test_break_point():
    assert break_point(0.9) == pytest.approx(22 / 353)
    assert break_point(0.5) == pytest.approx(22 / 353)
    assert break_point(0.25) == pytest.approx(11 / 353)


def test_select_branch_arithmetic():
    cfg = Config()
    d = select_branch(400, 4, 30, 100, cfg)
    assert d.eps == pytest.approx(math.log(100) / (2 * math.log(400)))
    assert d.mu == pytest.approx(1 - math.log(4) / math.log(400))
    assert d.path == "msgc"
    assert select_branch(400, 4, 30, 100, cfg, weighted=True).path == "direct"
    assert select_branch(64, 4, 30, 40, cfg).path == "direct"
    assert select_branch(400, 4, 1, 1, cfg).path == "direct"
    low = select_branch(400, 4, 2, 2, cfg)
    assert low.path == "direct" and "break point" in low.reason
    # a large diameter lowers the break point to 44 mu / 353
    deep = select_branch(400, 200, 5, 3, cfg)
    assert deep.eps_star == pytest.approx(44 * deep.mu / 353) and deep.path == "msgc"


def test_select_branch_is_pure():
    cfg = Config()
    a = select_branch(300, 5, 20, 60, cfg)
    b = select_branch(300, 5, 20, 60, cfg)
    assert a == b


def test_forced_paths():
    assert select_branch(10, 2, 3, 3, Config(force_path="msgc")).path == "msgc"
    with pytest.raises(ValueError):
        select_branch(10, 2, 3, 3, Config(force_path="bogus"))


def test_small_graph_direct():
    g = gnp(64, 0.3, seed=1, connected=True)
    res = pipeline(g, verify=True)
    assert res.report["path"] == "direct"
    assert res.value == stoer_wagner(g).value and res.report["oracle_agreement"]


def test_planted_400_takes_contraction():
    g = planted_cut(400, 25, seed=2)
    res = pipeline(g, seed=0)
    assert res.report["path"] == "msgc"
    assert res.value == 25
    assert res.report["details"]["structure"]["nontrivial_cluster_count"] == 2


def test_tree_input():
    res = pipeline(random_tree(40, seed=2))
    assert res.value == 1


def test_disconnected():
    res = pipeline(Graph(4, [(0, 1), (2, 3)]))
    assert res.value == 0 and res.report["connected"] is False


def test_weighted_input():
    g = weighted_gnp(50, 0.3, seed=3)
    res = pipeline(g, verify=True)
    assert res.report["path"] == "direct" and res.report["oracle_agreement"]


def test_lambda_small_branch():
    g = gnp(40, 0.3, seed=5, connected=True)
    res = pipeline(g, Config(force_path="lambda_small"))
    assert res.value == stoer_wagner(g).value
    assert "lambda_exact_small" in res.report["charges_by_label"]


def test_report_basics():
    assert report(Transcript())["rounds_charged"] == 0
    cfg = Config(seed=4, c_pack=3.0)
    rep = report(Transcript(), cfg)
    assert Config.from_dict(rep["config"]) == cfg


def test_report_is_json():
    res = pipeline(gnp(30, 0.3, seed=2, connected=True), verify=True)
    json.dumps(res.report)
    assert res.report["rounds_charged"] == res.transcript.rounds
    assert sum(res.report["charges_by_label"].values()) <= res.report["rounds_charged"]


def test_simulated_pipeline_has_no_violations():
    g = weighted_gnp(32, 0.3, seed=1)
    cfg = Config(simulate_protocols=True, audit_bandwidth=True, simulate_max_trees=2)
    res = pipeline(g, cfg, verify=True)
    assert res.report["bandwidth_violations"] == 0 and res.report["oracle_agreement"]


def test_rounds_sweep_monotone():
    rows = rounds_sweep([64, 128, 256, 512], lambda n: planted_cut(n, 8, seed=1))
    assert [r["n"] for r in rows] == [64, 128, 256, 512]
    assert all(r["lambda"] == 8 for r in rows)
    rounds = [r["rounds"] for r in rows]
    assert rounds == sorted(rounds)
