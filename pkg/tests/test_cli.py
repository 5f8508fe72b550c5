from __future__ import annotations

import json

import pytest

from congestcut.cli import main
from congestcut.io import read_graph, write_graph
from congestcut.oracle import barbell, stoer_wagner, weighted_gnp


@pytest.fixture
def graph_file(tmp_path):
    p = tmp_path / "g.graph"
    write_graph(barbell(8, 2), p)
    return p


def _run(capsys, argv):
    code = main(argv)
    return code, json.loads(capsys.readouterr().out)


def test_run_verify(capsys, graph_file):
    code, doc = _run(capsys, ["run", "--input", str(graph_file), "--seed", "3", "--verify"])
    assert code == 0
    assert doc["lambda"] == 2 and doc["oracle_agreement"] and doc["seed"] == 3


def test_run_simulated_with_transcript(capsys, graph_file, tmp_path):
    out = tmp_path / "r.json"
    code = main(["run", "--input", str(graph_file), "--simulate", "--transcript", "--json", str(out)])
    doc = json.loads(out.read_text())
    assert code == 0 and doc["bandwidth_violations"] == 0 and "transcript" in doc


def test_config_file(capsys, graph_file, tmp_path):
    cfg = tmp_path / "cfg.toml"
    cfg.write_text('force_path = "lambda_small"\n')
    code, doc = _run(capsys, ["run", "--input", str(graph_file), "--config", str(cfg)])
    assert code == 0 and doc["path"] == "lambda_small"


def test_certificate(capsys, graph_file, tmp_path):
    out = tmp_path / "c.graph"
    code, doc = _run(capsys, ["certificate", "--input", str(graph_file), "--k", "2", "--verify",
                              "--out", str(out)])
    assert code == 0 and doc["preserved_up_to_k"]
    assert stoer_wagner(read_graph(out)).value >= 2


def test_tripartition(capsys, graph_file):
    code, doc = _run(capsys, ["tripartition", "--input", str(graph_file), "--gamma", "0.4", "--rho", "0.1"])
    assert code == 0 and doc["invariant_report"]["hard_ok"]


def test_contract(capsys, graph_file):
    code, doc = _run(capsys, ["contract", "--input", str(graph_file), "--eps", "0.45"])
    assert code == 0 and doc["cluster_count_ok"]
    assert doc["warnings"]


def test_mincut_modes(capsys, tmp_path):
    p = tmp_path / "w.graph"
    g = weighted_gnp(30, 0.3, seed=2)
    write_graph(g, p)
    code, doc = _run(capsys, ["mincut", "--input", str(p), "--exact", "--verify"])
    assert code == 0 and doc["oracle_agreement"]
    assert set(doc) >= {"lambda", "cut_edges", "tree_count", "p_skeleton", "rounds_charged"}
    write_graph(barbell(20, 3), p)
    code, doc = _run(capsys, ["mincut", "--input", str(p), "--contracted", "--eps", "0.4", "--verify"])
    assert code == 0 and doc["lambda"] == 3


def test_mincut_contracted_mismatch_is_reported(capsys, tmp_path):
    # at n = 20 the default thresholds keep the whole barbell in one cluster,
    # so the contracted search misses the bridges; --verify must say so
    p = tmp_path / "b.graph"
    write_graph(barbell(10, 3), p)
    code, doc = _run(capsys, ["mincut", "--input", str(p), "--contracted", "--eps", "0.3", "--verify"])
    assert code == 1 and doc["oracle_agreement"] is False and doc["lambda"] > 3


def test_oracle(capsys, graph_file):
    code, doc = _run(capsys, ["oracle", str(graph_file), "--stoer-wagner"])
    assert doc["value"] == 2
    code, doc = _run(capsys, ["oracle", str(graph_file), "--enumerate"])
    assert doc["lambda"] == 2 and len(doc["cuts"]) == 1


def test_gen(capsys, tmp_path):
    out = tmp_path / "p.graph"
    assert main(["gen", "planted", "--n", "40", "--k", "5", "--seed", "1", "--out", str(out)]) == 0
    assert stoer_wagner(read_graph(out)).value == 5
    assert main(["gen", "cycle", "--n", "5"]) == 0
    assert capsys.readouterr().out.startswith("5 5")


def test_bad_input_exit_code(tmp_path, capsys):
    p = tmp_path / "bad.graph"
    p.write_text("3 2\n0 1\n")
    assert main(["run", "--input", str(p)]) == 2
    assert "error" in capsys.readouterr().err
    assert main(["run", "--input", str(tmp_path / "missing.graph")]) == 2
