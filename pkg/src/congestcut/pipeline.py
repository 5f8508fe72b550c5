"""End-to-end driver: estimate parameters, choose between contraction and the direct route."""

from __future__ import annotations

import math
import time
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from . import congest
from .certificate import lambda_oracle
from .config import Config
from .congest import Transcript, charge_oracle
from .contraction import build_msgc
from .graph import CutResult, Graph, diameter_estimate, is_connected
from .oracle import stoer_wagner
from .treecut import min_cut_contracted, min_cut_exact


def break_point(mu: float) -> float:
    """Threshold on ``eps`` above which the contraction route is preferred."""
    return 22 / 353 if mu > 0.5 else 44 * mu / 353


@dataclass
class BranchDecision:
    n: int
    diameter_upper: int
    delta: int
    lambda_estimate: int
    eps: float
    mu: float
    eps_star: float
    weighted: bool
    path: str
    reason: str

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def select_branch(n: int, diameter_upper: int, lambda_estimate: int, delta: int, cfg: Config,
                  weighted: bool = False) -> BranchDecision:
    """Pure function of ``(n, D', lambda', delta)`` plus the config guards.

    ``eps`` solves ``delta = n^(2 eps)`` and ``mu`` solves ``D' = n^(1 - mu)``.
    """
    ln = math.log(max(n, 2))
    eps = math.log(delta) / (2 * ln) if delta > 1 else 0.0
    mu = 1 - math.log(max(diameter_upper, 1)) / ln
    star = break_point(mu)
    if cfg.force_path:
        path, reason = cfg.force_path, "forced by config"
    elif weighted:
        path, reason = "direct", "weighted input: contraction is defined for simple unweighted graphs"
    elif n < cfg.msgc_min_n:
        path, reason = "direct", f"n = {n} below msgc_min_n = {cfg.msgc_min_n}"
    elif not 0 < eps < 0.5:
        path, reason = "direct", f"eps = {eps:.4f} outside (0, 1/2)"
    elif eps > star:
        path, reason = "msgc", f"eps = {eps:.4f} > break point {star:.4f}"
    else:
        path, reason = "direct", f"eps = {eps:.4f} <= break point {star:.4f}"
    if path not in ("msgc", "direct", "lambda_small"):
        raise ValueError(f"unknown path {path!r}")
    return BranchDecision(n, diameter_upper, delta, lambda_estimate, eps, mu, star, weighted, path, reason)


@dataclass
class PipelineResult:
    cut: CutResult
    transcript: Transcript
    decision: BranchDecision | None
    report: dict = field(default_factory=dict)

    @property
    def value(self) -> int:
        return self.cut.value


def pipeline(g: Graph, cfg: Config | None = None, seed: int | None = None, verify: bool = False
             ) -> PipelineResult:
    """Minimum cut of ``g`` with full round accounting and a JSON-ready report."""
    cfg = cfg or Config()
    seed = cfg.seed if seed is None else seed
    t0 = time.perf_counter()
    tr = Transcript()
    if g.n < 2:
        raise ValueError("a cut needs at least two vertices")
    if not is_connected(g):
        cut = stoer_wagner(g)
        rep = {"lambda": 0, "connected": False, "path": "none"}
        return PipelineResult(cut, tr, None, rep)
    lo, D = diameter_estimate(g)
    kw = dict(bandwidth=cfg.bandwidth, audit=cfg.audit_bandwidth, word_exponent=g.weight_exponent)
    if cfg.simulate_protocols:
        sub, _ = congest.build_bfs_tree(g, 0, seed=seed, **kw)
        tr.absorb(sub, "bfs_tree")
    else:
        charge_oracle(tr, "diameter_estimate", D=lo, c=cfg.charge_c("diameter_estimate"))
    lam_est = lambda_oracle(g, 1.0, seed, cfg, tr, D, label="lambda_estimate")
    delta = g.min_degree()
    decision = select_branch(g.n, D, lam_est, delta, cfg, g.weighted)
    extra: dict = {}
    if decision.path == "msgc":
        eps = min(decision.eps, 0.499)
        build = build_msgc(g, eps, seed, cfg)
        tr.absorb(build.transcript, "msgc_build")
        cut, info, sub = min_cut_contracted(g, build.contracted, seed, cfg, eps)
        tr.absorb(sub, "contracted_min_cut")
        extra = {"structure": build.report, "contracted": info,
                 "tripartition": build.tripartition.to_dict()}
    elif decision.path == "lambda_small":
        cut, info, _ = min_cut_exact(g, seed, cfg, simulate=False)
        charge_oracle(tr, "lambda_exact_small", n=g.n, D=D, lam=cut.value,
                      c=cfg.charge_c("lambda_exact_small"))
        extra = {"exact": info.__dict__}
    else:
        cut, info, sub = min_cut_exact(g, seed, cfg)
        tr.absorb(sub, "exact_min_cut")
        extra = {"exact": info.__dict__}
    deg_v = int(np.argmin(g.wdegree))
    if int(g.wdegree[deg_v]) < cut.value:
        side = np.zeros(g.n, dtype=bool)
        side[deg_v] = True
        cut = CutResult.from_side(g, side)
    rep = report(tr, cfg)
    rep.update({"lambda": int(cut.value), "connected": True, "path": decision.path,
                "decision": decision.to_dict(), "seed": seed, "cut_edges": list(cut.crossing_edges),
                "details": _jsonable(extra), "seconds": round(time.perf_counter() - t0, 3)})
    if verify:
        sw = stoer_wagner(g).value
        rep["oracle_lambda"] = int(sw)
        rep["oracle_agreement"] = bool(sw == cut.value)
    return PipelineResult(cut, tr, decision, rep)


def report(tr: Transcript, cfg: Config | None = None) -> dict:
    """Per-label round totals, bandwidth violations and the config echo."""
    by_label: dict[str, int] = defaultdict(int)
    for c in tr.charges:
        by_label[c.label] += c.round_charge
    stages: dict[str, int] = defaultdict(int)
    for s in tr.stages:
        stages[s["label"]] += s["rounds"]
    out = {"rounds_charged": int(tr.rounds), "charges_by_label": dict(by_label),
           "stages": dict(stages), "bandwidth_violations": len(tr.violations)}
    if cfg is not None:
        out["config"] = cfg.to_dict()
    return out


def rounds_sweep(sizes, make_graph, cfg: Config | None = None, seed: int = 0) -> list[dict]:
    """Run the pipeline on ``make_graph(n)`` for every ``n``; returns plot-ready rows."""
    rows = []
    for n in sizes:
        g = make_graph(n)
        res = pipeline(g, cfg, seed)
        rows.append({"n": n, "m": g.m, "rounds": res.report["rounds_charged"], "path": res.report["path"],
                     "lambda": res.value})
    return rows


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return x
