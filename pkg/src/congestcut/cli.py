"""Command line entry point: ``congestcut <command> ...``.

Every command prints one JSON document (or writes it with ``--json``). Exit
status is 1 when an invariant check fails or, under ``--verify``, when the
answer disagrees with the Stoer-Wagner oracle.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings

import numpy as np

from . import oracle
from .config import Config, load_config
from .graph import Graph
from .io import format_graph, read_graph


def _emit(doc: dict, path: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True, default=_default)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _default(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    raise TypeError(f"not serialisable: {type(x).__name__}")


def _config(args) -> Config:
    cfg = load_config(args.config) if getattr(args, "config", None) else Config()
    if getattr(args, "seed", None) is not None:
        cfg.seed = args.seed
    return cfg


def _load(args, cfg: Config) -> Graph:
    return read_graph(args.input, cfg.weight_exponent)


def cmd_run(args) -> int:
    from .pipeline import pipeline

    cfg = _config(args)
    if args.simulate:
        cfg.simulate_protocols = True
        cfg.audit_bandwidth = True
    g = _load(args, cfg)
    res = pipeline(g, cfg, verify=args.verify)
    rep = dict(res.report)
    if args.transcript:
        rep["transcript"] = res.transcript.to_dict()
    _emit(rep, args.json)
    if args.verify and not rep.get("oracle_agreement", True):
        return 1
    return 1 if rep.get("bandwidth_violations") else 0


def cmd_certificate(args) -> int:
    from .certificate import certificate_distributed, certificate_sequential, make_params
    from .oracle import stoer_wagner

    cfg = _config(args)
    g = _load(args, cfg)
    params = make_params(g.n, args.k, args.eps, cfg.tau)
    if args.sequential:
        cert = certificate_sequential(g, params, cfg.seed)
        rounds = None
    else:
        cert, tr = certificate_distributed(g, params, cfg.seed, cfg)
        rounds = tr.rounds
    doc = {"k": args.k, "eps": args.eps, "p": params.p, "classes": params.c,
           "forests_per_class": params.forests_per_class, "edges_kept": int(len(cert.edges)),
           "edges_total": g.m, "size_bound": cert.size_bound(g.n), "rounds_charged": rounds}
    ok = True
    if args.verify:
        lam = stoer_wagner(g).value
        lam_c = stoer_wagner(cert.subgraph(g)).value
        # connectivity is preserved up to k: min(k, lambda) must survive
        doc.update({"lambda": lam, "lambda_certificate": lam_c, "preserved_up_to_k": min(args.k, lam_c) == min(args.k, lam)})
        ok = doc["preserved_up_to_k"]
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(format_graph(cert.subgraph(g)))
    _emit(doc, args.json)
    return 0 if ok else 1


def cmd_tripartition(args) -> int:
    from .decomposition import check_tripartition, tripartition

    cfg = _config(args)
    g = _load(args, cfg)
    tp = tripartition(g, args.gamma, args.rho, cfg.seed, cfg)
    doc = tp.to_dict()
    doc["invariant_report"] = check_tripartition(g, tp, phi_constant=cfg.phi_constant)
    _emit(doc, args.json)
    return 0 if doc["invariant_report"]["hard_ok"] else 1


def cmd_contract(args) -> int:
    from .contraction import build_msgc

    cfg = _config(args)
    g = _load(args, cfg)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        build = build_msgc(g, args.eps, cfg.seed, cfg)
    doc = dict(build.report)
    doc["warnings"] = [str(w.message) for w in caught]
    doc["rounds_charged"] = build.transcript.rounds
    doc["clusters"] = {"group_id": build.clustering.group_id.tolist(),
                       "regular": build.clustering.regular.tolist()}
    _emit(doc, args.json)
    checks = doc["clustering_checks"]
    return 0 if all(checks.values()) and doc["cluster_count_ok"] and doc["cluster_size_ok"] else 1


def cmd_mincut(args) -> int:
    from .contraction import build_msgc
    from .treecut import min_cut_contracted, min_cut_exact

    cfg = _config(args)
    g = _load(args, cfg)
    if args.contracted:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            build = build_msgc(g, args.eps, cfg.seed, cfg)
        cut, info, tr = min_cut_contracted(g, build.contracted, cfg.seed, cfg, args.eps)
        tr.absorb(build.transcript, "msgc_build")
        doc = {"lambda": cut.value, "cut_edges": list(cut.crossing_edges),
               "tree_count": info.get("tree_count"), "p_skeleton": info.get("p_skeleton"),
               "rounds_charged": tr.rounds, "details": info}
    else:
        cut, info, tr = min_cut_exact(g, cfg.seed, cfg)
        doc = {"lambda": cut.value, "cut_edges": list(cut.crossing_edges),
               "tree_count": info.tree_count, "distinct_trees": info.distinct_trees,
               "p_skeleton": info.p_skeleton, "rounds_charged": tr.rounds}
    ok = True
    if args.verify:
        sw = oracle.stoer_wagner(g).value
        doc["oracle_agreement"] = ok = bool(sw == cut.value)
    _emit(doc, args.json)
    return 0 if ok else 1


def cmd_oracle(args) -> int:
    cfg = _config(args)
    g = read_graph(args.file, cfg.weight_exponent)
    if args.enumerate:
        enum = oracle.enumerate_min_cuts(g)
        doc = {"lambda": enum.lam, "cuts": [list(c) for c in enum.cuts]}
    else:
        cut = oracle.stoer_wagner(g)
        doc = cut.to_dict()
    _emit(doc, args.json)
    return 0


GENERATORS = {
    "gnp": lambda a: oracle.gnp(a.n, a.p, a.seed or 0, connected=True),
    "weighted-gnp": lambda a: oracle.weighted_gnp(a.n, a.p, a.seed or 0),
    "cycle": lambda a: oracle.cycle(a.n),
    "path": lambda a: oracle.path(a.n),
    "clique": lambda a: oracle.clique(a.n),
    "star": lambda a: oracle.star(a.n),
    "tree": lambda a: oracle.random_tree(a.n, a.seed or 0),
    "barbell": lambda a: oracle.barbell(a.n, a.k),
    "planted": lambda a: oracle.planted_cut(a.n, a.k, a.seed or 0),
}


def cmd_gen(args) -> int:
    g = GENERATORS[args.family](args)
    text = format_graph(g)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="congestcut", description="Minimum cuts with CONGEST round accounting.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, needs_input=True):
        if needs_input:
            sp.add_argument("--input", required=True, help="graph file (header 'n m [weighted]')")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--config", help="TOML config file")
        sp.add_argument("--json", help="write the JSON report here instead of stdout")

    sp = sub.add_parser("run", help="full pipeline with branch selection")
    common(sp)
    sp.add_argument("--verify", action="store_true", help="compare with Stoer-Wagner")
    sp.add_argument("--simulate", action="store_true", help="message-level tree protocols with bandwidth audit")
    sp.add_argument("--transcript", action="store_true", help="include the full transcript")
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("certificate", help="sparse k-connectivity certificate")
    common(sp)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--eps", type=float, default=0.5)
    sp.add_argument("--sequential", action="store_true")
    sp.add_argument("--verify", action="store_true")
    sp.add_argument("--out", help="write the certificate graph here")
    sp.set_defaults(func=cmd_certificate)

    sp = sub.add_parser("tripartition", help="edge tripartition with invariant report")
    common(sp)
    sp.add_argument("--gamma", type=float, required=True)
    sp.add_argument("--rho", type=float, required=True)
    sp.set_defaults(func=cmd_tripartition)

    sp = sub.add_parser("contract", help="min-cut preserving contraction")
    common(sp)
    sp.add_argument("--eps", type=float, required=True)
    sp.set_defaults(func=cmd_contract)

    sp = sub.add_parser("mincut", help="tree-packing minimum cut")
    common(sp)
    sp.add_argument("--exact", action="store_true", help="direct route (the default)")
    sp.add_argument("--contracted", action="store_true", help="contract first, then pack trees")
    sp.add_argument("--eps", type=float, default=0.25)
    sp.add_argument("--verify", action="store_true")
    sp.set_defaults(func=cmd_mincut)

    sp = sub.add_parser("oracle", help="reference minimum cut")
    sp.add_argument("file")
    sp.add_argument("--stoer-wagner", action="store_true", help="global minimum cut (default)")
    sp.add_argument("--enumerate", action="store_true", help="all minimum cuts, n <= 20")
    sp.add_argument("--config")
    sp.add_argument("--json")
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("gen", help="emit a generated graph in the edge-list format")
    sp.add_argument("family", choices=sorted(GENERATORS))
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=float, default=0.3)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"congestcut: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
