"""Walk through the contraction route on one planted-cut graph.

Run with ``python3 demos/walkthrough.py [n] [k]``.
"""

from __future__ import annotations

import sys
import warnings

from congestcut.certificate import certificate_distributed, make_params
from congestcut.contraction import build_msgc
from congestcut.oracle import planted_cut, stoer_wagner
from congestcut.pipeline import pipeline


def main() -> None:
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 200
    k = int(sys.argv[2]) if len(sys.argv) > 2 else 6
    g = planted_cut(n, k, seed=0)
    print(f"graph: n={g.n} m={g.m} min degree={g.min_degree()} planted cut={k}")

    params = make_params(g.n, 2 * k, 0.5)
    cert, tr = certificate_distributed(g, params, seed=0)
    print(f"certificate for k={2 * k}: kept {len(cert.edges)}/{g.m} edges, "
          f"lambda={stoer_wagner(cert.subgraph(g)).value}, {tr.rounds:.3g} rounds charged")

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        build = build_msgc(g, 0.3, seed=0)
    rep = build.report
    print(f"contraction at eps=0.3: {build.contracted.graph.n} super-vertices, "
          f"count ok={rep['cluster_count_ok']}, size ok={rep['cluster_size_ok']}")

    res = pipeline(g, seed=0, verify=True)
    d = res.report["decision"]
    print(f"pipeline: path={res.report['path']} ({d['reason']})")
    print(f"lambda={res.value}, oracle agrees={res.report['oracle_agreement']}, "
          f"rounds charged={res.report['rounds_charged']:.3g}")
    for label, rounds in sorted(res.report["stages"].items(), key=lambda kv: -kv[1]):
        print(f"  {label:<24} {rounds:.3g}")


if __name__ == "__main__":
    main()
