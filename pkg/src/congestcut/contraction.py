"""Min-cut preserving contraction: vertex groups from expanding components, trimmed and shaved.

Group ids follow a 0-based convention: a group formed from a component is
named after its largest member, and a vertex that leaves its group takes id
``n + v``. A vertex is *regular* if it sits in a singleton group or was shaved;
the remaining members of a group form its core, which is contracted to one
super-vertex.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import shortest_path

from .certificate import certificate_pipeline
from .config import Config
from .congest import Transcript, charge_oracle
from .decomposition import Thresholds, Tripartition, tripartition
from .graph import Graph, diameter_estimate


@dataclass
class Clustering:
    group_id: np.ndarray
    regular: np.ndarray
    trimmed: int = 0

    @property
    def n(self) -> int:
        return len(self.group_id)

    def groups(self) -> dict[int, np.ndarray]:
        order = np.argsort(self.group_id, kind="stable")
        cuts = np.flatnonzero(np.diff(self.group_id[order])) + 1
        return {int(self.group_id[chunk[0]]): np.sort(chunk) for chunk in np.split(order, cuts) if len(chunk)}

    def nontrivial(self) -> dict[int, np.ndarray]:
        return {k: v for k, v in self.groups().items() if len(v) > 1}

    def cores(self) -> dict[int, np.ndarray]:
        out = {}
        for k, members in self.nontrivial().items():
            core = members[~self.regular[members]]
            if len(core):
                out[k] = core
        return out

    def copy(self) -> "Clustering":
        return Clustering(self.group_id.copy(), self.regular.copy(), self.trimmed)

    def to_dict(self) -> dict:
        return {"group_id": self.group_id.tolist(), "regular": self.regular.tolist(), "trimmed": self.trimmed}


def init_groups_from_components(g: Graph, tp: Tripartition | list) -> Clustering:
    """One group per E_h component, named by its largest member; other vertices alone."""
    comps = tp.components if isinstance(tp, Tripartition) else [(int(max(c)), np.asarray(c)) for c in tp]
    gid = np.arange(g.n, dtype=np.int64)
    for _, vs in comps:
        vs = np.asarray(vs, dtype=np.int64)
        gid[vs] = int(vs.max())
    return Clustering(gid, np.zeros(g.n, dtype=bool))


def same_group_counts(g: Graph, group_id: np.ndarray) -> np.ndarray:
    same = group_id[g.eu] == group_id[g.ev]
    return np.bincount(np.concatenate([g.eu[same], g.ev[same]]), minlength=g.n)


def trim(g: Graph, cl: Clustering) -> tuple[Clustering, int]:
    """Bulk-synchronous trimming to a fixed point.

    In every iteration each vertex still in a group (id ``< n``) with fewer than
    ``2/5`` of its neighbours in the group leaves it. Vertices that were alone
    from the start are relabelled too but not counted as trimmed.
    """
    out = cl.copy()
    n = g.n
    sizes = np.bincount(out.group_id[out.group_id < n], minlength=n)
    alone = (out.group_id < n) & (sizes[np.minimum(out.group_id, n - 1)] == 1)
    trimmed = 0
    deg = g.degree
    while True:
        good = same_group_counts(g, out.group_id)
        leave = (out.group_id < n) & (5 * good < 2 * deg)
        if not leave.any():
            break
        trimmed += int((leave & ~alone).sum())
        out.group_id[leave] = n + np.flatnonzero(leave)
    out.trimmed = cl.trimmed + trimmed
    return out, trimmed


def shave(g: Graph, cl: Clustering) -> Clustering:
    """One pass: a grouped vertex with at most ``deg/2 + 1`` neighbours in its group becomes regular.

    Vertices in singleton groups are regular by definition; group ids are untouched.
    """
    out = cl.copy()
    good = same_group_counts(g, out.group_id)
    shaved = (out.group_id < g.n) & (2 * good <= g.degree + 2)
    sizes = np.bincount(out.group_id, minlength=2 * g.n)
    out.regular = shaved | (sizes[out.group_id] == 1)
    return out


def check_clustering(g: Graph, cl: Clustering) -> dict:
    """The trimmed and shaving invariants, checked by one scan."""
    good = same_group_counts(g, cl.group_id)
    sizes = np.bincount(cl.group_id, minlength=2 * g.n)
    grouped = sizes[cl.group_id] > 1
    trivial_regular = bool(cl.regular[~grouped].all())
    trimmed_ok = bool((5 * good[grouped] >= 2 * g.degree[grouped]).all())
    core = grouped & ~cl.regular
    core_ok = bool((2 * good[core] > g.degree[core] + 2).all())
    return {"trivial_regular": trivial_regular, "trimmed_fixed_point": trimmed_ok, "core_threshold": core_ok}


@dataclass
class ContractedGraph:
    base: Graph                               # the graph the clustering lives on
    graph: Graph                              # contracted graph (parallel edges merged)
    super_of: np.ndarray                      # original vertex -> super-vertex
    members: list[np.ndarray]                 # super-vertex -> original vertices
    cluster_of_super: dict[int, np.ndarray]   # super-vertex of a core -> whole group
    diameters: dict[int, int]                 # super-vertex of a core -> diam(G[C])
    rep_edge: dict[tuple[int, int], int] = field(default_factory=dict, repr=False)

    def representative_edge(self, a: int, b: int) -> int:
        return self.rep_edge[(min(a, b), max(a, b))]

    def project(self, g: Graph) -> Graph:
        """``g`` (same vertex set as ``base``) with vertices mapped to super-vertices."""
        a, b = self.super_of[g.eu], self.super_of[g.ev]
        keep = a != b
        lo, hi = np.minimum(a, b)[keep], np.maximum(a, b)[keep]
        k = self.graph.n
        key = lo * k + hi
        uniq, inv = np.unique(key, return_inverse=True)
        w = np.bincount(inv, weights=g.w[keep], minlength=len(uniq)).astype(np.int64)
        return Graph(k, list(zip((uniq // k).tolist(), (uniq % k).tolist())), w.tolist(),
                     weight_exponent=g.weight_exponent, check_weights=False)

    def expand(self, side) -> np.ndarray:
        side = np.asarray(side, dtype=bool)
        return side[self.super_of]

    def sum_diameters(self) -> int:
        return int(sum(self.diameters.values()))


def _diameter(g: Graph, vs: np.ndarray) -> int:
    # exact diameter of G[vs]; -1 when it is disconnected
    local = np.full(g.n, -1, dtype=np.int64)
    local[vs] = np.arange(len(vs))
    inside = (local[g.eu] >= 0) & (local[g.ev] >= 0)
    a = coo_matrix((np.ones(int(inside.sum())), (local[g.eu[inside]], local[g.ev[inside]])),
                   shape=(len(vs), len(vs)))
    dist = shortest_path(a.tocsr(), directed=False, unweighted=True)
    return -1 if np.isinf(dist).any() else int(dist.max())


def contract(g: Graph, cl: Clustering) -> ContractedGraph:
    """Collapse every core to one super-vertex; other vertices stay as they are."""
    n = g.n
    cores = cl.cores()
    key = np.arange(n, dtype=np.int64)
    for gid, core in cores.items():
        key[core] = n + gid
    uniq, super_of = np.unique(key, return_inverse=True)
    k = len(uniq)
    members = [np.flatnonzero(super_of == s) for s in range(k)]
    a, b = super_of[g.eu], super_of[g.ev]
    keep = np.flatnonzero(a != b)
    lo, hi = np.minimum(a, b)[keep], np.maximum(a, b)[keep]
    pair = lo * k + hi
    uq, first, inv = np.unique(pair, return_index=True, return_inverse=True)
    w = np.bincount(inv, weights=g.w[keep], minlength=len(uq)).astype(np.int64)
    rep = {(int(p // k), int(p % k)): int(keep[f]) for p, f in zip(uq.tolist(), first.tolist())}
    cg_graph = Graph(k, list(zip((uq // k).tolist(), (uq % k).tolist())), w.tolist(),
                     weight_exponent=g.weight_exponent, check_weights=False)
    groups = cl.groups()
    cluster_of, diam = {}, {}
    for gid, core in cores.items():
        s = int(super_of[core[0]])
        cluster_of[s] = groups[gid]
        diam[s] = _diameter(g, groups[gid])
    return ContractedGraph(g, cg_graph, super_of.astype(np.int64), members, cluster_of, diam, rep)


@dataclass
class MSGCBuild:
    contracted: ContractedGraph
    clustering: Clustering
    transcript: Transcript
    certificate_graph: Graph
    tripartition: Tripartition
    report: dict


def build_msgc(g: Graph, eps: float, seed: int = 0, cfg: Config | None = None,
               thresholds: Thresholds | None = None) -> MSGCBuild:
    """Certificate, tripartition, groups, trim, shave, contract.

    The certificate uses ``eps/44``; the tripartition uses ``gamma = eps`` and
    ``rho = eps/11``. A minimum degree below ``n^(2 eps)`` only raises a warning.
    """
    if not 0 < eps < 0.5:
        raise ValueError("eps must lie in (0, 1/2)")
    cfg = cfg or Config()
    tr = Transcript()
    if g.min_degree() < g.n ** (2 * eps) - 1e-9:
        warnings.warn(f"minimum degree {g.min_degree()} below n^(2 eps) = {g.n ** (2 * eps):.1f}",
                      stacklevel=2)
    D = diameter_estimate(g)[1]
    cert, sub = certificate_pipeline(g, eps / 44, seed, cfg, D)
    tr.absorb(sub, "certificate")
    h = cert.subgraph(g) if not cert.whole_graph else g
    tp = tripartition(h, eps, eps / 11, seed, cfg, thresholds)
    tr.absorb(tp.transcript, "tripartition")
    cl0 = init_groups_from_components(h, tp)
    cl1, trimmed = trim(h, cl0)
    charge_oracle(tr, "trim", trimmed=trimmed, D=D)
    cl2 = shave(h, cl1)
    charge_oracle(tr, "shave", c=cfg.charge_c("shave"))
    cg = contract(h, cl2)
    rep = structure_report(h, cl2, eps, cg)
    rep["certificate_edges"] = int(len(cert.edges))
    rep["certificate_whole_graph"] = bool(cert.whole_graph)
    rep["lambda_estimate"] = cert.stats.get("lambda_estimate")
    rep["clustering_checks"] = check_clustering(h, cl2)
    return MSGCBuild(cg, cl2, tr, h, tp, rep)


def structure_report(g: Graph, cl: Clustering, eps: float, cg: ContractedGraph | None = None) -> dict:
    """Measured sizes with their asymptotic targets; two hard bounds are evaluated exactly."""
    n = g.n
    delta = g.min_degree()
    nt = cl.nontrivial()
    regular = int(cl.regular.sum())
    cg = cg or contract(g, cl)
    count_ok = len(nt) * delta <= 3 * n if delta > 0 else True
    size_ok = all(5 * len(v) >= 2 * delta for v in nt.values())
    return {"n": n, "delta_used": int(delta),
            "nontrivial_cluster_count": len(nt),
            "nontrivial_cluster_sizes": sorted(int(len(v)) for v in nt.values()),
            "trimmed_count": int(cl.trimmed),
            "regular_count": regular,
            "core_count": len(cl.cores()),
            "contracted_vertices": int(cg.graph.n),
            "sum_cluster_diameters": cg.sum_diameters(),
            "targets": {"trimmed": n ** (1 - eps / 22), "nontrivial_clusters": n ** (1 - 2 * eps),
                        "sum_diameters": n ** (1 - eps / 20)},
            "cluster_count_bound": 3 * n / delta if delta else math.inf,
            "cluster_count_ok": bool(count_ok),
            "cluster_size_ok": bool(size_ok)}


def validate_min_cut_preservation(g: Graph, cl: Clustering) -> dict:
    """Check every minimum cut of ``g`` (``n <= 20``) against every nontrivial group.

    Reports cores split by a non-trivial minimum cut, groups with more than two
    vertices on both sides, and groups with at least ``delta/100`` on both sides.
    """
    from .oracle import enumerate_min_cuts

    enum = enumerate_min_cuts(g)
    masks = enum.masks(g.n)
    delta = g.min_degree()
    core_violations, cluster_violations, dichotomy = [], [], []
    groups = cl.nontrivial()
    nontrivial_cuts = 0
    for i, side in enumerate(masks):
        k = int(side.sum())
        trivial = k == 1 or k == g.n - 1
        nontrivial_cuts += not trivial
        for gid, members in groups.items():
            inside = side[members]
            a, b = int(inside.sum()), int((~inside).sum())
            core = members[~cl.regular[members]]
            if not trivial and len(core) and 0 < int(side[core].sum()) < len(core):
                core_violations.append({"cut": i, "group": gid})
            if a > 2 and b > 2:
                cluster_violations.append({"cut": i, "group": gid})
            if a >= delta / 100 and b >= delta / 100:
                dichotomy.append({"cut": i, "group": gid})
    return {"lambda": int(enum.lam), "min_cuts": len(masks), "nontrivial_min_cuts": nontrivial_cuts,
            "core_violations": core_violations, "cluster_violations": cluster_violations,
            "dichotomy_violations": dichotomy, "ok": not core_violations}
