"""Edge tripartition into expanding components, a low-arboricity part and few cut edges.

``tripartition`` repeatedly applies ``blackbox_partition`` to the parts that are
not yet final. One black-box call removes the edges among low-degree vertices,
then handles every remaining component by diameter: long components are cut at
a sparse BFS level, short ones are peeled down to high minimum degree and
tested for a low-conductance cut. Components in which no such cut is found are
final.

All thresholds use the size ``n, m`` of the whole input graph, and ``log m``
means ``log2 |E|``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix, diags

from .config import Config
from .congest import Transcript, charge_oracle
from .graph import Graph, GraphError, as_edge_ids, bfs_levels, connected_components


class InvariantError(AssertionError):
    """A partition condition failed; ``condition`` names it."""

    def __init__(self, condition: str, message: str):
        super().__init__(f"[{condition}] {message}")
        self.condition = condition


@dataclass(frozen=True)
class Thresholds:
    n_gamma: float
    n_rho: float
    log_m: float

    @classmethod
    def make(cls, n: int, m: int, gamma: float, rho: float, n_gamma: float | None = None,
             n_rho: float | None = None, log_m: float | None = None) -> "Thresholds":
        if not (0 < gamma < 1 and 0 < rho < 1):
            raise ValueError("gamma and rho must lie in (0, 1)")
        return cls(n ** gamma if n_gamma is None else float(n_gamma),
                   n ** rho if n_rho is None else float(n_rho),
                   math.log2(max(m, 2)) if log_m is None else float(log_m))

    @property
    def diameter(self) -> float:
        # components at least this deep are cut at a sparse BFS level
        return 48 * self.n_rho * self.log_m ** 2

    @property
    def sparsity(self) -> float:
        return 12 * self.n_rho * self.log_m

    @property
    def phi(self) -> float:
        return 1.0 / (144 * self.n_rho * self.log_m)

    def promise(self, m_sub: int) -> float:
        """Conductance below which the sweep is expected to find a cut."""
        return self.phi ** 3 / (19208 * math.log(max(m_sub, 1) * math.e ** 4) ** 2)


# ------------------------------------------------------------ subroutines

def find_sparse_index(a, n_rho: float, log_m: float, m: int | None = None, strict: bool = True) -> int:
    """Index ``j`` (1-based) in ``[D/4, 3D/4]`` with ``a_j <= min(prefix, suffix) / (12 n^rho log m)``.

    Scans ``j`` from ``D/4`` to ``D/2`` on the lighter half (reversing the
    sequence when the second half is lighter) and returns the first index whose
    element is small against its prefix. With ``strict`` the length and sum
    preconditions are checked first; without it a failed scan falls back to every
    index in range before giving up.
    """
    a = np.asarray(a, dtype=np.int64)
    D = len(a)
    F = 12 * n_rho * log_m
    if strict:
        if D < 48 * n_rho * log_m ** 2:
            raise ValueError(f"sequence length {D} below 48 n^rho log^2 m = {48 * n_rho * log_m ** 2:.1f}")
        if m is not None and int(a.sum()) > m:
            raise ValueError("sequence sum exceeds m")
    if D == 0 or (a <= 0).any():
        raise ValueError("need a nonempty sequence of positive integers")
    S = np.concatenate([[0], np.cumsum(a)])
    total = int(S[-1])

    def ok(j: int) -> bool:
        return a[j - 1] * F <= min(int(S[j - 1]), total - int(S[j]))

    half = D // 2
    reverse = int(S[half]) > total - int(S[half])
    lo, hi, top = max(math.ceil(D / 4), 1), max(half, 1), math.floor(3 * D / 4)
    for t in range(lo, hi + 1):
        j = D + 1 - t if reverse else t
        if lo <= j <= top and ok(j):
            return j
    for j in range(lo, top + 1):
        if ok(j):
            return j
    raise ValueError("no index satisfies the sparsity inequality")


@dataclass
class SubgraphCut:
    side: np.ndarray          # vertex mask of C
    boundary: np.ndarray      # subgraph edge ids with one endpoint in C
    vol_c: int
    vol_rest: int
    info: dict = field(default_factory=dict)

    @property
    def conductance(self) -> float:
        lo = min(self.vol_c, self.vol_rest)
        return len(self.boundary) / lo if lo else math.inf


def _sub_degrees(g: Graph, ids: np.ndarray) -> np.ndarray:
    return np.bincount(np.concatenate([g.eu[ids], g.ev[ids]]), minlength=g.n)


def _cut_of(g: Graph, ids: np.ndarray, side: np.ndarray, deg: np.ndarray, **info) -> SubgraphCut:
    cross = side[g.eu[ids]] != side[g.ev[ids]]
    present = deg > 0
    return SubgraphCut(side, ids[cross], int(deg[side & present].sum()), int(deg[~side & present].sum()), info)


def high_diameter_cut(g: Graph, edge_ids, root: int, thr: Thresholds) -> SubgraphCut:
    """Cut a deep component at a sparse BFS level around ``root``.

    Levels ``L_0..L_D`` from ``root``; ``p_i`` counts edges between ``L_{i-1}``
    and ``L_i``; the cut is ``C = L_0..L_{j-1}`` for the sparse index ``j``.
    """
    ids = as_edge_ids(g, edge_ids)
    level = bfs_levels(g, root, ids)
    deg = _sub_degrees(g, ids)
    inside = deg > 0
    if (level[inside] < 0).any():
        raise GraphError("subgraph is not connected")
    D = int(level.max())
    if D < thr.diameter:
        raise GraphError(f"diameter precondition: eccentricity {D} < {thr.diameter:.1f}")
    low = inside & (deg <= thr.n_gamma / 2)
    if (low[g.eu[ids]] & low[g.ev[ids]]).any():
        raise GraphError("low-degree precondition: an edge joins two vertices of degree <= n^gamma/2")
    lu, lv = level[g.eu[ids]], level[g.ev[ids]]
    between = lu != lv
    p = np.bincount(np.maximum(lu, lv)[between], minlength=D + 1)[1:]
    j = find_sparse_index(p, thr.n_rho, thr.log_m, strict=False)
    side = inside & (level >= 0) & (level <= j - 1)
    cut = _cut_of(g, ids, side, deg, level=j, depth=D)
    if len(cut.boundary) * thr.sparsity > min(cut.vol_c, cut.vol_rest):
        raise InvariantError("sparse-level", "level cut is not sparse enough")
    return cut


@dataclass
class PeelResult:
    remaining: np.ndarray              # edge ids of E-diamond
    es: dict[int, np.ndarray]          # owner -> edge ids oriented away from it
    iterations: int
    removed_vertices: int


def low_degree_peel(g: Graph, edge_ids, n_gamma: float) -> PeelResult:
    """Batch peeling of vertices with at most ``n^gamma`` remaining edges.

    Each batch ``Z`` orients its edges away from ``Z`` (away from the smaller id
    when both endpoints are in ``Z``) and removes them. Peeling stops after the
    first batch of size at most ``n^gamma / 2``.
    """
    ids = as_edge_ids(g, edge_ids)
    alive = np.ones(len(ids), dtype=bool)
    eu, ev = g.eu[ids], g.ev[ids]
    owner = np.full(len(ids), -1, dtype=np.int64)
    iterations = 0
    removed = 0
    while True:
        live = np.flatnonzero(alive)
        deg = np.bincount(np.concatenate([eu[live], ev[live]]), minlength=g.n)
        Z = (deg >= 1) & (deg <= n_gamma)
        z = int(Z.sum())
        if z == 0:
            break
        iterations += 1
        removed += z
        zu, zv = Z[eu[live]], Z[ev[live]]
        touch = zu | zv
        # one endpoint in Z: that endpoint owns it; both: the smaller id owns it
        own = np.where(zu & zv, np.minimum(eu[live], ev[live]), np.where(zu, eu[live], ev[live]))
        owner[live[touch]] = own[touch]
        alive[live[touch]] = False
        if z <= n_gamma / 2:
            break
    es: dict[int, np.ndarray] = {}
    taken = np.flatnonzero(owner >= 0)
    for v in np.unique(owner[taken]).tolist():
        es[v] = np.sort(ids[taken[owner[taken] == v]])
    return PeelResult(np.sort(ids[alive]), es, iterations, removed)


def low_conductance_cut(g: Graph, edge_ids, phi: float, seed: int = 0, cfg: Config | None = None
                        ) -> SubgraphCut | None:
    """Sweep cut over lazy random walks; returns a cut with conductance ``<= 12 phi`` or ``None``.

    Walks start at ``walk_seeds_factor * log2(n)`` random vertices of the
    subgraph. After ``1, 2, 4, ...`` steps (up to ``walk_max_steps``) vertices are
    ordered by probability over degree and every prefix is evaluated.
    """
    if phi > 1 / 12:
        raise ValueError("phi must be at most 1/12")
    cfg = cfg or Config()
    ids = as_edge_ids(g, edge_ids)
    deg_all = _sub_degrees(g, ids)
    verts = np.flatnonzero(deg_all > 0)
    k = len(verts)
    if k < 2:
        return None
    local = np.full(g.n, -1, dtype=np.int64)
    local[verts] = np.arange(k)
    u, v = local[g.eu[ids]], local[g.ev[ids]]
    A = coo_matrix((np.ones(2 * len(ids)), (np.concatenate([u, v]), np.concatenate([v, u]))),
                   shape=(k, k)).tocsr()
    d = deg_all[verts].astype(float)
    total = d.sum()
    step = diags(0.5 / d) @ A   # row-normalised half step, applied to p / d below
    rng = np.random.default_rng([seed, 7919])
    count = max(1, math.ceil(cfg.walk_seeds_factor * math.log2(k + 1)))
    starts = rng.choice(k, size=min(count, k), replace=False)
    P = np.zeros((k, len(starts)))
    P[starts, np.arange(len(starts))] = 1.0
    best = (math.inf, None)
    checkpoints = set()
    t = 1
    while t <= cfg.walk_max_steps:
        checkpoints.add(t)
        t *= 2
    for t in range(1, cfg.walk_max_steps + 1):
        P = 0.5 * P + step.T @ P
        if t not in checkpoints:
            continue
        for col in range(P.shape[1]):
            score = P[:, col] / d
            order = np.argsort(-score, kind="stable")
            pos = np.empty(k, dtype=np.int64)
            pos[order] = np.arange(k)
            a, b = pos[u], pos[v]
            lo, hi = np.minimum(a, b), np.maximum(a, b)
            # edge crosses prefix of size s iff lo < s <= hi
            diff = np.bincount(lo + 1, minlength=k + 1) - np.bincount(hi + 1, minlength=k + 1)
            cut = np.cumsum(diff)[1:k]
            vol = np.cumsum(d[order])[: k - 1]
            cond = cut / np.minimum(vol, total - vol)
            i = int(np.argmin(cond))
            if cond[i] < best[0]:
                best = (float(cond[i]), order[: i + 1])
    if best[1] is None or best[0] > 12 * phi:
        return None
    side = np.zeros(g.n, dtype=bool)
    side[verts[best[1]]] = True
    res = _cut_of(g, ids, side, deg_all, conductance=best[0])
    if len(res.boundary) > 12 * phi * min(res.vol_c, res.vol_rest) + 1e-9:
        raise InvariantError("sweep", "recounted conductance exceeds 12 phi")
    return res


# ------------------------------------------------------------ black box

@dataclass
class Part:
    edges: np.ndarray
    vertices: np.ndarray
    case: str          # "C3-1" or "C3-2"
    route: str         # which branch produced it
    part_id: int


@dataclass
class BlackBoxOutput:
    parts: list[Part]
    es: dict[int, list[int]]
    er: np.ndarray
    untouched: np.ndarray          # S: vertices of the input with no E_h' edge
    checks: dict = field(default_factory=dict)


def _components(g: Graph, ids: np.ndarray) -> list[tuple[np.ndarray, np.ndarray]]:
    # (vertex set, edge ids) per connected component of the edge set
    if not len(ids):
        return []
    from .graph import component_labels

    lab = component_labels(g, ids)
    out = []
    el = lab[g.eu[ids]]
    order = np.argsort(el, kind="stable")
    splits = np.flatnonzero(np.diff(el[order])) + 1
    for chunk in np.split(order, splits):
        e = np.sort(ids[chunk])
        vs = np.unique(np.concatenate([g.eu[e], g.ev[e]]))
        out.append((vs, e))
    out.sort(key=lambda c: int(c[0][0]))
    return out


def _xlogx(k: int) -> float:
    return k * math.log2(k) if k > 0 else 0.0


def blackbox_partition(g: Graph, edge_ids, thr: Thresholds, seed: int = 0, cfg: Config | None = None,
                       transcript: Transcript | None = None, next_id: int = 0) -> BlackBoxOutput:
    """One partition step of ``E'`` into final or recursing parts plus ``E_s'`` and ``E_r'``."""
    cfg = cfg or Config()
    tr = transcript if transcript is not None else Transcript()
    E = as_edge_ids(g, edge_ids)
    deg = _sub_degrees(g, E)
    Vp = np.flatnonzero(deg > 0)
    es: dict[int, list[int]] = {}
    er: list[np.ndarray] = []
    # edges among low-degree vertices leave E_h, owned by the smaller endpoint
    low = (deg > 0) & (deg <= thr.n_gamma)
    both = low[g.eu[E]] & low[g.ev[E]]
    for e in E[both].tolist():
        es.setdefault(int(min(g.eu[e], g.ev[e])), []).append(e)
    Eh = E[~both]
    parts: list[Part] = []

    def add_part(edges: np.ndarray, case: str, route: str) -> None:
        nonlocal next_id
        if not len(edges):
            return
        vs = np.unique(np.concatenate([g.eu[edges], g.ev[edges]]))
        parts.append(Part(np.sort(edges), vs, case, route, next_id))
        next_id += 1

    def split(edges: np.ndarray, cut: SubgraphCut, route: str) -> None:
        er.append(cut.boundary)
        keep = np.setdiff1d(edges, cut.boundary, assume_unique=True)
        inside = cut.side[g.eu[keep]]
        add_part(keep[inside], "C3-2", route)
        add_part(keep[~inside], "C3-2", route)

    for verts, Ei in _components(g, Eh):
        root = int(verts[0])
        Di = int(bfs_levels(g, root, Ei).max())
        charge_oracle(tr, "broadcast", D=Di, c=cfg.charge_c("broadcast"))
        if Di >= thr.diameter:
            cut = high_diameter_cut(g, Ei, root, thr)
            charge_oracle(tr, "high_diameter_cut", D=Di, c=cfg.charge_c("high_diameter_cut"))
            split(Ei, cut, "high_diameter")
            continue
        peel = low_degree_peel(g, Ei, thr.n_gamma)
        charge_oracle(tr, "low_degree_peel", D=Di, removed=peel.removed_vertices, n_gamma=thr.n_gamma,
                      c=cfg.charge_c("low_degree_peel"))
        for v, lst in peel.es.items():
            es.setdefault(v, []).extend(lst.tolist())
        for vj, Eij in _components(g, peel.remaining):
            rj = int(vj[0])
            Dij = int(bfs_levels(g, rj, Eij).max())
            charge_oracle(tr, "broadcast", D=Dij, c=cfg.charge_c("broadcast"))
            if Dij >= thr.diameter:
                cut = high_diameter_cut(g, Eij, rj, thr)
                charge_oracle(tr, "high_diameter_cut", D=Dij, c=cfg.charge_c("high_diameter_cut"))
                split(Eij, cut, "peeled_high_diameter")
                continue
            cut = low_conductance_cut(g, Eij, thr.phi, seed + 31 * (next_id + 1), cfg)
            charge_oracle(tr, "low_conductance", D=Dij, m=len(Eij), phi=thr.phi,
                          c=cfg.charge_c("low_conductance"))
            if cut is not None:
                split(Eij, cut, "low_conductance_cut")
            else:
                add_part(Eij, "C3-1", "expander")
    out = BlackBoxOutput(parts, es, np.sort(np.concatenate(er)) if er else np.zeros(0, dtype=np.int64),
                         np.zeros(0, dtype=np.int64))
    covered = np.zeros(g.n, dtype=bool)
    for p in parts:
        covered[p.vertices] = True
    out.untouched = Vp[~covered[Vp]]
    out.checks = check_blackbox(g, E, out, thr)
    return out


def _acyclic(g: Graph, es: dict[int, list[int]] | dict[int, np.ndarray]) -> bool:
    # Kahn's algorithm on the orientation owner -> other endpoint
    succ: dict[int, list[int]] = {}
    indeg: dict[int, int] = {}
    for v, lst in es.items():
        for e in np.asarray(lst).tolist():
            w = int(g.ev[e]) if int(g.eu[e]) == v else int(g.eu[e])
            succ.setdefault(v, []).append(w)
            indeg[w] = indeg.get(w, 0) + 1
            indeg.setdefault(v, indeg.get(v, 0))
    queue = deque(x for x, d in indeg.items() if d == 0)
    seen = 0
    while queue:
        x = queue.popleft()
        seen += 1
        for y in succ.get(x, []):
            indeg[y] -= 1
            if indeg[y] == 0:
                queue.append(y)
    return seen == len(indeg)


def check_blackbox(g: Graph, E: np.ndarray, out: BlackBoxOutput, thr: Thresholds) -> dict:
    """Assert the partition conditions on one black-box output; returns the measured values."""
    part_edges = [p.edges for p in out.parts]
    es_edges = [np.asarray(v, dtype=np.int64) for v in out.es.values()]
    allc = np.concatenate(part_edges + es_edges + [out.er]) if (part_edges or es_edges or len(out.er)) \
        else np.zeros(0, dtype=np.int64)
    if len(allc) != len(E) or not np.array_equal(np.sort(allc), np.sort(E)):
        raise InvariantError("partition", "E_h', E_s', E_r' do not partition E'")
    # C1: part vertex sets and S partition V'
    seen = np.zeros(g.n, dtype=np.int64)
    for p in out.parts:
        seen[p.vertices] += 1
    seen[out.untouched] += 1
    Vp = np.unique(np.concatenate([g.eu[E], g.ev[E]])) if len(E) else np.zeros(0, dtype=np.int64)
    if (seen[Vp] != 1).any() or seen.sum() != len(Vp):
        raise InvariantError("C1", "part vertex sets and S do not partition V'")
    # C2: per-vertex bound and acyclic orientation
    Eh = np.concatenate(part_edges) if part_edges else np.zeros(0, dtype=np.int64)
    degh = _sub_degrees(g, Eh)
    for v, lst in out.es.items():
        if len(lst) + degh[v] > thr.n_gamma + 1e-9:
            raise InvariantError("C2", f"vertex {v}: |E_s'| + deg = {len(lst) + degh[v]} > n^gamma")
    if not _acyclic(g, out.es):
        raise InvariantError("C2", "E_s' orientation has a cycle")
    # C5: charging inequality
    bound = (_xlogx(len(E)) - sum(_xlogx(len(p.edges)) for p in out.parts)) / (6 * thr.n_rho * thr.log_m)
    if len(out.er) > bound + 1e-9:
        raise InvariantError("C5", f"|E_r'| = {len(out.er)} > {bound:.3f}")
    # C6: distinct identifiers
    ids = [p.part_id for p in out.parts]
    if len(set(ids)) != len(ids):
        raise InvariantError("C6", "part identifiers are not distinct")
    return {"C1": True, "C2": True, "C5": {"er": int(len(out.er)), "bound": bound}, "C6": True}


# ----------------------------------------------------------- tripartition

@dataclass
class Tripartition:
    e_h: np.ndarray
    e_s: dict[int, np.ndarray]
    e_r: np.ndarray
    components: list[tuple[int, np.ndarray]]
    thresholds: Thresholds
    transcript: Transcript = field(default_factory=Transcript, repr=False)
    stats: dict = field(default_factory=dict)

    def e_s_all(self) -> np.ndarray:
        if not self.e_s:
            return np.zeros(0, dtype=np.int64)
        return np.sort(np.concatenate(list(self.e_s.values())))

    def to_dict(self) -> dict:
        return {"e_h_components": [{"id": int(i), "vertices": vs.tolist()} for i, vs in self.components],
                "e_h_size": int(len(self.e_h)),
                "e_s_per_vertex_sizes": {int(v): int(len(e)) for v, e in sorted(self.e_s.items())},
                "e_r_size": int(len(self.e_r)),
                "rounds_charged": int(self.transcript.rounds),
                "stats": self.stats}


def recursion_guard(n: int, gamma: float) -> int:
    return 2 * math.ceil(n ** (1 - gamma)) + 1


def tripartition(g: Graph, gamma: float, rho: float, seed: int = 0, cfg: Config | None = None,
                 thresholds: Thresholds | None = None) -> Tripartition:
    """Recursive application of :func:`blackbox_partition` until every part is final."""
    cfg = cfg or Config()
    thr = thresholds or Thresholds.make(g.n, g.m, gamma, rho)
    tr = Transcript()
    guard = recursion_guard(g.n, gamma)
    e_h: list[np.ndarray] = []
    e_s: dict[int, list[int]] = {}
    e_r: list[np.ndarray] = []
    queue = deque([(np.arange(g.m), 0)])
    next_id = 0
    max_depth = 0
    calls = 0
    cases: dict[str, int] = {}
    while queue:
        edges, depth = queue.popleft()
        if depth > guard:
            raise InvariantError("recursion", f"depth {depth} exceeds guard {guard}")
        max_depth = max(max_depth, depth)
        out = blackbox_partition(g, edges, thr, seed + 1009 * calls, cfg, tr, next_id)
        calls += 1
        next_id += len(out.parts)
        for v, lst in out.es.items():
            e_s.setdefault(v, []).extend(lst)
        e_r.append(out.er)
        for p in out.parts:
            cases[p.route] = cases.get(p.route, 0) + 1
            if p.case == "C3-1":
                e_h.append(p.edges)
            else:
                queue.append((p.edges, depth + 1))
    eh = np.sort(np.concatenate(e_h)) if e_h else np.zeros(0, dtype=np.int64)
    comps = [(int(vs.max()), vs) for vs in connected_components(g, eh)] if len(eh) else []
    es = {v: np.sort(np.asarray(l, dtype=np.int64)) for v, l in sorted(e_s.items())}
    er = np.sort(np.concatenate(e_r)) if e_r else np.zeros(0, dtype=np.int64)
    tp = Tripartition(eh, es, er, comps, thr, tr,
                      {"calls": calls, "max_depth": max_depth, "guard": guard, "routes": cases,
                       "gamma": gamma, "rho": rho})
    return tp


def check_tripartition(g: Graph, tp: Tripartition, spot_check_max: int = 18,
                       phi_constant: float = 1000.0) -> dict:
    """Evaluate every structural property of a tripartition; never raises.

    Keys ``partition``, ``er_between_components``, ``es_per_vertex``, ``er_size``
    and ``es_acyclic`` are the hard properties. ``min_degree`` and
    ``conductance_spot_check`` are reported alongside, the latter for components
    with at most ``spot_check_max`` vertices, together with how many of those
    reach the expansion target ``phi_constant / n^rho`` (capped at 1).
    """
    from .graph import graph_conductance_exhaustive

    thr = tp.thresholds
    es_all = tp.e_s_all()
    allc = np.concatenate([tp.e_h, es_all, tp.e_r])
    rep: dict = {}
    rep["partition"] = bool(len(allc) == g.m and np.array_equal(np.sort(allc), np.arange(g.m)))
    label = np.arange(g.n) + g.n       # vertices outside every component are their own class
    for i, (_, vs) in enumerate(tp.components):
        label[vs] = i
    rep["er_between_components"] = bool((label[g.eu[tp.e_r]] != label[g.ev[tp.e_r]]).all())
    worst = max((len(v) for v in tp.e_s.values()), default=0)
    rep["es_per_vertex"] = bool(worst <= thr.n_gamma + 1e-9)
    rep["es_max"] = int(worst)
    bound = g.m / (6 * thr.n_rho)
    rep["er_size"] = bool(len(tp.e_r) <= bound + 1e-9)
    rep["er_bound"] = bound
    rep["er_reported_bound"] = g.m ** (1 - math.log(thr.n_rho) / math.log(max(g.n, 2)) / 2) \
        if g.n > 1 else 0.0
    rep["es_acyclic"] = _acyclic(g, tp.e_s)
    degs = _sub_degrees(g, tp.e_h)
    mins = [int(degs[vs].min()) for _, vs in tp.components]
    rep["min_degree_ok"] = bool(all(d > thr.n_gamma / 2 for d in mins))
    target = min(1.0, phi_constant / thr.n_rho)
    spots, on_target = [], 0
    for _, vs in tp.components:
        if len(vs) > spot_check_max:
            continue
        sub, _ = induced(g, tp.e_h, vs)
        phi_c = graph_conductance_exhaustive(sub)
        spots.append(float(phi_c) > thr.promise(sub.m))
        on_target += float(phi_c) >= target
    rep["conductance_spot_checked"] = len(spots)
    rep["conductance_spot_passed"] = int(sum(spots))
    rep["conductance_target"] = target
    rep["conductance_spot_on_target"] = int(on_target)
    rep["hard_ok"] = all(rep[k] for k in ("partition", "er_between_components", "es_per_vertex",
                                           "er_size", "es_acyclic"))
    return rep


def induced(g: Graph, edge_ids, vertices) -> tuple[Graph, np.ndarray]:
    """Subgraph on ``vertices`` using only ``edge_ids``, relabelled ``0..k-1``; returns it and the map."""
    ids = as_edge_ids(g, edge_ids)
    vs = np.asarray(vertices, dtype=np.int64)
    local = np.full(g.n, -1, dtype=np.int64)
    local[vs] = np.arange(len(vs))
    keep = ids[(local[g.eu[ids]] >= 0) & (local[g.ev[ids]] >= 0)]
    sub = Graph(len(vs), list(zip(local[g.eu[keep]].tolist(), local[g.ev[keep]].tolist())),
                g.w[keep].tolist(), weight_exponent=g.weight_exponent, check_weights=False)
    return sub, vs
