"""Synchronous message-passing simulator with per-edge bandwidth accounting.

A run proceeds in lockstep rounds. ``init`` returns the messages a node sends in
round 1; in round ``r`` every live node receives what its neighbours sent in
round ``r`` and returns what it sends in round ``r + 1``. A node that halts in
round ``r`` must not return messages from that call.

Subroutines that are computed centrally (e.g. an MST solver or an approximate
connectivity estimate) are accounted with :func:`charge_oracle`, which adds the
ceiling of a registered round formula to the transcript.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .graph import Graph, GraphError
from .tree import RootedTree


class BandwidthError(RuntimeError):
    pass


class SimulationTimeout(RuntimeError):
    pass


def node_rng(seed: int, node: int, rnd: int) -> np.random.Generator:
    """Per-node generator keyed by a hash of ``(seed, node, round)``."""
    digest = hashlib.blake2b(f"{seed}:{node}:{rnd}".encode(), digest_size=8).digest()
    return np.random.default_rng(int.from_bytes(digest, "little"))


class NodeContext:
    """What a node may look at: its id, incident edges, the round and its own coins."""

    def __init__(self, node: int, neighbors: Sequence[int], edge_ids: Sequence[int],
                 weights: Sequence[int], n: int, seed: int):
        self.node = node
        self.neighbors = list(neighbors)
        self.edge_ids = list(edge_ids)
        self.weights = dict(zip(self.neighbors, weights))
        self.n = n
        self.seed = seed
        self.round = 0
        self.halted = False

    def rng(self) -> np.random.Generator:
        return node_rng(self.seed, self.node, self.round)

    def halt(self) -> None:
        self.halted = True


class NodeProgram:
    """Base class; subclasses override :meth:`init` and :meth:`on_round`."""

    def init(self, ctx: NodeContext) -> Mapping[int, Sequence[int]]:
        return {}

    def on_round(self, ctx: NodeContext, inbox: list[tuple[int, tuple]]) -> Mapping[int, Sequence[int]]:
        ctx.halt()
        return {}


@dataclass
class ChargedOracleCall:
    label: str
    formula: str
    inputs: dict
    round_charge: int


@dataclass
class Transcript:
    """Round accounting for one run or a whole pipeline.

    ``rounds`` counts simulated rounds plus every charge. ``stages`` lists each
    contributing piece with its execution mode (``simulated`` or ``charged``).
    """

    rounds: int = 0
    halts: list[int] = field(default_factory=list)
    messages_per_round: list[int] = field(default_factory=list)
    max_words_per_round: list[int] = field(default_factory=list)
    charges: list[ChargedOracleCall] = field(default_factory=list)
    violations: list[dict] = field(default_factory=list)
    stages: list[dict] = field(default_factory=list)

    @property
    def rounds_elapsed(self) -> int:
        return self.rounds

    def absorb(self, other: "Transcript", label: str) -> "Transcript":
        """Append a finished simulation or sub-pipeline as one stage."""
        simulated = bool(other.messages_per_round or other.halts
                         or any(s["mode"] != "charged" for s in other.stages))
        mode = "simulated" if simulated else "charged"
        if other.charges and simulated:
            mode = "mixed"
        self.rounds += other.rounds
        self.charges.extend(other.charges)
        self.violations.extend(other.violations)
        self.stages.append({"label": label, "mode": mode, "rounds": other.rounds})
        return self

    def to_dict(self) -> dict:
        return {"rounds": self.rounds, "halts": list(self.halts),
                "charges": [asdict(c) for c in self.charges],
                "violations": list(self.violations), "stages": list(self.stages),
                "messages_per_round": list(self.messages_per_round)}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kw)


# ------------------------------------------------------------------ charges

def log2n(n: int) -> int:
    return max(1, math.ceil(math.log2(max(n, 2))))


def log_star(n: float) -> int:
    k = 0
    while n > 1:
        n = math.log2(n)
        k += 1
    return k


@dataclass(frozen=True)
class RoundFormula:
    text: str
    fn: Callable[..., float]


CHARGE_FORMULAS: dict[str, RoundFormula] = {}


def register_formula(label: str, text: str, fn: Callable[..., float]) -> None:
    CHARGE_FORMULAS[label] = RoundFormula(text, fn)


register_formula("zero", "0", lambda **_: 0)
register_formula("broadcast", "c * D", lambda D, c=1, **_: c * D)
register_formula("diameter_estimate", "c * 2 * D", lambda D, c=1, **_: c * 2 * D)
register_formula("c_slot_mst", "c * (D + sqrt(n*l)) * ceil(log2 n)",
                 lambda n, l, D, c=1, **_: c * (D + math.sqrt(n * l)) * log2n(n))
register_formula("lambda_estimate", "c * (sqrt(n) + D) * ceil(log2 n)",
                 lambda n, D, c=1, **_: c * (math.sqrt(n) + D) * log2n(n))
register_formula("lambda_approx", "c * (sqrt(n) * log*(n) + D) * eps^-5 * ceil(log2 n)^3",
                 lambda n, D, eps, c=1, **_: c * (math.sqrt(n) * max(1, log_star(n)) + D)
                 * eps ** -5 * log2n(n) ** 3)
register_formula("lambda_exact_small", "c * (sqrt(n) * log*(n) + D) * lambda^4 * ceil(log2 n)^2",
                 lambda n, D, lam, c=1, **_: c * (math.sqrt(n) * max(1, log_star(n)) + D)
                 * lam ** 4 * log2n(n) ** 2)
register_formula("low_conductance", "c * (D + ceil(log2 m)^9 / phi^10)",
                 lambda D, m, phi, c=1, **_: c * (D + log2n(m) ** 9 / phi ** 10))
register_formula("high_diameter_cut", "c * D", lambda D, c=1, **_: c * D)
register_formula("low_degree_peel", "c * (D + removed / n_gamma)",
                 lambda D, removed, n_gamma, c=1, **_: c * (D + removed / n_gamma))
register_formula("trim", "trimmed + D * ceil(log2(trimmed + 2))",
                 lambda trimmed, D, **_: trimmed + D * math.ceil(math.log2(trimmed + 2)))
register_formula("shave", "c", lambda c=1, **_: c)
register_formula("tree_primitive", "c * (2 * depth + 1)", lambda depth, c=1, **_: c * (2 * depth + 1))
register_formula("cross_values", "c * (depth + n)", lambda depth, n, c=1, **_: c * (depth + n))
register_formula("pair_broadcast", "c * (n + 2 * D)", lambda n, D, c=1, **_: c * (n + 2 * D))
register_formula("contracted_primitive", "c * n^(1 - eps/22)",
                 lambda n, eps, c=1, **_: c * n ** (1 - eps / 22))


def charge_oracle(transcript: Transcript, label: str, **inputs) -> ChargedOracleCall:
    """Add ``ceil(formula(inputs))`` rounds for a centrally computed subroutine."""
    if label not in CHARGE_FORMULAS:
        raise KeyError(f"no round formula registered for {label!r}")
    f = CHARGE_FORMULAS[label]
    value = f.fn(**inputs)
    charge = int(math.ceil(value - 1e-9)) if value > 0 else 0
    call = ChargedOracleCall(label, f.text, {k: _jsonable(v) for k, v in inputs.items()}, charge)
    transcript.charges.append(call)
    transcript.rounds += charge
    transcript.stages.append({"label": label, "mode": "charged", "rounds": charge})
    return call


def _jsonable(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    return v


# ------------------------------------------------------------------ engine

def run(g: Graph, programs: Sequence[NodeProgram], max_rounds: int = 100_000, seed: int = 0,
        bandwidth: int = 1, audit: bool = False, word_exponent: int = 4) -> Transcript:
    """Execute one program per vertex in lockstep rounds.

    Raises :class:`BandwidthError` when a directed edge carries more than
    ``bandwidth`` words in a round or a word falls outside ``0..n**word_exponent``
    (in audit mode the violation is logged instead).
    """
    if len(programs) != g.n:
        raise GraphError("one program per vertex is required")
    max_word = max(g.n, 2) ** word_exponent
    ctxs = [NodeContext(x, g.neighbors(x).tolist(), g.incident(x).tolist(),
                        g.w[g.incident(x)].tolist(), g.n, seed) for x in range(g.n)]
    nbr_edge = [dict(zip(c.neighbors, c.edge_ids)) for c in ctxs]
    tr = Transcript(halts=[-1] * g.n)

    def collect(x: int, out, rnd: int, pending: list) -> None:
        if not out:
            return
        if ctxs[x].halted:
            raise RuntimeError(f"node {x} sent messages in the round it halted ({rnd - 1})")
        for y, payload in out.items():
            if y not in nbr_edge[x]:
                raise GraphError(f"node {x} addressed non-neighbour {y}")
            words = tuple(int(wd) for wd in (payload if isinstance(payload, (tuple, list)) else (payload,)))
            bad = len(words) > bandwidth or any(wd < 0 or wd > max_word for wd in words)
            if bad:
                info = {"round": rnd, "sender": x, "receiver": y, "edge": nbr_edge[x][y],
                        "words": len(words), "max_value": max(words, default=0)}
                if not audit:
                    raise BandwidthError(f"round {rnd}: node {x} -> {y} on edge {nbr_edge[x][y]} "
                                         f"carries {len(words)} word(s) {words[:4]}")
                tr.violations.append(info)
            pending.append((x, nbr_edge[x][y], y, words))

    pending: list = []
    for x in range(g.n):
        ctxs[x].round = 0
        out = programs[x].init(ctxs[x])
        if ctxs[x].halted:
            tr.halts[x] = 0
            if out:
                raise RuntimeError(f"node {x} halted at init but sent messages")
        collect(x, out, 1, pending)
    rnd = 0
    while not all(c.halted for c in ctxs):
        rnd += 1
        if rnd > max_rounds:
            raise SimulationTimeout(f"not all nodes halted within {max_rounds} rounds")
        pending.sort(key=lambda t: (t[0], t[1]))
        inboxes: list[list] = [[] for _ in range(g.n)]
        for x, _, y, words in pending:
            inboxes[y].append((x, words))
        tr.messages_per_round.append(len(pending))
        tr.max_words_per_round.append(max((len(t[3]) for t in pending), default=0))
        pending = []
        for x in range(g.n):
            c = ctxs[x]
            if c.halted:
                continue
            c.round = rnd
            out = programs[x].on_round(c, inboxes[x])
            if c.halted:
                tr.halts[x] = rnd
                if out:
                    raise RuntimeError(f"node {x} sent messages in the round it halted ({rnd})")
                continue
            collect(x, out, rnd + 1, pending)
    tr.rounds = max(tr.halts) if tr.halts else 0
    return tr


# ------------------------------------------------------------ tree primitives

def tree_network(tree: RootedTree, g: Graph | None = None) -> Graph:
    """The communication graph used by a tree primitive: the tree edges themselves."""
    if g is not None:
        for p, c in tree.edges():
            if not g.has_edge(p, c):
                raise GraphError(f"tree edge ({p}, {c}) is not a graph edge")
    return Graph(tree.n, tree.edges(), check_weights=False)


def _require_spanning(tree: RootedTree) -> None:
    if not tree.members.all():
        raise GraphError("tree primitives need a tree spanning every vertex")


class _Downcast(NodeProgram):
    # a node at level L forwards, in round r, the message of its ancestor at
    # level r - L - 1 (its own message when that is L); a message released at
    # level a reaches level d in round a + d, so every tree edge carries at most
    # one word per round
    def __init__(self, level: int, children: list[int], depth: int, message: int):
        self.level = level
        self.children = children
        self.depth = depth
        self.message = message
        self.got: dict[int, int] = {}

    def _send(self, rnd: int):
        a = rnd - self.level - 1
        if not self.children or a < 0 or a > self.level:
            return {}
        value = self.message if a == self.level else self.got[a]
        return {c: (value,) for c in self.children}

    def _last_round(self) -> int:
        return 2 * self.level + 1 if self.children else max(2 * self.level - 1, 0)

    def init(self, ctx):
        if self._last_round() == 0:
            ctx.halt()
            return {}
        return self._send(1)

    def on_round(self, ctx, inbox):
        for _, (value,) in inbox:
            # arrival round r from the ancestor at level r - level
            self.got[ctx.round - self.level] = value
        if ctx.round >= self._last_round():
            ctx.halt()
            return {}
        return self._send(ctx.round + 1)


def downcast(tree: RootedTree, messages: Sequence[int], seed: int = 0, **kw) -> tuple[Transcript, list[list[int]]]:
    """Deliver every node's one-word message to all of its descendants.

    Returns the transcript and, per node, the received messages ordered from the
    root downwards (i.e. the messages of its proper ancestors).
    """
    _require_spanning(tree)
    net = tree_network(tree)
    progs = [_Downcast(int(tree.level[x]), tree.children[x], tree.depth, int(messages[x]))
             for x in range(tree.n)]
    tr = run(net, progs, seed=seed, **kw)
    received = [[progs[x].got[a] for a in sorted(progs[x].got)] for x in range(tree.n)]
    return tr, received


class _Aggregate(NodeProgram):
    # node x at level l sends to its parent, in round depth - l + a + 1, the
    # partial sum for its ancestor at level a; children at level l + 1 deliver
    # that value one round earlier, so no buffering beyond one round is needed
    def __init__(self, level: int, parent: int, depth: int, own: list[int]):
        self.level = level
        self.parent = parent
        self.depth = depth
        self.acc = list(own)  # acc[a] = running g(anc at level a, desc x)

    def _send(self, rnd: int):
        a = rnd - (self.depth - self.level) - 1
        if self.parent < 0 or not 0 <= a < self.level:
            return {}
        return {self.parent: (self.acc[a],)}

    def _last_round(self) -> int:
        return self.depth if self.level > 0 else self.depth

    def init(self, ctx):
        if self.depth == 0:
            ctx.halt()
            return {}
        return self._send(1)

    def on_round(self, ctx, inbox):
        a = ctx.round - (self.depth - self.level - 1) - 1
        for _, (value,) in inbox:
            self.acc[a] += value
        if ctx.round >= self._last_round():
            ctx.halt()
            return {}
        return self._send(ctx.round + 1)


def aggregate_descendant_sums(tree: RootedTree, g_value: Callable[[int, int], int], seed: int = 0,
                              **kw) -> tuple[Transcript, np.ndarray]:
    """``f(v) = sum over x in desc(v) of g(v, x)`` at every node.

    ``g_value(v, x)`` is evaluated by node ``x`` for each of its ancestors ``v``.
    """
    _require_spanning(tree)
    net = tree_network(tree)
    progs = []
    for x in range(tree.n):
        anc = tree.ancestors(x)
        progs.append(_Aggregate(int(tree.level[x]), int(tree.parent[x]), tree.depth,
                                [int(g_value(v, x)) for v in anc]))
    tr = run(net, progs, seed=seed, **kw)
    f = np.array([progs[x].acc[int(tree.level[x])] for x in range(tree.n)], dtype=np.int64)
    return tr, f


class _Convergecast(NodeProgram):
    # node at level l sends f_j (j = 0..k-1) to its parent in round depth - l + j + 1
    def __init__(self, level: int, parent: int, depth: int, own: list[int]):
        self.level = level
        self.parent = parent
        self.depth = depth
        self.f = list(own)
        self.k = len(own)

    def _send(self, rnd: int):
        j = rnd - (self.depth - self.level) - 1
        if self.parent < 0 or not 0 <= j < self.k:
            return {}
        return {self.parent: (self.f[j],)}

    def _last_round(self) -> int:
        if self.parent >= 0:
            return self.depth - self.level + self.k
        return self.depth - 1 + self.k if self.depth > 0 else 0

    def init(self, ctx):
        if self._last_round() == 0:
            ctx.halt()
            return {}
        return self._send(1)

    def on_round(self, ctx, inbox):
        j = ctx.round - (self.depth - self.level - 1) - 1
        for _, (value,) in inbox:
            self.f[j] += value
        if ctx.round >= self._last_round():
            ctx.halt()
            return {}
        return self._send(ctx.round + 1)


def convergecast_subtree(tree: RootedTree, g_values, seed: int = 0, **kw) -> tuple[Transcript, np.ndarray]:
    """Subtree sums ``f(v) = g(v) + sum over children f(c)`` for ``k`` functions at once.

    ``g_values`` has shape ``(n,)`` or ``(n, k)``; the result has shape ``(n, k)``.
    """
    _require_spanning(tree)
    gv = np.asarray(g_values, dtype=np.int64)
    if gv.ndim == 1:
        gv = gv[:, None]
    net = tree_network(tree)
    progs = [_Convergecast(int(tree.level[x]), int(tree.parent[x]), tree.depth, gv[x].tolist())
             for x in range(tree.n)]
    tr = run(net, progs, seed=seed, **kw)
    return tr, np.array([p.f for p in progs], dtype=np.int64).reshape(tree.n, gv.shape[1])


# ------------------------------------------------------- network-wide programs

class _FloodMax(NodeProgram):
    """Leader election by maximum id; halts after ``bound`` rounds."""

    def __init__(self, bound: int):
        self.bound = bound
        self.best = -1
        self.changed = True

    def init(self, ctx):
        self.best = ctx.node
        if self.bound == 0:
            ctx.halt()
            return {}
        return {y: (self.best,) for y in ctx.neighbors}

    def on_round(self, ctx, inbox):
        new = max([self.best] + [w[0] for _, w in inbox])
        self.changed = new != self.best
        self.best = new
        if ctx.round >= self.bound:
            ctx.halt()
            return {}
        return {y: (self.best,) for y in ctx.neighbors} if self.changed else {}


def flood_max(g: Graph, bound: int, seed: int = 0, **kw) -> tuple[Transcript, list[int]]:
    progs = [_FloodMax(bound) for _ in range(g.n)]
    tr = run(g, progs, seed=seed, **kw)
    return tr, [p.best for p in progs]


class _BfsBuild(NodeProgram):
    """Distributed BFS from ``root``: join on the first ``(level)`` token, forward once."""

    def __init__(self, is_root: bool, bound: int):
        self.is_root = is_root
        self.bound = bound
        self.parent = -1
        self.level = 0 if is_root else -1

    def init(self, ctx):
        if self.is_root:
            return {y: (0,) for y in ctx.neighbors}
        return {}

    def on_round(self, ctx, inbox):
        out = {}
        if self.level < 0 and inbox:
            sender, (lvl,) = min(inbox)
            self.parent, self.level = sender, lvl + 1
            out = {y: (self.level,) for y in ctx.neighbors if y != sender}
        if ctx.round >= self.bound or (self.level >= 0 and not out):
            ctx.halt()
            return {}
        return out


def build_bfs_tree(g: Graph, root: int, seed: int = 0, **kw) -> tuple[Transcript, RootedTree]:
    """Simulated BFS construction; ties between same-round offers go to the smaller id."""
    progs = [_BfsBuild(x == root, g.n + 1) for x in range(g.n)]
    tr = run(g, progs, seed=seed, **kw)
    parent = np.array([p.parent for p in progs], dtype=np.int64)
    members = np.array([p.level >= 0 for p in progs])
    return tr, RootedTree(root, parent, members)
