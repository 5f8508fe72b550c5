"""Rooted spanning trees with ancestor queries in O(1) via preorder intervals."""

from __future__ import annotations

import numpy as np

from .graph import GraphError


class RootedTree:
    """A rooted tree on a subset of the vertex ids ``0..n-1``.

    ``parent[root] == -1`` and ``parent[x] == -1`` for vertices outside the tree.
    ``tin``/``tout`` are preorder entry/exit times, so ``desc(v)`` is exactly the
    set of members ``x`` with ``tin[v] <= tin[x] < tout[v]``.
    """

    def __init__(self, root: int, parent: np.ndarray, members: np.ndarray):
        self.root = int(root)
        self.n = len(parent)
        self.parent = np.asarray(parent, dtype=np.int64).copy()
        self.members = np.asarray(members, dtype=bool).copy()
        if not self.members[self.root] or self.parent[self.root] != -1:
            raise GraphError("root must be a member without parent")
        self.children: list[list[int]] = [[] for _ in range(self.n)]
        for x in np.flatnonzero(self.members).tolist():
            p = int(self.parent[x])
            if x == self.root:
                continue
            if p < 0 or not self.members[p]:
                raise GraphError(f"vertex {x} has no parent inside the tree")
            self.children[p].append(x)
        self._index()

    @classmethod
    def from_parents(cls, root: int, parent, members=None) -> "RootedTree":
        parent = np.asarray(parent, dtype=np.int64)
        if members is None:
            members = (parent >= 0)
            members[root] = True
        return cls(root, parent, members)

    @classmethod
    def from_edges(cls, n: int, root: int, edges) -> "RootedTree":
        """Root an undirected edge list (must form a tree on the touched vertices)."""
        adj: list[list[int]] = [[] for _ in range(n)]
        for a, b in edges:
            adj[int(a)].append(int(b))
            adj[int(b)].append(int(a))
        parent = np.full(n, -1, dtype=np.int64)
        members = np.zeros(n, dtype=bool)
        members[root] = True
        stack = [root]
        count = 0
        while stack:
            x = stack.pop()
            for y in sorted(adj[x]):
                if members[y]:
                    if y != parent[x]:
                        raise GraphError("edge set contains a cycle")
                    continue
                members[y] = True
                parent[y] = x
                stack.append(y)
                count += 1
        if count != len(edges):
            raise GraphError("edge set is not a tree on the vertices reachable from the root")
        return cls(root, parent, members)

    def _index(self) -> None:
        n = self.n
        self.level = np.full(n, -1, dtype=np.int64)
        self.tin = np.full(n, -1, dtype=np.int64)
        self.tout = np.full(n, -1, dtype=np.int64)
        self.preorder: list[int] = []
        self.level[self.root] = 0
        stack = [(self.root, False)]
        t = 0
        while stack:
            x, done = stack.pop()
            if done:
                self.tout[x] = t
                continue
            self.tin[x] = t
            t += 1
            self.preorder.append(x)
            stack.append((x, True))
            for c in reversed(self.children[x]):
                self.level[c] = self.level[x] + 1
                stack.append((c, False))
        if t != int(self.members.sum()):
            raise GraphError("parent pointers contain a cycle")
        self.size = t
        self.depth = int(self.level.max()) if t else 0
        self.preorder_arr = np.asarray(self.preorder, dtype=np.int64)
        self.bfs_order = sorted(self.preorder, key=lambda x: (self.level[x], self.tin[x]))
        self._anc: list[list[int]] | None = None

    def is_ancestor(self, a: int, x: int) -> bool:
        """True when ``a`` is an ancestor of ``x`` (every vertex is its own ancestor)."""
        return bool(self.tin[a] <= self.tin[x] < self.tout[a])

    def desc_mask(self, v: int) -> np.ndarray:
        return self.members & (self.tin >= self.tin[v]) & (self.tin < self.tout[v])

    def desc(self, v: int) -> list[int]:
        return self.preorder[self.tin[v]:self.tout[v]]

    def ancestors(self, v: int) -> list[int]:
        """``anc(v)`` from the root down to ``v`` inclusive; length ``level(v)+1``."""
        if self._anc is None:
            anc: list[list[int]] = [[] for _ in range(self.n)]
            for x in self.bfs_order:
                p = int(self.parent[x])
                anc[x] = (anc[p] + [x]) if p >= 0 else [x]
            self._anc = anc
        return self._anc[v]

    def subtree_sizes(self) -> np.ndarray:
        return np.where(self.members, self.tout - self.tin, 0)

    def edges(self) -> list[tuple[int, int]]:
        """Tree edges as ``(parent, child)`` pairs in preorder of the child."""
        return [(int(self.parent[x]), x) for x in self.preorder if x != self.root]

    def non_root(self) -> list[int]:
        return [x for x in self.preorder if x != self.root]

    def __repr__(self) -> str:
        return f"RootedTree(root={self.root}, size={self.size}, depth={self.depth})"
