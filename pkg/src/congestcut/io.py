"""Plain-text edge list format.

::

    # comment
    n m [weighted]
    u v [w]
    ...
"""

from __future__ import annotations

from pathlib import Path

from .graph import Graph, GraphError


def parse_graph(text: str, weight_exponent: int = 4) -> Graph:
    header = None
    edges: list[tuple[int, int]] = []
    weights: list[int] = []
    seen: dict[tuple[int, int], int] = {}
    weighted = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if header is None:
            if len(parts) not in (2, 3) or (len(parts) == 3 and parts[2] != "weighted"):
                raise GraphError(f"line {lineno}: header must be 'n m [weighted]'")
            try:
                header = (int(parts[0]), int(parts[1]))
            except ValueError:
                raise GraphError(f"line {lineno}: header counts must be integers") from None
            weighted = len(parts) == 3
            continue
        if len(parts) not in (2, 3):
            raise GraphError(f"line {lineno}: expected 'u v [w]'")
        try:
            nums = [int(p) for p in parts]
        except ValueError:
            raise GraphError(f"line {lineno}: non-integer field") from None
        u, v = nums[0], nums[1]
        w = nums[2] if len(nums) == 3 else 1
        if len(nums) == 3 and not weighted:
            raise GraphError(f"line {lineno}: weight given but header is not 'weighted'")
        if not (0 <= u < header[0] and 0 <= v < header[0]):
            raise GraphError(f"line {lineno}: vertex out of range 0..{header[0] - 1}")
        if u == v:
            raise GraphError(f"line {lineno}: self-loop at {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphError(f"line {lineno}: duplicate edge {key} (first on line {seen[key]})")
        if w < 1:
            raise GraphError(f"line {lineno}: weight must be a positive integer")
        seen[key] = lineno
        edges.append(key)
        weights.append(w)
    if header is None:
        raise GraphError("missing header line")
    if len(edges) != header[1]:
        raise GraphError(f"header announces {header[1]} edges but {len(edges)} were read")
    return Graph(header[0], edges, weights, weight_exponent=weight_exponent)


def read_graph(path, weight_exponent: int = 4) -> Graph:
    return parse_graph(Path(path).read_text(), weight_exponent=weight_exponent)


def format_graph(g: Graph, weighted: bool | None = None) -> str:
    if weighted is None:
        weighted = g.weighted
    lines = [f"{g.n} {g.m}" + (" weighted" if weighted else "")]
    for u, v, w in zip(g.eu.tolist(), g.ev.tolist(), g.w.tolist()):
        lines.append(f"{u} {v} {w}" if weighted else f"{u} {v}")
    return "\n".join(lines) + "\n"


def write_graph(g: Graph, path, weighted: bool | None = None) -> None:
    Path(path).write_text(format_graph(g, weighted))
