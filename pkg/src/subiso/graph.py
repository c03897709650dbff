"""Undirected simple graphs: data model, file I/O, BFS, and G(n, p) generation.

Vertices are dense 0-based integers.  The same class serves as the target
graph and as the pattern graph; patterns are capped at 32 vertices so that
per-vertex pattern sets and color sets fit in a 32-bit mask.
"""

from __future__ import annotations

import random
from collections import deque
from typing import Iterable, Optional

MAX_PATTERN_VERTICES = 32

# A mapping mask is a list with one 32-bit int per target vertex; bit y set
# means pattern vertex y may be mapped onto that target vertex.
MappingMask = list


class GraphParseError(ValueError):
    """Malformed graph file; remembers the offending 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"{message} at line {line}")
        self.line = line


class Graph:
    """Immutable undirected simple graph.

    Adjacency lists are kept sorted so neighbourhood intersections run in
    linear time; ``neighbor_sets`` mirrors them for O(1) membership tests.
    """

    __slots__ = ("vertex_count", "edge_count", "adjacency", "neighbor_sets")

    def __init__(self, vertex_count: int, edges: Iterable[tuple[int, int]]):
        if vertex_count < 0:
            raise ValueError("vertex count must be non-negative")
        adjacency: list[list[int]] = [[] for _ in range(vertex_count)]
        seen: set[tuple[int, int]] = set()
        for u, v in edges:
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise ValueError(f"vertex id out of range in edge ({u}, {v})")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add(key)
            adjacency[u].append(v)
            adjacency[v].append(u)
        for neighbors in adjacency:
            neighbors.sort()
        self.vertex_count = vertex_count
        self.edge_count = len(seen)
        self.adjacency = adjacency
        self.neighbor_sets = [frozenset(nbrs) for nbrs in adjacency]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.neighbor_sets[u]

    def edges(self) -> list[tuple[int, int]]:
        """All edges as (u, v) pairs with u < v, lexicographically sorted."""
        return [(u, v) for u in range(self.vertex_count)
                for v in self.adjacency[u] if u < v]

    def serialize(self) -> str:
        lines = [f"{self.vertex_count} {self.edge_count}"]
        lines.extend(f"{u} {v}" for u, v in self.edges())
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Graph(n={self.vertex_count}, m={self.edge_count})"


def all_ones_mask(vertex_count: int, width: int = MAX_PATTERN_VERTICES) -> MappingMask:
    """Mask allowing every pattern vertex (low ``width`` bits) everywhere."""
    full = (1 << width) - 1
    return [full] * vertex_count


def parse_graph(data, kind: str = "plain") -> tuple[Graph, Optional[MappingMask]]:
    """Parse a graph file.

    Plain format: line 1 is ``n m``, followed by exactly m lines ``u v`` with
    0 <= u, v < n and u != v.  Lines starting with ``#`` and blank lines are
    ignored.  The extended format allows trailing lines ``a v k p1 ... pk``
    stating that target vertex v may host exactly the k listed pattern
    vertices; vertices without such a line default to all-ones over 32 bits
    (callers narrow the mask once the pattern size is known).

    Returns (graph, mask); mask is None for the plain format.
    """
    if kind not in ("plain", "extended"):
        raise ValueError(f"unknown graph format kind: {kind!r}")
    if isinstance(data, bytes):
        data = data.decode("utf-8")

    n = m = -1
    edges: list[tuple[int, int]] = []
    edge_seen: set[tuple[int, int]] = set()
    mask: Optional[MappingMask] = None
    mask_lines_seen: set[int] = set()
    last_line = 0

    for lineno, raw in enumerate(data.splitlines(), start=1):
        last_line = lineno
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if n < 0:
            if len(fields) != 2:
                raise GraphParseError("malformed header", lineno)
            try:
                n, m = int(fields[0]), int(fields[1])
            except ValueError:
                raise GraphParseError("malformed header", lineno) from None
            if n < 0 or m < 0:
                raise GraphParseError("malformed header", lineno)
            if kind == "extended":
                mask = all_ones_mask(n)
            continue
        if len(edges) < m:
            if len(fields) != 2:
                raise GraphParseError("malformed edge line", lineno)
            try:
                u, v = int(fields[0]), int(fields[1])
            except ValueError:
                raise GraphParseError("malformed edge line", lineno) from None
            if not (0 <= u < n and 0 <= v < n):
                raise GraphParseError("vertex id out of range", lineno)
            if u == v:
                raise GraphParseError("self-loop", lineno)
            key = (u, v) if u < v else (v, u)
            if key in edge_seen:
                raise GraphParseError("duplicate edge", lineno)
            edge_seen.add(key)
            edges.append((u, v))
            continue
        if kind == "plain":
            raise GraphParseError("unexpected content after edge list", lineno)
        if fields[0] != "a":
            raise GraphParseError("expected mapping line starting with 'a'", lineno)
        try:
            values = [int(x) for x in fields[1:]]
        except ValueError:
            raise GraphParseError("malformed mapping line", lineno) from None
        if len(values) < 2 or len(values) != 2 + values[1]:
            raise GraphParseError("malformed mapping line", lineno)
        v, count = values[0], values[1]
        if not 0 <= v < n:
            raise GraphParseError("vertex id out of range", lineno)
        if v in mask_lines_seen:
            raise GraphParseError(f"duplicate mapping line for vertex {v}", lineno)
        mask_lines_seen.add(v)
        bits = 0
        for p in values[2:]:
            if not 0 <= p < MAX_PATTERN_VERTICES:
                raise GraphParseError("pattern vertex id out of range", lineno)
            bits |= 1 << p
        mask[v] = bits

    if n < 0:
        raise GraphParseError("malformed header", last_line + 1)
    if len(edges) < m:
        raise GraphParseError(
            f"unexpected end of input: expected {m} edge lines, got {len(edges)}",
            last_line + 1,
        )
    return Graph(n, edges), mask


def load_graph(path, kind: str = "plain") -> tuple[Graph, Optional[MappingMask]]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_graph(fh.read(), kind)


def bfs_distances(g: Graph, source: int) -> list[int]:
    """Hop distances from ``source``; unreachable vertices get sentinel n."""
    n = g.vertex_count
    if not 0 <= source < n:
        raise ValueError(f"source vertex {source} out of range")
    dist = [n] * n
    dist[source] = 0
    queue = deque([source])
    adjacency = g.adjacency
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for v in adjacency[u]:
            if dist[v] == n:
                dist[v] = du
                queue.append(v)
    return dist


def vertices_within(g: Graph, source: int, radius: int) -> list[int]:
    """Sorted vertices at hop distance <= radius from source (incl. source)."""
    if radius >= g.vertex_count:
        return list(range(g.vertex_count))
    dist = {source: 0}
    queue = deque([source])
    adjacency = g.adjacency
    while queue:
        u = queue.popleft()
        du = dist[u]
        if du == radius:
            continue
        for v in adjacency[u]:
            if v not in dist:
                dist[v] = du + 1
                queue.append(v)
    return sorted(dist)


def all_pairs_distances(f: Graph) -> list[list[int]]:
    """Distance matrix of a pattern graph; sentinel n marks unreachable."""
    if f.vertex_count > MAX_PATTERN_VERTICES:
        raise ValueError(
            f"pattern graph too large: {f.vertex_count} vertices (limit {MAX_PATTERN_VERTICES})"
        )
    return [bfs_distances(f, v) for v in range(f.vertex_count)]


def degree_filter(g: Graph, f: Graph, mask: MappingMask) -> MappingMask:
    """Clear mask bit (x, y) unless deg_G(x) >= deg_F(y).

    Also narrows the mask to the pattern's vertex count, so bits at or above
    n_F are always clear in the result.
    """
    n_f = f.vertex_count
    degrees_f = [f.degree(y) for y in range(n_f)]
    out = []
    for x in range(g.vertex_count):
        deg_x = g.degree(x)
        allowed = 0
        for y in range(n_f):
            if deg_x >= degrees_f[y]:
                allowed |= 1 << y
        out.append(mask[x] & allowed)
    return out


def erdos_renyi(n: int, p: float, seed: int) -> Graph:
    """G(n, p): each unordered pair flipped independently with probability p.

    Iterates all C(n, 2) pairs with a seeded Mersenne Twister, so equal
    (n, p, seed) always produce the identical edge set.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("edge probability must be within [0, 1]")
    rng = random.Random(seed)
    rand = rng.random
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rand() < p:
                edges.append((i, j))
    return Graph(n, edges)
