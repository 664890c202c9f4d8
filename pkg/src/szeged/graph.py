"""Graphs, rooted trees and direct Szeged / weighted Szeged index computation."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO


class GraphError(ValueError):
    """Raised for invalid graph input (parse or validation failure)."""


@dataclass(frozen=True)
class EdgeSplit:
    n_u: int
    n_v: int


@dataclass(frozen=True)
class Graph:
    """Simple connected undirected graph on vertices ``0..vertex_count-1``."""

    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        n = self.vertex_count
        if n < 1:
            raise GraphError("vertex count must be positive")
        adj: list[list[int]] = [[] for _ in range(n)]
        seen: set[tuple[int, int]] = set()
        normalized = []
        for u, v in self.edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) has a vertex outside 0..{n - 1}")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphError(f"duplicate edge {key}")
            seen.add(key)
            normalized.append((u, v))
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(self, "edges", tuple(normalized))
        object.__setattr__(self, "adjacency", tuple(tuple(a) for a in adj))
        if len(_bfs(self.adjacency, 0)) != n:
            raise GraphError("graph is disconnected")

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @property
    def is_tree(self) -> bool:
        return len(self.edges) == self.vertex_count - 1

    def relabel(self, perm: Sequence[int]) -> Graph:
        """Return the graph with vertex ``v`` renamed to ``perm[v]``."""
        return Graph(self.vertex_count, tuple((perm[u], perm[v]) for u, v in self.edges))


@dataclass(frozen=True)
class RootedTree:
    """A tree with a distinguished root, parent links and subtree sizes."""

    parent: tuple[int | None, ...]
    children: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    subtree_size: tuple[int, ...] = field(init=False, repr=False, compare=False)
    root: int = field(init=False)

    def __post_init__(self) -> None:
        n = len(self.parent)
        if n < 1:
            raise GraphError("tree must have at least one vertex")
        roots = [v for v, p in enumerate(self.parent) if p is None]
        if len(roots) != 1:
            raise GraphError(f"expected exactly one root, found {len(roots)}")
        kids: list[list[int]] = [[] for _ in range(n)]
        for v, p in enumerate(self.parent):
            if p is not None:
                if not 0 <= p < n or p == v:
                    raise GraphError(f"bad parent {p} for vertex {v}")
                kids[p].append(v)
        order = _bfs(kids, roots[0])
        if len(order) != n:
            raise GraphError("parent links contain a cycle")
        sizes = [1] * n
        for v in reversed(order):
            p = self.parent[v]
            if p is not None:
                sizes[p] += sizes[v]
        object.__setattr__(self, "root", roots[0])
        object.__setattr__(self, "children", tuple(tuple(k) for k in kids))
        object.__setattr__(self, "subtree_size", tuple(sizes))

    @property
    def vertex_count(self) -> int:
        return len(self.parent)

    def degree(self, v: int) -> int:
        return len(self.children[v]) + (self.parent[v] is not None)

    def edges(self) -> list[tuple[int, int]]:
        """Edges as ``(parent, child)`` pairs in vertex order."""
        return [(p, v) for v, p in enumerate(self.parent) if p is not None]

    def to_graph(self) -> Graph:
        return Graph(self.vertex_count, tuple(self.edges()))

    def preorder(self) -> list[int]:
        out, stack = [], [self.root]
        while stack:
            v = stack.pop()
            out.append(v)
            stack.extend(reversed(self.children[v]))
        return out

    @classmethod
    def from_graph(cls, graph: Graph, root: int = 0) -> RootedTree:
        if not graph.is_tree:
            raise GraphError("graph is not a tree")
        parent: list[int | None] = [None] * graph.vertex_count
        seen = [False] * graph.vertex_count
        seen[root] = True
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in graph.adjacency[u]:
                if not seen[w]:
                    seen[w] = True
                    parent[w] = u
                    queue.append(w)
        return cls(tuple(parent))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], root: int = 0) -> RootedTree:
        return cls.from_graph(Graph(n, tuple(edges)), root)


def _bfs(adjacency: Sequence[Sequence[int]], source: int) -> list[int]:
    seen = {source}
    order = [source]
    i = 0
    while i < len(order):
        for w in adjacency[order[i]]:
            if w not in seen:
                seen.add(w)
                order.append(w)
        i += 1
    return order


def distances_from(graph: Graph, source: int) -> list[int]:
    dist = [-1] * graph.vertex_count
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in graph.adjacency[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def parse_edge_list(stream: TextIO | str) -> Graph:
    """Read a whitespace-separated edge list.

    ``#`` starts a comment.  A header line ``n <count>`` fixes the vertex
    count; otherwise it is one more than the largest label.
    """
    text = stream if isinstance(stream, str) else stream.read()
    count = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "n":
            if len(tokens) != 2 or not tokens[1].isdigit() or count is not None:
                raise GraphError(f"line {lineno}: malformed header {raw!r}")
            count = int(tokens[1])
            continue
        if len(tokens) != 2:
            raise GraphError(f"line {lineno}: expected two vertex labels, got {raw!r}")
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise GraphError(f"line {lineno}: non-integer label in {raw!r}") from None
        if u < 0 or v < 0:
            raise GraphError(f"line {lineno}: negative vertex label")
        edges.append((u, v))
    if count is None:
        if not edges:
            raise GraphError("empty edge list without an 'n' header")
        count = 1 + max(max(e) for e in edges)
    return Graph(count, tuple(edges))


def format_edge_list(graph: Graph) -> str:
    lines = [f"n {graph.vertex_count}"]
    lines += [f"{u} {v}" for u, v in graph.edges]
    return "\n".join(lines) + "\n"


def edge_split(graph: Graph, u: int, v: int) -> EdgeSplit:
    """Count vertices strictly closer to ``u`` and strictly closer to ``v``."""
    if v not in graph.adjacency[u]:
        raise GraphError(f"({u}, {v}) is not an edge")
    du = distances_from(graph, u)
    dv = distances_from(graph, v)
    n_u = sum(a < b for a, b in zip(du, dv))
    n_v = sum(b < a for a, b in zip(du, dv))
    return EdgeSplit(n_u, n_v)


def tree_edge_split(tree: RootedTree, u: int, v: int) -> EdgeSplit:
    """Edge split for a tree edge, read off the subtree sizes."""
    n = tree.vertex_count
    if tree.parent[v] == u:
        return EdgeSplit(n - tree.subtree_size[v], tree.subtree_size[v])
    if tree.parent[u] == v:
        return EdgeSplit(tree.subtree_size[u], n - tree.subtree_size[u])
    raise GraphError(f"({u}, {v}) is not an edge")


def _index(graph: Graph, weighted: bool, method: str) -> int:
    if method not in ("auto", "bfs", "tree"):
        raise ValueError(f"unknown method {method!r}")
    if method == "tree" or (method == "auto" and graph.is_tree):
        tree = RootedTree.from_graph(graph)
        return _tree_index(tree, weighted)
    total = 0
    for u, v in graph.edges:
        s = edge_split(graph, u, v)
        w = graph.degree(u) + graph.degree(v) if weighted else 1
        total += w * s.n_u * s.n_v
    return total


def _tree_index(tree: RootedTree, weighted: bool) -> int:
    n = tree.vertex_count
    total = 0
    for p, v in tree.edges():
        size = tree.subtree_size[v]
        w = tree.degree(p) + tree.degree(v) if weighted else 1
        total += w * size * (n - size)
    return total


def szeged_index(graph: Graph | RootedTree, method: str = "auto") -> int:
    """Sum over edges of ``n_u * n_v``."""
    if isinstance(graph, RootedTree):
        return _tree_index(graph, weighted=False)
    return _index(graph, False, method)


def weighted_szeged_index(graph: Graph | RootedTree, method: str = "auto") -> int:
    """Sum over edges of ``(deg(u) + deg(v)) * n_u * n_v``.

    ``method`` selects the per-edge double BFS (``"bfs"``), the subtree-size
    pass (``"tree"``, trees only), or picks by shape (``"auto"``).
    """
    if isinstance(graph, RootedTree):
        return _tree_index(graph, weighted=True)
    return _index(graph, True, method)


DEFAULT_SIZE_LIMIT = 2_000_000


def complete_kary_tree(k: int, levels: int, size_limit: int = DEFAULT_SIZE_LIMIT) -> RootedTree:
    """Complete ``k``-ary tree whose leaves all sit at depth ``levels``."""
    if k < 2 or levels < 1:
        raise ValueError("need k >= 2 and levels >= 1")
    n = (k ** (levels + 1) - 1) // (k - 1)
    if n > size_limit:
        raise ValueError(f"complete {k}-ary tree with {levels} levels has {n} vertices (limit {size_limit})")
    # heap numbering: children of v are k*v+1 .. k*v+k
    parent: list[int | None] = [None] + [(v - 1) // k for v in range(1, n)]
    return RootedTree(tuple(parent))


def kary_estimate(n: float, k: int) -> float:
    """Rough weighted Szeged size of a complete k-ary tree: n^2 (2k+2) log_k n."""
    if n < 2 or k < 2:
        raise ValueError("need n >= 2 and k >= 2")
    return n * n * (2 * k + 2) * math.log(n) / math.log(k)


def path_graph(n: int) -> Graph:
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)))


def cycle_graph(n: int) -> Graph:
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def _kary_less(a: int, b: int) -> bool:
    # (2a+2)/ln a < (2b+2)/ln b  <=>  b^(2a+2) < a^(2b+2), exact in integers
    return b ** (2 * a + 2) < a ** (2 * b + 2)


def best_kary_degree(ks: Iterable[int]) -> int:
    """k minimising (2k+2)/ln k, the k-dependent factor of :func:`kary_estimate`.

    Compared exactly through integer powers, so no rounding is involved.
    """
    ks = list(ks)
    if not ks or min(ks) < 2:
        raise ValueError("need a non-empty range of k >= 2")
    best = ks[0]
    for k in ks[1:]:
        if _kary_less(k, best):
            best = k
    return best
