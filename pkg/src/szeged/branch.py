"""Ending-branch shapes and their exact affine costs in the total tree order.

A branch is the part of a tree hanging below some edge.  Its cost is the
weighted Szeged contribution of its own edges plus the half of the severed
edge that belongs to the branch root, ``deg(root) * m * (n - m)``.  That
cost is affine in the total order ``n`` once the shape is fixed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .graph import RootedTree, weighted_szeged_index


class ShapeError(ValueError):
    pass


@dataclass(frozen=True)
class AffineCost:
    """``slope * n + intercept``."""

    slope: int
    intercept: int

    def __call__(self, n: int) -> int:
        return self.slope * n + self.intercept

    def __add__(self, other: AffineCost) -> AffineCost:
        return AffineCost(self.slope + other.slope, self.intercept + other.intercept)

    def __sub__(self, other: AffineCost) -> AffineCost:
        return AffineCost(self.slope - other.slope, self.intercept - other.intercept)

    def __mul__(self, c: int) -> AffineCost:
        return AffineCost(c * self.slope, c * self.intercept)

    __rmul__ = __mul__

    def __str__(self) -> str:
        if self.intercept == 0:
            return f"{self.slope}n"
        sign = "-" if self.intercept < 0 else "+"
        return f"{self.slope}n{sign}{abs(self.intercept)}"


def product_term(c: int, size: int) -> AffineCost:
    """``c * size * (n - size)`` as an affine function of n."""
    return AffineCost(c * size, -c * size * size)


@dataclass(frozen=True, eq=False)
class BranchShape:
    """Rooted unlabeled tree.  Use :func:`make_branch` to get canonical order."""

    children: tuple[BranchShape, ...] = ()

    @cached_property
    def size(self) -> int:
        return 1 + sum(c.size for c in self.children)

    @cached_property
    def encoding(self) -> str:
        return "(" + "".join(c.encoding for c in self.children) + ")"

    @cached_property
    def key(self) -> str:
        """Canonical encoding; equal iff the shapes are isomorphic."""
        return canonicalize(self).encoding

    @property
    def child_count(self) -> int:
        return len(self.children)

    @property
    def children_sizes(self) -> tuple[int, ...]:
        return tuple(sorted(c.size for c in self.children))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BranchShape) and self.encoding == other.encoding

    def __hash__(self) -> int:
        return hash(self.encoding)

    def __repr__(self) -> str:
        return f"BranchShape({self.encoding!r})"


LEAF = BranchShape()


def _order_key(shape: BranchShape) -> tuple[int, str]:
    return (-shape.size, shape.encoding)


def make_branch(children: Iterable[BranchShape] = ()) -> BranchShape:
    """Branch with the given (already canonical) children in canonical order."""
    return BranchShape(tuple(sorted(children, key=_order_key)))


def canonicalize(shape: BranchShape) -> BranchShape:
    return make_branch(canonicalize(c) for c in shape.children)


def parse_branch(text: str) -> BranchShape:
    """Parse ``()`` / ``(c1 c2 ...)`` notation; the result is canonical."""
    s = "".join(text.split())
    if not s:
        raise ShapeError("empty branch text")
    stack: list[list[BranchShape]] = []
    result = None
    for i, ch in enumerate(s):
        if result is not None:
            raise ShapeError(f"trailing input at position {i}")
        if ch == "(":
            stack.append([])
        elif ch == ")":
            if not stack:
                raise ShapeError(f"unbalanced ')' at position {i}")
            node = make_branch(stack.pop())
            if stack:
                stack[-1].append(node)
            else:
                result = node
        else:
            raise ShapeError(f"unexpected character {ch!r}")
    if stack or result is None:
        raise ShapeError("unbalanced '('")
    return result


def print_branch(shape: BranchShape) -> str:
    return shape.encoding


def chain(size: int) -> BranchShape:
    """Path branch rooted at one end."""
    shape = LEAF
    for _ in range(size - 1):
        shape = BranchShape((shape,))
    return shape


def branch_cost_affine(shape: BranchShape) -> AffineCost:
    """Affine cost of ``shape`` hanging inside a tree of total order n.

    The branch root has degree ``child_count + 1`` because the severed edge
    toward the rest of the tree still counts.
    """
    return _cost(shape.encoding, shape)


_COST_CACHE: dict[str, AffineCost] = {}


def _cost(enc: str, shape: BranchShape) -> AffineCost:
    hit = _COST_CACHE.get(enc)
    if hit is not None:
        return hit
    d = shape.child_count + 1
    total = product_term(d, shape.size)
    for child in shape.children:
        total = total + product_term(d, child.size) + _cost(child.encoding, child)
    _COST_CACHE[enc] = total
    return total


def branch_cost(shape: BranchShape, n: int) -> int:
    """Cost at total order ``n``; only defined for ``n >= size + 1``."""
    if n < shape.size + 1:
        raise ShapeError(f"branch of size {shape.size} needs n >= {shape.size + 1}, got {n}")
    return branch_cost_affine(shape)(n)


def is_regular(shape: BranchShape) -> bool:
    """All root children have the same order (vacuous for a leaf)."""
    return len({c.size for c in shape.children}) <= 1


def is_level_regular(shape: BranchShape) -> bool:
    """All children identical at every level."""
    if not shape.children:
        return True
    first = shape.children[0]
    return all(c == first for c in shape.children) and is_level_regular(first)


def simplified_degree_sequence(shape: BranchShape) -> list[int]:
    """Child counts along any root-to-leaf path of a level-regular branch."""
    if not is_level_regular(canonicalize(shape)):
        raise ShapeError(f"{shape.encoding} is not level-regular")
    seq = []
    while shape.children:
        seq.append(shape.child_count)
        shape = shape.children[0]
    return seq


def regular_branch(sequence: Iterable[int]) -> BranchShape:
    """Level-regular branch with the given simplified degree sequence."""
    shape = LEAF
    for k in reversed(list(sequence)):
        shape = BranchShape((shape,) * k)
    return shape


def shape_of_subtree(tree: RootedTree, v: int) -> BranchShape:
    memo: dict[int, BranchShape] = {}
    for u in reversed(_preorder_from(tree, v)):
        memo[u] = make_branch(memo[c] for c in tree.children[u])
    return memo[v]


def _preorder_from(tree: RootedTree, v: int) -> list[int]:
    out, stack = [], [v]
    while stack:
        u = stack.pop()
        out.append(u)
        stack.extend(tree.children[u])
    return out


def tree_from_shape(shape: BranchShape) -> RootedTree:
    """Materialize a shape as a rooted tree numbered in preorder."""
    parent: list[int | None] = [None]
    stack = [(shape, 0)]
    while stack:
        node, idx = stack.pop()
        for child in reversed(node.children):
            parent.append(idx)
            stack.append((child, len(parent) - 1))
    return RootedTree(tuple(parent))


def shape_to_tree(shape: BranchShape, host_path_length: int) -> tuple[RootedTree, int]:
    """Hang ``shape`` off the end of a path of ``host_path_length`` vertices.

    The path occupies vertices ``0..h-1`` and the tree is rooted at vertex 0;
    the branch root is vertex ``h``.  Returns ``(tree, branch_root)``.
    """
    h = host_path_length
    if h < 1:
        raise ShapeError("host path needs at least one vertex")
    parent: list[int | None] = [None] + list(range(h - 1))
    stack = [(shape, h - 1)]
    while stack:
        node, p = stack.pop()
        parent.append(p)
        idx = len(parent) - 1
        for child in node.children:
            stack.append((child, idx))
    return RootedTree(tuple(parent)), h


def embedded_branch_cost(tree: RootedTree, v: int) -> int:
    """Direct edge sum for the branch below ``v``, half-edge included."""
    n = tree.vertex_count
    total = tree.degree(v) * tree.subtree_size[v] * (n - tree.subtree_size[v])
    for u in _preorder_from(tree, v):
        for c in tree.children[u]:
            s = tree.subtree_size[c]
            total += (tree.degree(u) + tree.degree(c)) * s * (n - s)
    return total


@dataclass(frozen=True)
class HalfEdgeReport:
    branch_term: int
    attachment_term: int
    outside_term: int
    total: int
    affine_branch_term: int

    @property
    def holds(self) -> bool:
        return (
            self.branch_term + self.attachment_term + self.outside_term == self.total
            and self.branch_term == self.affine_branch_term
        )


def half_edge_decomposition(
    tree: RootedTree, u: int, v: int, total: int | None = None
) -> HalfEdgeReport:
    """Split wSz(tree) across the edge ``u``-``v`` (``v`` on the far side from the root).

    Three summands: the branch below ``v`` with its half-edge, the other half
    ``deg(u) * n_v * (n - n_v)``, and every edge outside the branch.  The
    whole-tree value is recomputed by double BFS unless ``total`` is given.
    """
    if tree.parent[v] != u:
        if tree.parent[u] == v:
            u, v = v, u
        else:
            raise ShapeError(f"({u}, {v}) is not a tree edge")
    n = tree.vertex_count
    inside = set(_preorder_from(tree, v))
    branch = embedded_branch_cost(tree, v)
    size = tree.subtree_size[v]
    attach = tree.degree(u) * size * (n - size)
    outside = 0
    for p, c in tree.edges():
        if c in inside:
            continue
        s = tree.subtree_size[c]
        outside += (tree.degree(p) + tree.degree(c)) * s * (n - s)
    return HalfEdgeReport(
        branch_term=branch,
        attachment_term=attach,
        outside_term=outside,
        total=weighted_szeged_index(tree.to_graph(), method="bfs") if total is None else total,
        affine_branch_term=branch_cost(shape_of_subtree(tree, v), n),
    )


def centroids(tree: RootedTree) -> list[int]:
    """One or two vertices whose removal leaves components of size <= n/2."""
    n = tree.vertex_count
    out = []
    for v in range(n):
        biggest = n - tree.subtree_size[v]
        for c in tree.children[v]:
            biggest = max(biggest, tree.subtree_size[c])
        if 2 * biggest <= n:
            out.append(v)
    return out


def free_tree_key(tree: RootedTree) -> str:
    """Isomorphism invariant of the underlying free tree.

    Rooted canonical encoding at the centroid; with two centroids the
    lexicographically smaller encoding is taken.
    """
    graph = tree.to_graph()
    keys = []
    for c in centroids(tree):
        keys.append(shape_of_subtree(RootedTree.from_graph(graph, c), c).encoding)
    return min(keys)
