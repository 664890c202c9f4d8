"""Exhaustive enumeration of small trees and brute-force minima.

Free trees are generated from their centroid: a single centroid with
children all of order below n/2, or two centroids joined by an edge with
both halves of order n/2.  Each isomorphism class comes out once because
the children multisets are emitted in canonical (non-increasing) order.
"""

from __future__ import annotations

import random
from functools import lru_cache
from typing import Iterator

from .branch import BranchShape, branch_cost_affine, make_branch, tree_from_shape
from .graph import RootedTree, weighted_szeged_index

FREE_TREE_CAP = 18
BRANCH_SHAPE_CAP = 14


class CapExceeded(ValueError):
    pass


@lru_cache(maxsize=None)
def _shapes_of_size(m: int) -> tuple[BranchShape, ...]:
    if m == 1:
        return (BranchShape(),)
    return tuple(make_branch(kids) for kids in _child_multisets(m - 1, m - 1))


def _child_multisets(total: int, max_part: int) -> Iterator[tuple[BranchShape, ...]]:
    """Multisets of rooted shapes with sizes summing to ``total``, each size <= max_part."""

    # items are ordered by (size, index); emit non-increasing sequences
    def rec(rest: int, size: int, index: int) -> Iterator[tuple[BranchShape, ...]]:
        if rest == 0:
            yield ()
            return
        for s in range(min(size, rest), 0, -1):
            pool = _shapes_of_size(s)
            top = index if s == size else len(pool) - 1
            for i in range(top, -1, -1):
                for tail in rec(rest - s, s, i):
                    yield (pool[i],) + tail

    yield from rec(total, max_part, len(_shapes_of_size(max_part)) - 1 if max_part else 0)


def enumerate_branch_shapes(m: int, cap: int = BRANCH_SHAPE_CAP) -> Iterator[BranchShape]:
    """Every rooted unlabeled tree on m vertices, once each, in canonical form."""
    if m < 1:
        raise ValueError("m must be positive")
    if m > cap:
        raise CapExceeded(f"m={m} exceeds the shape enumeration cap {cap}")
    yield from _shapes_of_size(m)


def enumerate_free_trees(n: int, cap: int = FREE_TREE_CAP) -> Iterator[RootedTree]:
    """Every free tree on n vertices, once per isomorphism class, rooted at a centroid."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > cap:
        raise CapExceeded(f"n={n} exceeds the free tree enumeration cap {cap}")
    if n == 1:
        yield RootedTree((None,))
        return
    for kids in _child_multisets(n - 1, (n - 1) // 2):
        yield tree_from_shape(make_branch(kids))
    if n % 2 == 0:
        pool = _shapes_of_size(n // 2)
        for i in range(len(pool)):
            for j in range(i + 1):
                yield tree_from_shape(make_branch(pool[i].children + (pool[j],)))


def rooted_tree_count(m: int) -> int:
    """Number of rooted unlabeled trees on m vertices (Euler transform recurrence)."""
    a = [0, 1]
    for k in range(1, m):
        total = 0
        for j in range(1, k + 1):
            d_sum = sum(d * a[d] for d in range(1, j + 1) if j % d == 0)
            total += d_sum * a[k - j + 1]
        a.append(total // k)
    return a[m]


def free_tree_count(n: int) -> int:
    """Number of free trees on n vertices via Otter's dissimilarity formula."""
    if n <= 2:
        return 1
    r = [rooted_tree_count(i) for i in range(n + 1)]
    total = r[n] - sum(r[i] * r[n - i] for i in range(1, n // 2 + 1))
    if n % 2 == 0:
        total += r[n // 2] * (r[n // 2] + 1) // 2
    return total


def brute_force_min_tree(n: int, cap: int = FREE_TREE_CAP) -> tuple[int, list[RootedTree]]:
    """Minimum weighted Szeged index over all free trees on n vertices, with every minimiser."""
    best = None
    winners: list[RootedTree] = []
    for tree in enumerate_free_trees(n, cap):
        value = weighted_szeged_index(tree)
        if best is None or value < best:
            best, winners = value, [tree]
        elif value == best:
            winners.append(tree)
    return best, winners


def brute_force_min_branch(m: int, n: int, cap: int = BRANCH_SHAPE_CAP) -> tuple[int, list[BranchShape]]:
    """Cheapest rooted shape of size m at total order n by trying them all."""
    if n < m + 1:
        raise ValueError(f"branch of size {m} needs n >= {m + 1}")
    best = None
    winners: list[BranchShape] = []
    for shape in enumerate_branch_shapes(m, cap):
        value = branch_cost_affine(shape)(n)
        if best is None or value < best:
            best, winners = value, [shape]
        elif value == best:
            winners.append(shape)
    return best, winners


def random_tree(n: int, seed: int | None = None) -> RootedTree:
    """Uniform random labeled tree on n vertices from a random Pruefer sequence, rooted at 0."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return RootedTree((None,))
    rng = random.Random(seed)
    if n == 2:
        return RootedTree.from_edges(2, [(0, 1)])
    code = [rng.randrange(n) for _ in range(n - 2)]
    return RootedTree.from_edges(n, _pruefer_edges(code, n))


def _pruefer_edges(code: list[int], n: int) -> list[tuple[int, int]]:
    degree = [1] * n
    for v in code:
        degree[v] += 1
    edges = []
    ptr = 0
    while degree[ptr] != 1:
        ptr += 1
    leaf = ptr
    for v in code:
        edges.append((leaf, v))
        degree[v] -= 1
        if degree[v] == 1 and v < ptr:
            leaf = v
        else:
            ptr += 1
            while degree[ptr] != 1:
                ptr += 1
            leaf = ptr
    edges.append((leaf, n - 1))
    return edges
