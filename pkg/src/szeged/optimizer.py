"""Minimal ending branches and minimum weighted Szeged index trees.

For a fixed total order ``n`` the cheapest branch on ``m`` vertices is

    B(m) = min over partitions (n_1..n_k) of m-1 of
           (k+1) * (m(n-m) + sum n_i(n-n_i)) + sum B(n_i),      B(1) = n-1

and the cheapest tree is the same without the half-edge, with root degree k:

    W(n) = min over partitions of n-1 of  sum k*n_i(n-n_i) + B(n_i).

Both minimise, for each child count k, a sum of per-part scores
``g_c(x) = c*x(n-x) + B(x)`` with ``c = k+1`` (branch) or ``c = k`` (tree).
:func:`solve` keeps, for every multiplier c, the table ``F[c][j][s]`` of the
cheapest way to write s as j parts, and fills it one s at a time so that
B(s) is known before any part of size s is needed.

Child counts are searched up to an internal cap that doubles until a lower
bound proves that no larger child count can reach the optimum, so the
result is exact for an unrestricted child count.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Sequence

import numpy as np

from .branch import (
    AffineCost,
    BranchShape,
    ShapeError,
    branch_cost_affine,
    free_tree_key,
    make_branch,
    tree_from_shape,
)
from .graph import RootedTree

INITIAL_CAP = 8
_INT64_SAFE = 1 << 59


class DomainError(ValueError):
    pass


Structure = tuple[int, ...]


@dataclass
class _Solution:
    n: int
    max_size: int
    mult_cap: int
    costs: list[int]
    table: np.ndarray
    scores: np.ndarray
    tree_cost: int | None = None


def _magnitude_bound(n: int, size: int) -> int:
    # crude bound on every finite table entry: (s+2)^4 (n+2) * 4
    return 4 * (size + 2) ** 4 * (abs(n) + 2)


def solve(
    n: int,
    max_size: int,
    tree: bool = False,
    max_children: int | None = None,
    initial_cap: int = INITIAL_CAP,
) -> _Solution:
    """Fill the DP for total order ``n`` and branch sizes ``1..max_size``.

    With ``tree=True`` the tree minimum W(n) is computed too (needs
    ``max_size == n - 1``).  ``max_children`` caps the child count for speed
    experiments; by default the search is exhaustive.  ``initial_cap`` only
    affects speed (scans pass the previous cap forward).
    """
    if max_size < 1:
        raise DomainError("max_size must be at least 1")
    if tree and max_size != n - 1:
        raise DomainError("tree solve needs max_size == n - 1")
    if max_children is not None:
        return _solve(n, max_size, max_children + 1, tree, certify=False, child_cap=max_children)
    # multiplier c = k+1 for branches with k <= max_size-1, c = k for trees with k <= n-1
    full = max_size
    cap = max(1, min(initial_cap, full))
    while True:
        sol = _solve(n, max_size, cap, tree, certify=cap < full, child_cap=None)
        if sol is not None:
            return sol
        cap = min(cap + max(4, cap // 2), full)


def _solve(
    n: int, S: int, C: int, tree: bool, certify: bool, child_cap: int | None
) -> _Solution | None:
    bound = _magnitude_bound(n, max(S, C))
    if bound < _INT64_SAFE:
        dtype: type = np.int64
        inf = 1 << 61
    else:
        dtype = object
        inf = 16 * bound
    F = np.full((C + 1, C + 1, S + 1), inf, dtype=dtype)
    F[:, 0, 0] = 0
    g = np.full((C + 1, S + 1), inf, dtype=dtype)
    P = np.full(S + 1, inf, dtype=dtype)
    P[0] = 0
    gP = np.full(S + 1, inf, dtype=dtype)
    mult = np.arange(C + 1, dtype=dtype)
    branch_c = np.arange(2, C + 1)
    if child_cap is not None:
        branch_c = branch_c[branch_c - 1 <= child_cap]
    costs = [0] * (S + 1)
    for s in range(1, S + 1):
        pair = s * (n - s)
        if s == 1:
            b = n - 1
        else:
            cand = branch_c * pair + F[branch_c, branch_c - 1, s - 1]
            b = int(cand.min())
            if certify and C < s and (C + 1) * pair + int(P[s - 1]) <= b:
                return None
        costs[s] = b
        g[:, s] = mult * pair + b
        gP[s] = (C + 1) * pair + b
        # F[:, j, s] = min_x F[:, j-1, s-x] + g[:, x]
        window = F[:, :C, s - 1 :: -1][:, :, :s] + g[:, None, 1 : s + 1]
        F[:, 1:, s] = np.minimum(window.min(axis=2), inf)
        P[s] = min(int((P[s - 1 :: -1][:s] + gP[1 : s + 1]).min()), inf)
    sol = _Solution(n, S, C, costs, F, g)
    if tree:
        top = C if child_cap is None else min(C, child_cap)
        cs = np.arange(1, top + 1)
        sol.tree_cost = int(F[cs, cs, S].min())
        if certify and C < S and int(P[S]) <= sol.tree_cost:
            return None
    return sol


def _partitions_hitting(
    sol: _Solution, c: int, parts: int, total: int, target: int
) -> Iterator[Structure]:
    """All non-increasing part lists (j parts, sum ``total``) scoring exactly ``target``."""
    F = sol.table[c].tolist()
    g = sol.scores[c].tolist()

    def rec(j: int, s: int, cap: int, t: int) -> Iterator[tuple[int, ...]]:
        if j == 0:
            if s == 0 and t == 0:
                yield ()
            return
        lo = -(-s // j)
        for x in range(min(cap, s - j + 1), lo - 1, -1):
            rest = t - g[x]
            if F[j - 1][s - x] <= rest:
                for tail in rec(j - 1, s - x, x, rest):
                    yield (x,) + tail

    for combo in rec(parts, total, total, target):
        yield tuple(sorted(combo))


def _branch_structures(sol: _Solution, m: int) -> list[Structure]:
    if m == 1:
        return [()]
    n = sol.n
    out = set()
    pair = m * (n - m)
    for c in range(2, min(sol.mult_cap, m) + 1):
        f = int(sol.table[c, c - 1, m - 1])
        if c * pair + f == sol.costs[m]:
            out.update(_partitions_hitting(sol, c, c - 1, m - 1, f))
    return sorted(out)


def _tree_structures(sol: _Solution) -> list[Structure]:
    S = sol.max_size
    out = set()
    for c in range(1, min(sol.mult_cap, S) + 1):
        f = int(sol.table[c, c, S])
        if f == sol.tree_cost:
            out.update(_partitions_hitting(sol, c, c, S, f))
    return sorted(out)


@dataclass
class DpTable:
    """Minimal branches of every size ``1..max_size`` inside a tree of order n."""

    n: int
    max_size: int
    costs: list[int]
    structures: list[list[Structure]]
    _shapes: dict[int, list[BranchShape]] = field(default_factory=dict, repr=False)

    def cost(self, m: int) -> int:
        self._check(m)
        return self.costs[m]

    def children_sizes(self, m: int) -> list[Structure]:
        self._check(m)
        return self.structures[m]

    def _check(self, m: int) -> None:
        if not 1 <= m <= self.max_size:
            raise DomainError(f"size {m} outside 1..{self.max_size}")

    def shape(self, m: int) -> BranchShape:
        """Canonical representative: first structure, first shape of each child."""
        self._check(m)
        return make_branch(self.shape(x) for x in self.structures[m][0])

    def shapes(self, m: int, limit: int | None = None) -> list[BranchShape]:
        """All co-optimal shapes of size m (at most ``limit``)."""
        self._check(m)
        if m not in self._shapes:
            found: dict[str, BranchShape] = {}
            for struct in self.structures[m]:
                for shape in self.assemble(struct, limit):
                    found.setdefault(shape.encoding, shape)
                    if limit is not None and len(found) >= limit:
                        break
            self._shapes[m] = sorted(found.values(), key=lambda s: s.encoding)
        out = self._shapes[m]
        return out if limit is None else out[:limit]

    def assemble(self, struct: Structure, limit: int | None = None) -> Iterator[BranchShape]:
        """Every shape whose children are minimal branches of the given sizes."""
        groups = [(size, len(list(grp))) for size, grp in itertools.groupby(sorted(struct))]
        options = [
            list(itertools.combinations_with_replacement(self.shapes(size, limit), count))
            for size, count in groups
        ]
        for choice in itertools.product(*options):
            yield make_branch(itertools.chain.from_iterable(choice))

    def resolve(self, sizes: Sequence[int] | str) -> BranchShape:
        """Shape from a children-size shorthand such as ``"16,16,16,18"``."""
        if isinstance(sizes, str):
            sizes = [int(tok) for tok in sizes.replace(",", " ").split()]
        return make_branch(self.shape(x) for x in sizes)

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "max_size": self.max_size,
            "costs": [str(c) for c in self.costs[1:]],
            "structures": [[list(s) for s in row] for row in self.structures[1:]],
        }

    @classmethod
    def from_dict(cls, data: dict) -> DpTable:
        costs = [0] + [int(c) for c in data["costs"]]
        structures = [[]] + [[tuple(s) for s in row] for row in data["structures"]]
        return cls(data["n"], data["max_size"], costs, structures)


def _table_from(sol: _Solution, max_size: int) -> DpTable:
    structures: list[list[Structure]] = [[]]
    for m in range(1, max_size + 1):
        structures.append(_branch_structures(sol, m))
    return DpTable(sol.n, max_size, sol.costs[: max_size + 1], structures)


def branch_costs(n: int, max_size: int, initial_cap: int = INITIAL_CAP) -> tuple[list[int], int]:
    """Costs ``B(1..max_size)`` at order n (index 0 unused) and the cap used.

    ``max_size`` may equal n; the half-edge term then vanishes.
    """
    if not 1 <= max_size <= n:
        raise DomainError(f"need 1 <= max_size <= {n}, got {max_size}")
    sol = solve(n, max_size, initial_cap=initial_cap)
    return sol.costs, sol.mult_cap


def minimal_branches(
    n: int, max_size: int, max_children: int | None = None, allow_full: bool = False
) -> DpTable:
    """Fixed-n table of minimal ending branches up to ``max_size``.

    ``allow_full`` admits ``max_size == n`` (the half-edge term then
    vanishes); used only by the threshold scan.
    """
    top = n if allow_full else n - 1
    if not 1 <= max_size <= top:
        raise DomainError(f"need 1 <= max_size <= {top} for n = {n}, got {max_size}")
    return _table_from(solve(n, max_size, max_children=max_children), max_size)


@dataclass
class TreeResult:
    """Optimal trees on n vertices.

    ``structures`` holds one root structure per optimal tree (up to
    isomorphism), rooted at a vertex of maximum degree and, among those, the
    one whose largest child is smallest.  ``rootings`` lists every co-optimal
    root structure the DP admits, i.e. every vertex of every optimal tree.
    """

    n: int
    cost: int
    structures: list[Structure]
    rootings: list[Structure]
    table: DpTable

    @property
    def root_degrees(self) -> list[int]:
        return [len(s) for s in self.structures]

    def tree(self, structure: Structure | None = None) -> RootedTree:
        """Materialize the optimal tree with the given (default first) root structure."""
        struct = self.structures[0] if structure is None else structure
        return tree_with_root(self.table.shape(x) for x in struct)

    def trees(self, limit: int | None = 64) -> list[RootedTree]:
        """Distinct optimal trees rooted at their representative root."""
        out: dict[str, RootedTree] = {}
        for struct in self.structures:
            for shape in self.table.assemble(struct, limit):
                tree = tree_from_shape(shape)
                key = free_tree_key(tree)
                if key in out or _rank(struct) != _best_rank(tree):
                    continue
                out[key] = tree
                if limit is not None and len(out) >= limit:
                    return list(out.values())
        return list(out.values())


def _rank(struct: Structure) -> tuple:
    return (-len(struct), max(struct, default=0), struct)


def _best_rank(tree: RootedTree) -> tuple:
    n = tree.vertex_count
    best = None
    for v in range(n):
        parts = [tree.subtree_size[c] for c in tree.children[v]]
        if tree.parent[v] is not None:
            parts.append(n - tree.subtree_size[v])
        r = _rank(tuple(sorted(parts)))
        if best is None or r < best:
            best = r
    return best


def tree_with_root(children) -> RootedTree:
    return tree_from_shape(make_branch(children))


def representative_structures(
    rootings: Sequence[Structure], table: DpTable, limit: int | None = None
) -> list[Structure]:
    """Collapse co-optimal rootings to one preferred rooting per tree."""
    best: dict[str, tuple] = {}
    for struct in rootings:
        for shape in table.assemble(struct, limit):
            key = free_tree_key(tree_from_shape(shape))
            rank = _rank(struct)
            if key not in best or rank < best[key]:
                best[key] = rank
    return sorted({r[2] for r in best.values()})


def minimal_tree(n: int, max_children: int | None = None, limit: int | None = 256) -> TreeResult:
    """Minimum weighted Szeged index over trees on n vertices."""
    if n < 2:
        raise DomainError("need n >= 2")
    sol = solve(n, n - 1, tree=True, max_children=max_children)
    table = _table_from(sol, n - 1)
    rootings = _tree_structures(sol)
    return TreeResult(n, sol.tree_cost, representative_structures(rootings, table, limit), rootings, table)


def partition_min_dp(
    s: int, k: int, score: Callable[[int], int]
) -> tuple[int, tuple[int, ...]]:
    """Cheapest way to write ``s`` as ``k`` positive parts under an additive score.

    Returns the minimum and the lexicographically smallest sorted minimiser.
    """
    if not 1 <= k <= s:
        raise DomainError(f"need 1 <= k <= s, got k={k}, s={s}")
    vals = [score(x) for x in range(s + 1)]
    # best[j][t][cap]: min over j non-increasing parts <= cap summing to t
    best: dict[tuple[int, int, int], tuple[int, tuple[int, ...]] | None] = {}

    def rec(j: int, t: int, cap: int):
        if j == 0:
            return (0, ()) if t == 0 else None
        key = (j, t, cap)
        if key in best:
            return best[key]
        result = None
        for x in range(min(cap, t - j + 1), -(-t // j) - 1, -1):
            sub = rec(j - 1, t - x, x)
            if sub is None:
                continue
            cand = (vals[x] + sub[0], tuple(sorted(sub[1] + (x,))))
            if result is None or cand < result:
                result = cand
        best[key] = result
        return result

    return rec(k, s, s)


def structure_cost(structure: Structure, table: DpTable, n: int, tree: bool = False) -> int:
    """Cost of a root with children of the given sizes, each a minimal branch."""
    k = len(structure)
    c = k if tree else k + 1
    m = 1 + sum(structure)
    total = 0 if tree else c * m * (n - m)
    for x in structure:
        total += c * x * (n - x) + table.cost(x)
    return total


def asymptotic_n(max_size: int) -> int:
    """An order large enough that comparing costs there equals comparing
    (slope, intercept) lexicographically for every branch up to ``max_size``."""
    return 16 * (max_size + 2) ** 4 + 16


def asymptotic_branches(max_size: int) -> DpTable:
    """Branches optimal for all sufficiently large n.

    Every intercept met in the DP is below ``5 (m+2)^4`` in magnitude, so
    at ``asymptotic_n`` a strictly smaller slope always wins and equal
    values mean equal lines.
    """
    return minimal_branches(asymptotic_n(max_size), max_size)


@dataclass(frozen=True)
class CrossingReport:
    difference: AffineCost
    crossing: Fraction | None
    first_smaller_after: str

    def smaller_at(self, n: int) -> str:
        d = self.difference(n)
        return "equal" if d == 0 else ("a" if d < 0 else "b")


def compare_structures(shape_a: BranchShape, shape_b: BranchShape) -> CrossingReport:
    """Affine difference ``cost(a) - cost(b)`` and where its sign flips."""
    if shape_a.size != shape_b.size:
        raise ShapeError("shapes must have equal size")
    diff = branch_cost_affine(shape_a) - branch_cost_affine(shape_b)
    if diff.slope == 0:
        crossing = None
        tail = "equal" if diff.intercept == 0 else ("a" if diff.intercept < 0 else "b")
    else:
        crossing = Fraction(-diff.intercept, diff.slope)
        tail = "a" if diff.slope < 0 else "b"
    return CrossingReport(diff, crossing, tail)


__all__ = [
    "AffineCost",
    "CrossingReport",
    "DomainError",
    "DpTable",
    "TreeResult",
    "asymptotic_branches",
    "compare_structures",
    "minimal_branches",
    "minimal_tree",
    "partition_min_dp",
    "solve",
    "structure_cost",
]
