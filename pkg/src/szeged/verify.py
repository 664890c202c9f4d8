"""Cross-checks of the dynamic programs against exhaustive search and direct sums."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterator

from .branch import branch_cost_affine, embedded_branch_cost, free_tree_key, half_edge_decomposition, shape_to_tree
from .graph import weighted_szeged_index
from .optimizer import minimal_branches, minimal_tree, partition_min_dp
from .oracle import brute_force_min_branch, brute_force_min_tree, enumerate_branch_shapes, random_tree


@dataclass
class CheckResult:
    name: str
    passed: bool
    cases: int = 0
    failures: list[str] = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status} {self.name} ({self.cases} cases)"
        if self.failures:
            text += ": " + "; ".join(self.failures[:5])
        return text


def _run(name: str, cases: Iterator[str | None]) -> CheckResult:
    result = CheckResult(name, True)
    for failure in cases:
        result.cases += 1
        if failure is not None:
            result.passed = False
            result.failures.append(failure)
    return result


def tree_oracle(max_n: int) -> CheckResult:
    """DP tree minimum equals exhaustive search, with an isomorphic minimiser."""

    def cases():
        for n in range(2, max_n + 1):
            best, winners = brute_force_min_tree(n)
            dp = minimal_tree(n)
            if dp.cost != best:
                yield f"n={n}: dp {dp.cost} != brute force {best}"
                continue
            keys = {free_tree_key(t) for t in winners}
            if free_tree_key(dp.tree()) not in keys:
                yield f"n={n}: DP tree not among exhaustive minimisers"
                continue
            yield None

    return _run(f"tree oracle n<={max_n}", cases())


def branch_oracle(max_size: int, n_max: int = 40) -> CheckResult:
    """DP branch minima and co-optimal shapes equal exhaustive search."""

    def cases():
        for n in range(3, n_max + 1):
            top = min(max_size, n - 1)
            table = minimal_branches(n, top)
            for m in range(2, top + 1):
                best, winners = brute_force_min_branch(m, n)
                if table.cost(m) != best:
                    yield f"m={m} n={n}: dp {table.cost(m)} != brute force {best}"
                elif {s.encoding for s in table.shapes(m)} != {s.encoding for s in winners}:
                    yield f"m={m} n={n}: co-optimal shape sets differ"
                else:
                    yield None

    return _run(f"branch oracle m<={max_size} n<={n_max}", cases())


def _exhaustive_partition_min(s: int, k: int, score: Callable[[int], int]):
    best = None
    for parts in _partitions(s, k, s):
        value = sum(score(x) for x in parts)
        if best is None or value < best:
            best = value
    return best


def _partitions(s: int, k: int, cap: int) -> Iterator[tuple[int, ...]]:
    if k == 0:
        if s == 0:
            yield ()
        return
    for x in range(min(cap, s - k + 1), 0, -1):
        for rest in _partitions(s - x, k - 1, x):
            yield (x,) + rest


def partition_oracle(max_s: int = 20) -> CheckResult:
    scores = {
        "square": lambda x: x * x,
        "wobble": lambda x: (x * 37) % 11 - 3 * x,
        "pair40": lambda x: 3 * x * (40 - x) + 7 * x - 11,
    }

    def cases():
        for (label, score), s in itertools.product(scores.items(), range(1, max_s + 1)):
            for k in range(1, s + 1):
                got, parts = partition_min_dp(s, k, score)
                want = _exhaustive_partition_min(s, k, score)
                ok = got == want and len(parts) == k and sum(parts) == s and sum(map(score, parts)) == got
                yield None if ok else f"{label} s={s} k={k}: {got} vs {want}"

    return _run(f"partition DP s<={max_s}", cases())


def assembly_identity(max_n: int) -> CheckResult:
    """Materialised optimal trees have exactly the DP cost."""

    def cases():
        for n in range(2, max_n + 1):
            result = minimal_tree(n)
            for struct in result.structures:
                value = weighted_szeged_index(result.tree(struct).to_graph(), method="bfs")
                yield None if value == result.cost else f"n={n} {struct}: {value} != {result.cost}"

    return _run(f"assembly identity n<={max_n}", cases())


def affine_oracle(max_size: int, n_max: int = 100) -> CheckResult:
    """Affine branch costs equal direct edge sums inside a host tree."""

    def cases():
        for m in range(1, max_size + 1):
            for shape in enumerate_branch_shapes(m):
                line = branch_cost_affine(shape)
                for n in range(m + 1, n_max + 1):
                    tree, root = shape_to_tree(shape, n - m)
                    direct = embedded_branch_cost(tree, root)
                    yield None if direct == line(n) else f"{shape.encoding} n={n}: {line} gives {line(n)}, edges {direct}"

    return _run(f"affine costs size<={max_size} n<={n_max}", cases())


def decomposition_property(count: int = 200, max_n: int = 60, seed: int = 0) -> CheckResult:
    def cases():
        for i in range(count):
            tree = random_tree(2 + (seed + i) % (max_n - 1), seed=seed + i)
            total = weighted_szeged_index(tree.to_graph(), method="bfs")
            for p, c in tree.edges():
                rep = half_edge_decomposition(tree, p, c, total)
                if not rep.holds:
                    yield f"seed={seed + i} edge ({p}, {c})"
                    break
            else:
                yield None

    return _run(f"half-edge decomposition on {count} random trees", cases())


def run_all(tree_max: int = 16, branch_max: int = 12, n_max: int = 40) -> list[CheckResult]:
    return [
        partition_oracle(),
        branch_oracle(branch_max, n_max),
        tree_oracle(tree_max),
        assembly_identity(max(tree_max, 30)),
        affine_oracle(min(branch_max, 7), 60),
        decomposition_property(),
    ]
