"""Acceptance criteria.  Each criterion prints one PASS/FAIL line.

Run under pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import contextlib
import io
import json
import sys
import time
from collections import defaultdict
from fractions import Fraction
from pathlib import Path

import pytest

from szeged.branch import (
    AffineCost,
    branch_cost_affine,
    chain,
    embedded_branch_cost,
    free_tree_key,
    half_edge_decomposition,
    make_branch,
    parse_branch,
    shape_to_tree,
    tree_from_shape,
)
from szeged.cli import main
from szeged.conjectures import regular_orders, sweep
from szeged.envelope import branch_envelopes
from szeged.graph import (
    best_kary_degree,
    cycle_graph,
    kary_estimate,
    path_graph,
    star_graph,
    szeged_index,
    weighted_szeged_index,
)
from szeged.optimizer import branch_costs, minimal_branches, minimal_tree, structure_cost
from szeged.oracle import random_tree
from szeged.thresholds import _structure_value, regular_vs_proposed
from szeged.verify import affine_oracle, branch_oracle, tree_oracle

try:
    from conftest import ACCEPTANCE
except ImportError:  # run as a script from elsewhere
    ACCEPTANCE = {}

DATA = Path(__file__).parent / "data" / "reference_tables.json"

# Tree table rows that differ from the reference only in presentation.
# Same optimal tree, rooted at another vertex in the reference:
TREE_ROOTING_DIFFS = {3, 30, 31}
# Further optimal trees the reference does not list:
TREE_EXTRA_TIES = {6: {(2, 3)}, 36: {(5, 7, 7, 16)}}

# Branch thresholds (reference, computed) that disagree; each is backed by
# an explicit cheaper branch at every n in [reference, computed - 1].
THRESHOLD_DIFFS = {
    60: (66, 68), 61: (67, 69), 62: (68, 70), 65: (71, 72), 66: (72, 74),
    67: (73, 75), 70: (79, 80), 71: (80, 82), 72: (82, 83), 73: (84, 85),
}

TITLES = {
    1: "Table of optimal trees n<=81",
    2: "Table of minimal branches m<=80 with thresholds",
    3: "tree oracle equivalence n in [2, 16]",
    4: "branch oracle equivalence m in [2, 12], n<=40",
    5: "affine branch costs vs direct edge sums",
    6: "envelope crossing points for sizes 4 and 5",
    7: "order-326 split (103,103,119) vs regular [5,4,3,2,1]",
    8: "regular order lists",
    9: "conjecture sweep n in [2, 81]",
    10: "k-ary estimate minimised at k=4",
    11: "unit index values",
    12: "property suite",
}


def _reference() -> dict:
    return json.loads(DATA.read_text())


def _cli_json(argv: list[str]) -> dict:
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(argv)
    assert code == 0, f"CLI exit {code}"
    return json.loads(buf.getvalue())


def _record(number: int, fn) -> str:
    try:
        note = fn() or ""
    except Exception as exc:
        ACCEPTANCE[number] = (TITLES[number], False, f"{type(exc).__name__}: {exc}")
        print(f"[FAIL] {number:2d}. {TITLES[number]} -- {exc}", flush=True)
        raise
    ACCEPTANCE[number] = (TITLES[number], True, note)
    print(f"[PASS] {number:2d}. {TITLES[number]}" + (f" -- {note}" if note else ""), flush=True)
    return note


# --- criteria ----------------------------------------------------------------


def criterion_1() -> str:
    start = time.perf_counter()
    doc = _cli_json(["tables", "--trees", "--max", "81", "--json"])
    elapsed = time.perf_counter() - start
    ours: dict[int, set] = defaultdict(set)
    for row in doc["rows"]:
        ours[row["n"]].add(tuple(row["children_sizes"][0]))
    ref: dict[int, set] = defaultdict(set)
    for row in _reference()["trees"]:
        assert row["child_count"] == len(row["children"])
        ref[int(row["label"].rstrip("*"))].add(tuple(sorted(row["children"])))
    assert set(ref) == set(range(2, 82)) == set(ours)
    mismatched = set()
    for n in ref:
        if ours[n] == ref[n]:
            continue
        mismatched.add(n)
        result = minimal_tree(n)
        for struct in ref[n]:
            # the reference structure is an optimal rooting, whatever the diff
            assert struct in result.rootings, f"n={n}: {struct} is not optimal"
        if n in TREE_ROOTING_DIFFS:
            (want,), (got,) = ref[n], ours[n]
            keys = {free_tree_key(tree_from_shape(s)) for s in result.table.assemble(want)}
            assert free_tree_key(result.tree(got)) in keys, f"n={n}: different trees"
        elif n in TREE_EXTRA_TIES:
            assert ours[n] - ref[n] == TREE_EXTRA_TIES[n] and ref[n] <= ours[n]
            for struct in TREE_EXTRA_TIES[n]:
                assert weighted_szeged_index(result.tree(struct).to_graph(), method="bfs") == result.cost
        else:
            raise AssertionError(f"n={n}: reference {sorted(ref[n])} vs computed {sorted(ours[n])}")
    assert mismatched == TREE_ROOTING_DIFFS | set(TREE_EXTRA_TIES), mismatched
    assert elapsed < 10, f"{elapsed:.1f}s"
    exact = sum(1 for n in ref if ours[n] == ref[n])
    return (
        f"{exact}/80 orders identical incl. 15*, 18*; documented diffs: rooting at n={sorted(TREE_ROOTING_DIFFS)}, "
        f"extra optimal trees at n={sorted(TREE_EXTRA_TIES)}; {elapsed:.1f}s"
    )


def _witness(m: int, n: int, struct: tuple[int, ...]) -> tuple[int, int]:
    """Direct edge sums of the DP optimum and of ``struct`` as size-m branches at order n."""
    table = minimal_branches(n, min(m, n - 1))
    best = table.shape(m)
    listed = table.resolve(struct)
    a = embedded_branch_cost(*shape_to_tree(best, n - m))
    b = embedded_branch_cost(*shape_to_tree(listed, n - m))
    return a, b


def criterion_2() -> str:
    start = time.perf_counter()
    doc = _cli_json(["tables", "--branches", "--max-size", "80", "--n-max", "1200", "--json"])
    elapsed = time.perf_counter() - start
    ours = {(r["size"], tuple(r["children_sizes"][0])): r for r in doc["rows"]}
    ref_rows = _reference()["branches"]
    ours_by_size: dict[int, set] = defaultdict(set)
    ref_by_size: dict[int, set] = defaultdict(set)
    for (m, struct) in ours:
        ours_by_size[m].add(struct)
    for row in ref_rows:
        assert row["child_count"] == len(row["children"])
        ref_by_size[int(row["label"].rstrip("*"))].add(tuple(sorted(row["children"])))
    assert ours_by_size == ref_by_size, "structures differ"
    assert all(r["threshold"] is not None for r in doc["rows"]), "uncertified threshold"
    diffs = {}
    for row in ref_rows:
        m = int(row["label"].rstrip("*"))
        struct = tuple(sorted(row["children"]))
        got = ours[(m, struct)]["threshold"]
        if got != row["threshold"]:
            diffs[m] = (row["threshold"], got)
    assert diffs == THRESHOLD_DIFFS, f"undocumented threshold diffs {diffs}"
    for m, (ref_n, our_n) in diffs.items():
        struct = next(s for s in ours_by_size[m])
        for n in range(ref_n, our_n):
            costs, _ = branch_costs(n, min(80, n))
            assert _structure_value(struct, costs, m, n) > costs[m], (m, n)
        best, listed = _witness(m, ref_n, struct)
        assert best < listed, (m, ref_n, best, listed)
    assert elapsed < 60, f"{elapsed:.1f}s"
    return (
        f"80/80 structures incl. 10*; {80 - len(diffs)}/80 thresholds identical; documented diffs "
        + ", ".join(f"{m}: {a}->{b}" for m, (a, b) in sorted(diffs.items()))
        + f"; {elapsed:.1f}s"
    )


def criterion_3() -> str:
    start = time.perf_counter()
    result = tree_oracle(16)
    elapsed = time.perf_counter() - start
    assert result.passed, result.line()
    assert elapsed < 120
    return f"{result.cases} orders, {elapsed:.1f}s"


def criterion_4() -> str:
    start = time.perf_counter()
    result = branch_oracle(12, 40)
    elapsed = time.perf_counter() - start
    assert result.passed, result.line()
    assert elapsed < 60
    return f"{result.cases} (m, n) pairs, {elapsed:.1f}s"


def _direct(shape, n: int) -> int:
    return embedded_branch_cost(*shape_to_tree(shape, n - shape.size))


def criterion_5() -> str:
    result = affine_oracle(10, 100)
    assert result.passed, result.line()
    star3 = parse_branch("(()())")
    two_one = make_branch([chain(2), chain(1)])
    expected = {
        "size 2": (chain(2), AffineCost(7, -11)),
        "size 3 path": (chain(3), AffineCost(17, -37)),
        "size 3 cherry": (star3, AffineCost(17, -35)),
        "size 4 (2,1)": (two_one, AffineCost(29, -75)),
        "size 4 chain": (chain(4), AffineCost(31, -87)),
        "size 4 star": (parse_branch("(()()())"), AffineCost(31, -79)),
    }
    for label, (shape, line) in expected.items():
        assert branch_cost_affine(shape) == line, label
        assert all(_direct(shape, n) == line(n) for n in range(shape.size + 1, 101)), label
    prose = {
        "5n-9 (size 2)": (chain(2), AffineCost(5, -9)),
        "27n-73 (size 4 (2,1))": (two_one, AffineCost(27, -73)),
        "31n-85 (size 4 chain)": (chain(4), AffineCost(31, -85)),
    }
    report = []
    for label, (shape, line) in prose.items():
        wrong = [n for n in range(shape.size + 1, 101) if _direct(shape, n) != line(n)]
        assert wrong, f"{label} unexpectedly matches edge sums"
        n = wrong[0]
        report.append(f"{label} fails at n={n} ({line(n)} vs {_direct(shape, n)})")
    return f"{result.cases} (shape, n) pairs agree; " + "; ".join(report)


def criterion_6() -> str:
    env = branch_envelopes(5)
    four, five = env[4], env[5]
    assert four.breakpoints == [Fraction(6)]
    assert str(four.pieces[0].line) == "31n-87" and four.pieces[0].tags == {(3,)}
    assert str(four.final.line) == "29n-75" and four.final.tags == {(1, 2)}
    assert four.argmin(6) == {(3,), (1, 2)} and four.argmin(7) == {(1, 2)}
    assert five.lo == 6 and len(five.pieces) == 1
    assert str(five.final.line) == "41n-121" and five.final.tags == {(2, 2)}
    return "size 4: 31n-87 -> 29n-75 at n=6 exactly; size 5: 41n-121 with (2,2) from n=6"


def criterion_7() -> str:
    start = time.perf_counter()
    rep = regular_vs_proposed(330, 2000, full_dp="tail")
    elapsed = time.perf_counter() - start
    assert rep.size == 5 * 65 + 1 == 326
    tail = rep.tail_start
    assert tail is not None and tail < 2000
    assert all(rep.winner(n) == "proposed" for n in range(tail, 2001))
    assert rep.optimum and set(rep.optimum) == set(range(tail, 2001))
    assert rep.optimum_non_regular
    for n in (tail, 2000):
        table = minimal_branches(n, 325)
        i = rep.n_values.index(n)
        assert structure_cost((103, 103, 119), table, n) == rep.proposed_costs[i]
        assert structure_cost((65,) * 5, table, n) == rep.regular_costs[i]
    assert elapsed < 300, f"{elapsed:.1f}s"
    first = [n for n in rep.n_values if rep.winner(n) == "proposed"][0]
    return (
        f"regular wins up to n={tail - 1}, split strictly cheaper for all n in [{tail}, 2000] "
        f"(first win at {first}); full DP optimum non-regular at every tail n; {elapsed:.0f}s"
    )


def criterion_8() -> str:
    branches = regular_orders("branch", 80)
    trees = regular_orders("tree", 81)
    assert branches == [1, 2, 3, 5, 7, 10, 11, 16, 22, 34, 49, 65]
    assert trees == [1, 2, 3, 5, 7, 9, 16, 21, 26, 45, 56, 65, 81]
    assert regular_orders("branch", 1) == [1] == regular_orders("tree", 1)
    return ""


def criterion_9() -> str:
    result = sweep(81)
    for name, rep in result.reports.items():
        assert rep.holds, f"{name}: {rep.witnesses[:3]}"
    worst_a = max(len(r.details["unequal_children"]) for r in result.regularity)
    worst_b = max(len(r.details["irregular_order"]) for r in result.regularity)
    return (
        "max degree <= 6, non-increasing degrees, leaf attachment all hold; main branches: "
        f"at most {worst_a} with unequal children, at most {worst_b} of irregular order (reported only)"
    )


def criterion_10() -> str:
    assert best_kary_degree(range(2, 11)) == 4
    for n in (10**3, 10**6, 10**9):
        values = {k: kary_estimate(n, k) for k in range(2, 11)}
        ranked = sorted(values, key=values.get)
        assert ranked[0] == 4
        assert values[ranked[1]] / values[4] > 1.005  # margin far above float error
    return "exact integer-power comparison and float estimates agree"


def criterion_11() -> str:
    assert weighted_szeged_index(path_graph(2)) == 2
    assert weighted_szeged_index(path_graph(4)) == 34
    assert weighted_szeged_index(star_graph(3)) == 36
    assert weighted_szeged_index(path_graph(5)) == 72
    assert szeged_index(path_graph(4)) == 10
    assert szeged_index(cycle_graph(4)) == 16
    for g in (path_graph(4), star_graph(3), path_graph(5)):
        assert weighted_szeged_index(g, method="bfs") == weighted_szeged_index(g, method="tree")
    return ""


def criterion_12() -> str:
    import random

    for seed in range(1000):
        tree = random_tree(2 + seed % 59, seed=seed)
        total = weighted_szeged_index(tree.to_graph(), method="bfs")
        for p, c in tree.edges():
            assert half_edge_decomposition(tree, p, c, total).holds, (seed, p, c)
    rng = random.Random(12)
    for seed in range(200):
        g = random_tree(3 + seed % 40, seed=10_000 + seed).to_graph()
        perm = list(range(g.vertex_count))
        rng.shuffle(perm)
        h = g.relabel(perm)
        assert weighted_szeged_index(g) == weighted_szeged_index(h, method="bfs")
        assert szeged_index(g) == szeged_index(h, method="bfs")
    envs = branch_envelopes(30)
    checked = 0
    for n in range(3, 301):
        table = minimal_branches(n, min(30, n - 1))
        for m in range(1, min(30, n - 1) + 1):
            assert envs[m](n) == table.cost(m), (m, n)
            checked += 1
    return f"1000 random trees, 200 relabelings, {checked} envelope values"


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 13)}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    _record(number, CRITERIA[number])


if __name__ == "__main__":
    failed = 0
    for number, fn in CRITERIA.items():
        try:
            _record(number, fn)
        except Exception:
            failed += 1
    sys.exit(1 if failed else 0)
