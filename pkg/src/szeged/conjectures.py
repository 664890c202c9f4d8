"""Structural predicates on optimal trees, with witnesses for every failure."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Iterable

from .branch import shape_of_subtree, is_regular
from .graph import RootedTree
from .optimizer import DpTable, TreeResult, asymptotic_branches, minimal_tree

HOLDS = "holds"
FAILS = "fails"


@dataclass
class ConjectureReport:
    conjecture: str
    range: tuple[int, int]
    verdict: str
    witnesses: list[dict] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS

    def as_dict(self) -> dict:
        out = asdict(self)
        out["range"] = list(self.range)
        return out


def _report(name: str, n: int, witnesses: list[dict], **details) -> ConjectureReport:
    return ConjectureReport(name, (n, n), FAILS if witnesses else HOLDS, witnesses, details)


def _neighbors(tree: RootedTree) -> list[list[int]]:
    adj: list[list[int]] = [list(c) for c in tree.children]
    for v, p in enumerate(tree.parent):
        if p is not None:
            adj[v].append(p)
    return adj


def _first_rise(adj: list[list[int]], root: int) -> dict | None:
    """Shallowest edge (u, w) on a root-to-leaf path with deg(w) > deg(u)."""
    level = [root]
    parent = {root: None}
    path_of = {root: [root]}
    while level:
        nxt = []
        for u in level:
            for w in adj[u]:
                if w == parent[u]:
                    continue
                parent[w] = u
                path_of[w] = path_of[u] + [w]
                if len(adj[w]) > len(adj[u]):
                    return {"root": root, "edge": [u, w], "path": path_of[w],
                            "degrees": [len(adj[x]) for x in path_of[w]]}
                nxt.append(w)
        level = nxt
    return None


def check_non_increasing_degrees(tree: RootedTree, roots: Iterable[int] | None = None) -> ConjectureReport:
    """Degrees never increase walking away from the root.

    By default every vertex of maximum degree is tried as the root and all
    violations are reported.
    """
    adj = _neighbors(tree)
    if roots is None:
        top = max(len(a) for a in adj)
        roots = [v for v in range(len(adj)) if len(adj[v]) == top]
    roots = list(roots)
    witnesses = [w for w in (_first_rise(adj, r) for r in roots) if w is not None]
    return _report("non_increasing_degrees", tree.vertex_count, witnesses, roots=roots)


def check_leaf_attachment(tree: RootedTree, bound: int = 3) -> ConjectureReport:
    """Every leaf hangs off a vertex of degree at most ``bound``."""
    adj = _neighbors(tree)
    witnesses = [
        {"leaf": v, "neighbor": adj[v][0], "degree": len(adj[adj[v][0]])}
        for v in range(len(adj))
        if len(adj[v]) == 1 and len(adj[adj[v][0]]) > bound
    ]
    return _report("leaf_attachment", tree.vertex_count, witnesses, bound=bound)


def check_max_degree(tree: RootedTree, bound: int = 6) -> ConjectureReport:
    adj = _neighbors(tree)
    witnesses = [{"vertex": v, "degree": len(a)} for v, a in enumerate(adj) if len(a) > bound]
    return _report("max_degree", tree.vertex_count, witnesses,
                   bound=bound, max_degree=max(len(a) for a in adj))


def check_main_branch_regularity(
    tree: RootedTree, regular_branch_orders: Iterable[int]
) -> ConjectureReport:
    """At most one branch at the root is irregular.

    Two readings are counted: a branch whose root children differ in order
    (``unequal_children``), and a branch whose order is not one of the
    regular minimal orders (``irregular_order``).  The verdict uses the
    branches failing both readings; both counts go into the details.
    """
    orders = set(regular_branch_orders)
    unequal, off_list, both = [], [], []
    for c in tree.children[tree.root]:
        size = tree.subtree_size[c]
        a = not is_regular(shape_of_subtree(tree, c))
        b = size not in orders
        if a:
            unequal.append(size)
        if b:
            off_list.append(size)
        if a and b:
            both.append(size)
    witnesses = [{"sizes": sorted(both)}] if len(both) > 1 else []
    return _report(
        "main_branch_regularity",
        tree.vertex_count,
        witnesses,
        main_branches=sorted(tree.subtree_size[c] for c in tree.children[tree.root]),
        unequal_children=sorted(unequal),
        irregular_order=sorted(off_list),
        failing_both=sorted(both),
    )


def regular_orders(kind: str, max_order: int, table: DpTable | None = None) -> list[int]:
    """Orders whose optimal structure has all children of the same order.

    For branches the large-n optimum is used; for trees the optimal root
    structures of :func:`minimal_tree`.  A co-optimal regular structure is
    enough.
    """
    if max_order < 1:
        raise ValueError("max_order must be positive")
    out = [1]
    if kind == "branch":
        if max_order == 1:
            return out
        table = table or asymptotic_branches(max_order)
        for m in range(2, max_order + 1):
            if any(len(set(s)) == 1 for s in table.children_sizes(m)):
                out.append(m)
    elif kind == "tree":
        for n in range(2, max_order + 1):
            if any(len(set(s)) == 1 for s in minimal_tree(n).structures):
                out.append(n)
    else:
        raise ValueError(f"kind must be 'branch' or 'tree', got {kind!r}")
    return out


@dataclass
class SweepResult:
    reports: dict[str, ConjectureReport]
    regularity: list[ConjectureReport]

    def as_dict(self) -> dict:
        return {
            "reports": {k: r.as_dict() for k, r in self.reports.items()},
            "main_branch_regularity": [r.as_dict() for r in self.regularity],
        }


def optimal_trees(n: int, result: TreeResult | None = None) -> list[RootedTree]:
    result = result or minimal_tree(n)
    return [result.tree(s) for s in result.structures]


def sweep(max_n: int = 81, lo: int = 2, max_degree: int = 6) -> SweepResult:
    """Run every check on every optimal tree with ``lo <= n <= max_n``."""
    orders = regular_orders("branch", max(2, max_n - 1))
    merged = {
        name: ConjectureReport(name, (lo, max_n), HOLDS)
        for name in ("non_increasing_degrees", "leaf_attachment", "max_degree")
    }
    regularity = []
    for n in range(lo, max_n + 1):
        result = minimal_tree(n)
        for struct in result.structures:
            tree = result.tree(struct)
            for rep in (
                check_non_increasing_degrees(tree),
                check_leaf_attachment(tree),
                check_max_degree(tree, max_degree),
            ):
                if not rep.holds:
                    target = merged[rep.conjecture]
                    target.verdict = FAILS
                    target.witnesses.extend({"n": n, "structure": list(struct), **w} for w in rep.witnesses)
            reg = check_main_branch_regularity(tree, orders)
            reg.details["structure"] = list(struct)
            regularity.append(reg)
    return SweepResult(merged, regularity)
