"""Command line front end: index computation, optimal trees and branches, tables.

Exit codes: 0 success, 1 bad input, 2 internal check failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import jsonschema

from .branch import ShapeError, branch_cost_affine, make_branch, parse_branch, tree_from_shape
from .cache import ResultCache, default_cache_path
from .conjectures import regular_orders, sweep
from .envelope import branch_envelopes
from .graph import GraphError, parse_edge_list, szeged_index, weighted_szeged_index
from .optimizer import DomainError, DpTable, TreeResult, asymptotic_branches, minimal_branches, minimal_tree
from .records import ResultRecord, to_dot, validate_conjecture
from .thresholds import ThresholdRow, threshold_table
from . import verify

log = logging.getLogger("szeged")

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2


class InvariantError(RuntimeError):
    pass


def _sizes(struct) -> str:
    return ", ".join(str(x) for x in struct)


def _open_cache(args) -> ResultCache:
    path = args.cache if args.cache is not None else default_cache_path()
    return ResultCache(path)


# --- compute -------------------------------------------------------------


def cmd_compute(args) -> int:
    text = sys.stdin.read() if args.input == "-" else Path(args.input).read_text()
    if args.format == "branch":
        graph = tree_from_shape(parse_branch(text)).to_graph()
    else:
        graph = parse_edge_list(text)
    fn = weighted_szeged_index if args.index == "wsz" else szeged_index
    print(fn(graph))
    return EXIT_OK


# --- optimal tree / branch -----------------------------------------------


def _tree_result(n: int, cache: ResultCache, save: bool = True) -> TreeResult:
    key = f"tree/{n}"
    hit = cache.get(key)
    if hit is not None:
        try:
            return TreeResult(
                n,
                int(hit["cost"]),
                [tuple(s) for s in hit["structures"]],
                [tuple(s) for s in hit["rootings"]],
                DpTable.from_dict(hit["table"]),
            )
        except (KeyError, TypeError, ValueError):
            log.warning("cache entry %s malformed; recomputing", key)
    result = minimal_tree(n)
    cache.put(key, {
        "cost": str(result.cost),
        "structures": [list(s) for s in result.structures],
        "rootings": [list(s) for s in result.rootings],
        "table": result.table.as_dict(),
    }, save=save)
    return result


def tree_record(result: TreeResult) -> ResultRecord:
    structs = [list(s) for s in result.structures]
    return ResultRecord(
        mode="tree",
        n=result.n,
        size=result.n,
        cost=str(result.cost),
        children_sizes=structs,
        shape=make_branch(result.table.shape(x) for x in result.structures[0]).encoding,
        ties=structs[1:],
        extra={"rootings": [list(s) for s in result.rootings]},
    )


def cmd_optimal_tree(args) -> int:
    if args.n < 2:
        raise DomainError("--n must be at least 2")
    result = _tree_result(args.n, _open_cache(args))
    record = tree_record(result)
    tree = result.tree()
    if tree.vertex_count != args.n or weighted_szeged_index(tree) != result.cost:
        raise InvariantError("materialised tree does not reproduce the DP cost")
    if args.dot:
        Path(args.dot).write_text(
            to_dot(tree, label=f"Best weighted Szeged index on {args.n} vertices")
        )
    if args.json:
        print(json.dumps(record.as_dict(), indent=2))
        return EXIT_OK
    print(f"n = {args.n}  wSz = {result.cost}")
    for i, struct in enumerate(result.structures):
        star = "*" if i else " "
        print(f"  {star} root degree {len(struct)}: children {_sizes(struct)}")
    others = [s for s in result.rootings if s not in result.structures]
    if others:
        print("  other optimal rootings: " + "; ".join(f"({_sizes(s)})" for s in others))
    return EXIT_OK


def cmd_optimal_branch(args) -> int:
    if args.n < args.size + 1:
        raise DomainError(f"--n must be at least size + 1 = {args.size + 1}")
    if args.size < 1:
        raise DomainError("--size must be positive")
    table = minimal_branches(args.n, args.size)
    structs = [list(s) for s in table.children_sizes(args.size)]
    record = ResultRecord(
        mode="branch",
        n=args.n,
        size=args.size,
        cost=str(table.cost(args.size)),
        children_sizes=structs,
        shape=table.shape(args.size).encoding,
        ties=structs[1:],
    )
    if args.json:
        print(json.dumps(record.as_dict(), indent=2))
        return EXIT_OK
    print(f"size {args.size} at n = {args.n}: cost {table.cost(args.size)}")
    for i, struct in enumerate(structs):
        star = "*" if i else " "
        print(f"  {star} {len(struct)} children: {_sizes(struct) or '-'}")
    print(f"  shape {record.shape}")
    return EXIT_OK


# --- tables --------------------------------------------------------------


def tree_table_records(max_n: int, cache: ResultCache) -> list[dict]:
    rows = []
    for n in range(2, max_n + 1):
        result = _tree_result(n, cache, save=False)
        for i, struct in enumerate(result.structures):
            rec = ResultRecord(
                mode="tree", n=n, size=n, cost=str(result.cost), children_sizes=[list(struct)],
                shape=None, ties=[], extra={"label": f"{n}*" if i else str(n)},
            )
            rows.append(rec.as_dict())
    cache.save()
    return rows


def branch_table_records(max_size: int, n_max: int, cache: ResultCache, jobs: int) -> list[dict]:
    key = f"branches/{max_size}/{n_max}"
    hit = cache.get(key)
    if isinstance(hit, list):
        return hit
    asym = asymptotic_branches(max_size)
    rows = []
    for row in threshold_table(max_size, n_max, jobs=jobs):
        shape = asym.resolve(row.children_sizes)
        rows.append(_threshold_record(row, shape.encoding, str(branch_cost_affine(shape))))
    cache.put(key, rows)
    return rows


def _threshold_record(row: ThresholdRow, shape: str, affine: str) -> dict:
    return ResultRecord(
        mode="threshold", n=row.threshold, size=row.size, cost=None,
        children_sizes=[list(row.children_sizes)], shape=shape,
        ties=[list(s) for s in row.ties_at_threshold],
        extra={"label": row.label, "threshold": row.threshold, "affine_cost": affine},
    ).as_dict()


def format_tree_table(rows: list[dict]) -> str:
    lines = ["n | d_R | children | wSz"]
    for r in rows:
        struct = r["children_sizes"][0]
        lines.append(f"{r['label']} | {len(struct)} | {_sizes(struct)} | {r['cost']}")
    return "\n".join(lines) + "\n"


def format_branch_table(rows: list[dict]) -> str:
    lines = ["n_v | n >= | children count | children | root degree | cost"]
    for r in rows:
        struct = r["children_sizes"][0]
        thr = "-" if r["threshold"] is None else str(r["threshold"])
        lines.append(
            f"{r['label']} | {thr} | {len(struct)} | {_sizes(struct)} | {len(struct) + 1} | {r['affine_cost']}"
        )
    return "\n".join(lines) + "\n"


def cmd_tables(args) -> int:
    cache = _open_cache(args)
    if args.trees:
        rows = tree_table_records(args.max, cache)
        text = format_tree_table(rows)
        kind = "trees"
    else:
        rows = branch_table_records(args.max_size, args.n_max, cache, args.jobs)
        for r in rows:
            if r["threshold"] is None:
                log.warning("size %d: no certified threshold up to n = %d", r["size"], args.n_max)
        text = format_branch_table(rows)
        kind = "branches"
    doc = {"schema_version": 1, "kind": kind, "rows": rows}
    if args.output:
        out = Path(args.output)
        out.write_text(text)
        out.with_name(out.name + ".json").write_text(json.dumps(doc, indent=1) + "\n")
    if args.json:
        print(json.dumps(doc, indent=1))
    else:
        sys.stdout.write(text)
    return EXIT_OK


# --- envelope ------------------------------------------------------------


def cmd_envelope(args) -> int:
    envs = branch_envelopes(args.size)
    env = envs[args.size]
    out = []
    for p in env.pieces:
        tags = sorted(p.tags)
        out.append({"from": str(p.start), "line": str(p.line), "children": [list(t) for t in tags]})
        if not args.json:
            print(f"n >= {p.start}: {p.line}  children " + "; ".join(f"({_sizes(t)})" for t in tags))
    if args.json:
        print(json.dumps({"size": args.size, "domain_start": env.lo, "pieces": out}, indent=1))
    return EXIT_OK


# --- verify / conjectures ------------------------------------------------


def cmd_verify(args) -> int:
    if args.oracle:
        checks = verify.run_all(args.tree_max, args.branch_max, args.n_max)
    else:
        checks = [verify.partition_oracle(), verify.assembly_identity(30), verify.decomposition_property()]
    for c in checks:
        print(c.line())
    failed = [c for c in checks if not c.passed]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    return EXIT_INTERNAL if failed else EXIT_OK


def cmd_conjectures(args) -> int:
    result = sweep(args.max)
    doc = result.as_dict()
    for rep in doc["reports"].values():
        validate_conjecture(rep)
    for rep in doc["main_branch_regularity"]:
        validate_conjecture(rep)
    doc["regular_orders"] = {
        "branch": regular_orders("branch", max(2, args.max - 1)),
        "tree": regular_orders("tree", args.max),
    }
    if args.json:
        print(json.dumps(doc, indent=1))
        return EXIT_OK
    for name, rep in result.reports.items():
        print(f"{name}: {rep.verdict} for n in [{rep.range[0]}, {rep.range[1]}]")
        for w in rep.witnesses[:5]:
            print(f"  witness {w}")
    worst_a = max((len(r.details["unequal_children"]) for r in result.regularity), default=0)
    worst_b = max((len(r.details["irregular_order"]) for r in result.regularity), default=0)
    print(f"main_branch_regularity: at most {worst_a} main branch(es) with unequal children, "
          f"at most {worst_b} of an irregular order")
    print("regular branch orders: " + _sizes(doc["regular_orders"]["branch"]))
    print("regular tree orders: " + _sizes(doc["regular_orders"]["tree"]))
    return EXIT_OK


# --- entry point ---------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="szeged", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--cache", type=Path, default=None,
                    help="cache file (default: $SZEGED_CACHE_DIR/szeged-cache.json if set)")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="index of a graph read from a file ('-' for stdin)")
    p.add_argument("input")
    p.add_argument("--index", choices=["wsz", "sz"], default="wsz")
    p.add_argument("--format", choices=["edgelist", "branch"], default="edgelist")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("optimal-tree", help="minimum weighted Szeged index trees on n vertices")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.add_argument("--dot", help="write the optimal tree as a DOT file")
    p.set_defaults(func=cmd_optimal_tree)

    p = sub.add_parser("optimal-branch", help="minimal ending branch of a size at total order n")
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_optimal_branch)

    p = sub.add_parser("tables", help="branch threshold table or optimal tree table")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--branches", action="store_true")
    which.add_argument("--trees", action="store_true")
    p.add_argument("--max-size", type=int, default=80)
    p.add_argument("--n-max", type=int, default=1200)
    p.add_argument("--max", type=int, default=81)
    p.add_argument("--jobs", type=int, default=1, help="worker processes for the threshold scan")
    p.add_argument("--json", action="store_true", help="print JSON instead of the text table")
    p.add_argument("--output", help="write the text table here and JSON next to it")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("envelope", help="exact cost envelope of the minimal branch of a size")
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_envelope)

    p = sub.add_parser("verify", help="cross-check the DP against brute force")
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--tree-max", type=int, default=16)
    p.add_argument("--branch-max", type=int, default=12)
    p.add_argument("--n-max", type=int, default=40)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("conjectures", help="structural checks over optimal trees")
    p.add_argument("--max", type=int, default=81)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_conjectures)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
    log.addHandler(handler)
    log.setLevel(logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (GraphError, ShapeError, DomainError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InvariantError, jsonschema.ValidationError) as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    finally:
        log.removeHandler(handler)


if __name__ == "__main__":
    sys.exit(main())
