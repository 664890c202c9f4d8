"""JSON result records, their schemas, and DOT export."""

from __future__ import annotations

import re
from dataclasses import asdict, dataclass, field

import jsonschema

from .graph import RootedTree

SCHEMA_VERSION = 1

_SIZES = {"type": "array", "items": {"type": "integer", "minimum": 1}}

RESULT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "ResultRecord",
    "type": "object",
    "required": ["schema_version", "mode", "n", "size", "cost", "child_counts", "children_sizes", "shape", "ties"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "mode": {"enum": ["tree", "branch", "threshold", "conjecture"]},
        "n": {"type": ["integer", "null"], "minimum": 1},
        "size": {"type": ["integer", "null"], "minimum": 1},
        "cost": {"type": ["string", "null"], "pattern": "^-?[0-9]+$"},
        "affine_cost": {"type": ["string", "null"]},
        "threshold": {"type": ["integer", "null"]},
        "child_counts": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "children_sizes": {"type": "array", "items": _SIZES},
        "shape": {"type": ["string", "null"], "pattern": "^[()]+$"},
        "ties": {"type": "array", "items": _SIZES},
        "rootings": {"type": "array", "items": _SIZES},
        "label": {"type": "string"},
    },
    "additionalProperties": False,
}

CONJECTURE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "ConjectureReport",
    "type": "object",
    "required": ["conjecture", "range", "verdict", "witnesses"],
    "properties": {
        "conjecture": {"type": "string"},
        "range": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
        "verdict": {"enum": ["holds", "fails"]},
        "witnesses": {"type": "array", "items": {"type": "object"}},
        "details": {"type": "object"},
    },
    "if": {"properties": {"verdict": {"const": "fails"}}},
    "then": {"properties": {"witnesses": {"minItems": 1}}},
}


@dataclass
class ResultRecord:
    mode: str
    n: int | None
    size: int | None
    cost: str | None
    children_sizes: list[list[int]]
    shape: str | None = None
    ties: list[list[int]] = field(default_factory=list)
    child_counts: list[int] = field(default_factory=list)
    schema_version: int = SCHEMA_VERSION
    extra: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.child_counts:
            self.child_counts = [len(s) for s in self.children_sizes]

    def as_dict(self) -> dict:
        out = asdict(self)
        out.update(out.pop("extra"))
        validate_record(out)
        return out


def validate_record(data: dict) -> None:
    jsonschema.validate(data, RESULT_SCHEMA)


def validate_conjecture(data: dict) -> None:
    jsonschema.validate(data, CONJECTURE_SCHEMA)


def to_dot(tree: RootedTree, name: str = "T", label: str | None = None) -> str:
    """Undirected DOT graph of the tree, root drawn as a box."""
    lines = [f"graph {name} {{"]
    if label:
        lines.append(f'  label="{label}";')
    lines.append("  node [shape=circle, label=\"\", width=0.15];")
    for v in range(tree.vertex_count):
        attr = " [shape=box]" if v == tree.root else ""
        lines.append(f"  {v}{attr};")
    for p, c in tree.edges():
        lines.append(f"  {p} -- {c};")
    lines.append("}")
    return "\n".join(lines) + "\n"


_DOT_NODE = re.compile(r"^\s*(\d+)\s*(\[.*\])?;\s*$")
_DOT_EDGE = re.compile(r"^\s*(\d+)\s*--\s*(\d+)\s*;\s*$")


def dot_counts(text: str) -> tuple[int, int]:
    """Vertex and edge counts of a DOT file written by :func:`to_dot`."""
    nodes = sum(1 for line in text.splitlines() if _DOT_NODE.match(line))
    edges = sum(1 for line in text.splitlines() if _DOT_EDGE.match(line))
    return nodes, edges
