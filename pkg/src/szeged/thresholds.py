"""Scans over the total order n: branch thresholds and candidate comparisons."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .branch import regular_branch
from .optimizer import (
    INITIAL_CAP,
    DomainError,
    Structure,
    _branch_structures,
    asymptotic_branches,
    branch_costs,
    solve,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ThresholdRow:
    """A branch structure that is optimal for every n from ``threshold`` on.

    ``threshold`` is None when the structure is not optimal at the end of the
    scan (its stable region starts beyond ``n_max``).
    """

    size: int
    threshold: int | None
    children_sizes: Structure
    tie: bool = False
    certified: bool = True
    ties_at_threshold: tuple[Structure, ...] = ()

    @property
    def child_count(self) -> int:
        return len(self.children_sizes)

    @property
    def root_degree(self) -> int:
        return len(self.children_sizes) + 1

    @property
    def label(self) -> str:
        return f"{self.size}*" if self.tie else str(self.size)


def _structure_value(struct: Structure, costs: list[int], m: int, n: int) -> int:
    c = len(struct) + 1
    total = c * m * (n - m)
    for x in struct:
        total += c * x * (n - x) + costs[x]
    return total


def _split(lo: int, hi: int, jobs: int) -> list[tuple[int, int]]:
    jobs = max(1, jobs)
    step = -(-(hi - lo + 1) // jobs)
    return [(a, min(hi, a + step - 1)) for a in range(lo, hi + 1, step)]


def _scan_chunk(args) -> dict[tuple[int, Structure], list[bool]]:
    """For each candidate structure, whether it is optimal at each n of the chunk."""
    lo, hi, max_size, from_size, finals = args
    flags: dict[tuple[int, Structure], list[bool]] = {
        (m, s): [] for m, structs in finals.items() for s in structs
    }
    cap = INITIAL_CAP
    for n in range(lo, hi + 1):
        size = min(max_size, n if from_size else n - 1)
        costs, cap = branch_costs(n, size, initial_cap=cap)
        for (m, struct), out in flags.items():
            out.append(m <= size and _structure_value(struct, costs, m, n) == costs[m])
    return flags


def threshold_table(
    max_size: int = 80, n_max: int = 1200, from_size: bool = True, jobs: int = 1
) -> list[ThresholdRow]:
    """Large-n optimal structure of every branch size ``2..max_size`` with its threshold.

    The candidate structures are those minimising (slope, intercept)
    lexicographically, i.e. the last piece of the cost envelope, so they
    stay optimal for all n beyond the scan.  The threshold is the smallest N
    with the structure (weakly) optimal for every scanned n in ``[N, n_max]``.
    With ``from_size`` the scan for size m starts at n = m, the costs being
    extended there with a vanishing half-edge term; otherwise at n = m + 1.
    ``jobs`` splits the scan over worker processes.
    """
    if max_size < 2:
        raise DomainError("max_size must be at least 2")
    if n_max < max_size + 1:
        raise DomainError("n_max must exceed max_size")
    asym = asymptotic_branches(max_size)
    finals = {m: asym.children_sizes(m) for m in range(2, max_size + 1)}
    start = 2 if from_size else 3
    chunks = _split(start, n_max, jobs)
    args = [(lo, hi, max_size, from_size, finals) for lo, hi in chunks]
    if jobs > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            flags = list(pool.map(_scan_chunk, args))
    else:
        flags = [_scan_chunk(a) for a in args]
    run_start: dict[tuple[int, Structure], int | None] = {}
    for key in flags[0]:
        current = None
        n = start
        for part in flags:
            for ok in part[key]:
                if not ok:
                    current = None
                elif current is None:
                    current = n
                n += 1
        run_start[key] = current
    cap = INITIAL_CAP
    rows = []
    for m in range(2, max_size + 1):
        for i, struct in enumerate(finals[m]):
            thr = run_start[(m, struct)]
            ties: tuple[Structure, ...] = ()
            if thr is not None:
                sol = solve(thr, min(max_size, thr if from_size else thr - 1), initial_cap=cap)
                ties = tuple(s for s in _branch_structures(sol, m) if s not in finals[m])
            else:
                log.warning("size %d: structure %s not stable by n_max=%d", m, struct, n_max)
            rows.append(ThresholdRow(m, thr, struct, tie=i > 0, certified=thr is not None, ties_at_threshold=ties))
    return rows


@dataclass
class CandidateComparison:
    """Per-n costs of a proposed branch against a regular branch of the same order."""

    size: int
    proposed: Structure
    regular_sequence: tuple[int, ...]
    n_values: list[int] = field(default_factory=list)
    proposed_costs: list[int] = field(default_factory=list)
    regular_costs: list[int] = field(default_factory=list)
    optimum: dict[int, list[Structure]] = field(default_factory=dict)

    @property
    def tail_start(self) -> int | None:
        """First n of the final run where the proposed branch is strictly cheaper."""
        start = None
        for n, a, r in zip(self.n_values, self.proposed_costs, self.regular_costs):
            if a < r:
                if start is None:
                    start = n
            else:
                start = None
        return start

    def winner(self, n: int) -> str:
        i = self.n_values.index(n)
        a, r = self.proposed_costs[i], self.regular_costs[i]
        return "proposed" if a < r else ("tie" if a == r else "regular")

    @property
    def optimum_non_regular(self) -> bool:
        return bool(self.optimum) and all(
            not any(len(set(s)) <= 1 for s in structs) for structs in self.optimum.values()
        )


def regular_vs_proposed(
    n_lo: int = 330,
    n_hi: int = 2000,
    proposed: Structure = (103, 103, 119),
    regular_sequence: tuple[int, ...] = (5, 4, 3, 2, 1),
    full_dp: str = "tail",
) -> CandidateComparison:
    """Compare a proposed child-size split against the regular branch of equal order.

    Children on both sides are minimal branches of their orders at each n.
    ``full_dp`` runs the unrestricted DP for the whole size too: ``"tail"``
    on the final run where the proposal wins, ``"all"`` everywhere,
    ``"none"`` never.
    """
    reg = regular_branch(regular_sequence)
    size = reg.size
    if 1 + sum(proposed) != size:
        raise DomainError(f"proposed children sum to {sum(proposed)}, need {size - 1}")
    if n_lo < size + 2:
        raise DomainError(f"n_lo must be at least {size + 2}")
    reg_children = reg.children[0].size
    reg_struct = (reg_children,) * len(reg.children)
    need = max(max(proposed), reg_children)
    report = CandidateComparison(size, tuple(sorted(proposed)), tuple(regular_sequence))
    cap = INITIAL_CAP
    for n in range(n_lo, n_hi + 1):
        costs, cap = branch_costs(n, need, initial_cap=cap)
        report.n_values.append(n)
        report.proposed_costs.append(_structure_value(report.proposed, costs, size, n))
        report.regular_costs.append(_structure_value(reg_struct, costs, size, n))
    if full_dp == "none":
        return report
    lo = n_lo if full_dp == "all" else report.tail_start
    if lo is None:
        return report
    cap = INITIAL_CAP
    for n in range(lo, n_hi + 1):
        sol = solve(n, size, initial_cap=cap)
        cap = sol.mult_cap
        report.optimum[n] = _branch_structures(sol, size)
    return report
