"""Exact piecewise-linear cost envelopes of minimal branches as functions of n.

Each branch shape has an affine cost in n, so the minimal branch cost of a
given size is the lower envelope of finitely many lines: concave and
piecewise linear.  The envelopes are built bottom-up by the same recursion
as the fixed-n DP, with addition and minimum carried out on envelopes and
breakpoints kept as exact fractions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .branch import AffineCost, product_term

Structure = tuple[int, ...]


@dataclass(frozen=True)
class Piece:
    start: Fraction
    line: AffineCost
    tags: frozenset[Structure]


@dataclass(frozen=True)
class CostEnvelope:
    """Concave piecewise-linear function on ``[lo, inf)``.

    Piece i is active on ``[pieces[i].start, pieces[i+1].start]``; adjacent
    pieces agree at the shared breakpoint.
    """

    lo: int
    pieces: tuple[Piece, ...]

    def __call__(self, n: int | Fraction) -> int | Fraction:
        return self._piece_at(n).line(n)

    def _piece_at(self, n) -> Piece:
        if n < self.lo:
            raise ValueError(f"n={n} below envelope domain start {self.lo}")
        current = self.pieces[0]
        for p in self.pieces[1:]:
            if p.start > n:
                break
            current = p
        return current

    def argmin(self, n: int | Fraction) -> frozenset[Structure]:
        """Structures attaining the envelope at n (both sides at a breakpoint)."""
        out: set[Structure] = set()
        for i, p in enumerate(self.pieces):
            end = self.pieces[i + 1].start if i + 1 < len(self.pieces) else None
            if p.start <= n and (end is None or n <= end):
                out |= p.tags
        return frozenset(out)

    @property
    def breakpoints(self) -> list[Fraction]:
        return [p.start for p in self.pieces[1:]]

    @property
    def final(self) -> Piece:
        return self.pieces[-1]

    def lines(self) -> Iterable[tuple[AffineCost, frozenset[Structure]]]:
        for p in self.pieces:
            yield p.line, p.tags

    def restrict(self, lo: int) -> CostEnvelope:
        if lo < self.lo:
            raise ValueError("cannot extend an envelope below its domain")
        keep = [
            p for i, p in enumerate(self.pieces)
            if i + 1 == len(self.pieces) or self.pieces[i + 1].start > lo
        ]
        first = keep[0]
        keep[0] = Piece(max(first.start, Fraction(lo)), first.line, first.tags)
        return CostEnvelope(lo, tuple(keep))

    def shift(self, line: AffineCost) -> CostEnvelope:
        return CostEnvelope(
            self.lo, tuple(Piece(p.start, p.line + line, p.tags) for p in self.pieces)
        )


def lower_envelope(candidates: Iterable[tuple[AffineCost, Iterable[Structure]]], lo: int) -> CostEnvelope:
    """Pointwise minimum of lines on ``[lo, inf)``."""
    merged: dict[AffineCost, set[Structure]] = {}
    for line, tags in candidates:
        merged.setdefault(line, set()).update(tags)
    if not merged:
        raise ValueError("no candidate lines")
    lines = list(merged)
    cur = min(lines, key=lambda ln: (ln(lo), ln.slope))
    start = Fraction(lo)
    pieces = []
    while True:
        pieces.append(Piece(start, cur, frozenset(merged[cur])))
        best = None
        for ln in lines:
            if ln.slope >= cur.slope:
                continue
            x = Fraction(ln.intercept - cur.intercept, cur.slope - ln.slope)
            if x < start:
                continue
            if best is None or (x, ln.slope) < best[0]:
                best = ((x, ln.slope), ln)
        if best is None:
            break
        start, cur = best[0][0], best[1]
    return CostEnvelope(lo, tuple(pieces))


def add_envelopes(a: CostEnvelope, b: CostEnvelope) -> list[tuple[AffineCost, set[Structure]]]:
    """Lines of ``a + b`` on their common domain, with combined structure tags."""
    lo = max(a.lo, b.lo)
    a, b = a.restrict(lo), b.restrict(lo)
    cuts = sorted({p.start for p in a.pieces} | {p.start for p in b.pieces})
    out = []
    for x in cuts:
        pa, pb = a._piece_at(x), b._piece_at(x)
        tags = {tuple(sorted(s + t)) for s in pa.tags for t in pb.tags}
        out.append((pa.line + pb.line, tags))
    return out


def branch_envelopes(max_size: int) -> list[CostEnvelope]:
    """Envelope of B(m; n) over ``n >= m + 1`` for every ``m <= max_size``.

    Index 0 is unused.  Tags on each piece are the child-size multisets of
    the structures forming that piece.
    """
    if max_size < 1:
        raise ValueError("max_size must be at least 1")
    leaf = CostEnvelope(2, (Piece(Fraction(2), AffineCost(1, -1), frozenset({()})),))
    env: list[CostEnvelope | None] = [None, leaf]
    # F[c][j][s]: cheapest j parts summing to s with part score c*x(n-x) + B(x), domain [s+2, inf)
    F: dict[tuple[int, int, int], CostEnvelope] = {}

    def part(c: int, x: int) -> CostEnvelope:
        e = env[x].shift(product_term(c, x))
        tag = frozenset({(x,)})
        return CostEnvelope(e.lo, tuple(Piece(p.start, p.line, tag) for p in e.pieces))

    for s in range(1, max_size):
        # B(s) is known; fill F[.][.][s] then B(s+1)
        for c in range(2, max_size + 1):
            for j in range(1, min(c - 1, s) + 1):
                lo = s + 2
                if j == 1:
                    F[c, 1, s] = part(c, s).restrict(lo)
                    continue
                cands: list[tuple[AffineCost, set[Structure]]] = []
                for x in range(math.ceil(s / j), s - j + 2):
                    rest = F.get((c, j - 1, s - x))
                    if rest is None:
                        continue
                    cands.extend(add_envelopes(rest.restrict(lo), part(c, x).restrict(lo)))
                F[c, j, s] = lower_envelope(cands, lo)
        m = s + 1
        cands = []
        for c in range(2, m + 1):
            sub = F.get((c, c - 1, s))
            if sub is not None:
                cands.extend(sub.shift(product_term(c, m)).lines())
        env.append(lower_envelope(cands, m + 1))
    return env


__all__ = ["CostEnvelope", "Piece", "add_envelopes", "branch_envelopes", "lower_envelope"]
