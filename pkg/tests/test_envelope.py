from __future__ import annotations

from fractions import Fraction

import pytest

from szeged.branch import AffineCost
from szeged.envelope import CostEnvelope, Piece, add_envelopes, branch_envelopes, lower_envelope
from szeged.optimizer import asymptotic_branches, minimal_branches


@pytest.fixture(scope="module")
def envs():
    return branch_envelopes(16)


def test_leaf_envelope(envs):
    leaf = envs[1]
    assert leaf.lo == 2 and len(leaf.pieces) == 1 and str(leaf.final.line) == "1n-1"


def test_size_four_switch(envs):
    env = envs[4]
    assert env.breakpoints == [Fraction(6)]
    assert [str(p.line) for p in env.pieces] == ["31n-87", "29n-75"]
    assert env(5) == 68 and env(10) == 215


def test_size_five_single_piece(envs):
    env = envs[5]
    assert env.lo == 6 and [str(p.line) for p in env.pieces] == ["41n-121"]
    assert env.final.tags == {(2, 2)}


def test_size_ten_has_rational_breakpoint_and_final_tie(envs):
    env = envs[10]
    assert Fraction(59, 5) in env.breakpoints
    assert env.final.tags == {(3, 3, 3), (4, 5)}


def test_final_pieces_match_asymptotic_dp(envs):
    table = asymptotic_branches(16)
    for m in range(2, 17):
        assert set(table.children_sizes(m)) == envs[m].final.tags


def test_agreement_with_fixed_n(envs):
    for n in range(3, 120):
        top = min(16, n - 1)
        table = minimal_branches(n, top)
        for m in range(1, top + 1):
            assert envs[m](n) == table.cost(m)
            if n > m + 1:
                assert envs[m].argmin(n) <= set(table.children_sizes(m)) | {()}


def test_envelope_is_concave_and_continuous(envs):
    for env in envs[1:]:
        slopes = [p.line.slope for p in env.pieces]
        assert slopes == sorted(slopes, reverse=True) and len(set(slopes)) == len(slopes)
        for a, b in zip(env.pieces, env.pieces[1:]):
            assert a.line(b.start) == b.line(b.start)


def test_lower_envelope_and_restrict():
    lines = [(AffineCost(3, 0), [("a",)]), (AffineCost(1, 4), [("b",)]), (AffineCost(2, 1), [("c",)])]
    env = lower_envelope(lines, 0)
    assert [str(p.line) for p in env.pieces] == ["3n", "2n+1", "1n+4"]
    assert env.breakpoints == [Fraction(1), Fraction(3)]
    assert env.argmin(1) == {("a",), ("c",)}
    cut = env.restrict(2)
    assert cut.lo == 2 and cut.pieces[0].start == 2 and len(cut.pieces) == 2
    with pytest.raises(ValueError):
        cut.restrict(1)
    with pytest.raises(ValueError):
        env(-1)
    with pytest.raises(ValueError):
        lower_envelope([], 0)


def test_add_envelopes():
    a = CostEnvelope(0, (Piece(Fraction(0), AffineCost(2, 0), frozenset({(1,)})),
                         Piece(Fraction(2), AffineCost(1, 2), frozenset({(2,)}))))
    b = CostEnvelope(1, (Piece(Fraction(1), AffineCost(1, 0), frozenset({(3,)})),))
    total = lower_envelope(add_envelopes(a, b), 1)
    for n in range(1, 10):
        assert total(n) == a(n) + b(n)
    assert total.final.tags == {(2, 3)}


def test_bad_size():
    with pytest.raises(ValueError):
        branch_envelopes(0)
