import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from flagorbits.clans import (
    Clan,
    closed_params,
    count_closed,
    count_open,
    count_params,
    double_factorial,
    enumerate_params,
    involution_count,
    involutions,
    is_closed_param,
    is_open_param,
    is_symmetric_clan,
    matsuki_dual,
    open_params,
    signed_involutions,
    w0,
)
from flagorbits.errors import InvalidParam, OutOfRange, UnsignedClan
from flagorbits.spaces import Setup, default_setup

from helpers import brute_force_clans, brute_force_involutions, canonical_setups, varied_setups

# decoded from the signed link pattern pictures
PATTERN_9_11 = Clan.from_arcs(9, [(1, 4), (2, 8), (6, 9)], {3: 1, 5: -1, 7: 1})
PATTERN_10_mm = Clan.from_arcs(10, [(1, 4), (2, 9), (7, 10)], {3: 1, 5: -1, 6: 1, 8: -1})
PATTERN_10_1m = Clan.from_arcs(10, [(1, 4), (7, 10)], {2: -1, 3: 1, 5: 1, 6: 1, 8: 1, 9: -1})
PATTERN_10_m1 = Clan.from_arcs(10, [(1, 4), (7, 10)], {2: -1, 3: 1, 5: -1, 6: 1, 8: -1, 9: 1})


def test_signature_fixture():
    c = Clan.from_arcs(9, [(1, 4), (2, 7), (8, 9)], {3: 1, 5: -1, 6: 1})
    assert c.signature() == ((0, 0), (0, 0), (1, 0), (2, 1), (2, 2), (3, 2), (4, 3), (4, 3), (5, 4))
    assert c.pq() == (5, 4)


def test_signature_small():
    assert Clan.from_arcs(3, [], {1: 1, 2: 1, 3: 1}).signature() == ((1, 0), (2, 0), (3, 0))
    assert Clan.from_arcs(2, [(1, 2)], {}).signature() == ((0, 0), (1, 1))
    with pytest.raises(UnsignedClan):
        Clan.from_arcs(2, [], {}).signature()


def test_invalid_clans():
    with pytest.raises(InvalidParam):
        Clan.from_arcs(3, [(1, 2), (2, 3)], {})
    with pytest.raises(OutOfRange):
        Clan.from_arcs(2, [(1, 3)], {})


def test_enumeration_examples():
    a1 = enumerate_params(Setup("A1", 3))
    assert sorted(c.arcs() for c in a1) == sorted([(), ((1, 2),), ((1, 3),), ((2, 3),)])
    assert len(enumerate_params(Setup("A2", 4))) == 3
    a3 = enumerate_params(Setup("A3", 2, (), "+-"))
    assert {(c.arcs(), c.signs) for c in a3} == {
        ((), ((1, 1), (2, -1))), ((), ((1, -1), (2, 1))), (((1, 2),), ())}


@pytest.mark.parametrize("c,eta,eps,n,p,q,t", [
    (PATTERN_9_11, 1, 1, 9, 5, 4, "BD1"),
    (PATTERN_10_mm, -1, -1, 10, 5, 5, "C1"),
    (PATTERN_10_1m, 1, -1, 10, 6, 4, "C2"),
    (PATTERN_10_m1, -1, 1, 10, 5, 5, "D3"),
])
def test_symmetric_patterns(c, eta, eps, n, p, q, t):
    assert c.pq() == (p, q)
    assert is_symmetric_clan(c, eta, eps)
    assert c in enumerate_params(default_setup(t, n, p, q))


def test_symmetric_negatives():
    sym_arc = Clan.from_arcs(4, [(1, 4)], {2: 1, 3: 1})
    assert is_symmetric_clan(sym_arc, 1, 1)
    assert not is_symmetric_clan(sym_arc, 1, -1)
    ident = Clan.from_arcs(3, [], {1: 1, 2: 1, 3: 1})
    assert not is_symmetric_clan(ident, -1, -1)


def test_closed_counts():
    assert count_closed(default_setup("A3", 4, 2, 2)) == 6
    assert count_closed(default_setup("BD1", 4, 2, 2)) == 2
    assert count_closed(default_setup("C1", 4)) == 4
    assert count_closed(default_setup("C2", 4, 2, 2)) == 2
    assert count_closed(Setup("A1", 5)) == 1
    assert count_closed(Setup("A2", 6)) == 1


def test_open_examples():
    S = Setup("A2", 4)
    assert is_open_param(Clan.from_arcs(4, [(1, 2), (3, 4)]), S)
    for n in range(1, 7):
        assert is_closed_param(Clan(n, w0(n)), Setup("A1", n))
    S3 = default_setup("A3", 3, 2, 1)
    assert is_open_param(Clan.from_arcs(3, [(1, 3)], {2: 1}), S3)
    with pytest.raises(InvalidParam):
        is_open_param(Clan.from_arcs(3, [(1, 3)], {2: -1}), S3)


def test_involution_counts():
    T = [1, 1]
    for n in range(2, 11):
        T.append(T[-1] + (n - 1) * T[-2])
    for n in range(0, 11):
        assert involution_count(n) == T[n]
        assert sum(1 for _ in involutions(n)) == T[n]
    for n in range(2, 11, 2):
        assert sum(1 for _ in involutions(n, fixed_point_free=True)) == double_factorial(n - 1)
    assert [double_factorial(k) for k in (1, 3, 5, 7, 9)] == [1, 3, 15, 105, 945]


@pytest.mark.parametrize("n", range(1, 7))
def test_involutions_brute_force(n):
    assert sorted(tuple(c) for c in involutions(n)) == sorted(brute_force_involutions(n))


@pytest.mark.parametrize("S", list(varied_setups(6)), ids=str)
def test_params_brute_force(S):
    got = enumerate_params(S)
    assert len(got) == len(set(got)) == count_params(S)
    assert sorted(got, key=Clan.sort_key) == sorted(brute_force_clans(S), key=Clan.sort_key)
    assert got == sorted(got, key=Clan.sort_key)


@pytest.mark.parametrize("S", list(canonical_setups(8)), ids=str)
def test_open_and_closed_lists(S):
    params = enumerate_params(S)
    for fam in ("K", "G0"):
        opens = [c for c in params if is_open_param(c, S, fam)]
        closed = [c for c in params if is_closed_param(c, S, fam)]
        assert sorted(opens, key=Clan.sort_key) == sorted(open_params(S, fam), key=Clan.sort_key)
        assert sorted(closed, key=Clan.sort_key) == sorted(closed_params(S, fam), key=Clan.sort_key)
        n_open, n_closed = count_open(S), count_closed(S)
        if fam == "G0":  # open and closed swap under duality
            n_open, n_closed = n_closed, n_open
        assert len(opens) == n_open and len(closed) == n_closed
    assert count_open(S) == (2 if S.type == "D3" else 1)


@pytest.mark.parametrize("S", list(canonical_setups(6)), ids=str)
def test_matsuki_dual_swaps_ends(S):
    for c in open_params(S, "K"):
        d, fam = matsuki_dual(c, "K")
        assert fam == "G0" and is_closed_param(d, S, "G0")


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 8), st.data())
def test_signature_ends_at_pq(n, data):
    p = data.draw(st.integers(0, n))
    cs = list(signed_involutions(n, p, n - p))
    c = data.draw(st.sampled_from(cs))
    sig = c.signature()
    assert sig[-1] == (p, n - p)
    prev = (0, 0)
    for s in sig:
        assert 0 <= s[0] - prev[0] <= 1 and 0 <= s[1] - prev[1] <= 1
        prev = s


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 8), st.data())
def test_json_roundtrip(n, data):
    p = data.draw(st.integers(0, n))
    c = data.draw(st.sampled_from(list(signed_involutions(n, p, n - p))))
    assert Clan.from_json(c.to_json()) == c


def test_render_ascii_and_dot():
    c = Clan.from_arcs(3, [(1, 3)], {2: 1})
    art = c.render_ascii()
    assert "1 2 3" in art and "+" in art
    dot = c.render_dot()
    assert dot.startswith("graph") and "v1 -- v3" in dot
