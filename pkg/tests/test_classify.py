import random

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from flagorbits.clans import Clan, enumerate_params, is_closed_param, is_open_param, matsuki_dual, open_params, w0
from flagorbits.classify import (
    build_representative,
    classify,
    is_conjugate_basis,
    is_dual_basis,
    is_isotropic,
    is_special_basis,
    normalize_to_special,
    perp_flag,
    satisfies_isotropic_gram,
    special_basis,
    spans_flag,
    tilde_flag,
)
from flagorbits.errors import DimensionMismatch, InvalidParam, NotInIntersection, NotIsotropic
from flagorbits.exactfield import I, ONE, ZERO, sqrt
from flagorbits.flaglin import Flag, relative_position
from flagorbits.spaces import BCD_TYPES, Setup, default_setup, random_element

from helpers import (
    canonical_setups,
    flag_variety_dimension,
    orbit_dimension,
    random_flag,
    relpos_by_dims,
    scrambled_dual_input,
    varied_setups,
)

R2 = sqrt(2)[1]


def test_relpos_examples():
    F = Flag.standard(2)
    G = Flag([[1, 1], [1, 0]])
    assert relative_position(F, G) == (2, 1)
    with pytest.raises(DimensionMismatch):
        relative_position(F, Flag.standard(3))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(0, 10 ** 6))
def test_relpos_of_permuted_basis(n, seed):
    rng = random.Random(seed)
    F = random_flag(Setup("A1", n), rng)
    w = list(range(1, n + 1))
    rng.shuffle(w)
    G = Flag([F.basis[k - 1] for k in w], n)
    assert relative_position(F, G) == tuple(w)
    assert relpos_by_dims(F, G) == tuple(w)


def test_classify_examples():
    # e1 + i e2 is isotropic for the identity form, so F is its own perp
    A1 = Setup("A1", 2)
    F = Flag([[1, I], [1, 0]])
    assert classify(F, A1, "K") == Clan(2, w0(2))
    A3 = Setup("A3", 2, (), "+-")
    assert classify(Flag.standard(2), A3, "K") == Clan.from_arcs(2, [], {1: 1, 2: -1})
    assert classify(Flag([[1, 1], [1, 0]]), A3, "K") == Clan.from_arcs(2, [(1, 2)])


def test_classify_rejects_non_isotropic():
    S = default_setup("BD1", 2, 2, 0)
    with pytest.raises(NotIsotropic):
        classify(Flag.standard(4), default_setup("C1", 4), "K")
    with pytest.raises(DimensionMismatch):
        classify(Flag.standard(3), S, "K")


def test_representative_examples():
    A1 = Setup("A1", 2)
    c = Clan(2, (1, 2))
    b = special_basis(c, A1)
    assert b == [(ONE, ZERO), (ZERO, ONE)]
    A2 = Setup("A2", 4)
    b = special_basis(Clan.from_arcs(4, [(1, 2), (3, 4)]), A2)
    assert b == [tuple(ONE if i == k else ZERO for i in range(4)) for k in range(4)]
    A3 = Setup("A3", 2, (), "+-")
    b = special_basis(Clan.from_arcs(2, [(1, 2)]), A3)
    assert b == [(1 / R2, 1 / R2), (1 / R2, -1 / R2)]


def test_invalid_param_rejected():
    with pytest.raises(InvalidParam):
        build_representative(Clan(2, (2, 1)), Setup("A3", 2, (), "++"))


def test_matsuki_dual_examples():
    c = Clan(3, (1, 2, 3))
    assert matsuki_dual(c, "K") == (c, "G0")
    assert matsuki_dual(*matsuki_dual(c, "K")) == (c, "K")
    S = Setup("A2", 4)
    v0 = open_params(S, "K")[0]
    d, fam = matsuki_dual(v0, "K")
    assert is_closed_param(d, S, fam)


SMALL = list(varied_setups(5))


@pytest.mark.parametrize("S", SMALL, ids=str)
def test_round_trip_and_special(S):
    seen = {}
    for c in enumerate_params(S):
        b = special_basis(c, S)
        assert is_special_basis(b, c, S)
        F = Flag(b, S.n)
        for fam in ("K", "G0"):
            assert classify(F, S, fam) == c
        if S.type in BCD_TYPES:
            assert satisfies_isotropic_gram(b, c, S)
            assert is_isotropic(F, S) and perp_flag(F, S).same_as(F)
        seen[c] = F
    # injectivity: representatives of distinct parameters are told apart
    assert len({classify(F, S, "K") for F in seen.values()}) == len(seen)


@pytest.mark.parametrize("S", [S for S in canonical_setups(5) if S.n], ids=str)
def test_orbit_dimension_oracle(S):
    """Open orbits have full dimension, closed ones minimal dimension."""
    top = flag_variety_dimension(S)
    for fam in ("K", "G0"):
        dims = {c: orbit_dimension(build_representative(c, S, fam), S, fam)
                for c in enumerate_params(S)}
        lo = min(dims.values())
        for c, d in dims.items():
            assert (d == top) == is_open_param(c, S, fam)
            assert (d == lo) == is_closed_param(c, S, fam)


GROUP_SETUPS = [S for S in varied_setups(4) if S.n]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(GROUP_SETUPS), st.sampled_from(("K", "G0")), st.integers(0, 10 ** 6))
def test_group_invariance(S, fam, seed):
    rng = random.Random(seed)
    F = random_flag(S, rng)
    c = classify(F, S, fam)
    g = random_element(S, fam, rng, terms=3)
    assert classify(F.transform(g), S, fam) == c


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(GROUP_SETUPS), st.integers(0, 10 ** 6))
def test_intersection_group_preserves_both(S, seed):
    rng = random.Random(seed)
    c = rng.choice(enumerate_params(S))
    F = build_representative(c, S).transform(random_element(S, "KG0", rng))
    assert classify(F, S, "K") == c == classify(F, S, "G0")


def test_normalize_scaling_example():
    S = Setup("A1", 1)
    c = Clan(1, (1,))
    out = normalize_to_special(Flag([[2]]), [(2 * ONE,)], c, S)
    assert out == [(ONE,)]


def test_normalize_already_special():
    for S in canonical_setups(4):
        for c in enumerate_params(S):
            b = special_basis(c, S)
            out = normalize_to_special(Flag(b, S.n), b, c, S)
            assert out == [tuple(v) for v in b]


def test_normalize_a3_arc():
    S = Setup("A3", 2, (), "+-")
    c = Clan.from_arcs(2, [(1, 2)])
    v1 = (1 / R2, 1 / R2)
    v2 = (ONE, ZERO)  # still spans the flag; dual but not conjugate
    F = Flag([v1, v2])
    out = normalize_to_special(F, [v1, v2], c, S)
    assert is_dual_basis(out, c, S) and is_conjugate_basis(out, c, S)
    assert spans_flag(out, F)


def test_normalize_rejects_outside_intersection():
    S = Setup("A3", 2, (), "+-")
    c = Clan.from_arcs(2, [(1, 2)])
    F = Flag([[1, 2], [0, 1]])  # K-side arc, G0-side not
    assert classify(F, S, "K") == c and classify(F, S, "G0") != c
    with pytest.raises(NotInIntersection):
        normalize_to_special(F, list(F.basis), c, S)


NORMALIZE_SETUPS = [S for S in varied_setups(4) if S.n]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(NORMALIZE_SETUPS), st.integers(0, 10 ** 6))
def test_normalize_scrambled(S, seed):
    rng = random.Random(seed)
    c = rng.choice(enumerate_params(S))
    F, v = scrambled_dual_input(c, S, rng)
    assert is_dual_basis(v, c, S)
    before = F.tower().depth
    out = normalize_to_special(F, v, c, S)
    assert is_dual_basis(out, c, S) and is_conjugate_basis(out, c, S)
    assert spans_flag(out, F)
    towers = [x.tower for vec in out for x in vec]
    assert max(t.depth for t in towers) <= before + S.n


@pytest.mark.parametrize("n", [2, 4, 6])
def test_d3_middle_swap(n):
    S = default_setup("D3", n)
    a, b = open_params(S, "K")
    Fa = build_representative(a, S)
    assert classify(tilde_flag(Fa, S), S, "K") == b
