import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ultrext.errors import ArityMismatch, BackendMismatch
from ultrext.gen import SetGenConfig, random_set
from ultrext.set_algebra import (
    Cell,
    FiniteSet,
    FiniteUniverse,
    SymbolicSet,
    complement,
    difference,
    grid,
    intersect,
    is_empty,
    make_cell,
    member_mask,
    membership,
    period_profile,
    section,
    union,
    witness,
    witness_bound,
)

S = SymbolicSet.of


def ge(c, arity=1, i=0):
    co = tuple(1 if j == i else 0 for j in range(arity))
    return S(arity, [(co, -c)])


def cong(r, m, co=(1,)):
    return S(len(co), [], [(co, r, m)])


def members(a, upto=12):
    return [x for x in range(upto) if membership((x,), a)]


def same(a, b, bound=50):
    pts = grid(a.arity, bound)
    return bool((member_mask(a, pts) == member_mask(b, pts)).all())


# sampled reference values for the unary examples, frozen
UNION_MEMBERS = [0, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11]
ODD_COMPLEMENT = [0, 2, 4, 6, 8, 10]


def test_union_example():
    a = union(ge(3), cong(0, 2))
    assert members(a) == UNION_MEMBERS
    assert 1 not in [x for x in range(101) if membership((x,), a)]
    assert all(membership((x,), a) for x in range(101) if x != 1)


def test_union_with_empty_is_identity():
    a = union(ge(3), cong(1, 4))
    assert same(union(a, SymbolicSet.empty(1)), a)


def test_finite_union():
    u = FiniteUniverse(("a", "b", "c"))
    out = union(FiniteSet(u, 1, frozenset({(0,)})), FiniteSet(u, 1, frozenset({(1,)})))
    assert out.members == {(0,), (1,)}


def test_complement_and_intersection_examples():
    assert members(complement(cong(1, 2))) == ODD_COMPLEMENT
    a = union(ge(2), cong(1, 3))
    assert is_empty(intersect(a, complement(a)))
    assert same(intersect(ge(2), ge(5)), ge(5), 100)


def test_membership_examples():
    assert membership((4,), cong(0, 2))
    assert membership((1, 3), S(2, [((-1, 1), 0)]))
    assert membership((7,), intersect(ge(3), cong(1, 3)))


def test_section_examples():
    le = S(2, [((-1, 1), 0)])
    assert same(section(le, 0, 3), ge(3), 100)
    assert members(section(S(2, [], [((1, 1), 0, 2)]), 1, 1)) == [1, 3, 5, 7, 9, 11]
    u = FiniteUniverse.of_size(3)
    t = FiniteSet(u, 2, frozenset({(0, 1), (1, 2), (0, 2)}))
    assert section(t, 0, 0).members == {(1,), (2,)}


def test_period_profile_examples():
    p = period_profile(ge(5))
    assert (p.period, p.threshold, p.table) == (1, 5, (True,))
    p = period_profile(cong(2, 3))
    assert p.period == 3 and p.table == (False, False, True)
    a = union(intersect(ge(4), cong(0, 2)), S(1, [((1,), -1), ((-1,), 1)]))
    p = period_profile(a)
    assert (p.period, p.threshold, p.table) == (2, 4, (True, False))


def test_emptiness_examples():
    a = intersect(ge(3), cong(0, 2))
    assert not is_empty(a)
    assert witness(a) is not None and membership(witness(a), a)
    assert is_empty(S(1, [((0,), -1)]))  # x > x
    e = intersect(S(2, [((-2, 1), 0), ((2, -1), 0)]), cong(1, 2, (0, 1)))
    assert is_empty(e)
    (cell,) = e.cells
    bound = witness_bound(cell)
    assert bound == 40
    pts = grid(2, bound)
    assert not member_mask(e, pts).any()


def test_cells_validate():
    assert make_cell(1, [((0,), -1)], []) is None
    with pytest.raises(ArityMismatch):
        SymbolicSet(2, (Cell(1),))
    u = FiniteUniverse.of_size(2)
    with pytest.raises(BackendMismatch):
        union(ge(1), FiniteSet(u, 1))
    with pytest.raises(ValueError):
        FiniteUniverse(("a", "a"))


def _pair(seed):
    rng = random.Random(seed)
    k = rng.choice((1, 1, 2))
    return random_set(rng, k), random_set(rng, k)


@settings(max_examples=500, deadline=None)
@given(st.integers(0, 10**9))
def test_boolean_laws(seed):
    a, b = _pair(seed)
    pts = grid(a.arity, 50 if a.arity == 1 else 30)
    ma, mb = member_mask(a, pts), member_mask(b, pts)
    assert (member_mask(union(a, b), pts) == (ma | mb)).all()
    assert (member_mask(intersect(a, b), pts) == (ma & mb)).all()
    assert (member_mask(union(b, a), pts) == (ma | mb)).all()
    assert (member_mask(complement(a), pts) == ~ma).all()
    assert (member_mask(complement(complement(a)), pts) == ma).all()
    assert (member_mask(complement(union(a, b)), pts) == ~(ma | mb)).all()
    c = random_set(random.Random(seed + 1), a.arity)
    mc = member_mask(c, pts)
    assert (member_mask(intersect(a, union(b, c)), pts) == (ma & (mb | mc))).all()


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**9))
def test_finite_boolean_laws(seed):
    rng = random.Random(seed)
    u = FiniteUniverse.of_size(rng.randint(1, 4))
    k = rng.randint(1, 2)
    tuples = list(u.tuples(k))
    a = FiniteSet(u, k, frozenset(t for t in tuples if rng.random() < 0.5))
    b = FiniteSet(u, k, frozenset(t for t in tuples if rng.random() < 0.5))
    assert complement(union(a, b)) == intersect(complement(a), complement(b))
    assert difference(a, b).members == a.members - b.members


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**9))
def test_period_profile_agrees_with_membership(seed):
    a = random_set(random.Random(seed), 1)
    p = period_profile(a)
    for x in range(p.threshold, p.threshold + 10 * p.period + 1):
        assert membership((x,), a) == p.table[x % p.period]


SMALL = SetGenConfig(coeff_range=2, const_range=3, moduli=(2, 3), max_cells=2)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**9))
def test_is_empty_matches_search_below_witness_bound(seed):
    rng = random.Random(seed)
    a = random_set(rng, rng.choice((1, 2)), SMALL)
    bound = max((witness_bound(c) for c in a.cells), default=0)
    found = bool(member_mask(a, grid(a.arity, bound)).any()) if a.cells else False
    assert is_empty(a) == (not found)
    w = witness(a)
    assert (w is None) == is_empty(a)
    if w is not None:
        assert membership(w, a)


def test_member_mask_matches_membership():
    rng = random.Random(7)
    for _ in range(50):
        a = random_set(rng, 2)
        pts = grid(2, 6)
        mask = member_mask(a, pts)
        assert list(mask) == [membership(tuple(p), a) for p in pts]
    assert np.asarray(grid(0, 5)).shape[0] == 1
