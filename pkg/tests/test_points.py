import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ultrext.defop import AffineOp
from ultrext.errors import PrecisionError
from ultrext.gen import random_limit, random_set
from ultrext.oracle import UNSTABLE, oracle_in_ultrafilter, preimage
from ultrext.points import LIM_INF, Limit, Principal, equal_points, in_ultrafilter, pushforward, refine
from ultrext.set_algebra import SymbolicSet, complement, intersect, is_empty, difference, union

S = SymbolicSet.of


def ge(c):
    return S(1, [((1,), -c)])


def cong(r, m):
    return S(1, [], [((1,), r, m)])


def test_literals():
    assert LIM_INF == Limit(0, 1)
    assert repr(Limit(1, 4)) == "lim(1 mod 4)"
    assert repr(Principal(5)) == "pt(5)"
    with pytest.raises(ValueError):
        Limit(3, 2)
    with pytest.raises(ValueError):
        Principal(-1)
    assert Limit(1, 2).lifts(4) == [Limit(1, 4), Limit(3, 4)]


def test_in_ultrafilter_examples():
    # oracle first: the sampled verdict is frozen here
    assert oracle_in_ultrafilter(ge(10), LIM_INF) is True
    assert in_ultrafilter(ge(10), LIM_INF) is True
    assert in_ultrafilter(cong(1, 2), Limit(1, 2)) is True
    assert oracle_in_ultrafilter(cong(0, 4), Limit(0, 2)) is UNSTABLE
    with pytest.raises(PrecisionError) as e:
        in_ultrafilter(cong(0, 4), Limit(0, 2))
    assert e.value.modulus == 4
    five = S(1, [((1,), -5), ((-1,), 5)])
    assert in_ultrafilter(five, LIM_INF) is False
    assert in_ultrafilter(five, Principal(5)) is True


def test_pushforward_examples():
    h = AffineOp.affine((1,), 3)
    # truncation oracle: images of the progression are 0 mod 4 and unbounded
    assert oracle_in_ultrafilter(preimage(h, cong(0, 4)), Limit(1, 4)) is True
    assert oracle_in_ultrafilter(preimage(h, ge(1000)), Limit(1, 4)) is True
    assert pushforward(h, Limit(1, 4)) == Limit(0, 4)
    assert pushforward(AffineOp.affine((0,), 7), LIM_INF) == Principal(7)
    assert pushforward(AffineOp.affine((2,), 0), Principal(5)) == Principal(10)


def test_pushforward_identity_and_composition():
    ident = AffineOp.affine((1,), 0)
    rng = random.Random(3)
    for _ in range(200):
        u = random_limit(rng)
        assert pushforward(ident, u) == u
        a, c = rng.randint(0, 3), rng.randint(0, 5)
        b, d = rng.randint(0, 3), rng.randint(0, 5)
        g = AffineOp.affine((a,), c)
        h = AffineOp.affine((b,), d)
        hg = AffineOp.affine((a * b,), b * c + d)
        assert pushforward(hg, u) == pushforward(h, pushforward(g, u))


def test_refine_examples():
    assert refine(Limit(0, 2), 4, 0) == Limit(0, 4)
    assert refine(Limit(0, 2), 4, 2) == Limit(2, 4)
    with pytest.raises(ValueError):
        refine(Limit(0, 2), 4, 1)
    with pytest.raises(ValueError):
        refine(Limit(0, 2), 3, 0)


def test_refine_is_conservative():
    rng = random.Random(11)
    decided = 0
    while decided < 200:
        a = random_set(rng, 1)
        u = random_limit(rng, (1, 2, 3))
        try:
            v = in_ultrafilter(a, u)
        except PrecisionError:
            continue
        decided += 1
        k = rng.choice((2, 3))
        for lift in u.lifts(u.modulus * k):
            assert in_ultrafilter(a, lift) == v


def test_equal_points_contract():
    with pytest.raises(PrecisionError) as e:
        equal_points(Limit(1, 2), Limit(3, 4))
    assert e.value.modulus == 4
    assert equal_points(Limit(1, 2), Limit(0, 4)) is False
    assert equal_points(Principal(3), Limit(1, 2)) is False
    assert equal_points(Limit(1, 4), Limit(1, 4)) is True
    assert equal_points(Principal(2), Principal(2)) is True


@settings(max_examples=1000, deadline=None)
@given(st.integers(0, 10**9))
def test_ultrafilter_laws(seed):
    rng = random.Random(seed)
    a, b = random_set(rng, 1), random_set(rng, 1)
    u = random_limit(rng)
    try:
        va, vc = in_ultrafilter(a, u), in_ultrafilter(complement(a), u)
        vb, vab = in_ultrafilter(b, u), in_ultrafilter(intersect(a, b), u)
        vu = in_ultrafilter(union(a, b), u)
    except PrecisionError:
        return
    assert va != vc
    assert vab == (va and vb)
    if va:
        assert vu
    if va and is_empty(difference(a, b)):
        assert vb


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**9))
def test_in_ultrafilter_matches_truncation(seed):
    rng = random.Random(seed)
    a, u = random_set(rng, 1), random_limit(rng)
    expect = oracle_in_ultrafilter(a, u)
    if expect is UNSTABLE:
        with pytest.raises(PrecisionError):
            in_ultrafilter(a, u)
        return
    assert in_ultrafilter(a, u) == expect
