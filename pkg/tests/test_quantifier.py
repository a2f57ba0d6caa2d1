import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ultrext.errors import PrecisionError
from ultrext.gen import SetGenConfig, random_point, random_set
from ultrext.oracle import UNSTABLE, oracle_forall_u_grid, oracle_prefix
from ultrext.points import LIM_INF, Limit, Principal, in_ultrafilter
from ultrext.quantifier import QuantPrefix, eval_prefix, exists_u, forall_u
from ultrext.set_algebra import (
    FiniteSet,
    FiniteUniverse,
    SymbolicSet,
    grid,
    is_empty,
    member_mask,
    section,
)

S = SymbolicSet.of
LE = S(2, [((-1, 1), 0)])  # x <= y


def same(a, b, bound=40):
    pts = grid(a.arity, bound)
    return bool((member_mask(a, pts) == member_mask(b, pts)).all())


def test_principal_quantifier_is_substitution():
    out = forall_u(Principal(3), LE, 0)
    assert same(out, S(1, [((1,), -3)]), 100)


def test_tail_examples():
    ge = S(2, [((1, -1), 0)])  # y <= x
    _, sampled = oracle_forall_u_grid(LIM_INF, ge, 0)
    assert all(v is True for v in sampled)
    assert same(forall_u(LIM_INF, ge, 0), SymbolicSet.full(1), 100)

    even = S(1, [], [((1,), 0, 2)])
    out = forall_u(Limit(1, 2), even, 0)
    assert out.arity == 0 and is_empty(out)

    mod3 = S(2, [], [((1, 1), 0, 3)])
    _, sampled = oracle_forall_u_grid(LIM_INF, mod3, 0)
    assert all(v is UNSTABLE for v in sampled)
    with pytest.raises(PrecisionError) as e:
        forall_u(LIM_INF, mod3, 0)
    assert e.value.modulus == 3


def test_eval_prefix_examples():
    # frozen sampled verdicts
    assert oracle_prefix([Principal(3), LIM_INF], LE) is True
    assert oracle_prefix([LIM_INF, Principal(3)], LE) is False
    assert eval_prefix([Principal(3), LIM_INF], LE) is True
    assert eval_prefix([LIM_INF, Principal(3)], LE) is False


def test_non_commutation_witness():
    # x outer: for most x, most y are >= x; y outer: for most y, most x exceed it
    ge_swapped = S(2, [((1, -1), 0)])
    assert oracle_prefix([LIM_INF, LIM_INF], LE) is True
    assert oracle_prefix([LIM_INF, LIM_INF], ge_swapped) is False
    assert eval_prefix([(0, LIM_INF), (1, LIM_INF)], LE) is True
    assert eval_prefix([(1, LIM_INF), (0, LIM_INF)], LE) is False


def test_prefix_forms():
    p = QuantPrefix.positional([Principal(1), LIM_INF])
    assert len(p) == 2
    assert eval_prefix(p, LE) == eval_prefix([Principal(1), LIM_INF], LE)
    with pytest.raises(ValueError):
        eval_prefix([LIM_INF], LE)


def test_finite_prefix_is_lookup():
    u = FiniteUniverse.of_size(3)
    r = FiniteSet(u, 2, frozenset({(0, 1), (2, 2)}))
    for a in range(3):
        for b in range(3):
            assert eval_prefix([Principal(a), Principal(b)], r) == ((a, b) in r.members)


def test_exists_principal_is_section():
    rng = random.Random(5)
    for _ in range(100):
        a = random_set(rng, 2)
        n = rng.randint(0, 9)
        assert same(exists_u(Principal(n), a, 1), section(a, 1, n))


CFG = SetGenConfig(max_ineqs=3, max_congs=2)


def _case(seed):
    rng = random.Random(seed)
    k = rng.choice((1, 2, 2, 3))
    return random_set(rng, k, CFG), random_point(rng), rng.randrange(k)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**9))
def test_forall_matches_sections(seed):
    a, u, i = _case(seed)
    try:
        out = forall_u(u, a, i)
    except PrecisionError:
        return
    assert out.arity == a.arity - 1
    params = grid(a.arity - 1, 6)
    got = member_mask(out, params)
    for p, g in zip(params, got):
        p = tuple(int(v) for v in p)
        sec = a
        for j in reversed(range(a.arity)):
            if j == i:
                continue
            sec = section(sec, j, p[j if j < i else j - 1])
        assert in_ultrafilter(sec, u) == bool(g)


@settings(max_examples=500, deadline=None)
@given(st.integers(0, 10**9))
def test_self_duality(seed):
    a, u, i = _case(seed)
    try:
        f, e = forall_u(u, a, i), exists_u(u, a, i)
    except PrecisionError:
        return
    assert same(f, e, 12)


def test_forall_never_resolves_where_sampling_is_unstable():
    rng = random.Random(2)
    for _ in range(200):
        a, u, i = _case(rng.randrange(10**9))
        try:
            out = forall_u(u, a, i)
        except PrecisionError:
            continue
        params, verdicts = oracle_forall_u_grid(u, a, i)
        got = member_mask(out, params)
        stable = np.array([v is not UNSTABLE for v in verdicts])
        assert stable.all()
        assert (got[stable] == np.array([bool(v) for v in verdicts[stable]])).all()
