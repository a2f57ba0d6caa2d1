import itertools
import random

import pytest

from ultrext.defop import AffineOp, FiniteMap, FiniteOp, monus, plus
from ultrext.errors import PrecisionError
from ultrext.extension import (
    Model,
    Signature,
    check_hom,
    ext_map,
    ext_rel_star,
    ext_rel_tilde,
    extend_model,
    is_right_clopen,
)
from ultrext.gen import random_point, random_set
from ultrext.oracle import UNSTABLE, oracle_finite_extension, oracle_prefix, oracle_star, preimage
from ultrext.points import LIM_INF, Limit, Principal, in_ultrafilter
from ultrext.set_algebra import FiniteSet, FiniteUniverse, SymbolicSet

S = SymbolicSet.of
LE = S(2, [((-1, 1), 0)])
LT = S(2, [((-1, 1), -1)])
EQ = S(2, [((-1, 1), 0), ((1, -1), 0)])


def cong(r, m):
    return S(1, [], [((1,), r, m)])


def ge(c):
    return S(1, [((1,), -c)])


def _sampled_image(f, args, v):
    """Sampled check that ``v`` is the image: residue class and unboundedness."""
    if isinstance(v, Principal):
        return oracle_prefix(args, preimage(f, S(1, [((1,), -v.value), ((-1,), v.value)])))
    return (
        oracle_prefix(args, preimage(f, cong(v.residue, v.modulus))) is True
        and oracle_prefix(args, preimage(f, ge(500))) is True
    )


def test_ext_map_examples():
    p = plus()
    assert ext_map(p, [Principal(2), Principal(3)]) == Principal(5)
    cases = [
        ([Limit(1, 3), Principal(2)], Limit(0, 3)),
        ([Limit(1, 4), Limit(2, 4)], Limit(3, 4)),
        ([LIM_INF, LIM_INF], LIM_INF),
    ]
    for args, want in cases:
        assert _sampled_image(p, args, want) is True
        assert ext_map(p, args) == want


def test_ext_map_piecewise_and_totality():
    m = monus()
    assert ext_map(m, [Principal(5), LIM_INF]) == Principal(0)
    assert ext_map(m, [LIM_INF, Principal(5)]) == LIM_INF
    # x outermost: most y exceed x, so the zero branch is active
    assert oracle_prefix([LIM_INF, LIM_INF], preimage(m, S(1, [((-1,), 0)]))) is True
    assert ext_map(m, [LIM_INF, LIM_INF]) == Principal(0)
    with pytest.raises(ValueError):
        AffineOp.affine((-1,), 3)


def test_tilde_examples():
    assert oracle_prefix([Principal(3), LIM_INF], LE) is True
    assert oracle_prefix([LIM_INF, Principal(3)], LE) is False
    assert ext_rel_tilde(LE, [Principal(3), LIM_INF]) is True
    assert ext_rel_tilde(LE, [LIM_INF, Principal(3)]) is False


def test_unary_extensions_are_membership():
    rng = random.Random(4)
    for _ in range(200):
        a = random_set(rng, 1)
        u = random_point(rng)
        try:
            want = in_ultrafilter(a, u)
        except PrecisionError:
            continue
        assert ext_rel_tilde(a, [u]) == want
        assert ext_rel_star(a, [u]) == want


def test_star_examples():
    assert oracle_prefix([LIM_INF, LIM_INF], EQ) is False
    assert oracle_star(EQ, [LIM_INF, LIM_INF]) is True
    assert ext_rel_star(EQ, [LIM_INF, LIM_INF]) is True
    assert ext_rel_tilde(EQ, [LIM_INF, LIM_INF]) is False
    assert oracle_star(LE, [LIM_INF, Principal(3)]) is False
    assert ext_rel_star(LE, [LIM_INF, Principal(3)]) is False
    for x, y in itertools.product(range(5), repeat=2):
        assert ext_rel_star(LE, [Principal(x), Principal(y)]) == (x <= y)


def test_star_precision():
    r = S(2, [((-1, 1), 0)], [((1, 1), 0, 4)])
    with pytest.raises(PrecisionError) as e:
        ext_rel_star(r, [Limit(0, 2), Limit(0, 2)])
    assert e.value.modulus == 4
    assert ext_rel_star(r, [Limit(0, 4), Limit(0, 4)]) is True


def test_is_right_clopen_examples():
    tilde = lambda args: ext_rel_tilde(LE, args)
    assert is_right_clopen(tilde, LE).ok
    assert is_right_clopen(tilde, LE).label == "consistent-with-sample"
    star_eq = lambda args: ext_rel_star(EQ, args)
    v = is_right_clopen(star_eq, EQ)
    assert not v.ok
    assert v.counterexample is not None


def test_finite_right_clopen_is_exhaustive():
    u = FiniteUniverse.of_size(2)
    r = FiniteSet(u, 2, frozenset({(0, 1)}))
    v = is_right_clopen(lambda args: ext_rel_tilde(r, args), r)
    assert v.ok and v.label == "exact"


def _finite(universe, rel_members, fn_table=None):
    sig = Signature({"F": 1} if fn_table else {}, {"R": 2})
    funcs = {"F": FiniteOp(universe, 1, tuple(fn_table))} if fn_table else {}
    return Model(sig, funcs, {"R": FiniteSet(universe, 2, frozenset(rel_members))}, universe)


def test_finite_extensions_collapse():
    u = FiniteUniverse.of_size(2)
    m = _finite(u, {(0, 0), (0, 1)})
    tab = oracle_finite_extension(m, "tilde")
    star = oracle_finite_extension(m, "star")
    for us, val in tab.relations["R"].items():
        pts = tuple(tab.point(x).value for x in us)
        assert val == (pts in m.relations["R"].members) == star.relations["R"][us]
    e = extend_model(m, "star")
    assert e.holds("R", [Principal(0), Principal(1)])
    empty = _finite(u, set())
    assert not any(oracle_finite_extension(empty).relations["R"].values())


def test_check_hom_finite_against_brute_force():
    from ultrext.oracle import brute_force_extension_hom

    u = FiniteUniverse.of_size(2)
    a = _finite(u, {(0, 1)})
    b = _finite(u, {(0, 1), (1, 1)})
    for h in FiniteMap.all_maps(u, u):
        for mode in ("tilde", "star"):
            assert check_hom(h, a, b, mode).ok == brute_force_extension_hom(h, a, b, mode)


def test_check_hom_symbolic():
    sig = Signature({}, {"R": 2})
    le = Model(sig, {}, {"R": LE})
    lt = Model(sig, {}, {"R": LT})
    succ = AffineOp.affine((1,), 1)
    v = check_hom(succ, le, le, "tilde")
    assert v.ok and v.label == "consistent-with-sample"
    v = check_hom(AffineOp.affine((0,), 0), lt, lt, "tilde")
    assert not v.ok
    assert all(isinstance(p, Principal) for p in v.counterexample[1])


def test_tilde_inside_star_and_star_truncation():
    rng = random.Random(9)
    checked = 0
    for _ in range(400):
        k = rng.choice((1, 2))
        r = random_set(rng, k)
        args = [random_point(rng) for _ in range(k)]
        try:
            t, s = ext_rel_tilde(r, args), ext_rel_star(r, args)
        except PrecisionError:
            continue
        checked += 1
        assert s or not t
        o = oracle_star(r, args)
        if o is not UNSTABLE:
            assert s == o
    assert checked > 200
