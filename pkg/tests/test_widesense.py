import itertools
import random

import pytest

from ultrext.errors import BoundExceeded, PrecisionError
from ultrext.extension import Signature, ext_map, ext_rel_star, ext_rel_tilde
from ultrext.generalized import (
    E_of,
    GenModel,
    PrincipalInterp,
    above_family,
    below_family,
    e_model,
    E_model,
    e_of,
    monus_family,
    shift_family,
)
from ultrext.points import Principal
from ultrext.set_algebra import FiniteSet, FiniteUniverse
from ultrext.suites import GEN_POINTS
from ultrext.widesense import (
    FiniteUF,
    I_map,
    LiftedUF,
    WideTag,
    all_ops,
    all_rels,
    cl_of_rel,
    ext_of_op,
    ext_of_rel,
    i_map,
    lift,
    lim_model,
    limit_of,
    modal_via_ext_check,
    project,
    uf_from_family,
    wide_model,
)


def test_lift_keeps_the_generator():
    u = FiniteUF((0, 1, 2), 1)
    v = lift(u, (0, 1, 2, 3, 4))
    assert isinstance(v, LiftedUF)
    assert v.generator == 1
    assert v.contains(frozenset({0, 1, 2}))


def test_lift_project_round_trip_exhaustive():
    for size in range(1, 7):
        t = tuple(range(size))
        for k in range(1, size + 1):
            for s in itertools.combinations(t, k):
                for g in s:
                    u = FiniteUF(s, g)
                    assert project(lift(u, t), s) == u


def test_family_recovery():
    u = FiniteUF((0, 1, 2), 2)
    assert uf_from_family(u.carrier, u.family()) == u
    with pytest.raises(ValueError):
        uf_from_family((0, 1), [frozenset({0, 1})])
    with pytest.raises(BoundExceeded):
        FiniteUF(tuple(range(7)), 0).family()


def test_i_of_principal_is_principal_at_extension():
    u2 = FiniteUniverse.of_size(2)
    ops = all_ops(u2, 1)
    assert len(ops) == 4
    for f in ops:
        w = i_map(FiniteUF(tuple(ops), f))
        assert w.generator == ext_of_op(f)
    rels = all_rels(u2, 2)
    for r in rels[:6]:
        w = I_map(FiniteUF(tuple(rels), r))
        assert w.generator == cl_of_rel(r)


def test_i_is_injective_on_unary_maps():
    u2 = FiniteUniverse.of_size(2)
    ops = all_ops(u2, 1)
    images = {i_map(FiniteUF(tuple(ops), f)).generator for f in ops}
    assert len(images) == 4


def test_limit_is_generator_in_discrete_topology():
    u2 = FiniteUniverse.of_size(2)
    ops = all_ops(u2, 1)
    for f in ops:
        assert limit_of(FiniteUF(tuple(ops), f)) is f


def _models(universe, fn_arity, rel_arity):
    ops = all_ops(universe, fn_arity) if fn_arity else [None]
    rels = all_rels(universe, rel_arity)
    for f in ops:
        for r in rels:
            funcs = {"F": fn_arity} if f is not None else {}
            interps = {"R": PrincipalInterp(r)}
            if f is not None:
                interps["F"] = PrincipalInterp(f)
            yield GenModel(Signature(funcs, {"R": rel_arity}), interps, universe)


def _agree(m):
    pts = [Principal(x) for x in range(m.universe.size)]
    for kind, ref in (("i", e_model(m)), ("I", E_model(m))):
        lm = lim_model(wide_model(m, kind))
        for name, k in {**m.signature.functions, **m.signature.relations}.items():
            for args in itertools.product(pts, repeat=k):
                if name in m.signature.functions:
                    assert lm.apply(name, list(args)) == ref.apply(name, list(args))
                else:
                    assert lm.holds(name, list(args)) == ref.holds(name, list(args))


def test_lim_of_i_and_I_with_functions():
    u2 = FiniteUniverse.of_size(2)
    for m in _models(u2, 1, 2):
        _agree(m)
    for m in itertools.islice(_models(u2, 2, 1), 64):
        _agree(m)


def test_lim_of_i_and_I_relations_only():
    u3 = FiniteUniverse.of_size(3)
    for m in _models(u3, 0, 2):
        _agree(m)


@pytest.mark.parametrize("make", [monus_family, shift_family, below_family, above_family])
def test_symbolic_limits_match_e_and_E(make):
    f = make()
    rng = random.Random(0)
    pts = list(GEN_POINTS) + [Principal(x) for x in range(6, 60)]
    li, lI = limit_of(i_map(f)), limit_of(I_map(f))
    assert isinstance(i_map(f), WideTag)
    checked = 0
    for u in rng.sample(pts, 50):
        try:
            want_e, want_E = e_of(f)([u]), E_of(f)([u])
        except PrecisionError:
            continue
        assert li([u]) == want_e
        assert lI([u]) == want_E
        checked += 1
    assert checked == 50


def test_modal_via_ext():
    u2 = FiniteUniverse.of_size(2)
    diag = FiniteSet(u2, 2, frozenset({(0, 0), (1, 1)}))
    assert modal_via_ext_check(diag)
    assert cl_of_rel(diag) == ext_of_rel(diag)
    u1 = FiniteUniverse.of_size(1)
    for members in (frozenset(), frozenset({(0, 0)})):
        assert modal_via_ext_check(FiniteSet(u1, 2, members))
    rng = random.Random(20)
    u3 = FiniteUniverse.of_size(3)
    for _ in range(20):
        r = FiniteSet(u3, 2, frozenset(t for t in u3.tuples(2) if rng.random() < 0.5))
        assert modal_via_ext_check(r)


def test_finite_extension_tables_are_consistent():
    u2 = FiniteUniverse.of_size(2)
    for f in all_ops(u2, 2):
        tab = ext_of_op(f)
        for a, b in itertools.product(range(2), repeat=2):
            assert tab([Principal(a), Principal(b)]) == ext_map(f, [Principal(a), Principal(b)])
    r = FiniteSet(u2, 2, frozenset({(0, 1)}))
    assert ext_of_rel(r)([Principal(0), Principal(1)]) == ext_rel_tilde(r, [Principal(0), Principal(1)])
    assert cl_of_rel(r)([Principal(1), Principal(1)]) == ext_rel_star(r, [Principal(1), Principal(1)])
