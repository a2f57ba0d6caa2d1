"""Seeded random generators for sets, points, models and formulas."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .defop import FiniteMap, FiniteOp
from .extension import Model, Signature
from .points import Limit, Principal, UPoint
from .set_algebra import FiniteSet, FiniteUniverse, SymbolicSet, make_cell


@dataclass(frozen=True)
class SetGenConfig:
    coeff_range: int = 5
    const_range: int = 8
    moduli: tuple[int, ...] = (2, 3, 4, 6)
    max_cells: int = 3
    max_ineqs: int = 2
    max_congs: int = 1


def random_cell(rng: random.Random, arity: int, cfg: SetGenConfig = SetGenConfig()):
    c = cfg.coeff_range
    ineqs = []
    for _ in range(rng.randint(0, cfg.max_ineqs)):
        co = tuple(rng.randint(-c, c) for _ in range(arity))
        ineqs.append((co, rng.randint(-cfg.const_range, cfg.const_range)))
    congs = []
    for _ in range(rng.randint(0, cfg.max_congs)):
        m = rng.choice(cfg.moduli)
        co = tuple(rng.randint(-c, c) for _ in range(arity))
        congs.append((co, rng.randrange(m), m))
    return make_cell(arity, ineqs, congs)


def random_set(rng: random.Random, arity: int, cfg: SetGenConfig = SetGenConfig()) -> SymbolicSet:
    cells = [random_cell(rng, arity, cfg) for _ in range(rng.randint(1, cfg.max_cells))]
    return SymbolicSet.from_cells(arity, cells)


def random_point(
    rng: random.Random,
    moduli: tuple[int, ...] = (1, 2, 3, 4, 6),
    principal_max: int = 8,
    p_principal: float = 0.3,
) -> UPoint:
    if rng.random() < p_principal:
        return Principal(rng.randint(0, principal_max))
    m = rng.choice(moduli)
    return Limit(rng.randrange(m), m)


def random_limit(rng: random.Random, moduli: tuple[int, ...] = (1, 2, 3, 4, 6)) -> Limit:
    m = rng.choice(moduli)
    return Limit(rng.randrange(m), m)


def random_finite_set(rng: random.Random, universe: FiniteUniverse, arity: int, p: float = 0.5) -> FiniteSet:
    return FiniteSet(universe, arity, frozenset(t for t in universe.tuples(arity) if rng.random() < p))


def random_finite_op(rng: random.Random, universe: FiniteUniverse, arity: int) -> FiniteOp:
    n = universe.size
    return FiniteOp(universe, arity, tuple(rng.randrange(n) for _ in range(n**arity)))


def random_signature(rng: random.Random, max_symbols: int = 2, max_arity: int = 2) -> Signature:
    funcs, rels = {}, {}
    for s in range(rng.randint(1, max_symbols)):
        arity = rng.randint(1, max_arity)
        if rng.random() < 0.5:
            funcs[f"F{s}"] = arity
        else:
            rels[f"R{s}"] = arity
    return Signature(funcs, rels)


def random_finite_model(rng: random.Random, sig: Signature, universe: FiniteUniverse) -> Model:
    funcs = {k: random_finite_op(rng, universe, a) for k, a in sig.functions.items()}
    rels = {k: random_finite_set(rng, universe, a) for k, a in sig.relations.items()}
    return Model(sig, funcs, rels, universe)


def all_finite_maps(src: FiniteUniverse, dst: FiniteUniverse) -> list[FiniteMap]:
    return FiniteMap.all_maps(src, dst)


def random_term(rng: random.Random, functions: dict, variables: list[str], depth: int = 2):
    from .generalized import App, Var

    if depth <= 0 or not functions or rng.random() < 0.4:
        return Var(rng.choice(variables))
    name = rng.choice(sorted(functions))
    return App(name, tuple(random_term(rng, functions, variables, depth - 1) for _ in range(functions[name])))


def random_qf_formula(rng: random.Random, sig: Signature, variables: list[str], depth: int = 3):
    from .generalized import And, Const, Eq, Implies, Not, Or, Rel

    if depth <= 0 or rng.random() < 0.3:
        roll = rng.random()
        if roll < 0.05:
            return Const(rng.random() < 0.5)
        if roll < 0.35 or not sig.relations:
            return Eq(random_term(rng, sig.functions, variables), random_term(rng, sig.functions, variables))
        name = rng.choice(sorted(sig.relations))
        args = tuple(random_term(rng, sig.functions, variables) for _ in range(sig.relations[name]))
        return Rel(name, args)
    kind = rng.choice((Not, And, Or, Implies))
    if kind is Not:
        return Not(random_qf_formula(rng, sig, variables, depth - 1))
    return kind(
        random_qf_formula(rng, sig, variables, depth - 1),
        random_qf_formula(rng, sig, variables, depth - 1),
    )
