"""Wide-sense interpretations: lifting and projection of ultrafilters, the
maps i and I, and their limits.

On a finite universe every ultrafilter is principal, so ultrafilters over
a carrier are stored by their generator; the literal set families are
materialized for small carriers to check lifting and projection against
their definitions.  On the naturals, i and I are representation tags on
a family interpretation and the limit is realized as an oracle.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Sequence

from .defop import FiniteOp
from .errors import BoundExceeded
from .extension import Signature, ext_map, ext_rel_star, ext_rel_tilde
from .generalized import (
    FamilyInterp,
    GenInterp,
    GenModel,
    OracleModel,
    PrincipalInterp,
    _collapse_function,
    app_tilde,
    core_relation,
    in_tilde,
    is_pseudo_principal,
)
from .points import Principal, UPoint
from .set_algebra import FiniteSet, FiniteUniverse

LITERAL_BOUND = 6
FUNCTION_UNIVERSE_BOUND = 2
RELATION_UNIVERSE_BOUND = 3
CARRIER_BOUND = 512


def _subsets(xs: Sequence) -> Iterable[frozenset]:
    for r in range(len(xs) + 1):
        for c in itertools.combinations(xs, r):
            yield frozenset(c)


# ---------------------------------------------------------------------------
# ultrafilters over finite carriers


@dataclass(frozen=True)
class FiniteUF:
    """An ultrafilter over a finite carrier, given by its generator."""

    carrier: tuple
    generator: Hashable

    def __post_init__(self):
        if self.generator not in self.carrier:
            raise ValueError("generator outside the carrier")

    def contains(self, subset) -> bool:
        return self.generator in subset

    def family(self) -> frozenset:
        if len(self.carrier) > LITERAL_BOUND:
            raise BoundExceeded(f"carrier of size {len(self.carrier)} is too large to list")
        return frozenset(s for s in _subsets(self.carrier) if self.generator in s)


def uf_from_family(carrier: Sequence, fam: Iterable[frozenset]) -> FiniteUF:
    """Recover the generator of a literal ultrafilter family."""
    fam = frozenset(fam)
    singles = [next(iter(s)) for s in fam if len(s) == 1]
    if len(singles) != 1:
        raise ValueError("family is not an ultrafilter over a finite carrier")
    uf = FiniteUF(tuple(carrier), singles[0])
    if uf.family() != fam:
        raise ValueError("family is not an ultrafilter over a finite carrier")
    return uf


@dataclass(frozen=True)
class LiftedUF:
    base: FiniteUF
    carrier: tuple
    concentration: frozenset
    uf: FiniteUF

    def __post_init__(self):
        if not self.uf.contains(self.concentration):
            raise AssertionError("a lifted ultrafilter must contain its concentration set")

    @property
    def generator(self):
        return self.uf.generator

    def contains(self, subset) -> bool:
        return self.uf.contains(subset)

    def family(self) -> frozenset:
        return self.uf.family()


def lift(u: FiniteUF, target: Sequence) -> LiftedUF:
    """``{B subset of T : B contains some member of u}``."""
    target = tuple(target)
    if not set(u.carrier) <= set(target):
        raise ValueError("the target carrier must contain the original one")
    conc = frozenset(u.carrier)
    if len(target) <= LITERAL_BOUND:
        fam = u.family()
        lifted = [b for b in _subsets(target) if any(a <= b for a in fam)]
        out = uf_from_family(target, lifted)
    else:
        out = FiniteUF(target, u.generator)
    return LiftedUF(u, target, conc, out)


def project(v, s: Iterable) -> FiniteUF:
    """``{A & S : A in v}``; requires ``S`` to belong to ``v``."""
    s = frozenset(s)
    if not v.contains(s):
        raise ValueError("cannot project onto a set outside the ultrafilter")
    carrier = tuple(x for x in v.carrier if x in s)
    if len(v.carrier) <= LITERAL_BOUND:
        fam = {a & s for a in v.family()}
        return uf_from_family(carrier, fam)
    return FiniteUF(carrier, v.generator)


# ---------------------------------------------------------------------------
# extended maps and closed relations on a finite universe


@dataclass(frozen=True)
class ExtTable:
    """Extension of a finite operation, tabulated over all point tuples."""

    arity: int
    size: int
    values: tuple

    def __call__(self, args: Sequence[UPoint]) -> UPoint:
        idx = 0
        for u in args:
            idx = idx * self.size + u.value
        return self.values[idx]


@dataclass(frozen=True)
class ExtRel:
    """An extended relation on a finite universe, as its set of point tuples."""

    arity: int
    members: frozenset

    def __call__(self, args: Sequence[UPoint]) -> bool:
        return tuple(args) in self.members


def _points(size: int) -> list[Principal]:
    return [Principal(x) for x in range(size)]


@functools.lru_cache(maxsize=None)
def ext_of_op(f: FiniteOp) -> ExtTable:
    pts = _points(f.universe.size)
    vals = tuple(ext_map(f, list(t)) for t in itertools.product(pts, repeat=f.arity))
    return ExtTable(f.arity, f.universe.size, vals)


@functools.lru_cache(maxsize=None)
def ext_of_rel(r: FiniteSet) -> ExtRel:
    pts = _points(r.universe.size)
    return ExtRel(
        r.arity,
        frozenset(t for t in itertools.product(pts, repeat=r.arity) if ext_rel_tilde(r, list(t))),
    )


@functools.lru_cache(maxsize=None)
def cl_of_rel(r: FiniteSet) -> ExtRel:
    pts = _points(r.universe.size)
    return ExtRel(
        r.arity,
        frozenset(t for t in itertools.product(pts, repeat=r.arity) if ext_rel_star(r, list(t))),
    )


def all_ops(universe: FiniteUniverse, arity: int) -> list[FiniteOp]:
    if universe.size > FUNCTION_UNIVERSE_BOUND:
        raise BoundExceeded(f"function carriers need |X| <= {FUNCTION_UNIVERSE_BOUND}")
    n = universe.size
    count = n ** (n**arity)
    if count > CARRIER_BOUND:
        raise BoundExceeded(f"{count} operations exceed the carrier bound")
    return [FiniteOp(universe, arity, t) for t in itertools.product(range(n), repeat=n**arity)]


def all_rels(universe: FiniteUniverse, arity: int) -> list[FiniteSet]:
    if universe.size > RELATION_UNIVERSE_BOUND:
        raise BoundExceeded(f"relation carriers need |X| <= {RELATION_UNIVERSE_BOUND}")
    tuples = list(universe.tuples(arity))
    if 2 ** len(tuples) > CARRIER_BOUND:
        raise BoundExceeded(f"2^{len(tuples)} relations exceed the carrier bound")
    return [FiniteSet(universe, arity, s) for s in _subsets(tuples)]


def _image(u: FiniteUF, fn: Callable) -> FiniteUF:
    image = tuple(fn(x) for x in u.carrier)
    if len(set(image)) != len(image):
        raise AssertionError("the identification map must be one-to-one on the carrier")
    return FiniteUF(image, fn(u.generator))


def plus_map(f: FiniteUF) -> FiniteUF:
    """Image of an ultrafilter over operations under ``f -> ext(f)``."""
    return _image(f, ext_of_op)


def times_map(r: FiniteUF) -> FiniteUF:
    """Image of an ultrafilter over relations under ``R -> R*``."""
    return _image(r, cl_of_rel)


def i_map(u: FiniteUF, target: Sequence | None = None):
    """``u+`` lifted into ``target``; also accepts symbolic interpretations."""
    if isinstance(u, (PrincipalInterp, FamilyInterp)):
        return WideTag("i", u)
    if isinstance(u.generator, FiniteOp):
        img = plus_map(u)
    else:
        img = _image(u, ext_of_rel)
    return lift(img, target if target is not None else img.carrier)


def I_map(u: FiniteUF, target: Sequence | None = None):
    if isinstance(u, (PrincipalInterp, FamilyInterp)):
        return WideTag("I", u)
    img = plus_map(u) if isinstance(u.generator, FiniteOp) else times_map(u)
    return lift(img, target if target is not None else img.carrier)


# ---------------------------------------------------------------------------
# symbolic tags and limits


@dataclass(frozen=True)
class WideTag:
    """``i`` or ``I`` applied to a family interpretation over the naturals."""

    kind: str
    interp: GenInterp

    def __post_init__(self):
        if self.kind not in ("i", "I"):
            raise ValueError(f"unknown tag {self.kind!r}")


def _pointwise_function_limit(f: GenInterp) -> Callable:
    """Limit of ``m -> ext(f_m)`` in the pointwise topology.

    The limit is fixed by its values at principal tuples and extended by
    right continuity; for a pseudo-principal family those values form an
    ordinary operation, which is then extended.  Otherwise the values at
    principal tuples are tail points, and the right-continuous extension
    quantifies over the parameter innermost.
    """
    if isinstance(f, PrincipalInterp):
        op = f.obj
        return lambda args: ext_map(op, list(args))
    if is_pseudo_principal(f):
        op = _collapse_function(f)
        return lambda args: ext_map(op, list(args))
    return lambda args: app_tilde(args, f)


def _pointwise_relation_limit(r: GenInterp, closed: bool) -> Callable:
    core = core_relation(r)
    if closed:
        return lambda args: ext_rel_star(core, list(args))
    return lambda args: ext_rel_tilde(core, list(args))


def limit_of(w) -> Callable:
    """The limit of a wide-sense interpretation, as an oracle on point tuples.

    Over a finite universe the topology is discrete, so a (principal)
    ultrafilter converges to its generator.
    """
    if isinstance(w, LiftedUF):
        return w.generator
    if isinstance(w, FiniteUF):
        return w.generator
    if isinstance(w, WideTag):
        if w.interp.is_function:
            return _pointwise_function_limit(w.interp)
        return _pointwise_relation_limit(w.interp, closed=w.kind == "I")
    raise TypeError(f"not a wide-sense interpretation: {w!r}")


# ---------------------------------------------------------------------------
# models


def _finite_uf_of(interp: GenInterp, universe: FiniteUniverse, arity: int, function: bool) -> FiniteUF:
    if function:
        gen = _collapse_function(interp)
        return FiniteUF(tuple(all_ops(universe, arity)), gen)
    gen = core_relation(interp)
    return FiniteUF(tuple(all_rels(universe, arity)), gen)


@dataclass(frozen=True)
class WideModel:
    signature: Signature
    interps: dict
    universe: FiniteUniverse | None = None


def wide_model(m: GenModel, kind: str = "i") -> WideModel:
    make = {"i": i_map, "I": I_map}[kind]
    out = {}
    sig = m.signature
    for name, it in m.interps.items():
        if m.universe is None:
            out[name] = make(it)
        else:
            fn = name in sig.functions
            arity = sig.functions[name] if fn else sig.relations[name]
            out[name] = make(_finite_uf_of(it, m.universe, arity, fn))
    return WideModel(sig, out, m.universe)


def lim_model(w: WideModel) -> OracleModel:
    return OracleModel(w.signature, {k: limit_of(v) for k, v in w.interps.items()}, w.universe)


def modal_via_ext_check(r: FiniteSet) -> bool:
    """Compare ``R*`` with the image of ``{t : R in t}`` under ext~.

    ``X^n`` is a carrier of its own; an ultrafilter over it is sent to the
    tuple of its coordinate projections, each computed from the literal
    definition ``{A : pi_i^-1(A) in t}``.
    """
    u = r.universe
    if u.size > RELATION_UNIVERSE_BOUND:
        raise BoundExceeded(f"needs |X| <= {RELATION_UNIVERSE_BOUND}")
    tuples = tuple(u.tuples(r.arity))
    xs = tuple(range(u.size))

    def ext_tilde(t: FiniteUF) -> tuple:
        coords = []
        for i in range(r.arity):
            fam = [a for a in _subsets(xs) if t.contains(frozenset(p for p in tuples if p[i] in a))]
            coords.append(Principal(uf_from_family(xs, fam).generator))
        return tuple(coords)

    members = frozenset(r.members)
    image = {ext_tilde(t) for t in (FiniteUF(tuples, p) for p in tuples) if t.contains(members)}
    star = {
        tuple(Principal(x) for x in p) for p in tuples if ext_rel_star(r, [Principal(x) for x in p])
    }
    return image == star
