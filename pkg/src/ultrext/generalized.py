"""Generalized models: symbols interpreted by ultrafilters over operations
and relations, with the collapse operators ``e`` and ``E``.

An interpretation is either principal (one ordinary operation or relation)
or a family ``m -> f_m`` (``m -> R_m``) pushed forward along a point ``w``
of the parameter space.  A family is stored as one object whose last
coordinate is the parameter ``m``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence, Union

from . import quantifier as q
from .defop import AffineOp, Branch, FiniteOp
from .errors import (
    ArityMismatch,
    BackendMismatch,
    NotPseudoPrincipal,
    UnsupportedQuantifier,
)
from .extension import (
    Model,
    Signature,
    Verdict,
    ext_map,
    ext_rel_star,
    ext_rel_tilde,
    hom_verdict,
    pushforward,
    sample_points,
)
from .points import Limit, Principal, UPoint, equal_points
from .set_algebra import Affine, FiniteSet, FiniteUniverse, SymbolicSet, section

# ---------------------------------------------------------------------------
# interpretations


@dataclass(frozen=True)
class PrincipalInterp:
    obj: object

    @property
    def arity(self) -> int:
        return self.obj.arity

    @property
    def is_function(self) -> bool:
        return isinstance(self.obj, (AffineOp, FiniteOp))


@dataclass(frozen=True)
class FamilyInterp:
    """``family`` has arity n+1; its last coordinate is the parameter."""

    family: object
    w: UPoint

    def __post_init__(self):
        if self.family.arity < 1:
            raise ArityMismatch("a family needs a parameter coordinate")
        if isinstance(self.w, Limit) and isinstance(self.family, (FiniteOp, FiniteSet)):
            raise BackendMismatch("tail parameters need a symbolic family")

    @property
    def arity(self) -> int:
        return self.family.arity - 1

    @property
    def is_function(self) -> bool:
        return isinstance(self.family, (AffineOp, FiniteOp))


GenInterp = Union[PrincipalInterp, FamilyInterp]


def app_tilde(args: Sequence[UPoint], f: GenInterp) -> UPoint:
    """Apply a function interpretation; the parameter quantifier is innermost."""
    if not f.is_function:
        raise TypeError("app_tilde needs a function interpretation")
    if len(args) != f.arity:
        raise ArityMismatch(f"{len(args)} arguments for arity {f.arity}")
    if isinstance(f, PrincipalInterp):
        return ext_map(f.obj, list(args))
    return ext_map(f.family, list(args) + [f.w])


def in_tilde(args: Sequence[UPoint], r: GenInterp) -> bool:
    if r.is_function:
        raise TypeError("in_tilde needs a relation interpretation")
    if len(args) != r.arity:
        raise ArityMismatch(f"{len(args)} arguments for arity {r.arity}")
    if isinstance(r, PrincipalInterp):
        return ext_rel_tilde(r.obj, list(args))
    return q.eval_prefix(list(args) + [r.w], r.family)


def core_relation(r: GenInterp):
    """The tuples ``a`` whose parameter set ``{m : a in R_m}`` belongs to ``w``."""
    if isinstance(r, PrincipalInterp):
        return r.obj
    return q.forall_u(r.w, r.family, r.arity)


def e_of(interp: GenInterp) -> Callable[[Sequence[UPoint]], object]:
    if interp.is_function:
        return lambda args: app_tilde(args, interp)
    core = core_relation(interp)
    return lambda args: ext_rel_tilde(core, list(args))


def E_of(interp: GenInterp) -> Callable[[Sequence[UPoint]], object]:
    if interp.is_function:
        return e_of(interp)
    core = core_relation(interp)
    return lambda args: ext_rel_star(core, list(args))


def _activation_sets(f: FamilyInterp) -> list[tuple[Branch, SymbolicSet]]:
    """For each branch, the principal tuples at which it is active along ``w``."""
    n = f.arity
    return [(b, q.forall_u(f.w, SymbolicSet(n + 1, (b.guard,)), n)) for b in f.family.branches]


def is_pseudo_principal(f: GenInterp) -> bool:
    """Does ``app_tilde`` send every principal tuple to a principal point?

    For a family along a tail point the value at a principal tuple is
    principal exactly when the branch active there ignores ``m``; so the
    answer is that every branch with a nonzero ``m`` coefficient is active
    nowhere.
    """
    if not f.is_function:
        raise TypeError("pseudo-principality is defined for function interpretations")
    if isinstance(f, PrincipalInterp) or isinstance(f.w, Principal):
        return True
    from .set_algebra import is_empty

    return all(is_empty(act) for b, act in _activation_sets(f) if b.expr.coeffs[-1] != 0)


def _collapse_function(f: GenInterp):
    if isinstance(f, PrincipalInterp):
        return f.obj
    g, n = f.family, f.arity
    if isinstance(f.w, Principal):
        p = f.w.value
        if isinstance(g, FiniteOp):
            return FiniteOp.from_function(g.universe, n, lambda *xs: g(*xs, p))
        pieces = []
        for b in g.branches:
            guard = section(SymbolicSet(n + 1, (b.guard,)), n, p)
            expr = Affine(b.expr.coeffs[:-1], b.expr.const + b.expr.coeffs[-1] * p)
            pieces.append((guard, expr))
        return AffineOp.piecewise(n, pieces)
    if not is_pseudo_principal(f):
        raise NotPseudoPrincipal("some principal tuple is sent to a tail point")
    pieces = []
    for b, act in _activation_sets(f):
        if b.expr.coeffs[-1] == 0 and act.cells:
            pieces.append((act, Affine(b.expr.coeffs[:-1], b.expr.const)))
    return AffineOp.piecewise(n, pieces)


# ---------------------------------------------------------------------------
# models


@dataclass(frozen=True)
class GenModel:
    signature: Signature
    interps: Mapping[str, GenInterp]
    universe: FiniteUniverse | None = None

    def __post_init__(self):
        sig = self.signature
        if set(self.interps) != set(sig.functions) | set(sig.relations):
            raise ValueError("interpretations do not match the signature")
        for name, it in self.interps.items():
            want = sig.functions.get(name, sig.relations.get(name))
            if it.arity != want:
                raise ArityMismatch(f"{name} has arity {it.arity}, expected {want}")
            if it.is_function != (name in sig.functions):
                raise TypeError(f"{name} is interpreted by the wrong kind of object")

    @classmethod
    def from_model(cls, m: Model) -> GenModel:
        interps = {k: PrincipalInterp(v) for k, v in m.functions.items()}
        interps.update({k: PrincipalInterp(v) for k, v in m.relations.items()})
        return cls(m.signature, interps, m.universe)

    def apply(self, name: str, args: Sequence[UPoint]) -> UPoint:
        return app_tilde(args, self.interps[name])

    def holds(self, name: str, args: Sequence[UPoint]) -> bool:
        return in_tilde(args, self.interps[name])

    def domain(self) -> list[UPoint] | None:
        if self.universe is None:
            return None
        return [Principal(x) for x in range(self.universe.size)]


@dataclass(frozen=True)
class OracleModel:
    """An ordinary model over ultrafilters, given by oracles per symbol."""

    signature: Signature
    oracles: Mapping[str, Callable]
    universe: FiniteUniverse | None = None

    def apply(self, name: str, args: Sequence[UPoint]) -> UPoint:
        return self.oracles[name](list(args))

    def holds(self, name: str, args: Sequence[UPoint]) -> bool:
        return self.oracles[name](list(args))

    def domain(self) -> list[UPoint] | None:
        if self.universe is None:
            return None
        return [Principal(x) for x in range(self.universe.size)]


def e_model(m: GenModel) -> OracleModel:
    return OracleModel(m.signature, {k: e_of(v) for k, v in m.interps.items()}, m.universe)


def E_model(m: GenModel) -> OracleModel:
    return OracleModel(m.signature, {k: E_of(v) for k, v in m.interps.items()}, m.universe)


def collapse_principal(m: GenModel) -> GenModel:
    interps = {}
    for name, it in m.interps.items():
        obj = _collapse_function(it) if it.is_function else core_relation(it)
        interps[name] = PrincipalInterp(obj)
    return GenModel(m.signature, interps, m.universe)


def principal_model(m: GenModel) -> Model:
    """The ordinary model carried by a fully principal generalized model."""
    c = collapse_principal(m)
    funcs = {k: v.obj for k, v in c.interps.items() if v.is_function}
    rels = {k: v.obj for k, v in c.interps.items() if not v.is_function}
    return Model(m.signature, funcs, rels, m.universe)


def check_gen_hom(
    h, u: GenModel, v: GenModel, via: str = "e", sample: Sequence[UPoint] | None = None
) -> Verdict:
    """Homomorphism check of ``h~`` between generalized models via e or E."""
    collapse = {"e": e_model, "E": E_model}[via]
    if u.universe is not None:
        pts = u.domain()
        label = "exact"
    else:
        pts = list(sample) if sample is not None else sample_points()
        label = "consistent-with-sample"

    def hfun(x: UPoint) -> UPoint:
        if isinstance(h, FiniteOp) or not isinstance(h, AffineOp):
            return Principal(h(x.value))
        return pushforward(h, x)

    return hom_verdict(hfun, collapse(u), collapse(v), u.signature, pts, label)


# ---------------------------------------------------------------------------
# formulas


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class App:
    fn: str
    args: tuple = ()


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Eq:
    lhs: object
    rhs: object


@dataclass(frozen=True)
class Rel:
    name: str
    args: tuple = ()


@dataclass(frozen=True)
class Not:
    body: object


@dataclass(frozen=True)
class And:
    lhs: object
    rhs: object


@dataclass(frozen=True)
class Or:
    lhs: object
    rhs: object


@dataclass(frozen=True)
class Implies:
    lhs: object
    rhs: object


@dataclass(frozen=True)
class Forall:
    var: str
    body: object


@dataclass(frozen=True)
class Exists:
    var: str
    body: object


Term = Union[Var, App]
Formula = Union[Const, Eq, Rel, Not, And, Or, Implies, Forall, Exists]


def free_vars(phi) -> set[str]:
    if isinstance(phi, Var):
        return {phi.name}
    if isinstance(phi, (App, Rel)):
        return set().union(*(free_vars(t) for t in phi.args))
    if isinstance(phi, Const):
        return set()
    if isinstance(phi, Not):
        return free_vars(phi.body)
    if isinstance(phi, (Eq, And, Or, Implies)):
        return free_vars(phi.lhs) | free_vars(phi.rhs)
    if isinstance(phi, (Forall, Exists)):
        return free_vars(phi.body) - {phi.var}
    raise TypeError(f"not a formula: {phi!r}")


def is_quantifier_free(phi) -> bool:
    if isinstance(phi, (Forall, Exists)):
        return False
    if isinstance(phi, Not):
        return is_quantifier_free(phi.body)
    if isinstance(phi, (And, Or, Implies)):
        return is_quantifier_free(phi.lhs) and is_quantifier_free(phi.rhs)
    return True


def eval_term(struct, t, v: Mapping[str, UPoint]) -> UPoint:
    if isinstance(t, Var):
        return v[t.name]
    return struct.apply(t.fn, [eval_term(struct, s, v) for s in t.args])


def evaluate(struct, phi, v: Mapping[str, UPoint], witnesses: Sequence[UPoint] | None = None) -> bool:
    """Classical evaluation over any structure with ``apply``/``holds``.

    Quantifiers range over ``struct.domain()`` when it is finite, otherwise
    over ``witnesses`` if supplied.
    """
    if isinstance(phi, Const):
        return phi.value
    if isinstance(phi, Eq):
        return equal_points(eval_term(struct, phi.lhs, v), eval_term(struct, phi.rhs, v))
    if isinstance(phi, Rel):
        return struct.holds(phi.name, [eval_term(struct, t, v) for t in phi.args])
    if isinstance(phi, Not):
        return not evaluate(struct, phi.body, v, witnesses)
    if isinstance(phi, And):
        return evaluate(struct, phi.lhs, v, witnesses) and evaluate(struct, phi.rhs, v, witnesses)
    if isinstance(phi, Or):
        return evaluate(struct, phi.lhs, v, witnesses) or evaluate(struct, phi.rhs, v, witnesses)
    if isinstance(phi, Implies):
        return (not evaluate(struct, phi.lhs, v, witnesses)) or evaluate(
            struct, phi.rhs, v, witnesses
        )
    if isinstance(phi, (Forall, Exists)):
        dom = struct.domain()
        if dom is None:
            dom = witnesses
        if dom is None:
            raise UnsupportedQuantifier("quantifiers over the naturals need a witness list")
        vals = (evaluate(struct, phi.body, {**v, phi.var: d}, witnesses) for d in dom)
        return all(vals) if isinstance(phi, Forall) else any(vals)
    raise TypeError(f"not a formula: {phi!r}")


def satisfies(
    m: GenModel, phi, v: Mapping[str, UPoint], witnesses: Sequence[UPoint] | None = None
) -> bool:
    return evaluate(m, phi, v, witnesses)


# standard families used across tests, scripts and the DSL


def shift_family(w: UPoint = Limit(0, 1)) -> FamilyInterp:
    """``f_m(x) = x + m``."""
    return FamilyInterp(AffineOp.affine((1, 1)), w)


def monus_family(w: UPoint = Limit(0, 1)) -> FamilyInterp:
    """``f_m(x) = x - m`` if ``x >= m`` else 0."""
    from .defop import monus

    return FamilyInterp(monus(), w)


def below_family(w: UPoint = Limit(0, 1)) -> FamilyInterp:
    """``R_m = {x : x <= m}``."""
    return FamilyInterp(SymbolicSet.of(2, [((-1, 1), 0)]), w)


def above_family(w: UPoint = Limit(0, 1)) -> FamilyInterp:
    """``R_m = {x : x >= m}``."""
    return FamilyInterp(SymbolicSet.of(2, [((1, -1), 0)]), w)
