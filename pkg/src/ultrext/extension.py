"""Extensions of operations and relations to ultrafilter arguments.

``ext_map`` and ``ext_rel_tilde`` read nested ultrafilter quantifiers with
the first argument outermost.  ``ext_rel_star`` is the closure-style
extension: every choice of neighbourhoods meets the relation.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from . import quantifier as q
from .defop import AffineOp, FiniteMap, FiniteOp
from .errors import ArityMismatch, BackendMismatch, PrecisionError, TotalityError
from .points import Limit, Principal, UPoint, equal_points, pushforward
from .set_algebra import (
    Affine,
    Cell,
    FiniteSet,
    FiniteUniverse,
    SymbolicSet,
    is_empty,
    make_cell,
    membership,
    pullback_cell,
)

# ---------------------------------------------------------------------------
# operations


def _check_args(arity: int, args: Sequence[UPoint]) -> None:
    if len(args) != arity:
        raise ArityMismatch(f"{len(args)} arguments for arity {arity}")


def active_branch(op: AffineOp, args: Sequence[UPoint]):
    """The branch whose guard holds along the quantifier prefix ``args``."""
    errors = []
    for b in op.branches:
        try:
            if q.eval_prefix(list(args), SymbolicSet(op.arity, (b.guard,))):
                return b
        except PrecisionError as e:
            errors.append(e.modulus)
    if errors:
        raise PrecisionError(math.lcm(*errors), "no branch guard is decided")
    raise TotalityError("no branch holds along the prefix")


def ext_map(f, args: Sequence[UPoint]) -> UPoint:
    """Value of the extended operation at ``args``.

    Along the active branch ``a.x + b`` the principal arguments are
    substituted.  If no tail argument has a nonzero coefficient the value is
    principal; otherwise it is the tail point at modulus ``M'`` (the gcd of
    the moduli of the tail arguments that occur), which is all the
    arguments determine about the residue of ``a.x + b``.
    """
    args = list(args)
    _check_args(f.arity, args)
    if all(isinstance(u, Principal) for u in args):
        return Principal(f(*(u.value for u in args)))
    if not isinstance(f, AffineOp):
        raise BackendMismatch("tail points need a symbolic operation")
    b = active_branch(f, args)
    const = b.expr.const
    residue = 0
    mod = 0
    innermost = None
    for a, u in zip(b.expr.coeffs, args):
        if isinstance(u, Principal):
            const += a * u.value
        elif a:
            residue += a * u.residue
            mod = math.gcd(mod, u.modulus)
            innermost = a
    if innermost is None:
        return Principal(const)
    if innermost < 0:
        raise TotalityError("innermost tail coefficient is negative")
    return Limit((residue + const) % mod, mod)


def ext_hom(h, u: UPoint) -> UPoint:
    return pushforward(h, u)


# ---------------------------------------------------------------------------
# relations


def ext_rel_tilde(r, args: Sequence[UPoint]) -> bool:
    args = list(args)
    _check_args(r.arity, args)
    return q.eval_prefix(args, r)


def _progression_exprs(args: Sequence[UPoint]) -> tuple[list[Affine], list[int]]:
    """``x_j = n`` for principal, ``x_j = r + M*z`` for tail coordinates."""
    tails = [j for j, u in enumerate(args) if isinstance(u, Limit)]
    n = len(tails)
    exprs = []
    for u in args:
        if isinstance(u, Principal):
            exprs.append(Affine.constant(u.value, n))
        else:
            t = tails.index(len(exprs))
            co = tuple(u.modulus if s == t else 0 for s in range(n))
            exprs.append(Affine(co, u.residue))
    return exprs, tails


def _unbounded(cell: Cell) -> bool:
    """Does ``cell`` have witnesses with every coordinate above any bound?

    A nonempty cell has points going to infinity in every coordinate iff its
    recession cone contains a vector ``d >= 1``: adding ``L*s*d`` (``L`` the
    lcm of its moduli) to any witness stays in the cell.
    """
    n = cell.arity
    if is_empty(SymbolicSet(n, (cell,))):
        return False
    homog = [(a.coeffs, 0) for a in cell.ineqs]
    homog += [(tuple(1 if s == j else 0 for s in range(n)), -1) for j in range(n)]
    cone = make_cell(n, homog)
    return cone is not None and not is_empty(SymbolicSet(n, (cone,)))


def _star_coarse(r: SymbolicSet, args: Sequence[UPoint]) -> bool:
    exprs, tails = _progression_exprs(args)
    n = len(tails)
    for cell in r.cells:
        c = pullback_cell(cell, exprs, n)
        if c is not None and _unbounded(c):
            return True
    return False


def _star_moduli(r: SymbolicSet, args: Sequence[UPoint]) -> list[int]:
    """Per tail coordinate, the modulus at which every congruence is fixed."""
    out = []
    for j, u in enumerate(args):
        if isinstance(u, Principal):
            out.append(1)
            continue
        need = u.modulus
        for cell in r.cells:
            for g in cell.congs:
                a = g.coeffs[j]
                if a:
                    need = math.lcm(need, g.modulus // math.gcd(a, g.modulus))
        out.append(need)
    return out


def ext_rel_star(r, args: Sequence[UPoint]) -> bool:
    args = list(args)
    _check_args(r.arity, args)
    if all(isinstance(u, Principal) for u in args):
        return membership(tuple(u.value for u in args), r)
    if isinstance(r, FiniteSet):
        raise BackendMismatch("tail points do not exist on a finite universe")
    if not _star_coarse(r, args):
        return False
    fine = _star_moduli(r, args)
    if all(isinstance(u, Principal) or u.modulus == m for u, m in zip(args, fine)):
        return True
    choices = [[u] if isinstance(u, Principal) else u.lifts(m) for u, m in zip(args, fine)]
    for combo in itertools.product(*choices):
        if not _star_coarse(r, combo):
            raise PrecisionError(math.lcm(*fine), "closure verdict depends on finer residues")
    return True


# ---------------------------------------------------------------------------
# verdicts and sampling


@dataclass
class Verdict:
    ok: bool
    label: str = "exact"  # or "consistent-with-sample"
    counterexample: tuple | None = None
    precision_notes: list = field(default_factory=list)
    checked: int = 0

    def __bool__(self) -> bool:
        return self.ok


def sample_points(bound: int = 3, limit_moduli: Iterable[int] = (1, 2, 3)) -> list[UPoint]:
    pts: list[UPoint] = [Principal(n) for n in range(bound + 1)]
    for m in limit_moduli:
        pts.extend(Limit(r, m) for r in range(m))
    return pts


def is_right_clopen(
    oracle: Callable[[Sequence[UPoint]], bool],
    candidate,
    bound: int = 3,
    limit_moduli: Iterable[int] = (1, 2, 3),
) -> Verdict:
    """Compare an extension oracle against the tilde extension of ``candidate``.

    Refutations are exact; passing is only consistency with the sample.
    Finite relations are compared on every tuple, which is exact.
    """
    k = candidate.arity
    if isinstance(candidate, FiniteSet):
        tuples = [tuple(Principal(x) for x in t) for t in candidate.universe.tuples(k)]
        label = "exact"
    else:
        pts = sample_points(bound, tuple(limit_moduli))
        tuples = list(itertools.product(pts, repeat=k))
        label = "consistent-with-sample"
    notes = []
    checked = 0
    for t in tuples:
        try:
            want = ext_rel_tilde(candidate, t)
            got = oracle(t)
        except PrecisionError as e:
            notes.append((t, e.modulus))
            continue
        checked += 1
        if want != got:
            return Verdict(False, "exact", t, notes, checked)
    return Verdict(True, label, None, notes, checked)


# ---------------------------------------------------------------------------
# models


@dataclass(frozen=True)
class Signature:
    functions: Mapping[str, int] = field(default_factory=dict)
    relations: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        clash = set(self.functions) & set(self.relations)
        if clash:
            raise ValueError(f"symbols used twice: {sorted(clash)}")


@dataclass(frozen=True)
class Model:
    """An ordinary structure; ``universe`` None means the naturals."""

    signature: Signature
    functions: Mapping[str, object]
    relations: Mapping[str, object]
    universe: FiniteUniverse | None = None

    def __post_init__(self):
        sig = self.signature
        if set(self.functions) != set(sig.functions) or set(self.relations) != set(sig.relations):
            raise ValueError("model symbols do not match the signature")
        for name, f in self.functions.items():
            if f.arity != sig.functions[name]:
                raise ArityMismatch(f"{name} has arity {f.arity}, expected {sig.functions[name]}")
            if self.universe is None and not isinstance(f, AffineOp):
                raise BackendMismatch(f"{name} is not a symbolic operation")
            if self.universe is not None and (
                not isinstance(f, FiniteOp) or f.universe != self.universe
            ):
                raise BackendMismatch(f"{name} is not an operation on the universe")
        for name, r in self.relations.items():
            if r.arity != sig.relations[name]:
                raise ArityMismatch(f"{name} has arity {r.arity}, expected {sig.relations[name]}")
            if self.universe is None and not isinstance(r, SymbolicSet):
                raise BackendMismatch(f"{name} is not a symbolic set")
            if self.universe is not None and (
                not isinstance(r, FiniteSet) or r.universe != self.universe
            ):
                raise BackendMismatch(f"{name} is not a relation on the universe")

    @property
    def finite(self) -> bool:
        return self.universe is not None


@dataclass(frozen=True)
class ExtendedModel:
    """Oracle view of a model over ultrafilters; ``mode`` is tilde or star."""

    base: Model
    mode: str = "tilde"

    def __post_init__(self):
        if self.mode not in ("tilde", "star"):
            raise ValueError(f"unknown mode {self.mode!r}")

    def apply(self, name: str, args: Sequence[UPoint]) -> UPoint:
        return ext_map(self.base.functions[name], args)

    def holds(self, name: str, args: Sequence[UPoint]) -> bool:
        r = self.base.relations[name]
        if self.mode == "tilde":
            return ext_rel_tilde(r, args)
        return ext_rel_star(r, args)

    def equal(self, u: UPoint, v: UPoint) -> bool:
        return equal_points(u, v)


def extend_model(model: Model, mode: str = "tilde") -> ExtendedModel:
    return ExtendedModel(model, mode)


def _map_point(h, u: UPoint) -> UPoint:
    if isinstance(h, (FiniteMap, FiniteOp)):
        if not isinstance(u, Principal):
            raise BackendMismatch("finite maps act on principal points only")
        return Principal(h(u.value))
    return ext_hom(h, u)


def hom_verdict(
    hfun: Callable[[UPoint], UPoint],
    sa,
    sb,
    signature: Signature,
    pts: Sequence[UPoint],
    label: str,
    max_tuples: int = 20000,
) -> Verdict:
    """Check that ``hfun`` commutes with operations and preserves relations.

    ``sa`` and ``sb`` are any structures exposing ``apply`` and ``holds``.
    """
    notes = []
    checked = 0
    for name, k in signature.functions.items():
        for t in itertools.islice(itertools.product(pts, repeat=k), max_tuples):
            try:
                lhs = hfun(sa.apply(name, t))
                rhs = sb.apply(name, [hfun(u) for u in t])
                same = equal_points(lhs, rhs)
            except PrecisionError as e:
                notes.append((name, t, e.modulus))
                continue
            checked += 1
            if not same:
                return Verdict(False, "exact", (name, t), notes, checked)
    for name, k in signature.relations.items():
        for t in itertools.islice(itertools.product(pts, repeat=k), max_tuples):
            try:
                ok = not sa.holds(name, t) or sb.holds(name, [hfun(u) for u in t])
            except PrecisionError as e:
                notes.append((name, t, e.modulus))
                continue
            checked += 1
            if not ok:
                return Verdict(False, "exact", (name, t), notes, checked)
    return Verdict(True, label, None, notes, checked)


def check_hom(
    h,
    a: Model,
    b: Model,
    mode: str = "tilde",
    sample: Sequence[UPoint] | None = None,
) -> Verdict:
    """Is the extension of ``h`` a homomorphism between the mode-extensions?

    Finite models are checked on every tuple of ultrafilters (all principal).
    Symbolic models are checked at the sample points only.
    """
    if a.signature != b.signature:
        raise ValueError("models have different signatures")
    if a.finite:
        pts = [Principal(x) for x in range(a.universe.size)]
        label = "exact"
    else:
        pts = list(sample) if sample is not None else sample_points()
        label = "consistent-with-sample"
    return hom_verdict(
        lambda u: _map_point(h, u),
        extend_model(a, mode),
        extend_model(b, mode),
        a.signature,
        pts,
        label,
    )
