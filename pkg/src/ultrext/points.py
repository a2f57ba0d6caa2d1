"""Representable ultrafilters: principal points and tail-limit points.

``Limit(r, M)`` stands for a non-principal ultrafilter concentrated on the
progression ``{x >= t : x = r (mod M)}`` for every ``t``.  It decides
exactly the sets whose tail is constant along every lift of ``r mod M``
to a finer modulus; anything else raises :class:`PrecisionError` rather
than being guessed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .defop import AffineOp, FiniteMap, FiniteOp
from .errors import ArityMismatch, BackendMismatch, PrecisionError, TotalityError
from .set_algebra import FiniteSet, SymbolicSet, membership, period_profile


@dataclass(frozen=True)
class Principal:
    value: int

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("principal points live in N")

    def __repr__(self) -> str:
        return f"pt({self.value})"


@dataclass(frozen=True)
class Limit:
    residue: int
    modulus: int = 1

    def __post_init__(self):
        if self.modulus < 1 or not 0 <= self.residue < self.modulus:
            raise ValueError(f"bad tail point lim({self.residue} mod {self.modulus})")

    def __repr__(self) -> str:
        return f"lim({self.residue} mod {self.modulus})"

    def lifts(self, modulus: int) -> list[Limit]:
        """All refinements of this point to ``modulus`` (a multiple of M)."""
        if modulus % self.modulus:
            raise ValueError(f"{modulus} is not a multiple of {self.modulus}")
        return [Limit(self.residue + self.modulus * j, modulus) for j in range(modulus // self.modulus)]


UPoint = Union[Principal, Limit]

LIM_INF = Limit(0, 1)


def in_ultrafilter(a, u: UPoint) -> bool:
    """Decide ``a in u`` for a unary set ``a``."""
    if a.arity != 1:
        raise ArityMismatch("ultrafilter membership needs a unary set")
    if isinstance(u, Principal):
        return membership((u.value,), a)
    if isinstance(a, FiniteSet):
        raise BackendMismatch("tail points do not exist on a finite universe")
    prof = period_profile(a)
    lcm = math.lcm(u.modulus, prof.period)
    verdicts = {prof.table[s.residue % prof.period] for s in u.lifts(lcm)}
    if len(verdicts) > 1:
        raise PrecisionError(lcm, "set distinguishes lifts of the residue")
    return verdicts.pop()


def _active_branch(op: AffineOp, decide) -> "Branch":
    errors = []
    for b in op.branches:
        try:
            if decide(SymbolicSet(op.arity, (b.guard,))):
                return b
        except PrecisionError as e:
            errors.append(e.modulus)
    if errors:
        raise PrecisionError(math.lcm(*errors), "branch guards oscillate")
    raise TotalityError("no branch is eventually active")


def pushforward(h, u: UPoint) -> UPoint:
    """Image of ``u`` under a unary operation (its continuous extension).

    On a tail point the eventually active branch ``a*x + b`` decides: a
    constant branch gives ``pt(b)``, otherwise the image is the tail point
    ``lim((a*r + b) mod M)``.  The modulus stays M: the image is only
    resolved as finely as the input.
    """
    if isinstance(u, Principal):
        if isinstance(h, (FiniteOp, FiniteMap)):
            return Principal(h(u.value))
        return Principal(h(u.value))
    if not isinstance(h, AffineOp):
        raise BackendMismatch("tail points need a symbolic operation")
    if h.arity != 1:
        raise ArityMismatch("pushforward needs a unary operation")
    b = _active_branch(h, lambda s: in_ultrafilter(s, u))
    a, c = b.expr.coeffs[0], b.expr.const
    if a == 0:
        return Principal(c)
    if a < 0:
        raise TotalityError("eventually active branch has negative slope")
    return Limit((a * u.residue + c) % u.modulus, u.modulus)


def refine(u: Limit, modulus: int, residue: int) -> Limit:
    if not isinstance(u, Limit):
        raise TypeError("only tail points can be refined")
    if modulus % u.modulus:
        raise ValueError(f"{modulus} is not a multiple of {u.modulus}")
    if not 0 <= residue < modulus or residue % u.modulus != u.residue:
        raise ValueError(f"residue {residue} mod {modulus} does not lift {u}")
    return Limit(residue, modulus)


def equal_points(u: UPoint, v: UPoint) -> bool:
    if isinstance(u, Principal) and isinstance(v, Principal):
        return u.value == v.value
    if isinstance(u, Principal) or isinstance(v, Principal):
        return False
    g = math.gcd(u.modulus, v.modulus)
    if u.residue % g != v.residue % g:
        return False
    if u.modulus == v.modulus:
        return u.residue == v.residue
    raise PrecisionError(math.lcm(u.modulus, v.modulus), "points compared at different moduli")
