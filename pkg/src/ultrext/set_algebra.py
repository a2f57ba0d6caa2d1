"""Boolean algebra of representable subsets of N^k.

Two backends share one functional surface:

* ``SymbolicSet`` -- quantifier-free linear arithmetic over the naturals,
  a finite union of :class:`Cell` conjunctions of inequalities
  ``a.x + c >= 0`` and congruences ``a.x = r (mod m)``.
* ``FiniteSet`` -- an explicit membership table over ``universe^k``.

Values are immutable.  Set equality is always extensional; two different
cell lists may denote the same set.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import ArityMismatch, BackendMismatch

__all__ = [
    "Affine",
    "Cell",
    "Cong",
    "DefinableSet",
    "FiniteSet",
    "FiniteUniverse",
    "Ineq",
    "PeriodProfile",
    "SymbolicSet",
    "complement",
    "difference",
    "full",
    "empty",
    "intersect",
    "is_empty",
    "make_cell",
    "member_mask",
    "membership",
    "period_profile",
    "pullback",
    "section",
    "union",
    "witness",
    "witness_bound",
]


# ---------------------------------------------------------------------------
# atoms


@dataclass(frozen=True, order=True)
class Ineq:
    """``coeffs . x + const >= 0``."""

    coeffs: tuple[int, ...]
    const: int

    def value(self, point: Sequence[int]) -> int:
        return sum(a * x for a, x in zip(self.coeffs, point)) + self.const

    def holds(self, point: Sequence[int]) -> bool:
        return self.value(point) >= 0

    def negate(self) -> Ineq:
        return Ineq(tuple(-a for a in self.coeffs), -self.const - 1)


@dataclass(frozen=True, order=True)
class Cong:
    """``coeffs . x = residue (mod modulus)``."""

    coeffs: tuple[int, ...]
    residue: int
    modulus: int

    def holds(self, point: Sequence[int]) -> bool:
        s = sum(a * x for a, x in zip(self.coeffs, point))
        return (s - self.residue) % self.modulus == 0

    def negations(self) -> list[Cong]:
        return [
            Cong(self.coeffs, r, self.modulus)
            for r in range(self.modulus)
            if r != self.residue
        ]


def _norm_ineq(coeffs: Sequence[int], const: int) -> Ineq | bool:
    coeffs = tuple(int(a) for a in coeffs)
    const = int(const)
    g = math.gcd(*coeffs) if coeffs else 0
    if g == 0:
        return const >= 0
    # a.x >= -c with g | a  <=>  (a/g).x >= ceil(-c/g)
    return Ineq(tuple(a // g for a in coeffs), const // g)


def _norm_cong(coeffs: Sequence[int], residue: int, modulus: int) -> Cong | bool:
    if modulus < 1:
        raise ValueError(f"modulus must be positive, got {modulus}")
    m = int(modulus)
    coeffs = tuple(int(a) % m for a in coeffs)
    r = int(residue) % m
    h = math.gcd(m, *coeffs)
    if r % h:
        return False
    if h == m:
        return True
    if h > 1:
        coeffs = tuple(a // h for a in coeffs)
        r //= h
        m //= h
    return Cong(coeffs, r, m)


# ---------------------------------------------------------------------------
# cells


@dataclass(frozen=True)
class Cell:
    """A conjunction of normalized atoms over ``arity`` variables.

    Build through :func:`make_cell`, which normalizes atoms and returns
    ``None`` for syntactically contradictory conjunctions.
    """

    arity: int
    ineqs: tuple[Ineq, ...] = ()
    congs: tuple[Cong, ...] = ()

    def __post_init__(self):
        for atom in self.ineqs:
            if len(atom.coeffs) != self.arity:
                raise ArityMismatch(f"inequality {atom} in cell of arity {self.arity}")
        for atom in self.congs:
            if len(atom.coeffs) != self.arity:
                raise ArityMismatch(f"congruence {atom} in cell of arity {self.arity}")
            if atom.modulus < 2 or not 0 <= atom.residue < atom.modulus:
                raise ValueError(f"congruence {atom} not normalized")

    def holds(self, point: Sequence[int]) -> bool:
        return all(a.holds(point) for a in self.ineqs) and all(
            c.holds(point) for c in self.congs
        )

    @property
    def atoms(self) -> frozenset:
        return frozenset(self.ineqs) | frozenset(self.congs)

    @property
    def moduli(self) -> list[int]:
        return [c.modulus for c in self.congs]


def make_cell(
    arity: int,
    ineqs: Iterable = (),
    congs: Iterable = (),
) -> Cell | None:
    """Normalize and conjoin atoms.

    ``ineqs`` items are ``Ineq`` or ``(coeffs, const)`` or
    ``(coeffs, const, rel)`` with ``rel`` in ``{">=", ">"}``;
    ``congs`` items are ``Cong`` or ``(coeffs, residue, modulus)``.
    """
    out_i: set[Ineq] = set()
    out_c: set[Cong] = set()
    for item in ineqs:
        if isinstance(item, Ineq):
            coeffs, const = item.coeffs, item.const
        elif len(item) == 2:
            coeffs, const = item
        else:
            coeffs, const, rel = item
            if rel == ">":
                const = const - 1
            elif rel != ">=":
                raise ValueError(f"unknown relation {rel!r}")
        if len(coeffs) != arity:
            raise ArityMismatch(f"coefficients {coeffs} for arity {arity}")
        n = _norm_ineq(coeffs, const)
        if n is False:
            return None
        if n is not True:
            out_i.add(n)
    for item in congs:
        if isinstance(item, Cong):
            coeffs, residue, modulus = item.coeffs, item.residue, item.modulus
        else:
            coeffs, residue, modulus = item
        if len(coeffs) != arity:
            raise ArityMismatch(f"coefficients {coeffs} for arity {arity}")
        n = _norm_cong(coeffs, residue, modulus)
        if n is False:
            return None
        if n is not True:
            out_c.add(n)
    # two congruences on the same form and modulus with different residues
    seen: dict = {}
    for c in out_c:
        key = (c.coeffs, c.modulus)
        if key in seen and seen[key] != c.residue:
            return None
        seen[key] = c.residue
    cell = Cell(arity, tuple(sorted(out_i)), tuple(sorted(out_c)))
    if _obviously_empty(cell):
        return None
    return cell


def _obviously_empty(cell: Cell) -> bool:
    """Cheap contradiction check on single-variable atoms."""
    lo = [0] * cell.arity
    hi: list[int | None] = [None] * cell.arity
    for a in cell.ineqs:
        nz = [i for i, c in enumerate(a.coeffs) if c]
        if len(nz) != 1:
            continue
        i = nz[0]
        c = a.coeffs[i]
        if c > 0:
            lo[i] = max(lo[i], -((a.const) // c))  # ceil(-const / c)
        else:
            bound = a.const // (-c)
            hi[i] = bound if hi[i] is None else min(hi[i], bound)
    for i in range(cell.arity):
        if hi[i] is not None and hi[i] < lo[i]:
            return True
    return False


# ---------------------------------------------------------------------------
# sets


@dataclass(frozen=True)
class SymbolicSet:
    """A subset of N^k given as a union of cells; no cells means empty."""

    arity: int
    cells: tuple[Cell, ...] = ()

    def __post_init__(self):
        for c in self.cells:
            if c.arity != self.arity:
                raise ArityMismatch(f"cell of arity {c.arity} in set of arity {self.arity}")

    @classmethod
    def from_cells(cls, arity: int, cells: Iterable[Cell | None]) -> SymbolicSet:
        return cls(arity, _prune(c for c in cells if c is not None))

    @classmethod
    def full(cls, arity: int) -> SymbolicSet:
        return cls(arity, (Cell(arity),))

    @classmethod
    def empty(cls, arity: int) -> SymbolicSet:
        return cls(arity, ())

    @classmethod
    def of(cls, arity: int, ineqs: Iterable = (), congs: Iterable = ()) -> SymbolicSet:
        """Single-cell set from raw atoms (see :func:`make_cell`)."""
        return cls.from_cells(arity, [make_cell(arity, ineqs, congs)])

    def __contains__(self, point) -> bool:
        return membership(tuple(point), self)

    @property
    def moduli(self) -> list[int]:
        return [m for c in self.cells for m in c.moduli]

    def __repr__(self) -> str:
        from .render import format_set

        return f"SymbolicSet({format_set(self)})"


def _prune(cells: Iterable[Cell]) -> tuple[Cell, ...]:
    uniq = list(dict.fromkeys(cells))
    if len(uniq) > 400:
        return tuple(uniq)
    uniq.sort(key=lambda c: len(c.ineqs) + len(c.congs))
    kept: list[Cell] = []
    kept_atoms: list[frozenset] = []
    for c in uniq:
        atoms = c.atoms
        # a cell whose atoms include all atoms of a kept cell is contained in it
        if any(k <= atoms for k in kept_atoms):
            continue
        kept.append(c)
        kept_atoms.append(atoms)
    return tuple(kept)


@dataclass(frozen=True)
class FiniteUniverse:
    elements: tuple[str, ...]

    def __post_init__(self):
        if len(self.elements) < 1:
            raise ValueError("a universe needs at least one element")
        if len(set(self.elements)) != len(self.elements):
            raise ValueError("universe labels must be distinct")

    @classmethod
    def of_size(cls, n: int) -> FiniteUniverse:
        return cls(tuple(str(i) for i in range(n)))

    @property
    def size(self) -> int:
        return len(self.elements)

    def tuples(self, arity: int) -> Iterable[tuple[int, ...]]:
        return itertools.product(range(self.size), repeat=arity)


@dataclass(frozen=True)
class FiniteSet:
    """Explicit relation on a finite universe; elements are indices."""

    universe: FiniteUniverse
    arity: int
    members: frozenset = frozenset()

    def __post_init__(self):
        n = self.universe.size
        for t in self.members:
            if len(t) != self.arity or not all(0 <= x < n for x in t):
                raise ValueError(f"tuple {t} outside universe^{self.arity}")

    @classmethod
    def full(cls, universe: FiniteUniverse, arity: int) -> FiniteSet:
        return cls(universe, arity, frozenset(universe.tuples(arity)))

    @classmethod
    def empty(cls, universe: FiniteUniverse, arity: int) -> FiniteSet:
        return cls(universe, arity, frozenset())

    def __contains__(self, point) -> bool:
        return tuple(point) in self.members


DefinableSet = Union[SymbolicSet, FiniteSet]


def full(like: DefinableSet, arity: int | None = None) -> DefinableSet:
    k = like.arity if arity is None else arity
    if isinstance(like, FiniteSet):
        return FiniteSet.full(like.universe, k)
    return SymbolicSet.full(k)


def empty(like: DefinableSet, arity: int | None = None) -> DefinableSet:
    k = like.arity if arity is None else arity
    if isinstance(like, FiniteSet):
        return FiniteSet.empty(like.universe, k)
    return SymbolicSet.empty(k)


def _check_pair(a: DefinableSet, b: DefinableSet) -> None:
    if type(a) is not type(b):
        raise BackendMismatch(f"cannot combine {type(a).__name__} with {type(b).__name__}")
    if a.arity != b.arity:
        raise ArityMismatch(f"arity {a.arity} vs {b.arity}")
    if isinstance(a, FiniteSet) and a.universe != b.universe:
        raise BackendMismatch("finite sets over different universes")


def _conj(c1: Cell, c2: Cell) -> Cell | None:
    return make_cell(c1.arity, c1.ineqs + c2.ineqs, c1.congs + c2.congs)


def union(a: DefinableSet, b: DefinableSet) -> DefinableSet:
    _check_pair(a, b)
    if isinstance(a, FiniteSet):
        return FiniteSet(a.universe, a.arity, a.members | b.members)
    return SymbolicSet.from_cells(a.arity, a.cells + b.cells)


def intersect(a: DefinableSet, b: DefinableSet) -> DefinableSet:
    _check_pair(a, b)
    if isinstance(a, FiniteSet):
        return FiniteSet(a.universe, a.arity, a.members & b.members)
    return SymbolicSet.from_cells(a.arity, (_conj(x, y) for x in a.cells for y in b.cells))


def _cell_complement(cell: Cell) -> list[Cell]:
    k = cell.arity
    out: list[Cell | None] = [make_cell(k, [i.negate()]) for i in cell.ineqs]
    for c in cell.congs:
        out.extend(make_cell(k, (), [n]) for n in c.negations())
    return [c for c in out if c is not None]


def complement(a: DefinableSet) -> DefinableSet:
    if isinstance(a, FiniteSet):
        return FiniteSet(
            a.universe, a.arity, frozenset(a.universe.tuples(a.arity)) - a.members
        )
    acc: tuple[Cell, ...] = (Cell(a.arity),)
    for cell in a.cells:
        negs = _cell_complement(cell)
        acc = _prune(c for x in acc for y in negs if (c := _conj(x, y)) is not None)
        if not acc:
            break
    return SymbolicSet(a.arity, acc)


def difference(a: DefinableSet, b: DefinableSet) -> DefinableSet:
    return intersect(a, complement(b))


def membership(point: Sequence[int], a: DefinableSet) -> bool:
    point = tuple(point)
    if len(point) != a.arity:
        raise ArityMismatch(f"point {point} for set of arity {a.arity}")
    if isinstance(a, FiniteSet):
        return point in a.members
    return any(c.holds(point) for c in a.cells)


# ---------------------------------------------------------------------------
# substitution


@dataclass(frozen=True)
class Affine:
    """``coeffs . x + const`` with integer coefficients."""

    coeffs: tuple[int, ...]
    const: int = 0

    @property
    def arity(self) -> int:
        return len(self.coeffs)

    def __call__(self, point: Sequence[int]) -> int:
        return sum(a * x for a, x in zip(self.coeffs, point)) + self.const

    @classmethod
    def var(cls, i: int, arity: int) -> Affine:
        return cls(tuple(1 if j == i else 0 for j in range(arity)), 0)

    @classmethod
    def constant(cls, value: int, arity: int) -> Affine:
        return cls((0,) * arity, value)


def _compose(coeffs: Sequence[int], exprs: Sequence[Affine], arity: int) -> tuple[tuple[int, ...], int]:
    new = [0] * arity
    const = 0
    for a, e in zip(coeffs, exprs):
        if not a:
            continue
        for j, b in enumerate(e.coeffs):
            new[j] += a * b
        const += a * e.const
    return tuple(new), const


def pullback_cell(cell: Cell, exprs: Sequence[Affine], arity: int) -> Cell | None:
    ineqs = []
    for atom in cell.ineqs:
        co, k = _compose(atom.coeffs, exprs, arity)
        ineqs.append((co, k + atom.const))
    congs = []
    for atom in cell.congs:
        co, k = _compose(atom.coeffs, exprs, arity)
        congs.append((co, atom.residue - k, atom.modulus))
    return make_cell(arity, ineqs, congs)


def pullback(a: SymbolicSet, exprs: Sequence[Affine], arity: int) -> SymbolicSet:
    """``{y in N^arity : (exprs[0](y), ..., exprs[k-1](y)) in a}``."""
    if len(exprs) != a.arity:
        raise ArityMismatch(f"{len(exprs)} expressions for a set of arity {a.arity}")
    for e in exprs:
        if e.arity != arity:
            raise ArityMismatch(f"expression {e} is not over {arity} variables")
    return SymbolicSet.from_cells(arity, (pullback_cell(c, exprs, arity) for c in a.cells))


def section(a: DefinableSet, i: int, value: int) -> DefinableSet:
    """Fix coordinate ``i`` (0-based) to ``value``; the result has arity k-1."""
    k = a.arity
    if not 0 <= i < k:
        raise ArityMismatch(f"position {i} outside arity {k}")
    if isinstance(a, FiniteSet):
        rows = frozenset(t[:i] + t[i + 1 :] for t in a.members if t[i] == value)
        return FiniteSet(a.universe, k - 1, rows)
    exprs = []
    for j in range(k):
        if j == i:
            exprs.append(Affine.constant(value, k - 1))
        else:
            exprs.append(Affine.var(j if j < i else j - 1, k - 1))
    return pullback(a, exprs, k - 1)


# ---------------------------------------------------------------------------
# eventual periodicity


@dataclass(frozen=True)
class PeriodProfile:
    """Membership of x >= threshold is ``table[x % period]``."""

    period: int
    threshold: int
    table: tuple[bool, ...]

    def value(self, x: int) -> bool:
        if x < self.threshold:
            raise ValueError(f"{x} below threshold {self.threshold}")
        return self.table[x % self.period]


def _breakpoint(atom: Ineq) -> int:
    a, c = atom.coeffs[0], atom.const
    if a > 0:
        return max(0, -(c // a))  # ceil(-c/a): true from here on
    if a < 0:
        return max(0, c // (-a) + 1)  # false from here on
    return 0


def period_profile(a: SymbolicSet) -> PeriodProfile:
    if not isinstance(a, SymbolicSet) or a.arity != 1:
        raise ArityMismatch("period_profile needs a unary symbolic set")
    p = 1
    t = 0
    for cell in a.cells:
        for c in cell.congs:
            p = math.lcm(p, c.modulus // math.gcd(c.coeffs[0], c.modulus))
        for i in cell.ineqs:
            t = max(t, _breakpoint(i))
    table = []
    for s in range(p):
        x = t + ((s - t) % p)
        table.append(membership((x,), a))
    # shrink to the least period consistent with the table
    for d in sorted(d for d in range(1, p + 1) if p % d == 0):
        if all(table[s] == table[s % d] for s in range(p)):
            return PeriodProfile(d, t, tuple(table[:d]))
    raise AssertionError("unreachable")


# ---------------------------------------------------------------------------
# emptiness


def witness_bound(cell: Cell) -> int:
    """Coordinate bound below which a nonempty cell always has a witness.

    Let ``P = {x in R^k : x >= 0, a_j.x + c_j >= 0}`` and ``L`` the lcm of the
    congruence moduli, ``M = max(1, |a_ji|, |c_j|)`` and ``D = k! * M^k``.

    * Every vertex of ``P`` solves a nonsingular k x k subsystem, so by
      Cramer's rule and the Leibniz expansion its coordinates are <= D.
    * The recession cone ``{d >= 0 : a_j.d >= 0}`` is generated by integer
      rays whose entries are (k-1)-minors, again <= D.
    * Write an integer solution as ``q + sum(l_i g_i)`` with ``q`` in the
      convex hull of the vertices and (Caratheodory) at most k rays ``g_i``.
      Subtracting ``L * floor(l_i / L) * g_i`` keeps the point inside ``P``
      and in the same residue class mod ``L``.

    The reduced witness has coordinates ``<= D + k * L * D``.  The bound is
    ``B = D * (1 + k * L)``.
    """
    k = cell.arity
    if k == 0:
        return 0
    m = 1
    for a in cell.ineqs:
        m = max(m, max(abs(x) for x in a.coeffs), abs(a.const))
    lcm = math.lcm(*cell.moduli) if cell.congs else 1
    d = math.factorial(k) * m**k
    return d * (1 + k * lcm)


def is_empty(a: DefinableSet) -> bool:
    return witness(a) is None


def witness(a: DefinableSet) -> tuple[int, ...] | None:
    """A member of ``a``, or None when ``a`` is empty.

    Symbolic cells are decided exactly by eliminating one variable at a time
    with the least-solution argument (Cooper): after scaling the variable's
    coefficients to a common ``delta`` and substituting ``x' = delta*x``, a
    least solution lies within one congruence period ``D`` above some lower
    bound, so ``exists x'`` becomes a finite disjunction of substitutions
    ``x' := L_i(y) + j`` with ``0 <= j < D`` (or symmetrically below an upper
    bound).  The returned witness is reconstructed by back-substitution and
    always satisfies the set.  :func:`witness_bound` gives the coordinate
    bound used by the exhaustive-search cross-check.
    """
    if isinstance(a, FiniteSet):
        return min(a.members) if a.members else None
    for cell in a.cells:
        w = _cell_witness(cell)
        if w is not None:
            return w
    return None


def _cell_witness(cell: Cell) -> tuple[int, ...] | None:
    k = cell.arity
    # cheap probe of a small box first
    box = 4 if k <= 3 else 2
    for p in itertools.product(range(box + 1), repeat=k):
        if cell.holds(p):
            return p
    ineqs = [(i.coeffs, i.const) for i in cell.ineqs]
    congs = [(c.coeffs, c.residue, c.modulus) for c in cell.congs]
    w = _solve(ineqs, congs, k, {})
    if w is not None:
        assert cell.holds(w), (cell, w)
    return w


def _normalize_system(ineqs, congs):
    out_i, out_c = set(), set()
    for co, c in ineqs:
        n = _norm_ineq(co, c)
        if n is False:
            return None
        if n is not True:
            out_i.add((n.coeffs, n.const))
    for co, r, m in congs:
        n = _norm_cong(co, r, m)
        if n is False:
            return None
        if n is not True:
            out_c.add((n.coeffs, n.residue, n.modulus))
    return frozenset(out_i), frozenset(out_c)


def _elim_plan(v, ineqs, congs):
    lower = 1  # x >= 0
    upper = 0
    delta = 1
    for co, _ in ineqs:
        a = co[v]
        if a > 0:
            lower += 1
        elif a < 0:
            upper += 1
        if a:
            delta = math.lcm(delta, abs(a))
    cong_mods = []
    for co, _, m in congs:
        a = co[v]
        if a:
            delta = math.lcm(delta, a)
            cong_mods.append(m)
    d = delta
    for co, _, m in congs:
        a = co[v]
        if a:
            d = math.lcm(d, (delta // a) * m)
    involved = upper + lower - 1 + len(cong_mods)
    if involved == 0:
        return 0, delta, d
    cost = d if upper == 0 else min(lower, upper) * d
    return cost, delta, d


def _solve(ineqs, congs, k, memo) -> tuple[int, ...] | None:
    norm = _normalize_system(ineqs, congs)
    if norm is None:
        return None
    ineqs, congs = norm
    if k == 0:
        return ()
    key = (ineqs, congs, k)
    if key in memo:
        return memo[key]
    memo[key] = None

    plans = [(_elim_plan(v, ineqs, congs), v) for v in range(k)]
    (cost, delta, dmod), v = min(plans)

    def drop(co):
        return co[:v] + co[v + 1 :]

    def lift(y, xv):
        return y[:v] + (xv,) + y[v:]

    rest_i = [(drop(co), c) for co, c in ineqs if co[v] == 0]
    rest_c = [(drop(co), r, m) for co, r, m in congs if co[v] == 0]
    if cost == 0:
        y = _solve(rest_i, rest_c, k - 1, memo)
        result = None if y is None else lift(y, 0)
        memo[key] = result
        return result

    # scaled atoms: sign * x' + rest . y + const >= 0 ; x' + rest . y = r (mod m)
    lows, ups = [((0,) * (k - 1), 0)], []  # x' >= 0
    xcongs = []
    for co, c in ineqs:
        a = co[v]
        if not a:
            continue
        f = delta // abs(a)
        rest = tuple(f * b for b in drop(co))
        if a > 0:
            lows.append((tuple(-b for b in rest), -f * c))  # x' >= -(rest.y + c)
        else:
            ups.append((rest, f * c))  # x' <= rest.y + c
    for co, r, m in congs:
        a = co[v]
        if not a:
            continue
        f = delta // a
        xcongs.append((tuple(f * b for b in drop(co)), f * r, f * m))
    if delta > 1:
        xcongs.append(((0,) * (k - 1), 0, delta))

    def substituted(expr_co, expr_c):
        """Atoms after x' := expr_co . y + expr_c."""
        si = list(rest_i)
        for lco, lc in lows:
            # x' - L >= 0
            si.append((tuple(e - b for e, b in zip(expr_co, lco)), expr_c - lc))
        for uco, uc in ups:
            si.append((tuple(b - e for e, b in zip(expr_co, uco)), uc - expr_c))
        sc = list(rest_c)
        for rco, r, m in xcongs:
            sc.append((tuple(e + b for e, b in zip(expr_co, rco)), r - expr_c, m))
        return si, sc

    def finish(y, xprime):
        assert xprime % delta == 0
        return lift(y, xprime // delta)

    if not ups:
        # x' unbounded above: only the congruences constrain it
        for j in range(dmod):
            sc = list(rest_c)
            for rco, r, m in xcongs:
                sc.append((rco, r - j, m))
            y = _solve(rest_i, sc, k - 1, memo)
            if y is not None:
                floor_ = max(
                    sum(a * b for a, b in zip(lco, y)) + lc for lco, lc in lows
                )
                xprime = floor_ + ((j - floor_) % dmod)
                result = finish(y, xprime)
                memo[key] = result
                return result
        return None

    if len(lows) <= len(ups):
        cands = [(lco, lc + j) for lco, lc in lows for j in range(dmod)]
    else:
        cands = [(uco, uc - j) for uco, uc in ups for j in range(dmod)]
    for eco, ec in cands:
        si, sc = substituted(eco, ec)
        y = _solve(si, sc, k - 1, memo)
        if y is not None:
            xprime = sum(a * b for a, b in zip(eco, y)) + ec
            result = finish(y, xprime)
            memo[key] = result
            return result
    return None


# ---------------------------------------------------------------------------
# vectorized membership (sampling oracles)


_INT64_SAFE = 2**62


def member_mask(a: DefinableSet, points: np.ndarray) -> np.ndarray:
    """Membership of every row of ``points`` (shape ``(n, arity)``)."""
    pts = np.asarray(points)
    if pts.ndim != 2 or pts.shape[1] != a.arity:
        raise ArityMismatch(f"points of shape {pts.shape} for arity {a.arity}")
    n = pts.shape[0]
    if isinstance(a, FiniteSet):
        return np.fromiter((tuple(int(v) for v in row) in a.members for row in pts), bool, n)
    if a.arity == 0:
        return np.full(n, bool(a.cells))
    big = int(np.abs(pts).max()) if n else 0
    worst = 0
    for c in a.cells:
        for atom in c.ineqs + c.congs:
            const = atom.const if isinstance(atom, Ineq) else atom.residue
            worst = max(worst, big * sum(abs(x) for x in atom.coeffs) + abs(const))
    if worst >= _INT64_SAFE:
        pts = pts.astype(object)
    else:
        pts = pts.astype(np.int64)
    out = np.zeros(n, dtype=bool)
    for c in a.cells:
        m = np.ones(n, dtype=bool)
        for atom in c.ineqs:
            m &= pts @ np.array(atom.coeffs, dtype=pts.dtype) + atom.const >= 0
        for atom in c.congs:
            m &= (pts @ np.array(atom.coeffs, dtype=pts.dtype) - atom.residue) % atom.modulus == 0
        out |= m
    return out


def grid(arity: int, bound: int) -> np.ndarray:
    """All points of ``{0..bound}^arity`` as rows."""
    if arity == 0:
        return np.zeros((1, 0), dtype=np.int64)
    axes = np.meshgrid(*([np.arange(bound + 1)] * arity), indexing="ij")
    return np.stack([ax.ravel() for ax in axes], axis=1).astype(np.int64)
