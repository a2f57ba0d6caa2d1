"""Total operations: piecewise-affine maps N^n -> N and finite tables."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .errors import ArityMismatch, TotalityError
from .set_algebra import (
    Affine,
    Cell,
    FiniteUniverse,
    SymbolicSet,
    complement,
    is_empty,
    make_cell,
    witness,
)


@dataclass(frozen=True)
class Branch:
    guard: Cell
    expr: Affine


@dataclass(frozen=True)
class AffineOp:
    """A definable operation: on each guard cell, an affine expression.

    Construction certifies totality with exact emptiness checks: the guards
    cover N^n, each branch is nonnegative on its guard, and overlapping
    guards agree.
    """

    arity: int
    branches: tuple[Branch, ...]

    def __post_init__(self):
        for b in self.branches:
            if b.guard.arity != self.arity or b.expr.arity != self.arity:
                raise ArityMismatch(f"branch {b} in operation of arity {self.arity}")
        _certify(self)

    @classmethod
    def affine(cls, coeffs: Sequence[int], const: int = 0) -> AffineOp:
        n = len(coeffs)
        return cls(n, (Branch(Cell(n), Affine(tuple(coeffs), const)),))

    @classmethod
    def piecewise(cls, arity: int, pieces: Iterable[tuple]) -> AffineOp:
        """``pieces`` are ``(guard, expr)``; a guard may be a Cell or a SymbolicSet."""
        branches = []
        for guard, expr in pieces:
            if not isinstance(expr, Affine):
                expr = Affine(tuple(expr[0]), expr[1])
            cells = guard.cells if isinstance(guard, SymbolicSet) else (guard,)
            branches.extend(Branch(c, expr) for c in cells)
        return cls(arity, tuple(branches))

    def __call__(self, *point: int) -> int:
        if len(point) == 1 and isinstance(point[0], tuple):
            point = point[0]
        if len(point) != self.arity:
            raise ArityMismatch(f"{len(point)} arguments for arity {self.arity}")
        for b in self.branches:
            if b.guard.holds(point):
                return b.expr(point)
        raise TotalityError(f"no branch covers {point}")


@lru_cache(maxsize=4096)
def _certify(op: AffineOp) -> None:
    n = op.arity
    guards = SymbolicSet.from_cells(n, (b.guard for b in op.branches))
    gap = witness(complement(guards))
    if gap is not None:
        raise TotalityError(f"guards do not cover {gap}")
    for b in op.branches:
        neg = make_cell(
            n,
            b.guard.ineqs + ((tuple(-a for a in b.expr.coeffs), -b.expr.const - 1),),
            b.guard.congs,
        )
        if neg is not None and not is_empty(SymbolicSet(n, (neg,))):
            raise TotalityError(f"branch {b.expr} goes negative on its guard")
    for b1, b2 in itertools.combinations(op.branches, 2):
        if b1.expr == b2.expr:
            continue
        diff = tuple(p - q for p, q in zip(b1.expr.coeffs, b2.expr.coeffs))
        dc = b1.expr.const - b2.expr.const
        for co, c in ((diff, dc - 1), (tuple(-x for x in diff), -dc - 1)):
            clash = make_cell(
                n, b1.guard.ineqs + b2.guard.ineqs + ((co, c),), b1.guard.congs + b2.guard.congs
            )
            if clash is not None and not is_empty(SymbolicSet(n, (clash,))):
                raise TotalityError("overlapping guards disagree")


def plus() -> AffineOp:
    return AffineOp.affine((1, 1))


def monus() -> AffineOp:
    """``x - y`` if ``x >= y`` else 0."""
    ge = make_cell(2, [((1, -1), 0)])
    lt = make_cell(2, [((-1, 1), -1)])
    return AffineOp.piecewise(2, [(ge, Affine((1, -1), 0)), (lt, Affine((0, 0), 0))])


@dataclass(frozen=True)
class FiniteOp:
    """An operation on a finite universe, tabulated in lexicographic order."""

    universe: FiniteUniverse
    arity: int
    table: tuple[int, ...]

    def __post_init__(self):
        n = self.universe.size
        if len(self.table) != n**self.arity:
            raise ArityMismatch(f"table of length {len(self.table)} for {n}^{self.arity} inputs")
        if not all(0 <= v < n for v in self.table):
            raise TotalityError("table value outside the universe")

    @classmethod
    def from_function(cls, universe: FiniteUniverse, arity: int, fn: Callable) -> FiniteOp:
        return cls(universe, arity, tuple(fn(*t) for t in universe.tuples(arity)))

    def _index(self, point: Sequence[int]) -> int:
        idx = 0
        for x in point:
            idx = idx * self.universe.size + x
        return idx

    def __call__(self, *point: int) -> int:
        if len(point) == 1 and isinstance(point[0], tuple):
            point = point[0]
        if len(point) != self.arity:
            raise ArityMismatch(f"{len(point)} arguments for arity {self.arity}")
        return self.table[self._index(point)]


@dataclass(frozen=True)
class FiniteMap:
    """A map between two finite universes (used for homomorphisms)."""

    src: FiniteUniverse
    dst: FiniteUniverse
    table: tuple[int, ...]

    def __post_init__(self):
        if len(self.table) != self.src.size or not all(0 <= v < self.dst.size for v in self.table):
            raise TotalityError("map table does not fit its universes")

    def __call__(self, x: int) -> int:
        return self.table[x]

    @classmethod
    def all_maps(cls, src: FiniteUniverse, dst: FiniteUniverse) -> list[FiniteMap]:
        return [cls(src, dst, t) for t in itertools.product(range(dst.size), repeat=src.size)]


DefOp = AffineOp | FiniteOp
