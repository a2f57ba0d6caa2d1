"""The ultrafilter quantifier as an effective set-to-set operator.

``forall_u(u, A, i)`` eliminates coordinate ``i`` of ``A``: the result
holds at ``y`` iff the section of ``A`` at ``y`` belongs to ``u``.  For a
tail point this is a per-cell limit analysis, so the symbolic algebra is
closed under these quantifiers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ArityMismatch, BackendMismatch, PrecisionError
from .points import Limit, Principal, UPoint
from .set_algebra import (
    Cell,
    FiniteSet,
    SymbolicSet,
    complement,
    difference,
    is_empty,
    make_cell,
    section,
)


@dataclass(frozen=True)
class QuantPrefix:
    """``[(pos, u), ...]``; the first entry is the outermost quantifier."""

    entries: tuple[tuple[int, UPoint], ...]

    def __post_init__(self):
        pos = [p for p, _ in self.entries]
        if len(set(pos)) != len(pos):
            raise ValueError(f"repeated positions in prefix {pos}")

    @classmethod
    def positional(cls, points: Iterable[UPoint]) -> QuantPrefix:
        return cls(tuple(enumerate(points)))

    def __len__(self) -> int:
        return len(self.entries)


def _tail_cell(cell: Cell, u: Limit, i: int) -> tuple[Cell | None, int]:
    """Limit of one cell along ``u`` in coordinate ``i``.

    Returns ``(cell over the other coordinates or None, needed modulus)``;
    a needed modulus other than 1 means some congruence reads ``x_i`` more
    finely than ``u`` knows it.
    """
    k = cell.arity
    ineqs = []
    for a in cell.ineqs:
        c = a.coeffs[i]
        if c < 0:
            return None, 1
        if c == 0:
            ineqs.append((a.coeffs[:i] + a.coeffs[i + 1 :], a.const))
    congs = []
    need = 1
    for g in cell.congs:
        a = g.coeffs[i]
        rest = g.coeffs[:i] + g.coeffs[i + 1 :]
        if a == 0:
            congs.append((rest, g.residue, g.modulus))
            continue
        m_eff = g.modulus // math.gcd(a, g.modulus)
        if u.modulus % m_eff:
            need = math.lcm(need, m_eff)
        congs.append((rest, g.residue - a * u.residue, g.modulus))
    if need > 1:
        return make_cell(k - 1, ineqs), need
    return make_cell(k - 1, ineqs, congs), 1


def _extensionally_equal(a: SymbolicSet, b: SymbolicSet) -> bool:
    return is_empty(difference(a, b)) and is_empty(difference(b, a))


def forall_u(u: UPoint, a, i: int):
    """``{y : section(a, i, .) at y belongs to u}`` (``i`` is 0-based)."""
    if not 0 <= i < a.arity:
        raise ArityMismatch(f"position {i} outside arity {a.arity}")
    if isinstance(u, Principal):
        return section(a, i, u.value)
    if isinstance(a, FiniteSet):
        raise BackendMismatch("tail points do not exist on a finite universe")
    k = a.arity
    cells = []
    need = 1
    for cell in a.cells:
        c, n = _tail_cell(cell, u, i)
        # a dead cell cannot make the result depend on the finer residue
        if n > 1 and c is not None:
            need = math.lcm(need, n)
        cells.append(c)
    if need == 1:
        return SymbolicSet.from_cells(k - 1, cells)
    fine = math.lcm(u.modulus, need)
    parts = [forall_u(v, a, i) for v in u.lifts(fine)]
    first = parts[0]
    if all(_extensionally_equal(first, p) for p in parts[1:]):
        return first
    raise PrecisionError(fine, "quantified set distinguishes lifts of the residue")


def exists_u(u: UPoint, a, i: int):
    return complement(forall_u(u, complement(a), i))


def _as_prefix(prefix) -> QuantPrefix:
    if isinstance(prefix, QuantPrefix):
        return prefix
    items = list(prefix)
    if items and isinstance(items[0], (Principal, Limit)):
        return QuantPrefix.positional(items)
    return QuantPrefix(tuple((int(p), u) for p, u in items))


def eval_prefix(prefix, a) -> bool:
    """Truth of the nested quantifier prefix applied to ``a``.

    The first prefix entry is outermost, so the last one is eliminated
    first.
    """
    prefix = _as_prefix(prefix)
    if sorted(p for p, _ in prefix.entries) != list(range(a.arity)):
        raise ArityMismatch(f"prefix {prefix.entries} does not cover arity {a.arity}")
    live = list(range(a.arity))
    cur = a
    for pos, u in reversed(prefix.entries):
        idx = live.index(pos)
        cur = forall_u(u, cur, idx)
        live.pop(idx)
    if isinstance(cur, FiniteSet):
        return bool(cur.members)
    return bool(cur.cells)
