"""Brute-force and truncation oracles, independent of the symbolic engine.

The oracles only share set membership with the main evaluation paths:
tail quantifiers are evaluated by sampling along the generating
progression of a tail point, and finite extensions by enumerating literal
ultrafilter families.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .points import Limit, Principal, UPoint
from .set_algebra import (
    Affine,
    FiniteSet,
    FiniteUniverse,
    Ineq,
    SymbolicSet,
    grid,
    member_mask,
    membership,
    pullback_cell,
)


class _Unstable:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "UNSTABLE"

    def __bool__(self) -> bool:
        raise TypeError("an unstable oracle verdict has no truth value")


UNSTABLE = _Unstable()


@dataclass(frozen=True)
class TruncationConfig:
    """``k0`` None means: derive the start from coefficient bounds."""

    k0: int | None = None
    width: int = 100
    bound: int = 50
    seed: int = 0


def _lcm_moduli(a: SymbolicSet) -> int:
    return math.lcm(1, *a.moduli)


def _threshold(a: SymbolicSet, i: int, bound: int) -> int:
    """Every inequality with a nonzero ``x_i`` coefficient has constant truth
    once ``x_i`` exceeds this, for other coordinates in ``[0, bound]``."""
    t = 0
    for cell in a.cells:
        for atom in cell.ineqs:
            if atom.coeffs[i]:
                rest = sum(abs(c) for j, c in enumerate(atom.coeffs) if j != i)
                t = max(t, abs(atom.const) + bound * rest + 1)
    return t


def _window(a: SymbolicSet, u: Limit, i: int, cfg: TruncationConfig) -> np.ndarray:
    t = _threshold(a, i, cfg.bound)
    k0 = cfg.k0 if cfg.k0 is not None else -(-t // u.modulus) + 1
    width = max(cfg.width, 10 * _lcm_moduli(a))
    ks = np.arange(k0, k0 + width + 1, dtype=np.int64)
    return u.residue + u.modulus * ks


def oracle_in_ultrafilter(a, u: UPoint, cfg: TruncationConfig = TruncationConfig()):
    if isinstance(u, Principal):
        return membership((u.value,), a)
    xs = _window(a, u, 0, cfg)
    vals = member_mask(a, xs.reshape(-1, 1))
    if vals.all():
        return True
    if not vals.any():
        return False
    return UNSTABLE


def oracle_forall_u_grid(u: UPoint, a: SymbolicSet, i: int, cfg: TruncationConfig = TruncationConfig()):
    """Sampled verdict at every parameter tuple in ``[0, bound]^(k-1)``.

    Returns ``(params, verdicts)`` with verdicts an object array of
    True / False / UNSTABLE.
    """
    k = a.arity
    params = grid(k - 1, cfg.bound)
    n = params.shape[0]
    if isinstance(u, Principal):
        xs = np.array([u.value], dtype=np.int64)
    else:
        xs = _window(a, u, i, cfg)
    w = xs.shape[0]
    rows = np.empty((n * w, k), dtype=np.int64)
    rows[:, :i] = np.repeat(params[:, :i], w, axis=0)
    rows[:, i] = np.tile(xs, n)
    rows[:, i + 1 :] = np.repeat(params[:, i:], w, axis=0)
    mask = member_mask(a, rows).reshape(n, w)
    allv, anyv = mask.all(axis=1), mask.any(axis=1)
    out = np.empty(n, dtype=object)
    out[:] = UNSTABLE
    out[allv] = True
    out[~anyv] = False
    return params, out


def oracle_forall_u(u: UPoint, a: SymbolicSet, i: int, params: Sequence[int], cfg: TruncationConfig = TruncationConfig()):
    """Sampled verdict of ``section(a, i, .) at params`` belonging to ``u``."""
    params = tuple(params)
    if isinstance(u, Principal):
        return membership(params[:i] + (u.value,) + params[i:], a)
    cfg = TruncationConfig(cfg.k0, cfg.width, max(cfg.bound, max(params, default=0)), cfg.seed)
    xs = _window(a, u, i, cfg)
    rows = np.array([params[:i] + (int(x),) + params[i:] for x in xs], dtype=np.int64)
    vals = member_mask(a, rows)
    if vals.all():
        return True
    if not vals.any():
        return False
    return UNSTABLE


def oracle_prefix(prefix: Sequence[UPoint], a: SymbolicSet, width: int = 60, _fixed: tuple = ()):
    """Literal nested sampling of ``(Q^u1 x1) ... (Q^un xn) a``.

    Each tail variable is sampled along its progression above a threshold
    derived from the values already fixed, innermost last.
    """
    j = len(_fixed)
    if j == len(prefix):
        return membership(_fixed, a)
    u = prefix[j]
    if isinstance(u, Principal):
        return oracle_prefix(prefix, a, width, _fixed + (u.value,))
    # later tail coordinates are sampled above this one's values in turn, so
    # only the fixed prefix and the later principal values bound the threshold
    later = [(i, v.value) for i, v in enumerate(prefix) if i > j and isinstance(v, Principal)]
    t = 0
    for cell in a.cells:
        for atom in cell.ineqs:
            if atom.coeffs[j]:
                rest = sum(abs(c) * x for c, x in zip(atom.coeffs, _fixed))
                rest += sum(abs(atom.coeffs[i]) * x for i, x in later)
                t = max(t, abs(atom.const) + rest + 1)
    k0 = -(-t // u.modulus) + 1
    w = max(width, 10 * _lcm_moduli(a))
    seen = set()
    for k in range(k0, k0 + w + 1):
        v = oracle_prefix(prefix, a, width, _fixed + (u.residue + u.modulus * k,))
        if v is UNSTABLE:
            return UNSTABLE
        seen.add(v)
        if len(seen) > 1:
            return UNSTABLE
    return seen.pop()


def preimage(f, a: SymbolicSet) -> SymbolicSet:
    """``{x : f(x) in a}`` for a piecewise-affine ``f`` and unary ``a``."""
    from .set_algebra import intersect

    n = f.arity
    out = SymbolicSet.empty(n)
    from .set_algebra import union

    for b in f.branches:
        pulled = SymbolicSet.from_cells(n, (pullback_cell(c, [b.expr], n) for c in a.cells))
        out = union(out, intersect(SymbolicSet(n, (b.guard,)), pulled))
    return out


# ---------------------------------------------------------------------------
# closure-style extension by truncated search


def oracle_star(
    r: SymbolicSet,
    args: Sequence[UPoint],
    thresholds: Sequence[int] = (20, 40),
    scales: Sequence[int] = (1, 2, 4, 8, 16, 32, 64),
    span: int = 60,
):
    """Sampled closure verdict: is there a witness with every tail coordinate
    at least ``t`` (in progression units) for each listed ``t``?

    Each tail coordinate ranges over the windows ``[s*t, s*t + span]`` for the
    listed scales, so witnesses along steep directions are reached too.
    Agreement across thresholds gives the verdict.
    """
    tails = [j for j, u in enumerate(args) if isinstance(u, Limit)]
    if not tails:
        return membership(tuple(u.value for u in args), r)
    verdicts = []
    for t in thresholds:
        zs = np.unique(np.concatenate([np.arange(s * t, s * t + span + 1) for s in scales])).astype(np.int64)
        hit = False
        for combo in itertools.product(range(len(scales)), repeat=len(tails)):
            # one window per coordinate at a time keeps the block small
            parts = [zs[(zs >= scales[c] * t) & (zs <= scales[c] * t + span)] for c in combo]
            mesh = np.meshgrid(*parts, indexing="ij")
            flat = [m.ravel() for m in mesh]
            rows = np.empty((flat[0].shape[0], r.arity), dtype=np.int64)
            for j, u in enumerate(args):
                if isinstance(u, Principal):
                    rows[:, j] = u.value
                else:
                    rows[:, j] = u.residue + u.modulus * flat[tails.index(j)]
            if member_mask(r, rows).any():
                hit = True
                break
        verdicts.append(hit)
    if all(verdicts):
        return True
    if not any(verdicts):
        return False
    return UNSTABLE


# ---------------------------------------------------------------------------
# finite extensions by enumeration of literal ultrafilters


def _subsets(n: int) -> list[frozenset]:
    return [frozenset(c) for r in range(n + 1) for c in itertools.combinations(range(n), r)]


def all_ultrafilters(n: int) -> list[frozenset]:
    """Every ultrafilter on ``{0..n-1}``, found by testing all set families."""
    if n > 3:
        from .errors import BoundExceeded

        raise BoundExceeded("literal ultrafilter enumeration needs n <= 3")
    subs = _subsets(n)
    full = frozenset(range(n))
    out = []
    for bits in range(1 << len(subs)):
        fam = frozenset(s for b, s in enumerate(subs) if bits >> b & 1)
        if full not in fam or frozenset() in fam:
            continue
        if any(full - s not in fam for s in subs if s not in fam):
            continue
        if any(a & b not in fam for a in fam for b in fam):
            continue
        if any(b not in fam for a in fam for b in subs if a <= b):
            continue
        out.append(fam)
    return out


def _quantify(us: Sequence[frozenset], pred, n: int, fixed: tuple = ()) -> bool:
    """``{x1 : {x2 : ... pred ...} in u2} in u1`` literally."""
    if len(fixed) == len(us):
        return pred(fixed)
    inner = frozenset(x for x in range(n) if _quantify(us, pred, n, fixed + (x,)))
    return inner in us[len(fixed)]


@dataclass
class FiniteExtensionTables:
    ultrafilters: list
    functions: dict = field(default_factory=dict)
    relations: dict = field(default_factory=dict)

    def point(self, uf: frozenset) -> Principal:
        """The principal point generating a literal ultrafilter."""
        (s,) = [s for s in uf if len(s) == 1]
        return Principal(next(iter(s)))


def oracle_finite_extension(model, mode: str = "tilde") -> FiniteExtensionTables:
    """Fully tabulated extension of a finite model from the definitions."""
    n = model.universe.size
    ufs = all_ultrafilters(n)
    subs = _subsets(n)
    tab = FiniteExtensionTables(ufs)
    for name, f in model.functions.items():
        t = {}
        for us in itertools.product(ufs, repeat=f.arity):
            fam = frozenset(a for a in subs if _quantify(us, lambda x: f(*x) in a, n))
            t[us] = fam
        tab.functions[name] = t
    for name, r in model.relations.items():
        t = {}
        for us in itertools.product(ufs, repeat=r.arity):
            if mode == "tilde":
                t[us] = _quantify(us, lambda x: x in r.members, n)
            else:
                t[us] = all(
                    any(x in r.members for x in itertools.product(*choice))
                    for choice in itertools.product(*us)
                )
        tab.relations[name] = t
    return tab


def _push(h, uf: frozenset, n_dst: int) -> frozenset:
    return frozenset(b for b in _subsets(n_dst) if frozenset(x for x in range(len(h.table)) if h(x) in b) in uf)


def brute_force_extension_hom(h, a, b, mode: str = "tilde", tables: tuple | None = None) -> bool:
    """Is the literal extension of ``h`` a homomorphism of the tabulated
    extensions of ``a`` and ``b``?  ``tables`` may pass both precomputed."""
    if tables is None:
        tables = oracle_finite_extension(a, mode), oracle_finite_extension(b, mode)
    ta, tb = tables
    nb = b.universe.size
    hmap = {u: _push(h, u, nb) for u in ta.ultrafilters}
    for name, t in ta.functions.items():
        for us, val in t.items():
            if hmap[val] != tb.functions[name][tuple(hmap[u] for u in us)]:
                return False
    for name, t in ta.relations.items():
        for us, val in t.items():
            if val and not tb.relations[name][tuple(hmap[u] for u in us)]:
                return False
    return True


def brute_force_hom(h, a, b) -> bool:
    """Ordinary homomorphism check on the base models."""
    for name, f in a.functions.items():
        g = b.functions[name]
        for x in a.universe.tuples(f.arity):
            if h(f(*x)) != g(*(h(v) for v in x)):
                return False
    for name, r in a.relations.items():
        s = b.relations[name]
        for x in r.members:
            if tuple(h(v) for v in x) not in s.members:
                return False
    return True


def differential_suite(name: str, trials: int, seed: int = 0, generator=None):
    """Run a registered invariant against its oracle; see :mod:`ultrext.suites`."""
    from .suites import run_suite

    return run_suite(name, trials, seed, generator)
