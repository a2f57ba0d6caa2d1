"""Named property suites: each draws random cases, compares the engine with
an oracle or a law, and shrinks failing cases greedily."""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable

import numpy as np

from . import gen
from . import quantifier as q
from .defop import AffineOp, FiniteMap, FiniteOp
from .errors import PrecisionError
from .extension import (
    Model,
    Signature,
    check_hom,
    ext_map,
    ext_rel_star,
    ext_rel_tilde,
    extend_model,
)
from .generalized import (
    FamilyInterp,
    GenModel,
    PrincipalInterp,
    E_model,
    above_family,
    below_family,
    collapse_principal,
    e_model,
    evaluate,
    is_pseudo_principal,
    monus_family,
    principal_model,
    satisfies,
    shift_family,
)
from .oracle import (
    UNSTABLE,
    TruncationConfig,
    brute_force_extension_hom,
    brute_force_hom,
    oracle_finite_extension,
    oracle_forall_u_grid,
    oracle_in_ultrafilter,
    oracle_prefix,
    oracle_star,
)
from .points import LIM_INF, Limit, Principal, UPoint, equal_points, in_ultrafilter
from .set_algebra import (
    Cell,
    FiniteUniverse,
    SymbolicSet,
    complement,
    grid,
    intersect,
    make_cell,
    member_mask,
)

PASS, FAIL, SKIP = "pass", "fail", "skip"


@dataclass
class Report:
    name: str
    trials: int
    seed: int
    resolved: int = 0
    passed: int = 0
    skipped: int = 0
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures and self.resolved >= self.trials

    def to_dict(self) -> dict:
        return {
            "suite": self.name,
            "trials": self.trials,
            "seed": self.seed,
            "resolved": self.resolved,
            "passed": self.passed,
            "skipped": self.skipped,
            "failures": [{"case": repr(c), "detail": d} for c, d in self.failures],
            "ok": self.ok,
        }


@dataclass(frozen=True)
class Suite:
    name: str
    generate: Callable[[random.Random], object]
    check: Callable[[object], tuple]
    doc: str = ""


# ---------------------------------------------------------------------------
# shrinking


def _shrink_set(a: SymbolicSet) -> Iterable[SymbolicSet]:
    k = a.arity
    for j in range(len(a.cells)):
        yield SymbolicSet(k, a.cells[:j] + a.cells[j + 1 :])
    for j, c in enumerate(a.cells):
        atoms_i, atoms_c = list(c.ineqs), list(c.congs)
        cands = []
        for t in range(len(atoms_i)):
            cands.append(make_cell(k, atoms_i[:t] + atoms_i[t + 1 :], atoms_c))
        for t in range(len(atoms_c)):
            cands.append(make_cell(k, atoms_i, atoms_c[:t] + atoms_c[t + 1 :]))
        halved = [(tuple(x // 2 if abs(x) > 1 else x for x in i.coeffs), i.const // 2) for i in atoms_i]
        cands.append(make_cell(k, halved, atoms_c))
        for nc in cands:
            if nc is not None and nc != c:
                yield SymbolicSet(k, a.cells[:j] + (nc,) + a.cells[j + 1 :])


def _shrink_value(v) -> Iterable:
    if isinstance(v, SymbolicSet):
        yield from _shrink_set(v)
    elif isinstance(v, Limit):
        for d in range(1, v.modulus):
            if v.modulus % d == 0:
                yield Limit(v.residue % d, d)
    elif isinstance(v, Principal) and v.value:
        yield Principal(v.value // 2)
    elif isinstance(v, tuple):
        for j, x in enumerate(v):
            for y in _shrink_value(x):
                yield v[:j] + (y,) + v[j + 1 :]


def shrink(case, still_fails: Callable[[object], bool], max_steps: int = 200):
    """Greedy shrink: take the first smaller candidate that still fails."""
    steps = 0
    improved = True
    while improved and steps < max_steps:
        improved = False
        for cand in _shrink_value(case):
            steps += 1
            try:
                if still_fails(cand):
                    case = cand
                    improved = True
                    break
            except Exception:
                continue
            if steps >= max_steps:
                break
    return case


# ---------------------------------------------------------------------------
# symbolic suites

_CFG = gen.SetGenConfig()
_POINT_MODULI = (1, 2, 3, 4, 6)


_QUANT_CFG = gen.SetGenConfig(max_ineqs=3, max_congs=2)


def _gen_quant(rng: random.Random):
    k = rng.choice((1, 2, 2, 3, 3))
    a = gen.random_set(rng, k, _QUANT_CFG)
    return (gen.random_point(rng, _POINT_MODULI, 8, 0.2), a, rng.randrange(k))


def _check_forall(case):
    u, a, i = case
    try:
        res = q.forall_u(u, a, i)
    except PrecisionError:
        return SKIP, None
    params, verdicts = oracle_forall_u_grid(u, a, i, TruncationConfig())
    got = member_mask(res, params)
    for p, v, g in zip(params, verdicts, got):
        if v is UNSTABLE or v != bool(g):
            return FAIL, f"at {tuple(int(x) for x in p)}: engine {bool(g)}, oracle {v}"
    return PASS, None


def _section_grid(a: SymbolicSet, i: int, value: int, bound: int) -> tuple[np.ndarray, np.ndarray]:
    params = grid(a.arity - 1, bound)
    rows = np.insert(params, i, value, axis=1)
    return params, member_mask(a, rows)


def _check_principal_reduction(case):
    u, a, i = case
    u = Principal(u.value) if isinstance(u, Principal) else Principal(u.residue + 3)
    res = q.forall_u(u, a, i)
    params, want = _section_grid(a, i, u.value, 30)
    got = member_mask(res, params)
    if not np.array_equal(want, got):
        bad = int(np.argmax(want != got))
        return FAIL, f"at {tuple(int(x) for x in params[bad])}"
    return PASS, None


def _check_self_duality(case):
    u, a, i = case
    try:
        fa = q.forall_u(u, a, i)
        ex = q.exists_u(u, a, i)
    except PrecisionError:
        return SKIP, None
    params = grid(a.arity - 1, 30)
    m1, m2 = member_mask(fa, params), member_mask(ex, params)
    if not np.array_equal(m1, m2):
        bad = int(np.argmax(m1 != m2))
        return FAIL, f"at {tuple(int(x) for x in params[bad])}"
    return PASS, None


def _gen_rel_args(rng: random.Random, max_arity: int = 3):
    k = rng.randint(1, max_arity)
    r = gen.random_set(rng, k, _CFG)
    return (r, tuple(gen.random_point(rng, _POINT_MODULI, 6, 0.3) for _ in range(k)))


def _check_tilde_star(case):
    r, args = case
    try:
        t = ext_rel_tilde(r, args)
        s = ext_rel_star(r, args)
    except PrecisionError:
        return SKIP, None
    if t and not s:
        return FAIL, "tilde holds but star fails"
    return PASS, None


def _check_unary(case):
    r, args = case
    r1 = gen.random_set(random.Random(hash(repr(r)) & 0xFFFF), 1, _CFG)
    u = args[0]
    try:
        a = ext_rel_tilde(r1, [u])
        s = ext_rel_star(r1, [u])
        m = in_ultrafilter(r1, u)
    except PrecisionError:
        return SKIP, None
    if not a == s == m:
        return FAIL, f"tilde {a}, star {s}, membership {m}"
    return PASS, None


_STAR_CFG = gen.SetGenConfig(coeff_range=3, const_range=6, max_cells=2)


def _gen_star(rng: random.Random):
    k = rng.randint(1, 2)
    r = gen.random_set(rng, k, _STAR_CFG)
    return (r, tuple(gen.random_point(rng, (1, 2, 3), 5, 0.3) for _ in range(k)))


def _check_star_truncation(case):
    r, args = case
    try:
        s = ext_rel_star(r, args)
    except PrecisionError:
        return SKIP, None
    o = oracle_star(r, args)
    if o is UNSTABLE:
        return SKIP, None
    if o != s:
        return FAIL, f"engine {s}, oracle {o}"
    return PASS, None


def _gen_prefix(rng: random.Random):
    k = rng.randint(1, 2)
    r = gen.random_set(rng, k, _STAR_CFG)
    return (r, tuple(gen.random_point(rng, (1, 2, 3), 5, 0.3) for _ in range(k)))


def _check_prefix_truncation(case):
    r, args = case
    try:
        t = q.eval_prefix(list(args), r)
    except PrecisionError:
        return SKIP, None
    o = oracle_prefix(list(args), r)
    if o is UNSTABLE:
        return FAIL, f"engine {t}, oracle unstable"
    if o != t:
        return FAIL, f"engine {t}, oracle {o}"
    return PASS, None


def _gen_uf_laws(rng: random.Random):
    return (gen.random_limit(rng, _POINT_MODULI), gen.random_set(rng, 1, _CFG), gen.random_set(rng, 1, _CFG))


def _check_uf_laws(case):
    u, a, b = case
    try:
        ia, ib = in_ultrafilter(a, u), in_ultrafilter(b, u)
        ic = in_ultrafilter(complement(a), u)
        iab = in_ultrafilter(intersect(a, b), u)
    except PrecisionError:
        return SKIP, None
    if ia == ic:
        return FAIL, "exactly one of A and its complement must belong"
    if (ia and ib) != iab:
        return FAIL, "intersection law"
    o = oracle_in_ultrafilter(a, u)
    if o is UNSTABLE or o != ia:
        return FAIL, f"oracle {o}, engine {ia}"
    return PASS, None


def _gen_map(rng: random.Random):
    k = rng.randint(1, 2)
    coeffs = tuple(rng.randint(0, 3) for _ in range(k))
    op = AffineOp.affine(coeffs, rng.randint(0, 4))
    args = tuple(gen.random_point(rng, (1, 2, 3, 4), 5, 0.4) for _ in range(k))
    target = gen.random_set(rng, 1, gen.SetGenConfig(coeff_range=2, const_range=6, moduli=(2, 3, 4)))
    return (op, args, target)


def _check_map(case):
    from .oracle import preimage

    op, args, target = case
    try:
        w = ext_map(op, list(args))
        member = in_ultrafilter(target, w)
    except PrecisionError:
        return SKIP, None
    o = oracle_prefix(list(args), preimage(op, target))
    if o is UNSTABLE or o != member:
        return FAIL, f"value {w}: engine {member}, oracle {o}"
    return PASS, None


# ---------------------------------------------------------------------------
# finite suites


def _gen_finite(rng: random.Random):
    n = rng.randint(1, 3)
    sig = gen.random_signature(rng)
    return (n, gen.random_finite_model(rng, sig, FiniteUniverse.of_size(n)))


def _check_finite_extension(case):
    n, model = case
    for mode in ("tilde", "star"):
        tab = oracle_finite_extension(model, mode)
        em = extend_model(model, mode)
        for name, t in tab.functions.items():
            for us, val in t.items():
                if em.apply(name, [tab.point(u) for u in us]) != tab.point(val):
                    return FAIL, f"{mode} {name} at {us}"
        for name, t in tab.relations.items():
            for us, val in t.items():
                if em.holds(name, [tab.point(u) for u in us]) != val:
                    return FAIL, f"{mode} {name} at {us}"
    return PASS, None


# ---------------------------------------------------------------------------
# generalized models


def constructed_genmodels() -> dict[str, GenModel]:
    """The principal, monus-family and shift-family models."""
    sig = Signature({"F": 1}, {"P": 1, "Q": 2})
    le = SymbolicSet.of(2, [((-1, 1), 0)])
    return {
        "principal": GenModel(
            sig,
            {
                "F": PrincipalInterp(AffineOp.affine((1,), 1)),
                "P": PrincipalInterp(SymbolicSet.of(1, [((1,), -2)])),
                "Q": PrincipalInterp(le),
            },
        ),
        "monus": GenModel(
            sig,
            {"F": monus_family(), "P": below_family(), "Q": PrincipalInterp(le)},
        ),
        "shift": GenModel(
            sig,
            {
                "F": shift_family(),
                "P": above_family(),
                "Q": FamilyInterp(SymbolicSet.of(3, [((1, -1, 1), 0)]), LIM_INF),
            },
        ),
    }


GEN_POINTS = tuple([Principal(n) for n in range(6)] + [Limit(r, m) for m in (1, 2, 3) for r in range(m)])


def _gen_formula(rng: random.Random):
    models = constructed_genmodels()
    key = rng.choice(sorted(models))
    phi = gen.random_qf_formula(rng, models[key].signature, ["x", "y"], 3)
    v = (rng.choice(GEN_POINTS), rng.choice(GEN_POINTS))
    return (key, phi, v)


def _check_e_preserves(case):
    key, phi, (vx, vy) = case
    m = constructed_genmodels()[key]
    val = {"x": vx, "y": vy}
    try:
        a = satisfies(m, phi, val)
        b = evaluate(e_model(m), phi, val)
    except PrecisionError:
        return SKIP, None
    if a != b:
        return FAIL, f"generalized {a}, collapsed {b}"
    return PASS, None


def _gen_rel_tuple(rng: random.Random):
    models = constructed_genmodels()
    key = rng.choice(sorted(models))
    name = rng.choice(["P", "Q"])
    k = models[key].signature.relations[name]
    return (key, name, tuple(rng.choice(GEN_POINTS) for _ in range(k)))


def _check_homo_e_E(case):
    key, name, args = case
    m = constructed_genmodels()[key]
    try:
        e = e_model(m).holds(name, args)
        s = E_model(m).holds(name, args)
    except PrecisionError:
        return SKIP, None
    if e and not s:
        return FAIL, "e holds but E fails"
    return PASS, None


def _noop_gen(rng: random.Random):
    return (rng.randrange(1 << 30),)


def _mutant_forall(u, a, i):
    """A deliberately wrong quantifier: drops every inequality."""
    if isinstance(a, SymbolicSet):
        a = SymbolicSet.from_cells(a.arity, (make_cell(a.arity, (), c.congs) for c in a.cells))
    return _REAL_FORALL(u, a, i)


_REAL_FORALL = q.forall_u


SUITES: dict[str, Suite] = {
    s.name: s
    for s in [
        Suite("forall-u", _gen_quant, _check_forall, "quantifier elimination vs truncation oracle"),
        Suite("principal-reduction", _gen_quant, _check_principal_reduction, "principal quantifiers are substitution"),
        Suite("self-duality", _gen_quant, _check_self_duality, "forall and exists coincide"),
        Suite("tilde-subset-star", _gen_rel_args, _check_tilde_star, "tilde extension is inside star extension"),
        Suite("unary-coincidence", _gen_rel_args, _check_unary, "both extensions of a unary set are membership"),
        Suite("star-truncation", _gen_star, _check_star_truncation, "star extension vs truncated witness search"),
        Suite("prefix-truncation", _gen_prefix, _check_prefix_truncation, "nested quantifiers vs nested sampling"),
        Suite("ultrafilter-laws", _gen_uf_laws, _check_uf_laws, "tail points behave as ultrafilters"),
        Suite("ext-map", _gen_map, _check_map, "extended operations vs their defining membership formula"),
        Suite("finite-extension", _gen_finite, _check_finite_extension, "engine vs enumerated finite extensions"),
        Suite("e-preserves-formulas", _gen_formula, _check_e_preserves, "satisfaction survives the e-collapse"),
        Suite("homo-e-E", _gen_rel_tuple, _check_homo_e_E, "e-relations imply E-relations"),
    ]
}


def run_suite(name: str, trials: int, seed: int = 0, generator=None, max_factor: int = 20) -> Report:
    suite = SUITES[name]
    make = generator or suite.generate
    rng = random.Random(seed)
    rep = Report(name, trials, seed)
    start = time.perf_counter()
    attempts = 0
    while rep.resolved < trials and attempts < trials * max_factor:
        attempts += 1
        case = make(rng)
        try:
            outcome, detail = suite.check(case)
        except PrecisionError:
            outcome, detail = SKIP, None
        except Exception as e:  # an engine crash is a failure, not a skip
            outcome, detail = FAIL, f"{type(e).__name__}: {e}"
        if outcome == SKIP:
            rep.skipped += 1
            continue
        rep.resolved += 1
        if outcome == PASS:
            rep.passed += 1
        else:
            small = shrink(case, lambda c: _fails(suite, c))
            rep.failures.append((small, detail))
    rep.seconds = time.perf_counter() - start
    return rep


def _fails(suite: Suite, case) -> bool:
    try:
        return suite.check(case)[0] == FAIL
    except PrecisionError:
        return False
