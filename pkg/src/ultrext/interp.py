"""Evaluation of parsed scripts into result records."""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable

from . import dsl
from .defop import AffineOp, FiniteOp
from .errors import PrecisionError, UltrextError
from .extension import Model, Signature, check_hom, ext_map, ext_rel_star, ext_rel_tilde
from .generalized import (
    FamilyInterp,
    GenModel,
    PrincipalInterp,
    E_model,
    core_relation,
    e_model,
    free_vars,
    is_pseudo_principal,
    satisfies,
)
from .points import Limit, Principal, UPoint
from .render import default_names, format_point, format_set
from .set_algebra import (
    Affine,
    FiniteSet,
    FiniteUniverse,
    SymbolicSet,
    complement,
    difference,
    full,
    intersect,
    is_empty,
    union,
)
from .quantifier import exists_u, forall_u


class EvalError(UltrextError):
    pass


@dataclass(frozen=True)
class Binding:
    kind: str  # set op point family model genmodel
    value: object
    names: tuple = ()


@dataclass(frozen=True)
class SessionConfig:
    backend: str = "symbolic"
    universe: int = 0
    precision: int = 1
    seed: int = 0
    timing: bool = False

    @property
    def finite(self) -> FiniteUniverse | None:
        return FiniteUniverse.of_size(self.universe) if self.backend == "finite" else None


@dataclass
class Session:
    config: SessionConfig = field(default_factory=SessionConfig)
    env: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# expressions


def _lin(l: dsl.Lin, names: tuple) -> tuple[tuple[int, ...], int]:
    co = [0] * len(names)
    for c, v in l.terms:
        if v not in names:
            raise EvalError(f"unknown variable {v!r} (bound: {', '.join(names) or 'none'})")
        co[names.index(v)] += c
    return tuple(co), l.const


def _diff(a: dsl.Lin, b: dsl.Lin, names: tuple) -> tuple[tuple[int, ...], int]:
    ca, ka = _lin(a, names)
    cb, kb = _lin(b, names)
    return tuple(x - y for x, y in zip(ca, cb)), ka - kb


def _atoms(atoms, names: tuple):
    """``(ineqs, congs)`` for a conjunction, or None if it contains false."""
    ineqs, congs = [], []
    for a in atoms:
        if isinstance(a, dsl.BoolAtom):
            if not a.value:
                return None
            continue
        if isinstance(a, dsl.ModAtom):
            co, k = _diff(a.lhs, a.rhs, names)
            congs.append((co, -k, a.modulus))
            continue
        co, k = _diff(a.rhs, a.lhs, names)  # rhs - lhs
        neg = (tuple(-x for x in co), -k)
        if a.rel in ("<=", "="):
            ineqs.append((co, k))
        if a.rel in (">=", "="):
            ineqs.append(neg)
        if a.rel == "<":
            ineqs.append((co, k - 1))
        if a.rel == ">":
            ineqs.append((neg[0], neg[1] - 1))
    return ineqs, congs


def _holds(ineqs, congs, point) -> bool:
    for co, k in ineqs:
        if sum(a * x for a, x in zip(co, point)) + k < 0:
            return False
    for co, r, m in congs:
        if (sum(a * x for a, x in zip(co, point)) - r) % m:
            return False
    return True


class Evaluator:
    def __init__(self, session: Session):
        self.s = session

    @property
    def cfg(self) -> SessionConfig:
        return self.s.config

    def lookup(self, name: str, *kinds: str) -> Binding:
        b = self.s.env.get(name)
        if b is None:
            raise EvalError(f"undefined name {name!r}")
        if kinds and b.kind not in kinds:
            raise EvalError(f"{name!r} is a {b.kind}, expected {' or '.join(kinds)}")
        return b

    # -- sets
    def comp(self, c: dsl.SetComp, names: tuple | None = None):
        names = c.vars if names is None else names
        sys = _atoms(c.atoms, names)
        k = len(names)
        uni = self.cfg.finite
        if uni is not None:
            members = frozenset() if sys is None else frozenset(
                t for t in uni.tuples(k) if _holds(*sys, t)
            )
            return FiniteSet(uni, k, members)
        if sys is None:
            return SymbolicSet.empty(k)
        return SymbolicSet.of(k, *sys)

    def setexpr(self, e) -> tuple[object, tuple]:
        if isinstance(e, dsl.SetComp):
            return self.comp(e), e.vars
        if isinstance(e, dsl.SetTable):
            rows = frozenset(e.rows)
            if any(len(r) != e.arity for r in rows):
                raise EvalError("table rows do not match the declared arity")
            uni = self.cfg.finite
            if uni is not None:
                return FiniteSet(uni, e.arity, rows), tuple(default_names(e.arity))
            cells = [
                SymbolicSet.of(
                    e.arity,
                    [(tuple(1 if j == i else 0 for j in range(e.arity)), -v) for i, v in enumerate(r)]
                    + [(tuple(-1 if j == i else 0 for j in range(e.arity)), v) for i, v in enumerate(r)],
                )
                for r in sorted(rows)
            ]
            out = SymbolicSet.empty(e.arity)
            for c in cells:
                out = union(out, c)
            return out, tuple(default_names(e.arity))
        if isinstance(e, dsl.Name):
            b = self.lookup(e.name, "set")
            return b.value, b.names
        if isinstance(e, dsl.SetCompl):
            v, n = self.setexpr(e.body)
            return complement(v), n
        if isinstance(e, dsl.SetBin):
            a, n = self.setexpr(e.lhs)
            b, _ = self.setexpr(e.rhs)
            return (union(a, b) if e.op == "|" else intersect(a, b)), n
        if isinstance(e, dsl.SetQuant):
            body, names = self.setexpr(e.body)
            if e.var not in names:
                raise EvalError(f"{e.var!r} is not a variable of the quantified set")
            i = names.index(e.var)
            u = self.point(e.point)
            fn = forall_u if e.kind == "forall" else exists_u
            return fn(u, body, i), names[:i] + names[i + 1 :]
        raise EvalError(f"not a set: {dsl.fmt_set(e)}")

    # -- points
    def point(self, p) -> UPoint:
        uni = self.cfg.finite
        if isinstance(p, dsl.Name):
            return self.lookup(p.name, "point").value
        if isinstance(p, dsl.Pt):
            if uni is not None and p.value >= uni.size:
                raise EvalError(f"pt({p.value}) is outside the universe of size {uni.size}")
            return Principal(p.value)
        if uni is not None:
            raise EvalError("tail points do not exist on a finite universe")
        if isinstance(p, dsl.Lim):
            return Limit(p.residue, p.modulus)
        if isinstance(p, dsl.LimInf):
            return Limit(0, self.cfg.precision)
        raise EvalError(f"not a point: {p!r}")

    # -- operations
    def _pieces(self, body: dsl.Piece, names: tuple):
        k = len(names)
        uni = self.cfg.finite
        remaining = full(FiniteSet.empty(uni, k) if uni else SymbolicSet.empty(k), k)
        out = []
        p = body
        while p is not None:
            co, c = _lin(p.expr, names)
            if p.guard:
                g = self.comp(dsl.SetComp(names, p.guard), names)
                out.append((intersect(remaining, g), Affine(co, c)))
                remaining = difference(remaining, g)
            else:
                out.append((remaining, Affine(co, c)))
            p = p.rest
        return out

    def op(self, vars_: tuple, body: dsl.Piece):
        pieces = self._pieces(body, vars_)
        uni = self.cfg.finite
        k = len(vars_)
        if uni is not None:
            def fn(*xs):
                for guard, expr in pieces:
                    if xs in guard.members:
                        return expr(xs)
                raise EvalError("operation is not total")

            table = [fn(*t) for t in uni.tuples(k)]
            if not all(0 <= v < uni.size for v in table):
                raise EvalError("operation leaves the universe")
            return FiniteOp(uni, k, tuple(table))
        try:
            return AffineOp.piecewise(k, pieces)
        except ValueError as e:
            raise EvalError(str(e)) from None

    def definition(self, e) -> Binding:
        uni = self.cfg.finite
        if isinstance(e, dsl.OpDef):
            return Binding("op", self.op(e.vars, e.body), e.vars)
        if isinstance(e, dsl.OpTable):
            if uni is None:
                raise EvalError("optable needs the finite backend")
            try:
                return Binding("op", FiniteOp(uni, e.arity, e.values), tuple(default_names(e.arity)))
            except ValueError as err:
                raise EvalError(str(err)) from None
        if isinstance(e, dsl.Family):
            w = self.point(e.at)
            names = e.inputs + (e.param,)
            if isinstance(e.body, dsl.SetComp):
                fam = self.comp(e.body, names)
            else:
                fam = self.op(names, e.body)
            return Binding("family", FamilyInterp(fam, w), e.inputs)
        if isinstance(e, (dsl.Pt, dsl.Lim, dsl.LimInf)):
            return Binding("point", self.point(e))
        if isinstance(e, dsl.ModelDef):
            return Binding("model", self.model(e))
        if isinstance(e, dsl.GenModelDef):
            return Binding("genmodel", self.genmodel(e))
        if isinstance(e, dsl.Principal_):
            raise EvalError("'principal' is only allowed inside genmodel")
        if isinstance(e, dsl.Name) and e.name in self.s.env:
            return self.s.env[e.name]
        v, n = self.setexpr(e)
        return Binding("set", v, n)

    def model(self, e: dsl.ModelDef) -> Model:
        funcs, rels = {}, {}
        for name, x in e.entries:
            b = self.definition(x)
            if b.kind == "op":
                funcs[name] = b.value
            elif b.kind == "set":
                rels[name] = b.value
            else:
                raise EvalError(f"model entry {name!r} must be an operation or a set")
        sig = Signature({k: v.arity for k, v in funcs.items()}, {k: v.arity for k, v in rels.items()})
        return Model(sig, funcs, rels, self.cfg.finite)

    def genmodel(self, e: dsl.GenModelDef) -> GenModel:
        interps, fa, ra = {}, {}, {}
        for name, x in e.entries:
            b = self.definition(x.body if isinstance(x, dsl.Principal_) else x)
            if b.kind == "family":
                it = b.value
            elif b.kind in ("op", "set"):
                it = PrincipalInterp(b.value)
            else:
                raise EvalError(f"genmodel entry {name!r} must be an operation, a set or a family")
            interps[name] = it
            (fa if it.is_function else ra)[name] = it.arity
        return GenModel(Signature(fa, ra), interps, self.cfg.finite)

    def any_model(self, name: str) -> GenModel:
        b = self.lookup(name, "model", "genmodel")
        return GenModel.from_model(b.value) if b.kind == "model" else b.value

    # -- queries
    def query(self, q: dsl.Query):
        """Returns ``(value, label, detail, verdict_ok)``."""
        k = q.kind
        if k in ("ext~", "ext*"):
            r, _ = self.setexpr(q.target)
            args = [self.point(p) for p in q.args]
            fn = ext_rel_tilde if k == "ext~" else ext_rel_star
            return fn(r, args), "exact", None, True
        if k == "extmap":
            f = self.lookup(q.target.name, "op").value
            return ext_map(f, [self.point(p) for p in q.args]), "exact", None, True
        if k in ("e", "E"):
            m = self.any_model(q.target[0])
            sym = q.target[1]
            if sym not in m.interps:
                raise EvalError(f"{q.target[0]} has no symbol {sym!r}")
            om = e_model(m) if k == "e" else E_model(m)
            args = [self.point(p) for p in q.args]
            if m.interps[sym].is_function:
                return om.apply(sym, args), "exact", None, True
            return om.holds(sym, args), "exact", None, True
        if k == "core":
            m = self.any_model(q.target[0])
            it = m.interps.get(q.target[1])
            if it is None or it.is_function:
                raise EvalError(f"{q.target[0]}.{q.target[1]} is not a relation symbol")
            return core_relation(it), "exact", None, True
        if k == "pseudo?":
            m = self.any_model(q.target[0])
            it = m.interps.get(q.target[1])
            if it is None or not it.is_function:
                raise EvalError(f"{q.target[0]}.{q.target[1]} is not a function symbol")
            return is_pseudo_principal(it), "exact", None, True
        if k == "lim":
            from .widesense import lim_model, wide_model

            m = self.any_model(q.target[0])
            sym = q.target[1]
            if sym not in m.interps:
                raise EvalError(f"{q.target[0]} has no symbol {sym!r}")
            lm = lim_model(wide_model(m, q.extra[0]))
            args = [self.point(p) for p in q.args]
            if m.interps[sym].is_function:
                return lm.apply(sym, args), "exact", None, True
            return lm.holds(sym, args), "exact", None, True
        if k == "sat":
            m = self.any_model(q.target.name)
            phi, val = q.args
            v = {name: self.point(p) for name, p in val}
            missing = free_vars(phi) - set(v)
            if missing:
                raise EvalError(f"no value for {', '.join(sorted(missing))}")
            wit = [self.point(p) for p in q.extra] if q.extra else None
            return satisfies(m, phi, v, wit), "exact", None, True
        if k == "homcheck":
            h = self.lookup(q.target.name, "op").value
            a = self.lookup(q.args[0].name, "model").value
            b = self.lookup(q.args[1].name, "model").value
            vd = check_hom(h, a, b, q.extra[0])
            detail = None if vd.counterexample is None else repr(vd.counterexample)
            return vd.ok, vd.label, detail, vd.ok
        if k == "modal-via-ext":
            from .widesense import modal_via_ext_check

            r, _ = self.setexpr(q.target)
            if not isinstance(r, FiniteSet):
                raise EvalError("check modal-via-ext needs the finite backend")
            ok = modal_via_ext_check(r)
            return ok, "exact", None, ok
        if k == "lift":
            from .widesense import FiniteUF, lift, project

            uni = self.cfg.finite
            if uni is None:
                raise EvalError("lift needs the finite backend")
            u = self.point(q.target)
            size = q.extra[0]
            if size < uni.size:
                raise EvalError(f"cannot lift into a carrier of size {size} < {uni.size}")
            base = FiniteUF(tuple(range(uni.size)), u.value)
            up = lift(base, tuple(range(size)))
            back = project(up, range(uni.size))
            ok = back == base
            return Principal(up.generator), "exact", None if ok else "projection mismatch", ok
        if k == "show":
            v, names = self.setexpr(q.target)
            return (v, names), "exact", None, True
        if k == "empty?":
            v, _ = self.setexpr(q.target)
            return is_empty(v), "exact", None, True
        if k == "suite":
            from .suites import SUITES, run_suite

            if q.target not in SUITES:
                raise EvalError(f"unknown suite {q.target!r}")
            rep = run_suite(q.target, q.extra[0], self.cfg.seed)
            detail = f"{rep.resolved} resolved, {rep.skipped} skipped, {len(rep.failures)} failed"
            return rep.ok, "consistent-with-sample", detail, rep.ok
        raise EvalError(f"unknown query {k!r}")


# ---------------------------------------------------------------------------
# records


def render_value(v):
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, (Principal, Limit)):
        return format_point(v)
    if isinstance(v, tuple) and len(v) == 2 and isinstance(v[0], (SymbolicSet, FiniteSet)):
        return format_set(v[0], v[1] if isinstance(v[0], SymbolicSet) else None)
    if isinstance(v, (SymbolicSet, FiniteSet)):
        return format_set(v)
    return str(v)


def _record(query: str, value=None, label="exact", precision=None, status="ok", detail=None) -> dict:
    rec = {"query": query, "value": value, "label": label, "precision": precision, "status": status}
    if detail is not None:
        rec["detail"] = detail
    return rec


def _matches(ev: Evaluator, raw, expected) -> bool:
    if isinstance(expected, bool):
        return raw is expected
    if isinstance(expected, tuple) and expected and expected[0] == "undetermined":
        return False
    if isinstance(expected, (dsl.Pt, dsl.Lim, dsl.LimInf)):
        return isinstance(raw, (Principal, Limit)) and raw == ev.point(expected)
    want, _ = ev.setexpr(expected)
    got = raw[0] if isinstance(raw, tuple) else raw
    if not isinstance(got, (SymbolicSet, FiniteSet)) or got.arity != want.arity:
        return False
    return is_empty(difference(got, want)) and is_empty(difference(want, got))


def evaluate_query(session: Session, stmt) -> dict:
    ev = Evaluator(session)
    text = dsl.fmt_statement(stmt)
    q = stmt.query if isinstance(stmt, dsl.Expect) else stmt
    t0 = time.perf_counter()
    try:
        raw, label, detail, ok = ev.query(q)
    except PrecisionError as e:
        rec = _record(text, None, "exact", {"modulus": e.modulus}, "undetermined")
        if isinstance(stmt, dsl.Expect):
            exp = stmt.value
            hit = isinstance(exp, tuple) and exp and exp[0] == "undetermined" and exp[1] == e.modulus
            rec["status"] = "ok" if hit else "fail"
            rec["expected"] = dsl.fmt_expect_value(exp)
        return _timed(session, rec, t0)
    except (UltrextError, ValueError, TypeError, KeyError) as e:
        return _timed(session, _record(text, None, "exact", None, "error", f"{type(e).__name__}: {e}"), t0)
    rec = _record(text, render_value(raw), label, None, "ok" if ok else "fail", detail)
    if isinstance(stmt, dsl.Expect):
        try:
            hit = _matches(ev, raw, stmt.value)
        except (UltrextError, ValueError) as e:
            hit = False
            rec["detail"] = f"{type(e).__name__}: {e}"
        rec["expected"] = dsl.fmt_expect_value(stmt.value)
        rec["status"] = "ok" if hit and ok else "fail"
    return _timed(session, rec, t0)


def _timed(session: Session, rec: dict, t0: float) -> dict:
    if session.config.timing:
        rec["seconds"] = round(time.perf_counter() - t0, 6)
    return rec


def apply_directive(session: Session, d: dsl.Directive) -> None:
    c = session.config
    if d.name == "precision":
        if d.args[0] < 1:
            raise EvalError("precision must be positive")
        session.config = replace(c, precision=d.args[0])
    elif d.name == "seed":
        session.config = replace(c, seed=d.args[0])
    elif d.name == "backend":
        if d.args[0] == "finite":
            if d.args[1] < 1:
                raise EvalError("a finite universe needs at least one element")
            session.config = replace(c, backend="finite", universe=d.args[1])
        else:
            session.config = replace(c, backend="symbolic", universe=0)
    else:
        raise EvalError(f"directive :{d.name} is only available in the REPL")


def execute(session: Session, stmt) -> dict | None:
    """Run one statement; definitions and directives return None unless they fail."""
    try:
        if isinstance(stmt, dsl.Directive):
            apply_directive(session, stmt)
            return None
        if isinstance(stmt, dsl.Define):
            session.env[stmt.name] = Evaluator(session).definition(stmt.expr)
            return None
    except PrecisionError as e:
        return _record(dsl.fmt_statement(stmt), None, "exact", {"modulus": e.modulus}, "undetermined")
    except (UltrextError, ValueError, TypeError, KeyError) as e:
        return _record(dsl.fmt_statement(stmt), None, "exact", None, "error", f"{type(e).__name__}: {e}")
    return evaluate_query(session, stmt)


def run(
    script: dsl.Script,
    config: SessionConfig = SessionConfig(),
    parallel: bool = False,
    fail_fast: bool = False,
) -> list[dict]:
    session = Session(config)
    if not parallel:
        out = []
        for stmt in script.statements:
            rec = execute(session, stmt)
            if rec is not None:
                out.append(rec)
                if fail_fast and rec["status"] in ("fail", "error"):
                    break
        return out
    # queries see the environment as it was when they appeared
    jobs: list[Callable[[], dict | None]] = []
    for stmt in script.statements:
        if isinstance(stmt, (dsl.Directive, dsl.Define)):
            rec = execute(session, stmt)
            if rec is not None:
                jobs.append(lambda r=rec: r)
        else:
            snap = Session(session.config, dict(session.env))
            jobs.append(lambda s=snap, st=stmt: evaluate_query(s, st))
    with ThreadPoolExecutor() as pool:
        return list(pool.map(lambda j: j(), jobs))
