"""Syntax of the query language: tokens, AST, parser and pretty-printer.

The printer emits the canonical form of every node, and parsing that text
gives back an equal AST.  See README.md for the grammar.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .generalized import And, App, Const, Eq, Exists, Forall, Implies, Not, Or, Rel, Var


class ParseError(Exception):
    def __init__(self, line: int, col: int, expected, found: str):
        self.line = line
        self.col = col
        self.expected = sorted(set(expected))
        self.found = found
        super().__init__(
            f"line {line}, column {col}: expected {' or '.join(self.expected)}, found {found!r}"
        )


# ---------------------------------------------------------------------------
# tokens

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<kw>ext~|ext\*|pseudo\?|empty\?|modal-via-ext)
  | (?P<directive>:(?:precision|seed|backend|load|env|quit)\b)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>:=|\|=|->|<=|>=|[{}()\[\],;.:|&~+\-*<>=])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # name int sym kw directive nl eof
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    line, col0 = 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(line, pos - col0 + 1, ["a token"], text[pos])
        kind = m.lastgroup
        tok_text = m.group()
        col = pos - col0 + 1
        if kind == "nl":
            out.append(Token("nl", "\n", line, col))
            line += 1
            col0 = m.end()
        elif kind not in ("ws", "comment"):
            out.append(Token(kind, tok_text, line, col))
        pos = m.end()
    out.append(Token("eof", "", line, pos - col0 + 1))
    return out


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Lin:
    """``sum(c * v) + const`` with terms in order of first appearance."""

    terms: tuple[tuple[int, str], ...] = ()
    const: int = 0


@dataclass(frozen=True)
class Cmp:
    lhs: Lin
    rel: str  # <= < >= > =
    rhs: Lin


@dataclass(frozen=True)
class ModAtom:
    lhs: Lin
    rhs: Lin
    modulus: int


@dataclass(frozen=True)
class BoolAtom:
    value: bool


Atom = Union[Cmp, ModAtom, BoolAtom]


@dataclass(frozen=True)
class SetComp:
    vars: tuple[str, ...]
    atoms: tuple = ()


@dataclass(frozen=True)
class SetTable:
    arity: int
    rows: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class Name:
    name: str


@dataclass(frozen=True)
class SetBin:
    op: str  # | &
    lhs: object
    rhs: object


@dataclass(frozen=True)
class SetCompl:
    body: object


@dataclass(frozen=True)
class SetQuant:
    kind: str  # forall exists
    var: str
    point: object
    body: object


@dataclass(frozen=True)
class Pt:
    value: int


@dataclass(frozen=True)
class Lim:
    residue: int
    modulus: int


@dataclass(frozen=True)
class LimInf:
    pass


@dataclass(frozen=True)
class Piece:
    """``expr if guard else rest``; the last piece has no guard."""

    expr: Lin
    guard: tuple = ()
    rest: object = None


@dataclass(frozen=True)
class OpDef:
    vars: tuple[str, ...]
    body: Piece


@dataclass(frozen=True)
class OpTable:
    arity: int
    values: tuple[int, ...]


@dataclass(frozen=True)
class Family:
    inputs: tuple[str, ...]
    param: str
    body: object  # Piece or SetComp
    at: object


@dataclass(frozen=True)
class Principal_:
    body: object


@dataclass(frozen=True)
class ModelDef:
    entries: tuple[tuple[str, object], ...]


@dataclass(frozen=True)
class GenModelDef:
    entries: tuple[tuple[str, object], ...]


@dataclass(frozen=True)
class Define:
    name: str
    expr: object


@dataclass(frozen=True)
class Directive:
    name: str
    args: tuple


@dataclass(frozen=True)
class Query:
    kind: str
    target: object = None
    args: tuple = ()
    extra: tuple = ()


@dataclass(frozen=True)
class Expect:
    query: Query
    value: object


@dataclass(frozen=True)
class Script:
    statements: tuple


# ---------------------------------------------------------------------------
# parser

_RELS = ("<=", "<", ">=", ">", "=")
_SETUP = {"ext", "pt", "lim", "inf", "mod", "op", "family", "at", "principal", "model", "genmodel", "table", "optable"}
_QUERY_WORDS = {
    "ext~", "ext*", "extmap", "sat", "e", "E", "core", "pseudo?", "homcheck",
    "check", "lim", "lift", "show", "empty?", "suite",
}
_FORMULA_WORDS = {"not", "and", "or", "forall", "exists", "true", "false"}


class Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    # -- helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, expected) -> ParseError:
        t = self.tok
        found = "end of input" if t.kind == "eof" else ("newline" if t.kind == "nl" else t.text)
        return ParseError(t.line, t.col, expected, found)

    def at(self, *texts: str) -> bool:
        return self.tok.kind in ("sym", "name", "kw") and self.tok.text in texts

    def eat(self, text: str) -> Token:
        if not self.at(text):
            raise self.error([repr(text)])
        t = self.tok
        self.i += 1
        return t

    def eat_name(self) -> str:
        if self.tok.kind != "name":
            raise self.error(["a name"])
        t = self.tok
        self.i += 1
        return t.text

    def eat_int(self) -> int:
        neg = False
        if self.at("-"):
            self.i += 1
            neg = True
        if self.tok.kind != "int":
            raise self.error(["an integer"])
        v = int(self.tok.text)
        self.i += 1
        return -v if neg else v

    def skip_nl(self) -> None:
        while self.tok.kind == "nl" or self.at(";"):
            self.i += 1

    def end_statement(self) -> None:
        if self.tok.kind in ("nl", "eof") or self.at(";"):
            if self.tok.kind != "eof":
                self.i += 1
            return
        raise self.error(["newline", "';'"])

    # -- script
    def script(self) -> Script:
        stmts = []
        self.skip_nl()
        while self.tok.kind != "eof":
            stmts.append(self.statement())
            self.end_statement()
            self.skip_nl()
        return Script(tuple(stmts))

    def statement(self):
        t = self.tok
        if t.kind == "directive":
            return self.directive()
        if t.kind == "name" and self.peek().text == ":=" and self.peek().kind == "sym":
            name = self.eat_name()
            self.eat(":=")
            return Define(name, self.definition())
        if self.at("expect"):
            self.i += 1
            query = self.query()
            self.eat("=")
            return Expect(query, self.expect_value())
        return self.query()

    def directive(self):
        t = self.tok
        self.i += 1
        name = t.text[1:]
        if name in ("precision", "seed"):
            return Directive(name, (self.eat_int(),))
        if name == "backend":
            kind = self.eat_name()
            if kind == "finite":
                return Directive(name, ("finite", self.eat_int()))
            if kind == "symbolic":
                return Directive(name, ("symbolic",))
            self.i -= 1
            raise self.error(["'finite'", "'symbolic'"])
        self.i -= 1
        raise self.error(["':precision'", "':seed'", "':backend'"])

    # -- definitions
    def definition(self):
        if self.at("op"):
            return self.opdef()
        if self.at("optable"):
            return self.optable()
        if self.at("family"):
            return self.family()
        if self.at("model"):
            return ModelDef(self.entries(principal=False))
        if self.at("genmodel"):
            return GenModelDef(self.entries(principal=True))
        if self.at("pt", "lim"):
            return self.point()
        return self.setexpr()

    def entries(self, principal: bool):
        self.i += 1
        self.eat("{")
        out = []
        self.skip_nl()
        while not self.at("}"):
            name = self.eat_name()
            self.eat(":=")
            if principal and self.at("principal"):
                self.i += 1
                out.append((name, Principal_(self.definition())))
            else:
                out.append((name, self.definition()))
            if self.at("}"):
                break
            if not (self.tok.kind == "nl" or self.at(";")):
                raise self.error(["newline", "';'", "'}'"])
            self.skip_nl()
        self.eat("}")
        return tuple(out)

    def varlist(self) -> tuple[str, ...]:
        names = [self.eat_name()]
        while self.at(","):
            self.i += 1
            names.append(self.eat_name())
        if len(set(names)) != len(names):
            self.i -= 1
            raise self.error(["distinct variable names"])
        return tuple(names)

    def opdef(self) -> OpDef:
        self.eat("op")
        self.eat("(")
        vs = self.varlist()
        self.eat(")")
        self.eat("->")
        return OpDef(vs, self.piece())

    def optable(self) -> OpTable:
        self.eat("optable")
        self.eat("(")
        k = self.eat_int()
        self.eat(")")
        self.eat("[")
        vals = [self.eat_int()]
        while self.at(","):
            self.i += 1
            vals.append(self.eat_int())
        self.eat("]")
        return OpTable(k, tuple(vals))

    def piece(self) -> Piece:
        expr = self.lin()
        if self.at("if"):
            self.i += 1
            guard = self.atoms()
            self.eat("else")
            return Piece(expr, guard, self.piece())
        return Piece(expr)

    def family(self) -> Family:
        self.eat("family")
        inputs = None
        if self.at("("):
            self.i += 1
            inputs = self.varlist() if not self.at(";") else ()
            self.eat(";")
            param = self.eat_name()
            self.eat(")")
        else:
            param = self.eat_name()
        self.eat("->")
        if self.at("{"):
            body = self.setcomp()
            if inputs is None:
                inputs = body.vars
        else:
            body = self.piece()
            if inputs is None:
                inputs = _infer_inputs(body, param)
        self.eat("at")
        return Family(tuple(inputs), param, body, self.pointexpr())

    # -- linear terms and atoms
    def lin(self) -> Lin:
        acc: dict[str, int] = {}
        const = 0
        sign = 1
        if self.at("-"):
            self.i += 1
            sign = -1
        while True:
            terms, c = self.lin_factor()
            for coef, v in terms:
                acc[v] = acc.get(v, 0) + sign * coef
            const += sign * c
            if self.at("+"):
                sign = 1
            elif self.at("-"):
                sign = -1
            else:
                break
            self.i += 1
        return Lin(tuple((c, v) for v, c in acc.items() if c), const)

    def lin_factor(self):
        if self.tok.kind == "int":
            n = int(self.tok.text)
            self.i += 1
            if self.at("*"):
                self.i += 1
                terms, c = self.lin_primary()
                return [(n * a, v) for a, v in terms], n * c
            return [], n
        return self.lin_primary()

    def lin_primary(self):
        if self.at("("):
            self.i += 1
            inner = self.lin()
            self.eat(")")
            return list(inner.terms), inner.const
        if self.tok.kind == "name" and self.tok.text not in ("if", "else", "mod", "at"):
            return [(1, self.eat_name())], 0
        raise self.error(["an integer", "a variable", "'('"])

    def atom(self):
        if self.at("true", "false"):
            v = self.tok.text == "true"
            self.i += 1
            return BoolAtom(v)
        lhs = self.lin()
        if not self.at(*_RELS):
            raise self.error([repr(r) for r in _RELS])
        rel = self.tok.text
        self.i += 1
        rhs = self.lin()
        if rel == "=" and self.at("mod"):
            self.i += 1
            m = self.eat_int()
            if m < 1:
                self.i -= 1
                raise self.error(["a positive modulus"])
            return ModAtom(lhs, rhs, m)
        return Cmp(lhs, rel, rhs)

    def atoms(self) -> tuple:
        out = [self.atom()]
        while self.at(","):
            self.i += 1
            out.append(self.atom())
        return tuple(out)

    # -- sets
    def setcomp(self) -> SetComp:
        self.eat("{")
        vs = self.varlist() if self.tok.kind == "name" else ()
        self.eat(":")
        atoms = self.atoms()
        self.eat("}")
        return SetComp(vs, atoms)

    def setexpr(self):
        lhs = self.setterm()
        while self.at("|"):
            self.i += 1
            lhs = SetBin("|", lhs, self.setterm())
        return lhs

    def setterm(self):
        lhs = self.setfactor()
        while self.at("&"):
            self.i += 1
            lhs = SetBin("&", lhs, self.setfactor())
        return lhs

    def setfactor(self):
        if self.at("~"):
            self.i += 1
            return SetCompl(self.setfactor())
        if self.at("forall", "exists"):
            kind = self.tok.text
            self.i += 1
            var = self.eat_name()
            self.eat("in")
            pt = self.pointexpr()
            self.eat(".")
            return SetQuant(kind, var, pt, self.setfactor())
        if self.at("("):
            self.i += 1
            inner = self.setexpr()
            self.eat(")")
            return inner
        if self.at("{"):
            return self.setcomp()
        if self.at("table"):
            self.i += 1
            self.eat("(")
            k = self.eat_int()
            self.eat(")")
            self.eat("{")
            rows = []
            while not self.at("}"):
                rows.append(self.int_tuple())
                if not self.at(","):
                    break
                self.i += 1
            self.eat("}")
            return SetTable(k, tuple(rows))
        if self.tok.kind == "name":
            return Name(self.eat_name())
        raise self.error(["'{'", "'('", "'~'", "'forall'", "'exists'", "'table'", "a name"])

    def int_tuple(self) -> tuple[int, ...]:
        self.eat("(")
        vals = []
        if not self.at(")"):
            vals.append(self.eat_int())
            while self.at(","):
                self.i += 1
                vals.append(self.eat_int())
        self.eat(")")
        return tuple(vals)

    # -- points
    def point(self):
        if self.at("pt"):
            self.i += 1
            self.eat("(")
            n = self.eat_int()
            if n < 0:
                self.i -= 1
                raise self.error(["a natural number"])
            self.eat(")")
            return Pt(n)
        if self.at("lim"):
            start = self.tok
            self.i += 1
            self.eat("(")
            if self.at("inf"):
                self.i += 1
                self.eat(")")
                return LimInf()
            r_tok = self.tok
            r = self.eat_int()
            self.eat("mod")
            m = self.eat_int()
            if m < 1 or not 0 <= r < m:
                raise ParseError(r_tok.line, r_tok.col, ["a residue below the modulus"], f"{r} mod {m}")
            self.eat(")")
            return Lim(r, m)
        raise self.error(["'pt'", "'lim'"])

    def pointexpr(self):
        if self.at("pt") or (self.at("lim") and self.peek().text == "("):
            return self.point()
        if self.tok.kind == "name":
            return Name(self.eat_name())
        raise self.error(["'pt'", "'lim'", "a name"])

    def pointargs(self) -> tuple:
        self.eat("(")
        out = []
        if not self.at(")"):
            out.append(self.pointexpr())
            while self.at(","):
                self.i += 1
                out.append(self.pointexpr())
        self.eat(")")
        return tuple(out)

    # -- queries
    def member_ref(self) -> tuple[str, str]:
        model = self.eat_name()
        self.eat(".")
        return (model, self.eat_name())

    def query(self) -> Query:
        t = self.tok
        w = t.text
        if t.kind == "kw" and w in ("ext~", "ext*"):
            self.i += 1
            target = self.setfactor()
            return Query(w, target, self.pointargs())
        if w == "extmap":
            self.i += 1
            return Query(w, Name(self.eat_name()), self.pointargs())
        if w in ("e", "E") and t.kind == "name":
            self.i += 1
            ref = self.member_ref()
            args = self.pointargs() if self.at("(") else ()
            return Query(w, ref, args)
        if w == "core":
            self.i += 1
            return Query(w, self.member_ref())
        if w == "pseudo?":
            self.i += 1
            return Query(w, self.member_ref())
        if w == "lim" and self.peek().text in ("i", "I"):
            self.i += 1
            kind = self.eat_name()
            ref = self.member_ref()
            return Query("lim", ref, self.pointargs(), (kind,))
        if w == "sat":
            self.i += 1
            model = self.eat_name()
            self.eat("|=")
            phi = self.formula()
            val = []
            if self.at("["):
                self.i += 1
                while not self.at("]"):
                    v = self.eat_name()
                    self.eat(":=")
                    val.append((v, self.pointexpr()))
                    if not self.at(","):
                        break
                    self.i += 1
                self.eat("]")
            extra = ()
            if self.at("within"):
                self.i += 1
                extra = self.pointargs()
            return Query("sat", Name(model), (phi, tuple(val)), extra)
        if w == "homcheck":
            self.i += 1
            h = self.eat_name()
            self.eat(":")
            a = self.eat_name()
            self.eat("->")
            b = self.eat_name()
            mode = "tilde"
            if self.at("mode"):
                self.i += 1
                self.eat("=")
                mode = self.eat_name()
                if mode not in ("tilde", "star"):
                    self.i -= 1
                    raise self.error(["'tilde'", "'star'"])
            return Query("homcheck", Name(h), (Name(a), Name(b)), (mode,))
        if w == "check":
            self.i += 1
            self.eat("modal-via-ext")
            return Query("modal-via-ext", self.setfactor())
        if w == "lift":
            self.i += 1
            p = self.pointexpr()
            self.eat("into")
            return Query("lift", p, (), (self.eat_int(),))
        if w == "show":
            self.i += 1
            return Query("show", self.setexpr())
        if w == "empty?":
            self.i += 1
            return Query("empty?", self.setexpr())
        if w == "suite":
            self.i += 1
            name = self.eat_name_dashed()
            trials = 100
            if self.at("trials"):
                self.i += 1
                self.eat("=")
                trials = self.eat_int()
            return Query("suite", name, (), (trials,))
        raise self.error(sorted(_QUERY_WORDS) + ["a definition", "a directive", "'expect'"])

    def eat_name_dashed(self) -> str:
        if self.tok.kind == "kw" and self.tok.text == "modal-via-ext":
            self.i += 1
            return "modal-via-ext"
        parts = [self.eat_name()]
        while self.at("-") and self.peek().kind == "name":
            self.i += 1
            parts.append(self.eat_name())
        return "-".join(parts)

    def expect_value(self):
        if self.at("true", "false"):
            v = self.tok.text == "true"
            self.i += 1
            return v
        if self.at("pt", "lim"):
            return self.point()
        if self.at("undetermined"):
            self.i += 1
            self.eat("(")
            m = self.eat_int()
            self.eat(")")
            return ("undetermined", m)
        return self.setexpr()

    # -- formulas
    def formula(self):
        lhs = self.f_or()
        if self.at("->"):
            self.i += 1
            return Implies(lhs, self.formula())
        return lhs

    def f_or(self):
        lhs = self.f_and()
        while self.at("or"):
            self.i += 1
            lhs = Or(lhs, self.f_and())
        return lhs

    def f_and(self):
        lhs = self.f_unary()
        while self.at("and"):
            self.i += 1
            lhs = And(lhs, self.f_unary())
        return lhs

    def f_unary(self):
        if self.at("not"):
            self.i += 1
            return Not(self.f_unary())
        if self.at("forall", "exists"):
            kind = self.tok.text
            self.i += 1
            v = self.eat_name()
            self.eat(".")
            body = self.formula()
            return Forall(v, body) if kind == "forall" else Exists(v, body)
        if self.at("("):
            self.i += 1
            inner = self.formula()
            self.eat(")")
            return inner
        if self.at("true", "false"):
            v = self.tok.text == "true"
            self.i += 1
            return Const(v)
        t = self.term()
        if self.at("="):
            self.i += 1
            return Eq(t, self.term())
        if isinstance(t, App):
            return Rel(t.fn, t.args)
        raise self.error(["'='", "'('"])

    def term(self):
        name = self.eat_name()
        if name in _FORMULA_WORDS:
            self.i -= 1
            raise self.error(["a term"])
        if self.at("("):
            self.i += 1
            args = []
            if not self.at(")"):
                args.append(self.term())
                while self.at(","):
                    self.i += 1
                    args.append(self.term())
            self.eat(")")
            return App(name, tuple(args))
        return Var(name)


def _var_rank(v: str):
    base = "xyzw"
    return (0, base.index(v), v) if v in base else (1, 0, v)


def _piece_vars(p: Piece) -> list[str]:
    out = [v for _, v in p.expr.terms]
    for a in p.guard:
        for side in _atom_lins(a):
            out.extend(v for _, v in side.terms)
    if p.rest is not None:
        out.extend(_piece_vars(p.rest))
    return out


def _atom_lins(a) -> tuple:
    if isinstance(a, (Cmp, ModAtom)):
        return (a.lhs, a.rhs)
    return ()


def _infer_inputs(body: Piece, param: str) -> tuple[str, ...]:
    vs = {v for v in _piece_vars(body) if v != param}
    return tuple(sorted(vs, key=_var_rank))


def parse(text: str) -> Script:
    return Parser(text).script()


# ---------------------------------------------------------------------------
# pretty-printer


def fmt_lin(l: Lin) -> str:
    parts: list[str] = []
    for c, v in l.terms:
        body = v if abs(c) == 1 else f"{abs(c)}*{v}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    if l.const or not parts:
        if not parts:
            parts.append(str(l.const))
        else:
            parts.append(f"+ {l.const}" if l.const > 0 else f"- {-l.const}")
    return " ".join(parts)


def fmt_atom(a) -> str:
    if isinstance(a, BoolAtom):
        return "true" if a.value else "false"
    if isinstance(a, ModAtom):
        return f"{fmt_lin(a.lhs)} = {fmt_lin(a.rhs)} mod {a.modulus}"
    return f"{fmt_lin(a.lhs)} {a.rel} {fmt_lin(a.rhs)}"


def fmt_point(p) -> str:
    if isinstance(p, Pt):
        return f"pt({p.value})"
    if isinstance(p, Lim):
        return f"lim({p.residue} mod {p.modulus})"
    if isinstance(p, LimInf):
        return "lim(inf)"
    if isinstance(p, Name):
        return p.name
    raise TypeError(p)


def _fmt_set(s, top: bool = True) -> str:
    if isinstance(s, SetComp):
        return "{" + ", ".join(s.vars) + " : " + ", ".join(fmt_atom(a) for a in s.atoms) + "}"
    if isinstance(s, SetTable):
        rows = ", ".join("(" + ", ".join(str(x) for x in r) + ")" for r in s.rows)
        return f"table({s.arity}) {{{rows}}}"
    if isinstance(s, Name):
        return s.name
    if isinstance(s, SetCompl):
        return "~" + _fmt_set(s.body, False)
    if isinstance(s, SetQuant):
        return f"{s.kind} {s.var} in {fmt_point(s.point)} . {_fmt_set(s.body, False)}"
    if isinstance(s, SetBin):
        inner = f"{_fmt_set(s.lhs, False)} {s.op} {_fmt_set(s.rhs, False)}"
        return inner if top else f"({inner})"
    raise TypeError(s)


def fmt_set(s) -> str:
    return _fmt_set(s, True)


def fmt_piece(p: Piece) -> str:
    if not p.guard:
        return fmt_lin(p.expr)
    return f"{fmt_lin(p.expr)} if {', '.join(fmt_atom(a) for a in p.guard)} else {fmt_piece(p.rest)}"


def fmt_term(t) -> str:
    if isinstance(t, Var):
        return t.name
    return f"{t.fn}(" + ", ".join(fmt_term(a) for a in t.args) + ")"


def fmt_formula(phi) -> str:
    if isinstance(phi, Const):
        return "true" if phi.value else "false"
    if isinstance(phi, Eq):
        return f"{fmt_term(phi.lhs)} = {fmt_term(phi.rhs)}"
    if isinstance(phi, Rel):
        return f"{phi.name}(" + ", ".join(fmt_term(a) for a in phi.args) + ")"
    if isinstance(phi, Not):
        return f"not {_fmt_f_atomic(phi.body)}"
    if isinstance(phi, And):
        return f"({fmt_formula(phi.lhs)} and {fmt_formula(phi.rhs)})"
    if isinstance(phi, Or):
        return f"({fmt_formula(phi.lhs)} or {fmt_formula(phi.rhs)})"
    if isinstance(phi, Implies):
        return f"({fmt_formula(phi.lhs)} -> {fmt_formula(phi.rhs)})"
    if isinstance(phi, Forall):
        return f"(forall {phi.var} . {fmt_formula(phi.body)})"
    if isinstance(phi, Exists):
        return f"(exists {phi.var} . {fmt_formula(phi.body)})"
    raise TypeError(phi)


def _fmt_f_atomic(phi) -> str:
    s = fmt_formula(phi)
    if isinstance(phi, (Eq,)):
        return f"({s})"
    return s


def fmt_def(e) -> str:
    if isinstance(e, OpDef):
        return f"op ({', '.join(e.vars)}) -> {fmt_piece(e.body)}"
    if isinstance(e, OpTable):
        return f"optable({e.arity}) [{', '.join(str(v) for v in e.values)}]"
    if isinstance(e, Family):
        body = fmt_set(e.body) if isinstance(e.body, SetComp) else fmt_piece(e.body)
        return f"family ({', '.join(e.inputs)}; {e.param}) -> {body} at {fmt_point(e.at)}"
    if isinstance(e, Principal_):
        return f"principal {fmt_def(e.body)}"
    if isinstance(e, (ModelDef, GenModelDef)):
        head = "model" if isinstance(e, ModelDef) else "genmodel"
        inner = "; ".join(f"{n} := {fmt_def(x)}" for n, x in e.entries)
        return f"{head} {{ {inner} }}" if inner else f"{head} {{ }}"
    if isinstance(e, (Pt, Lim, LimInf)):
        return fmt_point(e)
    return fmt_set(e)


def fmt_query(qn: Query) -> str:
    k = qn.kind
    args = "(" + ", ".join(fmt_point(p) for p in qn.args) + ")" if k not in ("sat", "homcheck") else ""
    if k in ("ext~", "ext*"):
        return f"{k} {_fmt_set(qn.target, False)} {args}"
    if k == "extmap":
        return f"extmap {qn.target.name} {args}"
    if k in ("e", "E"):
        ref = f"{qn.target[0]}.{qn.target[1]}"
        return f"{k} {ref} {args}" if qn.args else f"{k} {ref}"
    if k in ("core", "pseudo?"):
        return f"{k} {qn.target[0]}.{qn.target[1]}"
    if k == "lim":
        return f"lim {qn.extra[0]} {qn.target[0]}.{qn.target[1]} {args}"
    if k == "sat":
        phi, val = qn.args
        s = f"sat {qn.target.name} |= {fmt_formula(phi)}"
        if val:
            s += " [" + ", ".join(f"{v} := {fmt_point(p)}" for v, p in val) + "]"
        if qn.extra:
            s += " within (" + ", ".join(fmt_point(p) for p in qn.extra) + ")"
        return s
    if k == "homcheck":
        return f"homcheck {qn.target.name} : {qn.args[0].name} -> {qn.args[1].name} mode={qn.extra[0]}"
    if k == "modal-via-ext":
        return f"check modal-via-ext {_fmt_set(qn.target, False)}"
    if k == "lift":
        return f"lift {fmt_point(qn.target)} into {qn.extra[0]}"
    if k in ("show", "empty?"):
        return f"{k} {fmt_set(qn.target)}"
    if k == "suite":
        return f"suite {qn.target} trials={qn.extra[0]}"
    raise TypeError(k)


def fmt_expect_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, tuple) and v and v[0] == "undetermined":
        return f"undetermined({v[1]})"
    if isinstance(v, (Pt, Lim, LimInf)):
        return fmt_point(v)
    return fmt_set(v)


def fmt_statement(s) -> str:
    if isinstance(s, Define):
        return f"{s.name} := {fmt_def(s.expr)}"
    if isinstance(s, Directive):
        return ":" + s.name + "".join(f" {a}" for a in s.args)
    if isinstance(s, Expect):
        return f"expect {fmt_query(s.query)} = {fmt_expect_value(s.value)}"
    return fmt_query(s)


def pretty(script: Script) -> str:
    return "".join(fmt_statement(s) + "\n" for s in script.statements)
