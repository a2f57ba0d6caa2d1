"""Random script text for parser round-trip testing."""

from __future__ import annotations

import random
from dataclasses import dataclass

VARS = ("x", "y", "z", "w")
RELS = ("<=", "<", ">=", ">", "=")


@dataclass(frozen=True)
class ScriptGenConfig:
    statements: tuple[int, int] = (1, 12)
    max_depth: int = 2
    max_coeff: int = 5
    max_const: int = 9
    moduli: tuple[int, ...] = (1, 2, 3, 4, 6)


class _Gen:
    def __init__(self, rng: random.Random, cfg: ScriptGenConfig):
        self.rng = rng
        self.cfg = cfg
        self.points: list[str] = []
        self.sets: list[str] = []
        self.counter = 0

    def fresh(self, prefix: str) -> str:
        self.counter += 1
        return f"{prefix}{self.counter}"

    def sep(self) -> str:
        return self.rng.choice((" ", "  ", " "))

    # -- terms
    def lin(self, vars_: tuple[str, ...]) -> str:
        r = self.rng
        parts = []
        for v in r.sample(vars_, r.randint(0, len(vars_))):
            c = r.randint(-self.cfg.max_coeff, self.cfg.max_coeff) or 1
            body = v if abs(c) == 1 else r.choice((f"{abs(c)}*{v}", f"{abs(c)} * {v}"))
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        k = r.randint(0, self.cfg.max_const)
        if not parts or r.random() < 0.5:
            parts.append(str(k) if not parts else f"+ {k}")
        return " ".join(parts)

    def atom(self, vars_: tuple[str, ...]) -> str:
        r = self.rng
        roll = r.random()
        if roll < 0.08:
            return r.choice(("true", "false"))
        if roll < 0.3:
            m = r.choice(self.cfg.moduli[1:])
            return f"{self.lin(vars_)} = {r.randrange(m)} mod {m}"
        return f"{self.lin(vars_)} {r.choice(RELS)} {self.lin(vars_)}"

    def atoms(self, vars_: tuple[str, ...]) -> str:
        return ", ".join(self.atom(vars_) for _ in range(self.rng.randint(1, 3)))

    def point(self) -> str:
        r = self.rng
        roll = r.random()
        if self.points and roll < 0.15:
            return r.choice(self.points)
        if roll < 0.45:
            return f"pt({r.randint(0, 9)})"
        if roll < 0.6:
            return "lim(inf)"
        m = r.choice(self.cfg.moduli)
        return f"lim({r.randrange(m)} mod {m})"

    def vars(self, k: int) -> tuple[str, ...]:
        return VARS[:k]

    def comp(self, k: int) -> str:
        vs = self.vars(k)
        return "{" + ", ".join(vs) + " : " + self.atoms(vs) + "}"

    def setexpr(self, k: int, depth: int) -> str:
        r = self.rng
        roll = r.random()
        if depth <= 0 or roll < 0.35:
            return self.comp(k)
        if roll < 0.45 and self.sets:
            return r.choice(self.sets)
        if roll < 0.55:
            rows = {tuple(r.randint(0, 3) for _ in range(k)) for _ in range(r.randint(0, 3))}
            body = ", ".join("(" + ", ".join(map(str, t)) + ")" for t in sorted(rows))
            return f"table({k}) {{{body}}}"
        if roll < 0.65:
            return "~" + self.setexpr(k, depth - 1)
        if roll < 0.85:
            op = r.choice(("|", "&"))
            return f"({self.setexpr(k, depth - 1)} {op} {self.setexpr(k, depth - 1)})"
        if k < len(VARS):
            v = VARS[k]
            kind = r.choice(("forall", "exists"))
            return f"{kind} {v} in {self.point()} . {self.comp(k + 1)}"
        return self.comp(k)

    def piece(self, vars_: tuple[str, ...], depth: int) -> str:
        if depth <= 0 or self.rng.random() < 0.5:
            return self.lin(vars_)
        return f"{self.lin(vars_)} if {self.atoms(vars_)} else {self.piece(vars_, depth - 1)}"

    def opdef(self, k: int) -> str:
        vs = self.vars(k)
        return f"op ({', '.join(vs)}) -> {self.piece(vs, self.cfg.max_depth)}"

    def family(self) -> str:
        r = self.rng
        k = r.randint(1, 2)
        vs = self.vars(k)
        if r.random() < 0.3:
            body = "{" + ", ".join(vs) + " : " + self.atoms(vs + ("m",)) + "}"
        else:
            body = self.piece(vs + ("m",), 1)
        return f"family ({', '.join(vs)}; m) -> {body} at {self.point()}"

    def formula(self, depth: int) -> str:
        r = self.rng
        if depth <= 0:
            roll = r.random()
            if roll < 0.1:
                return r.choice(("true", "false"))
            if roll < 0.5:
                return f"F({r.choice(VARS[:2])}) = {r.choice(VARS[:2])}"
            return f"R({r.choice(VARS[:2])}, {r.choice(VARS[:2])})"
        roll = r.random()
        if roll < 0.2:
            return f"not ({self.formula(depth - 1)})"
        if roll < 0.6:
            conn = r.choice(("and", "or", "->"))
            return f"({self.formula(depth - 1)} {conn} {self.formula(depth - 1)})"
        if roll < 0.8:
            return f"{r.choice(('forall', 'exists'))} {r.choice(VARS[:2])} . {self.formula(depth - 1)}"
        return self.formula(0)

    # -- statements
    def definition(self) -> str:
        r = self.rng
        roll = r.random()
        if roll < 0.2:
            name = self.fresh("u")
            text = f"{name} := {self.point()}"
            self.points.append(name)
            return text
        if roll < 0.5:
            name = self.fresh("S")
            text = f"{name} := {self.setexpr(r.randint(1, 2), self.cfg.max_depth)}"
            self.sets.append(name)
            return text
        if roll < 0.65:
            return f"{self.fresh('F')} := {self.opdef(r.randint(1, 2))}"
        if roll < 0.75:
            vals = ", ".join(str(r.randint(0, 2)) for _ in range(3))
            return f"{self.fresh('T')} := optable(1) [{vals}]"
        if roll < 0.87:
            return f"{self.fresh('M')} := model {{ F := {self.opdef(1)}; R := {self.comp(2)} }}"
        entries = [f"F := {self.family()}", f"R := principal {self.comp(2)}"]
        r.shuffle(entries)
        return f"{self.fresh('G')} := genmodel {{ {'; '.join(entries)} }}"

    def args(self, k: int) -> str:
        return "(" + ", ".join(self.point() for _ in range(k)) + ")"

    def query(self) -> str:
        r = self.rng
        k = r.randint(1, 2)
        choice = r.randrange(14)
        if choice == 0:
            return f"ext~ {self.setexpr(k, 1)} {self.args(k)}"
        if choice == 1:
            return f"ext* {self.setexpr(k, 1)} {self.args(k)}"
        if choice == 2:
            return f"extmap Plus {self.args(2)}"
        if choice == 3:
            return f"{r.choice(('e', 'E'))} G.R {self.args(2)}"
        if choice == 4:
            return f"e G.F {self.args(1)}"
        if choice == 5:
            return f"{r.choice(('core', 'pseudo?'))} G.{r.choice(('R', 'F'))}"
        if choice == 6:
            return f"lim {r.choice(('i', 'I'))} G.R {self.args(2)}"
        if choice == 7:
            s = f"sat G |= {self.formula(2)} [x := {self.point()}, y := {self.point()}]"
            if r.random() < 0.5:
                s += f" within {self.args(3)}"
            return s
        if choice == 8:
            return f"homcheck H : A -> B mode={r.choice(('tilde', 'star'))}"
        if choice == 9:
            return f"check modal-via-ext {self.setexpr(2, 1)}"
        if choice == 10:
            return f"lift pt({r.randint(0, 3)}) into {r.randint(4, 8)}"
        if choice == 11:
            return f"{r.choice(('show', 'empty?'))} {self.setexpr(k, 2)}"
        if choice == 12:
            return f"suite ext-map trials={r.randint(1, 50)}"
        expected = r.choice(("true", "false", "pt(2)", "lim(1 mod 3)", "undetermined(4)", self.comp(k)))
        return f"expect ext~ {self.comp(k)} {self.args(k)} = {expected}"

    def directive(self) -> str:
        r = self.rng
        return r.choice(
            (
                f":precision {r.choice(self.cfg.moduli)}",
                f":seed {r.randint(0, 99)}",
                f":backend finite {r.randint(1, 4)}",
                ":backend symbolic",
            )
        )

    def script(self) -> str:
        r = self.rng
        lines = []
        for _ in range(r.randint(*self.cfg.statements)):
            roll = r.random()
            if roll < 0.1:
                stmt = self.directive()
            elif roll < 0.5:
                stmt = self.definition()
            else:
                stmt = self.query()
            if r.random() < 0.1:
                lines.append("# " + self.fresh("note"))
            lines.append(stmt + r.choice(("", "", ";", "  # done")))
        return "\n".join(lines) + r.choice(("", "\n", "\n\n"))


def random_script(rng: random.Random, cfg: ScriptGenConfig = ScriptGenConfig()) -> str:
    return _Gen(rng, cfg).script()
