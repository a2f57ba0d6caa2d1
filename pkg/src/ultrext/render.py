"""Canonical text for sets, points and operations, in DSL syntax."""

from __future__ import annotations

from typing import Sequence

_BASE_NAMES = ("x", "y", "z", "w")


def default_names(k: int) -> list[str]:
    if k <= len(_BASE_NAMES):
        return list(_BASE_NAMES[:k])
    return [f"x{i + 1}" for i in range(k)]


def format_linear(coeffs: Sequence[int], const: int, names: Sequence[str]) -> str:
    parts: list[str] = []
    for a, n in zip(coeffs, names):
        if a == 0:
            continue
        mag = abs(a)
        body = n if mag == 1 else f"{mag}*{n}"
        if not parts:
            parts.append(body if a > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if a > 0 else f"- {body}")
    if const or not parts:
        if not parts:
            parts.append(str(const))
        else:
            parts.append(f"+ {const}" if const > 0 else f"- {-const}")
    return " ".join(parts)


def format_cell(cell, names: Sequence[str]) -> str:
    atoms = []
    for a in cell.ineqs:
        atoms.append(f"{format_linear(a.coeffs, 0, names)} >= {-a.const}")
    for c in cell.congs:
        atoms.append(f"{format_linear(c.coeffs, 0, names)} = {c.residue} mod {c.modulus}")
    return ", ".join(atoms) if atoms else "true"


def format_set(s, names: Sequence[str] | None = None) -> str:
    from .set_algebra import FiniteSet

    if isinstance(s, FiniteSet):
        body = ", ".join("(" + ", ".join(str(x) for x in t) + ")" for t in sorted(s.members))
        return f"table({s.arity}) {{{body}}}"
    names = list(names) if names is not None else default_names(s.arity)
    head = ", ".join(names)
    if not s.cells:
        return f"{{{head} : false}}"
    return " | ".join(f"{{{head} : {format_cell(c, names)}}}" for c in s.cells)


def format_point(p) -> str:
    from .points import Limit, Principal

    if isinstance(p, Principal):
        return f"pt({p.value})"
    if isinstance(p, Limit):
        return f"lim({p.residue} mod {p.modulus})"
    raise TypeError(f"not a point: {p!r}")
