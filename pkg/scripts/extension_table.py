"""Tabulate both extensions of <= and = over a few principal and limit points."""

import itertools

from ultrext.errors import PrecisionError
from ultrext.extension import ext_rel_star, ext_rel_tilde
from ultrext.points import Limit, Principal
from ultrext.set_algebra import SymbolicSet

RELATIONS = {
    "<=": SymbolicSet.of(2, [((-1, 1), 0)]),
    "=": SymbolicSet.of(2, [((-1, 1), 0), ((1, -1), 0)]),
}
POINTS = [Principal(0), Principal(3), Limit(0, 1), Limit(0, 2), Limit(1, 2)]


def cell(fn, rel, args) -> str:
    try:
        return "T" if fn(rel, list(args)) else "."
    except PrecisionError as e:
        return f"?{e.modulus}"


def main() -> None:
    for name, rel in RELATIONS.items():
        print(f"relation {name}   (tilde / star)")
        for u, v in itertools.product(POINTS, repeat=2):
            print(f"  {str(u):14} {str(v):14} {cell(ext_rel_tilde, rel, (u, v)):>4} {cell(ext_rel_star, rel, (u, v)):>4}")
        print()


if __name__ == "__main__":
    main()
