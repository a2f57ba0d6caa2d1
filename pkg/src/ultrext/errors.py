"""Exception types shared across the workbench."""

from __future__ import annotations


class UltrextError(Exception):
    """Base class for all workbench errors."""


class BackendMismatch(UltrextError, ValueError):
    """Operands live on different backends (finite vs symbolic)."""


class ArityMismatch(UltrextError, ValueError):
    pass


class PrecisionError(UltrextError):
    """A tail point cannot decide a query at its current modulus.

    ``modulus`` is the finer modulus at which the query becomes decidable;
    refine the point to a residue modulo ``modulus`` and retry.
    """

    def __init__(self, modulus: int, detail: str = ""):
        self.modulus = modulus
        self.detail = detail
        msg = f"query needs modulus {modulus}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class NotPseudoPrincipal(UltrextError):
    pass


class UnsupportedQuantifier(UltrextError):
    """Classical quantifier over the symbolic backend without a witness list."""


class BoundExceeded(UltrextError):
    """A finite enumeration would exceed its configured size bound."""


class TotalityError(UltrextError, ValueError):
    """A piecewise-affine operation is not total or leaves the naturals."""
