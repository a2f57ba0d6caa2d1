"""Executable ultrafilter-extension calculus over finite and symbolic backends."""

from .defop import AffineOp, Branch, FiniteMap, FiniteOp, monus, plus
from .errors import (
    ArityMismatch,
    BackendMismatch,
    BoundExceeded,
    NotPseudoPrincipal,
    PrecisionError,
    TotalityError,
    UltrextError,
    UnsupportedQuantifier,
)
from .extension import (
    ExtendedModel,
    Model,
    Signature,
    Verdict,
    check_hom,
    ext_hom,
    ext_map,
    ext_rel_star,
    ext_rel_tilde,
    extend_model,
    is_right_clopen,
)
from .generalized import (
    E_of,
    E_model,
    FamilyInterp,
    GenModel,
    PrincipalInterp,
    app_tilde,
    check_gen_hom,
    core_relation,
    e_model,
    e_of,
    in_tilde,
    is_pseudo_principal,
    satisfies,
)
from .points import LIM_INF, Limit, Principal, equal_points, in_ultrafilter, pushforward, refine
from .quantifier import QuantPrefix, eval_prefix, exists_u, forall_u
from .set_algebra import (
    Affine,
    Cell,
    Cong,
    FiniteSet,
    FiniteUniverse,
    Ineq,
    SymbolicSet,
    complement,
    difference,
    intersect,
    is_empty,
    membership,
    period_profile,
    union,
    witness,
    witness_bound,
)

__version__ = "0.1.0"
