"""Monomial rings of generalized power series over ordered groups of finite rank.

The package is organized bottom-up:

  groups     exact ordered groups (lex products of Z, Q, Z[sqrt d]) and windows
  monoids    submonoid expressions, membership, symmetry checks, root closure
  series     truncated generalized power series and exact inversion
  rings      ring descriptors, integral closure, complete integral closure
  kronecker  coordinate valuations, Nagata-style function rings, unit tricks
  scenarios  pinned worked examples, runnable via `hahnlab repro <id>`
"""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import (
    DomainError,
    GroupMismatchError,
    HahnlabError,
    HypothesisError,
    InfiniteExpansionError,
    InputFormatError,
    NoUnitCombinationError,
    PreconditionError,
)
from .groups import (
    GroupElement,
    GroupSpec,
    QuadInt,
    RankOneSpec,
    Window,
    cmp,
    default_window,
    element_from_json,
    hat_index,
)
from .monoids import (
    FiniteSet,
    FullCone,
    GapMonoid,
    HalfLine,
    MaxExcludingVerdict,
    MonoidExpr,
    QuadrantCone,
    Region,
    Shift,
    Stratum,
    SubmonoidReport,
    SymmetricUnion,
    Union,
    WindowBounded,
    Zero,
    check_max_excluding,
    check_submonoid,
    construct_excluding_monoid,
    decompose,
    expr_from_json,
    generates_group,
    member,
    project_drop_first,
    region,
    root_closure,
    union_of,
)
from .series import (
    FieldSpec,
    Series,
    invert,
    member_ring,
    monomial,
    one,
    series,
    series_from_json,
    zero,
)
from .rings import (
    ClosureResult,
    FieldDesc,
    FullValuation,
    IntegralityVerdict,
    LocalizedValuation,
    MonomialRing,
    PullbackRing,
    RingDesc,
    RingVerdict,
    canonical_ring,
    complete_integral_closure,
    contains_exponent,
    contains_series,
    integral_closure,
    is_integral_element,
    is_maximal_excluding,
    is_valuation,
    ring_from_json,
)
from .kronecker import (
    CoordinateValuation,
    IntersectionVerdict,
    NagataCounterexample,
    RatFunc,
    SemilocalRing,
    TPoly,
    as_view,
    full_overring_family,
    in_kr_family,
    in_kr_nagata_intersection,
    in_nagata_valuation,
    linear_fraction,
    linear_fraction_in_nagata,
    nagata_counterexample,
    semilocal_unit_combination,
    tpoly_valuation,
)

__all__ = [name for name in dir() if not name.startswith("_")]
