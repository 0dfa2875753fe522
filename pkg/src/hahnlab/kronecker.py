"""Nagata and Kronecker function rings over series fields, window-free.

Everything here works with polynomials in one variable t whose coefficients
are (finite) generalized series, and with formal fractions of such
polynomials.  The valuations in play are the coordinate valuations of the
exponent group: pick some coordinates in some order, read exponents through
that projection lexicographically.  Each such projection extends to
polynomials by taking the minimum over coefficients (the Gauss/trivial
extension), and a fraction belongs to the extension's valuation ring when the
numerator's value is at least the denominator's.

The membership tests for the two function-ring constructions differ in kind:

* the Kronecker-style family test is exact (finitely many exact valuation
  comparisons);
* the Nagata-style test for a general monomial ring is certificate-based: a
  fraction is exhibited as a member by scaling the fraction until both parts
  have coefficients in the ring and the denominator has a unit coefficient.
  A missing certificate is reported as not-certified, never as a refutation.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Optional, Sequence, Tuple

from .errors import (
    DomainError,
    GroupMismatchError,
    InputFormatError,
    NoUnitCombinationError,
)
from .groups import GroupElement, GroupSpec, scalar_mul
from .rings import (
    FullValuation,
    LocalizedValuation,
    RingDesc,
    contains_exponent,
    contains_series,
)
from .series import FieldSpec, Series, monomial, one as series_one, series_from_json


# ---------------------------------------------------------------------------
# coordinate valuations


@dataclass(frozen=True)
class CoordinateValuation:
    """Exponents read through the listed coordinates (1-based), lexicographically."""

    group: GroupSpec
    perm: Tuple[int, ...]

    def __post_init__(self):
        if not self.perm:
            raise InputFormatError("a coordinate valuation needs at least one coordinate")
        if len(set(self.perm)) != len(self.perm):
            raise InputFormatError("coordinate list has repeats")
        for i in self.perm:
            if not 1 <= i <= self.group.rank:
                raise InputFormatError("coordinate index %d out of range" % i)

    @property
    def comps(self):
        return tuple(self.group.components[i - 1] for i in self.perm)

    def value(self, g: GroupElement) -> Tuple:
        if g.spec != self.group:
            raise GroupMismatchError("element over a different group")
        return tuple(g.coords[i - 1] for i in self.perm)

    def cmp_values(self, a: Tuple, b: Tuple) -> int:
        for comp, x, y in zip(self.comps, a, b):
            s = comp.cmp(x, y)
            if s != 0:
                return s
        return 0

    def value_sign(self, a: Tuple) -> int:
        for comp, x in zip(self.comps, a):
            s = comp.sign(x)
            if s != 0:
                return s
        return 0

    def series_value(self, f: Series) -> Tuple:
        """Minimum projected exponent over the support.  The projection does
        not respect the ambient lex order, so this really scans every term."""
        if f.is_zero():
            raise DomainError("the zero series has no value")
        best = None
        for g, _ in f.terms:
            v = self.value(g)
            if best is None or self.cmp_values(v, best) < 0:
                best = v
        return best

    def to_json(self):
        return {"perm": list(self.perm)}

    @classmethod
    def from_json(cls, group: GroupSpec, obj) -> "CoordinateValuation":
        if not isinstance(obj, dict) or "perm" not in obj:
            raise InputFormatError("coordinate valuation JSON needs 'perm'")
        return cls(group, tuple(int(i) for i in obj["perm"]))


def as_view(R: RingDesc) -> CoordinateValuation:
    """The coordinate-valuation view of a valuation-kind ring descriptor."""
    if isinstance(R, FullValuation):
        return CoordinateValuation(R.group, tuple(range(1, R.group.rank + 1)))
    if isinstance(R, LocalizedValuation):
        return CoordinateValuation(R.group, tuple(range(1, R.keep + 1)))
    raise DomainError("only valuation ring descriptors have a coordinate view")


def full_overring_family(group: GroupSpec) -> Tuple[CoordinateValuation, ...]:
    """The chain of coarsenings of the full cone valuation: keep the first
    coordinate, the first two, ..., all of them.  For a ring whose integral
    closure is the full valuation ring this is the complete family of
    valuation overrings."""
    return tuple(
        CoordinateValuation(group, tuple(range(1, k + 1))) for k in range(1, group.rank + 1)
    )


# ---------------------------------------------------------------------------
# polynomials in t and fractions


@dataclass(frozen=True)
class TPoly:
    """Polynomial in t with series coefficients; coeffs[k] multiplies t^k."""

    group: GroupSpec
    field: FieldSpec
    coeffs: Tuple[Series, ...]

    def __post_init__(self):
        for c in self.coeffs:
            if c.group != self.group:
                raise GroupMismatchError("coefficient over a different group")
            if c.field != self.field:
                raise DomainError("coefficient over a different field")
        while self.coeffs and self.coeffs[-1].is_zero():
            object.__setattr__(self, "coeffs", self.coeffs[:-1])

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def shift_exponents(self, by: GroupElement) -> "TPoly":
        return TPoly(self.group, self.field, tuple(c.shift(by) for c in self.coeffs))

    def to_json(self):
        return [c.to_json() for c in self.coeffs]

    @classmethod
    def from_json(cls, group: GroupSpec, field: FieldSpec, obj) -> "TPoly":
        if not isinstance(obj, list):
            raise InputFormatError("polynomial JSON is a list of series, ascending t powers")
        coeffs = tuple(series_from_json(group, c) for c in obj)
        for c in coeffs:
            if c.field != field:
                raise DomainError("coefficient field mismatch in polynomial JSON")
        return cls(group, field, coeffs)


@dataclass(frozen=True)
class RatFunc:
    num: TPoly
    den: TPoly

    def __post_init__(self):
        if self.num.group != self.den.group:
            raise GroupMismatchError("numerator and denominator over different groups")
        if self.num.field != self.den.field:
            raise DomainError("numerator and denominator over different fields")
        if self.den.is_zero():
            raise DomainError("zero denominator")

    @property
    def group(self):
        return self.num.group

    @property
    def field(self):
        return self.num.field

    def to_json(self):
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, group: GroupSpec, field: FieldSpec, obj) -> "RatFunc":
        if not isinstance(obj, dict):
            raise InputFormatError("fraction JSON must be an object")
        try:
            return cls(
                TPoly.from_json(group, field, obj["num"]),
                TPoly.from_json(group, field, obj["den"]),
            )
        except KeyError as exc:
            raise InputFormatError("missing fraction field %s" % (exc,)) from exc


def tpoly_valuation(P: TPoly, view: CoordinateValuation) -> Tuple:
    """Gauss extension: the minimum view-value over nonzero coefficients."""
    if P.group != view.group:
        raise GroupMismatchError("polynomial over a different group")
    best = None
    for c in P.coeffs:
        if c.is_zero():
            continue
        v = view.series_value(c)
        if best is None or view.cmp_values(v, best) < 0:
            best = v
    if best is None:
        raise DomainError("the zero polynomial has no value")
    return best


def in_nagata_valuation(phi: RatFunc, view: CoordinateValuation) -> bool:
    """Membership of the fraction in the Gauss extension's valuation ring."""
    if phi.num.is_zero():
        return True
    vn = tpoly_valuation(phi.num, view)
    vd = tpoly_valuation(phi.den, view)
    return view.cmp_values(vn, vd) >= 0


def in_kr_family(phi: RatFunc, family: Sequence[CoordinateValuation]) -> bool:
    """Membership in the intersection of all the family's extension rings."""
    return all(in_nagata_valuation(phi, view) for view in family)


# ---------------------------------------------------------------------------
# linear fractions 1/(t + X^g) and the Nagata membership dichotomy


def _unit_exponent(spec: GroupSpec) -> GroupElement:
    comp = spec.components[0]
    first = comp.coerce((1, 0)) if comp.kind == "Zsqrt" else comp.coerce(1)
    return GroupElement(spec, (first,) + tuple(c.zero() for c in spec.components[1:]))


def linear_fraction(group: GroupSpec, field: FieldSpec, g: GroupElement) -> RatFunc:
    """The fraction 1/(t + X^g), written with nonnegative exponents: for
    g < 0 the same function is X^{-g} / (X^{-g} t + 1)."""
    if g.spec != group:
        raise GroupMismatchError("exponent over a different group")
    w = g if g.sign() >= 0 else -g
    trunc = scalar_mul(4, w) + _unit_exponent(group)
    one_s = series_one(group, field, trunc)
    if g.sign() >= 0:
        num = TPoly(group, field, (one_s,))
        den = TPoly(group, field, (monomial(group, field, g, trunc), one_s))
    else:
        num = TPoly(group, field, (monomial(group, field, -g, trunc),))
        den = TPoly(group, field, (one_s, monomial(group, field, -g, trunc)))
    return RatFunc(num, den)


def linear_fraction_in_nagata(g: GroupElement, D: RingDesc) -> bool:
    """Does 1/(t + X^g) lie in the Nagata ring D(t)?

    For a local monomial ring the dichotomy is exact: the fraction is a
    member when X^g in D (the denominator then has unit content through the
    t-coefficient) or when X^{-g} in D (rescale by X^{-g}; the constant
    coefficient 1 carries the unit content), and in no other case, because
    any presentation's denominator content would have to reach a unit using
    exponents that all miss D."""
    return contains_exponent(D, g) or contains_exponent(D, scalar_mul(-1, g))


@dataclass(frozen=True)
class NagataCounterexample:
    exponent: GroupElement
    phi: RatFunc
    in_kronecker_family: bool
    in_nagata_ring: bool
    note: str

    def to_json(self):
        return {
            "exponent": self.exponent.to_json(),
            "phi": self.phi.to_json(),
            "in_kronecker_family": self.in_kronecker_family,
            "in_nagata_ring": self.in_nagata_ring,
            "note": self.note,
        }


def nagata_counterexample(
    D: RingDesc,
    family: Sequence[CoordinateValuation],
    field: FieldSpec,
    window,
) -> Optional[NagataCounterexample]:
    """First window exponent g (lex order) with neither X^g nor X^{-g} in D.

    The associated fraction 1/(t + X^g) then sits in every extension ring of
    the family (fractions with monomial entries always do) but outside D(t),
    separating the two constructions.  Both facts are recomputed for the
    returned certificate rather than assumed."""
    for g in window.elements():
        if g.is_zero():
            continue
        if contains_exponent(D, g) or contains_exponent(D, scalar_mul(-1, g)):
            continue
        phi = linear_fraction(D.group, field, g)
        in_kr = in_kr_family(phi, family)
        in_nagata = linear_fraction_in_nagata(g, D)
        if in_kr and not in_nagata:
            return NagataCounterexample(
                g,
                phi,
                in_kr,
                in_nagata,
                "neither the exponent nor its negative lies in the ring",
            )
    return None


# ---------------------------------------------------------------------------
# semilocal intersections and unit combinations


@dataclass(frozen=True)
class SemilocalRing:
    """Intersection of pairwise incomparable coordinate valuation rings,
    together with a reservoir of constants whose pairwise differences are
    units (distinct nonzero field elements).  The reservoir must hold at
    least s - 1 constants for s valuation rings; over F_p that bounds how
    many rings one instance can serve."""

    group: GroupSpec
    field: FieldSpec
    views: Tuple[CoordinateValuation, ...]
    units: Tuple

    def __post_init__(self):
        if not self.views:
            raise InputFormatError("need at least one valuation")
        for v in self.views:
            if v.group != self.group:
                raise GroupMismatchError("valuation over a different group")
        for i, vi in enumerate(self.views):
            for j, vj in enumerate(self.views):
                if i != j and vi.perm[: len(vj.perm)] == vj.perm:
                    raise InputFormatError(
                        "valuations %d and %d are comparable (one coordinate "
                        "list is a prefix of the other)" % (j, i)
                    )
        units = tuple(self.field.coerce(u) for u in self.units)
        object.__setattr__(self, "units", units)
        if any(self.field.is_zero(u) for u in units):
            raise InputFormatError("unit reservoir contains zero")
        if len(set(units)) != len(units):
            raise InputFormatError("unit reservoir has repeats")
        if len(units) < len(self.views) - 1:
            raise InputFormatError(
                "need at least %d reservoir constants for %d valuations"
                % (len(self.views) - 1, len(self.views))
            )

    def contains(self, f: Series) -> bool:
        if f.is_zero():
            return True
        return all(v.value_sign(v.series_value(f)) >= 0 for v in self.views)

    def is_unit(self, f: Series) -> bool:
        if f.is_zero():
            return False
        return all(v.value_sign(v.series_value(f)) == 0 for v in self.views)

    def to_json(self):
        return {
            "views": [v.to_json() for v in self.views],
            "units": [self.field.value_to_json(u) for u in self.units],
            "field": self.field.to_json(),
        }


def _generates_unit_ideal(A: SemilocalRing, xs: Sequence[Series]) -> Optional[int]:
    """Index of the first valuation where every x is positive (the ideal is
    then contained in that maximal ideal), or None when the xs generate."""
    for k, v in enumerate(A.views):
        if all(x.is_zero() or v.value_sign(v.series_value(x)) > 0 for x in xs):
            return k
    return None


def _combination(A: SemilocalRing, delta: Sequence, xs: Sequence[Series]) -> Series:
    terms = [x.scale(d) for d, x in zip(delta, xs)]
    return reduce(lambda a, b: a + b, terms)


def semilocal_unit_combination(A: SemilocalRing, xs: Sequence[Series]) -> Tuple:
    """Coefficients from the reservoir (or zero) making sum(delta_i * x_i) a
    unit of A, given that the x_i generate the unit ideal.

    Induction on the number of generators.  When the others already generate,
    the last gets coefficient zero.  When the last is a unit everywhere, it
    alone suffices.  Otherwise the valuations where the last element is
    positive form a proper nonempty subfamily; the other generators generate
    there, a recursive combination c is a unit there, and c + u * x_last is a
    unit of all of A for some reservoir u: at each remaining valuation at
    most one u can cancel (two cancelling u's would force the difference
    (u - u') * x_last, hence x_last, to be positive there), and at least one
    valuation is already safe, so the reservoir of s - 1 constants cannot be
    exhausted."""
    xs = tuple(xs)
    if not xs:
        raise InputFormatError("need at least one element")
    for x in xs:
        if x.group != A.group:
            raise GroupMismatchError("element over a different group")
        if not A.contains(x):
            raise DomainError("elements must lie in the intersection ring")
    bad = _generates_unit_ideal(A, xs)
    if bad is not None:
        raise NoUnitCombinationError(
            "the elements do not generate the unit ideal: all are positive at "
            "valuation %d" % bad,
            valuation_index=bad,
        )
    return _unit_combination(A, xs)


def _unit_combination(A: SemilocalRing, xs: Tuple[Series, ...]) -> Tuple:
    zero = A.field.zero()
    n = len(xs)
    if n == 1:
        return (A.units[0],)
    if _generates_unit_ideal(A, xs[:-1]) is None:
        return _unit_combination(A, xs[:-1]) + (zero,)
    xn = xs[-1]
    if A.is_unit(xn):
        return tuple(zero for _ in xs[:-1]) + (A.units[0],)
    pos = tuple(
        k
        for k, v in enumerate(A.views)
        if xn.is_zero() or v.value_sign(v.series_value(xn)) > 0
    )
    sub = SemilocalRing(A.group, A.field, tuple(A.views[k] for k in pos), A.units)
    delta = _unit_combination(sub, xs[:-1])
    c = _combination(A, delta, xs[:-1])
    for u in A.units:
        candidate = c + xn.scale(u)
        if A.is_unit(candidate):
            return delta + (u,)
    raise NoUnitCombinationError(
        "reservoir exhausted without reaching a unit; the reservoir is too "
        "small for this configuration"
    )


# ---------------------------------------------------------------------------
# intersection of a Kronecker family ring with a Nagata ring

MEMBER = "member"
NOT_MEMBER = "not_member"
NOT_CERTIFIED = "not_certified"


@dataclass(frozen=True)
class IntersectionVerdict:
    status: str
    scaling: Optional[GroupElement] = None
    unit_index: Optional[int] = None
    note: str = ""

    def to_json(self):
        return {
            "status": self.status,
            "scaling": None if self.scaling is None else self.scaling.to_json(),
            "unit_index": self.unit_index,
            "note": self.note,
        }


def _is_unit_of(A: RingDesc, f: Series) -> bool:
    """Units of a local monomial ring: members with nonzero constant term
    (the inverse's support stays in the monoid generated by the support)."""
    return contains_series(A, f) and not f.field.is_zero(f.constant_coefficient())


def in_kr_nagata_intersection(
    phi: RatFunc,
    family: Sequence[CoordinateValuation],
    A: RingDesc,
) -> IntersectionVerdict:
    """Membership of phi in (family intersection ring) intersect A(t).

    Outside the family is an exact refutation.  Inside it, membership in the
    Nagata ring A(t) is certified by a monomial scaling X^c after which both
    polynomials have all coefficients in A and the denominator has a unit
    coefficient; candidate scalings are the denominator coefficient
    valuations and zero.  When no candidate works the verdict is
    not-certified: the search is sound, not complete."""
    if phi.num.is_zero():
        return IntersectionVerdict(MEMBER, note="the zero fraction")
    if not in_kr_family(phi, family):
        return IntersectionVerdict(
            NOT_MEMBER, note="outside an extension ring of the family"
        )
    candidates = [None]  # None encodes no scaling
    for c in phi.den.coeffs:
        if not c.is_zero():
            candidates.append(c.valuation())
    seen = set()
    for cand in candidates:
        key = None if cand is None else cand
        if key in seen:
            continue
        seen.add(key)
        if cand is None:
            num, den = phi.num, phi.den
        else:
            shift = scalar_mul(-1, cand)
            num, den = phi.num.shift_exponents(shift), phi.den.shift_exponents(shift)
        if not all(contains_series(A, c) for c in num.coeffs):
            continue
        if not all(contains_series(A, c) for c in den.coeffs):
            continue
        unit_index = None
        for k, c in enumerate(den.coeffs):
            if not c.is_zero() and _is_unit_of(A, c):
                unit_index = k
                break
        if unit_index is None:
            continue
        return IntersectionVerdict(
            MEMBER,
            scaling=A.group.zero() if cand is None else cand,
            unit_index=unit_index,
            note="scaled presentation with coefficients in the ring and a "
            "unit denominator coefficient",
        )
    return IntersectionVerdict(
        NOT_CERTIFIED,
        note="no monomial scaling certificate found among the denominator "
        "coefficient valuations",
    )
