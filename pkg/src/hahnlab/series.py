"""Truncated generalized power series with exponents in an ordered group.

A Series is a finite list of (exponent, coefficient) terms together with a
truncation exponent: terms at or above ``trunc`` have been discarded, terms
below it are exact.  Coefficients live in Q or F_p.

Inversion is the one place where infinite behaviour can appear.  Writing
f = c * X^v * (1 - r) with v(r) = delta > 0, the geometric expansion of
1/(1 - r) contributes terms at every multiple of delta; whether infinitely
many of those land below the requested truncation is decided exactly by
comparing hat indices (delta infinitesimal relative to the truncation scale
means the expansion never escapes), before any term is generated.  A term
budget backs this up against combinatorial blow-up in the finite case.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Optional, Tuple

from .errors import (
    DomainError,
    GroupMismatchError,
    InfiniteExpansionError,
    InputFormatError,
)
from .groups import (
    GroupElement,
    GroupSpec,
    cmp,
    element_from_json,
    hat_index,
    scalar_mul,
)
from .monoids import MonoidExpr, member

FIELD_Q = "Q"
FIELD_FP = "Fp"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    kind: str
    p: Optional[int] = None

    def __post_init__(self):
        if self.kind == FIELD_Q:
            if self.p is not None:
                raise InputFormatError("Q takes no characteristic")
        elif self.kind == FIELD_FP:
            if not isinstance(self.p, int) or not _is_prime(self.p):
                raise InputFormatError("Fp needs a prime p")
        else:
            raise InputFormatError("unknown field kind %r" % (self.kind,))

    def coerce(self, c):
        if self.kind == FIELD_Q:
            if isinstance(c, bool):
                raise InputFormatError("bool is not a rational coefficient")
            return Fraction(c)
        if isinstance(c, bool) or not isinstance(c, int):
            raise InputFormatError("F_p coefficients are integers")
        return c % self.p

    def zero(self):
        return Fraction(0) if self.kind == FIELD_Q else 0

    def one(self):
        return Fraction(1) if self.kind == FIELD_Q else 1

    def is_zero(self, c) -> bool:
        return c == 0

    def add(self, a, b):
        return a + b if self.kind == FIELD_Q else (a + b) % self.p

    def neg(self, a):
        return -a if self.kind == FIELD_Q else (-a) % self.p

    def mul(self, a, b):
        return a * b if self.kind == FIELD_Q else (a * b) % self.p

    def inv(self, a):
        if self.is_zero(a):
            raise DomainError("zero has no inverse")
        if self.kind == FIELD_Q:
            return 1 / Fraction(a)
        return pow(a, self.p - 2, self.p)

    def value_to_json(self, c):
        if self.kind == FIELD_Q:
            return int(c) if c.denominator == 1 else str(c)
        return c

    def value_from_json(self, obj):
        return self.coerce(Fraction(obj) if self.kind == FIELD_Q else obj)

    def to_json(self):
        if self.kind == FIELD_Q:
            return "Q"
        return "F%d" % self.p

    @classmethod
    def from_json(cls, obj) -> "FieldSpec":
        if not isinstance(obj, str):
            raise InputFormatError("field JSON must be 'Q' or 'F<p>'")
        if obj == "Q":
            return cls(FIELD_Q)
        if obj.startswith("F"):
            try:
                return cls(FIELD_FP, int(obj[1:]))
            except ValueError as exc:
                raise InputFormatError("bad field %r (use Q or F<p>)" % (obj,)) from exc
        raise InputFormatError("bad field %r (use Q or F<p>)" % (obj,))


_TERM_KEY = cmp_to_key(lambda u, v: cmp(u[0], v[0]))


def _normalize(field: FieldSpec, terms, trunc: GroupElement):
    acc = {}
    for g, c in terms:
        if g in acc:
            acc[g] = field.add(acc[g], c)
        else:
            acc[g] = c
    out = [
        (g, c)
        for g, c in acc.items()
        if not field.is_zero(c) and cmp(g, trunc) < 0
    ]
    out.sort(key=_TERM_KEY)
    return tuple(out)


@dataclass(frozen=True)
class Series:
    group: GroupSpec
    field: FieldSpec
    terms: Tuple[Tuple[GroupElement, object], ...]
    trunc: GroupElement

    def __post_init__(self):
        if self.trunc.spec != self.group:
            raise GroupMismatchError("truncation exponent over a different group")
        for g, _ in self.terms:
            if g.spec != self.group:
                raise GroupMismatchError("term exponent over a different group")

    # -- inspection ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def valuation(self) -> GroupElement:
        if not self.terms:
            raise DomainError("the zero series has no valuation")
        return self.terms[0][0]

    def leading_coefficient(self):
        if not self.terms:
            raise DomainError("the zero series has no leading coefficient")
        return self.terms[0][1]

    def coefficient(self, g: GroupElement):
        for e, c in self.terms:
            if cmp(e, g) == 0:
                return c
        return self.field.zero()

    def constant_coefficient(self):
        return self.coefficient(self.group.zero())

    def is_unit_in_cone_ring(self) -> bool:
        """Unit of K[[G_(>=0)]]: valuation zero (nonzero constant term and
        nothing below it)."""
        return bool(self.terms) and self.terms[0][0].is_zero()

    def support(self) -> Tuple[GroupElement, ...]:
        return tuple(g for g, _ in self.terms)

    # -- arithmetic ---------------------------------------------------------

    def _common(self, other: "Series"):
        if self.group != other.group:
            raise GroupMismatchError("series over different groups")
        if self.field != other.field:
            raise DomainError("series over different coefficient fields")
        return self.trunc if cmp(self.trunc, other.trunc) <= 0 else other.trunc

    def __add__(self, other: "Series") -> "Series":
        trunc = self._common(other)
        return Series(
            self.group,
            self.field,
            _normalize(self.field, list(self.terms) + list(other.terms), trunc),
            trunc,
        )

    def __neg__(self) -> "Series":
        return Series(
            self.group,
            self.field,
            tuple((g, self.field.neg(c)) for g, c in self.terms),
            self.trunc,
        )

    def __sub__(self, other: "Series") -> "Series":
        return self + (-other)

    def __mul__(self, other: "Series") -> "Series":
        trunc = self._common(other)
        prods = []
        for g, c in self.terms:
            for h, d in other.terms:
                prods.append((g + h, self.field.mul(c, d)))
        return Series(self.group, self.field, _normalize(self.field, prods, trunc), trunc)

    def scale(self, c) -> "Series":
        c = self.field.coerce(c)
        if self.field.is_zero(c):
            return Series(self.group, self.field, (), self.trunc)
        return Series(
            self.group,
            self.field,
            tuple((g, self.field.mul(c, d)) for g, d in self.terms),
            self.trunc,
        )

    def shift(self, by: GroupElement) -> "Series":
        """Multiply by the monomial X^by (adjusting the truncation with it)."""
        return Series(
            self.group,
            self.field,
            tuple((g + by, c) for g, c in self.terms),
            self.trunc + by,
        )

    def retrunc(self, trunc: GroupElement) -> "Series":
        """Forget terms from ``trunc`` on.  Raising the truncation is refused:
        the discarded terms are not recoverable."""
        if cmp(trunc, self.trunc) > 0:
            raise DomainError("cannot raise a truncation: lost terms are lost")
        return Series(self.group, self.field, _normalize(self.field, self.terms, trunc), trunc)

    # -- io -----------------------------------------------------------------

    def to_json(self):
        return {
            "field": self.field.to_json(),
            "terms": [
                {"exp": g.to_json(), "coef": self.field.value_to_json(c)}
                for g, c in self.terms
            ],
            "trunc": self.trunc.to_json(),
        }

    def __repr__(self):
        if not self.terms:
            body = "0"
        else:
            body = " + ".join("%s*X^%r" % (c, g) for g, c in self.terms)
        return "<series %s  (mod X^%r)>" % (body, self.trunc)


def series(group: GroupSpec, field: FieldSpec, terms, trunc: GroupElement) -> Series:
    """Build a Series from raw (exponent, coefficient) pairs."""
    cooked = [(g, field.coerce(c)) for g, c in terms]
    return Series(group, field, _normalize(field, cooked, trunc), trunc)


def series_from_json(group: GroupSpec, obj) -> Series:
    if not isinstance(obj, dict):
        raise InputFormatError("series JSON must be an object")
    try:
        field = FieldSpec.from_json(obj["field"])
        terms = [
            (element_from_json(group, t["exp"]), field.value_from_json(t["coef"]))
            for t in obj["terms"]
        ]
        trunc = element_from_json(group, obj["trunc"])
    except (KeyError, TypeError) as exc:
        raise InputFormatError("malformed series JSON: %s" % (exc,)) from exc
    return Series(group, field, _normalize(field, terms, trunc), trunc)


def monomial(group: GroupSpec, field: FieldSpec, g: GroupElement, trunc: GroupElement) -> Series:
    return series(group, field, [(g, field.one())], trunc)


def one(group: GroupSpec, field: FieldSpec, trunc: GroupElement) -> Series:
    return monomial(group, field, group.zero(), trunc)


def zero(group: GroupSpec, field: FieldSpec, trunc: GroupElement) -> Series:
    return Series(group, field, (), trunc)


# ---------------------------------------------------------------------------
# inversion

DEFAULT_TERM_BUDGET = 100_000


def invert(f: Series, trunc: Optional[GroupElement] = None, term_budget: int = DEFAULT_TERM_BUDGET) -> Series:
    """The inverse series, exact below ``trunc``.

    Raises InfiniteExpansionError when the expansion provably has infinitely
    many terms below the target truncation; that happens exactly when the
    valuation gap of the non-leading part is infinitesimal relative to the
    truncation scale.  For a finite input series the inverse is either a
    monomial or genuinely infinitely supported, so this is the only way
    support below the target can fail to be finite.
    """
    if f.is_zero():
        raise DomainError("the zero series is not invertible")
    group, field = f.group, f.field
    v = f.valuation()
    c = f.leading_coefficient()
    if trunc is None:
        trunc = f.trunc - scalar_mul(2, v)
    # work with the tail r where f = c X^v (1 - r), v(r) > 0
    cinv = field.inv(c)
    r_terms = tuple(
        (g - v, field.neg(field.mul(cinv, d))) for g, d in f.terms[1:]
    )
    # target for the geometric part: terms of sum r^k strictly below T'
    tprime = trunc + v
    if tprime.sign() <= 0:
        return Series(group, field, (), trunc)
    if not r_terms:
        out = [(scalar_mul(-1, v), cinv)]
        return Series(group, field, _normalize(field, out, trunc), trunc)
    delta = r_terms[0][0]
    if hat_index(delta) > hat_index(tprime):
        raise InfiniteExpansionError(
            "inverse has infinitely many terms below the truncation: the "
            "expansion step is infinitesimal relative to the truncation scale"
        )
    r = Series(group, field, _normalize(field, r_terms, tprime), tprime)
    acc = one(group, field, tprime)
    cur = one(group, field, tprime)
    produced = 0
    while True:
        cur = cur * r
        if cur.is_zero():
            break
        produced += len(cur.terms)
        if produced > term_budget:
            raise InfiniteExpansionError(
                "inverse expansion exceeded the term budget (%d terms)" % term_budget
            )
        acc = acc + cur
    out = [(g - v, field.mul(cinv, d)) for g, d in acc.terms]
    return Series(group, field, _normalize(field, out, trunc), trunc)


def member_ring(f: Series, S: MonoidExpr) -> bool:
    """Does every computed term exponent lie in S?  (A statement about the
    series as known below its truncation.)"""
    if f.group != S.group:
        raise GroupMismatchError("series and monoid over different groups")
    return all(member(S, g) for g in f.support())
