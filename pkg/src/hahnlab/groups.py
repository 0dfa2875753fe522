"""Exact arithmetic in totally ordered abelian groups of finite rank.

A group is a finite lexicographic product of rank-one components, each one of

* ``Z``  -- the integers,
* ``Q``  -- the rationals (coordinates are ``fractions.Fraction``),
* ``Zsqrt(d)`` -- the real quadratic ring Z[sqrt(d)], d squarefree >= 2,
  with coordinates stored as exact integer pairs (p, q) meaning p + q*sqrt(d).

Elements compare lexicographically from the left.  Every comparison is exact:
the sign of p + q*sqrt(d) is decided by integer case analysis on p^2 versus
d*q^2 (sqrt(d) is irrational, so ties cannot occur away from zero).  No
floating point is used anywhere.

Windows are finite per-component boxes used by all window-bounded checks in
the rest of the package; enumerating a window yields its elements in strictly
increasing group order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import ceil, floor, gcd
from typing import Iterator, Optional, Sequence, Tuple, Union

from .errors import DomainError, GroupMismatchError, InputFormatError

KIND_Z = "Z"
KIND_Q = "Q"
KIND_ZSQRT = "Zsqrt"


def _is_squarefree(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def quad_sign(p: int, q: int, d: int) -> int:
    """Exact sign of p + q*sqrt(d), by integer case analysis.

    When p and q have opposite signs the comparison reduces to p^2 vs d*q^2;
    equality there would force sqrt(d) rational, impossible for squarefree
    d >= 2, so the only zero is p = q = 0.
    """
    if q == 0:
        return _sign(p)
    if p == 0:
        return _sign(q)
    if p > 0 and q > 0:
        return 1
    if p < 0 and q < 0:
        return -1
    lhs = p * p
    rhs = d * q * q
    if p > 0:  # q < 0: sign of p - |q|sqrt(d)
        return _sign(lhs - rhs)
    return _sign(rhs - lhs)  # p < 0 < q


@dataclass(frozen=True)
class QuadInt:
    """p + q*sqrt(d); the d lives in the owning component spec."""

    p: int
    q: int


@dataclass(frozen=True)
class RankOneSpec:
    kind: str
    d: Optional[int] = None

    def __post_init__(self):
        if self.kind not in (KIND_Z, KIND_Q, KIND_ZSQRT):
            raise InputFormatError("unknown component kind %r" % (self.kind,))
        if self.kind == KIND_ZSQRT:
            if self.d is None or not _is_squarefree(self.d):
                raise InputFormatError("quadratic component needs squarefree d >= 2")
        elif self.d is not None:
            raise InputFormatError("d only makes sense for quadratic components")

    # -- coordinate-level helpers ------------------------------------------

    def coerce(self, v):
        if self.kind == KIND_Z:
            if isinstance(v, bool) or not isinstance(v, int):
                raise DomainError("Z coordinate must be an int, got %r" % (v,))
            return v
        if self.kind == KIND_Q:
            if isinstance(v, bool):
                raise DomainError("Q coordinate must be rational, got %r" % (v,))
            if isinstance(v, (int, Fraction)):
                return Fraction(v)
            if isinstance(v, str):
                return Fraction(v)
            raise DomainError("Q coordinate must be rational, got %r" % (v,))
        if isinstance(v, QuadInt):
            return v
        if isinstance(v, (tuple, list)) and len(v) == 2:
            p, q = v
            if isinstance(p, int) and isinstance(q, int) and not isinstance(p, bool) and not isinstance(q, bool):
                return QuadInt(p, q)
        raise DomainError("quadratic coordinate must be QuadInt or (p, q) ints, got %r" % (v,))

    def sign(self, v) -> int:
        if self.kind == KIND_ZSQRT:
            return quad_sign(v.p, v.q, self.d)
        return _sign(v)

    def cmp(self, a, b) -> int:
        return self.sign(self.sub(a, b))

    def add(self, a, b):
        if self.kind == KIND_ZSQRT:
            return QuadInt(a.p + b.p, a.q + b.q)
        return a + b

    def sub(self, a, b):
        if self.kind == KIND_ZSQRT:
            return QuadInt(a.p - b.p, a.q - b.q)
        return a - b

    def neg(self, a):
        if self.kind == KIND_ZSQRT:
            return QuadInt(-a.p, -a.q)
        return -a

    def scale(self, n: int, a):
        if self.kind == KIND_ZSQRT:
            return QuadInt(n * a.p, n * a.q)
        return n * a

    def zero(self):
        if self.kind == KIND_ZSQRT:
            return QuadInt(0, 0)
        if self.kind == KIND_Q:
            return Fraction(0)
        return 0

    def value_to_json(self, v):
        if self.kind == KIND_Z:
            return v
        if self.kind == KIND_Q:
            return str(v) if v.denominator != 1 else int(v)
        return {"p": v.p, "q": v.q}

    def value_from_json(self, obj):
        if self.kind == KIND_ZSQRT:
            if not isinstance(obj, dict) or set(obj) != {"p", "q"}:
                raise InputFormatError("quadratic coordinate JSON must be {'p':..,'q':..}")
            return self.coerce((obj["p"], obj["q"]))
        if self.kind == KIND_Q and isinstance(obj, str):
            try:
                return Fraction(obj)
            except (ValueError, ZeroDivisionError) as exc:
                raise InputFormatError("bad rational %r" % (obj,)) from exc
        return self.coerce(obj)

    def to_json(self):
        if self.kind == KIND_ZSQRT:
            return {"kind": KIND_ZSQRT, "d": self.d}
        return {"kind": self.kind}

    @classmethod
    def from_json(cls, obj) -> "RankOneSpec":
        if not isinstance(obj, dict) or "kind" not in obj:
            raise InputFormatError("component spec JSON must be an object with 'kind'")
        return cls(obj["kind"], obj.get("d"))


@dataclass(frozen=True)
class GroupSpec:
    """A finite lex product of rank-one components; the ambient group G."""

    components: Tuple[RankOneSpec, ...]

    def __post_init__(self):
        if not isinstance(self.components, tuple) or not self.components:
            raise InputFormatError("GroupSpec needs a nonempty tuple of components")

    @property
    def rank(self) -> int:
        return len(self.components)

    def element(self, coords: Sequence) -> "GroupElement":
        if len(coords) != self.rank:
            raise DomainError(
                "element needs %d coordinates, got %d" % (self.rank, len(coords))
            )
        vals = tuple(c.coerce(v) for c, v in zip(self.components, coords))
        return GroupElement(self, vals)

    def zero(self) -> "GroupElement":
        return GroupElement(self, tuple(c.zero() for c in self.components))

    def tail(self, drop: int = 1) -> "GroupSpec":
        """The lex product of components[drop:], e.g. a residue value group."""
        if not 1 <= drop < self.rank:
            raise DomainError("cannot drop %d of %d components" % (drop, self.rank))
        return GroupSpec(self.components[drop:])

    def head(self, keep: int) -> "GroupSpec":
        if not 1 <= keep <= self.rank:
            raise DomainError("keep must be in 1..rank")
        return GroupSpec(self.components[:keep])

    def to_json(self):
        return {"components": [c.to_json() for c in self.components]}

    @classmethod
    def from_json(cls, obj) -> "GroupSpec":
        if not isinstance(obj, dict) or "components" not in obj:
            raise InputFormatError("group JSON must be {'components': [...]}")
        return cls(tuple(RankOneSpec.from_json(c) for c in obj["components"]))


def check_same_spec(a: "GroupElement", b: "GroupElement"):
    if a.spec != b.spec:
        raise GroupMismatchError("elements from different group specifications")


@dataclass(frozen=True)
class GroupElement:
    spec: GroupSpec
    coords: Tuple

    # total order, lexicographic from the left
    def _cmp(self, other: "GroupElement") -> int:
        check_same_spec(self, other)
        for comp, a, b in zip(self.spec.components, self.coords, other.coords):
            s = comp.cmp(a, b)
            if s:
                return s
        return 0

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __add__(self, other):
        check_same_spec(self, other)
        return GroupElement(
            self.spec,
            tuple(c.add(a, b) for c, a, b in zip(self.spec.components, self.coords, other.coords)),
        )

    def __sub__(self, other):
        check_same_spec(self, other)
        return GroupElement(
            self.spec,
            tuple(c.sub(a, b) for c, a, b in zip(self.spec.components, self.coords, other.coords)),
        )

    def __neg__(self):
        return GroupElement(
            self.spec, tuple(c.neg(a) for c, a in zip(self.spec.components, self.coords))
        )

    def __rmul__(self, n: int):
        if not isinstance(n, int) or isinstance(n, bool):
            raise DomainError("scalar must be an int")
        return GroupElement(
            self.spec, tuple(c.scale(n, a) for c, a in zip(self.spec.components, self.coords))
        )

    def is_zero(self) -> bool:
        return all(c.sign(a) == 0 for c, a in zip(self.spec.components, self.coords))

    def sign(self) -> int:
        for comp, a in zip(self.spec.components, self.coords):
            s = comp.sign(a)
            if s:
                return s
        return 0

    def to_json(self):
        return [c.value_to_json(v) for c, v in zip(self.spec.components, self.coords)]

    def __repr__(self):
        bits = []
        for comp, v in zip(self.spec.components, self.coords):
            if comp.kind == KIND_ZSQRT:
                bits.append("%d+%dr%d" % (v.p, v.q, comp.d))
            else:
                bits.append(str(v))
        return "(" + ",".join(bits) + ")"


def element_from_json(spec: GroupSpec, obj) -> GroupElement:
    if not isinstance(obj, (list, tuple)):
        raise InputFormatError("group element JSON must be a list of coordinates")
    if len(obj) != spec.rank:
        raise InputFormatError(
            "element JSON has %d coordinates, group has rank %d" % (len(obj), spec.rank)
        )
    return GroupElement(
        spec,
        tuple(c.value_from_json(v) for c, v in zip(spec.components, obj)),
    )


def cmp(x: GroupElement, y: GroupElement) -> int:
    """Three-way exact comparison: -1, 0 or +1."""
    return x._cmp(y)


def add(x: GroupElement, y: GroupElement) -> GroupElement:
    return x + y


def neg(x: GroupElement) -> GroupElement:
    return -x


def scalar_mul(n: int, x: GroupElement) -> GroupElement:
    """x added to itself n times (n may be negative or zero)."""
    return n * x


def hat_index(g: GroupElement) -> int:
    """Stratum index of g >= 0: 0 for the zero element, else the 1-based
    position of the first nonzero coordinate (which is then positive)."""
    if g.sign() < 0:
        raise DomainError("hat_index is only defined for g >= 0")
    for i, (comp, v) in enumerate(zip(g.spec.components, g.coords), start=1):
        if comp.sign(v) != 0:
            return i
    return 0


# ---------------------------------------------------------------------------
# windows


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@dataclass(frozen=True)
class Window:
    """Finite per-component box.

    Bounds encoding (all integers):
      Z      -> (lo, hi)
      Q      -> (lo, hi, den): the values k/den for lo*den <= k <= hi*den
      Zsqrt  -> (plo, phi, qlo, qhi)
    """

    spec: GroupSpec
    bounds: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.bounds) != self.spec.rank:
            raise InputFormatError("window needs one bound tuple per component")
        for comp, b in zip(self.spec.components, self.bounds):
            if comp.kind == KIND_Z and len(b) != 2:
                raise InputFormatError("Z window bound must be (lo, hi)")
            if comp.kind == KIND_Q and len(b) != 3:
                raise InputFormatError("Q window bound must be (lo, hi, den)")
            if comp.kind == KIND_ZSQRT and len(b) != 4:
                raise InputFormatError("Zsqrt window bound must be (plo, phi, qlo, qhi)")
            if comp.kind == KIND_Q and b[2] < 1:
                raise InputFormatError("Q window denominator must be >= 1")

    def component_values(self, i: int) -> list:
        """All coordinate values of component i inside the box, sorted in the
        component's own order."""
        comp = self.spec.components[i]
        b = self.bounds[i]
        if comp.kind == KIND_Z:
            return list(range(b[0], b[1] + 1))
        if comp.kind == KIND_Q:
            lo, hi, den = b
            return [Fraction(k, den) for k in range(lo * den, hi * den + 1)]
        plo, phi, qlo, qhi = b
        vals = [QuadInt(p, q) for p in range(plo, phi + 1) for q in range(qlo, qhi + 1)]
        vals.sort(key=_quad_sort_key(comp.d))
        return vals

    def elements(self) -> Iterator[GroupElement]:
        """All window elements in strictly increasing group (lex) order."""
        per = [self.component_values(i) for i in range(self.spec.rank)]
        for coords in product(*per):
            yield GroupElement(self.spec, coords)

    def contains(self, g: GroupElement) -> bool:
        if g.spec != self.spec:
            raise GroupMismatchError("element from a different group specification")
        for comp, b, v in zip(self.spec.components, self.bounds, g.coords):
            if comp.kind == KIND_Z:
                if not b[0] <= v <= b[1]:
                    return False
            elif comp.kind == KIND_Q:
                lo, hi, den = b
                if not (lo <= v <= hi and (v * den).denominator == 1):
                    return False
            else:
                plo, phi, qlo, qhi = b
                if not (plo <= v.p <= phi and qlo <= v.q <= qhi):
                    return False
        return True

    def widen_include(self, *elements: GroupElement) -> "Window":
        """Smallest window extending this one whose box covers 0 and the
        coordinates of every given element."""
        new = [list(b) for b in self.bounds]
        for g in elements:
            if g.spec != self.spec:
                raise GroupMismatchError("element from a different group specification")
            for i, (comp, v) in enumerate(zip(self.spec.components, g.coords)):
                b = new[i]
                if comp.kind == KIND_Z:
                    b[0] = min(b[0], 0, v)
                    b[1] = max(b[1], 0, v)
                elif comp.kind == KIND_Q:
                    b[0] = min(b[0], 0, floor(v))
                    b[1] = max(b[1], 0, ceil(v))
                    b[2] = _lcm(b[2], v.denominator)
                else:
                    b[0] = min(b[0], 0, v.p)
                    b[1] = max(b[1], 0, v.p)
                    b[2] = min(b[2], 0, v.q)
                    b[3] = max(b[3], 0, v.q)
        # always cover zero even with no elements given
        for i, comp in enumerate(self.spec.components):
            b = new[i]
            b[0] = min(b[0], 0)
            b[1] = max(b[1], 0)
            if comp.kind == KIND_ZSQRT:
                b[2] = min(b[2], 0)
                b[3] = max(b[3], 0)
        return Window(self.spec, tuple(tuple(b) for b in new))

    def scaled(self, k: int) -> "Window":
        """Box with all bounds multiplied by k (k >= 1)."""
        out = []
        for comp, b in zip(self.spec.components, self.bounds):
            if comp.kind == KIND_Q:
                out.append((b[0] * k, b[1] * k, b[2]))
            else:
                out.append(tuple(x * k for x in b))
        return Window(self.spec, tuple(out))

    def size(self) -> int:
        n = 1
        for i in range(self.spec.rank):
            n *= len(self.component_values(i))
        return n

    def drop_first(self) -> "Window":
        return Window(self.spec.tail(1), self.bounds[1:])

    def to_json(self):
        out = []
        for comp, b in zip(self.spec.components, self.bounds):
            if comp.kind == KIND_Z:
                out.append({"lo": b[0], "hi": b[1]})
            elif comp.kind == KIND_Q:
                out.append({"lo": b[0], "hi": b[1], "den": b[2]})
            else:
                out.append({"p": [b[0], b[1]], "q": [b[2], b[3]]})
        return out

    @classmethod
    def from_json(cls, spec: GroupSpec, obj) -> "Window":
        if not isinstance(obj, list) or len(obj) != spec.rank:
            raise InputFormatError("window JSON must list one bound object per component")
        bounds = []
        for comp, o in zip(spec.components, obj):
            try:
                if comp.kind == KIND_Z:
                    bounds.append((int(o["lo"]), int(o["hi"])))
                elif comp.kind == KIND_Q:
                    bounds.append((int(o["lo"]), int(o["hi"]), int(o.get("den", 1))))
                else:
                    bounds.append((int(o["p"][0]), int(o["p"][1]), int(o["q"][0]), int(o["q"][1])))
            except (KeyError, TypeError, ValueError) as exc:
                raise InputFormatError("bad window bound %r" % (o,)) from exc
        return cls(spec, tuple(bounds))

    @classmethod
    def parse_compact(cls, spec: GroupSpec, text: str) -> "Window":
        """Parse the CLI window grammar: components joined by 'x'.

        Z:      lo:hi          e.g.  -2:8
        Q:      lo:hi/den      e.g.  0:3/2
        Zsqrt:  plo:phi;qlo:qhi  e.g.  -6:6;-6:6
        """
        parts = text.split("x")
        if len(parts) != spec.rank:
            raise InputFormatError(
                "window %r has %d components, group has rank %d" % (text, len(parts), spec.rank)
            )
        bounds = []
        try:
            for comp, part in zip(spec.components, parts):
                if comp.kind == KIND_ZSQRT:
                    ps, qs = part.split(";")
                    plo, phi = (int(v) for v in ps.split(":"))
                    qlo, qhi = (int(v) for v in qs.split(":"))
                    bounds.append((plo, phi, qlo, qhi))
                elif comp.kind == KIND_Q:
                    if "/" in part:
                        rng, den = part.rsplit("/", 1)
                    else:
                        rng, den = part, "1"
                    lo, hi = (int(v) for v in rng.split(":"))
                    bounds.append((lo, hi, int(den)))
                else:
                    lo, hi = (int(v) for v in part.split(":"))
                    bounds.append((lo, hi))
        except (ValueError, TypeError) as exc:
            raise InputFormatError("cannot parse window %r" % (text,)) from exc
        return cls(spec, tuple(bounds))


def _quad_sort_key(d: int):
    import functools

    def cmp_vals(a: QuadInt, b: QuadInt) -> int:
        return quad_sign(a.p - b.p, a.q - b.q, d)

    return functools.cmp_to_key(cmp_vals)


def default_window(spec: GroupSpec, radius: int = 8, include: Sequence[GroupElement] = ()) -> Window:
    """A symmetric box [-radius, radius] per coordinate, widened to cover the
    given elements.  Used when a caller does not supply a window."""
    bounds = []
    for comp in spec.components:
        if comp.kind == KIND_Z:
            bounds.append((-radius, radius))
        elif comp.kind == KIND_Q:
            bounds.append((-radius, radius, 1))
        else:
            bounds.append((-radius, radius, -radius, radius))
    w = Window(spec, tuple(bounds))
    if include:
        w = w.widen_include(*include)
    return w
