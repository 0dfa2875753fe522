"""Worked examples wired up end to end, with frozen expected values.

Each runner builds its objects from scratch, computes everything live, and
compares against literals that were derived by hand (case analysis on the
membership definitions; see the development notes outside the package).  The
runners double as regression anchors for the command line's ``repro``
subcommand, so their reports must stay deterministic: no timestamps, no
environment lookups, canonical ordering everywhere.
"""

from __future__ import annotations

from typing import Dict, Tuple

from .groups import KIND_Z, KIND_ZSQRT, GroupSpec, RankOneSpec, Window
from .kronecker import (
    MEMBER,
    NOT_CERTIFIED,
    CoordinateValuation,
    RatFunc,
    SemilocalRing,
    TPoly,
    full_overring_family,
    in_kr_family,
    in_kr_nagata_intersection,
    in_nagata_valuation,
    linear_fraction,
    nagata_counterexample,
    semilocal_unit_combination,
)
from .errors import NoUnitCombinationError
from .monoids import (
    FiniteSet,
    FullCone,
    GapMonoid,
    QuadrantCone,
    SymmetricUnion,
    Union,
    WindowBounded,
    Zero,
    check_max_excluding,
    check_submonoid,
    construct_excluding_monoid,
    decompose,
    generates_group,
    member,
    region,
    root_closure,
)
from .rings import (
    FieldDesc,
    FullValuation,
    LocalizedValuation,
    MonomialRing,
    PullbackRing,
    complete_integral_closure,
    contains_exponent,
    integral_closure,
    is_integral_element,
)
from .series import FieldSpec, monomial

# ---------------------------------------------------------------------------
# groups


def integer_group() -> GroupSpec:
    return GroupSpec((RankOneSpec(KIND_Z),))


def plane_group() -> GroupSpec:
    return GroupSpec((RankOneSpec(KIND_Z), RankOneSpec(KIND_Z)))


def space_group() -> GroupSpec:
    return GroupSpec((RankOneSpec(KIND_Z),) * 3)


def mixed_quadratic_group(d: int = 2) -> GroupSpec:
    return GroupSpec((RankOneSpec(KIND_Z), RankOneSpec(KIND_ZSQRT, d)))


# ---------------------------------------------------------------------------
# monoids and rings used by several tests


def gap_example(a: int = 5):
    """Rank one: {0} u (a/2, a) u (a, inf) missing a and the low gap."""
    g = integer_group()
    return g, GapMonoid(g, g.element((a,)))


def plane_symmetric_example():
    """Rank two: full tail stratum, first stratum symmetric about (1, 0)."""
    g = plane_group()
    a = g.element((1, 0))
    return g, SymmetricUnion(g, a, (FullCone(g),)), a


def plane_union_form():
    """The same set written as three explicit boxes."""
    g = plane_group()
    return g, Union(
        g,
        (
            region(g, ("eq", 0), ("ge", 0)),
            region(g, ("eq", 1), ("ge", 1)),
            region(g, ("ge", 2), "any"),
        ),
    )


def punctured_plane_example():
    """Rank two with an empty tail: everything with positive first coordinate
    except (1, 0) itself, plus zero."""
    g = plane_group()
    a = g.element((1, 0))
    return g, SymmetricUnion(g, a, (Union(g, ()),)), a


def punctured_union_form():
    g = plane_group()
    return g, Union(
        g,
        (
            Zero(g),
            region(g, ("eq", 1), ("lt", 0)),
            region(g, ("eq", 1), ("gt", 0)),
            region(g, ("ge", 2), "any"),
        ),
    )


def quadratic_tail_example():
    """Z lex Z[sqrt2]: tail stratum the quadrant p, q >= 0."""
    g = mixed_quadratic_group(2)
    a = g.element((1, (0, 0)))
    return g, SymmetricUnion(g, a, (QuadrantCone(g, 2),)), a


def constants_pullback_example():
    """K + m: the rank-one coarsening pulled back over the coefficient field."""
    g = plane_group()
    return g, PullbackRing(g, LocalizedValuation(g, 1), FieldDesc(g.tail(1)))


def flat_tail_example():
    """The monoid {(0, n) : n >= 0} u {(m, n) : m >= 2}, whose ring has full
    valuative closure but misses the whole m = 1 slab."""
    g = plane_group()
    S = Union(
        g,
        (
            region(g, ("eq", 0), ("ge", 0)),
            region(g, ("ge", 2), "any"),
        ),
    )
    return g, MonomialRing(g, S)


def coordinate_cross_example():
    """Two incomparable coordinate valuations on the plane plus the monomials
    along each axis."""
    g = plane_group()
    field = FieldSpec("Q")
    views = (CoordinateValuation(g, (1,)), CoordinateValuation(g, (2,)))
    A = SemilocalRing(g, field, views, (1,))
    trunc = g.element((9, 9))
    x1 = monomial(g, field, g.element((1, 0)), trunc)
    x2 = monomial(g, field, g.element((0, 1)), trunc)
    return g, A, (x1, x2)


# ---------------------------------------------------------------------------
# repro runners


def _note(assertions, name, expected, actual):
    assertions.append(
        {"name": name, "expected": expected, "actual": actual, "pass": expected == actual}
    )


def _finish(rid: str, assertions, inputs: Dict) -> Tuple[Dict, Dict]:
    report = {
        "id": rid,
        "passed": all(a["pass"] for a in assertions),
        "assertions": assertions,
    }
    return report, inputs


def _run_ex34():
    g, S = gap_example(5)
    a = g.element((5,))
    w = Window(g, ((0, 12),))
    assertions = []
    got = [1 if member(S, g.element((n,))) else 0 for n in range(9)]
    _note(assertions, "membership 0..8", [1, 0, 0, 1, 1, 0, 1, 1, 1], got)
    _note(assertions, "submonoid on window", True, check_submonoid(S, w).ok)
    verdict = check_max_excluding(S, a, w)
    _note(assertions, "maximal excluding status", "verified_structurally", verdict.status)
    closed = root_closure(S)
    _note(assertions, "root closure", {"kind": "full_cone"}, closed.to_json())
    wide = Window(g, ((-6, 6),))
    _note(assertions, "monoid generates the group", True, generates_group(S, wide))
    cic = complete_integral_closure(MonomialRing(g, S), w)
    _note(
        assertions,
        "complete integral closure",
        {"certified": True, "ring": {"kind": "full_valuation"}},
        {"certified": cic.certified, "ring": cic.ring.to_json()},
    )
    field = FieldSpec("Q")
    trunc = g.element((40,))
    f = monomial(g, field, g.element((1,)), trunc)
    ver = is_integral_element(f, MonomialRing(g, S))
    _note(
        assertions,
        "step monomial is integral with exponent 3",
        {"status": "certified", "power": 3},
        {"status": ver.status, "power": ver.witnesses[0][1] if ver.witnesses else None},
    )
    inputs = {
        "group": g.to_json(),
        "monoid": S.to_json(),
        "element": a.to_json(),
        "window": w.to_json(),
    }
    return _finish("ex34", assertions, inputs)


def _run_ex37():
    g, S, a = plane_symmetric_example()
    _, U = plane_union_form()
    w = Window(g, ((-2, 3), (-4, 4)))
    assertions = []
    mismatch = [
        x.to_json() for x in w.elements() if member(S, x) != member(U, x)
    ]
    _note(assertions, "union form matches the symmetric form on the window", [], mismatch)
    spot = {
        "(1,-3)": member(S, g.element((1, -3))),
        "(1,2)": member(S, g.element((1, 2))),
        "(0,1)": member(S, g.element((0, 1))),
        "(2,-5)": member(S, g.element((2, -5))),
        "(1,0)": member(S, a),
    }
    _note(
        assertions,
        "spot memberships",
        {"(1,-3)": False, "(1,2)": True, "(0,1)": True, "(2,-5)": True, "(1,0)": False},
        spot,
    )
    _note(
        assertions,
        "symmetric form is maximal excluding, structurally",
        "verified_structurally",
        check_max_excluding(S, a, w).status,
    )
    _note(
        assertions,
        "union form is maximal excluding on the window",
        "verified_on_window",
        check_max_excluding(U, a, w).status,
    )
    built = construct_excluding_monoid(a, (FullCone(g),), window=w)
    _note(assertions, "construction reproduces the node", S.to_json(), built.to_json())
    second = decompose(S, 2)
    tail_members = [x.to_json() for x in w.elements() if member(second, x)]
    expected_tail = [g.element((0, n)).to_json() for n in range(1, 5)]
    _note(assertions, "second stratum on the window", expected_tail, tail_members)
    inputs = {
        "group": g.to_json(),
        "monoid": S.to_json(),
        "union_form": U.to_json(),
        "element": a.to_json(),
        "window": w.to_json(),
    }
    return _finish("ex37", assertions, inputs)


def _run_ex38():
    g, S, a = punctured_plane_example()
    _, U = punctured_union_form()
    w = Window(g, ((0, 3), (-6, 6)))
    assertions = []
    mismatch = [x.to_json() for x in w.elements() if member(S, x) != member(U, x)]
    _note(assertions, "union form matches the symmetric form on the window", [], mismatch)
    spot = {
        "(1,-1)": member(S, g.element((1, -1))),
        "(0,1)": member(S, g.element((0, 1))),
        "(1,0)": member(S, a),
    }
    _note(
        assertions,
        "spot memberships",
        {"(1,-1)": True, "(0,1)": False, "(1,0)": False},
        spot,
    )
    _note(
        assertions,
        "maximal excluding, structurally",
        "verified_structurally",
        check_max_excluding(S, a, Window(g, ((-2, 3), (-4, 4)))).status,
    )
    closed = root_closure(U, w, nmax=6)
    added = []
    if isinstance(closed, WindowBounded) and isinstance(closed.base, Union):
        for p in closed.base.parts:
            if isinstance(p, FiniteSet):
                added = [e.to_json() for e in p.elements]
    _note(
        assertions,
        "window closure adds exactly the excluded element",
        [a.to_json()],
        added,
    )
    cl = integral_closure(MonomialRing(g, S))
    _note(
        assertions,
        "integral closure is the pullback over the constants",
        {
            "certified": True,
            "kind": "pullback",
            "residue_has_step": False,
        },
        {
            "certified": cl.certified,
            "kind": cl.ring.to_json()["kind"],
            "residue_has_step": contains_exponent(
                cl.ring.residue, g.tail(1).element((1,))
            ),
        },
    )
    cic = complete_integral_closure(MonomialRing(g, S), Window(g, ((-2, 3), (-4, 4))))
    _note(
        assertions,
        "complete integral closure keeps one coordinate",
        {"certified": True, "ring": {"keep": 1, "kind": "localized_valuation"}},
        {"certified": cic.certified, "ring": cic.ring.to_json()},
    )
    field = FieldSpec("Q")
    trunc = g.element((9, 9))
    step = monomial(g, field, g.element((0, 1)), trunc)
    ver = is_integral_element(step, MonomialRing(g, S))
    _note(
        assertions,
        "the tail step is not integral but is almost integral",
        {"integral": "refuted_up_to_bound", "in_complete_closure": True},
        {
            "integral": ver.status,
            "in_complete_closure": contains_exponent(cic.ring, g.element((0, 1))),
        },
    )
    inputs = {
        "group": g.to_json(),
        "monoid": S.to_json(),
        "union_form": U.to_json(),
        "element": a.to_json(),
        "window": w.to_json(),
    }
    return _finish("ex38", assertions, inputs)


def _run_ex314():
    g, S, a = quadratic_tail_example()
    w = Window(g, ((-1, 2), (-3, 3, -3, 3)))
    assertions = []
    spot = {
        "(1, -2+r2)": member(S, g.element((1, (-2, 1)))),
        "(1, -1-r2)": member(S, g.element((1, (-1, -1)))),
        "(0, 2-r2)": member(S, g.element((0, (2, -1)))),
        "(0, 1+r2)": member(S, g.element((0, (1, 1)))),
        "(2, -5-5r2)": member(S, g.element((2, (-5, -5)))),
    }
    _note(
        assertions,
        "spot memberships",
        {
            "(1, -2+r2)": True,
            "(1, -1-r2)": False,
            "(0, 2-r2)": False,
            "(0, 1+r2)": True,
            "(2, -5-5r2)": True,
        },
        spot,
    )
    _note(
        assertions,
        "maximal excluding, structurally",
        "verified_structurally",
        check_max_excluding(S, a, w).status,
    )
    cl = integral_closure(MonomialRing(g, S))
    tail_spec = g.tail(1)
    _note(
        assertions,
        "integral closure pulls back the closed quadrant",
        {
            "certified": True,
            "kind": "pullback",
            "quadrant_in": True,
            "mixed_out": False,
        },
        {
            "certified": cl.certified,
            "kind": cl.ring.to_json()["kind"],
            "quadrant_in": contains_exponent(cl.ring.residue, tail_spec.element(((1, 1),))),
            "mixed_out": contains_exponent(cl.ring.residue, tail_spec.element(((2, -1),))),
        },
    )
    cic = complete_integral_closure(MonomialRing(g, S), w)
    _note(
        assertions,
        "complete integral closure keeps one coordinate",
        {"certified": True, "ring": {"keep": 1, "kind": "localized_valuation"}},
        {"certified": cic.certified, "ring": cic.ring.to_json()},
    )
    inputs = {
        "group": g.to_json(),
        "monoid": S.to_json(),
        "element": a.to_json(),
        "window": w.to_json(),
    }
    return _finish("ex314", assertions, inputs)


def _run_prop47():
    assertions = []
    # rank one: both orders of the same two polynomials
    z = integer_group()
    field = FieldSpec("Q")
    trunc = z.element((10,))
    x1 = monomial(z, field, z.element((1,)), trunc)
    x2 = monomial(z, field, z.element((2,)), trunc)
    one_s = monomial(z, field, z.element((0,)), trunc)
    p_low = TPoly(z, field, (x2, x1))  # X^2 + X t
    p_high = TPoly(z, field, (x1, one_s))  # X + t
    view = CoordinateValuation(z, (1,))
    _note(
        assertions,
        "fraction with higher numerator value is in the extension ring",
        True,
        in_nagata_valuation(RatFunc(p_low, p_high), view),
    )
    _note(
        assertions,
        "the reciprocal fraction is not",
        False,
        in_nagata_valuation(RatFunc(p_high, p_low), view),
    )
    # rank two: the constants pullback misses both a monomial and its inverse
    g, D = constants_pullback_example()
    family = full_overring_family(g)
    w = Window(g, ((-2, 2), (-2, 2)))
    found = nagata_counterexample(D, family, field, w)
    _note(
        assertions,
        "separating fraction for the constants pullback",
        {"exponent": [0, -2], "in_kronecker_family": True, "in_nagata_ring": False},
        None
        if found is None
        else {
            "exponent": found.exponent.to_json(),
            "in_kronecker_family": found.in_kronecker_family,
            "in_nagata_ring": found.in_nagata_ring,
        },
    )
    none_for_valuation = nagata_counterexample(FullValuation(g), family, field, w)
    _note(
        assertions,
        "no separating fraction exists for a valuation ring",
        None,
        None if none_for_valuation is None else none_for_valuation.to_json(),
    )
    inputs = {
        "group": g.to_json(),
        "ring": D.to_json(),
        "window": w.to_json(),
        "family": [v.to_json() for v in family],
    }
    return _finish("prop47", assertions, inputs)


def _run_lemma43():
    assertions = []
    g, A, xs = coordinate_cross_example()
    field = A.field
    delta = semilocal_unit_combination(A, xs)
    _note(
        assertions,
        "two crossed monomials combine with coefficients (1, 1)",
        [1, 1],
        [field.value_to_json(d) for d in delta],
    )
    combo = xs[0].scale(delta[0]) + xs[1].scale(delta[1])
    _note(assertions, "the combination is a unit", True, A.is_unit(combo))
    failed_index = None
    try:
        semilocal_unit_combination(A, xs[:1])
    except NoUnitCombinationError as exc:
        failed_index = exc.valuation_index
    _note(
        assertions,
        "a single axis monomial fails at its own valuation",
        0,
        failed_index,
    )
    # three valuations on three coordinates, reservoir of two constants
    g3 = space_group()
    views3 = tuple(CoordinateValuation(g3, (k,)) for k in (1, 2, 3))
    A3 = SemilocalRing(g3, field, views3, (1, 2))
    trunc3 = g3.element((9, 9, 9))
    ys = tuple(
        monomial(g3, field, g3.element(tuple(1 if i == k else 0 for i in range(3))), trunc3)
        for k in range(3)
    )
    delta3 = semilocal_unit_combination(A3, ys)
    _note(
        assertions,
        "three crossed monomials: the third gets coefficient zero",
        [1, 1, 0],
        [field.value_to_json(d) for d in delta3],
    )
    combo3 = ys[0].scale(delta3[0]) + ys[1].scale(delta3[1]) + ys[2].scale(delta3[2])
    _note(assertions, "that combination is a unit too", True, A3.is_unit(combo3))
    inputs = {
        "group": g.to_json(),
        "semilocal": A.to_json(),
        "elements": [x.to_json() for x in xs],
    }
    return _finish("lemma43", assertions, inputs)


def _run_constr56():
    assertions = []
    g, A = flat_tail_example()
    field = FieldSpec("Q")
    family = full_overring_family(g)
    spot = {
        "(0,3)": contains_exponent(A, g.element((0, 3))),
        "(1,0)": contains_exponent(A, g.element((1, 0))),
        "(2,-4)": contains_exponent(A, g.element((2, -4))),
    }
    _note(
        assertions,
        "ring membership spot checks",
        {"(0,3)": True, "(1,0)": False, "(2,-4)": True},
        spot,
    )
    phi1 = linear_fraction(g, field, g.element((2, 0)))
    v1 = in_kr_nagata_intersection(phi1, family, A)
    _note(
        assertions,
        "deep linear fraction is a member without scaling",
        {"status": MEMBER, "scaling": [0, 0], "unit_index": 1},
        {"status": v1.status, "scaling": v1.scaling.to_json(), "unit_index": v1.unit_index},
    )
    phi2 = linear_fraction(g, field, g.element((1, 0)))
    v2 = in_kr_nagata_intersection(phi2, family, A)
    _note(
        assertions,
        "slab linear fraction is in the family ring but earns no certificate",
        {"status": NOT_CERTIFIED, "in_family": True},
        {"status": v2.status, "in_family": in_kr_family(phi2, family)},
    )
    trunc = g.element((9, 9))
    xm = monomial(g, field, g.element((1, 0)), trunc)
    phi3 = RatFunc(TPoly(g, field, (xm,)), TPoly(g, field, (xm, xm)))
    v3 = in_kr_nagata_intersection(phi3, family, A)
    _note(
        assertions,
        "common monomial factor scales away",
        {"status": MEMBER, "scaling": [1, 0], "unit_index": 0},
        {"status": v3.status, "scaling": v3.scaling.to_json(), "unit_index": v3.unit_index},
    )
    inputs = {
        "group": g.to_json(),
        "ring": A.to_json(),
        "family": [v.to_json() for v in family],
        "phi1": phi1.to_json(),
        "phi2": phi2.to_json(),
        "phi3": phi3.to_json(),
    }
    return _finish("constr56", assertions, inputs)


REPRO = {
    "ex34": _run_ex34,
    "ex37": _run_ex37,
    "ex38": _run_ex38,
    "ex314": _run_ex314,
    "prop47": _run_prop47,
    "lemma43": _run_lemma43,
    "constr56": _run_constr56,
}
