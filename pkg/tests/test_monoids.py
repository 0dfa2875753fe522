"""Monoid expression layer: membership, decomposition, the symmetry criterion,
root closure, and the excluding-monoid constructor.

Expected values for the gap family and the numerical-semigroup regions are
frozen from pencil-and-paper case analysis (documented inline); window scans
in the tests recompute them brute-force where feasible.
"""

import pytest

from hahnlab.errors import (
    DomainError,
    HypothesisError,
    InputFormatError,
    PreconditionError,
)
from hahnlab.groups import GroupSpec, RankOneSpec, Window, cmp, hat_index
from hahnlab.monoids import (
    REFUTED,
    VERIFIED_ON_WINDOW,
    VERIFIED_STRUCTURALLY,
    FiniteSet,
    FullCone,
    GapMonoid,
    HalfLine,
    QuadrantCone,
    Shift,
    Stratum,
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

Z = GroupSpec((RankOneSpec("Z"),))
ZZ = GroupSpec((RankOneSpec("Z"), RankOneSpec("Z")))
ZS2 = GroupSpec((RankOneSpec("Z"), RankOneSpec("Zsqrt", 2)))


def gap5():
    return GapMonoid(Z, Z.element((5,)))


def plane_symmetric():
    """Excluded (1,0); the second stratum is everything positive."""
    return SymmetricUnion(ZZ, ZZ.element((1, 0)), (FullCone(ZZ),))


def punctured_plane():
    """Excluded (1,0); the second stratum is empty."""
    return SymmetricUnion(ZZ, ZZ.element((1, 0)), (Union(ZZ, ()),))


# ---------------------------------------------------------------------------
# membership per node kind


def test_gap_monoid_membership_profile():
    # a = 5: members are 0, the open interval (5/2, 5) = {3, 4}, and g > 5
    S = gap5()
    got = [member(S, Z.element((n,))) for n in range(9)]
    assert got == [True, False, False, True, True, False, True, True, True]


def test_member_refuses_negatives_everywhere():
    assert not member(FullCone(Z), Z.element((-1,)))
    assert not member(gap5(), Z.element((-3,)))
    assert not member(Zero(ZZ), ZZ.element((0, -1)))


def test_zero_and_full_cone():
    assert member(Zero(ZZ), ZZ.zero())
    assert not member(Zero(ZZ), ZZ.element((0, 1)))
    assert member(FullCone(ZZ), ZZ.element((0, 7)))
    assert member(FullCone(ZZ), ZZ.zero())


def test_region_constraint_ops():
    S = region(ZZ, ("ge", 1), [("gt", -2), ("le", 5)])
    assert member(S, ZZ.element((1, 0)))
    assert member(S, ZZ.element((3, -1)))
    assert not member(S, ZZ.element((1, -2)))
    assert not member(S, ZZ.element((1, 6)))
    assert not member(S, ZZ.element((0, 3)))


def test_region_numerical_semigroup_constraint():
    # <5,6,7,8,9> has gaps exactly {1,2,3,4}
    S = region(Z, ("in", (5, 6, 7, 8, 9)))
    got = [member(S, Z.element((n,))) for n in range(11)]
    assert got == [True, False, False, False, False, True, True, True, True, True, True]
    # <2,3> has the single gap 1
    T = region(Z, ("in", (2, 3)))
    assert [member(T, Z.element((n,))) for n in range(5)] == [True, False, True, True, True]


def test_half_line_membership():
    H = HalfLine(ZZ, ZZ.element((1, 0)), 1)
    assert member(H, ZZ.element((1, 1)))
    assert member(H, ZZ.element((2, -9)))
    assert not member(H, ZZ.element((1, 0)))
    assert not member(H, ZZ.element((0, 3)))  # wrong stratum


def test_quadrant_cone_membership():
    S = QuadrantCone(ZS2, 2)
    assert member(S, ZS2.element((0, (1, 1))))
    assert member(S, ZS2.element((0, (0, 0))))
    # 2 - sqrt2 is positive but its q is negative: outside the quadrant
    assert not member(S, ZS2.element((0, (2, -1))))
    assert not member(S, ZS2.element((1, (1, 1))))  # first coordinate must vanish


def test_shift_membership():
    S = Shift(ZZ, Zero(ZZ), ZZ.element((1, -1)))
    assert member(S, ZZ.element((1, -1)))     # by + 0
    assert not member(S, ZZ.element((1, -2)))


def test_finite_set_and_union():
    S = union_of(Z, [FiniteSet.of(Z, [Z.element((0,)), Z.element((3,))]), gap5()])
    assert member(S, Z.element((3,)))
    assert member(S, Z.element((4,)))
    assert not member(S, Z.element((2,)))


def test_stratum_and_window_bounded():
    S = Stratum(ZZ, FullCone(ZZ), 2)
    assert member(S, ZZ.element((0, 4)))
    assert not member(S, ZZ.element((1, 4)))
    W = WindowBounded(ZZ, FullCone(ZZ), Window(ZZ, ((0, 2), (0, 2))), 4)
    assert member(W, ZZ.element((9, 9)))  # label does not change membership


def test_symmetric_union_case_split():
    S = plane_symmetric()
    # {0}; second stratum (0, n>0); first stratum (1, n>0) and everything >= 2
    assert member(S, ZZ.zero())
    assert member(S, ZZ.element((0, 1)))
    assert member(S, ZZ.element((1, 2)))
    assert member(S, ZZ.element((2, -5)))
    assert not member(S, ZZ.element((1, 0)))     # the excluded element
    assert not member(S, ZZ.element((1, -3)))    # a - g = (0,3) is in the tail
    assert not member(S, ZZ.element((0, -1)))


def test_symmetric_union_with_empty_tail():
    S = punctured_plane()
    assert member(S, ZZ.element((1, -3)))        # a - g = (0,3) not in the empty tail
    assert member(S, ZZ.element((1, 3)))
    assert not member(S, ZZ.element((0, 1)))
    assert not member(S, ZZ.element((1, 0)))


def test_symmetric_union_rejects_bad_inputs():
    with pytest.raises(DomainError):
        SymmetricUnion(Z, Z.element((1,)), ())
    with pytest.raises(PreconditionError):
        SymmetricUnion(ZZ, ZZ.element((0, 1)), (FullCone(ZZ),))


# ---------------------------------------------------------------------------
# decompose


def test_decompose_second_stratum_of_symmetric_union():
    S = plane_symmetric()
    D2 = decompose(S, 2)
    members = [g.coords for g in Window(ZZ, ((-1, 2), (-3, 3))).elements() if member(D2, g)]
    assert members == [(0, 1), (0, 2), (0, 3)]


def test_decompose_first_stratum_of_punctured_plane():
    S = punctured_plane()
    D1 = decompose(S, 1)
    w = Window(ZZ, ((0, 3), (-3, 3)))
    got = sorted(g.coords for g in w.elements() if member(D1, g))
    expected = sorted(
        [(1, n) for n in range(-3, 4) if n != 0]
        + [(m, n) for m in (2, 3) for n in range(-3, 4)]
    )
    assert got == expected


def test_decompose_partitions_the_window():
    S = plane_symmetric()
    parts = [decompose(S, i) for i in (1, 2)]
    for g in Window(ZZ, ((0, 2), (-4, 4))).elements():
        if g.is_zero() or not member(S, g):
            continue
        owners = [i for i, p in enumerate(parts, start=1) if member(p, g)]
        assert owners == [hat_index(g)], g.coords


def test_decompose_index_out_of_range():
    with pytest.raises(DomainError):
        decompose(plane_symmetric(), 3)


# ---------------------------------------------------------------------------
# submonoid check


def test_gap_monoid_is_a_submonoid_on_window():
    rep = check_submonoid(gap5(), Window(Z, ((0, 20),)))
    assert rep.ok and rep.zero_ok and rep.witness_pair is None


def test_submonoid_failure_reports_lex_first_pair():
    S = union_of(Z, [FiniteSet.of(Z, [Z.element((0,)), Z.element((3,)), Z.element((5,))])])
    rep = check_submonoid(S, Window(Z, ((0, 10),)))
    assert not rep.ok
    assert rep.witness_pair[0].coords == (3,)
    assert rep.witness_pair[1].coords == (3,)
    assert rep.witness_sum.coords == (6,)


def test_symmetric_union_is_a_submonoid_on_window():
    rep = check_submonoid(plane_symmetric(), Window(ZZ, ((0, 3), (-5, 5))))
    assert rep.ok


# ---------------------------------------------------------------------------
# the symmetry criterion


def test_gap_family_verifies_structurally():
    v = check_max_excluding(gap5(), Z.element((5,)), Window(Z, ((0, 20),)))
    assert v.status == VERIFIED_STRUCTURALLY
    assert v.verified


def test_positive_cone_minus_one_point_is_refuted():
    # Z>=0 minus {5} keeps both 1 and 4, so the pair (1,4) breaks symmetry
    S = union_of(
        Z,
        [
            FiniteSet.of(Z, [Z.element((n,)) for n in range(5)]),
            region(Z, ("ge", 6)),
        ],
    )
    v = check_max_excluding(S, Z.element((5,)), Window(Z, ((0, 12),)))
    assert v.status == REFUTED
    assert v.witness.coords == (1,)


def test_toggling_any_single_gap_element_refutes():
    # materialize GapMonoid(5) on [0,20] and flip one element at a time
    w = Window(Z, ((0, 20),))
    base = {g.coords[0] for g in w.elements() if member(gap5(), g)}
    for x in range(1, 21):
        if x == 5:
            flipped = base | {5}
        elif x in base:
            flipped = base - {x}
        else:
            flipped = base | {x}
        S = FiniteSet.of(Z, [Z.element((n,)) for n in sorted(flipped)])
        if 5 in flipped:
            with pytest.raises(PreconditionError):
                check_max_excluding(S, Z.element((5,)), w)
        else:
            v = check_max_excluding(S, Z.element((5,)), w)
            assert v.status == REFUTED, "toggle at %d" % x


def test_symmetric_union_verifies_structurally():
    S = plane_symmetric()
    v = check_max_excluding(S, ZZ.element((1, 0)), Window(ZZ, ((-2, 3), (-4, 4))))
    assert v.status == VERIFIED_STRUCTURALLY


def test_generic_union_form_verifies_on_window_only():
    # same set as plane_symmetric, spelled without the symmetric node
    S = union_of(
        ZZ,
        [
            region(ZZ, ("eq", 0), ("ge", 0)),
            region(ZZ, ("eq", 1), ("ge", 1)),
            region(ZZ, ("ge", 2), "any"),
        ],
    )
    v = check_max_excluding(S, ZZ.element((1, 0)), Window(ZZ, ((-2, 3), (-4, 4))))
    assert v.status == VERIFIED_ON_WINDOW


def test_excluded_element_must_be_outside():
    with pytest.raises(PreconditionError):
        check_max_excluding(gap5(), Z.element((4,)), Window(Z, ((0, 12),)))
    with pytest.raises(PreconditionError):
        check_max_excluding(gap5(), Z.element((0,)), Window(Z, ((0, 12),)))


def test_half_excluded_element_is_exempt():
    # the even-a variant: a = 10, g = 5 pairs with itself and is skipped
    S = GapMonoid(Z, Z.element((10,)))
    v = check_max_excluding(S, Z.element((10,)), Window(Z, ((0, 24),)))
    assert v.status == VERIFIED_STRUCTURALLY


def test_refutation_rescan_finds_no_other_shape():
    # whenever the check verifies, a brute rescan agrees (XOR everywhere)
    S = plane_symmetric()
    a = ZZ.element((1, 0))
    w = Window(ZZ, ((-1, 2), (-3, 3))).widen_include(a)
    assert check_max_excluding(S, a, w).verified
    for g in w.elements():
        if cmp(g + g, a) == 0:
            continue
        assert member(S, g) != member(S, a - g), g.coords


# ---------------------------------------------------------------------------
# root closure


def test_gap_closure_is_the_full_cone():
    assert isinstance(root_closure(gap5()), FullCone)


def test_quadrant_cone_is_closed():
    S = QuadrantCone(ZS2, 2)
    assert root_closure(S) is S


def test_symmetric_union_closure_fills_the_first_stratum():
    S = plane_symmetric()
    closed = root_closure(S, Window(ZZ, ((0, 3), (-6, 6))))
    for g in Window(ZZ, ((0, 3), (-6, 6))).elements():
        assert member(closed, g) == (g.sign() >= 0), g.coords


def test_punctured_plane_closure_adds_exactly_the_puncture():
    # structural path: the symmetric node closes exactly
    S = punctured_plane()
    w = Window(ZZ, ((0, 3), (-6, 6)))
    closed = root_closure(S, w, nmax=6)
    added = [
        g.coords for g in w.elements() if member(closed, g) and not member(S, g)
    ]
    assert added == [(1, 0)]
    # generic path: the same set spelled as a plain union is only enriched
    # on the window, and the enrichment finds the same single element
    U = union_of(
        ZZ,
        [
            Zero(ZZ),
            region(ZZ, ("eq", 1), ("lt", 0)),
            region(ZZ, ("eq", 1), ("gt", 0)),
            region(ZZ, ("ge", 2), "any"),
        ],
    )
    closed_u = root_closure(U, w, nmax=6)
    assert isinstance(closed_u, WindowBounded)
    added_u = [
        g.coords for g in w.elements() if member(closed_u, g) and not member(U, g)
    ]
    assert added_u == [(1, 0)]


def test_closure_contains_and_is_idempotent_on_window():
    S = punctured_plane()
    w = Window(ZZ, ((0, 3), (-6, 6)))
    closed = root_closure(S, w, nmax=6)
    again = root_closure(closed, w, nmax=6)
    for g in w.elements():
        if member(S, g):
            assert member(closed, g)
        assert member(again, g) == member(closed, g)


def test_closure_result_is_a_monoid_on_window():
    S = punctured_plane()
    w = Window(ZZ, ((0, 3), (-6, 6)))
    closed = root_closure(S, w, nmax=6)
    assert check_submonoid(closed, Window(ZZ, ((0, 3), (-3, 3)))).ok


# ---------------------------------------------------------------------------
# the constructor


def test_construct_reproduces_the_symmetric_node():
    S = construct_excluding_monoid(
        ZZ.element((1, 0)), [FullCone(ZZ)], window=Window(ZZ, ((-2, 3), (-4, 4)))
    )
    assert isinstance(S, SymmetricUnion)
    assert member(S, ZZ.element((1, 2)))
    assert not member(S, ZZ.element((1, 0)))


def test_construct_with_quadratic_tail_matches_case_split():
    cone = Stratum(ZS2, QuadrantCone(ZS2, 2), 2)
    S = construct_excluding_monoid(
        ZS2.element((1, (0, 0))),
        [cone],
        window=Window(ZS2, ((-1, 2), (-3, 3, -3, 3))),
    )
    # (1, sqrt2 - 2): a - g = (0, 2 - sqrt2) has q = -1, outside the cone
    assert member(S, ZS2.element((1, (-2, 1))))
    # (1, -1 - sqrt2): a - g = (0, 1 + sqrt2) is in the cone
    assert not member(S, ZS2.element((1, (-1, -1))))


def test_construct_with_empty_components():
    S = construct_excluding_monoid(
        ZZ.element((1, 0)), [Union(ZZ, ())], window=Window(ZZ, ((-2, 3), (-4, 4)))
    )
    assert member(S, ZZ.element((1, -3)))


def test_construct_requires_star_when_first_steps_exist():
    with pytest.raises(PreconditionError):
        construct_excluding_monoid(
            ZZ.element((2, 0)), [FullCone(ZZ)], window=Window(ZZ, ((-2, 4), (-4, 4)))
        )


def test_construct_refutes_unsummable_tail():
    # {(0,1)} alone is not closed under addition: (0,1)+(0,1) = (0,2) missing
    bad = FiniteSet.of(ZZ, [ZZ.element((0, 1))])
    with pytest.raises(HypothesisError) as err:
        construct_excluding_monoid(
            ZZ.element((1, 0)), [bad], window=Window(ZZ, ((-2, 3), (-4, 4)))
        )
    assert err.value.witness is not None


# ---------------------------------------------------------------------------
# projection, generation, serialization


def test_project_drop_first():
    S = region(ZZ, ("eq", 0), ("ge", 2))
    P = project_drop_first(S)
    T = ZZ.tail(1)
    assert member(P, T.element((2,)))
    assert not member(P, T.element((1,)))
    # a region pinned away from zero in the first coordinate projects to nothing
    Q = project_drop_first(region(ZZ, ("eq", 1), "any"))
    assert not any(member(Q, g) for g in Window(T, ((0, 6),)).elements())


def test_generates_group():
    assert generates_group(gap5(), Window(Z, ((-6, 6),)))
    assert not generates_group(Zero(Z), Window(Z, ((-6, 6),)))
    # even multiples generate the even subgroup only
    evens = region(Z, ("in", (2,)))
    assert not generates_group(evens, Window(Z, ((-6, 6),)))


def test_expr_json_round_trip_all_kinds():
    nodes = [
        Zero(ZZ),
        FullCone(ZZ),
        region(ZZ, ("ge", 1), [("gt", -2), ("le", 5)]),
        region(Z, ("in", (2, 3))),
        gap5(),
        HalfLine(ZZ, ZZ.element((1, 0)), 1),
        QuadrantCone(ZS2, 2),
        union_of(ZZ, [Zero(ZZ), region(ZZ, ("ge", 2), "any")]),
        Shift(ZZ, FullCone(ZZ), ZZ.element((1, 1))),
        FiniteSet.of(ZZ, [ZZ.element((0, 1)), ZZ.element((1, 0))]),
        Stratum(ZZ, FullCone(ZZ), 2),
        WindowBounded(ZZ, FullCone(ZZ), Window(ZZ, ((0, 2), (0, 2))), 4),
        plane_symmetric(),
        punctured_plane(),
    ]
    for node in nodes:
        back = expr_from_json(node.group, node.to_json())
        assert back.to_json() == node.to_json(), type(node).__name__


def test_expr_json_rejects_unknown_kind():
    with pytest.raises(InputFormatError):
        expr_from_json(ZZ, {"kind": "everything"})


def test_union_of_flattens_and_prunes():
    S = union_of(ZZ, [Union(ZZ, ()), Zero(ZZ)])
    assert isinstance(S, Zero)
