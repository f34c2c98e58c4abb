"""Pseudo-Hopf points, rank spaces, induced Weyl laws, Tits points."""

import pytest

from blueweyl import (
    LawDoesNotDescend,
    RankSpaceUndecidable,
    comultiplication,
    field_hom_count,
    induced_weyl_law,
    mk_free,
    product_check,
    pseudo_hopf_points,
    rank_space,
    relation,
)
from blueweyl.blueprint import NormalFormBlueField
from blueweyl import catalog
from blueweyl.verify import count_homs_to_f1m, extended_weyl_sign_oracle


# ---------------------------------------------------------------------------
# pseudo-Hopf classification
# ---------------------------------------------------------------------------


def test_pseudo_hopf_points_of_sl2():
    B = catalog.sl(2).presentation
    reports = {tuple(sorted(r.point.vars)): r for r in pseudo_hopf_points(B)}
    assert reports[(1, 2)].status == "certified"
    assert reports[(0, 3)].status == "certified"
    assert reports[(1, 2)].rank == 1 and reports[(0, 3)].rank == 1
    # the five smaller points stay unknown, at strictly larger rank estimates
    for key, r in reports.items():
        if key not in ((1, 2), (0, 3)):
            assert r.status == "unknown"
            assert r.rank > 1


def test_pseudo_hopf_sum_defined_generator():
    # T == 1 + 1: only the generic point is pseudo-Hopf, of rank 0
    B = mk_free(1, names=["T"])
    B = B.with_relations([relation([B.gen(0)], [B.one(), B.one()])])
    reports = pseudo_hopf_points(B)
    assert len(reports) == 1
    (r,) = reports
    assert r.point.vars == frozenset() and r.status == "certified" and r.rank == 0


def test_pseudo_hopf_affine_line_closed_point_only():
    B = mk_free(1)
    reports = {tuple(sorted(r.point.vars)): r for r in pseudo_hopf_points(B)}
    assert reports[(0,)].status == "certified" and reports[(0,)].rank == 0
    assert reports[()].status == "unknown" and reports[()].rank >= 1


def test_pseudo_hopf_rejects_finite_characteristic_point():
    ns = catalog.nonstandard_torus().presentation
    reports = pseudo_hopf_points(ns)
    assert [sorted(r.point.vars) for r in reports] == [[]]
    assert reports[0].status == "certified" and reports[0].rank == 1


# ---------------------------------------------------------------------------
# rank spaces
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("n", [2, 3, 4])
def test_rank_space_of_determinant_one_models(n):
    model = catalog.sl(n)
    pts = model.rank_points()
    fact = 1
    for k in range(2, n + 1):
        fact *= k
    assert len(pts) == fact
    assert all(p.rank == n - 1 for p in pts)
    evens = sum(1 for p in pts if p.epsilon == 1)
    assert evens == fact // 2


@pytest.mark.parametrize("n,expected_rank", [(1, 1), (2, 2), (3, 3)])
def test_rank_space_of_invertible_models(n, expected_rank):
    model = catalog.gl(n)
    pts = model.rank_points()
    fact = 1
    for k in range(2, n + 1):
        fact *= k
    assert len(pts) == fact and pts[0].rank == expected_rank


def test_rank_space_of_torus():
    pts = catalog.torus(3).rank_points()
    assert len(pts) == 1 and pts[0].rank == 3


def test_rank_space_error_lists_offenders():
    # U + V == 1 among units is outside every certification shape, so the
    # unique point of the spectrum stays unknown and the rank space is
    # undecidable
    B = mk_free(2, inverted=[0, 1], names=["U", "V"])
    B = B.with_relations([relation([B.gen(0), B.gen(1)], [B.one()])])
    with pytest.raises(RankSpaceUndecidable) as err:
        rank_space(B)
    assert err.value.offenders


def test_rank_space_minimum_per_component():
    model = catalog.constant_group(catalog.GroupTable.cyclic(2))
    pts = rank_space(model.presentation)
    assert len(pts) == 2
    assert all(p.rank == 0 for p in pts)


# ---------------------------------------------------------------------------
# the induced law
# ---------------------------------------------------------------------------


def test_weyl_law_of_sl2_is_order_two_group():
    W = catalog.sl(2).weyl_monoid()
    assert len(W) == 2 and W.is_group() and W.is_abelian()
    other = 1 - W.identity
    assert W.mul(other, other) == W.identity


def test_weyl_law_of_sl3_is_symmetric_group():
    from blueweyl.verify import symmetric_group_isomorphism

    model = catalog.sl(3)
    W = model.weyl_monoid()
    assert len(W) == 6 and W.is_group() and not W.is_abelian()
    assert W.is_associative() and W.is_unital()
    assert symmetric_group_isomorphism(model, W)


def test_weyl_law_of_torus_trivial():
    W = catalog.torus(2).weyl_monoid()
    assert len(W) == 1


def test_law_does_not_descend_for_broken_comultiplication():
    model = catalog.sl(2)
    B = model.presentation
    # keeping only the diagonal term of the comultiplication loses the
    # anti-diagonal products: their pattern kills every generator
    broken = comultiplication([
        [(B.gen(g), B.gen(g))] for g in range(4)
    ])
    with pytest.raises(LawDoesNotDescend):
        induced_weyl_law(B, broken, model.counit_zero)


def test_counit_must_be_a_rank_point():
    model = catalog.sl(2)
    with pytest.raises(ValueError):
        induced_weyl_law(model.presentation, model.comult, frozenset({0}))


# ---------------------------------------------------------------------------
# Tits points
# ---------------------------------------------------------------------------


def test_field_hom_count_even_lattice():
    nf = NormalFormBlueField(1, ("a", "b"), ((1, 1),), (0,))
    assert field_hom_count(nf, 1) == 1
    assert field_hom_count(nf, 2) == 2


def test_field_hom_count_odd_lattice():
    nf = NormalFormBlueField(2, ("a", "b"), ((1, 1),), (1,))
    assert field_hom_count(nf, 1) == 0
    assert field_hom_count(nf, 2) == 2


def test_tits_points_sl2():
    model = catalog.sl(2)
    t1 = model.tits_points(1)
    assert t1.count == 1
    t2 = model.tits_points(2)
    assert t2.count == 4


@pytest.mark.parametrize("n", [2, 3, 4])
def test_tits_points_counts_and_oracles(n):
    model = catalog.sl(n)
    fact = 1
    for k in range(2, n + 1):
        fact *= k
    t1 = model.tits_points(1)
    t2 = model.tits_points(2)
    assert t1.count == fact // 2
    assert t2.count == 2 ** (n - 1) * fact
    assert t2.count == extended_weyl_sign_oracle(n)


def test_tits_points_f1_form_a_submonoid():
    for model in (catalog.sl(2), catalog.sl(3), catalog.gl(2)):
        t1 = model.tits_points(1)
        assert t1.monoid is not None
        assert t1.monoid.is_group()


def test_residue_morphism_oracle_agrees():
    from blueweyl.spectrum import residue_presentation

    model = catalog.sl(3)
    pts = model.rank_points()
    for m in (1, 2):
        total = model.tits_points(m).count
        oracle = sum(count_homs_to_f1m(
            residue_presentation(model.presentation, r.point), m) for r in pts)
        assert oracle == total


def test_tits_points_rejects_bad_m():
    with pytest.raises(ValueError):
        catalog.sl(2).tits_points(3)


# ---------------------------------------------------------------------------
# products
# ---------------------------------------------------------------------------


def test_product_check_sl2_sl2():
    B = catalog.sl(2).presentation
    report = product_check(B, B)
    assert report.ok
    assert report.pairs_found == 4
    assert report.product_rank == 2


def test_product_check_sl2_torus():
    report = product_check(catalog.sl(2).presentation,
                           catalog.torus(1).presentation)
    assert report.ok and report.pairs_found == 2 and report.product_rank == 2


def test_product_check_tori():
    report = product_check(catalog.torus(2).presentation,
                           catalog.torus(1).presentation)
    assert report.ok and report.pairs_found == 1 and report.product_rank == 3
