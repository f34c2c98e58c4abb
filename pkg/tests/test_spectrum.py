"""Prime enumeration, poset topology, residue fields, DOT export."""

import pytest

from blueweyl import (
    NormalFormBlueField,
    closed_subscheme,
    enumerate_primes,
    export_dot,
    is_prime,
    localize,
    mk_free,
    poset,
    relation,
    residue_field,
    sobriety_check,
    spectrum_to_json,
)
from blueweyl.spectrum import (
    GeneratorCapExceeded,
    PrimePoint,
    SpectrumPoset,
    brute_force_primes,
    projective_space_poset,
)
from blueweyl import catalog


def sl2():
    return catalog.sl(2).presentation


# ---------------------------------------------------------------------------
# the prime criterion
# ---------------------------------------------------------------------------


def test_is_prime_diagonal_pattern():
    assert is_prime(sl2(), {1, 2})  # (T2, T3)


def test_is_prime_rejects_mixed_pattern():
    # (T1, T2) leaves exactly the constant term outside
    assert not is_prime(sl2(), {0, 1})


def test_is_prime_generic_point():
    assert is_prime(sl2(), set())


def test_is_prime_rejects_inverted_generator():
    B = localize(sl2(), {0})
    assert not is_prime(B, {0})


def test_enumerate_primes_sl2_names():
    B = sl2()
    labels = sorted(tuple(B.name_of(g) for g in sorted(p.vars))
                    for p in enumerate_primes(B))
    assert labels == sorted([(), ("T1",), ("T2",), ("T3",), ("T4",),
                             ("T1", "T4"), ("T2", "T3")])


def test_enumerate_primes_affine_plane():
    assert len(enumerate_primes(mk_free(2))) == 4


@pytest.mark.parametrize("n", [2, 3, 4])
def test_enumerate_primes_sl_matches_permutation_structure(n):
    """Point sets are exactly the subsets of permutation complements."""
    import itertools

    model = catalog.sl(n)
    pts = {p.vars for p in model.spectrum()}
    allowed = set()
    for sigma in itertools.permutations(range(n)):
        support = {n * i + sigma[i] for i in range(n)}
        comp = sorted(set(range(n * n)) - support)
        for bits in range(1 << len(comp)):
            allowed.add(frozenset(comp[i] for i in range(len(comp))
                                  if (bits >> i) & 1))
    assert pts == allowed


def test_enumerate_matches_brute_force_on_catalog():
    for model in (catalog.sl(2), catalog.gl(2), catalog.sp(2), catalog.so(3),
                  catalog.nonstandard_torus()):
        fast = [p.vars for p in enumerate_primes(model.presentation)]
        slow = [p.vars for p in brute_force_primes(model.presentation)]
        assert fast == slow, model.name


def test_brute_force_agrees_with_pointwise_criterion():
    import itertools

    for model in (catalog.sl(2), catalog.gl(2), catalog.so(3)):
        B = model.presentation
        free = [g for g in range(B.width) if g not in B.inverted]
        direct = []
        for size in range(len(free) + 1):
            for cand in itertools.combinations(free, size):
                if is_prime(B, cand):
                    direct.append(frozenset(cand))
        assert sorted(direct, key=sorted) == \
            sorted((p.vars for p in brute_force_primes(B)), key=sorted)


def test_generator_cap():
    with pytest.raises(GeneratorCapExceeded):
        enumerate_primes(mk_free(30))
    assert len(enumerate_primes(mk_free(5), cap=5)) == 32


def test_zero_blueprint_has_empty_spectrum():
    B = mk_free(0)
    B = B.with_relations([relation([B.one()], [])])
    assert enumerate_primes(B) == []


def test_transitivity_closes_generating_gap():
    # S == 1 + 1 and 1 + 1 == 0 force S == 0; only (S) remains a point
    B = mk_free(1, names=["S"])
    B = B.with_relations([
        relation([B.gen(0)], [B.one(), B.one()]),
        relation([B.one(), B.one()], []),
    ])
    assert [sorted(p.vars) for p in enumerate_primes(B)] == [[0]]


# ---------------------------------------------------------------------------
# posets and topology
# ---------------------------------------------------------------------------


def test_poset_layers_of_sl2():
    P = poset(enumerate_primes(sl2()))
    sizes = sorted(len(p.vars) for p in P.points)
    assert sizes == [0, 1, 1, 1, 1, 2, 2]
    assert len(P.hasse_edges()) == 8


def test_single_point_poset():
    P = poset([PrimePoint(set())])
    assert P.hasse_edges() == []
    assert P.components() == [frozenset({0})]


def test_projective_line_chain_shape():
    P = projective_space_poset(1)
    assert len(P.points) == 3
    # one generic point below two closed points
    assert len(P.hasse_edges()) == 2
    mins = [i for i in range(3) if not any(P.leq(j, i) for j in range(3) if j != i)]
    assert len(mins) == 1


def test_projective_plane_count():
    assert len(projective_space_poset(2).points) == 7


def test_components_of_constant_group():
    model = catalog.constant_group(catalog.GroupTable.cyclic(3))
    P = poset(model.spectrum())
    assert len(P.components()) == 3


def test_sobriety_of_catalog_spectra():
    for model in (catalog.sl(2), catalog.sl(3), catalog.gl(2), catalog.so(3)):
        assert sobriety_check(poset(model.spectrum()))
    assert sobriety_check(projective_space_poset(2))


def test_sobriety_detects_broken_closed_family():
    # a diamond whose family omits the two point closures: the top set
    # becomes irreducible with two minimal points
    pts = (PrimePoint({0}), PrimePoint({1}), PrimePoint({0, 1}))
    family = (frozenset(), frozenset({2}), frozenset({0, 1, 2}))
    P = SpectrumPoset(pts, closed_family=family)
    assert not sobriety_check(P)


def test_sobriety_of_two_incomparable_points():
    P = poset([PrimePoint({0}), PrimePoint({1})])
    assert sobriety_check(P)


# ---------------------------------------------------------------------------
# DOT and JSON output
# ---------------------------------------------------------------------------


def test_export_dot_sl2():
    B = sl2()
    P = poset(enumerate_primes(B))
    dot = export_dot(P, B)
    assert dot.count("->") == 8
    assert '"(T2,T3)"' in dot and '"(0)"' in dot
    assert dot == export_dot(P, B)  # deterministic


def test_export_dot_empty():
    dot = export_dot(poset([]))
    assert "digraph" in dot and "->" not in dot


def test_export_dot_affine_plane_diamond():
    P = poset(enumerate_primes(mk_free(2)))
    dot = export_dot(P)
    assert dot.count("->") == 4


def test_spectrum_json():
    P = poset(enumerate_primes(mk_free(1)))
    data = spectrum_to_json(P)
    assert data["points"] == [[], [0]]
    assert data["hasse"] == [[0, 1]]


# ---------------------------------------------------------------------------
# residue fields and closed subschemes
# ---------------------------------------------------------------------------


def test_residue_field_even_point():
    nf = residue_field(sl2(), PrimePoint({1, 2}))
    assert isinstance(nf, NormalFormBlueField)
    assert nf.epsilon == 1
    assert nf.rank == 1
    assert nf.lattice in (((1, 1),), ((-1, -1),))


def test_residue_field_odd_point():
    nf = residue_field(sl2(), PrimePoint({0, 3}))
    assert isinstance(nf, NormalFormBlueField)
    assert nf.epsilon == 2
    assert nf.rank == 1
    assert nf.row_signs == (1,)


def test_residue_field_of_torus_at_generic_point():
    B = mk_free(1, inverted=[0])
    nf = residue_field(B, PrimePoint(set()))
    assert isinstance(nf, NormalFormBlueField)
    assert nf.epsilon == 1 and nf.rank == 1


def test_closed_subscheme_diagonal_chart():
    B = sl2()
    sub = closed_subscheme(B, PrimePoint({1, 2}))
    assert {1, 2} <= sub.killed()
    kept = [r for r in sub.relations
            if r.all_terms() and all(not (t.support() & {1, 2})
                                     for t in r.all_terms())]
    assert len(kept) == 1


def test_closed_subscheme_generic_point_is_reduction():
    B = sl2()
    sub = closed_subscheme(B, PrimePoint(set()))
    assert sub.canonical_key() == B.canonical_key()


def test_closed_subscheme_gl2_diagonal_chart_with_witnesses():
    """The diagonal chart of the invertible 2x2 model: d*T1*T4 == 1.

    Cross-checked on integral diagonal matrices: the product of the diagonal
    with the inverse determinant is one.
    """
    model = catalog.gl(2)
    p = PrimePoint({1, 2})  # T2 = T3 = 0
    sub = closed_subscheme(model.presentation, p)
    kept = [r for r in sub.relations
            if r.all_terms() and all(not (t.support() & {1, 2})
                                     for t in r.all_terms())]
    assert len(kept) == 1
    (rel,) = kept
    exps = sorted(t.exps for t in rel.all_terms())
    assert exps == [(0, 0, 0, 0, 0), (1, 0, 0, 1, 1)]
    from fractions import Fraction

    for a, b in ((1, 1), (2, 3), (-1, 5)):
        d = Fraction(1, a * b)
        assert d * a * b == 1
