"""Core blueprint operations: presentations, tensor products, entailment,
unit fields, inverse closure, Smith normal form, characteristics."""

import random

import pytest

from blueweyl import (
    inverse_closure,
    localize,
    mk_free,
    potential_characteristics,
    presentation_from_json,
    presentation_to_json,
    quotient_by_vars,
    reduce_presentation,
    relation,
    relation_entailed,
    simplify_presentation,
    smith_normal_form,
    tensor,
    unit_field,
)
from blueweyl.blueprint import (
    Monomial,
    one_monomial,
    smith_normal_form_with_transforms,
)
from blueweyl.spectrum import brute_force_primes, enumerate_primes
from blueweyl import catalog


def sl2_presentation():
    return catalog.sl(2).presentation


# ---------------------------------------------------------------------------
# free objects and basic constructions
# ---------------------------------------------------------------------------


def test_mk_free_polynomial_monoid():
    B = mk_free(4)
    assert B.width == 4
    assert not B.relations
    assert not B.inverted


def test_mk_free_torus_has_one_point():
    B = mk_free(1, inverted=[0])
    assert [sorted(p.vars) for p in enumerate_primes(B)] == [[]]


def test_mk_free_f12():
    B = mk_free(0, coeff_order=2)
    assert B.coeff_order == 2
    assert B.width == 0


def test_mk_free_rejects_negative():
    with pytest.raises(ValueError):
        mk_free(-1)


def test_quotient_by_diagonal_vanishing():
    # killing the anti-diagonal leaves the relation T1*T4 == 1
    B = sl2_presentation()
    Q = quotient_by_vars(B, {1, 2})
    survivors = [r for r in Q.relations
                 if all(len(t.support() & {1, 2}) == 0 for t in r.all_terms())
                 and r.all_terms()]
    det = [r for r in survivors if any(t.degree == 2 for t in r.all_terms())]
    assert len(det) == 1
    (rel,) = det
    terms = sorted(t.exps for t in rel.all_terms())
    assert terms == [(0, 0, 0, 0), (1, 0, 0, 1)]


def test_quotient_keeps_sums_equal_to_zero():
    # killing the diagonal leaves T2*T3 + 1 == 0
    B = sl2_presentation()
    Q = quotient_by_vars(B, {0, 3})
    zero_sums = [r for r in Q.relations
                 if (len(r.lhs) == 0) != (len(r.rhs) == 0)
                 and len(r.all_terms()) == 2]
    assert any(sorted(t.exps for t in r.all_terms())
               == [(0, 0, 0, 0), (0, 1, 1, 0)] for r in zero_sums)


def test_quotient_empty_is_identity():
    B = sl2_presentation()
    assert quotient_by_vars(B, ()) == B


def test_localize_marks_inverted():
    B = mk_free(1)
    L = localize(B, {0})
    assert L.inverted == frozenset({0})
    assert localize(B, ()) == B


def test_localized_sl2_diagonal_chart_spectrum():
    B = localize(sl2_presentation(), {0, 3})
    fast = [sorted(p.vars) for p in enumerate_primes(B)]
    slow = [sorted(p.vars) for p in brute_force_primes(B)]
    assert fast == slow
    # inverted generators never lie in a prime ideal
    assert all(0 not in p and 3 not in p for p in fast)


# ---------------------------------------------------------------------------
# tensor products
# ---------------------------------------------------------------------------


def test_tensor_with_f1_is_unit():
    B = sl2_presentation()
    T = tensor(B, mk_free(0))
    assert T.canonical_key() == B.canonical_key()


def test_tensor_f12_f12_over_f1():
    T = tensor(mk_free(0, coeff_order=2), mk_free(0, coeff_order=2))
    assert T.coeff_order == 2
    assert not T.relations  # the presentation of F1^2 again


def test_tensor_twisted_identification_gives_char_two():
    f12 = mk_free(0, coeff_order=2)
    base = ({0: one_monomial(0, 0)}, {0: one_monomial(0, 1)})
    T = tensor(f12, f12, base=base)
    assert relation_entailed(T, relation([T.one()] * 2, [])) == "yes"
    assert potential_characteristics(T).label == "{2}"


def test_tensor_base_map_must_be_unit():
    B = mk_free(1)  # T is not invertible here
    with pytest.raises(Exception):
        tensor(B, B, base=({0: B.gen(0)}, {0: B.gen(0)}))


def test_tensor_commutative_and_associative_up_to_renaming():
    models = [catalog.sl(2).presentation, catalog.sl(3).presentation,
              catalog.torus(1).presentation, catalog.torus(2).presentation,
              catalog.nonstandard_torus().presentation,
              catalog.gl(1).presentation, catalog.gl(2).presentation,
              catalog.sp(2).presentation, catalog.so(3).presentation,
              mk_free(0, coeff_order=2)]
    for B in models:
        for C in models:
            if B.width + C.width > 12:
                continue
            left = tensor(B, C)
            right = tensor(C, B)
            perm = list(range(B.width, B.width + C.width)) + list(range(B.width))
            assert _relabel_key(right, perm) == left.canonical_key()
    A, B, C = models[0], models[2], models[5]
    assert tensor(tensor(A, B), C).canonical_key() == \
        tensor(A, tensor(B, C)).canonical_key()


def _relabel_key(B, perm):
    """Canonical key of B with generator g renamed to position perm[g]."""
    from blueweyl.blueprint import make_presentation, Monomial, relation as mk_rel

    def remap(t):
        exps = [0] * B.width
        for g, e in enumerate(t.exps):
            exps[perm[g]] = e
        return Monomial(t.sign, tuple(exps))

    rels = [mk_rel([remap(t) for t in r.lhs.terms],
                   [remap(t) for t in r.rhs.terms]) for r in B.relations]
    out = make_presentation([f"g{k}" for k in range(B.width)],
                            [perm[g] for g in B.inverted], B.coeff_order, rels)
    return out.canonical_key()


# ---------------------------------------------------------------------------
# unit fields
# ---------------------------------------------------------------------------


def test_unit_field_of_sl2_is_f1():
    U = unit_field(sl2_presentation())
    assert U.width == 0
    assert not U.relations


def test_sl2_unit_oracle_degree_four():
    """Independent check: no monomial of degree <= 4 is invertible.

    Units evaluate to units of the integers on every integral matrix of the
    model; two witness matrices separate every non-constant monomial from
    +-1.
    """
    witnesses = [(2, 1, 3, 2), (1, 5, 0, 1)]  # determinant-one integer tuples
    for a in range(5):
        for b in range(5 - a):
            for c in range(5 - a - b):
                for d in range(5 - a - b - c):
                    if a == b == c == d == 0:
                        continue
                    values = [w[0] ** a * w[1] ** b * w[2] ** c * w[3] ** d
                              for w in witnesses]
                    assert any(v not in (1, -1) for v in values)


def test_unit_field_of_torus_is_itself():
    B = mk_free(1, inverted=[0])
    assert unit_field(B).canonical_key() == B.canonical_key()


def test_unit_field_of_odd_residue_is_whole_field():
    sl2 = catalog.sl(2)
    from blueweyl.spectrum import residue_presentation, PrimePoint

    kappa = residue_presentation(sl2.presentation, PrimePoint({0, 3}))
    U = unit_field(kappa)
    assert set(U.generator_names) == {"T2", "T3"}
    assert len(U.relations) == 1


def test_unit_field_idempotent():
    for B in (sl2_presentation(), mk_free(2, inverted=[0])):
        U = unit_field(B)
        assert unit_field(U).canonical_key() == U.canonical_key()


# ---------------------------------------------------------------------------
# inverse closure
# ---------------------------------------------------------------------------


def test_inverse_closure_of_torus_unchanged():
    B = mk_free(1, inverted=[0])
    res = inverse_closure(B)
    assert res.ok and res.presentation == B


def test_inverse_closure_upgrades_additively_invertible_unit():
    B = mk_free(2, inverted=[0, 1], names=["T2", "T3"])
    B = B.with_relations([relation([B.monomial([1, 1]), B.one()], [])])
    res = inverse_closure(B)
    assert res.ok
    assert res.presentation.coeff_order == 2


def test_inverse_closure_idempotent():
    B = mk_free(2, inverted=[0, 1])
    B = B.with_relations([relation([B.monomial([1, 1]), B.one()], [])])
    once = inverse_closure(B).presentation
    twice = inverse_closure(once).presentation
    assert once == twice


def test_inverse_closure_unsupported_input_flagged():
    res = inverse_closure(catalog.nonstandard_torus().presentation)
    assert not res.ok
    assert res.diagnostics


def test_inverse_closure_commutes_with_tensor():
    B1 = mk_free(2, inverted=[0, 1])
    B1 = B1.with_relations([relation([B1.monomial([1, 1]), B1.one()], [])])
    B2 = mk_free(1, inverted=[0])
    lhs = inverse_closure(tensor(B1, B2)).presentation
    rhs = tensor(inverse_closure(B1).presentation, inverse_closure(B2).presentation)
    assert lhs.canonical_key() == rhs.canonical_key()


# ---------------------------------------------------------------------------
# bounded entailment
# ---------------------------------------------------------------------------


def test_entailment_multiply_generator_relation():
    B = sl2_presentation()
    # T1*T4*T2 == T2^2*T3 + T2 follows by multiplying the relation by T2
    lhs = [B.monomial([1, 1, 0, 1])]
    rhs = [B.monomial([0, 2, 1, 0]), B.gen(1)]
    assert relation_entailed(B, relation(lhs, rhs), budget=3) == "yes"


def test_entailment_reflexive():
    B = sl2_presentation()
    assert relation_entailed(B, B.relations[0], budget=1) == "yes"


def test_entailment_unknown_for_separated_generators():
    B = sl2_presentation()
    rel = relation([B.gen(0)], [B.gen(1)])
    assert relation_entailed(B, rel, budget=300) == "unknown"
    # integral witness: the matrix (2,1,3,2) has determinant one but T1 != T2
    assert 2 * 2 - 1 * 3 == 1 and 2 != 1


def test_entailment_monotone_in_budget():
    B = sl2_presentation()
    lhs = [B.monomial([1, 1, 0, 1])]
    rhs = [B.monomial([0, 2, 1, 0]), B.gen(1)]
    verdicts = [relation_entailed(B, relation(lhs, rhs), budget=b)
                for b in (1, 10, 100, 1000)]
    assert "".join(v[0] for v in verdicts) in ("uuuu", "uuyy", "uyyy", "yyyy",
                                               "uuuy")
    for small, big in zip(verdicts, verdicts[1:]):
        assert not (small == "yes" and big == "unknown")


def test_entailment_never_yes_on_integer_witness_violations():
    """Soundness probe: randomly generated non-relations stay unknown."""
    B = sl2_presentation()
    rng = random.Random(7)
    witness = (2, 1, 3, 2)  # determinant 1
    for _ in range(25):
        exps = [rng.randint(0, 2) for _ in range(4)]
        lhs = [B.monomial(exps)]
        rhs = [B.one()]
        lhs_val = 1
        for w, e in zip(witness, exps):
            lhs_val *= w ** e
        if lhs_val != 1:
            assert relation_entailed(B, relation(lhs, rhs), budget=150) == "unknown"


def test_entailment_uses_squared_sign_rule():
    # in a coefficient-order-2 field, (T2*T3)^2 == 1 given T2*T3 + 1 == 0
    B = mk_free(2, inverted=[0, 1], names=["T2", "T3"], coeff_order=2)
    B = B.with_relations([relation([B.monomial([1, 1]), B.one()], [])])
    target = relation([B.monomial([2, 2])], [B.one()])
    assert relation_entailed(B, target, budget=500) == "yes"


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


def test_snf_single_relation_row():
    divisors, rank = smith_normal_form([[1, 1]])
    assert divisors == [1] and rank == 1


def test_snf_zero_matrix():
    divisors, rank = smith_normal_form([[0, 0, 0], [0, 0, 0]])
    assert divisors == [] and rank == 0


def test_snf_torsion():
    divisors, rank = smith_normal_form([[2]])
    assert divisors == [2] and rank == 1


def test_snf_divisibility_chain_and_reconstruction():
    rng = random.Random(20259)
    for _ in range(20):
        rows = [[rng.randint(-9, 9) for _ in range(5)] for _ in range(5)]
        divisors, U, V, rank = smith_normal_form_with_transforms(rows)
        for d1, d2 in zip(divisors, divisors[1:]):
            assert d2 % d1 == 0
        # U * M * V is the diagonal of the divisors
        prod = _matmul(_matmul(U, rows), V)
        for i in range(5):
            for j in range(5):
                expect = divisors[i] if i == j and i < len(divisors) else 0
                assert prod[i][j] == expect
        assert abs(_det(U)) == 1 and abs(_det(V)) == 1


def _matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B)))
             for j in range(len(B[0]))] for i in range(len(A))]


def _det(M):
    n = len(M)
    if n == 1:
        return M[0][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        total += (-1) ** j * M[0][j] * _det(minor)
    return total


# ---------------------------------------------------------------------------
# potential characteristics
# ---------------------------------------------------------------------------


def test_characteristics_of_torus_indefinite():
    assert potential_characteristics(mk_free(1, inverted=[0])).label == "indefinite"


def test_characteristics_of_f12_all_but_one():
    assert potential_characteristics(mk_free(0, coeff_order=2)).label == "all-but-1"


def test_characteristics_of_char_two_field():
    B = mk_free(0)
    B = B.with_relations([relation([B.one()] * 2, [])])
    assert potential_characteristics(B).label == "{2}"


def test_characteristics_of_idempotent_semifield():
    B = mk_free(0)
    B = B.with_relations([relation([B.one()] * 2, [B.one()])])
    assert potential_characteristics(B).label == "{1}"


def test_characteristics_excludes_divisors_of_unit_sums():
    # an invertible generator identified with 1 + 1 excludes characteristic 2
    B = mk_free(1, inverted=[0], names=["S"])
    B = B.with_relations([relation([B.gen(0)], [B.one(), B.one()])])
    c = potential_characteristics(B)
    assert c.kind == "all-but" and c.excluded == {2}


def test_characteristics_of_tensor_refines_intersection():
    cases = [mk_free(0), mk_free(0, coeff_order=2), mk_free(1, inverted=[0])]
    B2 = mk_free(0).with_relations([relation([one_monomial(0)] * 2, [])])
    cases.append(B2)
    for A in cases:
        for B in cases:
            ct = potential_characteristics(tensor(A, B))
            ci = potential_characteristics(A).intersect(potential_characteristics(B))
            if ct.kind != "unknown":
                assert ct.is_refinement_of(ci)


# ---------------------------------------------------------------------------
# reduction
# ---------------------------------------------------------------------------


def test_reduce_of_reduced_presentation_unchanged():
    B = sl2_presentation()
    primes = [p.vars for p in enumerate_primes(B)]
    assert reduce_presentation(B, primes) == B


def test_reduce_kills_nilpotent_generator():
    # T^2 == 0 forces T into every prime; the reduction kills T
    B = mk_free(1)
    B = B.with_relations([relation([B.monomial([2])], [])])
    primes = [p.vars for p in enumerate_primes(B)]
    assert primes == [frozenset({0})]
    R = reduce_presentation(B, primes)
    assert 0 in R.killed()
    # brute-force nilpotency scan: T, T^2, T^3, T^4 all nilpotent mod T^2
    for k in range(1, 5):
        assert 2 * ((k + 1) // 2) >= 2  # T^k * T^(2 - k mod 2) lands in (T^2)


def test_reduce_empty_prime_set_gives_zero():
    from blueweyl.blueprint import is_zero_blueprint

    B = mk_free(0)
    Z = reduce_presentation(B, [])
    assert is_zero_blueprint(Z)


# ---------------------------------------------------------------------------
# JSON round trip and simplification
# ---------------------------------------------------------------------------


def test_presentation_json_roundtrip():
    B = catalog.sl(2).presentation
    data = presentation_to_json(B)
    C = presentation_from_json(data)
    assert C == B


def test_simplify_unit_definitions():
    B = mk_free(2, names=["T", "U"])
    B = B.with_relations([relation([B.gen(0)], [B.one()])])
    S = simplify_presentation(B)
    assert S.generator_names == ("U",)
    assert not S.relations
