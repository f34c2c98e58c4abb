"""Expression parsing and the zero-pattern sampling oracle."""

from fractions import Fraction

import pytest

from blueweyl import catalog
from blueweyl.patterns import (
    FamilySyntaxError,
    SampleField,
    adjoint_families,
    compare_with_spectrum,
    conjugation_family,
    evaluate,
    fields_for_characteristics,
    merge_reports,
    parse_constraint,
    parse_expression,
    parse_family,
    realizable_patterns,
    reevaluate_witness,
    render_expression,
)


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


def test_parse_simple_constraint():
    c = parse_constraint("a*d - b*c = 1")
    assert c.equality
    values = {"a": Fraction(2), "b": Fraction(1), "c": Fraction(1),
              "d": Fraction(1)}
    assert c.satisfied(values, SampleField(0))


def test_parse_inequation():
    c = parse_constraint("lambda != 0")
    assert not c.equality
    assert c.satisfied({"lambda": Fraction(3)}, SampleField(0))
    assert not c.satisfied({"lambda": Fraction(0)}, SampleField(0))


def test_parse_negative_power_entry():
    e = parse_expression("-(lambda^-2*t^2)")
    value = evaluate(e, {"lambda": Fraction(2), "t": Fraction(3)}, SampleField(0))
    assert value == Fraction(-9, 4)


def test_parse_errors_carry_position():
    with pytest.raises(FamilySyntaxError):
        parse_expression("a + + b")
    with pytest.raises(FamilySyntaxError):
        parse_expression("(a")
    with pytest.raises(FamilySyntaxError):
        parse_family("params: a\nmystery: 3")


def test_family_rejects_undeclared_parameters():
    with pytest.raises(FamilySyntaxError):
        parse_family("params: a\nmatrix: [a, b]")


def test_families_round_trip_through_parser():
    fam = conjugation_family()
    assert fam.params == ("a", "b", "c", "d")
    assert fam.shape == (4, 4)
    assert len(fam.loci) == 6
    for row in fam.matrix:
        for entry in row:
            assert render_expression(entry)
    cell_b, cell_bwb = adjoint_families()
    assert cell_b.shape == (3, 3) and cell_bwb.shape == (3, 3)
    assert cell_bwb.params == ("lambda", "s", "t")


# ---------------------------------------------------------------------------
# exact field arithmetic
# ---------------------------------------------------------------------------


def test_prime_field_division():
    F = SampleField(5, 5)
    assert F.div(3, 2) == 4  # 2 * 4 == 3 mod 5
    assert F.power(2, -1) == 3


def test_gf4_arithmetic():
    F = SampleField(2, 4)
    # the two generators of the multiplicative group are inverse to each other
    assert F.mul(2, 3) == 1
    assert F.add(2, 3) == 1
    assert F.mul(2, 2) == 3
    assert F.power(2, 3) == 1
    assert F.div(1, 2) == 3


def test_fields_for_characteristics():
    tags = [F.tag for F in fields_for_characteristics((0, 2, 3, 5))]
    assert tags == ["Q", "F2", "F4", "F3", "F5"]


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


def test_conjugation_patterns_match_spectrum():
    report = realizable_patterns(conjugation_family(), samples=300)
    comparison = compare_with_spectrum(catalog.psl2_conj(), report)
    assert comparison.ok
    assert comparison.matched == 7


def test_adjoint_patterns_match_spectrum():
    cell_b, cell_bwb = adjoint_families()
    report = merge_reports(realizable_patterns(cell_b, samples=300),
                           realizable_patterns(cell_bwb, samples=300))
    comparison = compare_with_spectrum(catalog.psl2_adjoint(), report)
    assert comparison.ok
    assert comparison.matched == 13


def test_char2_only_patterns_are_the_primed_points():
    cell_b, cell_bwb = adjoint_families()
    report = merge_reports(realizable_patterns(cell_b, samples=300),
                           realizable_patterns(cell_bwb, samples=300))
    primed = {frozenset((g[0], g[1]) for g in pos)
              for name, (pos, char2) in catalog.ADJOINT_POINT_TABLE.items()
              if char2}
    assert report.char2_only_patterns() == primed


def test_no_char2_witness_for_midpoint_locus():
    # 2*s*t = lambda^2 has no solution with lambda != 0 in characteristic 2
    _, cell_bwb = adjoint_families()
    report = realizable_patterns(cell_bwb, characteristics=(2,), samples=60)
    assert any("2st=l2" in w for w in report.warnings)


def test_witnesses_reevaluate():
    fam = conjugation_family()
    report = realizable_patterns(fam, samples=200)
    assert report.patterns
    for pattern, info in report.patterns.items():
        for witness in info["witnesses"]:
            assert reevaluate_witness(fam, pattern, witness)


def test_patterns_monotone_in_samples():
    fam = conjugation_family()
    small = realizable_patterns(fam, samples=40, seed=11)
    large = realizable_patterns(fam, samples=400, seed=11)
    assert small.pattern_set() <= large.pattern_set()


def test_patterns_monotone_in_loci():
    fam = conjugation_family()
    from blueweyl.patterns import ParamFamily

    stripped = ParamFamily(fam.params, fam.constraints, fam.matrix, {},
                           fam.name)
    fewer = realizable_patterns(stripped, samples=200, seed=3)
    more = realizable_patterns(fam, samples=200, seed=3)
    assert fewer.pattern_set() <= more.pattern_set()


def test_report_json_shape():
    fam = conjugation_family()
    report = realizable_patterns(fam, samples=60)
    data = report.to_json()
    assert data["family"] == "psl2-conj"
    assert data["seed"] == report.seed
    assert all("witnesses" in p for p in data["patterns"])


def test_deterministic_reports():
    fam = conjugation_family()
    r1 = realizable_patterns(fam, samples=100, seed=42)
    r2 = realizable_patterns(fam, samples=100, seed=42)
    assert r1.to_json() == r2.to_json()
