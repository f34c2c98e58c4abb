"""Rank spaces, induced Weyl laws, and Tits points over F1 and F1^2.

A point of a finite blue scheme is pseudo-Hopf when its closed subscheme is
affine, generated by its units after adjoining inverses, flat over the
integers, and almost of indefinite characteristic.  The rank space collects
the pseudo-Hopf points of minimal rank per connected component together with
their unit fields; a comultiplication then induces a monoid law on those
points by substituting vanishing patterns.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal, Optional, Sequence

from .blueprint import (
    BlueprintPresentation,
    CharacteristicClass,
    Monomial,
    NormalFormBlueField,
    analyze_normal_form,
    potential_characteristics,
    quotient_by_vars,
    smith_normal_form,
    tensor,
)
from .spectrum import (
    DEFAULT_GENERATOR_CAP,
    PrimePoint,
    enumerate_primes,
    poset,
    residue_presentation,
)


class RankSpaceUndecidable(Exception):
    """A point of unknown pseudo-Hopf status interferes with the minimal rank."""

    def __init__(self, B: BlueprintPresentation, offenders: list["PseudoHopfReport"]):
        labels = ", ".join(r.point.label(B) for r in offenders)
        super().__init__(f"rank space undecidable: unknown-status points at "
                         f"minimal rank: {labels}")
        self.offenders = offenders


class LawDoesNotDescend(Exception):
    """The comultiplication does not induce a law on the rank points."""

    def __init__(self, B: BlueprintPresentation, x: PrimePoint, y: PrimePoint,
                 pattern: frozenset[int]):
        label = "(" + ",".join(B.name_of(i) for i in sorted(pattern)) + ")"
        super().__init__(
            f"law does not descend: product of {x.label(B)} and {y.label(B)} "
            f"has vanishing pattern {label}, which is no rank point")
        self.pair = (x, y)
        self.pattern = pattern


# ---------------------------------------------------------------------------
# Pseudo-Hopf classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PseudoHopfReport:
    """Certification status of one spectrum point.

    ``rank`` is exact for certified points (the free rank of the unit
    lattice of the closed subscheme).  For unknown points it is an upper
    estimate: detected-unit lattice rank plus the number of undetermined
    generators; it is used only to decide whether the point can interfere
    with the minimal rank.
    """

    point: PrimePoint
    rank: int
    status: Literal["certified", "unknown", "rejected"]
    epsilon: Optional[int] = None
    field: Optional[NormalFormBlueField] = None
    characteristics: Optional[CharacteristicClass] = None
    diagnostics: tuple[str, ...] = ()


def _classify_point(B: BlueprintPresentation, p: PrimePoint) -> PseudoHopfReport:
    subscheme = quotient_by_vars(B, p.vars)
    analysis = analyze_normal_form(subscheme)
    kappa = residue_presentation(B, p)
    chars = potential_characteristics(kappa)

    if chars.almost_indefinite() is False:
        return PseudoHopfReport(p, 0, "rejected", characteristics=chars,
                                diagnostics=("finitely many potential characteristics",))
    if analysis.ok and chars.almost_indefinite():
        nf = analysis.field
        return PseudoHopfReport(p, nf.rank, "certified", epsilon=nf.epsilon,
                                field=nf, characteristics=chars)

    # unknown: estimate the rank from what is detected
    units = analysis.units
    killed = analysis.killed
    undetermined = [g for g in range(B.width)
                    if g not in units and g not in killed
                    and g not in analysis.sum_defined]
    cols = sorted(units - frozenset(analysis.sum_defined))
    rows = []
    for rel in subscheme.relations:
        a, b = rel.sides()
        terms = rel.all_terms()
        if not terms or any(t.support() - units for t in terms):
            continue
        if len(a) == 1 and len(b) == 1:
            t1, t2 = a.terms[0], b.terms[0]
        elif len(a) == 2 and len(b) == 0:
            t1, t2 = a.terms
        else:
            continue
        rows.append(tuple(t1.exps[g] - t2.exps[g] for g in cols))
    lattice_rank = smith_normal_form(rows)[1] if rows else 0
    estimate = (len(cols) - lattice_rank) + len(undetermined)
    diag = tuple(analysis.diagnostics) + (
        () if chars.almost_indefinite() else ("characteristic class unknown",))
    return PseudoHopfReport(p, estimate, "unknown",
                            characteristics=chars, diagnostics=diag)


# -- fast mask-level screen ---------------------------------------------------
#
# Spectra of the matrix models run to tens of thousands of points, so the
# full symbolic classification is reserved for the few candidates that
# survive a bitmask scan.  Everything the scan reports about the remaining
# points is an upper rank estimate of the same kind as in _classify_point.


@dataclass(frozen=True)
class _CompiledRelation:
    # parallel arrays per side: support masks, exponent tuples, bare-generator
    # index (when the term is a single generator of degree one), sign bits
    lhs_masks: tuple[int, ...]
    rhs_masks: tuple[int, ...]
    lhs_exps: tuple[tuple[int, ...], ...]
    rhs_exps: tuple[tuple[int, ...], ...]
    lhs_bare: tuple[Optional[int], ...]
    rhs_bare: tuple[Optional[int], ...]


def _compile_side(terms):
    masks, exps, bare = [], [], []
    for t in terms:
        mask = 0
        for g in t.support():
            mask |= 1 << g
        masks.append(mask)
        exps.append(t.exps)
        bare.append(t.exps.index(1)
                    if sum(t.exps) == 1 and max(t.exps) == 1 and t.sign == 0
                    else None)
    return tuple(masks), tuple(exps), tuple(bare)


def _compile_relations(B: BlueprintPresentation) -> tuple[_CompiledRelation, ...]:
    out = []
    for r in B.relations:
        lm, le, lb = _compile_side(r.lhs.terms)
        rm, re, rb = _compile_side(r.rhs.terms)
        out.append(_CompiledRelation(lm, rm, le, re, lb, rb))
    return tuple(out)


def _scan_side(masks, pmask: int):
    """Survivor count, up to two survivor indices, and a non-constant flag."""
    cnt = 0
    i0 = i1 = -1
    nonconst = False
    for k, m in enumerate(masks):
        if not m & pmask:
            if cnt == 0:
                i0 = k
            elif cnt == 1:
                i1 = k
            cnt += 1
            if m:
                nonconst = True
    return cnt, i0, i1, nonconst


def _fast_scan(B: BlueprintPresentation, compiled: tuple[_CompiledRelation, ...],
               pmask: int):
    """Classify a point cheaply: 'slow' (needs full analysis), or an
    ('unknown', cols, rows, uncovered) tuple for the rank estimate."""
    if B.coeff_order == 2:
        return "slow"
    # (rel, la_cnt, la0, la1, lb_cnt, lb0, lb1) for relations alive at p
    pair_shapes = []   # candidates m1 == m2 or m1 + m2 == 0 for the unit fixpoint
    definers = []      # candidates g == sum of constants
    shapes_ok = True
    for rel in compiled:
        la, a0, a1, anc = _scan_side(rel.lhs_masks, pmask)
        lb, b0, b1, bnc = _scan_side(rel.rhs_masks, pmask)
        if la + lb == 0:
            continue
        if not anc and not bnc:
            return "slow"  # constants-only relation: may pin characteristics
        if la == 1 and lb == 1:
            pair_shapes.append((rel.lhs_masks[a0], rel.lhs_exps[a0],
                                rel.rhs_masks[b0], rel.rhs_exps[b0]))
        elif (la, lb) == (2, 0):
            pair_shapes.append((rel.lhs_masks[a0], rel.lhs_exps[a0],
                                rel.lhs_masks[a1], rel.lhs_exps[a1]))
        elif (la, lb) == (0, 2):
            pair_shapes.append((rel.rhs_masks[b0], rel.rhs_exps[b0],
                                rel.rhs_masks[b1], rel.rhs_exps[b1]))
        elif la == 1 and not bnc and rel.lhs_bare[a0] is not None:
            definers.append(rel.lhs_bare[a0])
        elif lb == 1 and not anc and rel.rhs_bare[b0] is not None:
            definers.append(rel.rhs_bare[b0])
        else:
            shapes_ok = False

    unit_mask = 0
    for g in B.inverted:
        unit_mask |= 1 << g
    changed = True
    while changed:
        changed = False
        for m0, _, m1, _ in pair_shapes:
            if not (m1 & ~unit_mask) and (m0 & ~unit_mask):
                unit_mask |= m0
                changed = True
            elif not (m0 & ~unit_mask) and (m1 & ~unit_mask):
                unit_mask |= m1
                changed = True

    sum_defined = set(definers)
    rows_src = []
    for m0, e0, m1, e1 in pair_shapes:
        if not ((m0 | m1) & ~unit_mask):
            rows_src.append((e0, e1))
        else:
            shapes_ok = False

    alive_mask = ~pmask & ((1 << B.width) - 1)
    uncovered = [g for g in range(B.width)
                 if (alive_mask >> g) & 1 and not (unit_mask >> g) & 1
                 and g not in sum_defined]
    if shapes_ok and not uncovered:
        return "slow"
    cols = [g for g in range(B.width)
            if (alive_mask >> g) & 1 and (unit_mask >> g) & 1
            and g not in sum_defined]
    return ("unknown", cols, rows_src, len(uncovered))


def pseudo_hopf_points(B: BlueprintPresentation,
                       cap: int = DEFAULT_GENERATOR_CAP) -> list[PseudoHopfReport]:
    """Certified and unknown pseudo-Hopf candidates of the spectrum.

    Points whose residue field has only finitely many potential
    characteristics are definitively not pseudo-Hopf and are dropped.
    Points that a cheap scan leaves undetermined are reported unknown with
    an upper rank estimate, resolved lazily by :func:`rank_space`.
    """
    compiled = _compile_relations(B)
    reports = []
    for p in enumerate_primes(B, cap=cap):
        pmask = 0
        for g in p.vars:
            pmask |= 1 << g
        verdict = _fast_scan(B, compiled, pmask)
        if verdict == "slow":
            r = _classify_point(B, p)
            if r.status != "rejected":
                reports.append(r)
            continue
        _, cols, rows_src, n_uncovered = verdict
        rows = [tuple(e1[g] - e2[g] for g in cols) for e1, e2 in rows_src]
        lattice_rank = smith_normal_form(rows)[1] if rows else 0
        estimate = (len(cols) - lattice_rank) + n_uncovered
        reports.append(PseudoHopfReport(p, estimate, "unknown",
                                        diagnostics=("mask-level scan only",)))
    return reports


# ---------------------------------------------------------------------------
# Rank spaces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RankSpacePoint:
    """A minimal-rank pseudo-Hopf point with its unit-field normal form."""

    point: PrimePoint
    field: NormalFormBlueField
    rank: int

    @property
    def epsilon(self) -> int:
        return self.field.epsilon

    def to_json(self) -> dict:
        return {"pattern": sorted(self.point.vars),
                "epsilon": self.epsilon,
                "lattice": [list(r) for r in self.field.lattice],
                "row_signs": list(self.field.row_signs)}


def rank_space(B: BlueprintPresentation,
               cap: int = DEFAULT_GENERATOR_CAP) -> list[RankSpacePoint]:
    """Minimal-rank certified pseudo-Hopf points per connected component.

    Raises :class:`RankSpaceUndecidable` when an unknown-status point could
    sit at or below the minimal rank of its component.
    """
    reports = pseudo_hopf_points(B, cap=cap)
    spec = poset(enumerate_primes(B, cap=cap))
    comps = spec.components()
    comp_of = {}
    for ci, comp in enumerate(comps):
        for i in comp:
            comp_of[spec.points[i]] = ci

    by_comp: dict[int, list[PseudoHopfReport]] = {}
    for r in reports:
        by_comp.setdefault(comp_of[r.point], []).append(r)

    out: list[RankSpacePoint] = []
    for ci in sorted(by_comp):
        rs = by_comp[ci]
        certified = [r for r in rs if r.status == "certified"]
        if not certified:
            offenders = [r for r in rs if r.status == "unknown"]
            raise RankSpaceUndecidable(B, offenders or rs)
        minimal = min(r.rank for r in certified)
        offenders = [r for r in rs if r.status == "unknown" and r.rank <= minimal]
        if offenders:
            raise RankSpaceUndecidable(B, offenders)
        for r in certified:
            if r.rank == minimal:
                out.append(RankSpacePoint(r.point, r.field, r.rank))
    out.sort(key=lambda r: r.point.sort_key)
    return out


# ---------------------------------------------------------------------------
# Comultiplications and the induced law on rank points
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Comultiplication:
    """Images of generators as formal sums of primed (x) double-primed monomials."""

    images: tuple[tuple[tuple[Monomial, Monomial], ...], ...]

    def __post_init__(self):
        widths = {len(m.exps) for terms in self.images for pair in terms for m in pair}
        if len(widths) > 1:
            raise ValueError("comultiplication terms reference inconsistent copies")

    @property
    def width(self) -> int:
        return len(self.images)


def comultiplication(images: Sequence[Sequence[tuple[Monomial, Monomial]]]) -> Comultiplication:
    return Comultiplication(tuple(tuple(terms) for terms in images))


def _survives(m: Monomial, vanishing: frozenset[int]) -> bool:
    return not m.zero and not (m.support() & vanishing)


def product_pattern(delta: Comultiplication, x_vars: frozenset[int],
                    y_vars: frozenset[int]) -> frozenset[int]:
    """Vanishing pattern of the product of two vanishing patterns."""
    dead = set()
    for g, terms in enumerate(delta.images):
        if not any(_survives(a, x_vars) and _survives(b, y_vars) for a, b in terms):
            dead.add(g)
    return frozenset(dead)


@dataclass(frozen=True)
class WeylMonoid:
    """A finite monoid structure on rank-space points.

    ``table[i][j]`` is the index of the product of elements i and j;
    ``identity`` indexes the neutral element.
    """

    elements: tuple[RankSpacePoint, ...]
    table: tuple[tuple[int, ...], ...]
    identity: int

    def __len__(self) -> int:
        return len(self.elements)

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def is_associative(self) -> bool:
        n = len(self.elements)
        return all(self.table[self.table[i][j]][k] == self.table[i][self.table[j][k]]
                   for i in range(n) for j in range(n) for k in range(n))

    def is_unital(self) -> bool:
        e = self.identity
        return all(self.table[e][i] == i and self.table[i][e] == i
                   for i in range(len(self.elements)))

    def is_group(self) -> bool:
        if not (self.is_associative() and self.is_unital()):
            return False
        n = len(self.elements)
        return all(any(self.table[i][j] == self.identity for j in range(n))
                   for i in range(n))

    def is_abelian(self) -> bool:
        n = len(self.elements)
        return all(self.table[i][j] == self.table[j][i]
                   for i in range(n) for j in range(n))

    def submonoid_closed(self, indices: Iterable[int]) -> bool:
        idx = set(indices)
        return self.identity in idx and \
            all(self.table[i][j] in idx for i in idx for j in idx)

    def to_json(self) -> dict:
        return {"order": len(self.elements),
                "identity": self.identity,
                "elements": [e.to_json() for e in self.elements],
                "table": [list(r) for r in self.table]}


def induced_weyl_law(B: BlueprintPresentation, delta: Comultiplication,
                     counit_zero: frozenset[int],
                     points: Optional[Sequence[RankSpacePoint]] = None,
                     cap: int = DEFAULT_GENERATOR_CAP) -> WeylMonoid:
    """Descend a comultiplication to a monoid law on the rank points.

    For each pair of rank points the vanishing patterns are substituted into
    the comultiplication (left factor primed, right factor double-primed);
    the surviving pattern must be the pattern of exactly one rank point,
    which is the product.  The identity is the rank point fixed by the
    counit pattern.
    """
    if delta.width != B.width:
        raise ValueError("comultiplication width does not match the presentation")
    pts = list(points) if points is not None else rank_space(B, cap=cap)
    by_pattern = {p.point.vars: i for i, p in enumerate(pts)}
    if len(by_pattern) != len(pts):
        raise ValueError("duplicate vanishing patterns among rank points")
    if counit_zero not in by_pattern:
        raise ValueError("counit pattern is not a rank point")
    table = []
    for x in pts:
        row = []
        for y in pts:
            z = product_pattern(delta, x.point.vars, y.point.vars)
            if z not in by_pattern:
                raise LawDoesNotDescend(B, x.point, y.point, z)
            row.append(by_pattern[z])
        table.append(tuple(row))
    return WeylMonoid(tuple(pts), tuple(table), by_pattern[counit_zero])


# ---------------------------------------------------------------------------
# Tits points over F1 and F1^2
# ---------------------------------------------------------------------------


def _gf2_solution_count(rows: Sequence[Sequence[int]], rhs: Sequence[int],
                        ncols: int) -> int:
    """Number of solutions of a GF(2) linear system, 0 when inconsistent."""
    aug = [(sum((r[j] & 1) << j for j in range(ncols)) | ((b & 1) << ncols))
           for r, b in zip(rows, rhs)]
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(aug)) if (aug[i] >> col) & 1), None)
        if pivot is None:
            continue
        aug[rank], aug[pivot] = aug[pivot], aug[rank]
        for i in range(len(aug)):
            if i != rank and (aug[i] >> col) & 1:
                aug[i] ^= aug[rank]
        rank += 1
    for i in range(rank, len(aug)):
        if aug[i] >> ncols:
            return 0
    return 1 << (ncols - rank)


def field_hom_count(nf: NormalFormBlueField, m: int) -> int:
    """Morphisms from a lattice blue field to F1^m for m in {1, 2}."""
    if m == 1:
        if nf.epsilon == 2:
            return 0
        return 1
    rows = [[e % 2 for e in r] for r in nf.lattice]
    rhs = list(nf.row_signs)
    return _gf2_solution_count(rows, rhs, len(nf.unit_names))


@dataclass(frozen=True)
class TitsPoints:
    count: int
    per_point: tuple[int, ...]
    monoid: Optional[WeylMonoid]


def tits_points(B: BlueprintPresentation, m: int,
                delta: Optional[Comultiplication] = None,
                counit_zero: Optional[frozenset[int]] = None,
                points: Optional[Sequence[RankSpacePoint]] = None,
                cap: int = DEFAULT_GENERATOR_CAP) -> TitsPoints:
    """Count the F1^m-rational points of the rank space, m in {1, 2}.

    Each rank point contributes the lattice homomorphisms from its unit
    field to the group of m-th roots of unity that respect the sign
    constraints.  When a comultiplication is given, the induced law is
    returned restricted to the supporting rank points (and checked closed).
    """
    if m not in (1, 2):
        raise ValueError("m must be 1 or 2")
    pts = list(points) if points is not None else rank_space(B, cap=cap)
    per_point = tuple(field_hom_count(p.field, m) for p in pts)
    monoid = None
    if delta is not None and counit_zero is not None:
        law = induced_weyl_law(B, delta, counit_zero, points=pts, cap=cap)
        support = [i for i, c in enumerate(per_point) if c]
        if support:
            if not law.submonoid_closed(support):
                raise ValueError(
                    f"F1^{m}-points do not form a submonoid of the Weyl monoid")
            remap = {old: new for new, old in enumerate(support)}
            sub_table = tuple(tuple(remap[law.table[i][j]] for j in support)
                              for i in support)
            monoid = WeylMonoid(tuple(pts[i] for i in support), sub_table,
                                remap[law.identity])
    return TitsPoints(sum(per_point), per_point, monoid)


# ---------------------------------------------------------------------------
# Products
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProductReport:
    ok: bool
    left_rank: int
    right_rank: int
    product_rank: int
    pairs_expected: int
    pairs_found: int
    violations: tuple[str, ...]


def product_check(B1: BlueprintPresentation, B2: BlueprintPresentation,
                  cap: int = DEFAULT_GENERATOR_CAP) -> ProductReport:
    """Verify Z(X x Y) = Z(X) x Z(Y) and rank additivity on a tensor product."""
    T = tensor(B1, B2)
    r1 = rank_space(B1, cap=cap)
    r2 = rank_space(B2, cap=cap)
    rt = rank_space(T, cap=cap)
    expected = {frozenset(x.point.vars | frozenset(g + B1.width for g in y.point.vars))
                for x in r1 for y in r2}
    found = {p.point.vars for p in rt}
    violations = []
    for missing in sorted(map(sorted, expected - found)):
        violations.append(f"missing product rank point {missing}")
    for extra in sorted(map(sorted, found - expected)):
        violations.append(f"unexpected product rank point {extra}")
    lr = r1[0].rank if r1 else 0
    rr = r2[0].rank if r2 else 0
    pr = rt[0].rank if rt else 0
    if pr != lr + rr:
        violations.append(f"rank not additive: {pr} != {lr} + {rr}")
    return ProductReport(not violations, lr, rr, pr, len(expected), len(found),
                         tuple(violations))
