"""Blueprints presented by monomial generators and formal-sum relations.

A blueprint here is a commutative monoid with zero together with a
pre-addition: a set of sum-equalities ``a_1 + ... + a_m == b_1 + ... + b_n``
between formal sums of monomials, closed under adding relations, multiplying
a relation by a monomial, and transitivity.  Everything in this module is an
exact, immutable value; all operations are pure functions.

Coefficients are restricted to the blue fields F1 and F1^2, i.e. the only
scalar a monomial may carry is a power of -1 (``coeff_order`` 1 or 2).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Literal, Optional, Sequence


class UnsupportedInput(Exception):
    """Raised when an operation is asked about inputs outside its sound class."""


# ---------------------------------------------------------------------------
# Monomials, formal sums, relations
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=False)
class Monomial:
    """A monomial (-1)^sign * prod(T_i^e_i), or the constant zero.

    ``exps`` is indexed by the generators of the owning presentation.  The
    zero monomial carries sign 0 and an all-zero exponent vector.
    """

    sign: int
    exps: tuple[int, ...]
    zero: bool = False

    def __post_init__(self):
        if self.zero and (self.sign != 0 or any(self.exps)):
            raise ValueError("zero monomial must have trivial sign and exponents")

    @property
    def degree(self) -> int:
        return sum(self.exps)

    def key(self):
        # graded lexicographic on exponent vectors, sign exponent last
        return (self.degree, self.exps, self.sign)

    def is_one(self) -> bool:
        return not self.zero and self.sign == 0 and not any(self.exps)

    def is_constant(self) -> bool:
        return self.zero or not any(self.exps)

    def support(self) -> frozenset[int]:
        return frozenset(i for i, e in enumerate(self.exps) if e)

    def mul(self, other: "Monomial", coeff_order: int) -> "Monomial":
        if self.zero or other.zero:
            return zero_monomial(len(self.exps))
        sign = (self.sign + other.sign) % coeff_order
        return Monomial(sign, tuple(a + b for a, b in zip(self.exps, other.exps)))

    def divide(self, other: "Monomial", inverted: frozenset[int],
               coeff_order: int) -> Optional["Monomial"]:
        """self / other, or None when the quotient leaves the monoid."""
        if self.zero or other.zero:
            return None
        exps = tuple(a - b for a, b in zip(self.exps, other.exps))
        if any(e < 0 and i not in inverted for i, e in enumerate(exps)):
            return None
        return Monomial((self.sign - other.sign) % coeff_order, exps)


def zero_monomial(width: int) -> Monomial:
    return Monomial(0, (0,) * width, zero=True)


def one_monomial(width: int, sign: int = 0) -> Monomial:
    return Monomial(sign, (0,) * width)


def generator_monomial(width: int, index: int) -> Monomial:
    exps = [0] * width
    exps[index] = 1
    return Monomial(0, tuple(exps))


@dataclass(frozen=True)
class FormalSum:
    """A multiset of non-zero monomials; the empty sum denotes 0."""

    terms: tuple[Monomial, ...]

    def __post_init__(self):
        if any(t.zero for t in self.terms):
            raise ValueError("formal sums may not carry the zero monomial")

    def key(self):
        return tuple(t.key() for t in self.terms)

    def __len__(self) -> int:
        return len(self.terms)


def formal_sum(terms: Iterable[Monomial]) -> FormalSum:
    kept = sorted((t for t in terms if not t.zero), key=Monomial.key)
    return FormalSum(tuple(kept))


@dataclass(frozen=True)
class Relation:
    """A sum-equality lhs == rhs, stored with the lex-smaller side first."""

    lhs: FormalSum
    rhs: FormalSum

    def sides(self) -> tuple[FormalSum, FormalSum]:
        return self.lhs, self.rhs

    def all_terms(self) -> tuple[Monomial, ...]:
        return self.lhs.terms + self.rhs.terms

    def is_trivial(self) -> bool:
        return self.lhs == self.rhs


def relation(lhs: Iterable[Monomial], rhs: Iterable[Monomial]) -> Relation:
    a, b = formal_sum(lhs), formal_sum(rhs)
    if b.key() < a.key():
        a, b = b, a
    return Relation(a, b)


# ---------------------------------------------------------------------------
# Presentations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BlueprintPresentation:
    """A blueprint presented by generators, an inverted subset and relations.

    ``coeff_order`` is 1 for F1-coefficients and 2 when -1 is adjoined;
    with coeff_order 2 the relation ``1 + (-1) == 0`` is implicit.
    """

    generator_names: tuple[str, ...]
    inverted: frozenset[int]
    coeff_order: int
    relations: tuple[Relation, ...]

    def __post_init__(self):
        if self.coeff_order not in (1, 2):
            raise ValueError("coeff_order must be 1 or 2")
        if len(set(self.generator_names)) != len(self.generator_names):
            raise ValueError("generator names must be unique")
        bad = [i for i in self.inverted if not 0 <= i < self.width]
        if bad:
            raise ValueError(f"inverted indices out of range: {bad}")

    @property
    def width(self) -> int:
        return len(self.generator_names)

    def one(self, sign: int = 0) -> Monomial:
        return one_monomial(self.width, sign % self.coeff_order)

    def gen(self, index: int) -> Monomial:
        return generator_monomial(self.width, index)

    def monomial(self, exps: Sequence[int], sign: int = 0) -> Monomial:
        return Monomial(sign % self.coeff_order, tuple(exps))

    def name_of(self, index: int) -> str:
        return self.generator_names[index]

    def index_of(self, name: str) -> int:
        return self.generator_names.index(name)

    def killed(self) -> frozenset[int]:
        """Generators g carrying a relation g == 0."""
        dead = set()
        for rel in self.relations:
            for one_side, other in (rel.sides(), rel.sides()[::-1]):
                if len(other) == 0 and len(one_side) == 1:
                    t = one_side.terms[0]
                    if sum(t.exps) == 1 and max(t.exps) == 1:
                        dead.add(t.exps.index(1))
        return frozenset(dead)

    def with_relations(self, extra: Iterable[Relation]) -> "BlueprintPresentation":
        return make_presentation(self.generator_names, self.inverted,
                                 self.coeff_order, tuple(self.relations) + tuple(extra))

    def canonical_key(self):
        """Structural identity ignoring generator names."""
        rels = sorted({(r.lhs.key(), r.rhs.key()) for r in self.relations})
        return (self.width, tuple(sorted(self.inverted)), self.coeff_order, tuple(rels))


def make_presentation(names: Sequence[str], inverted: Iterable[int],
                      coeff_order: int, relations: Iterable[Relation]) -> BlueprintPresentation:
    """Normalize and deduplicate a presentation."""
    seen, kept = set(), []
    for rel in relations:
        if rel.is_trivial():
            continue
        k = (rel.lhs.key(), rel.rhs.key())
        if k not in seen:
            seen.add(k)
            kept.append(rel)
    return BlueprintPresentation(tuple(names), frozenset(inverted), coeff_order, tuple(kept))


def mk_free(n: int, inverted: Iterable[int] = (), coeff_order: int = 1,
            names: Optional[Sequence[str]] = None) -> BlueprintPresentation:
    """The free blueprint on n generators, some of them inverted.

    ``mk_free(0)`` is F1 and ``mk_free(0, coeff_order=2)`` is F1^2;
    ``mk_free(1, inverted=[0])`` presents F1[T^(+-1)].
    """
    if n < 0:
        raise ValueError("generator count must be non-negative")
    if names is None:
        names = tuple(f"T{i + 1}" for i in range(n))
    if len(names) != n:
        raise ValueError("name list does not match generator count")
    return make_presentation(names, inverted, coeff_order, ())


# ---------------------------------------------------------------------------
# Basic constructions: quotients, localization, tensor products
# ---------------------------------------------------------------------------


def _kill_terms(s: FormalSum, dead: frozenset[int]) -> FormalSum:
    return formal_sum(t for t in s.terms if not (t.support() & dead))


def quotient_by_vars(B: BlueprintPresentation, vars: Iterable[int]) -> BlueprintPresentation:
    """Quotient by the ideal generated by a set of generators.

    Monomials touching a killed generator become 0 in every relation; the
    annihilations themselves are recorded as relations g == 0 so that the
    generator indexing of the ambient presentation is preserved.  Relations
    with one side empty and the other not are kept: they encode sums == 0.
    """
    dead = frozenset(vars)
    if not dead:
        return B
    if not dead <= set(range(B.width)):
        raise ValueError("unknown generator index")
    rels = [relation([B.gen(i)], []) for i in sorted(dead)]
    for rel in B.relations:
        rels.append(relation(_kill_terms(rel.lhs, dead).terms,
                             _kill_terms(rel.rhs, dead).terms))
    return make_presentation(B.generator_names, B.inverted, B.coeff_order, rels)


def localize(B: BlueprintPresentation, vars: Iterable[int]) -> BlueprintPresentation:
    """Invert a set of generators; relations are untouched."""
    more = frozenset(vars)
    if not more <= set(range(B.width)):
        raise ValueError("unknown generator index")
    return make_presentation(B.generator_names, B.inverted | more,
                             B.coeff_order, B.relations)


def _embed(m: Monomial, offset: int, width: int) -> Monomial:
    if m.zero:
        return zero_monomial(width)
    exps = [0] * width
    for i, e in enumerate(m.exps):
        exps[offset + i] = e
    return Monomial(m.sign, tuple(exps))


def tensor(B: BlueprintPresentation, C: BlueprintPresentation,
           base: Optional[tuple[dict[int, Monomial], dict[int, Monomial]]] = None
           ) -> BlueprintPresentation:
    """Tensor product over F1, optionally identified over a common base.

    The generators are the disjoint union (left copies primed, right copies
    double-primed) and the relations are the images of both relation sets.
    When ``base`` is given as a pair of maps sending each base generator to a
    unit monomial of B resp. C, the identifications f1(t) (x) 1 == 1 (x) f2(t)
    are added as relations.
    """
    width = B.width + C.width
    raw = [f"{n}'" for n in B.generator_names] + \
        [f"{n}''" for n in C.generator_names]
    names, seen = [], set()
    for i, n in enumerate(raw):
        if n in seen:  # nested tensors can collide on primes
            n = f"{n}#{i}"
        seen.add(n)
        names.append(n)
    inverted = frozenset(B.inverted) | frozenset(i + B.width for i in C.inverted)
    m = max(B.coeff_order, C.coeff_order)
    rels: list[Relation] = []
    for rel in B.relations:
        rels.append(relation([_embed(t, 0, width) for t in rel.lhs.terms],
                             [_embed(t, 0, width) for t in rel.rhs.terms]))
    for rel in C.relations:
        rels.append(relation([_embed(t, B.width, width) for t in rel.lhs.terms],
                             [_embed(t, B.width, width) for t in rel.rhs.terms]))
    if base is not None:
        f1, f2 = base
        if set(f1) != set(f2):
            raise ValueError("base maps must share their domain")
        for t in sorted(f1):
            m1, m2 = f1[t], f2[t]
            for img, amb in ((m1, B), (m2, C)):
                if img.support() - amb.inverted or img.zero:
                    raise UnsupportedInput("base map image is not a unit monomial")
            rels.append(relation([_embed(m1, 0, width)], [_embed(m2, B.width, width)]))
    return make_presentation(names, inverted, m, rels)


# ---------------------------------------------------------------------------
# Canonicalization against annihilated generators, bounded saturation
# ---------------------------------------------------------------------------


def _canonical_relations(B: BlueprintPresentation) -> tuple[frozenset[int], list[Relation]]:
    """Drop killed-monomial terms everywhere; absorb the kill relations."""
    dead = B.killed()
    rels = []
    seen = set()
    for rel in B.relations:
        r = relation(_kill_terms(rel.lhs, dead).terms, _kill_terms(rel.rhs, dead).terms)
        if r.is_trivial():
            continue
        k = (r.lhs.key(), r.rhs.key())
        if k not in seen:
            seen.add(k)
            rels.append(r)
    return dead, rels


@lru_cache(maxsize=4096)
def saturate_relations(B: BlueprintPresentation, rounds: int = 2) -> tuple[Relation, ...]:
    """A cheap, sound closure of the generating relations.

    Terms over annihilated generators are dropped, the annihilations are
    kept as explicit relations g == 0, and pairwise transitivity
    consequences (relations sharing a side) are added for a bounded number
    of rounds.  The result still generates the same pre-addition; it just
    exposes a few derived relations to syntactic checks such as the prime
    criterion.
    """
    dead, rels = _canonical_relations(B)
    rels = [relation([B.gen(g)], []) for g in sorted(dead)] + rels
    seen = {(r.lhs.key(), r.rhs.key()) for r in rels}
    for _ in range(rounds):
        new = []
        by_side: dict[tuple, list[tuple[FormalSum, FormalSum]]] = {}
        for r in rels:
            by_side.setdefault(r.lhs.key(), []).append((r.lhs, r.rhs))
            by_side.setdefault(r.rhs.key(), []).append((r.rhs, r.lhs))
        for r in rels:
            for side, other in ((r.lhs, r.rhs), (r.rhs, r.lhs)):
                for side2, other2 in by_side.get(side.key(), ()):
                    cand = relation(other.terms, other2.terms)
                    if cand.is_trivial():
                        continue
                    k = (cand.lhs.key(), cand.rhs.key())
                    if k not in seen:
                        seen.add(k)
                        new.append(cand)
        if not new:
            break
        rels.extend(new)
    return tuple(rels)


# ---------------------------------------------------------------------------
# Bounded entailment of relations
# ---------------------------------------------------------------------------


def _rewrite_rules(B: BlueprintPresentation) -> tuple[frozenset[int], list[tuple[FormalSum, FormalSum]]]:
    dead, rels = _canonical_relations(B)
    rules = []
    for r in rels:
        rules.append((r.lhs, r.rhs))
        rules.append((r.rhs, r.lhs))
    if B.coeff_order == 2:
        pair = formal_sum([B.one(0), B.one(1)])
        empty = formal_sum([])
        rules.append((pair, empty))
        rules.append((empty, pair))
    return dead, rules


def _sum_minus(s: FormalSum, part: list[Monomial]) -> Optional[FormalSum]:
    remaining = list(s.terms)
    for p in part:
        try:
            remaining.remove(p)
        except ValueError:
            return None
    return formal_sum(remaining)


def _candidate_multipliers(s: FormalSum, target: FormalSum, pattern: FormalSum,
                           B: BlueprintPresentation) -> set[Monomial]:
    cands: set[Monomial] = {B.one()}
    if B.coeff_order == 2:
        cands.add(B.one(1))
    anchors = pattern.terms[:1] if pattern.terms else pattern.terms
    for pool in (s.terms, target.terms):
        for t in pool:
            for a in (anchors or (B.one(),)):
                q = t.divide(a, B.inverted, B.coeff_order)
                if q is not None:
                    cands.add(q)
                    if B.coeff_order == 2:
                        cands.add(Monomial((q.sign + 1) % 2, q.exps))
    return cands


DEFAULT_ENTAILMENT_BUDGET = 10_000


def relation_entailed(B: BlueprintPresentation, rel: Relation,
                      budget: Optional[int] = None,
                      max_terms: Optional[int] = None,
                      constant_states_only: bool = False) -> Literal["yes", "unknown"]:
    """Decide, within a step budget, whether a relation is derivable.

    The answer "yes" is sound: it is produced only when a chain of
    pre-addition rewrites (multiply a relation by a monomial, add relations,
    transitivity) transforms one side into the other.  "unknown" makes no
    claim.  The search is breadth-first over canonical formal sums, so the
    verdict is monotone in ``budget``.  With ``constant_states_only`` the
    search never leaves sums of constants, which keeps the state space tiny
    for torsion probes (at the cost of missing derivations that pass
    through non-constant sums).
    """
    if budget is None:
        budget = DEFAULT_ENTAILMENT_BUDGET
    if budget <= 0:
        raise ValueError("budget must be positive")
    dead, rules = _rewrite_rules(B)
    start = _kill_terms(rel.lhs, dead)
    target = _kill_terms(rel.rhs, dead)
    if start.key() == target.key():
        return "yes"
    if max_terms is None:
        widest = max((max(len(a), len(b)) for a, b in rules), default=0)
        max_terms = max(len(start), len(target)) + widest + 4
    frontier = [start]
    visited = {start.key()}
    steps = 0
    while frontier and steps < budget:
        nxt: list[FormalSum] = []
        for s in frontier:
            for lhs_pat, rhs_pat in rules:
                for c in _candidate_multipliers(s, target, lhs_pat, B):
                    part = [c.mul(t, B.coeff_order) for t in lhs_pat.terms]
                    if any(p.support() & dead for p in part):
                        continue
                    rest = _sum_minus(s, part)
                    if rest is None:
                        continue
                    add = [c.mul(t, B.coeff_order) for t in rhs_pat.terms]
                    if any(p.support() & dead for p in add):
                        continue
                    if constant_states_only and any(not p.is_constant() for p in add):
                        continue
                    out = formal_sum(rest.terms + tuple(add))
                    if len(out) > max_terms:
                        continue
                    k = out.key()
                    if k in visited:
                        continue
                    steps += 1
                    if k == target.key():
                        return "yes"
                    visited.add(k)
                    nxt.append(out)
                    if steps >= budget:
                        return "unknown"
        frontier = nxt
    return "unknown"


def is_zero_blueprint(B: BlueprintPresentation, budget: int = 400) -> bool:
    """Detect (soundly, not completely) that 1 == 0 is derivable."""
    return relation_entailed(B, relation([B.one()], []), budget=budget) == "yes"


# ---------------------------------------------------------------------------
# Unit detection and unit fields
# ---------------------------------------------------------------------------


def _is_unit_monomial(m: Monomial, units: set[int]) -> bool:
    return not m.zero and m.support() <= units


def detect_units(B: BlueprintPresentation) -> frozenset[int]:
    """Generators that are forced invertible.

    Starts from the inverted generators and saturates: whenever a relation
    identifies a monomial with a unit monomial (directly, or as the additive
    inverse of one via m1 + m2 == 0), every generator in its support becomes
    a unit.  Sound but conservative; transitivity consequences are exposed
    through :func:`saturate_relations` first.
    """
    dead = B.killed()
    rels = saturate_relations(B)
    units: set[int] = set(B.inverted)
    changed = True
    while changed:
        changed = False
        for rel in rels:
            sides = rel.sides()
            for a, b in (sides, sides[::-1]):
                if len(a) == 1 and len(b) == 1 and _is_unit_monomial(b.terms[0], units):
                    sup = a.terms[0].support()
                    if sup & dead:
                        continue
                    if not sup <= units:
                        units |= sup
                        changed = True
                if len(a) == 2 and len(b) == 0:
                    t1, t2 = a.terms
                    for m, other in ((t1, t2), (t2, t1)):
                        if _is_unit_monomial(other, units) and not (m.support() & dead):
                            if not m.support() <= units:
                                units |= m.support()
                                changed = True
    return frozenset(units - dead)


def unit_field(B: BlueprintPresentation) -> BlueprintPresentation:
    """The unit field: detected units with the restricted relations.

    The result keeps only the detected unit generators (all inverted) and
    the relations all of whose terms are unit monomials or absent.  Unit
    detection is conservative, so the result can be smaller than the true
    unit field; catalog inputs are covered exactly.
    """
    units = detect_units(B)
    dead, rels = _canonical_relations(B)
    index = {g: k for k, g in enumerate(sorted(units))}
    names = tuple(B.generator_names[g] for g in sorted(units))

    def restrict(m: Monomial) -> Monomial:
        exps = [0] * len(index)
        for g, e in enumerate(m.exps):
            if e:
                exps[index[g]] = e
        return Monomial(m.sign, tuple(exps))

    kept = []
    for rel in rels:
        terms = rel.all_terms()
        if all(_is_unit_monomial(t, set(units)) for t in terms):
            kept.append(relation([restrict(t) for t in rel.lhs.terms],
                                 [restrict(t) for t in rel.rhs.terms]))
    return make_presentation(names, range(len(index)), B.coeff_order, kept)


# ---------------------------------------------------------------------------
# Inverse closure
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClosureResult:
    """Outcome of an inverse-closure computation."""

    ok: bool
    presentation: BlueprintPresentation
    diagnostics: tuple[str, ...] = ()


def _exhibits_additive_inverse(B: BlueprintPresentation, units: frozenset[int]) -> bool:
    _, rels = _canonical_relations(B)
    u = set(units)
    for rel in rels:
        for a, b in (rel.sides(), rel.sides()[::-1]):
            if len(b) == 0 and len(a) >= 1:
                if all(_is_unit_monomial(t, u) for t in a.terms):
                    return True
    return False


def inverse_closure(B: BlueprintPresentation) -> ClosureResult:
    """Additive closure inside the base extension adjoining -1.

    Supported class: every generator is a unit or annihilated (blue fields
    and the residue data arising in the catalog).  On that class the closure
    either leaves the presentation untouched or upgrades the coefficient
    order to 2, exactly when a relation exhibits an additively invertible
    unit (a sum of units equal to 0).  Inputs outside the class yield an
    unsupported result carrying the original presentation, never a wrong
    answer.
    """
    units = detect_units(B)
    dead = B.killed()
    stray = [B.name_of(g) for g in range(B.width) if g not in units and g not in dead]
    if stray:
        return ClosureResult(False, B, (f"generators outside the normal-form class: {stray}",))
    if B.coeff_order == 1 and _exhibits_additive_inverse(B, units):
        upgraded = make_presentation(B.generator_names, B.inverted, 2, B.relations)
        return ClosureResult(True, upgraded)
    return ClosureResult(True, B)


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


def smith_normal_form(rows: Sequence[Sequence[int]]) -> tuple[list[int], int]:
    """Elementary divisors d1 | d2 | ... and the rank of an integer matrix."""
    divisors, _, _, rank = smith_normal_form_with_transforms(rows)
    return divisors, rank


def smith_normal_form_with_transforms(rows: Sequence[Sequence[int]]
                                      ) -> tuple[list[int], list[list[int]], list[list[int]], int]:
    """Smith normal form with unimodular transforms U, V: U*M*V is diagonal."""
    m = [list(map(int, r)) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    U = [[int(i == j) for j in range(nrows)] for i in range(nrows)]
    V = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in m:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, q):
        m[dst] = [a + q * b for a, b in zip(m[dst], m[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, q):
        for r in m:
            r[dst] += q * r[src]
        for r in V:
            r[dst] += q * r[src]

    t = 0
    while t < min(nrows, ncols):
        pivot = None
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                if m[i][j] and (best is None or abs(m[i][j]) < best):
                    best, pivot = abs(m[i][j]), (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            progressed = False
            for i in range(t + 1, nrows):
                if m[i][t]:
                    q = m[i][t] // m[t][t]
                    add_row(t, i, -q)
                    if m[i][t]:
                        swap_rows(t, i)
                        progressed = True
            for j in range(t + 1, ncols):
                if m[t][j]:
                    q = m[t][j] // m[t][t]
                    add_col(t, j, -q)
                    if m[t][j]:
                        swap_cols(t, j)
                        progressed = True
            if not progressed:
                break
        # enforce divisibility of the remaining block by the pivot
        stray = None
        for i in range(t + 1, nrows):
            for j in range(t + 1, ncols):
                if m[i][j] % m[t][t]:
                    stray = i
                    break
            if stray is not None:
                break
        if stray is not None:
            add_row(stray, t, 1)
            continue
        if m[t][t] < 0:
            m[t] = [-a for a in m[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    divisors = [m[i][i] for i in range(min(nrows, ncols)) if m[i][i]]
    return divisors, U, V, len(divisors)


# ---------------------------------------------------------------------------
# Normal-form blue fields
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NormalFormBlueField:
    """A blue field F1^epsilon[Lambda] given by an integer lattice presentation.

    Columns index the unit generators; each row encodes a relation
    prod T_j^(M[i][j]) == (-1)^(row_signs[i]).  The free rank of the unit
    lattice is ``#columns - rank(M)`` via Smith normal form, and the
    torsion invariants are the nontrivial elementary divisors.
    """

    epsilon: int
    unit_names: tuple[str, ...]
    lattice: tuple[tuple[int, ...], ...]
    row_signs: tuple[int, ...]
    torsion_invariants: tuple[int, ...] = field(init=False)
    rank: int = field(init=False)

    def __post_init__(self):
        if any(len(r) != len(self.unit_names) for r in self.lattice):
            raise ValueError("lattice rows must match the unit generators")
        if len(self.row_signs) != len(self.lattice):
            raise ValueError("one sign per lattice row required")
        if self.epsilon == 1 and any(self.row_signs):
            raise ValueError("sign bits need epsilon 2")
        divisors, rank = smith_normal_form(self.lattice) if self.lattice else ([], 0)
        object.__setattr__(self, "torsion_invariants",
                           tuple(d for d in divisors if d not in (0, 1)))
        object.__setattr__(self, "rank", len(self.unit_names) - rank)

    def to_json(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "units": list(self.unit_names),
            "lattice": [list(r) for r in self.lattice],
            "row_signs": list(self.row_signs),
            "rank": self.rank,
            "torsion": list(self.torsion_invariants),
        }


@dataclass(frozen=True)
class NormalFormAnalysis:
    """Decomposition of a residue-style presentation into normal-form data.

    ``sum_defined`` maps a generator to the balance of 1's in its defining
    sum-of-units relation (g == 1 + ... + 1 and variants with signs).
    """

    ok: bool
    field: Optional[NormalFormBlueField]
    units: frozenset[int]
    killed: frozenset[int]
    sum_defined: dict[int, int]
    diagnostics: tuple[str, ...] = ()


def _constant_balance(s: FormalSum) -> Optional[int]:
    """Value of a sum of +-1 constants, None when non-constant."""
    total = 0
    for t in s.terms:
        if t.zero or any(t.exps):
            return None
        total += -1 if t.sign else 1
    return total


@lru_cache(maxsize=4096)
def analyze_normal_form(B: BlueprintPresentation) -> NormalFormAnalysis:
    """Try to read a presentation as F1^eps[Lambda] plus sum-of-unit definitions.

    Succeeds when every generator is a detected unit, annihilated, or
    directly defined as a sum of unit constants, and every relation is a
    kill, a lattice relation between unit monomials (including m1 + m2 == 0),
    or one of the defining sums.  Anything else is flagged raw.
    """
    closure = inverse_closure(B)
    work = closure.presentation if closure.ok else B
    units = detect_units(work)
    dead = work.killed()
    _, rels = _canonical_relations(work)
    if units & dead:
        return NormalFormAnalysis(False, None, units, dead, {},
                                  ("a generator is both unit and annihilated",))

    sum_defined: dict[int, int] = {}
    lattice_rels: list[Relation] = []
    problems: list[str] = []
    uset = set(units)
    for rel in rels:
        a, b = rel.sides()
        if len(b) == 2 and len(a) == 0:
            a, b = b, a
        if len(a) == 1 and len(b) == 1 and all(_is_unit_monomial(t, uset) for t in rel.all_terms()):
            lattice_rels.append(rel)
            continue
        if len(a) == 2 and len(b) == 0 and all(_is_unit_monomial(t, uset) for t in a.terms):
            lattice_rels.append(rel)
            continue
        handled = False
        for single, rest in ((a, b), (b, a)):
            if len(single) != 1:
                continue
            t = single.terms[0]
            sup = t.support()
            if len(sup) == 1 and sum(t.exps) == 1 and t.sign == 0:
                balance = _constant_balance(rest)
                g = next(iter(sup))
                if balance is not None and g not in sum_defined:
                    sum_defined[g] = balance
                    handled = True
                    break
        if not handled:
            problems.append(f"relation outside the normal-form shapes: "
                            f"{render_relation(work, rel)}")

    for g in range(work.width):
        if g in units or g in dead or g in sum_defined:
            continue
        problems.append(f"generator {work.name_of(g)} is neither unit, killed, "
                        f"nor a sum of units")

    if problems:
        return NormalFormAnalysis(False, None, units, dead, sum_defined, tuple(problems))

    cols = sorted(units - frozenset(sum_defined))
    index = {g: k for k, g in enumerate(cols)}
    rows, signs = [], []
    for rel in lattice_rels:
        a, b = rel.sides()
        if len(a) == 0 or len(b) == 0:
            pair = a if len(a) == 2 else b
            t1, t2 = pair.terms
            diff = tuple(t1.exps[g] - t2.exps[g] for g in cols)
            sign = (t1.sign - t2.sign + 1) % 2
        else:
            t1, t2 = a.terms[0], b.terms[0]
            diff = tuple(t1.exps[g] - t2.exps[g] for g in cols)
            sign = (t1.sign - t2.sign) % 2
        if any(t.exps[g] for t in rel.all_terms() for g in sum_defined):
            return NormalFormAnalysis(False, None, units, dead, sum_defined,
                                      ("lattice relation touches a sum-defined generator",))
        rows.append(diff)
        signs.append(sign)
    epsilon = work.coeff_order
    if epsilon == 1 and any(signs):
        epsilon = 2
    if epsilon == 1:
        signs = [0] * len(signs)
    nf = NormalFormBlueField(epsilon, tuple(work.name_of(g) for g in cols),
                             tuple(rows), tuple(signs))
    return NormalFormAnalysis(True, nf, units, dead, sum_defined)


# ---------------------------------------------------------------------------
# Potential characteristics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CharacteristicClass:
    """Which characteristics (primes, 0, and the idempotent 1) can occur.

    ``kind`` "all-but" excludes exactly ``excluded`` (so "indefinite" is
    all-but with nothing excluded); "finite" allows exactly ``included``;
    "unknown" makes no claim.
    """

    kind: Literal["all-but", "finite", "unknown"]
    excluded: frozenset[int] = frozenset()
    included: frozenset[int] = frozenset()

    @property
    def label(self) -> str:
        if self.kind == "all-but":
            if not self.excluded:
                return "indefinite"
            if self.excluded == {1}:
                return "all-but-1"
            return "all-but-" + ",".join(map(str, sorted(self.excluded)))
        if self.kind == "finite":
            return "{" + ",".join(map(str, sorted(self.included))) + "}"
        return "unknown"

    def almost_indefinite(self) -> Optional[bool]:
        if self.kind == "all-but":
            return True
        if self.kind == "finite":
            return False
        return None

    def may_include(self, p: int) -> bool:
        if self.kind == "all-but":
            return p not in self.excluded
        if self.kind == "finite":
            return p in self.included
        return True

    def intersect(self, other: "CharacteristicClass") -> "CharacteristicClass":
        if "unknown" in (self.kind, other.kind):
            return CharacteristicClass("unknown")
        if self.kind == other.kind == "all-but":
            return CharacteristicClass("all-but", self.excluded | other.excluded)
        if self.kind == "finite" and other.kind == "finite":
            return CharacteristicClass("finite", included=self.included & other.included)
        fin = self if self.kind == "finite" else other
        ab = other if self.kind == "finite" else self
        return CharacteristicClass("finite",
                                   included=frozenset(p for p in fin.included
                                                      if p not in ab.excluded))

    def is_refinement_of(self, other: "CharacteristicClass") -> bool:
        """True when every characteristic allowed here is allowed by other."""
        if other.kind == "unknown":
            return True
        if self.kind == "unknown":
            return False
        if self.kind == "finite":
            return all(other.may_include(p) for p in self.included)
        if other.kind == "finite":
            return False
        return other.excluded <= self.excluded


INDEFINITE = CharacteristicClass("all-but")
ALL_BUT_1 = CharacteristicClass("all-but", frozenset({1}))
UNKNOWN_CHARACTERISTICS = CharacteristicClass("unknown")


def _prime_divisors(n: int) -> frozenset[int]:
    n = abs(n)
    out = set()
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return frozenset(out)


@lru_cache(maxsize=8192)
def potential_characteristics(F, budget: int = 2_000,
                              max_torsion: int = 6) -> CharacteristicClass:
    """Classify the potential characteristics of a blue field or presentation.

    Lattice blue fields are immediate: F1[Lambda] is of indefinite
    characteristic and F1^2[Lambda] has every characteristic except 1.  For
    presentations, a derivable relation 1 + ... + 1 == 0 (n times) pins the
    class to the prime divisors of n; 1 + 1 == 1 pins it to the idempotent
    characteristic 1; monoid presentations are indefinite; presentations in
    lattice normal form with sum-of-unit definitions g == n_g exclude
    exactly the primes dividing some n_g (plus 1 when -1 is present).
    Everything else is reported unknown.
    """
    if isinstance(F, NormalFormBlueField):
        return INDEFINITE if F.epsilon == 1 else ALL_BUT_1
    B: BlueprintPresentation = F

    # torsion probes are pointless (and costly) unless some relation can
    # produce a constants-only sum
    saturated = saturate_relations(B)
    probe_worthwhile = B.coeff_order == 2 or any(
        rel.all_terms() and all(t.is_constant() for t in rel.all_terms())
        for rel in saturated)
    if probe_worthwhile:
        for n in range(1, max_torsion + 1):
            if relation_entailed(B, relation([B.one()] * n, []), budget=budget,
                                 constant_states_only=True) == "yes":
                if n == 1:
                    return CharacteristicClass("finite", included=frozenset({1}))
                return CharacteristicClass("finite", included=_prime_divisors(n))
        if relation_entailed(B, relation([B.one()] * 2, [B.one()]), budget=budget,
                             constant_states_only=True) == "yes":
            return CharacteristicClass("finite", included=frozenset({1}))

    _, rels = _canonical_relations(B)
    if all(len(r.lhs) + len(r.rhs) <= 1 or (len(r.lhs) == 1 and len(r.rhs) == 1)
           for r in rels):
        return INDEFINITE if B.coeff_order == 1 else ALL_BUT_1

    analysis = analyze_normal_form(B)
    if analysis.ok:
        excluded: set[int] = set()
        if analysis.field.epsilon == 2:
            excluded.add(1)
        for g, balance in analysis.sum_defined.items():
            if g in analysis.units:
                if balance == 0:
                    return UNKNOWN_CHARACTERISTICS
                excluded |= _prime_divisors(balance)
                if balance < 0:
                    excluded.add(1)
        return CharacteristicClass("all-but", frozenset(excluded))
    return UNKNOWN_CHARACTERISTICS


# ---------------------------------------------------------------------------
# Reduction
# ---------------------------------------------------------------------------


def reduce_presentation(B: BlueprintPresentation,
                        primes: Sequence[frozenset[int]]) -> BlueprintPresentation:
    """Quotient by the nilradical: the intersection of all prime ideals.

    The caller supplies the prime points (as generator subsets) to avoid a
    cyclic dependency on the spectrum module.  An empty prime list means
    the zero blueprint, returned as the presentation with 1 == 0.
    """
    primes = list(primes)
    if not primes:
        return B.with_relations([relation([B.one()], [])])
    nil = frozenset.intersection(*primes)
    return quotient_by_vars(B, nil)


# ---------------------------------------------------------------------------
# Presentation simplification
# ---------------------------------------------------------------------------


def simplify_presentation(B: BlueprintPresentation) -> BlueprintPresentation:
    """Eliminate annihilated generators and generators identified with 1.

    Iterates: generators with g == 0 are dropped (their monomials become 0),
    generators with g == 1 are dropped (their exponents are erased), and
    trivial relations disappear.  The result presents the same blueprint on
    fewer generators; useful for recognizing free presentations.
    """
    current = B
    while True:
        dead = current.killed()
        ones = set()
        for rel in current.relations:
            for single, other in (rel.sides(), rel.sides()[::-1]):
                if len(single) == 1 and len(other) == 1 and other.terms[0].is_one():
                    t = single.terms[0]
                    if sum(t.exps) == 1 and max(t.exps) == 1 and t.sign == 0:
                        ones.add(t.exps.index(1))
        ones -= dead
        if not dead and not ones:
            return current
        keep = [g for g in range(current.width) if g not in dead and g not in ones]
        names = tuple(current.name_of(g) for g in keep)
        inverted = frozenset(keep.index(g) for g in current.inverted if g in keep)

        def project(t: Monomial) -> Monomial:
            if t.zero or t.support() & dead:
                return zero_monomial(len(keep))
            return Monomial(t.sign, tuple(t.exps[g] for g in keep))

        rels = []
        for rel in current.relations:
            lhs = [project(t) for t in rel.lhs.terms]
            rhs = [project(t) for t in rel.rhs.terms]
            rels.append(relation(lhs, rhs))
        current = make_presentation(names, inverted, current.coeff_order, rels)


# ---------------------------------------------------------------------------
# Rendering and JSON
# ---------------------------------------------------------------------------


def render_monomial(B: BlueprintPresentation, m: Monomial) -> str:
    if m.zero:
        return "0"
    parts = []
    if m.sign:
        parts.append("-1")
    for i, e in enumerate(m.exps):
        if e == 1:
            parts.append(B.name_of(i))
        elif e:
            parts.append(f"{B.name_of(i)}^{e}")
    if not parts:
        return "1"
    return "*".join(parts) if parts != ["-1"] else "-1"


def render_sum(B: BlueprintPresentation, s: FormalSum) -> str:
    if not s.terms:
        return "0"
    return " + ".join(render_monomial(B, t) for t in s.terms)


def render_relation(B: BlueprintPresentation, rel: Relation) -> str:
    return f"{render_sum(B, rel.lhs)} == {render_sum(B, rel.rhs)}"


def presentation_to_json(B: BlueprintPresentation) -> dict:
    return {
        "generators": list(B.generator_names),
        "inverted": sorted(B.name_of(i) for i in B.inverted),
        "coeff_order": B.coeff_order,
        "relations": [
            {"lhs": [[t.sign, list(t.exps)] for t in rel.lhs.terms],
             "rhs": [[t.sign, list(t.exps)] for t in rel.rhs.terms]}
            for rel in B.relations
        ],
    }


def presentation_from_json(data: dict) -> BlueprintPresentation:
    names = tuple(data["generators"])
    inverted = [names.index(n) for n in data.get("inverted", [])]
    m = int(data.get("coeff_order", 1))
    width = len(names)
    rels = []
    for entry in data.get("relations", []):
        lhs = [Monomial(int(s) % m if m == 2 else 0, tuple(map(int, e)))
               for s, e in entry["lhs"]]
        rhs = [Monomial(int(s) % m if m == 2 else 0, tuple(map(int, e)))
               for s, e in entry["rhs"]]
        if any(len(t.exps) != width for t in lhs + rhs):
            raise ValueError("exponent vector width does not match the generators")
        rels.append(relation(lhs, rhs))
    return make_presentation(names, inverted, m, rels)
