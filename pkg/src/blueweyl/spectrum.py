"""Prime spectra of presented blueprints as finite posets.

Every prime ideal of a blueprint presented over F1 by monomial generators is
generated by a subset of the generators, so the spectrum is a finite set of
generator subsets ordered by inclusion.  Enumeration is a branch-and-bound
search over subsets with forcing-closure pruning; the criterion for a subset
to be prime is that no additive relation has exactly one term outside the
candidate ideal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .blueprint import (
    BlueprintPresentation,
    Relation,
    analyze_normal_form,
    is_zero_blueprint,
    quotient_by_vars,
    localize,
    reduce_presentation,
    saturate_relations,
)

DEFAULT_GENERATOR_CAP = 26


class GeneratorCapExceeded(Exception):
    def __init__(self, width: int, cap: int):
        super().__init__(
            f"presentation has {width} generators, above the enumeration cap {cap}; "
            f"raise the cap explicitly if this size is intended")
        self.width = width
        self.cap = cap


@dataclass(frozen=True, order=True)
class PrimePoint:
    """A prime ideal p_I, identified by its generating subset of generators."""

    vars: frozenset[int] = field(compare=False)
    sort_key: tuple = field(default=(), compare=True)

    def __init__(self, vars: Iterable[int]):
        vs = frozenset(vars)
        object.__setattr__(self, "vars", vs)
        object.__setattr__(self, "sort_key", (len(vs), tuple(sorted(vs))))

    def __hash__(self):
        return hash(self.vars)

    def __eq__(self, other):
        return isinstance(other, PrimePoint) and self.vars == other.vars

    def label(self, B: BlueprintPresentation) -> str:
        if not self.vars:
            return "(0)"
        return "(" + ",".join(B.name_of(i) for i in sorted(self.vars)) + ")"


def _term_masks(B: BlueprintPresentation, relations: Sequence[Relation]
                ) -> list[list[int]]:
    """Support bitmasks of every term of every relation (constants give 0)."""
    out = []
    for rel in relations:
        masks = []
        for t in rel.all_terms():
            mask = 0
            for g in t.support():
                mask |= 1 << g
            masks.append(mask)
        out.append(masks)
    return out


def is_prime(B: BlueprintPresentation, vars: Iterable[int],
             relations: Optional[Sequence[Relation]] = None) -> bool:
    """Prime criterion with forcing closure on the generating relations.

    Repeatedly, any relation with exactly one term outside the candidate
    ideal forces that term's support into the ideal; the candidate is prime
    iff the closure never grows beyond it and never forces the constant 1,
    which is equivalent to every relation having 0 or >= 2 terms outside.
    Inverted generators can never lie in a proper ideal.
    """
    cand = frozenset(vars)
    if cand & B.inverted:
        return False
    if not cand <= set(range(B.width)):
        raise ValueError("unknown generator index")
    if relations is None:
        relations = saturate_relations(B)
    masks = _term_masks(B, relations)
    inv_mask = 0
    for g in B.inverted:
        inv_mask |= 1 << g
    current = 0
    for g in cand:
        current |= 1 << g
    while True:
        forced = 0
        for rel_masks in masks:
            outside = [m for m in rel_masks if not (m & current)]
            if len(outside) == 1:
                culprit = outside[0]
                if culprit == 0 or culprit & inv_mask or not (culprit & ~current):
                    return False
                forced |= culprit
        if not forced:
            break
        current |= forced
    target = 0
    for g in cand:
        target |= 1 << g
    return current == target


def _enumerate_masks(masks: list[list[int]], width: int, inv_mask: int) -> list[int]:
    """All subsets passing the criterion, by depth-first branch and bound.

    Generators are decided one at a time; a branch dies as soon as some
    relation has every term decided and exactly one of them out.  A term is
    IN once it meets the chosen set, OUT once its support is fully among
    rejected or inverted generators.  Deadness is tracked incrementally via
    a counter over relations.
    """
    order = sorted((g for g in range(width) if not (inv_mask >> g) & 1),
                   key=lambda g: -sum(1 for rel in masks for m in rel if (m >> g) & 1))
    flat_terms: list[int] = []
    rel_of_term: list[int] = []
    for ri, rel in enumerate(masks):
        for m in rel:
            flat_terms.append(m)
            rel_of_term.append(ri)
    nterms = len(flat_terms)
    nrels = len(masks)
    terms_per_rel = [0] * nrels
    for ri in rel_of_term:
        terms_per_rel[ri] += 1
    touched_by: list[list[int]] = [[] for _ in range(width)]
    for ti, m in enumerate(flat_terms):
        for g in range(width):
            if (m >> g) & 1:
                touched_by[g].append(ti)

    results: list[int] = []
    term_in = [False] * nterms
    undecided = [bin(m & ~inv_mask).count("1") for m in flat_terms]
    rel_in = [0] * nrels
    rel_out = [0] * nrels
    for ti, m in enumerate(flat_terms):
        if undecided[ti] == 0 and not term_in[ti]:
            rel_out[rel_of_term[ti]] += 1
    # invariant: decide() is entered only while no relation is dead, so after
    # a decision only the touched relations need a deadness check
    for ri in range(nrels):
        if rel_out[ri] == 1 and rel_in[ri] + rel_out[ri] == terms_per_rel[ri]:
            return []
    norder = len(order)
    rot = rel_of_term

    def decide(pos: int, in_mask: int):
        if pos == norder:
            results.append(in_mask)
            return
        g = order[pos]
        touched = touched_by[g]

        # branch: g joins the ideal
        delta = []
        for ti in touched:
            if not term_in[ti]:
                term_in[ti] = True
                rel_in[rot[ti]] += 1
                delta.append(ti)
        ok = True
        for ti in delta:
            ri = rot[ti]
            if rel_out[ri] == 1 and rel_in[ri] + rel_out[ri] == terms_per_rel[ri]:
                ok = False
                break
        if ok:
            decide(pos + 1, in_mask | (1 << g))
        for ti in delta:
            term_in[ti] = False
            rel_in[rot[ti]] -= 1

        # branch: g stays out
        newly_out = []
        for ti in touched:
            undecided[ti] -= 1
            if undecided[ti] == 0 and not term_in[ti]:
                rel_out[rot[ti]] += 1
                newly_out.append(ti)
        ok = True
        for ti in newly_out:
            ri = rot[ti]
            if rel_out[ri] == 1 and rel_in[ri] + rel_out[ri] == terms_per_rel[ri]:
                ok = False
                break
        if ok:
            decide(pos + 1, in_mask)
        for ti in newly_out:
            rel_out[rot[ti]] -= 1
        for ti in touched:
            undecided[ti] += 1

    decide(0, 0)
    return results


@lru_cache(maxsize=256)
def _enumerate_cached(B: BlueprintPresentation, cap: int) -> tuple[PrimePoint, ...]:
    if B.width > cap:
        raise GeneratorCapExceeded(B.width, cap)
    if is_zero_blueprint(B):
        return ()
    relations = saturate_relations(B)
    inv_mask = 0
    for g in B.inverted:
        inv_mask |= 1 << g
    masks = _term_masks(B, relations)
    found = _enumerate_masks(masks, B.width, inv_mask)
    points = [PrimePoint(g for g in range(B.width) if (m >> g) & 1) for m in found]
    points.sort(key=lambda p: p.sort_key)
    return tuple(points)


def enumerate_primes(B: BlueprintPresentation,
                     cap: int = DEFAULT_GENERATOR_CAP) -> list[PrimePoint]:
    """All prime ideals of the presentation, sorted by size then index."""
    return list(_enumerate_cached(B, cap))


def brute_force_primes(B: BlueprintPresentation) -> list[PrimePoint]:
    """Oracle: scan all subsets of the non-inverted generators.

    Every subset is tested directly against the criterion (no branch and
    bound): each relation must have 0 or at least 2 terms outside the
    candidate ideal.
    """
    if is_zero_blueprint(B):
        return []
    relations = saturate_relations(B)
    masks = _term_masks(B, relations)
    free = [g for g in range(B.width) if g not in B.inverted]
    points = []
    for bits in range(1 << len(free)):
        cand = 0
        for i in range(len(free)):
            if (bits >> i) & 1:
                cand |= 1 << free[i]
        good = True
        for rel_masks in masks:
            outside = 0
            for m in rel_masks:
                if not m & cand:
                    outside += 1
                    if outside > 1:
                        break
            if outside == 1:
                good = False
                break
        if good:
            points.append(PrimePoint(g for g in free if (cand >> g) & 1))
    points.sort(key=lambda p: p.sort_key)
    return points


# ---------------------------------------------------------------------------
# The finite poset topology
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectrumPoset:
    """A finite spectrum with its inclusion order.

    Closed subsets are the up-closed sets.  ``closed_family`` optionally
    fixes an explicit family of closed sets to check (used to exercise the
    sobriety checker on corrupted inputs); by default the point closures and
    their pairwise unions are used.
    """

    points: tuple[PrimePoint, ...]
    closed_family: Optional[tuple[frozenset[int], ...]] = None

    def __post_init__(self):
        if len(set(self.points)) != len(self.points):
            raise ValueError("points must be distinct")

    def index(self, p: PrimePoint) -> int:
        return self.points.index(p)

    def leq(self, i: int, j: int) -> bool:
        """points[i] specializes to points[j]: inclusion of ideals."""
        return self.points[i].vars <= self.points[j].vars

    def up_set(self, i: int) -> frozenset[int]:
        return frozenset(j for j in range(len(self.points)) if self.leq(i, j))

    def hasse_edges(self) -> list[tuple[int, int]]:
        n = len(self.points)
        edges = []
        for i in range(n):
            for j in range(n):
                if i != j and self.leq(i, j):
                    if not any(k != i and k != j and self.leq(i, k) and self.leq(k, j)
                               for k in range(n)):
                        edges.append((i, j))
        return sorted(edges)

    def components(self) -> list[frozenset[int]]:
        n = len(self.points)
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        # a global minimum makes the space connected without a pairwise scan
        if any(not p.vars for p in self.points) and n:
            return [frozenset(range(n))]
        for i in range(n):
            for j in range(i + 1, n):
                if self.leq(i, j) or self.leq(j, i):
                    ri, rj = find(i), find(j)
                    if ri != rj:
                        parent[ri] = rj
        comps: dict[int, set[int]] = {}
        for i in range(n):
            comps.setdefault(find(i), set()).add(i)
        return sorted((frozenset(v) for v in comps.values()), key=sorted)

    def default_closed_family(self) -> list[frozenset[int]]:
        family = {self.up_set(i) for i in range(len(self.points))}
        family.add(frozenset())
        return sorted(family, key=lambda s: (len(s), sorted(s)))


def poset(points: Iterable[PrimePoint]) -> SpectrumPoset:
    pts = sorted(set(points), key=lambda p: p.sort_key)
    return SpectrumPoset(tuple(pts))


def sobriety_check(P: SpectrumPoset, scan_limit: int = 3000) -> bool:
    """Every irreducible closed subset must have a unique minimal point.

    Irreducibility is judged against the poset's closed family: a non-empty
    closed set is irreducible when it is not the union of two proper closed
    subsets from the family.  The default family consists of the point
    closures (their pairwise unions are reducible by construction and add
    nothing).  Above the scan limit only the structural content remains:
    inclusion orders are antisymmetric, so point closures have their point
    as unique minimal element and distinctness is all that can fail.
    """
    if P.closed_family is not None:
        family = list(P.closed_family)
    elif len(P.points) <= scan_limit:
        family = P.default_closed_family()
    else:
        return len({p.vars for p in P.points}) == len(P.points)
    family_set = set(family)
    for V in family:
        if not V:
            continue
        # fast path: a global minimum is the unique generic point
        members = sorted(V)
        cand = members[0]
        for j in members[1:]:
            if P.leq(j, cand):
                cand = j
        if all(P.leq(cand, j) for j in members):
            continue
        proper = [W for W in family_set if W < V]
        reducible = any(a | b == V for k, a in enumerate(proper)
                        for b in proper[k:] if a != V and b != V)
        if reducible:
            continue
        minimals = [i for i in V
                    if not any(j != i and P.leq(j, i) for j in V)]
        if len(minimals) != 1:
            return False
    return True


def export_dot(P: SpectrumPoset, B: Optional[BlueprintPresentation] = None,
               name: str = "Spec") -> str:
    """Deterministic DOT digraph of the Hasse diagram, edges lower to higher."""
    lines = [f"digraph \"{name}\" {{", "  rankdir=BT;"]
    for i, p in enumerate(P.points):
        label = p.label(B) if B is not None else \
            ("(0)" if not p.vars else "(" + ",".join(map(str, sorted(p.vars))) + ")")
        lines.append(f"  p{i} [label=\"{label}\"];")
    for i, j in P.hasse_edges():
        lines.append(f"  p{i} -> p{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def spectrum_to_json(P: SpectrumPoset) -> dict:
    return {
        "points": [sorted(p.vars) for p in P.points],
        "hasse": [list(e) for e in P.hasse_edges()],
    }


# ---------------------------------------------------------------------------
# Residue fields and closed subschemes
# ---------------------------------------------------------------------------


def closed_subscheme(B: BlueprintPresentation, p: PrimePoint,
                     cap: int = DEFAULT_GENERATOR_CAP) -> BlueprintPresentation:
    """The reduced closed subscheme supported on the closure of p."""
    quotient = quotient_by_vars(B, p.vars)
    primes = [q.vars for q in enumerate_primes(quotient, cap=cap)]
    return reduce_presentation(quotient, primes)


def residue_field(B: BlueprintPresentation, p: PrimePoint):
    """Localize at the complement of p, quotient by p, and normalize.

    Returns a :class:`NormalFormBlueField` when the result is a twisted
    lattice blue field, else the raw presentation (flagged by type).
    """
    complement = [g for g in range(B.width) if g not in p.vars]
    raw = quotient_by_vars(localize(B, complement), p.vars)
    analysis = analyze_normal_form(raw)
    if analysis.ok:
        return analysis.field
    return raw


def residue_presentation(B: BlueprintPresentation, p: PrimePoint) -> BlueprintPresentation:
    """The residue field as a raw presentation (all survivors inverted)."""
    complement = [g for g in range(B.width) if g not in p.vars]
    return quotient_by_vars(localize(B, complement), p.vars)


# ---------------------------------------------------------------------------
# Explicit point lists for glued (non-affine) schemes
# ---------------------------------------------------------------------------


def projective_space_poset(n: int) -> SpectrumPoset:
    """The 2^(n+1)-1 points of P^n over F1 with the specialization order.

    A point is a nonzero 0/1 coordinate pattern; it specializes towards
    smaller supports, so the order is reverse inclusion of supports recast
    as inclusion of the vanishing sets.
    """
    points = []
    for bits in range(1, 1 << (n + 1)):
        vanishing = frozenset(i for i in range(n + 1) if not (bits >> i) & 1)
        points.append(PrimePoint(vanishing))
    return poset(points)
