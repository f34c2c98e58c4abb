"""Catalog of group models: presentations with comultiplications.

Each constructor returns a :class:`GroupModel` bundling a blueprint
presentation (matrix coordinates named T1, T2, ... row-major, plus an
auxiliary generator ``d`` for the inverse determinant where needed), the
matrix comultiplication, the counit pattern picking the identity, and the
expected combinatorial metadata used by the verification suites.

Two projective models of the rank-one adjoint group ship as certified point
data instead of eliminated ideals: their spectra come from sampling matrix
families over small fields, while the comultiplication acts on the ambient
coordinates.
"""

from __future__ import annotations

import dataclasses
import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .blueprint import (
    BlueprintPresentation,
    Monomial,
    NormalFormBlueField,
    make_presentation,
    mk_free,
    one_monomial,
    relation,
)
from .spectrum import DEFAULT_GENERATOR_CAP, PrimePoint, enumerate_primes, is_prime
from .weyl import (
    Comultiplication,
    RankSpacePoint,
    WeylMonoid,
    comultiplication,
    induced_weyl_law,
    rank_space,
    tits_points,
)


class CatalogError(Exception):
    pass


@dataclass(frozen=True)
class GroupModel:
    """A presented model of a group together with its comonoid data."""

    name: str
    presentation: BlueprintPresentation
    comult: Comultiplication
    counit_zero: frozenset[int]
    dimension: int = 0
    aux_names: tuple[str, ...] = ()
    expected: dict = field(default_factory=dict, compare=False, hash=False)
    spectrum_override: Optional[tuple[PrimePoint, ...]] = None
    rank_override: Optional[tuple[RankSpacePoint, ...]] = None
    rank_point_filter: Optional[Callable[[PrimePoint], bool]] = field(
        default=None, compare=False, hash=False)

    def spectrum(self, cap: int = DEFAULT_GENERATOR_CAP) -> list[PrimePoint]:
        if self.spectrum_override is not None:
            return list(self.spectrum_override)
        return enumerate_primes(self.presentation, cap=cap)

    def rank_points(self, cap: int = DEFAULT_GENERATOR_CAP) -> list[RankSpacePoint]:
        if self.rank_override is not None:
            pts = list(self.rank_override)
        else:
            pts = rank_space(self.presentation, cap=cap)
        if self.rank_point_filter is not None:
            pts = [p for p in pts if self.rank_point_filter(p.point)]
        return pts

    def weyl_monoid(self, cap: int = DEFAULT_GENERATOR_CAP) -> WeylMonoid:
        return induced_weyl_law(self.presentation, self.comult, self.counit_zero,
                                points=self.rank_points(cap=cap), cap=cap)

    def tits_points(self, m: int, cap: int = DEFAULT_GENERATOR_CAP):
        return tits_points(self.presentation, m, delta=self.comult,
                           counit_zero=self.counit_zero,
                           points=self.rank_points(cap=cap), cap=cap)

    def validate_counit(self) -> None:
        if self.spectrum_override is not None:
            if not any(p.vars == self.counit_zero for p in self.spectrum_override):
                raise CatalogError(f"{self.name}: counit pattern is not a point")
            return
        if not is_prime(self.presentation, self.counit_zero):
            raise CatalogError(f"{self.name}: counit pattern is not a prime point")


# ---------------------------------------------------------------------------
# Matrix coordinate helpers
# ---------------------------------------------------------------------------


def _entry_names(n: int) -> list[str]:
    return [f"T{k + 1}" for k in range(n * n)]


def _eidx(n: int, i: int, j: int) -> int:
    """Generator index of the matrix entry (i, j), 1-based."""
    return (i - 1) * n + (j - 1)


def _entry_pairs(n: int) -> dict[int, tuple[int, int]]:
    return {_eidx(n, i, j): (i, j)
            for i in range(1, n + 1) for j in range(1, n + 1)}


def _mono(width: int, entries: Sequence[int]) -> Monomial:
    exps = [0] * width
    for g in entries:
        exps[g] += 1
    return Monomial(0, tuple(exps))


def _perm_product(n: int, width: int, sigma: Sequence[int],
                  extra: Sequence[int] = ()) -> Monomial:
    gens = [_eidx(n, i + 1, sigma[i] + 1) for i in range(n)]
    return _mono(width, list(gens) + list(extra))


def _perm_sign(sigma: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(sigma)
    for i in range(len(sigma)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = sigma[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def determinant_relation(n: int, width: int, extra: Sequence[int] = ()):
    """Even permutation products == odd permutation products + 1."""
    even, odd = [], []
    for sigma in itertools.permutations(range(n)):
        term = _perm_product(n, width, sigma, extra)
        (even if _perm_sign(sigma) == 1 else odd).append(term)
    return relation(even, odd + [one_monomial(width)])


def _matrix_comult(n: int, width: int, extra_diag: Sequence[int] = ()) -> Comultiplication:
    """T_ij maps to the sum over k of T'_ik (x) T''_kj; extras map to g' (x) g''."""
    images: list[list[tuple[Monomial, Monomial]]] = [[] for _ in range(width)]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            g = _eidx(n, i, j)
            images[g] = [(_mono(width, [_eidx(n, i, k)]), _mono(width, [_eidx(n, k, j)]))
                         for k in range(1, n + 1)]
    for g in extra_diag:
        images[g] = [(_mono(width, [g]), _mono(width, [g]))]
    return comultiplication(images)


def _diagonal_counit(n: int, width: int, keep: Sequence[int] = ()) -> frozenset[int]:
    alive = {_eidx(n, i, i) for i in range(1, n + 1)} | set(keep)
    return frozenset(g for g in range(width) if g not in alive)


def perm_of_pattern(model: GroupModel, p: PrimePoint) -> Optional[tuple[int, ...]]:
    """The permutation whose support is the non-vanishing entries, if any."""
    n = model.dimension
    alive = [(i, j) for g, (i, j) in _entry_pairs(n).items() if g not in p.vars]
    if len(alive) != n:
        return None
    sigma = [0] * n
    rows = set()
    cols = set()
    for i, j in alive:
        sigma[i - 1] = j - 1
        rows.add(i)
        cols.add(j)
    if len(rows) != n or len(cols) != n:
        return None
    return tuple(sigma)


# ---------------------------------------------------------------------------
# Special and general linear groups
# ---------------------------------------------------------------------------


MODEL_CAP = 6


def sl(n: int) -> GroupModel:
    """The determinant-one matrix model on n^2 coordinates."""
    if not 2 <= n <= MODEL_CAP:
        raise CatalogError(f"sl({n}): supported range is 2..{MODEL_CAP}")
    width = n * n
    B = make_presentation(_entry_names(n), (), 1, [determinant_relation(n, width)])
    model = GroupModel(
        name=f"sl:{n}",
        presentation=B,
        comult=_matrix_comult(n, width),
        counit_zero=_diagonal_counit(n, width),
        dimension=n,
        expected={"rank": n - 1, "weyl_order": _factorial(n),
                  "weyl_type": f"A{n - 1}",
                  "tits_f1": _factorial(n) // 2,
                  "tits_f12": 2 ** (n - 1) * _factorial(n)},
    )
    return model


def gl(n: int) -> GroupModel:
    """Invertible matrices via the block embedding into sl(n+1).

    The surviving relation is d * (even products) == d * (odd products) + 1
    on the n^2 entries plus the inverse-determinant generator d.
    """
    if not 1 <= n <= MODEL_CAP:
        raise CatalogError(f"gl({n}): supported range is 1..{MODEL_CAP}")
    width = n * n + 1
    d = width - 1
    names = _entry_names(n) + ["d"]
    even, odd = [], []
    for sigma in itertools.permutations(range(n)):
        term = _perm_product(n, width, sigma, extra=[d])
        (even if _perm_sign(sigma) == 1 else odd).append(term)
    rel = relation(even, odd + [one_monomial(width)])
    B = make_presentation(names, (), 1, [rel])
    return GroupModel(
        name=f"gl:{n}",
        presentation=B,
        comult=_matrix_comult(n, width, extra_diag=[d]),
        counit_zero=_diagonal_counit(n, width, keep=[d]),
        dimension=n,
        aux_names=("d",),
        expected={"rank": n, "weyl_order": _factorial(n),
                  "weyl_type": f"A{n - 1}" if n > 1 else "trivial",
                  "tits_f12": 2 ** n * _factorial(n)},
    )


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


# ---------------------------------------------------------------------------
# Symplectic groups
# ---------------------------------------------------------------------------


def sp(dim: int) -> GroupModel:
    """Matrices preserving the standard antisymmetric form, inside gl(2n).

    One relation per pair i < j expresses the form invariance as a
    sum-equality with the Kronecker term on the right side.
    """
    if dim % 2 or not 2 <= dim <= MODEL_CAP:
        raise CatalogError(f"sp({dim}): even dimension in 2..{MODEL_CAP} required")
    n = dim // 2
    ambient = gl(dim)
    width = ambient.presentation.width
    rels = list(ambient.presentation.relations)
    for i in range(1, dim + 1):
        for j in range(i + 1, dim + 1):
            lhs = [_mono(width, [_eidx(dim, i, l), _eidx(dim, j, dim + 1 - l)])
                   for l in range(1, n + 1)]
            rhs = [_mono(width, [_eidx(dim, i, l), _eidx(dim, j, dim + 1 - l)])
                   for l in range(n + 1, dim + 1)]
            if j == dim + 1 - i:
                rhs.append(one_monomial(width))
            rels.append(relation(lhs, rhs))
    B = make_presentation(ambient.presentation.generator_names, (), 1, rels)
    weyl_order = 2 ** n * _factorial(n)
    return GroupModel(
        name=f"sp:{dim}",
        presentation=B,
        comult=ambient.comult,
        counit_zero=ambient.counit_zero,
        dimension=dim,
        aux_names=("d",),
        expected={"rank": n, "weyl_order": weyl_order, "weyl_type": f"C{n}"},
    )


# ---------------------------------------------------------------------------
# Orthogonal and special orthogonal groups
# ---------------------------------------------------------------------------


def _orthogonal_relations(n: int, width: int) -> list:
    """Coefficientwise invariance of the split quadratic form, subtraction-free.

    q(x) pairs x_i with x_(n+1-i); for odd n the middle square appears.  For
    every j <= k the coefficient of x_j x_k in q(gx) is equated with 1 when
    k = n+1-j (the middle coefficient included) and with 0 otherwise.
    """
    m = n // 2
    odd = n % 2 == 1
    rels = []
    for j in range(1, n + 1):
        for k in range(j, n + 1):
            terms = []
            for i in range(1, m + 1):
                if j == k:
                    terms.append(_mono(width, [_eidx(n, i, j), _eidx(n, n + 1 - i, j)]))
                else:
                    terms.append(_mono(width, [_eidx(n, i, j), _eidx(n, n + 1 - i, k)]))
                    terms.append(_mono(width, [_eidx(n, i, k), _eidx(n, n + 1 - i, j)]))
            if odd:
                mid = m + 1
                if j == k:
                    terms.append(_mono(width, [_eidx(n, mid, j), _eidx(n, mid, j)]))
                else:
                    terms.append(_mono(width, [_eidx(n, mid, j), _eidx(n, mid, k)]))
                    terms.append(_mono(width, [_eidx(n, mid, j), _eidx(n, mid, k)]))
            target = [one_monomial(width)] if k == n + 1 - j else []
            rels.append(relation(terms, target))
    return rels


def o(n: int) -> GroupModel:
    """The full orthogonal group of the split form in even dimension."""
    if n % 2 or not 2 <= n <= MODEL_CAP:
        raise CatalogError(f"o({n}): even dimension in 2..{MODEL_CAP} required")
    m = n // 2
    width = n * n
    rels = _orthogonal_relations(n, width)
    B = make_presentation(_entry_names(n), (), 1, rels)
    return GroupModel(
        name=f"o:{n}",
        presentation=B,
        comult=_matrix_comult(n, width),
        counit_zero=_diagonal_counit(n, width),
        dimension=n,
        expected={"rank": m, "weyl_order": 2 ** m * _factorial(m),
                  "weyl_type": f"B{m}"},
    )


def so(n: int) -> GroupModel:
    """The special orthogonal group of the split form.

    Odd dimension adds the determinant-one relation.  In even dimension the
    identity component is selected by restricting the rank points to the
    patterns whose underlying permutation has sign +1 (the monomial
    relations cannot express the component selection).
    """
    if not 2 <= n <= MODEL_CAP:
        raise CatalogError(f"so({n}): dimension in 2..{MODEL_CAP} required")
    m = n // 2
    width = n * n
    rels = _orthogonal_relations(n, width)
    if n % 2 == 1:
        rels.append(determinant_relation(n, width))
        weyl_order = 2 ** m * _factorial(m)
        weyl_type = f"B{m}"
        sign_filter = None
    else:
        weyl_order = 2 ** (m - 1) * _factorial(m)
        weyl_type = f"D{m}"
        sign_filter = True
    B = make_presentation(_entry_names(n), (), 1, rels)
    model = GroupModel(
        name=f"so:{n}",
        presentation=B,
        comult=_matrix_comult(n, width),
        counit_zero=_diagonal_counit(n, width),
        dimension=n,
        expected={"rank": m, "weyl_order": weyl_order, "weyl_type": weyl_type},
    )
    if sign_filter:
        def keep(p: PrimePoint, _model=model) -> bool:
            sigma = perm_of_pattern(_model, p)
            return sigma is not None and _perm_sign(sigma) == 1
        model = dataclasses.replace(model, rank_point_filter=keep)
    return model


# ---------------------------------------------------------------------------
# Tori, constant groups and semidirect products
# ---------------------------------------------------------------------------


def torus(r: int) -> GroupModel:
    """The split torus of rank r: r inverted generators, diagonal comult."""
    if r < 0:
        raise CatalogError("torus rank must be non-negative")
    B = mk_free(r, inverted=range(r))
    images = [[(B.gen(i), B.gen(i))] for i in range(r)]
    return GroupModel(
        name=f"torus:{r}",
        presentation=B,
        comult=comultiplication(images),
        counit_zero=frozenset(),
        expected={"rank": r, "weyl_order": 1, "weyl_type": "trivial",
                  "tits_f12": 2 ** r, "tits_weyl": True},
    )


@dataclass(frozen=True)
class GroupTable:
    """A finite group as a multiplication table over element labels."""

    elements: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]
    identity: int

    def __post_init__(self):
        n = len(self.elements)
        if len(self.table) != n or any(len(r) != n for r in self.table):
            raise CatalogError("malformed multiplication table")
        e = self.identity
        if any(self.table[e][i] != i or self.table[i][e] != i for i in range(n)):
            raise CatalogError("identity row or column broken")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if self.table[self.table[i][j]][k] != self.table[i][self.table[j][k]]:
                        raise CatalogError("table is not associative")
        for i in range(n):
            if not any(self.table[i][j] == e for j in range(n)):
                raise CatalogError(f"element {self.elements[i]} has no inverse")

    @staticmethod
    def cyclic(n: int) -> "GroupTable":
        elems = tuple(f"g{k}" for k in range(n))
        table = tuple(tuple((i + j) % n for j in range(n)) for i in range(n))
        return GroupTable(elems, table, 0)


def _constant_relations(B: BlueprintPresentation, offsets: Sequence[int]):
    """Orthogonal idempotents summing to 1."""
    rels = []
    for a in offsets:
        rels.append(relation([B.monomial([2 if g == a else 0 for g in range(B.width)])],
                             [B.gen(a)]))
        for b in offsets:
            if a < b:
                exps = [0] * B.width
                exps[a] = exps[b] = 1
                rels.append(relation([B.monomial(exps)], []))
    rels.append(relation([B.gen(a) for a in offsets], [B.one()]))
    return rels


def constant_group(table: GroupTable) -> GroupModel:
    """The constant group scheme: one idempotent coordinate per element."""
    k = len(table.elements)
    names = tuple(f"e_{name}" for name in table.elements)
    base = mk_free(k, names=names)
    B = make_presentation(names, (), 1, _constant_relations(base, range(k)))
    images: list[list[tuple[Monomial, Monomial]]] = [[] for _ in range(k)]
    for g1 in range(k):
        for g2 in range(k):
            h = table.table[g1][g2]
            images[h].append((B.gen(g1), B.gen(g2)))
    counit = frozenset(g for g in range(k) if g != table.identity)
    return GroupModel(
        name=f"const:{'+'.join(table.elements)}",
        presentation=B,
        comult=comultiplication(images),
        counit_zero=counit,
        expected={"rank": 0, "weyl_order": k,
                  "tits_weyl": k == 1},
    )


def semidirect(r: int, table: GroupTable,
               exps: dict[str, Sequence[Sequence[int]]]) -> GroupModel:
    """Split torus of rank r twisted by a finite group acting by integer matrices.

    ``exps[g]`` is the r x r integer matrix A(g) describing the action on
    torus characters.  The model carries the Tits-Weyl flag exactly when
    A(g) differs from the identity for every g != identity.
    """
    k = len(table.elements)
    ident = [[int(i == j) for j in range(r)] for i in range(r)]
    mats = {}
    for name in table.elements:
        if name not in exps:
            raise CatalogError(f"missing exponent matrix for {name}")
        mat = [list(map(int, row)) for row in exps[name]]
        if len(mat) != r or any(len(row) != r for row in mat):
            raise CatalogError(f"exponent matrix for {name} is not {r}x{r}")
        mats[name] = mat
    names = tuple(f"T{i + 1}" for i in range(r)) + \
        tuple(f"e_{name}" for name in table.elements)
    width = r + k
    base = mk_free(width, inverted=range(r), names=names)
    rels = _constant_relations(base, [r + a for a in range(k)])
    B = make_presentation(names, range(r), 1, rels)

    images: list[list[tuple[Monomial, Monomial]]] = [[] for _ in range(width)]
    for i in range(r):
        for a, name in enumerate(table.elements):
            left_exps = [0] * width
            left_exps[i] = 1
            left_exps[r + a] = 1
            right_exps = [0] * width
            for j in range(r):
                right_exps[j] = mats[name][i][j]
            images[i].append((Monomial(0, tuple(left_exps)),
                              Monomial(0, tuple(right_exps))))
    for g1 in range(k):
        for g2 in range(k):
            h = table.table[g1][g2]
            images[r + h].append((B.gen(r + g1), B.gen(r + g2)))
    counit = frozenset(r + a for a in range(k) if a != table.identity)
    faithful = all(mats[name] != ident
                   for a, name in enumerate(table.elements) if a != table.identity)
    return GroupModel(
        name=f"semidirect:{r}:{'+'.join(table.elements)}",
        presentation=B,
        comult=comultiplication(images),
        counit_zero=counit,
        expected={"rank": r, "weyl_order": k, "tits_weyl": faithful},
    )


def nonstandard_torus() -> GroupModel:
    """A rank-one torus model whose presentation has no point over F1.

    The extra coordinate S is identified with 1 + 1, so the closed point is
    of characteristic 2 and only the generic point is pseudo-Hopf; the law
    descends on the rank space although the presentation itself admits no
    identity morphism to F1.
    """
    names = ("S", "T")
    base = mk_free(2, inverted=[1], names=names)
    B = base.with_relations([relation([base.gen(0)], [base.one(), base.one()])])
    images = [
        [(B.gen(0), B.one())],  # S maps to S' (x) 1
        [(B.gen(1), B.gen(1))],
    ]
    return GroupModel(
        name="nstorus",
        presentation=B,
        comult=comultiplication(images),
        counit_zero=frozenset(),
        expected={"rank": 1, "weyl_order": 1, "tits_weyl": True},
    )


# ---------------------------------------------------------------------------
# Parabolic subgroups, unipotent radicals, Levi subgroups of gl(n)
# ---------------------------------------------------------------------------


def _block_of(flag: Sequence[int]) -> list[int]:
    blocks = []
    for b, size in enumerate(flag):
        blocks.extend([b] * size)
    return blocks


def standard_parabolic(n: int, flag: Sequence[int]) -> GroupModel:
    """The standard parabolic of gl(n) for a composition of n.

    Entries strictly below the block-diagonal structure are killed.
    """
    if sum(flag) != n or any(s <= 0 for s in flag):
        raise CatalogError(f"flag {flag} is not a composition of {n}")
    ambient = gl(n)
    blocks = _block_of(flag)
    dead = [_eidx(n, i, j)
            for i in range(1, n + 1) for j in range(1, n + 1)
            if blocks[i - 1] > blocks[j - 1]]
    rels = list(ambient.presentation.relations)
    rels.extend(relation([ambient.presentation.gen(g)], []) for g in dead)
    B = make_presentation(ambient.presentation.generator_names, (), 1, rels)
    weyl_order = 1
    for s in flag:
        weyl_order *= _factorial(s)
    return GroupModel(
        name=f"parabolic:{n}:{','.join(map(str, flag))}",
        presentation=B,
        comult=ambient.comult,
        counit_zero=ambient.counit_zero,
        dimension=n,
        aux_names=("d",),
        expected={"rank": n, "weyl_order": weyl_order},
    )


def unipotent_radical(n: int, flag: Sequence[int]) -> GroupModel:
    """The unipotent radical of a standard parabolic of gl(n).

    On top of the parabolic kills, the block-diagonal entries collapse to
    the identity pattern: diagonal entries and d are set to 1, remaining
    block entries below the strict upper part are killed.
    """
    parent = standard_parabolic(n, flag)
    P = parent.presentation
    width = P.width
    d = width - 1
    blocks = _block_of(flag)
    rels = list(P.relations)
    one = one_monomial(width)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            g = _eidx(n, i, j)
            if i == j:
                rels.append(relation([P.gen(g)], [one]))
            elif blocks[i - 1] == blocks[j - 1]:
                rels.append(relation([P.gen(g)], []))
    rels.append(relation([P.gen(d)], [one]))
    B = make_presentation(P.generator_names, (), 1, rels)
    free_positions = sum(1 for i in range(1, n + 1) for j in range(1, n + 1)
                         if blocks[i - 1] < blocks[j - 1])
    return GroupModel(
        name=f"unipotent:{n}:{','.join(map(str, flag))}",
        presentation=B,
        comult=parent.comult,
        counit_zero=parent.counit_zero,
        dimension=n,
        aux_names=("d",),
        expected={"rank": 0, "weyl_order": 1, "affine_dim": free_positions},
    )


def levi(n: int, flag: Sequence[int]) -> GroupModel:
    """The block-diagonal Levi subgroup of a standard parabolic of gl(n)."""
    parent = standard_parabolic(n, flag)
    P = parent.presentation
    blocks = _block_of(flag)
    dead = [_eidx(n, i, j)
            for i in range(1, n + 1) for j in range(1, n + 1)
            if blocks[i - 1] != blocks[j - 1]]
    rels = list(P.relations)
    rels.extend(relation([P.gen(g)], []) for g in dead)
    B = make_presentation(P.generator_names, (), 1, rels)
    weyl_order = 1
    for s in flag:
        weyl_order *= _factorial(s)
    return GroupModel(
        name=f"levi:{n}:{','.join(map(str, flag))}",
        presentation=B,
        comult=parent.comult,
        counit_zero=parent.counit_zero,
        dimension=n,
        aux_names=("d",),
        expected={"rank": n, "weyl_order": weyl_order},
    )


# ---------------------------------------------------------------------------
# Projective rank-one models shipped as certified point data
# ---------------------------------------------------------------------------


def _pp(n: int, zero_positions: Sequence[tuple[int, int]]) -> PrimePoint:
    return PrimePoint(_eidx(n, i, j) for i, j in zero_positions)


def _perm_pattern(n: int, sigma: Sequence[int]) -> PrimePoint:
    alive = {(i + 1, sigma[i] + 1) for i in range(n)}
    return PrimePoint(_eidx(n, i, j)
                      for i in range(1, n + 1) for j in range(1, n + 1)
                      if (i, j) not in alive)


def _lattice_field(epsilon: int, names: Sequence[str]) -> NormalFormBlueField:
    return NormalFormBlueField(epsilon, tuple(names), (), ())


def _conjugation_pattern(a: int, b: int, c: int, d: int) -> PrimePoint:
    """Zero pattern of the conjugation matrix for symbolic non-zero entries."""
    entries = {
        (1, 1): a * d, (1, 2): -a * c, (1, 3): b * d, (1, 4): -b * c,
        (2, 1): -a * b, (2, 2): a * a, (2, 3): -b * b, (2, 4): a * b,
        (3, 1): c * d, (3, 2): -c * c, (3, 3): d * d, (3, 4): -c * d,
        (4, 1): -b * c, (4, 2): a * c, (4, 3): -b * d, (4, 4): a * d,
    }
    return _pp(4, [pos for pos, val in entries.items() if val == 0])


def psl2_conj() -> GroupModel:
    """Rank-one adjoint model from the conjugation action on 2x2 matrices.

    The seven points reproduce the shape of the sl(2) spectrum; the two
    monomial patterns (diagonal, anti-diagonal) are the rank points.
    """
    n = 4
    # symbolic vanishing analysis with generic non-zero parameter values
    patterns = {
        "generic": _conjugation_pattern(2, 3, 5, 8),  # ad-bc needs not be 1 here
        "a=0": _conjugation_pattern(0, 3, 5, 7),
        "b=0": _conjugation_pattern(2, 0, 5, 7),
        "c=0": _conjugation_pattern(2, 3, 0, 7),
        "d=0": _conjugation_pattern(2, 3, 5, 0),
        "a=d=0": _conjugation_pattern(0, 3, 5, 0),
        "b=c=0": _conjugation_pattern(2, 0, 0, 7),
    }
    points = tuple(sorted(set(patterns.values()), key=lambda p: p.sort_key))
    diag = patterns["b=c=0"]
    antidiag = patterns["a=d=0"]
    rank_points = (
        RankSpacePoint(diag, _lattice_field(1, ("L",)), 1),
        RankSpacePoint(antidiag, _lattice_field(2, ("L",)), 1),
    )
    B = make_presentation(_entry_names(4), (), 1, [])
    return GroupModel(
        name="psl2-conj",
        presentation=B,
        comult=_matrix_comult(4, 16),
        counit_zero=diag.vars,
        dimension=4,
        expected={"rank": 1, "weyl_order": 2, "points": 7},
        spectrum_override=points,
        rank_override=tuple(sorted(rank_points, key=lambda r: r.point.sort_key)),
    )


ADJOINT_POINT_TABLE = {
    # name -> (zero positions in the 3x3 adjoint coordinates, char-2 only)
    "p^e": ([(1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2)], False),
    "x1": ([(2, 1), (3, 1), (3, 2)], False),
    "x1'": ([(2, 1), (2, 3), (3, 1), (3, 2)], True),
    "p^s": ([(1, 1), (1, 2), (2, 1), (2, 3), (3, 2), (3, 3)], False),
    "x3": ([(1, 1), (1, 2), (2, 1)], False),
    "x3'": ([(1, 1), (1, 2), (2, 1), (2, 3)], True),
    "x4": ([(2, 3), (3, 2), (3, 3)], False),
    "x4'": ([(2, 1), (2, 3), (3, 2), (3, 3)], True),
    "x2": ([(1, 2), (1, 3), (2, 3)], False),
    "x2'": ([(1, 2), (1, 3), (2, 1), (2, 3)], True),
    "x5": ([(2, 2)], False),
    "eta": ([], False),
    "eta'": ([(2, 1), (2, 3)], True),
}


def psl2_adjoint() -> GroupModel:
    """Rank-one adjoint model from the adjoint action on its Lie algebra.

    Thirteen points, read off from the vanishing analysis of the two Bruhat
    cells of the image matrices; primed points require characteristic 2.
    """
    points = {name: _pp(3, pos) for name, (pos, _) in ADJOINT_POINT_TABLE.items()}
    ordered = tuple(sorted(points.values(), key=lambda p: p.sort_key))
    rank_points = (
        RankSpacePoint(points["p^e"], _lattice_field(1, ("L",)), 1),
        RankSpacePoint(points["p^s"], _lattice_field(2, ("L",)), 1),
    )
    B = make_presentation(_entry_names(3), (), 1, [])
    return GroupModel(
        name="psl2-adj",
        presentation=B,
        comult=_matrix_comult(3, 9),
        counit_zero=points["p^e"].vars,
        dimension=3,
        expected={"rank": 1, "weyl_order": 2, "points": 13},
        spectrum_override=ordered,
        rank_override=tuple(sorted(rank_points, key=lambda r: r.point.sort_key)),
    )


def adjoint_char2_point_names() -> list[str]:
    return [name for name, (_, char2) in ADJOINT_POINT_TABLE.items() if char2]


# ---------------------------------------------------------------------------
# Products of models
# ---------------------------------------------------------------------------


def model_product(G: GroupModel, H: GroupModel) -> GroupModel:
    """The product model: tensor presentation and componentwise comult."""
    from .blueprint import tensor as tensor_presentations

    B = tensor_presentations(G.presentation, H.presentation)
    wg, wh = G.presentation.width, H.presentation.width
    width = wg + wh

    def left(m: Monomial) -> Monomial:
        return Monomial(m.sign, m.exps + (0,) * wh)

    def right(m: Monomial) -> Monomial:
        return Monomial(m.sign, (0,) * wg + m.exps)

    images: list[list[tuple[Monomial, Monomial]]] = []
    for terms in G.comult.images:
        images.append([(left(a), left(b)) for a, b in terms])
    for terms in H.comult.images:
        images.append([(right(a), right(b)) for a, b in terms])
    counit = frozenset(G.counit_zero) | frozenset(g + wg for g in H.counit_zero)
    return GroupModel(
        name=f"({G.name})x({H.name})",
        presentation=B,
        comult=comultiplication(images),
        counit_zero=counit,
        expected={"rank": G.expected.get("rank", 0) + H.expected.get("rank", 0),
                  "weyl_order": G.expected.get("weyl_order", 1)
                  * H.expected.get("weyl_order", 1)},
    )


# ---------------------------------------------------------------------------
# Selector parsing for the CLI
# ---------------------------------------------------------------------------


def from_selector(selector: str, files: Optional[dict] = None) -> GroupModel:
    """Resolve a model selector such as sl:3, torus:2, or psl2-adj."""
    parts = selector.split(":")
    head = parts[0]
    if head == "sl" and len(parts) == 2:
        return sl(int(parts[1]))
    if head == "gl" and len(parts) == 2:
        return gl(int(parts[1]))
    if head == "sp" and len(parts) == 2:
        return sp(int(parts[1]))
    if head == "so" and len(parts) == 2:
        return so(int(parts[1]))
    if head == "o" and len(parts) == 2:
        return o(int(parts[1]))
    if head == "torus" and len(parts) == 2:
        return torus(int(parts[1]))
    if head == "nstorus" and len(parts) == 1:
        return nonstandard_torus()
    if head == "psl2-conj" and len(parts) == 1:
        return psl2_conj()
    if head == "psl2-adj" and len(parts) == 1:
        return psl2_adjoint()
    if head == "parabolic" and len(parts) == 3:
        return standard_parabolic(int(parts[1]), [int(s) for s in parts[2].split(",")])
    if head == "unipotent" and len(parts) == 3:
        return unipotent_radical(int(parts[1]), [int(s) for s in parts[2].split(",")])
    if head == "levi" and len(parts) == 3:
        return levi(int(parts[1]), [int(s) for s in parts[2].split(",")])
    if head == "const" and len(parts) == 2:
        data = _load_table_file(parts[1], files)
        return constant_group(_table_from_json(data))
    if head == "semidirect" and len(parts) == 2:
        data = _load_table_file(parts[1], files)
        table = _table_from_json(data)
        return semidirect(int(data["rank"]), table, data["exps"])
    raise CatalogError(f"unknown model selector: {selector}")


def _load_table_file(path: str, files: Optional[dict]) -> dict:
    import json

    if files is not None and path in files:
        return files[path]
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def _table_from_json(data: dict) -> GroupTable:
    elements = tuple(data["elements"])
    table = tuple(tuple(int(v) for v in row) for row in data["table"])
    identity = int(data.get("identity", 0))
    return GroupTable(elements, table, identity)
