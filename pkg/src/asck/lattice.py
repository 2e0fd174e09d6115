"""Closed color sets, scheme equivalences, and the thin radical.

A closed set contains the diagonal, its own transposes, and every color
reachable by composing two members; the union of its relations is then
an equivalence relation on the point set.  The full lattice is
enumerated from single-color generators closed under pairwise joins,
which reaches every closed set without scanning all 2^r subsets.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import numpy as np

from .core import Scheme
from .digraph import basis_digraph, weakly_connected_components
from .errors import (
    NotASchemeEquivalence,
    NotThinElement,
    RankTooLarge,
    SchemeError,
    TooFewPoints,
)

# Full lattice enumeration is refused above this rank.
RANK_CAP = 24


@dataclass(frozen=True, eq=False)
class ClosedSet:
    """A transpose- and composition-closed color set containing the diagonal."""

    scheme: Scheme
    colors: frozenset[int]

    def __contains__(self, color: int) -> bool:
        return color in self.colors

    def __iter__(self):
        return iter(sorted(self.colors))

    def __len__(self) -> int:
        return len(self.colors)

    def __eq__(self, other) -> bool:
        return (isinstance(other, ClosedSet) and self.scheme is other.scheme
                and self.colors == other.colors)

    def __hash__(self) -> int:
        return hash((id(self.scheme), self.colors))

    def check(self) -> None:
        """Raise if the three closure invariants fail (used by tests)."""
        s = self.scheme
        missing = set(s.diagonal_colors) - self.colors
        if missing:
            raise SchemeError(f"diagonal colors {sorted(missing)} missing")
        for c in self.colors:
            if s.transpose(c) not in self.colors:
                raise SchemeError(f"transpose of {c} missing")
        for a in self.colors:
            for b in self.colors:
                extra = set(s.composition_colors(a, b)) - self.colors
                if extra:
                    raise SchemeError(
                        f"composition {a}*{b} leaves the set via {sorted(extra)}")


@dataclass(frozen=True, eq=False)
class Equivalence:
    """A partition of the points whose pair relation is a union of colors.

    Equality is by class partition (same scheme object); the color set
    is carried along and always determines, and is determined by, the
    partition.
    """

    scheme: Scheme
    classes: tuple[tuple[int, ...], ...]
    colors: frozenset[int]

    def __eq__(self, other) -> bool:
        return (isinstance(other, Equivalence) and self.scheme is other.scheme
                and self.classes == other.classes)

    def __hash__(self) -> int:
        return hash((id(self.scheme), self.classes))

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    @property
    def is_discrete(self) -> bool:
        return all(len(c) == 1 for c in self.classes)

    @property
    def is_full(self) -> bool:
        return len(self.classes) == 1

    def class_of(self, point: int) -> int:
        for i, cls in enumerate(self.classes):
            if point in cls:
                return i
        raise SchemeError(f"point {point} not in the support")

    def closed_set(self) -> ClosedSet:
        return ClosedSet(self.scheme, self.colors)


def generated_closed_set(scheme: Scheme, seed: Iterable[int]) -> ClosedSet:
    """Smallest closed set containing the seed colors."""
    scheme.require_homogeneous()
    colors = {scheme.check_color(c) for c in seed}
    colors.update(scheme.diagonal_colors)
    done: set[tuple[int, int]] = set()
    while True:
        for c in list(colors):
            colors.add(scheme.transpose(c))
        pending = [(a, b) for a in colors for b in colors if (a, b) not in done]
        if not pending:
            break
        for a, b in pending:
            done.add((a, b))
            colors.update(scheme.composition_colors(a, b))
    return ClosedSet(scheme, frozenset(colors))


def equivalence_from_colors(scheme: Scheme, colors: Iterable[int]) -> Equivalence:
    """The equivalence whose pair relation is the union of the given colors.

    Raises NotASchemeEquivalence when that union is not reflexive,
    symmetric, and transitive on the whole point set.
    """
    colorset = frozenset(scheme.check_color(c) for c in colors)
    member = np.isin(scheme.matrix, sorted(colorset))
    if not member.diagonal().all():
        raise NotASchemeEquivalence("union of relations is not reflexive")
    if not np.array_equal(member, member.T):
        raise NotASchemeEquivalence("union of relations is not symmetric")
    closure = (member.astype(np.float64) @ member.astype(np.float64)) > 0
    if not np.array_equal(closure, member):
        raise NotASchemeEquivalence("union of relations is not transitive")
    seen: set[int] = set()
    classes: list[tuple[int, ...]] = []
    for u in range(scheme.n):
        if u in seen:
            continue
        cls = tuple(int(v) for v in np.nonzero(member[u])[0])
        classes.append(cls)
        seen.update(cls)
    return Equivalence(scheme, tuple(classes), colorset)


def equivalence_from_partition(scheme: Scheme,
                               classes: Iterable[Iterable[int]]) -> Equivalence:
    """Build an Equivalence from explicit classes, verifying both that the
    classes partition the points and that their pair relation is a union
    of colors."""
    normalized = tuple(tuple(sorted(int(p) for p in cls)) for cls in classes)
    if any(not cls for cls in normalized):
        raise NotASchemeEquivalence("classes must be nonempty")
    normalized = tuple(sorted(normalized, key=lambda c: c[0]))
    flat = [p for cls in normalized for p in cls]
    if sorted(flat) != list(range(scheme.n)):
        raise NotASchemeEquivalence("classes do not partition the point set")
    member = np.zeros((scheme.n, scheme.n), dtype=bool)
    for cls in normalized:
        member[np.ix_(cls, cls)] = True
    colorset = {int(c) for c in np.unique(scheme.matrix[member])}
    outside = {int(c) for c in np.unique(scheme.matrix[~member])} if (~member).any() else set()
    overlap = colorset & outside
    if overlap:
        raise NotASchemeEquivalence(
            f"colors {sorted(overlap)} cross class boundaries")
    return Equivalence(scheme, normalized, frozenset(colorset))


def generated_equivalence(scheme: Scheme, color: int) -> Equivalence:
    """Smallest scheme equivalence whose relation contains the color.

    Its classes coincide with the weakly connected components of the
    color's basis digraph; both are computed and compared.
    """
    closed = generated_closed_set(scheme, {color})
    eq = equivalence_from_colors(scheme, closed.colors)
    g = basis_digraph(scheme, color)
    assert g.labels is not None
    components = tuple(
        tuple(g.labels[v] for v in comp) for comp in weakly_connected_components(g))
    uncovered = sorted(set(range(scheme.n)) - {p for comp in components for p in comp})
    components = tuple(sorted(components + tuple((p,) for p in uncovered)))
    if components != tuple(sorted(eq.classes)):
        raise SchemeError(
            f"closure classes {eq.classes} disagree with digraph components "
            f"{components} for color {color}")
    return eq


def all_equivalences(scheme: Scheme) -> list[Equivalence]:
    """Every scheme equivalence, discrete and full included.

    Closed sets are generated from single colors and closed under
    pairwise joins; the result is sorted by color-set size, then by the
    sorted color ids.
    """
    scheme.require_homogeneous()
    if scheme.r > RANK_CAP:
        raise RankTooLarge(scheme.r, RANK_CAP)
    if scheme._equivalences is not None:
        return list(scheme._equivalences)
    family: set[frozenset[int]] = {
        generated_closed_set(scheme, {c}).colors for c in range(scheme.r)}
    while True:
        joins = {
            generated_closed_set(scheme, a | b).colors
            for a, b in combinations(sorted(family, key=sorted), 2)}
        if joins <= family:
            break
        family |= joins
    eqs = [equivalence_from_colors(scheme, colors) for colors in family]
    if len({e.classes for e in eqs}) != len(family):
        raise SchemeError("distinct closed sets produced equal partitions")
    eqs.sort(key=lambda e: (len(e.colors), sorted(e.colors)))
    scheme._equivalences = eqs
    return list(eqs)


def _proper(eqs: list[Equivalence]) -> list[Equivalence]:
    return [e for e in eqs if not e.is_discrete and not e.is_full]


def minimal_equivalences(scheme: Scheme) -> list[Equivalence]:
    """Minimal proper equivalences (discrete and full excluded).

    Each one is also generated by a single non-diagonal color; that is
    re-derived and checked here.
    """
    proper = _proper(all_equivalences(scheme))
    minimal = [e for e in proper
               if not any(f.colors < e.colors for f in proper)]
    for e in minimal:
        if not any(
                generated_closed_set(scheme, {c}).colors == e.colors
                for c in e.colors if not scheme.is_diagonal_color(c)):
            raise SchemeError(
                f"minimal equivalence {sorted(e.colors)} has no single generator")
    return minimal


def maximal_equivalences(scheme: Scheme) -> list[Equivalence]:
    """Maximal proper equivalences (discrete and full excluded)."""
    proper = _proper(all_equivalences(scheme))
    return [e for e in proper
            if not any(e.colors < f.colors for f in proper)]


def maximal_below_full(scheme: Scheme) -> list[Equivalence]:
    """Maximal elements among all equivalences except the full one.

    Unlike maximal_equivalences this keeps the discrete equivalence as a
    candidate, so a primitive scheme reports exactly one maximal
    element.  The block criterion check counts these.
    """
    candidates = [e for e in all_equivalences(scheme) if not e.is_full]
    return [e for e in candidates
            if not any(e.colors < f.colors for f in candidates)]


def is_primitive(scheme: Scheme) -> bool:
    """True when the only equivalences are the discrete and the full one."""
    scheme.require_homogeneous()
    if scheme.n < 2:
        raise TooFewPoints("primitivity needs at least two points")
    return len(all_equivalences(scheme)) == 2


@dataclass(frozen=True, eq=False)
class ThinRadical:
    """The group formed by the degree-1 colors.

    ``table[i][j]`` is the index (into ``elements``) of the composition
    of elements i and j; ``identity`` indexes the diagonal color.
    """

    scheme: Scheme
    elements: tuple[int, ...]
    table: np.ndarray
    identity: int

    def index_of(self, color: int) -> int:
        if color not in self.elements:
            raise NotThinElement(color)
        return self.elements.index(color)

    def inverse(self, color: int) -> int:
        self.index_of(color)
        return self.scheme.transpose(color)


def thin_radical(scheme: Scheme) -> ThinRadical:
    """Collect the degree-1 colors and their composition table."""
    scheme.require_homogeneous()
    elements = tuple(c for c in range(scheme.r) if scheme.degree(c) == 1)
    k = len(elements)
    row0 = scheme.matrix[0]
    table = np.zeros((k, k), dtype=np.int64)
    lookup = {c: i for i, c in enumerate(elements)}
    for i, a in enumerate(elements):
        v = int(np.argmax(row0 == a))
        for j, b in enumerate(elements):
            w = int(np.argmax(scheme.matrix[v] == b))
            prod = int(scheme.matrix[0, w])
            if prod not in lookup:
                raise SchemeError(
                    f"product of thin colors {a},{b} is {prod} of degree "
                    f"{scheme.degree(prod)}")
            table[i, j] = lookup[prod]
    for i in range(k):
        if sorted(table[i]) != list(range(k)) or sorted(table[:, i]) != list(range(k)):
            raise SchemeError("thin radical table is not a group table")
    return ThinRadical(scheme, elements, table,
                       elements.index(scheme.diagonal_colors[0]))


def is_regular(scheme: Scheme) -> bool:
    """True when every color has degree 1 (the scheme is thin)."""
    return len(thin_radical(scheme).elements) == scheme.r


def element_order(radical: ThinRadical, color: int) -> int:
    """Order of a thin color in the radical group: the total degree of
    the closed set it generates."""
    radical.index_of(color)
    closed = generated_closed_set(radical.scheme, {color})
    return sum(radical.scheme.degree(c) for c in closed.colors)
