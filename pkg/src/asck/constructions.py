"""Scheme builders: thin schemes from group tables, quotients,
restrictions, wreath products, and the coherent (2-dim WL) closure.

Every construction ends with the same two steps: canonical recoloring
(diagonal colors first, then by first cell) and full validation.  A
validation failure here means a bug in the construction, so it is
re-raised under a construction-specific error type.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import Scheme, as_color_matrix, canonical_recolor, normalize_colors, validate
from .digraph import Digraph
from .errors import (
    InvalidGroupTable,
    NotABlock,
    NotASchemeEquivalence,
    QuotientValidationFailed,
    RestrictionValidationFailed,
    SchemeError,
    WreathValidationFailed,
)
from .lattice import Equivalence, equivalence_from_colors, generated_closed_set


# -- group tables -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CayleyTable:
    """A verified group multiplication table over elements 0..m-1."""

    m: int
    table: np.ndarray
    identity: int

    def inverse(self, g: int) -> int:
        return int(np.argmax(self.table[g] == self.identity))


def cayley_table(table: Sequence[Sequence[int]] | np.ndarray) -> CayleyTable:
    """Check that a multiplication table is a group and wrap it."""
    arr = np.asarray(table, dtype=np.int64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise InvalidGroupTable(f"expected a nonempty square table, got {arr.shape}")
    m = arr.shape[0]
    if arr.min() < 0 or arr.max() >= m:
        raise InvalidGroupTable("entries must be element ids 0..m-1")
    ids = np.arange(m)
    for g in range(m):
        if sorted(arr[g]) != list(ids) or sorted(arr[:, g]) != list(ids):
            raise InvalidGroupTable(f"row or column {g} is not a permutation")
    identity = -1
    for e in range(m):
        if np.array_equal(arr[e], ids) and np.array_equal(arr[:, e], ids):
            identity = e
            break
    if identity < 0:
        raise InvalidGroupTable("no identity element")
    if not np.array_equal(arr[arr], arr[:, arr]):
        raise InvalidGroupTable("multiplication is not associative")
    arr = arr.copy()
    arr.setflags(write=False)
    return CayleyTable(m, arr, identity)


def cyclic_table(m: int) -> CayleyTable:
    """The cyclic group of order m."""
    if m < 1:
        raise InvalidGroupTable(f"order must be positive, got {m}")
    g = np.arange(m)
    return cayley_table((g[:, None] + g[None, :]) % m)


def direct_product(a: CayleyTable, b: CayleyTable) -> CayleyTable:
    """Direct product; element (g, h) gets id g * b.m + h."""
    ga, ha = np.divmod(np.arange(a.m * b.m), b.m)
    prod = a.table[np.ix_(ga, ga)] * b.m + b.table[np.ix_(ha, ha)]
    return cayley_table(prod)


def dihedral_table(k: int) -> CayleyTable:
    """The dihedral group of order 2k; element a*k + i encodes flip^a rot^i."""
    if k < 1:
        raise InvalidGroupTable(f"rotation order must be positive, got {k}")
    m = 2 * k
    arr = np.zeros((m, m), dtype=np.int64)
    for x in range(m):
        a, i = divmod(x, k)
        for y in range(m):
            b, j = divmod(y, k)
            rot = (i + j) % k if a == 0 else (i - j) % k
            arr[x, y] = ((a + b) % 2) * k + rot
    return cayley_table(arr)


# -- basic builders -----------------------------------------------------------


def thin_scheme(table: CayleyTable) -> Scheme:
    """The scheme whose color of (u, v) is the group element inv(u) * v.

    Every color has degree 1 and the colors form a group isomorphic to
    the input, so the result is regular.
    """
    inv = np.array([table.inverse(g) for g in range(table.m)])
    return validate(canonical_recolor(table.table[inv]))


def rank_two_scheme(n: int) -> Scheme:
    """Diagonal plus everything-else; the unique rank-2 scheme on n >= 2 points."""
    if n < 2:
        raise SchemeError(f"rank-2 scheme needs at least 2 points, got {n}")
    return validate(np.ones((n, n), dtype=np.int64) - np.eye(n, dtype=np.int64))


# -- quotient and restriction -------------------------------------------------


def quotient(scheme: Scheme, e: Equivalence) -> Scheme:
    """Scheme on the classes of e; the color of a class pair (X, Y) is
    the set of original colors occurring inside X x Y.

    Distinct colors always induce identical-or-disjoint class-pair
    relations; this is re-checked and a violation (or a validation
    failure of the result) raises QuotientValidationFailed.
    """
    cached = scheme._quotients.get(e.classes)
    if cached is not None:
        return cached
    base = equivalence_from_colors(scheme, e.colors)
    if base.classes != e.classes:
        raise NotASchemeEquivalence(
            "classes are not the classes of the color union")
    classes = e.classes
    k = len(classes)
    raw = np.zeros((k, k), dtype=np.int64)
    ids: dict[frozenset[int], int] = {}
    seen_in: dict[int, frozenset[int]] = {}
    for x in range(k):
        for y in range(k):
            block = frozenset(
                int(c) for c in np.unique(
                    scheme.matrix[np.ix_(classes[x], classes[y])]))
            if block not in ids:
                ids[block] = len(ids)
            raw[x, y] = ids[block]
            for c in block:
                prev = seen_in.setdefault(c, block)
                if prev != block:
                    raise QuotientValidationFailed(
                        f"color {c} occurs in distinct class-pair color sets "
                        f"{sorted(prev)} and {sorted(block)}")
    try:
        result = validate(canonical_recolor(raw))
    except SchemeError as exc:
        raise QuotientValidationFailed(str(exc)) from exc
    scheme._quotients[e.classes] = result
    return result


def is_block(scheme: Scheme, points: Sequence[int]) -> bool:
    """Whether the point set is a class of some scheme equivalence or a fiber.

    For a homogeneous scheme this is decided exactly: the set is a block
    iff it is a class of the equivalence generated by the colors found
    inside it.  For non-homogeneous schemes only fibers, singletons and
    the full point set are recognized (their equivalence lattices are
    not enumerated here).
    """
    pts = sorted({int(p) for p in points})
    if not pts or pts[0] < 0 or pts[-1] >= scheme.n:
        return False
    if len(pts) == scheme.n or len(pts) == 1:
        return True
    if tuple(pts) in scheme.fibers:
        return True
    if not scheme.is_homogeneous:
        return False
    inside = {int(c) for c in np.unique(scheme.matrix[np.ix_(pts, pts)])}
    closed = generated_closed_set(scheme, inside)
    eq = equivalence_from_colors(scheme, closed.colors)
    return tuple(pts) in eq.classes


def restriction(scheme: Scheme, points: Sequence[int]) -> Scheme:
    """The induced scheme on a block or fiber, canonically recolored."""
    pts = sorted({int(p) for p in points})
    if not pts:
        raise NotABlock("empty point set")
    if pts[0] < 0 or pts[-1] >= scheme.n:
        raise NotABlock(f"points out of range 0..{scheme.n - 1}")
    cached = scheme._restrictions.get(tuple(pts))
    if cached is not None:
        return cached
    if not is_block(scheme, pts):
        raise NotABlock(f"{pts} is not a class of any scheme equivalence")
    sub = scheme.matrix[np.ix_(pts, pts)]
    try:
        result = validate(canonical_recolor(sub))
    except SchemeError as exc:
        raise RestrictionValidationFailed(str(exc)) from exc
    scheme._restrictions[tuple(pts)] = result
    return result


# -- wreath product -----------------------------------------------------------


def wreath(inner: Scheme, outer: Scheme) -> Scheme:
    """Wreath product: inner scheme within classes, outer between them.

    Point (u1, u2) gets id u2 * inner.n + u1, so each outer point owns a
    contiguous block of inner copies.
    """
    inner.require_homogeneous()
    outer.require_homogeneous()
    n1, n2 = inner.n, outer.n
    n = n1 * n2
    raw = np.zeros((n, n), dtype=np.int64)
    for u2 in range(n2):
        for v2 in range(n2):
            block = np.s_[u2 * n1:(u2 + 1) * n1, v2 * n1:(v2 + 1) * n1]
            if u2 == v2:
                raw[block] = inner.matrix
            else:
                raw[block] = inner.r + outer.matrix[u2, v2]
    try:
        return validate(canonical_recolor(raw))
    except SchemeError as exc:
        raise WreathValidationFailed(str(exc)) from exc


# -- coherent closure ---------------------------------------------------------


def digraph_color_matrix(g: Digraph) -> np.ndarray:
    """Encode a digraph as a color matrix for the coherent closure.

    Distinguishes diagonal cells, loops, arcs, and off-diagonal
    non-arcs; unused classes are squeezed out to keep ids contiguous.
    """
    if g.n == 0:
        raise SchemeError("cannot encode an empty digraph")
    arr = np.where(np.eye(g.n, dtype=bool), 0, 3)
    for u, v in g.arcs:
        arr[u, v] = 1 if u == v else 2
    normalized, _ = normalize_colors(arr)
    return normalized


def wl_closure(matrix: Sequence[Sequence[int]] | np.ndarray) -> Scheme:
    """The coarsest coherent configuration refining the given coloring.

    Cells are first split by (color, transposed color, on-diagonal);
    then each round recolors a cell by its old color together with the
    sorted multiset of two-step color pairs through every intermediate
    point.  New ids follow the lexicographic order of those signatures,
    so the output is reproducible.  The loop stops when a round no
    longer increases the color count; the fixpoint always satisfies the
    configuration axioms.
    """
    arr = as_color_matrix(matrix)
    n = arr.shape[0]
    first = np.stack(
        [arr.ravel(), arr.T.ravel(), np.eye(n, dtype=np.int64).ravel()], axis=1)
    _, inverse = np.unique(first, axis=0, return_inverse=True)
    cur = inverse.reshape(n, n).astype(np.int64)
    while True:
        r = int(cur.max()) + 1
        sig = np.empty((n * n, n + 1), dtype=np.int64)
        sig[:, 0] = cur.ravel()
        for u in range(n):
            codes = np.sort(cur[u][:, None] * r + cur, axis=0)
            sig[u * n:(u + 1) * n, 1:] = codes.T
        _, inverse = np.unique(sig, axis=0, return_inverse=True)
        if int(inverse.max()) + 1 == r:
            break
        cur = inverse.reshape(n, n).astype(np.int64)
    return validate(canonical_recolor(cur))
