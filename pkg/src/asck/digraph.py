"""Digraphs of basis relations and the periodicity machinery.

Vertices are contiguous ids 0..n-1; digraphs extracted from a scheme
carry a label tuple mapping those ids back to the scheme's points.
All functions are pure and deterministic: components come out sorted by
least vertex, partitions break ties toward the smallest shift.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Iterable

import numpy as np

from .core import Scheme
from .errors import (
    DiagonalColor,
    HasLoops,
    InvalidP,
    NoArcs,
    NotStronglyConnected,
    NotSymmetric,
    SchemeError,
)

# Exhaustive shift-cover search is attempted only below this many
# combinations; see cyclically_p_partite.
SHIFT_SEARCH_LIMIT = 10 ** 6


@dataclass(frozen=True)
class Digraph:
    """A finite digraph on vertices 0..n-1 with an arc set.

    ``labels`` optionally names each vertex (e.g. the scheme point it
    came from); it does not affect any algorithm.
    """

    n: int
    arcs: frozenset[tuple[int, int]]
    labels: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.n < 0:
            raise SchemeError(f"vertex count must be non-negative, got {self.n}")
        for u, v in self.arcs:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise SchemeError(f"arc ({u},{v}) out of range for {self.n} vertices")
        if self.labels is not None and len(self.labels) != self.n:
            raise SchemeError("labels length differs from vertex count")

    @staticmethod
    def from_arcs(n: int, arcs: Iterable[tuple[int, int]],
                  labels: Iterable[int] | None = None) -> "Digraph":
        return Digraph(n, frozenset((int(u), int(v)) for u, v in arcs),
                       None if labels is None else tuple(labels))

    @property
    def m(self) -> int:
        return len(self.arcs)

    @cached_property
    def out_adj(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.arcs:
            adj[u].append(v)
        return tuple(tuple(sorted(vs)) for vs in adj)

    @cached_property
    def in_adj(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.arcs:
            adj[v].append(u)
        return tuple(tuple(sorted(us)) for us in adj)

    def sorted_arcs(self) -> list[tuple[int, int]]:
        return sorted(self.arcs)

    def is_symmetric(self) -> bool:
        return all((v, u) in self.arcs for u, v in self.arcs)

    def has_loops(self) -> bool:
        return any(u == v for u, v in self.arcs)


@dataclass(frozen=True)
class CyclicPartition:
    """Ordered classes V_0..V_{p-1} witnessing cyclic p-partiteness."""

    p: int
    classes: tuple[tuple[int, ...], ...]

    def check(self, g: Digraph) -> None:
        """Raise if this partition is not a valid witness for g."""
        if self.p < 2 or len(self.classes) != self.p:
            raise SchemeError(f"expected {self.p} classes, got {len(self.classes)}")
        seen: dict[int, int] = {}
        for idx, cls in enumerate(self.classes):
            if not cls:
                raise SchemeError(f"class {idx} is empty")
            for v in cls:
                if v in seen:
                    raise SchemeError(f"vertex {v} in classes {seen[v]} and {idx}")
                seen[v] = idx
        if len(seen) != g.n:
            raise SchemeError("classes do not cover the vertex set")
        for u, v in g.arcs:
            if seen[v] != (seen[u] + 1) % self.p:
                raise SchemeError(
                    f"arc ({u},{v}) goes from class {seen[u]} to {seen[v]}")

    def class_of(self) -> dict[int, int]:
        return {v: i for i, cls in enumerate(self.classes) for v in cls}


# -- extraction from schemes ----------------------------------------------


def basis_digraph(scheme: Scheme, color: int) -> Digraph:
    """The digraph of one basis relation, on the relation's support.

    Vertices are reindexed 0..k-1; labels give the original points.
    """
    scheme.check_color(color)
    cells = np.argwhere(scheme.matrix == color)
    support = sorted({int(p) for p in cells.ravel()})
    index = {p: i for i, p in enumerate(support)}
    arcs = frozenset((index[int(u)], index[int(v)]) for u, v in cells)
    return Digraph(len(support), arcs, tuple(support))


def basis_graph(scheme: Scheme, color: int) -> Digraph:
    """The symmetric loopless digraph of a color joined with its transpose.

    Diagonal colors are rejected: their graph would be empty.
    """
    scheme.check_color(color)
    if scheme.is_diagonal_color(color):
        raise DiagonalColor(color)
    mask = (scheme.matrix == color) | (scheme.matrix == scheme.transpose(color))
    cells = np.argwhere(mask)
    support = sorted({int(p) for p in cells.ravel()})
    index = {p: i for i, p in enumerate(support)}
    arcs = set()
    for u, v in cells:
        a, b = index[int(u)], index[int(v)]
        arcs.add((a, b))
        arcs.add((b, a))
    return Digraph(len(support), frozenset(arcs), tuple(support))


# -- connectivity -----------------------------------------------------------


def strongly_connected_components(g: Digraph) -> list[tuple[int, ...]]:
    """Tarjan's algorithm, iterative; components sorted by least vertex."""
    n = g.n
    adj = g.out_adj
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[tuple[int, ...]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work: list[tuple[int, int]] = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            for i in range(pi, len(adj[v])):
                w = adj[v][i]
                if index[w] == -1:
                    work[-1] = (v, i + 1)
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(tuple(sorted(comp)))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    comps.sort(key=lambda c: c[0])
    return comps


def is_strongly_connected(g: Digraph) -> bool:
    return len(strongly_connected_components(g)) == 1


def weakly_connected_components(g: Digraph) -> list[tuple[int, ...]]:
    """Components of the symmetrized digraph, sorted by least vertex."""
    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in g.arcs:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
    groups: dict[int, list[int]] = {}
    for v in range(g.n):
        groups.setdefault(find(v), []).append(v)
    return [tuple(sorted(groups[root])) for root in sorted(groups)]


# -- period and cyclic partitions -------------------------------------------


def period(g: Digraph) -> int:
    """gcd of all directed cycle lengths of a strongly connected digraph.

    Computed as the gcd over arcs (u,v) of level(u) + 1 - level(v), with
    levels taken from a BFS tree; every cycle length is an integer
    combination of these arc defects and vice versa.
    """
    if not is_strongly_connected(g):
        raise NotStronglyConnected(
            f"{len(strongly_connected_components(g))} strong components")
    if g.m == 0:
        raise NoArcs("period is undefined without arcs")
    level = [-1] * g.n
    level[0] = 0
    queue = [0]
    while queue:
        nxt: list[int] = []
        for u in queue:
            for v in g.out_adj[u]:
                if level[v] == -1:
                    level[v] = level[u] + 1
                    nxt.append(v)
        queue = nxt
    result = 0
    for u, v in g.sorted_arcs():
        result = gcd(result, abs(level[u] + 1 - level[v]))
    return result


def _component_labels(g: Digraph, p: int,
                      component: tuple[int, ...]) -> dict[int, int] | None:
    """Propagate labels mod p over one weak component; None on conflict."""
    labels = {component[0]: 0}
    queue = [component[0]]
    while queue:
        nxt: list[int] = []
        for u in queue:
            for v in g.out_adj[u]:
                want = (labels[u] + 1) % p
                if v in labels:
                    if labels[v] != want:
                        return None
                else:
                    labels[v] = want
                    nxt.append(v)
            for w in g.in_adj[u]:
                want = (labels[u] - 1) % p
                if w in labels:
                    if labels[w] != want:
                        return None
                else:
                    labels[w] = want
                    nxt.append(w)
        queue = nxt
    return labels


def _rotate_mask(mask: int, shift: int, p: int) -> int:
    full = (1 << p) - 1
    shift %= p
    return ((mask << shift) | (mask >> (p - shift))) & full if shift else mask


def _cover_shifts(masks: list[int], p: int) -> list[int] | None:
    """Choose a shift per mask so the rotated masks cover all p residues.

    Exact subset-cover dynamic program over the 2^p residue states for
    p <= 20; larger p falls back to exhaustive search when the
    combination count permits, then to a greedy cover.  Returns None
    when no assignment covers every residue.
    """
    full = (1 << p) - 1
    if any(m == full for m in masks):
        return [0] * len(masks)

    if p <= 20:
        # state -> (prev_state, shift) at the step it was first reached
        layers: list[dict[int, tuple[int, int]]] = [{0: (-1, -1)}]
        for m in masks:
            cur = layers[-1]
            nxt: dict[int, tuple[int, int]] = {}
            for state in sorted(cur):
                for shift in range(p):
                    ns = state | _rotate_mask(m, shift, p)
                    if ns not in nxt:
                        nxt[ns] = (state, shift)
            layers.append(nxt)
        if full not in layers[-1]:
            return None
        shifts = [0] * len(masks)
        state = full
        for i in range(len(masks) - 1, -1, -1):
            prev, shift = layers[i + 1][state]
            shifts[i] = shift
            state = prev
        return shifts

    if p ** len(masks) <= SHIFT_SEARCH_LIMIT:
        def search(i: int, covered: int, acc: list[int]) -> list[int] | None:
            if covered == full:
                return acc + [0] * (len(masks) - i)
            if i == len(masks):
                return None
            for shift in range(p):
                got = search(i + 1, covered | _rotate_mask(masks[i], shift, p), acc + [shift])
                if got is not None:
                    return got
            return None

        return search(0, 0, [])

    # Greedy: take the shift adding the most new residues at each step.
    covered = 0
    shifts = []
    for m in masks:
        best_shift, best_gain = 0, -1
        for shift in range(p):
            gain = bin((covered | _rotate_mask(m, shift, p)) & ~covered).count("1")
            if gain > best_gain:
                best_shift, best_gain = shift, gain
        shifts.append(best_shift)
        covered |= _rotate_mask(m, best_shift, p)
    return shifts if covered == full else None


def cyclically_p_partite(g: Digraph, p: int) -> CyclicPartition | None:
    """A witness partition into p cyclic classes, or None if none exists.

    Labels are propagated mod p within each weak component; a conflict
    anywhere means no partition.  Component labelings are unique up to a
    shift, so the remaining freedom is a shift per component, chosen so
    every residue class ends up nonempty.
    """
    if p < 2:
        raise InvalidP(p)
    if g.n == 0:
        return None
    components = weakly_connected_components(g)
    all_labels: list[dict[int, int]] = []
    masks: list[int] = []
    for comp in components:
        labels = _component_labels(g, p, comp)
        if labels is None:
            return None
        all_labels.append(labels)
        mask = 0
        for value in labels.values():
            mask |= 1 << value
        masks.append(mask)
    shifts = _cover_shifts(masks, p)
    if shifts is None:
        return None
    classes: list[list[int]] = [[] for _ in range(p)]
    for labels, shift in zip(all_labels, shifts):
        for v, value in labels.items():
            classes[(value + shift) % p].append(v)
    partition = CyclicPartition(p, tuple(tuple(sorted(c)) for c in classes))
    partition.check(g)
    return partition


# -- bipartiteness -----------------------------------------------------------


def is_bipartite(g: Digraph) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """2-coloring of a symmetric loopless digraph, or None.

    Both classes must be nonempty for a positive answer.  Isolated
    vertices are appended (in ascending order) to whichever class is
    currently smaller, class 0 on ties.
    """
    for u, v in g.sorted_arcs():
        if u == v:
            raise HasLoops(u)
        if (v, u) not in g.arcs:
            raise NotSymmetric((u, v))
    side = [-1] * g.n
    for root in range(g.n):
        if side[root] != -1 or not g.out_adj[root]:
            continue
        side[root] = 0
        queue = [root]
        while queue:
            nxt: list[int] = []
            for u in queue:
                for v in g.out_adj[u]:
                    if side[v] == -1:
                        side[v] = 1 - side[u]
                        nxt.append(v)
                    elif side[v] == side[u]:
                        return None
            queue = nxt
    counts = [side.count(0), side.count(1)]
    for v in range(g.n):
        if side[v] == -1:
            cls = 0 if counts[0] <= counts[1] else 1
            side[v] = cls
            counts[cls] += 1
    if counts[0] == 0 or counts[1] == 0:
        return None
    zero = tuple(v for v in range(g.n) if side[v] == 0)
    one = tuple(v for v in range(g.n) if side[v] == 1)
    return zero, one
