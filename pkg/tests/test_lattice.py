from itertools import combinations
from math import gcd

import numpy as np
import pytest

from asck import (
    Digraph,
    all_equivalences,
    basis_digraph,
    cyclic_table,
    digraph_color_matrix,
    dihedral_table,
    direct_product,
    element_order,
    equivalence_from_colors,
    equivalence_from_partition,
    generated_closed_set,
    generated_equivalence,
    is_primitive,
    is_regular,
    maximal_below_full,
    maximal_equivalences,
    minimal_equivalences,
    rank_two_scheme,
    thin_radical,
    thin_scheme,
    validate,
    weakly_connected_components,
    wl_closure,
    wreath,
)
from asck.errors import (
    NotASchemeEquivalence,
    NotHomogeneous,
    NotThinElement,
    RankTooLarge,
    SchemeError,
    TooFewPoints,
)
from asck.lattice import ClosedSet


def z4():
    return thin_scheme(cyclic_table(4))


def divisor_count(m: int) -> int:
    return sum(1 for d in range(1, m + 1) if m % d == 0)


class TestGeneratedClosedSet:
    def test_order_two_color(self):
        s = z4()
        c2 = int(s.matrix[0, 2])
        assert generated_closed_set(s, {c2}).colors == {0, c2}

    def test_generator_color(self):
        s = z4()
        assert generated_closed_set(s, {int(s.matrix[0, 1])}).colors == {0, 1, 2, 3}

    def test_diagonal_seed(self):
        s = z4()
        assert generated_closed_set(s, {0}).colors == {0}

    def test_closure_invariants(self):
        s = thin_scheme(dihedral_table(4))
        for c in range(s.r):
            generated_closed_set(s, {c}).check()

    def test_rejects_non_homogeneous(self):
        g = Digraph.from_arcs(3, [(0, 1), (1, 2)])
        s = wl_closure(digraph_color_matrix(g))
        with pytest.raises(NotHomogeneous):
            generated_closed_set(s, {0})


class TestGeneratedEquivalence:
    def test_connected_color(self):
        s = z4()
        e = generated_equivalence(s, int(s.matrix[0, 1]))
        assert e.classes == ((0, 1, 2, 3),)

    def test_two_class_color(self):
        s = z4()
        e = generated_equivalence(s, int(s.matrix[0, 2]))
        assert e.classes == ((0, 2), (1, 3))
        assert e.class_of(3) == 1

    def test_diagonal_gives_discrete(self):
        e = generated_equivalence(z4(), 0)
        assert e.is_discrete and e.n_classes == 4

    def test_classes_match_weak_components(self, corpus):
        sample = [m for m in corpus if m.scheme.is_homogeneous
                  and m.scheme.r <= 10][:25]
        for member in sample:
            s = member.scheme
            for c in range(s.r):
                e = generated_equivalence(s, c)
                g = basis_digraph(s, c)
                comps = [tuple(g.labels[v] for v in comp)
                         for comp in weakly_connected_components(g)]
                covered = {p for cls in comps for p in cls}
                singletons = [(p,) for p in range(s.n) if p not in covered]
                assert sorted(e.classes) == sorted(comps + singletons)


class TestAllEquivalences:
    def test_cyclic_four(self):
        eqs = all_equivalences(z4())
        assert len(eqs) == 3
        assert sorted(e.n_classes for e in eqs) == [1, 2, 4]

    def test_cyclic_six(self):
        assert len(all_equivalences(thin_scheme(cyclic_table(6)))) == 4

    def test_rank_two_is_primitive(self):
        s = rank_two_scheme(5)
        assert len(all_equivalences(s)) == 2
        assert is_primitive(s)

    def test_divisor_counts(self):
        for m in range(1, 13):
            s = thin_scheme(cyclic_table(m))
            assert len(all_equivalences(s)) == divisor_count(m)

    def test_union_is_equivalence_relation(self):
        for s in (thin_scheme(cyclic_table(12)), thin_scheme(dihedral_table(5))):
            n = s.n
            for e in all_equivalences(s):
                rel = np.isin(s.matrix, list(e.colors))
                assert rel.diagonal().all()
                assert np.array_equal(rel, rel.T)
                assert not ((rel.astype(int) @ rel.astype(int) > 0) & ~rel).any()
                block = np.zeros((n, n), dtype=bool)
                for cls in e.classes:
                    block[np.ix_(cls, cls)] = True
                assert np.array_equal(rel, block)

    def test_rank_cap(self):
        with pytest.raises(RankTooLarge):
            all_equivalences(thin_scheme(cyclic_table(25)))

    def test_one_point(self):
        s = validate([[0]])
        eqs = all_equivalences(s)
        assert len(eqs) == 1 and eqs[0].is_discrete and eqs[0].is_full


class TestMinimalMaximal:
    def test_cyclic_four(self):
        s = z4()
        mins, maxs = minimal_equivalences(s), maximal_equivalences(s)
        assert len(mins) == 1 and len(maxs) == 1
        assert mins[0] == maxs[0] and mins[0].n_classes == 2

    def test_cyclic_six(self):
        s = thin_scheme(cyclic_table(6))
        assert len(minimal_equivalences(s)) == 2
        assert len(maximal_equivalences(s)) == 2

    def test_rank_two_empty(self):
        s = rank_two_scheme(4)
        assert minimal_equivalences(s) == []
        assert maximal_equivalences(s) == []

    def test_one_point_empty(self):
        s = validate([[0]])
        assert minimal_equivalences(s) == []
        assert maximal_equivalences(s) == []

    def test_below_full_counts_discrete(self):
        klein = thin_scheme(direct_product(cyclic_table(2), cyclic_table(2)))
        assert len(maximal_below_full(klein)) == 3
        for p in (2, 3, 5, 7, 11, 13):
            assert len(maximal_below_full(thin_scheme(cyclic_table(p)))) == 1

    def test_wreath_has_unique_proper_equivalence(self):
        w = wreath(thin_scheme(cyclic_table(2)), thin_scheme(cyclic_table(3)))
        assert len(maximal_below_full(w)) == 1
        assert len(minimal_equivalences(w)) == 1


class TestPrimitivity:
    def test_prime_cyclic(self):
        assert is_primitive(thin_scheme(cyclic_table(5)))

    def test_composite_cyclic(self):
        assert not is_primitive(z4())

    def test_rank_two_on_seven(self):
        assert is_primitive(rank_two_scheme(7))

    def test_one_point_rejected(self):
        with pytest.raises(TooFewPoints):
            is_primitive(validate([[0]]))


class TestEquivalenceConstructors:
    def test_from_colors(self):
        s = z4()
        c2 = int(s.matrix[0, 2])
        e = equivalence_from_colors(s, [0, c2])
        assert e.classes == ((0, 2), (1, 3))

    def test_from_colors_rejects_non_closed(self):
        s = z4()
        with pytest.raises(NotASchemeEquivalence):
            equivalence_from_colors(s, [0, int(s.matrix[0, 1])])

    def test_from_partition(self):
        s = z4()
        e = equivalence_from_partition(s, [(0, 2), (1, 3)])
        assert e.colors == {0, int(s.matrix[0, 2])}

    def test_from_partition_rejects_color_split(self):
        with pytest.raises(NotASchemeEquivalence):
            equivalence_from_partition(z4(), [(0, 1), (2, 3)])

    def test_from_partition_rejects_bad_cover(self):
        with pytest.raises(NotASchemeEquivalence):
            equivalence_from_partition(z4(), [(0, 1), (1, 2, 3)])

    def test_from_partition_rejects_empty_class(self):
        with pytest.raises(NotASchemeEquivalence):
            equivalence_from_partition(z4(), [(0, 1, 2, 3), ()])


class TestSubgroupCriterion:
    """A color set of a thin scheme is a subgroup of the radical group
    exactly when its relation union is an equivalence."""

    @staticmethod
    def is_subgroup(radical, subset) -> bool:
        idx = {radical.index_of(c) for c in subset}
        if radical.identity not in idx:
            return False
        return all(int(radical.table[a, b]) in idx for a in idx for b in idx)

    @pytest.mark.parametrize("table", [cyclic_table(6), dihedral_table(3)])
    def test_both_directions(self, table):
        s = thin_scheme(table)
        radical = thin_radical(s)
        non_diag = [c for c in range(s.r) if c != 0]
        eq_partitions = {e.classes for e in all_equivalences(s)}
        for k in range(len(non_diag) + 1):
            for extra in combinations(non_diag, k):
                subset = (0,) + extra
                try:
                    e = equivalence_from_colors(s, subset)
                    union_ok = e.classes in eq_partitions
                except NotASchemeEquivalence:
                    union_ok = False
                assert union_ok == self.is_subgroup(radical, subset)


class TestThinRadical:
    def test_thin_scheme_radical_is_whole_group(self):
        s = z4()
        radical = thin_radical(s)
        assert radical.elements == (0, 1, 2, 3)
        assert is_regular(s)
        assert element_order(radical, int(s.matrix[0, 1])) == 4
        assert element_order(radical, int(s.matrix[0, 2])) == 2

    def test_rank_two_radical_is_trivial(self):
        s = rank_two_scheme(5)
        radical = thin_radical(s)
        assert radical.elements == (0,)
        assert not is_regular(s)
        with pytest.raises(NotThinElement):
            element_order(radical, 1)

    def test_wreath_radical(self):
        w = wreath(thin_scheme(cyclic_table(2)), thin_scheme(cyclic_table(3)))
        radical = thin_radical(w)
        assert len(radical.elements) == 2
        assert element_order(radical, radical.elements[1]) == 2

    def test_identity_has_order_one(self):
        radical = thin_radical(z4())
        assert element_order(radical, 0) == 1

    def test_orders_match_cyclic_group(self):
        for m in range(2, 11):
            s = thin_scheme(cyclic_table(m))
            radical = thin_radical(s)
            for k in range(m):
                shift_order = m // gcd(m, k) if k else 1
                assert element_order(radical, int(s.matrix[0, k])) == shift_order

    def test_inverse_via_transpose(self):
        s = thin_scheme(cyclic_table(5))
        radical = thin_radical(s)
        for c in radical.elements:
            inv = radical.inverse(c)
            i, j = radical.index_of(c), radical.index_of(inv)
            assert int(radical.table[i, j]) == radical.identity


class TestClosedSetCheck:
    def test_broken_set_detected(self):
        s = z4()
        broken = ClosedSet(s, frozenset({0, int(s.matrix[0, 1])}))
        with pytest.raises(SchemeError):
            broken.check()
