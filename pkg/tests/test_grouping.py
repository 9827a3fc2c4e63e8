"""Apportionment and distribution styles."""

from __future__ import annotations

import pytest

from pattern_forge import GroupingSpec, assign_groups, target_counts


def grouping(ratios, style="interspersed", cluster_size=None):
    total = sum(ratios)
    return GroupingSpec(count=len(ratios),
                        ratios=tuple(r / total for r in ratios),
                        distribution_style=style, cluster_size=cluster_size)


def test_even_split():
    assert target_counts(100, (1, 1)) == [50, 50]


def test_one_to_three():
    assert target_counts(100, (1, 3)) == [25, 75]


def test_largest_remainder_tie_goes_to_lower_index():
    # Hand-derived: 10/3 = 3.33.. each; one remainder seat; equal fractional
    # parts, so the lowest index gains it.
    assert target_counts(10, (1, 1, 1)) == [4, 3, 3]


def test_sum_always_n():
    for n in (0, 1, 7, 10, 99, 1000):
        for ratios in ((1, 1), (1, 3), (2, 3, 5), (0.1, 0.9), (5, 1, 1, 1)):
            assert sum(target_counts(n, ratios)) == n


def test_grouped_labels_are_contiguous():
    a = assign_groups(10, grouping([1, 1], "grouped"), None, seed=1)
    assert list(a.labels) == [0] * 5 + [1] * 5
    assert a.achieved_counts == (5, 5)


def test_interspersed_alternates():
    a = assign_groups(100, grouping([1, 1]), None, seed=1)
    assert list(a.labels[:6]) == [0, 1, 0, 1, 0, 1]
    assert a.achieved_counts == (50, 50)
    # Strict alternation away from the trimmed tail.
    changes = sum(1 for x, y in zip(a.labels, a.labels[1:]) if x == y)
    assert changes == 0


def test_interspersed_unequal_ratio_trims_tail():
    a = assign_groups(100, grouping([1, 3]), None, seed=1)
    assert a.achieved_counts == (25, 75)
    # The head keeps the cycle; adjustments happen from the tail.
    assert list(a.labels[:8]) == [0, 1, 0, 1, 0, 1, 0, 1]
    assert list(a.labels[-8:]) == [1] * 8


def test_clustered_blocks():
    a = assign_groups(12, grouping([1, 1], "clustered", cluster_size=3),
                      None, seed=1)
    assert list(a.labels) == [0, 0, 0, 1, 1, 1, 0, 0, 0, 1, 1, 1]


def test_clustered_partial_final_block():
    a = assign_groups(10, grouping([1, 1], "clustered", cluster_size=4),
                      None, seed=1)
    assert a.achieved_counts == (5, 5)
    assert list(a.labels) == [0, 0, 0, 0, 1, 1, 1, 1, 0, 1]


def test_dispersed_is_permutation_of_grouped():
    g = assign_groups(100, grouping([1, 3], "grouped"), None, seed=9)
    d = assign_groups(100, grouping([1, 3], "dispersed"), None, seed=9)
    assert sorted(d.labels) == sorted(g.labels)
    assert d.achieved_counts == g.achieved_counts
    assert list(d.labels) != list(g.labels)


def test_dispersed_deterministic():
    a = assign_groups(100, grouping([1, 1], "dispersed"), None, seed=5)
    b = assign_groups(100, grouping([1, 1], "dispersed"), None, seed=5)
    c = assign_groups(100, grouping([1, 1], "dispersed"), None, seed=6)
    assert list(a.labels) == list(b.labels)
    assert list(a.labels) != list(c.labels)
    assert a.achieved_counts == (50, 50)


def test_order_permutation_applied():
    order = [9, 8, 7, 6, 5, 4, 3, 2, 1, 0]
    a = assign_groups(10, grouping([1, 1], "grouped"), order, seed=1)
    # Rank 0 (label 0) lands on primitive 9, etc.
    assert list(a.labels) == [1] * 5 + [0] * 5


def test_zero_primitives():
    a = assign_groups(0, grouping([1, 1]), None, seed=1)
    assert a.labels == ()
    assert a.achieved_counts == (0, 0)


@pytest.mark.parametrize("style,cluster", [("grouped", None),
                                           ("interspersed", None),
                                           ("dispersed", None),
                                           ("clustered", 3)])
@pytest.mark.parametrize("n", [10, 100, 1000])
@pytest.mark.parametrize("ratios", [(1, 1), (1, 3), (2, 3, 5)])
def test_count_preservation_everywhere(style, cluster, n, ratios):
    a = assign_groups(n, grouping(list(ratios), style, cluster), None, seed=3)
    assert list(a.achieved_counts) == target_counts(n, ratios)
    assert sum(a.achieved_counts) == n


def test_salt_separates_variable_streams():
    a = assign_groups(50, grouping([1, 1], "dispersed"), None, seed=5, salt=1)
    b = assign_groups(50, grouping([1, 1], "dispersed"), None, seed=5, salt=2)
    assert list(a.labels) != list(b.labels)
