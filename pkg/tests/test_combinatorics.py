import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from polydet.combinatorics import (
    GuardLimitError,
    cayley_hamilton_coefficient,
    compositions,
    count_distinct_terms,
    enumerate_partition_vectors,
    iterate_permutations,
    iterate_subsets,
    levi_civita,
    multinomial,
)


def test_permutations_n1():
    assert list(iterate_permutations(1)) == [((1,), 1)]


def test_permutations_n3_parity_split():
    perms = list(iterate_permutations(3))
    assert len(perms) == 6
    assert sum(1 for p in perms if p.sign == 1) == 3
    assert sum(1 for p in perms if p.sign == -1) == 3


def test_permutations_n4_signs_cancel():
    perms = list(iterate_permutations(4))
    assert len(perms) == 24
    assert sum(p.sign for p in perms) == 0


def test_permutations_lexicographic():
    mappings = [p.mapping for p in iterate_permutations(3)]
    assert mappings == sorted(mappings)
    assert mappings[0] == (1, 2, 3)


def test_permutations_guard():
    with pytest.raises(GuardLimitError):
        next(iterate_permutations(11))


def test_permutation_sign_matches_levi_civita():
    for n in range(1, 6):
        for perm in iterate_permutations(n):
            assert levi_civita(perm.mapping) == perm.sign


def test_levi_civita_values():
    assert levi_civita((1, 2, 3)) == 1
    assert levi_civita((2, 1, 3)) == -1
    assert levi_civita((1, 1, 2)) == 0


def test_levi_civita_out_of_range():
    with pytest.raises(ValueError):
        levi_civita((0, 1, 2))
    with pytest.raises(ValueError):
        levi_civita((1, 2, 4))


@given(st.lists(st.integers(1, 6), min_size=1, max_size=6))
def test_levi_civita_antisymmetry(indices):
    n = len(indices)
    if any(not 1 <= i <= n for i in indices):
        with pytest.raises(ValueError):
            levi_civita(indices)
        return
    value = levi_civita(indices)
    if n >= 2:
        swapped = list(indices)
        swapped[0], swapped[1] = swapped[1], swapped[0]
        assert levi_civita(swapped) == -value


def test_partition_vectors_n2():
    assert set(enumerate_partition_vectors(2)) == {(2, 0), (0, 1)}


def test_partition_vectors_n3():
    assert set(enumerate_partition_vectors(3)) == {(3, 0, 0), (1, 1, 0), (0, 0, 1)}


def test_partition_vectors_n5_count():
    assert len(enumerate_partition_vectors(5)) == 7


def test_partition_vectors_deterministic_order():
    assert enumerate_partition_vectors(4) == [
        (4, 0, 0, 0),
        (2, 1, 0, 0),
        (1, 0, 1, 0),
        (0, 2, 0, 0),
        (0, 0, 0, 1),
    ]


@given(st.integers(1, 8))
def test_partition_vectors_satisfy_constraint(n):
    vectors = enumerate_partition_vectors(n)
    assert len(set(vectors)) == len(vectors)
    for counts in vectors:
        assert len(counts) == n
        assert sum(k * c for k, c in enumerate(counts, start=1)) == n


def test_coefficients_n2():
    assert cayley_hamilton_coefficient((2, 0)) == Fraction(1, 2)
    assert cayley_hamilton_coefficient((0, 1)) == Fraction(-1, 2)


def test_coefficients_n3():
    assert cayley_hamilton_coefficient((3, 0, 0)) == Fraction(1, 6)
    assert cayley_hamilton_coefficient((1, 1, 0)) == Fraction(-1, 2)
    assert cayley_hamilton_coefficient((0, 0, 1)) == Fraction(1, 3)


def test_coefficient_top_class_n5():
    assert cayley_hamilton_coefficient((0, 0, 0, 0, 1)) == Fraction(1, 5)


def test_coefficient_rejects_bad_vector():
    with pytest.raises(ValueError):
        cayley_hamilton_coefficient((1, 1))
    with pytest.raises(ValueError):
        cayley_hamilton_coefficient((-1, 0, 1))


def test_collapsed_coefficient_set_n4():
    scaled = {counts: cayley_hamilton_coefficient(counts) * 24 for counts in enumerate_partition_vectors(4)}
    assert scaled == {
        (4, 0, 0, 0): 1,
        (2, 1, 0, 0): -6,
        (0, 2, 0, 0): 3,
        (1, 0, 1, 0): 8,
        (0, 0, 0, 1): -6,
    }


def test_collapsed_coefficient_set_n5():
    scaled = {counts: cayley_hamilton_coefficient(counts) * 120 for counts in enumerate_partition_vectors(5)}
    assert scaled == {
        (5, 0, 0, 0, 0): 1,
        (3, 1, 0, 0, 0): -10,
        (2, 0, 1, 0, 0): 20,
        (1, 2, 0, 0, 0): 15,
        (1, 0, 0, 1, 0): -30,
        (0, 1, 1, 0, 0): -20,
        (0, 0, 0, 0, 1): 24,
    }


def test_multinomial_values():
    assert multinomial(2, (1, 1)) == 2
    assert multinomial(3, (1, 1, 1)) == 6
    assert multinomial(3, (2, 1)) == 3
    assert multinomial(4, (4,)) == 1


def test_multinomial_sum_mismatch():
    with pytest.raises(ValueError):
        multinomial(3, (1, 1))
    with pytest.raises(ValueError):
        multinomial(3, (4, -1))


def test_count_distinct_terms_n4():
    assert count_distinct_terms((4, 0, 0, 0)) == 1
    assert count_distinct_terms((2, 1, 0, 0)) == 6
    assert count_distinct_terms((0, 2, 0, 0)) == 3
    assert count_distinct_terms((1, 0, 1, 0)) == 8
    assert count_distinct_terms((0, 0, 0, 1)) == 6


def test_count_distinct_terms_single_trace_class():
    # the full-length trace class always has (n-1)! distinct cyclic words
    for n in range(2, 7):
        counts = tuple([0] * (n - 1) + [1])
        assert count_distinct_terms(counts) == math.factorial(n - 1)


@given(st.integers(1, 7))
def test_count_distinct_terms_always_integer(n):
    for counts in enumerate_partition_vectors(n):
        value = math.factorial(n) * abs(cayley_hamilton_coefficient(counts))
        assert value.denominator == 1
        assert count_distinct_terms(counts) == value


def test_subsets_n2():
    assert list(iterate_subsets(2)) == [(1,), (2,), (1, 2)]


def test_subsets_counts():
    assert len(list(iterate_subsets(3))) == 7
    assert len(list(iterate_subsets(5))) == 31


def test_subsets_guard():
    with pytest.raises(GuardLimitError):
        next(iterate_subsets(25))


def test_compositions():
    assert list(compositions(2, 2)) == [(2, 0), (1, 1), (0, 2)]
    assert list(compositions(3, 1)) == [(3,)]
    assert all(sum(c) == 4 for c in compositions(4, 3))
    assert len(list(compositions(4, 3))) == 15
