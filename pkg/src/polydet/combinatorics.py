"""Permutation, subset and partition machinery for the engines and the
symbolic layer.

Index conventions follow the tensor notation: permutation images and
Levi-Civita arguments are one-based.  Partition vectors (n1, ..., nN) count
trace factors of each word length and satisfy n1 + 2*n2 + ... + N*nN = N.
All coefficients are exact ``fractions.Fraction`` values.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Iterator, NamedTuple, Sequence

__all__ = [
    "GuardLimitError",
    "Permutation",
    "iterate_permutations",
    "permutation_sign",
    "levi_civita",
    "enumerate_partition_vectors",
    "cayley_hamilton_coefficient",
    "multinomial",
    "count_distinct_terms",
    "iterate_subsets",
    "compositions",
]

PERMUTATION_MAX_N = 10
SUBSET_MAX_N = 24


class GuardLimitError(ValueError):
    """Raised when an enumeration would blow past its cost guard."""


class Permutation(NamedTuple):
    mapping: tuple[int, ...]  # one-based images, a bijection of {1..n}
    sign: int


def permutation_sign(seq: Sequence[int]) -> int:
    """Parity of a sequence of distinct comparables, by cycle decomposition."""
    order = sorted(range(len(seq)), key=lambda i: seq[i])
    seen = [False] * len(seq)
    sign = 1
    for start in range(len(seq)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def iterate_permutations(n: int) -> Iterator[Permutation]:
    """All n! permutations of {1..n} in lexicographic order, with signs."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n > PERMUTATION_MAX_N:
        raise GuardLimitError(f"permutation stream guarded at n <= {PERMUTATION_MAX_N}, got {n}")
    for mapping in itertools.permutations(range(1, n + 1)):
        yield Permutation(mapping, permutation_sign(mapping))


def levi_civita(indices: Sequence[int]) -> int:
    """Totally antisymmetric symbol on one-based indices.

    Returns 0 when any index repeats, otherwise the permutation parity.
    Indices outside {1..N} (N = len(indices)) raise ValueError.
    """
    n = len(indices)
    for ix in indices:
        if not 1 <= ix <= n:
            raise ValueError(f"index {ix} out of range 1..{n}")
    seen = 0
    for ix in indices:
        bit = 1 << ix
        if seen & bit:
            return 0
        seen |= bit
    return permutation_sign(indices)


def enumerate_partition_vectors(n: int) -> list[tuple[int, ...]]:
    """All (n1, ..., nN) with sum k*nk = N, as the integer partitions of N.

    Deterministic order: descending number of parts, then descending
    lexicographic on the count vector.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    found: list[tuple[int, ...]] = []

    def fill(rest: int, k: int, counts: list[int]) -> None:
        if k > n:
            if rest == 0:
                found.append(tuple(counts))
            return
        max_ct = rest // k
        for ct in range(max_ct + 1):
            counts.append(ct)
            fill(rest - k * ct, k + 1, counts)
            counts.pop()

    fill(n, 1, [])
    found.sort(key=lambda c: (-sum(c), tuple(-x for x in c)))
    return found


def _validate_partition_vector(counts: Sequence[int]) -> int:
    n = len(counts)
    if n < 1 or any(c < 0 for c in counts):
        raise ValueError(f"invalid partition vector {tuple(counts)}")
    if sum((k + 1) * c for k, c in enumerate(counts)) != n:
        raise ValueError(f"partition vector {tuple(counts)} does not satisfy sum k*nk = {n}")
    return n


def cayley_hamilton_coefficient(counts: Sequence[int]) -> Fraction:
    """Exact trace-expansion coefficient of a partition vector.

    C = (-1)^(n1+...+nN+N) / (1^n1 * 2^n2 * ... * N^nN * n1! * ... * nN!).
    """
    n = _validate_partition_vector(counts)
    denom = 1
    for k, c in enumerate(counts, start=1):
        denom *= k**c * math.factorial(c)
    sign = -1 if (sum(counts) + n) % 2 else 1
    return Fraction(sign, denom)


def multinomial(n: int, parts: Sequence[int]) -> int:
    """n! / (k1! k2! ... kr!) for non-negative parts summing to n."""
    if any(p < 0 for p in parts):
        raise ValueError(f"parts must be non-negative, got {tuple(parts)}")
    if sum(parts) != n:
        raise ValueError(f"parts {tuple(parts)} do not sum to {n}")
    out = math.factorial(n)
    for p in parts:
        out //= math.factorial(p)
    return out


def count_distinct_terms(counts: Sequence[int]) -> int:
    """Number of distinct trace monomials in the class of a partition vector.

    Equals N! * |C| where C is the class coefficient; always an integer.
    """
    n = _validate_partition_vector(counts)
    value = math.factorial(n) * abs(cayley_hamilton_coefficient(counts))
    assert value.denominator == 1
    return int(value)


def iterate_subsets(n: int) -> Iterator[tuple[int, ...]]:
    """All 2^n - 1 non-empty subsets of {1..n} as sorted index tuples.

    Deterministic bit order: subsets are enumerated by the integer value of
    their bitmask (bit i-1 encodes membership of index i).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n > SUBSET_MAX_N:
        raise GuardLimitError(f"subset stream guarded at n <= {SUBSET_MAX_N}, got {n}")
    for mask in range(1, 1 << n):
        yield tuple(i + 1 for i in range(n) if mask >> i & 1)


def compositions(total: int, r: int) -> Iterator[tuple[int, ...]]:
    """All r-tuples of non-negative integers summing to total, lexicographically
    descending (so (total, 0, ..., 0) comes first)."""
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    if r == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, r - 1):
            yield (first,) + rest
