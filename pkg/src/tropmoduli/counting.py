"""Closed-form stratum-expansion counts and the power-of-two lemma.

The number of one-edge expansions of a stable tree has an exact closed
form, summed over vertices; this module evaluates it (big-integer safe)
and provides the exhaustive sweep showing that a sum of three powers of
two, together with the exponent sum, determines the exponent multiset.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass

from .trees import LeggedTree

__all__ = [
    "VertexProfile",
    "per_vertex_partition_count",
    "expansion_count_formula",
    "lemma_power_check",
    "lemma_power_sweep",
    "brute_force_partition_count",
]


@dataclass(frozen=True)
class VertexProfile:
    """The (leg count, valence) pairs of a stable tree's vertices."""

    n: int
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for legs, val in self.pairs:
            if legs + val < 3:
                raise ValueError(f"unstable vertex profile ({legs}, {val})")
        if sum(l for l, _ in self.pairs) != self.n:
            raise ValueError("leg counts must sum to n")
        total_val = sum(v for _, v in self.pairs)
        if total_val != 2 * (len(self.pairs) - 1):
            raise ValueError("valences must sum to twice the edge count")

    @classmethod
    def of_tree(cls, t: LeggedTree) -> "VertexProfile":
        return cls(
            t.n,
            tuple(
                sorted(
                    (t.leg_count(v), t.valence(v)) for v in range(t.num_vertices)
                )
            ),
        )


def per_vertex_partition_count(legs: int, valence: int) -> int:
    """Number of unordered partitions of the legs+edges at one vertex into
    two parts of size >= 2, i.e. (2^k - 2(k+1)) / 2 for k = legs+valence."""
    k = legs + valence
    if k < 3:
        raise ValueError(f"stable vertices have legs + valence >= 3, got {k}")
    return 2 ** (k - 1) - (k + 1)


def brute_force_partition_count(k: int) -> int:
    """Oracle for :func:`per_vertex_partition_count`: enumerate all subsets
    of a k-element set and count unordered 2-part partitions with both
    parts of size >= 2."""
    count = 0
    for bits in range(1 << k):
        size = bits.bit_count()
        if 2 <= size <= k - 2:
            count += 1
    return count // 2


def expansion_count_formula(t: LeggedTree) -> int:
    """Closed form for the number of one-edge expansions of a stable tree:
    the sum over vertices of 2^(legs+valence-1) - (legs+valence+1)."""
    if not t.is_stable:
        raise ValueError("expansion counts are defined for stable trees")
    return sum(
        per_vertex_partition_count(t.leg_count(v), t.valence(v))
        for v in range(t.num_vertices)
    )


def _power_sum(triple) -> int:
    return sum(2 ** a for a in triple)


def lemma_power_check(a, b) -> bool:
    """Check one instance of the power-of-two lemma: given two natural
    triples with equal sums, if their 2-power sums also agree then they
    must be permutations of each other.  Returns False exactly on a
    counterexample."""
    a, b = tuple(a), tuple(b)
    if len(a) != 3 or len(b) != 3:
        raise ValueError("expects triples")
    if any(x < 0 for x in a + b):
        raise ValueError("entries must be natural numbers")
    if sum(a) != sum(b):
        raise ValueError(f"sums differ: {sum(a)} vs {sum(b)}")
    if _power_sum(a) != _power_sum(b):
        return True
    return sorted(a) == sorted(b)


def lemma_power_sweep(bound: int) -> tuple[int, list[tuple[tuple, tuple]]]:
    """Exhaustive sweep over all pairs of triples with entries <= bound and
    equal sums; returns (number of equal-sum pairs covered, counterexamples).

    Both statistics are symmetric, so sweeping sorted triples covers every
    pair.  Within each sum class, pairs with different 2-power sums are
    vacuously consistent; the remaining pairs (equal sum and equal power
    sum) each go through :func:`lemma_power_check`.
    """
    by_sum: dict[int, list[tuple[int, int, int]]] = defaultdict(list)
    for triple in itertools.combinations_with_replacement(range(bound + 1), 3):
        by_sum[sum(triple)].append(triple)
    checked = 0
    violations = []
    for group in by_sum.values():
        checked += len(group) * (len(group) - 1) // 2
        by_power: dict[int, list[tuple[int, int, int]]] = defaultdict(list)
        for triple in group:
            by_power[_power_sum(triple)].append(triple)
        for same_power in by_power.values():
            for a, b in itertools.combinations(same_power, 2):
                if not lemma_power_check(a, b):
                    violations.append((a, b))
    return checked, violations
