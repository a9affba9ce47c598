"""Isomorph-free enumeration of all stable n-legged trees by edge count.

Generation proceeds breadth-first: the single-vertex tree is the unique
0-edge stratum, and every (m+1)-edge stratum arises by splitting one
vertex of an m-edge stratum into two, with canonical forms deduplicating
across parents.  A direct enumerator over pairwise-compatible split sets
serves as an independent cross-check at small n.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .trees import (
    CanonicalForm,
    LeggedTree,
    MIN_MARKINGS,
    Split,
    single_vertex_tree,
    splits_compatible,
)

__all__ = [
    "ENVELOPE_MAX_N",
    "EnvelopeError",
    "StratumCatalog",
    "enumerate_strata",
    "expansions",
    "count_maximal",
    "all_splits",
    "enumerate_by_compatibility",
]

ENVELOPE_MAX_N = 8


class EnvelopeError(RuntimeError):
    """A request exceeds the supported problem size."""


def _check_n(n: int) -> None:
    if n < MIN_MARKINGS:
        raise ValueError(f"need n >= {MIN_MARKINGS}, got {n}")
    if n > ENVELOPE_MAX_N:
        raise EnvelopeError(
            f"n={n} exceeds the supported envelope (n <= {ENVELOPE_MAX_N}, "
            f"{count_maximal(ENVELOPE_MAX_N)} maximal strata)"
        )


@dataclass(frozen=True)
class StratumCatalog:
    """All strata of the moduli space for one n, keyed by dimension
    (= edge count), each dimension sorted by canonical form."""

    n: int
    by_dimension: dict[int, tuple[CanonicalForm, ...]]

    @property
    def max_dimension(self) -> int:
        return max(self.by_dimension)

    def f_vector(self) -> list[int]:
        return [len(self.by_dimension[m]) for m in sorted(self.by_dimension)]

    def total(self) -> int:
        return sum(self.f_vector())

    def all_forms(self):
        for m in sorted(self.by_dimension):
            yield from self.by_dimension[m]


def expansions(t: LeggedTree) -> list[tuple[LeggedTree, int]]:
    """All one-edge expansions of a stable tree, one per unordered
    partition of the legs and incident edges of a vertex into two parts
    of size >= 2.  Each result comes with the index of the new edge;
    contracting it recovers the input tree."""
    out = []
    full = (1 << t.n) - 1
    new_edge_idx = len(t.edges)
    for v in range(t.num_vertices):
        legs_here = sorted(t.leg_sets[v])
        edges_here = sorted(idx for _, idx in t.adjacency[v])
        items = [("leg", j) for j in legs_here] + [("edge", i) for i in edges_here]
        k = len(items)
        if k < 4:
            continue
        # the part keeping items[0] stays at v, so each unordered
        # partition is produced exactly once
        rest = items[1:]
        for size in range(2, k - 1):
            for moved in itertools.combinations(rest, size):
                new_v = t.num_vertices
                edges = list(t.edges)
                legs = list(t.legs)
                for kind, x in moved:
                    if kind == "leg":
                        legs[x - 1] = new_v
                    else:
                        a, b = edges[x]
                        edges[x] = (new_v, b) if a == v else (a, new_v)
                edges.append((v, new_v))
                child = LeggedTree(t.n, t.num_vertices + 1, tuple(edges), tuple(legs))
                out.append((child, new_edge_idx))
    return out


def _expansion_masks(t: LeggedTree):
    """Bitmasks of the new split produced by each one-edge expansion of a
    stable tree, normalized away from marking 1.  Same iteration order as
    :func:`expansions`, but without building the expanded trees."""
    full = (1 << t.n) - 1
    for v in range(t.num_vertices):
        masks = [1 << (j - 1) for j in sorted(t.leg_sets[v])] + [
            t.far_marking_mask(v, idx)
            for idx in sorted(i for _, i in t.adjacency[v])
        ]
        k = len(masks)
        if k < 4:
            continue
        rest = masks[1:]
        for size in range(2, k - 1):
            for moved in itertools.combinations(rest, size):
                new = 0
                for m in moved:
                    new |= m
                yield new ^ full if new & 1 else new


def enumerate_strata(n: int) -> StratumCatalog:
    """Complete, duplicate-free catalog of stable trees for n markings,
    generated by iterated one-edge expansions from the single-vertex
    tree with canonical-form deduplication.

    Children are deduplicated at the split-set level: an expansion adds
    exactly one split to the parent's canonical form, so the child form
    is the parent's masks plus the new edge's mask.  Representative trees
    are only materialized once per new form.
    """
    _check_n(n)
    start = single_vertex_tree(n)
    level: list[CanonicalForm] = [start.canonical_form]
    by_dim: dict[int, tuple[CanonicalForm, ...]] = {}
    # stable trees have at most n-3 edges: summing valence + legs >= 3
    # over V vertices gives 2(V-1) + n >= 3V, so edges = V-1 <= n-3
    max_dim = n - 3
    for dim in range(max_dim + 1):
        by_dim[dim] = tuple(sorted(level, key=CanonicalForm.sort_key))
        if dim == max_dim:
            break
        seen: set[tuple[int, ...]] = set()
        for form in by_dim[dim]:
            parent_masks = tuple(s.mask for s in form.splits)
            for new_mask in _expansion_masks(form.to_tree()):
                key = tuple(
                    sorted(parent_masks + (new_mask,), key=lambda m: (m.bit_count(), m))
                )
                seen.add(key)
        level = [
            CanonicalForm(n, tuple(Split(n, m) for m in key)) for key in sorted(seen)
        ]
    return StratumCatalog(n, by_dim)


def count_maximal(n: int) -> int:
    """(2n-5)!! via the recursion c(3) = 1, c(n) = (2n-5) c(n-1): the
    number of trivalent strata, used as the enumeration oracle."""
    if n < MIN_MARKINGS:
        raise ValueError(f"need n >= {MIN_MARKINGS}, got {n}")
    c = 1
    for k in range(4, n + 1):
        c *= 2 * k - 5
    return c


def all_splits(n: int) -> list[Split]:
    """Every split of {1..n}, in canonical (size, mask) order."""
    out = []
    for size in range(2, n - 1):
        for side in itertools.combinations(range(2, n + 1), size):
            out.append(Split.from_side(n, side))
    return sorted(out, key=Split.sort_key)


def enumerate_by_compatibility(n: int) -> dict[int, tuple[CanonicalForm, ...]]:
    """Independent cross-check of :func:`enumerate_strata`: enumerate all
    pairwise-compatible split sets directly (cliques in the compatibility
    relation), without going through tree expansions.  Intended for
    n <= 6; it is exact but slower at the top of the envelope."""
    _check_n(n)
    splits = all_splits(n)
    compat = [
        [splits_compatible(a, b) for b in splits] for a in splits
    ]
    found: dict[int, list[CanonicalForm]] = {0: [CanonicalForm(n, ())]}

    def extend(chosen: list[int], candidates: list[int]):
        for pos, i in enumerate(candidates):
            chosen.append(i)
            form = CanonicalForm(n, tuple(splits[j] for j in chosen))
            found.setdefault(len(chosen), []).append(form)
            extend(chosen, [j for j in candidates[pos + 1:] if compat[i][j]])
            chosen.pop()

    extend([], list(range(len(splits))))
    return {
        m: tuple(sorted(forms, key=CanonicalForm.sort_key))
        for m, forms in found.items()
    }
