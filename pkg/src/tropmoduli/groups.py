"""Finite permutation groups on {0, ..., degree-1} given by generators.

Order and membership go through a full element closure while the group
stays small (<= 10^4 elements) and through a base/strong-generating-set
chain beyond that, so the arithmetic is exact at every scale this
package reaches.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

__all__ = [
    "identity_perm",
    "compose_perms",
    "invert_perm",
    "perm_cycles",
    "format_cycles",
    "PermutationGroup",
]

CLOSURE_CAP = 10_000


def identity_perm(degree: int) -> tuple[int, ...]:
    return tuple(range(degree))


def compose_perms(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    """Composition applying b first: (a*b)[i] = a[b[i]]."""
    return tuple(a[x] for x in b)


def invert_perm(p: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def check_perm(degree: int, p: Sequence[int]) -> tuple[int, ...]:
    p = tuple(p)
    if len(p) != degree or sorted(p) != list(range(degree)):
        raise ValueError(f"not a permutation of 0..{degree - 1}: {p!r}")
    return p


def perm_cycles(p: Sequence[int]) -> list[tuple[int, ...]]:
    """Nontrivial cycles of a permutation, each starting at its minimum."""
    seen = set()
    cycles = []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc = [i]
        j = p[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = p[j]
        cycles.append(tuple(cyc))
    return cycles


def format_cycles(p: Sequence[int]) -> str:
    cycles = perm_cycles(p)
    if not cycles:
        return "()"
    return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)


def _orbit_transversal(degree, point, gens):
    """BFS orbit of a point; transversal[x] maps point to x."""
    transversal = {point: identity_perm(degree)}
    queue = [point]
    for x in queue:
        rep = transversal[x]
        for g in gens:
            y = g[x]
            if y not in transversal:
                transversal[y] = compose_perms(g, rep)
                queue.append(y)
    return transversal


class _StabilizerChain:
    """Deterministic Schreier-Sims: a base with per-level orbits and
    transversals, rebuilt to a fixpoint whenever sifting a Schreier
    generator yields a new strong generator.  A new generator fixing
    base[:i] enlarges every level up to i, so the rebuild always restarts
    from the front; the groups in this package are small enough that the
    simple restart strategy is cheap."""

    def __init__(self, degree: int, gens: Iterable[Sequence[int]]):
        self.degree = degree
        ident = identity_perm(degree)
        self.strong: list[tuple[int, ...]] = []
        for g in gens:
            g = tuple(g)
            if g != ident and g not in self.strong:
                self.strong.append(g)
        self.base: list[int] = []
        self.transversals: list[dict[int, tuple[int, ...]]] = []
        self._build()

    def _extend_base_for(self, g):
        if all(g[p] == p for p in self.base):
            self.base.append(next(i for i in range(self.degree) if g[i] != i))

    def _level_gens(self, i):
        return [s for s in self.strong if all(s[p] == p for p in self.base[:i])]

    def _recompute_transversals(self):
        self.transversals = [
            _orbit_transversal(self.degree, self.base[i], self._level_gens(i))
            for i in range(len(self.base))
        ]

    def _build(self):
        for g in self.strong:
            self._extend_base_for(g)
        changed = True
        while changed:
            changed = False
            self._recompute_transversals()
            for i in range(len(self.base)):
                trans = self.transversals[i]
                for x, rep in trans.items():
                    for s in self._level_gens(i):
                        u = trans[s[x]]
                        schreier = compose_perms(
                            invert_perm(u), compose_perms(s, rep)
                        )
                        residue = self._sift(schreier)
                        if residue is not None:
                            self.strong.append(residue)
                            self._extend_base_for(residue)
                            changed = True
                            break
                    if changed:
                        break
                if changed:
                    break

    def _sift(self, g):
        """Strip g through the chain; the non-identity residue when g is
        not generated, else None."""
        for i, point in enumerate(self.base):
            x = g[point]
            rep = self.transversals[i].get(x)
            if rep is None:
                return g
            g = compose_perms(invert_perm(rep), g)
        if all(g[i] == i for i in range(self.degree)):
            return None
        return g

    def order(self) -> int:
        n = 1
        for t in self.transversals:
            n *= len(t)
        return n

    def contains(self, p) -> bool:
        return self._sift(tuple(p)) is None


@dataclass
class PermutationGroup:
    """A permutation group given by generators, with exact order,
    membership, and orbit queries."""

    degree: int
    generators: tuple[tuple[int, ...], ...] = ()
    _closure: frozenset | None = field(default=None, repr=False, compare=False)
    _chain: _StabilizerChain | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        ident = identity_perm(self.degree)
        gens = []
        for g in self.generators:
            g = check_perm(self.degree, g)
            if g != ident and g not in gens:
                gens.append(g)
        self.generators = tuple(gens)

    def _get_closure(self):
        """Full element set, or None once it exceeds the closure cap."""
        if self._closure is None and not hasattr(self, "_closure_failed"):
            ident = identity_perm(self.degree)
            elements = {ident}
            queue = [ident]
            for p in queue:
                for g in self.generators:
                    q = compose_perms(g, p)
                    if q not in elements:
                        if len(elements) >= CLOSURE_CAP:
                            self._closure_failed = True
                            return None
                        elements.add(q)
                        queue.append(q)
            self._closure = frozenset(elements)
        return self._closure

    def _get_chain(self):
        if self._chain is None:
            self._chain = _StabilizerChain(self.degree, self.generators)
        return self._chain

    def order(self) -> int:
        closure = self._get_closure()
        if closure is not None:
            return len(closure)
        return self._get_chain().order()

    def elements(self) -> frozenset:
        closure = self._get_closure()
        if closure is None:
            raise RuntimeError(
                f"group has more than {CLOSURE_CAP} elements; enumerate via the chain instead"
            )
        return closure

    def __contains__(self, p) -> bool:
        p = check_perm(self.degree, p)
        closure = self._get_closure()
        if closure is not None:
            return p in closure
        return self._get_chain().contains(p)

    def is_trivial(self) -> bool:
        return not self.generators

    def equals(self, other: "PermutationGroup") -> bool:
        """Equality as permutation groups (same degree, same element set)."""
        if self.degree != other.degree:
            return False
        if self.order() != other.order():
            return False
        return all(g in self for g in other.generators) and all(
            g in other for g in self.generators
        )

    def orbit(self, point: int) -> frozenset[int]:
        return frozenset(_orbit_transversal(self.degree, point, self.generators))

    def orbits(self) -> list[frozenset[int]]:
        seen: set[int] = set()
        out = []
        for v in range(self.degree):
            if v not in seen:
                orb = self.orbit(v)
                seen |= orb
                out.append(orb)
        return out

    def random_elements(self, count: int, seed: int, mix: int = 30) -> list[tuple[int, ...]]:
        """Deterministic sample of group elements: products of `mix` factors
        drawn from the generators and their inverses."""
        rng = random.Random(seed)
        if not self.generators:
            return [identity_perm(self.degree)] * count
        pool = list(self.generators) + [invert_perm(g) for g in self.generators]
        out = []
        for _ in range(count):
            p = identity_perm(self.degree)
            for _ in range(mix):
                p = compose_perms(rng.choice(pool), p)
            out.append(p)
        return out
