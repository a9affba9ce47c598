"""The genus-2 moduli fixture and the triviality of its automorphisms.

Genus 2 without markings has exactly seven strata: two 3-dimensional
cells (the theta graph and the dumbbell), two 2-dimensional cells (the
figure eight and the lollipop with a weight-1 head), two 1-dimensional
cells (a weight-1 loop and a bridge joining two weight-1 vertices) and
the weight-2 point.  Unlike the genus-0 case the graphs carry loops,
parallel edges, weights and genuine automorphisms, so each cell is an
orthant modulo its graph's edge action and maps between cells are only
defined up to those actions.  The fixture is hardcoded; contraction
(loops add weight, bridges merge) is genus-checked at every step.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

from .groups import PermutationGroup, compose_perms

__all__ = [
    "WeightedGraph",
    "QuotientCell",
    "M2Complex",
    "M2Violation",
    "M2SearchResult",
    "weighted_graph_isomorphisms",
    "edge_action_group",
    "contract_weighted_edge",
    "m2_cells",
    "build_m2_complex",
    "aut_m2",
    "bridge_loop_swap_violation",
]


@dataclass(frozen=True)
class WeightedGraph:
    """A connected multigraph with non-negative integer vertex weights;
    loops and parallel edges allowed.  Genus = first Betti number plus
    total weight."""

    weights: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        V = len(self.weights)
        if V < 1:
            raise ValueError("need at least one vertex")
        if any(w < 0 for w in self.weights):
            raise ValueError("weights must be non-negative")
        norm = []
        for u, v in self.edges:
            if not (0 <= u < V and 0 <= v < V):
                raise ValueError(f"edge ({u},{v}) has unknown endpoint")
            norm.append((u, v) if u <= v else (v, u))
        object.__setattr__(self, "edges", tuple(norm))
        seen = {0}
        queue = [0]
        for x in queue:
            for u, v in self.edges:
                for a, b in ((u, v), (v, u)):
                    if a == x and b not in seen:
                        seen.add(b)
                        queue.append(b)
        if len(seen) != V:
            raise ValueError("graph is not connected")

    @property
    def num_vertices(self) -> int:
        return len(self.weights)

    @property
    def genus(self) -> int:
        betti = len(self.edges) - self.num_vertices + 1
        return betti + sum(self.weights)

    def valence(self, v: int) -> int:
        return sum((u == v) + (w == v) for u, w in self.edges)

    def is_stable(self) -> bool:
        """Every weight-0 vertex has valence >= 3 (loops count twice)."""
        return all(
            w > 0 or self.valence(v) >= 3 for v, w in enumerate(self.weights)
        )


def weighted_graph_isomorphisms(
    g: WeightedGraph, h: WeightedGraph
) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All isomorphism pairs (vertex map, edge map): weight-preserving
    vertex bijections carrying the edge multiset, combined with every
    bijection of parallel classes."""
    if sorted(g.weights) != sorted(h.weights) or len(g.edges) != len(h.edges):
        return
    h_slots: dict[tuple[int, int], list[int]] = {}
    for j, e in enumerate(h.edges):
        h_slots.setdefault(e, []).append(j)
    for vmap in itertools.permutations(range(g.num_vertices)):
        if any(g.weights[v] != h.weights[vmap[v]] for v in range(g.num_vertices)):
            continue
        classes: dict[tuple[int, int], list[int]] = {}
        ok = True
        for i, (u, v) in enumerate(g.edges):
            a, b = vmap[u], vmap[v]
            key = (a, b) if a <= b else (b, a)
            if key not in h_slots:
                ok = False
                break
            classes.setdefault(key, []).append(i)
        if not ok or any(
            len(classes.get(k, [])) != len(v) for k, v in h_slots.items()
        ):
            continue
        keys = sorted(classes)
        pools = [itertools.permutations(h_slots[k]) for k in keys]
        for choice in itertools.product(*pools):
            emap = [0] * len(g.edges)
            for key, targets in zip(keys, choice):
                for i, j in zip(classes[key], targets):
                    emap[i] = j
            yield vmap, tuple(emap)


def edge_action_group(g: WeightedGraph) -> PermutationGroup:
    """Image of the graph's automorphism group in the symmetric group on
    its edges."""
    perms = {emap for _, emap in weighted_graph_isomorphisms(g, g)}
    return PermutationGroup(len(g.edges), tuple(sorted(perms)))


def contract_weighted_edge(g: WeightedGraph, edge_idx: int) -> WeightedGraph:
    """Contract one edge: a loop disappears and adds 1 to its vertex's
    weight, a bridge merges its endpoints adding weights.  The genus is
    asserted unchanged (this double-checks the fixture transcription)."""
    if not 0 <= edge_idx < len(g.edges):
        raise ValueError(f"no edge with index {edge_idx}")
    u, v = g.edges[edge_idx]
    rest = [e for i, e in enumerate(g.edges) if i != edge_idx]
    if u == v:
        weights = tuple(w + (1 if x == u else 0) for x, w in enumerate(g.weights))
        contracted = WeightedGraph(weights, tuple(rest))
    else:
        relabel = {x: (x - 1 if x > v else x) for x in range(g.num_vertices)}
        relabel[v] = relabel[u]
        weights = []
        for x, w in enumerate(g.weights):
            if x == v:
                continue
            weights.append(w + (g.weights[v] if x == u else 0))
        contracted = WeightedGraph(
            tuple(weights), tuple((relabel[a], relabel[b]) for a, b in rest)
        )
    if contracted.genus != g.genus:
        raise AssertionError("contraction changed the genus")
    return contracted


@dataclass(frozen=True)
class QuotientCell:
    """A stratum of the genus-2 space: the orthant on the graph's edges
    modulo the edge action of the graph's automorphisms."""

    name: str
    graph: WeightedGraph

    @property
    def dimension(self) -> int:
        return len(self.graph.edges)

    @cached_property
    def edge_group(self) -> PermutationGroup:
        return edge_action_group(self.graph)


def m2_cells() -> tuple[QuotientCell, ...]:
    """The seven genus-2 strata, ordered by (dimension, name)."""
    return (
        QuotientCell("point_w2", WeightedGraph((2,), ())),
        QuotientCell("bridge_w1_w1", WeightedGraph((1, 1), ((0, 1),))),
        QuotientCell("loop_w1", WeightedGraph((1,), ((0, 0),))),
        QuotientCell("figure_eight", WeightedGraph((0,), ((0, 0), (0, 0)))),
        QuotientCell("lollipop", WeightedGraph((0, 1), ((0, 0), (0, 1)))),
        QuotientCell("dumbbell", WeightedGraph((0, 0), ((0, 0), (0, 1), (1, 1)))),
        QuotientCell("theta", WeightedGraph((0, 0), ((0, 1), (0, 1), (0, 1)))),
    )


@dataclass(frozen=True)
class M2Complex:
    """The quotient cone complex: cells plus, per cell and edge, the face
    cell reached by contracting that edge together with one retained-edge
    identification (well defined up to the face's edge group)."""

    cells: tuple[QuotientCell, ...]
    arrows: tuple[tuple[tuple[int, tuple[int, ...]], ...], ...]

    @cached_property
    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.cells)

    def cell_index(self, name: str) -> int:
        return self.names.index(name)

    def f_vector(self) -> list[int]:
        dims = [c.dimension for c in self.cells]
        return [dims.count(d) for d in range(max(dims) + 1)]

    def specializations(self) -> dict[str, set[str]]:
        """Covering relations of the face poset, by cell name."""
        out: dict[str, set[str]] = {c.name: set() for c in self.cells}
        for i, per_edge in enumerate(self.arrows):
            for j, _ in per_edge:
                out[self.cells[i].name].add(self.cells[j].name)
        return out


def build_m2_complex() -> M2Complex:
    """Assemble the fixture and compute its face arrows by contracting
    every edge of every cell and locating the (unique) resulting stratum."""
    cells = m2_cells()
    for cell in cells:
        if cell.graph.genus != 2:
            raise AssertionError(f"{cell.name} does not have genus 2")
        if not cell.graph.is_stable():
            raise AssertionError(f"{cell.name} is not stable")
    arrows = []
    for cell in cells:
        per_edge = []
        for e in range(cell.dimension):
            contracted = contract_weighted_edge(cell.graph, e)
            matches = [
                (j, iso)
                for j, other in enumerate(cells)
                for iso in [next(
                    weighted_graph_isomorphisms(contracted, other.graph), None
                )]
                if iso is not None
            ]
            if len(matches) != 1:
                raise AssertionError(
                    f"contracting edge {e} of {cell.name} matches "
                    f"{len(matches)} strata"
                )
            j, (_, emap) = matches[0]
            # retained map: edge i != e of the cell sits at position
            # i - (i > e) in the contracted graph, then moves through emap
            retained = tuple(
                emap[i - (1 if i > e else 0)]
                for i in range(cell.dimension)
                if i != e
            )
            per_edge.append((j, retained))
        arrows.append(tuple(per_edge))
    return M2Complex(cells, tuple(arrows))


@dataclass(frozen=True)
class M2Violation:
    """Witness that a candidate self-map breaks a face arrow: contracting
    `edge` of `cell` lands in `face`, but the image contraction lands in
    `image_face`, which the candidate does not map `face` to."""

    cell: str
    edge: int
    face: str
    image_face: str

    def describe(self) -> str:
        return (
            f"contracting edge {self.edge} of {self.cell} gives {self.face}, "
            f"but the image edge contracts to {self.image_face}"
        )


@dataclass(frozen=True)
class M2SearchResult:
    group: PermutationGroup
    candidates: int
    valid: int
    classes: int
    violations: tuple[M2Violation, ...]


def _retained_lookup(cell_dim: int, e: int, retained: tuple[int, ...]) -> dict[int, int]:
    out = {}
    pos = 0
    for i in range(cell_dim):
        if i == e:
            continue
        out[i] = retained[pos]
        pos += 1
    return out


def _check_candidate(
    cx: M2Complex, cell_map: tuple[int, ...], edge_maps: tuple[tuple[int, ...], ...]
) -> M2Violation | None:
    """Face compatibility of a candidate (cell bijection + per-cell edge
    bijections), up to the face cells' edge groups."""
    for i, cell in enumerate(cx.cells):
        i2 = cell_map[i]
        for e in range(cell.dimension):
            j, retained = cx.arrows[i][e]
            e2 = edge_maps[i][e]
            j2, retained2 = cx.arrows[i2][e2]
            if cell_map[j] != j2:
                return M2Violation(
                    cell=cell.name,
                    edge=e,
                    face=cx.cells[j].name,
                    image_face=cx.cells[j2].name,
                )
            lhs = _retained_lookup(cell.dimension, e, retained)
            rhs = _retained_lookup(cell.dimension, e2, retained2)
            # the retained-edge identifications are canonical only up to
            # the face edge groups, so the square has to commute up to a
            # pre-twist h1 on the face and a post-twist h2 on its image:
            # edge_maps[j](h1(lhs(x))) = h2(rhs(edge_maps[i](x)))
            pre_group = cx.cells[j].edge_group
            post_group = cx.cells[j2].edge_group
            matched = any(
                all(
                    edge_maps[j][h1[lhs[x]]] == h2[rhs[edge_maps[i][x]]]
                    for x in lhs
                )
                for h1 in sorted(pre_group.elements())
                for h2 in sorted(post_group.elements())
            )
            if not matched:
                return M2Violation(
                    cell=cell.name,
                    edge=e,
                    face=cx.cells[j].name,
                    image_face=cx.cells[j2].name,
                )
    return None


def _candidate_cell_maps(cx: M2Complex) -> Iterator[tuple[int, ...]]:
    by_dim: dict[int, list[int]] = {}
    for i, c in enumerate(cx.cells):
        by_dim.setdefault(c.dimension, []).append(i)
    pools = [
        itertools.permutations(by_dim[d]) for d in sorted(by_dim)
    ]
    for choice in itertools.product(*pools):
        out = [0] * len(cx.cells)
        for d, perm in zip(sorted(by_dim), choice):
            for src, dst in zip(by_dim[d], perm):
                out[src] = dst
        yield tuple(out)


def _equivalent(cx, cell_map, ems1, ems2) -> bool:
    """Candidates with the same cell map are the same quotient self-map
    when each cell's edge bijections differ by pre/post composition with
    the edge groups."""
    for i, cell in enumerate(cx.cells):
        pre = cell.edge_group
        post = cx.cells[cell_map[i]].edge_group
        found = any(
            compose_perms(h, compose_perms(ems1[i], g)) == ems2[i]
            for g in sorted(pre.elements())
            for h in sorted(post.elements())
        )
        if not found:
            return False
    return True


def aut_m2(cx: M2Complex | None = None) -> M2SearchResult:
    """Exhaust all dimension-preserving cell bijections with edge
    bijections and keep the face-compatible ones, identified modulo the
    per-cell edge groups.  The result is the trivial group: each cell is
    fixed and every surviving edge bijection is equivalent to the
    identity."""
    if cx is None:
        cx = build_m2_complex()
    candidates = 0
    valid: list[tuple[tuple[int, ...], tuple[tuple[int, ...], ...]]] = []
    violations: list[M2Violation] = []
    for cell_map in _candidate_cell_maps(cx):
        if any(
            cx.cells[i].dimension != cx.cells[j].dimension
            for i, j in enumerate(cell_map)
        ):
            continue
        pools = [
            itertools.permutations(range(cx.cells[cell_map[i]].dimension))
            for i in range(len(cx.cells))
        ]
        for edge_maps in itertools.product(*pools):
            candidates += 1
            edge_maps = tuple(tuple(m) for m in edge_maps)
            violation = _check_candidate(cx, cell_map, edge_maps)
            if violation is None:
                valid.append((cell_map, edge_maps))
            else:
                violations.append(violation)

    classes: list[tuple[tuple[int, ...], tuple[tuple[int, ...], ...]]] = []
    for cell_map, ems in valid:
        if not any(
            cm == cell_map and _equivalent(cx, cell_map, rep, ems)
            for cm, rep in classes
        ):
            classes.append((cell_map, ems))
    gens = tuple(cm for cm, _ in classes if any(i != x for i, x in enumerate(cm)))
    group = PermutationGroup(len(cx.cells), gens)
    return M2SearchResult(
        group=group,
        candidates=candidates,
        valid=len(valid),
        classes=len(classes),
        violations=tuple(violations),
    )


def bridge_loop_swap_violation(cx: M2Complex | None = None) -> M2Violation:
    """The named rejected candidate: fix every cell, swap the dumbbell's
    bridge with one of its loops.  Face checking rejects it because the
    bridge contracts to the figure eight while a loop contracts to the
    lollipop."""
    if cx is None:
        cx = build_m2_complex()
    identity_cells = tuple(range(len(cx.cells)))
    edge_maps = []
    for cell in cx.cells:
        m = list(range(cell.dimension))
        if cell.name == "dumbbell":
            # edges are (loop at 0, bridge, loop at 1): swap bridge and first loop
            m[0], m[1] = m[1], m[0]
        edge_maps.append(tuple(m))
    violation = _check_candidate(cx, identity_cells, tuple(edge_maps))
    if violation is None:
        raise AssertionError("the bridge/loop swap was unexpectedly accepted")
    return violation
