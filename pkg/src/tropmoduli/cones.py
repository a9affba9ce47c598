"""The moduli space as a combinatorial cone complex.

Cells are the canonical forms of the stratum catalog, indexed by
(dimension, canonical order).  Edges of a cell are its splits, so the
face obtained by contracting a subset of edges is literally the cell
with those splits removed, and the retained-edge injection is the
identity on splits.  Construction recomputes every codimension-1 face
through tree-level contraction and asserts it agrees with split removal,
turning the rigidity of stable trees into a runtime check.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .enumeration import StratumCatalog, enumerate_strata
from .trees import CanonicalForm, Split, contract, splits_compatible

__all__ = ["ConeComplex", "build_complex", "star_count"]


@dataclass(frozen=True)
class ConeComplex:
    """Face poset of the stratum catalog plus the compatibility graph on
    rays (the dimension-1 cells)."""

    n: int
    cells: tuple[CanonicalForm, ...]
    dims: tuple[int, ...]
    codim1: tuple[tuple[tuple[Split, int], ...], ...]  # per cell: (dropped split, face index)

    @cached_property
    def index(self) -> dict[CanonicalForm, int]:
        return {c: i for i, c in enumerate(self.cells)}

    @cached_property
    def dim_ranges(self) -> dict[int, range]:
        out = {}
        start = 0
        for d in range(max(self.dims) + 1):
            count = sum(1 for x in self.dims if x == d)
            out[d] = range(start, start + count)
            start += count
        return out

    @property
    def max_dimension(self) -> int:
        return max(self.dims)

    def f_vector(self) -> list[int]:
        return [len(self.dim_ranges[d]) for d in sorted(self.dim_ranges)]

    @cached_property
    def rays(self) -> tuple[Split, ...]:
        """Splits of the dimension-1 cells, in cell order; ray r is cell
        ``dim_ranges[1][r]``."""
        if 1 not in self.dim_ranges:
            return ()
        return tuple(self.cells[i].splits[0] for i in self.dim_ranges[1])

    @cached_property
    def ray_index(self) -> dict[Split, int]:
        return {s: r for r, s in enumerate(self.rays)}

    def ray_of_cell(self, cell_idx: int) -> int:
        if self.dims[cell_idx] != 1:
            raise ValueError(f"cell {cell_idx} is not a ray")
        return cell_idx - self.dim_ranges[1].start

    @cached_property
    def compat_masks(self) -> tuple[int, ...]:
        """Adjacency rows of the ray-compatibility graph as bitmasks."""
        rays = self.rays
        rows = []
        for i, a in enumerate(rays):
            row = 0
            for j, b in enumerate(rays):
                if i != j and splits_compatible(a, b):
                    row |= 1 << j
            rows.append(row)
        return tuple(rows)

    def compat_neighbors(self) -> list[list[int]]:
        return [
            [j for j in range(len(self.rays)) if row >> j & 1]
            for row in self.compat_masks
        ]

    def face(self, cell_idx: int, drop: Iterable[Split]) -> tuple[int, dict[int, int]]:
        """Face reached by contracting the given splits of a cell; returns
        (target index, retained-split injection by position)."""
        form = self.cells[cell_idx]
        target = form.without(drop)
        kept = [s for s in form.splits if s in set(target.splits)]
        pos = {s: i for i, s in enumerate(target.splits)}
        retained = {form.splits.index(s): pos[s] for s in kept}
        return self.index[target], retained

    @cached_property
    def _star_counts(self) -> tuple[int, ...]:
        counts = [0] * len(self.cells)
        for faces in self.codim1:
            for _, tgt in faces:
                counts[tgt] += 1
        return tuple(counts)

    def cell_ray_sets(self) -> list[frozenset[int]]:
        """Each cell as the set of its rays (by ray index)."""
        ri = self.ray_index
        return [frozenset(ri[s] for s in c.splits) for c in self.cells]

    def to_json_obj(self) -> dict:
        cells = [
            {"index": i, "dim": self.dims[i], "splits": c.sides_json()}
            for i, c in enumerate(self.cells)
        ]
        faces = {}
        for i, entries in enumerate(self.codim1):
            lst = []
            for s, tgt in entries:
                _, retained = self.face(i, [s])
                lst.append(
                    {
                        "drop": list(s.side()),
                        "target": tgt,
                        "retained": sorted(retained.items()),
                    }
                )
            faces[str(i)] = lst
        return {"n": self.n, "f_vector": self.f_vector(), "cells": cells, "faces": faces}

    def to_dot(self, kind: str) -> str:
        """DOT source for the Hasse diagram of the face poset or for the
        ray-compatibility graph."""
        lines = []
        if kind == "hasse":
            lines.append("digraph hasse {")
            lines.append('  rankdir="BT";')
            for i, c in enumerate(self.cells):
                label = f"d{self.dims[i]}: " + (
                    "pt" if not c.splits else " | ".join(
                        ",".join(map(str, s.side())) for s in c.splits
                    )
                )
                lines.append(f'  c{i} [label="{label}"];')
            for i, entries in enumerate(self.codim1):
                for _, tgt in entries:
                    lines.append(f"  c{tgt} -> c{i};")
        elif kind == "compat":
            lines.append("graph compat {")
            for r, s in enumerate(self.rays):
                label = ",".join(map(str, s.side()))
                lines.append(f'  r{r} [label="{label}"];')
            for r, row in enumerate(self.compat_masks):
                for j in range(r + 1, len(self.rays)):
                    if row >> j & 1:
                        lines.append(f"  r{r} -- r{j};")
        else:
            raise ValueError(f"unknown DOT export {kind!r}")
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_complex(n: int, catalog: StratumCatalog | None = None) -> ConeComplex:
    """Materialize the cone complex: all cells in (dimension, canonical)
    order plus the codimension-1 face maps, computed by contracting each
    edge of a representative tree and checked against split removal."""
    if catalog is None:
        catalog = enumerate_strata(n)
    cells = []
    dims = []
    for d in sorted(catalog.by_dimension):
        for form in catalog.by_dimension[d]:
            cells.append(form)
            dims.append(d)
    index = {c: i for i, c in enumerate(cells)}

    codim1 = []
    for form in cells:
        tree = form.to_tree()
        split_at = tree.splits
        entries = []
        targets = set()
        for e in range(len(tree.edges)):
            contracted = contract(tree, [e]).tree
            got = contracted.canonical_form
            expected = form.without([split_at[e]])
            if got != expected:
                raise AssertionError(
                    f"contraction of edge {e} disagrees with split removal on {form}"
                )
            tgt = index[got]
            if tgt in targets:
                raise AssertionError(
                    f"two one-edge contractions of {form} hit the same face"
                )
            targets.add(tgt)
            entries.append((split_at[e], tgt))
        codim1.append(tuple(entries))

    return ConeComplex(n, tuple(cells), tuple(dims), tuple(codim1))


def star_count(cx: ConeComplex, cell_idx: int) -> int:
    """Number of cells one dimension up whose closure contains the given
    cell, counted brute-force through the face maps."""
    if not 0 <= cell_idx < len(cx.cells):
        raise ValueError(f"no cell with index {cell_idx}")
    return cx._star_counts[cell_idx]
