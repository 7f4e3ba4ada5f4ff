"""Scaled-integer workhorse behind enumeration and packing.

Every coordinate in a tiling file is a rational whose denominator
divides a small per-tiling constant.  Multiplying through by that
constant turns all cell positions into integer vectors, orientation
linear parts stay integral, and lattice translations become multiples
of the scale.  That makes canonicalization a batch of integer matrix
products, sorts and minima, which numpy handles at the volumes the
larger tables require.

The exact-rational modules remain the reference semantics; tests pin
this engine against them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .canonical import SymmetryMode, check_one_sided_subgroup, mode_orientation_indices
from .exact import Point
from .tiling import NotACell, TilingSpec

ICell = Tuple[int, ...]

# Candidates are canonicalized in bounded chunks so peak memory stays flat
# and thread workers have uniform units of work.
CHUNK = 1 << 17


class CompiledTiling:
    """Integer-scaled view of a TilingSpec plus memoized graph lookups."""

    def __init__(self, spec: TilingSpec):
        self.spec = spec
        self.dim = spec.dim
        denoms = [1]
        for omap in spec.orientations:
            denoms.extend(c.denominator for c in omap.offset)
        for orbit in spec.orbits:
            denoms.extend(c.denominator for c in orbit.rep)
            denoms.extend(c.denominator for u in orbit.neighbor_points for c in u)
        self.scale = math.lcm(*denoms)
        check_one_sided_subgroup(spec)

        d, D = self.dim, self.scale
        self.linear = np.array(
            [[[int(c) for c in row] for row in omap.linear] for omap in spec.orientations],
            dtype=np.int64,
        )
        self.offset = np.array(
            [[int(c * D) for c in omap.offset] for omap in spec.orientations],
            dtype=np.int64,
        )
        self.n_orientations = len(spec.orientations)

        self.orbit_ids = [o.id for o in spec.orbits]
        self.reps: List[ICell] = [
            tuple(int(c * D) for c in o.rep) for o in spec.orbits
        ]
        self.orbit_neighbors: List[List[ICell]] = [
            [tuple(int(c * D) for c in u) for u in o.neighbor_points]
            for o in spec.orbits
        ]
        # images[i][k] = orientations[k](rep_i), the classify anchors
        self.images: List[List[ICell]] = [
            [
                tuple(
                    sum(self.linear[k, r, c] * rep[c] for c in range(d))
                    + self.offset[k, r]
                    for r in range(d)
                )
                for k in range(self.n_orientations)
            ]
            for rep in self.reps
        ]
        self._mode_idx: Dict[SymmetryMode, np.ndarray] = {}
        self._nbr_memo: Dict[ICell, Tuple[ICell, ...]] = {}
        self._row_sum = int(np.abs(self.linear).sum(axis=2).max())
        self._off_max = int(np.abs(self.offset).max(initial=0))

    # -- coordinate conversion -------------------------------------------

    def to_scaled(self, point: Sequence[Fraction]) -> ICell:
        out = []
        for c in point:
            v = Fraction(c) * self.scale
            if v.denominator != 1:
                raise NotACell(f"coordinate {c} is not on the tiling's lattice grid")
            out.append(int(v))
        return tuple(out)

    def from_scaled(self, cell: Sequence[int]) -> Point:
        return tuple(Fraction(int(c), self.scale) for c in cell)

    # -- graph lookups ----------------------------------------------------

    def mode_indices(self, mode: SymmetryMode) -> np.ndarray:
        if mode not in self._mode_idx:
            self._mode_idx[mode] = np.array(
                mode_orientation_indices(self.spec, mode), dtype=np.int64
            )
        return self._mode_idx[mode]

    def classify_cell(self, cell: ICell) -> List[Tuple[int, int, ICell]]:
        """(orbit id, orientation index, scaled integral shift) witnesses."""
        D = self.scale
        out = []
        for i, per_orbit in enumerate(self.images):
            for k, image in enumerate(per_orbit):
                t = tuple(a - b for a, b in zip(cell, image))
                if all(v % D == 0 for v in t):
                    out.append((self.orbit_ids[i], k, t))
        return out

    def neighbors_of(self, cell: ICell) -> Tuple[ICell, ...]:
        cached = self._nbr_memo.get(cell)
        if cached is not None:
            return cached
        D = self.scale
        d = self.dim
        for i, per_orbit in enumerate(self.images):
            for k, image in enumerate(per_orbit):
                t = tuple(a - b for a, b in zip(cell, image))
                if all(v % D == 0 for v in t):
                    L = self.linear[k]
                    off = self.offset[k]
                    nbrs = tuple(
                        tuple(
                            int(sum(L[r, c] * u[c] for c in range(d)) + off[r] + t[r])
                            for r in range(d)
                        )
                        for u in self.orbit_neighbors[i]
                    )
                    self._nbr_memo[cell] = nbrs
                    return nbrs
        raise NotACell(f"{cell} (scaled by {D}) is not a cell of this tiling")

    def is_cell(self, cell: ICell) -> bool:
        try:
            self.neighbors_of(cell)
            return True
        except NotACell:
            return False

    # -- batch canonicalization --------------------------------------------

    def key_base(self, max_abs_coord: int) -> int:
        """Packing radix covering every normalized image of the given cells.

        Any normalized coordinate is below the coordinate spread of the
        transformed cells plus one lattice step, which the row sums of
        the orientation matrices bound without materializing the images.
        """
        bound = 2 * max_abs_coord * self._row_sum + 2 * self._off_max + 2 * self.scale + 1
        base = 1 << max(1, bound.bit_length())
        if self.dim * (base - 1).bit_length() > 62:
            raise OverflowError(
                "coordinates too large to pack into 64-bit canonical keys"
            )
        return base

    def canonical_key_batch(
        self, cells: np.ndarray, mode: SymmetryMode, base: Optional[int] = None
    ) -> Tuple[np.ndarray, int]:
        """Canonical keys for a (C, n, d) batch of scaled cell sets.

        Returns a (C, n) int64 array plus the packing radix: each row is
        the canonical form's sorted cells, each packed into one integer
        in a way that preserves lexicographic point order.  Pass the same
        ``base`` when keys from several batches must be comparable.
        """
        D = self.scale
        C, n, d = cells.shape
        if base is None:
            base = self.key_base(int(np.abs(cells).max(initial=0)))
        idxs = self.mode_indices(mode)
        best: Optional[np.ndarray] = None
        for k in idxs:
            x = cells @ self.linear[k].T + self.offset[k]
            mins = x.min(axis=1)
            x += (-np.floor_divide(mins, D) * D)[:, None, :]
            keys = x[:, :, 0].copy()
            for j in range(1, d):
                keys *= base
                keys += x[:, :, j]
            keys.sort(axis=1)
            if best is None:
                best = keys
                continue
            undecided = np.ones(C, dtype=bool)
            better = np.zeros(C, dtype=bool)
            for j in range(n):
                cj = keys[:, j]
                bj = best[:, j]
                better |= undecided & (cj < bj)
                undecided &= cj == bj
            if better.any():
                best[better] = keys[better]
        assert best is not None
        return best, base

    def decode_keys(self, keys: np.ndarray, base: int) -> np.ndarray:
        """Inverse of the packing in canonical_key_batch: (C, n) -> (C, n, d)."""
        C, n = keys.shape
        out = np.empty((C, n, self.dim), dtype=np.int64)
        rest = keys.copy()
        for j in range(self.dim - 1, -1, -1):
            out[:, :, j] = rest % base
            rest //= base
        return out

    def canonical_cells(self, cells: Iterable[ICell], mode: SymmetryMode) -> Tuple[ICell, ...]:
        """Canonical form of one scaled cell set, as sorted cell tuples."""
        arr = np.array([list(c) for c in cells], dtype=np.int64)[None, :, :]
        keys, base = self.canonical_key_batch(arr, mode)
        coords = self.decode_keys(keys, base)[0]
        return tuple(tuple(int(v) for v in row) for row in coords)

    # -- connectivity -------------------------------------------------------

    def is_connected(self, cells: Sequence[ICell]) -> bool:
        cell_set = set(cells)
        if not cell_set:
            return False
        stack = [next(iter(cell_set))]
        seen = {stack[0]}
        while stack:
            p = stack.pop()
            for q in self.neighbors_of(p):
                if q in cell_set and q not in seen:
                    seen.add(q)
                    stack.append(q)
        return len(seen) == len(cell_set)


_COMPILE_CACHE: Dict[int, Tuple[TilingSpec, CompiledTiling]] = {}


def compile_tiling(spec: TilingSpec) -> CompiledTiling:
    """Compile a spec, reusing the compiled form for the same spec object."""
    hit = _COMPILE_CACHE.get(id(spec))
    if hit is not None and hit[0] is spec:
        return hit[1]
    ct = CompiledTiling(spec)
    if len(_COMPILE_CACHE) > 64:
        _COMPILE_CACHE.clear()
    _COMPILE_CACHE[id(spec)] = (spec, ct)
    return ct
