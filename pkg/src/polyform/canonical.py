"""Canonical representatives of cell sets under a symmetry mode.

The canonical form of a cell set is the lexicographically minimal
candidate over all orientations of the chosen mode, after shifting each
orientation's image so that every per-axis coordinate minimum lands in
[0,1).  It is the deduplication key for the whole system: two cell sets
describe the same polyform exactly when their canonical forms are equal.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Iterable, List, Sequence, Tuple

from .exact import Point, format_point, parse_point, vec_add
from .tiling import TilingSpec, classify


class SymmetryMode(enum.Enum):
    FREE = "free"
    ONE_SIDED = "one-sided"
    FIXED = "fixed"

    @staticmethod
    def parse(text: str) -> "SymmetryMode":
        for mode in SymmetryMode:
            if mode.value == text:
                return mode
        raise ValueError(f"unknown symmetry mode {text!r}")


def mode_orientation_indices(spec: TilingSpec, mode: SymmetryMode) -> Tuple[int, ...]:
    """Orientation indices used by a mode.

    Free uses every orientation, one-sided the determinant +1 subset,
    fixed only the identity.
    """
    if mode is SymmetryMode.FIXED:
        return (0,)
    if mode is SymmetryMode.ONE_SIDED:
        return tuple(
            k for k, omap in enumerate(spec.orientations) if omap.determinant() > 0
        )
    return tuple(range(len(spec.orientations)))


def check_one_sided_subgroup(spec: TilingSpec) -> None:
    """Assert the determinant +1 orientations are closed modulo translations."""
    idxs = set(mode_orientation_indices(spec, SymmetryMode.ONE_SIDED))
    if 0 not in idxs:
        raise ValueError(f"tiling {spec.name!r}: identity orientation has determinant -1")
    by_linear = {}
    for k in idxs:
        by_linear.setdefault(spec.orientations[k].linear, []).append(k)
    for j in idxs:
        for k in idxs:
            product = spec.orientations[j].compose(spec.orientations[k])
            found = any(
                all((a - b).denominator == 1 for a, b in
                    zip(product.offset, spec.orientations[m].offset))
                for m in by_linear.get(product.linear, ())
            )
            if not found:
                raise ValueError(
                    f"tiling {spec.name!r}: one-sided orientations are not a subgroup"
                )


def normalize_translation(cells: Iterable[Point]) -> Tuple[Point, ...]:
    """Shift by the integer vector putting every per-axis minimum in [0,1)."""
    cells = list(cells)
    if not cells:
        raise ValueError("cannot normalize an empty cell set")
    dim = len(cells[0])
    shift = tuple(
        -Fraction(floor(min(c[j] for c in cells))) for j in range(dim)
    )
    return tuple(sorted(vec_add(c, shift) for c in cells))


@dataclass(frozen=True)
class CanonicalForm:
    cells: Tuple[Point, ...]
    mode: SymmetryMode
    tiling: str

    def serialize(self) -> str:
        return ";".join(format_point(c) for c in self.cells)

    def __len__(self) -> int:
        return len(self.cells)


def parse_form(text: str, mode: SymmetryMode, tiling: str) -> CanonicalForm:
    cells = tuple(parse_point(part) for part in text.split(";"))
    return CanonicalForm(cells, mode, tiling)


def canonical_candidates(
    spec: TilingSpec, cells: Iterable[Point], mode: SymmetryMode
) -> List[Tuple[Point, ...]]:
    """All translation-normalized orientation images, in orientation order."""
    cells = list(cells)
    return [
        normalize_translation(spec.orientations[k].apply(c) for c in cells)
        for k in mode_orientation_indices(spec, mode)
    ]


def canonical_form(
    spec: TilingSpec, cells: Iterable[Point], mode: SymmetryMode
) -> CanonicalForm:
    """Lexicographically minimal normalized image over the mode's orientations."""
    cells = list(cells)
    for cell in cells:
        if not classify(spec, cell):
            raise ValueError(f"{format_point(cell)} is not a cell of this tiling")
    best = min(canonical_candidates(spec, cells, mode))
    return CanonicalForm(best, mode, spec.name)
