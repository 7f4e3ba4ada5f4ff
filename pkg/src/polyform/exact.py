"""Exact rational points and affine maps in lattice-basis coordinates.

All geometry in this package lives in the basis of the tiling's
translation lattice, so lattice translations are integer vectors and
every cell position is a tuple of exact rationals.  Rationals are
plain ``fractions.Fraction`` values, which are always stored in lowest
terms with a positive denominator.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Tuple

Rat = Fraction
Point = Tuple[Fraction, ...]


class DimensionMismatch(ValueError):
    """Operands have different dimensions."""


class SingularMatrix(ValueError):
    """Linear part is not invertible."""


_RAT_RE = re.compile(r"-?[0-9]+(?:/[1-9][0-9]*)?$")


def parse_rat(text: str) -> Fraction:
    """Parse a rational string like ``0``, ``-3`` or ``8/21``."""
    if not _RAT_RE.match(text):
        raise ValueError(f"malformed rational: {text!r}")
    return Fraction(text)


def format_rat(value: Fraction) -> str:
    """Serialize a rational; the denominator is omitted when it is 1."""
    return str(value)


def parse_point(text: str) -> Point:
    """Parse a comma-separated rational tuple, e.g. ``8/21,2/21``."""
    return tuple(parse_rat(part) for part in text.split(","))


def format_point(point: Sequence[Fraction]) -> str:
    return ",".join(format_rat(c) for c in point)


def point_cmp(a: Sequence[Fraction], b: Sequence[Fraction]) -> int:
    """Lexicographic comparison; returns -1, 0 or 1."""
    if len(a) != len(b):
        raise DimensionMismatch(f"points of dimension {len(a)} and {len(b)}")
    for x, y in zip(a, b):
        if x < y:
            return -1
        if x > y:
            return 1
    return 0


def _as_fractions(values: Iterable) -> Tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in values)


def mat_vec(matrix: Sequence[Sequence[Fraction]], vec: Sequence[Fraction]) -> Point:
    return tuple(sum(row[j] * vec[j] for j in range(len(vec))) for row in matrix)


def mat_mul(a, b):
    d = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(d)) for j in range(d))
        for i in range(d)
    )


def vec_add(a: Sequence[Fraction], b: Sequence[Fraction]) -> Point:
    if len(a) != len(b):
        raise DimensionMismatch(f"points of dimension {len(a)} and {len(b)}")
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a: Sequence[Fraction], b: Sequence[Fraction]) -> Point:
    if len(a) != len(b):
        raise DimensionMismatch(f"points of dimension {len(a)} and {len(b)}")
    return tuple(x - y for x, y in zip(a, b))


def determinant(matrix: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact determinant by fraction-free-ish Gaussian elimination."""
    d = len(matrix)
    m = [list(row) for row in matrix]
    det = Fraction(1)
    for col in range(d):
        pivot = next((r for r in range(col, d) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = Fraction(1) / m[col][col]
        for r in range(col + 1, d):
            factor = m[r][col] * inv
            if factor:
                for c in range(col, d):
                    m[r][c] -= factor * m[col][c]
    return det


def matrix_inverse(matrix: Sequence[Sequence[Fraction]]):
    """Exact inverse by Gauss-Jordan elimination."""
    d = len(matrix)
    m = [list(row) + [Fraction(int(i == j)) for j in range(d)]
         for i, row in enumerate(matrix)]
    for col in range(d):
        pivot = next((r for r in range(col, d) if m[r][col] != 0), None)
        if pivot is None:
            raise SingularMatrix("matrix is singular")
        m[col], m[pivot] = m[pivot], m[col]
        inv = Fraction(1) / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(d):
            if r != col and m[r][col]:
                factor = m[r][col]
                m[r] = [x - factor * y for x, y in zip(m[r], m[col])]
    return tuple(tuple(row[d:]) for row in m)


@dataclass(frozen=True)
class AffineMap:
    """An affine map p -> linear @ p + offset with exact rational entries.

    The linear part acts on column vectors, matching the convention of
    the shipped tiling data.
    """

    linear: Tuple[Tuple[Fraction, ...], ...]
    offset: Point

    @staticmethod
    def make(linear, offset) -> "AffineMap":
        lin = tuple(_as_fractions(row) for row in linear)
        off = _as_fractions(offset)
        d = len(off)
        if len(lin) != d or any(len(row) != d for row in lin):
            raise DimensionMismatch("linear part is not d x d for the offset length")
        return AffineMap(lin, off)

    @staticmethod
    def identity(dim: int) -> "AffineMap":
        return AffineMap(
            tuple(tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)),
            tuple(Fraction(0) for _ in range(dim)),
        )

    @staticmethod
    def translation(offset) -> "AffineMap":
        off = _as_fractions(offset)
        ident = AffineMap.identity(len(off))
        return AffineMap(ident.linear, off)

    @property
    def dim(self) -> int:
        return len(self.offset)

    def apply(self, point: Sequence[Fraction]) -> Point:
        if len(point) != self.dim:
            raise DimensionMismatch(
                f"map of dimension {self.dim} applied to point of dimension {len(point)}"
            )
        return tuple(
            sum(self.linear[i][j] * point[j] for j in range(self.dim)) + self.offset[i]
            for i in range(self.dim)
        )

    def compose(self, other: "AffineMap") -> "AffineMap":
        """Return the map p -> self(other(p))."""
        if self.dim != other.dim:
            raise DimensionMismatch(
                f"composing maps of dimension {self.dim} and {other.dim}"
            )
        return AffineMap(mat_mul(self.linear, other.linear), self.apply(other.offset))

    def inverse(self) -> "AffineMap":
        inv = matrix_inverse(self.linear)
        neg = mat_vec(inv, self.offset)
        return AffineMap(inv, tuple(-x for x in neg))

    def determinant(self) -> Fraction:
        return determinant(self.linear)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for row in self.linear for c in row)

    def is_unimodular(self) -> bool:
        return self.is_integral() and abs(self.determinant()) == 1

    def is_identity(self) -> bool:
        return self == AffineMap.identity(self.dim)


def affine_apply(m: AffineMap, p: Sequence[Fraction]) -> Point:
    return m.apply(p)


def affine_compose(m1: AffineMap, m2: AffineMap) -> AffineMap:
    return m1.compose(m2)


def affine_inverse(m: AffineMap) -> AffineMap:
    return m.inverse()
