"""Exact-cover packing of polyform pieces into finite cell regions.

A packing instance is a finite region (a set of tiling cells), a set of
pieces (canonical forms), and a placement group (piece rotations, with
or without reflections).  The solver is Algorithm X over the exact-cover
matrix whose columns are region cells plus, under each-piece-once
multiplicity, one column per piece; a deliberately naive backtracker
double-checks small instances.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .canonical import CanonicalForm, SymmetryMode
from .engine import CompiledTiling, ICell, compile_tiling
from .exact import Point, format_point, parse_point
from .tiling import NotACell, TilingSpec, resolve_tiling

ROTATIONS_ONLY = "rotations-only"
ROTATIONS_AND_REFLECTIONS = "rotations-and-reflections"


@dataclass(frozen=True)
class Region:
    tiling: str
    cells: FrozenSet[Point]

    def __len__(self) -> int:
        return len(self.cells)


@dataclass(frozen=True)
class PieceSet:
    pieces: Tuple[CanonicalForm, ...]
    multiplicity: str = "each-piece-once"  # or "unbounded"
    copies: Tuple[int, ...] = ()  # per-piece copy counts; empty means all 1

    def copy_counts(self) -> Tuple[int, ...]:
        return self.copies if self.copies else tuple(1 for _ in self.pieces)


@dataclass(frozen=True)
class Placement:
    piece: int
    orientation: int
    shift: Point
    covered: FrozenSet[Point]


@dataclass
class PackResult:
    raw_count: int
    solutions: List[Tuple[Placement, ...]] = field(default_factory=list)
    complete: bool = True  # False when a limit stopped the search
    modulo_region_symmetry: Optional[int] = None


# -- regions -----------------------------------------------------------------


def _check_cells(spec: TilingSpec, cells: Iterable[Point]) -> FrozenSet[Point]:
    ct = compile_tiling(spec)
    out = set()
    for p in cells:
        scaled = ct.to_scaled(p)
        if not ct.is_cell(scaled):
            raise NotACell(f"{format_point(p)} is not a cell of {spec.name}")
        if p in out:
            raise ValueError(f"duplicate region cell {format_point(p)}")
        out.add(p)
    return frozenset(out)


def generate_region(spec: TilingSpec, kind: str, params: Dict) -> Region:
    """Build a named region shape; every cell is checked against the tiling."""
    half = Fraction(1, 2)
    quarter = Fraction(1, 4)
    if kind == "rect":
        w, h = int(params["width"]), int(params["height"])
        if w <= 0 or h <= 0:
            raise ValueError("rect dimensions must be positive")
        cells = [
            (Fraction(i), Fraction(j)) for i in range(w) for j in range(h)
        ]
    elif kind == "box":
        a, b, c = (int(params[k]) for k in ("a", "b", "c"))
        if min(a, b, c) <= 0:
            raise ValueError("box dimensions must be positive")
        cells = [
            (Fraction(i), Fraction(j), Fraction(k))
            for i in range(a) for j in range(b) for k in range(c)
        ]
    elif kind == "bcc-box":
        a, b, c = (int(params[k]) for k in ("a", "b", "c"))
        if min(a, b, c) <= 0:
            raise ValueError("bcc-box dimensions must be positive")
        cells = [
            (Fraction(i), Fraction(j), Fraction(k))
            for i in range(a) for j in range(b) for k in range(c)
        ]
        cells += [
            (i + half, j + half, k + half)
            for i in range(a - 1) for j in range(b - 1) for k in range(c - 1)
        ]
    elif kind == "tet-region":
        s = int(params["size"])
        if s <= 0:
            raise ValueError("tet-region size must be positive")
        # Upward tetrahedra plus the octahedra between them: the stacked
        # tetrahedral mound of edge s (downward tetrahedra are not inside).
        spans = [
            (half, half, Fraction(0)),
            (half, Fraction(0), half),
            (Fraction(0), half, half),
        ]

        def at(base, i, j, k):
            return tuple(
                base[t] + i * spans[0][t] + j * spans[1][t] + k * spans[2][t]
                for t in range(3)
            )

        cells = []
        for i in range(s):
            for j in range(s - i):
                for k in range(s - i - j):
                    cells.append(at((quarter, quarter, quarter), i, j, k))
        for i in range(s - 1):
            for j in range(s - 1 - i):
                for k in range(s - 1 - i - j):
                    cells.append(at((half, half, half), i, j, k))
    elif kind == "explicit":
        raw = params["cells"]
        cells = [parse_point(c) if isinstance(c, str) else tuple(map(Fraction, c)) for c in raw]
    else:
        raise ValueError(f"unknown region kind {kind!r}")
    return Region(spec.name, _check_cells(spec, cells))


# -- placements ----------------------------------------------------------------


def _group_indices(spec: TilingSpec, placement_group: str) -> List[int]:
    if placement_group == ROTATIONS_ONLY:
        return [k for k, o in enumerate(spec.orientations) if o.determinant() > 0]
    if placement_group == ROTATIONS_AND_REFLECTIONS:
        return list(range(len(spec.orientations)))
    raise ValueError(f"unknown placement group {placement_group!r}")


def placements(
    spec: TilingSpec,
    region: Region,
    piece: Sequence[Point],
    placement_group: str = ROTATIONS_ONLY,
) -> List[Placement]:
    """Every in-region image of the piece, deduplicated by covered cells."""
    ct = compile_tiling(spec)
    D = ct.scale
    region_scaled = {ct.to_scaled(p) for p in region.cells}
    piece_scaled = [ct.to_scaled(p) for p in piece]
    if len(piece_scaled) > len(region_scaled):
        return []
    out: List[Placement] = []
    seen: Set[FrozenSet[ICell]] = set()
    for k in _group_indices(spec, placement_group):
        L = ct.linear[k]
        off = ct.offset[k]
        image = [
            tuple(
                int(sum(L[r, c] * p[c] for c in range(ct.dim)) + off[r])
                for r in range(ct.dim)
            )
            for p in piece_scaled
        ]
        anchor = image[0]
        for target in region_scaled:
            t = tuple(target[j] - anchor[j] for j in range(ct.dim))
            if any(v % D for v in t):
                continue
            covered = frozenset(
                tuple(p[j] + t[j] for j in range(ct.dim)) for p in image
            )
            if covered <= region_scaled and covered not in seen:
                seen.add(covered)
                out.append(Placement(
                    piece=-1,
                    orientation=k,
                    shift=tuple(Fraction(v, D) for v in t),
                    covered=frozenset(ct.from_scaled(c) for c in covered),
                ))
    return out


# -- exact cover solver ---------------------------------------------------------


def _algorithm_x(
    columns: Dict[int, Set[int]],
    rows: List[Tuple[int, ...]],
    *,
    count_all: bool,
    limit: Optional[int],
    deadline: Optional[float],
) -> Tuple[int, List[List[int]], bool]:
    """Knuth's Algorithm X on a dict-of-sets matrix; returns (count, sols, complete)."""
    solutions: List[List[int]] = []
    chosen: List[int] = []
    state = {"count": 0, "complete": True}

    def cover(row: int):
        removed = []
        for col in rows[row]:
            col_rows = columns.pop(col)
            removed.append((col, col_rows))
            for other in col_rows:
                for c2 in rows[other]:
                    if c2 != col and c2 in columns:
                        columns[c2].discard(other)
        return removed

    def uncover(removed):
        for col, col_rows in reversed(removed):
            columns[col] = col_rows
            for other in col_rows:
                for c2 in rows[other]:
                    if c2 != col and c2 in columns:
                        columns[c2].add(other)

    def search() -> bool:
        """Returns True to abort the whole search."""
        if deadline is not None and time.monotonic() > deadline:
            state["complete"] = False
            return True
        if not columns:
            state["count"] += 1
            solutions.append(list(chosen))
            if not count_all and (limit is None or state["count"] >= limit):
                return True
            return False
        col = min(columns, key=lambda c: len(columns[c]))
        candidates = sorted(columns[col])
        if not candidates:
            return False
        for row in candidates:
            chosen.append(row)
            removed = cover(row)
            aborted = search()
            uncover(removed)
            chosen.pop()
            if aborted:
                return True
        return False

    search()
    return state["count"], solutions, state["complete"]


def _expand_pieces(pieces: PieceSet) -> List[Tuple[int, CanonicalForm]]:
    """Flatten per-piece copy counts into one slot per physical piece."""
    slots = []
    for i, (piece, copies) in enumerate(zip(pieces.pieces, pieces.copy_counts())):
        if copies < 1:
            raise ValueError(f"piece {i}: copies must be >= 1")
        slots.extend((i, piece) for _ in range(copies))
    return slots


def solve_pack(
    spec: TilingSpec,
    region: Region,
    pieces: PieceSet,
    placement_group: str = ROTATIONS_ONLY,
    *,
    count_all: bool = False,
    first: bool = False,
    limit: Optional[int] = None,
    limit_time: Optional[float] = None,
    modulo_region_symmetry: bool = False,
) -> PackResult:
    """Exhaustive exact-cover search over the instance.

    ``count_all`` counts every raw solution; ``first`` stops at one;
    ``limit`` stops after K solutions; ``limit_time`` (seconds) turns a
    long search into a clean partial stop (result flagged incomplete).
    """
    if first:
        limit = 1
    slots = _expand_pieces(pieces)
    piece_cells_total = sum(len(p.cells) for _, p in slots)
    once = pieces.multiplicity == "each-piece-once"
    if once and piece_cells_total != len(region.cells):
        return PackResult(raw_count=0, complete=True,
                          modulo_region_symmetry=0 if modulo_region_symmetry else None)

    # Rows: one per (slot, placement); identical pieces share placement
    # lists.  Columns are integer ids (cells first, then piece slots) so
    # the hot set operations never hash rational coordinates.
    cell_ids: Dict[Point, int] = {c: i for i, c in enumerate(sorted(region.cells))}
    placement_cache: Dict[Tuple[Point, ...], List[Placement]] = {}
    rows: List[Tuple[int, ...]] = []
    row_placements: List[Placement] = []
    for slot, (piece_idx, piece) in enumerate(slots):
        plist = placement_cache.get(piece.cells)
        if plist is None:
            plist = placements(spec, region, piece.cells, placement_group)
            placement_cache[piece.cells] = plist
        for pl in plist:
            cols = sorted(cell_ids[c] for c in pl.covered)
            if once:
                cols.append(len(cell_ids) + slot)
            rows.append(tuple(cols))
            row_placements.append(Placement(piece_idx, pl.orientation, pl.shift, pl.covered))

    n_columns = len(cell_ids) + (len(slots) if once else 0)
    columns: Dict[int, Set[int]] = {c: set() for c in range(n_columns)}
    for ri, cols in enumerate(rows):
        for col in cols:
            columns[col].add(ri)

    deadline = time.monotonic() + limit_time if limit_time is not None else None
    count, sols, complete = _algorithm_x(
        columns, rows, count_all=count_all and limit is None, limit=limit,
        deadline=deadline,
    )
    solutions = [tuple(row_placements[r] for r in sol) for sol in sols]
    # Identical copies make solutions that differ only by slot permutation
    # collapse to the same placement multiset; deduplicate those.
    if once and any(c > 1 for c in pieces.copy_counts()):
        unique = {}
        for sol in solutions:
            key = frozenset((p.piece, p.covered) for p in sol)
            unique.setdefault(key, sol)
        solutions = list(unique.values())
        count = len(solutions) if complete else count

    for sol in solutions:
        verify_solution(spec, region, pieces, sol)
    result = PackResult(raw_count=count, solutions=solutions, complete=complete)
    if modulo_region_symmetry:
        result.modulo_region_symmetry = count_modulo_region_symmetry(
            spec, region, solutions
        )
    return result


def verify_solution(
    spec: TilingSpec, region: Region, pieces: PieceSet, solution: Sequence[Placement]
) -> None:
    """Raise if the solution is not an exact, piece-faithful cover."""
    ct = compile_tiling(spec)
    covered: Set[Point] = set()
    used: Dict[int, int] = {}
    for pl in solution:
        if covered & pl.covered:
            raise AssertionError("overlapping placements in solution")
        covered |= pl.covered
        used[pl.piece] = used.get(pl.piece, 0) + 1
        piece = pieces.pieces[pl.piece]
        got = ct.canonical_cells([ct.to_scaled(p) for p in pl.covered], piece.mode)
        want = tuple(ct.to_scaled(p) for p in piece.cells)
        if got != tuple(sorted(want)):
            raise AssertionError(
                f"placement cells do not canonicalize to piece {pl.piece}"
            )
    if covered != set(region.cells):
        raise AssertionError("solution does not cover the region exactly")
    if pieces.multiplicity == "each-piece-once":
        counts = pieces.copy_counts()
        for piece_idx, n in used.items():
            if n > counts[piece_idx]:
                raise AssertionError(f"piece {piece_idx} used {n} times")


# -- region symmetry -----------------------------------------------------------


def region_symmetries(spec: TilingSpec, region: Region) -> List[Tuple[int, ICell]]:
    """(orientation index, scaled shift) pairs mapping the region onto itself."""
    ct = compile_tiling(spec)
    D = ct.scale
    scaled = sorted(ct.to_scaled(p) for p in region.cells)
    cell_set = set(scaled)
    out = []
    for k in range(ct.n_orientations):
        L = ct.linear[k]
        off = ct.offset[k]
        image = sorted(
            tuple(
                int(sum(L[r, c] * p[c] for c in range(ct.dim)) + off[r])
                for r in range(ct.dim)
            )
            for p in cell_set
        )
        # try aligning extremes: translation is fixed by matching minima
        t = tuple(a - b for a, b in zip(scaled[0], image[0]))
        if any(v % D for v in t):
            continue
        if all(tuple(p[j] + t[j] for j in range(ct.dim)) in cell_set for p in image):
            out.append((k, t))
    return out


def count_modulo_region_symmetry(
    spec: TilingSpec, region: Region, solutions: Sequence[Tuple[Placement, ...]]
) -> int:
    """Orbit count of the solution set under the region's own symmetries."""
    ct = compile_tiling(spec)
    syms = region_symmetries(spec, region)

    def sol_key(partition: Iterable[FrozenSet[ICell]]) -> FrozenSet[FrozenSet[ICell]]:
        return frozenset(partition)

    scaled_solutions = []
    for sol in solutions:
        scaled_solutions.append([
            frozenset(ct.to_scaled(p) for p in pl.covered) for pl in sol
        ])
    keys = {sol_key(s): i for i, s in enumerate(scaled_solutions)}
    seen: Set[int] = set()
    orbits = 0
    for i, parts in enumerate(scaled_solutions):
        if i in seen:
            continue
        orbits += 1
        for k, t in syms:
            L = ct.linear[k]
            off = ct.offset[k]
            mapped = frozenset(
                frozenset(
                    tuple(
                        int(sum(L[r, c] * p[c] for c in range(ct.dim)) + off[r] + t[r])
                        for r in range(ct.dim)
                    )
                    for p in part
                )
                for part in parts
            )
            j = keys.get(mapped)
            if j is not None:
                seen.add(j)
    return orbits


# -- naive oracle ----------------------------------------------------------------


def naive_pack_count(
    spec: TilingSpec,
    region: Region,
    pieces: PieceSet,
    placement_group: str = ROTATIONS_ONLY,
) -> int:
    """Raw solution count by plain backtracking over the first empty cell.

    No exact-cover structure and no column heuristics; kept deliberately
    simple as an independent oracle for small instances.
    """
    slots = _expand_pieces(pieces)
    once = pieces.multiplicity == "each-piece-once"
    if once and sum(len(p.cells) for _, p in slots) != len(region.cells):
        return 0
    cache: Dict[Tuple[Point, ...], List[Placement]] = {}
    slot_placements: List[List[FrozenSet[Point]]] = []
    for _, piece in slots:
        plist = cache.get(piece.cells)
        if plist is None:
            plist = placements(spec, region, piece.cells, placement_group)
            cache[piece.cells] = plist
        slot_placements.append([pl.covered for pl in plist])

    order = sorted(region.cells)
    by_cell: List[List[Tuple[int, FrozenSet[Point]]]] = [[] for _ in order]
    cell_index = {c: i for i, c in enumerate(order)}
    for slot, plist in enumerate(slot_placements):
        for covered in plist:
            by_cell[min(cell_index[c] for c in covered)].append((slot, covered))

    free: Set[Point] = set(order)
    used = [False] * len(slots)
    count = 0

    def first_free() -> int:
        for i, c in enumerate(order):
            if c in free:
                return i
        return -1

    def rec():
        nonlocal count
        i = first_free()
        if i < 0:
            count += 1
            return
        cell = order[i]
        for slot, covered in by_cell[i]:
            if once and used[slot]:
                continue
            if cell not in covered or not covered <= free:
                continue
            free.difference_update(covered)
            used[slot] = True
            rec()
            used[slot] = False
            free.update(covered)

    rec()
    if once and any(c > 1 for c in pieces.copy_counts()):
        # naive counting treats identical copies as distinct slots
        from math import factorial

        divisor = 1
        for c in pieces.copy_counts():
            divisor *= factorial(c)
        count //= divisor
    return count


# -- instance files ---------------------------------------------------------------


def load_instance(path: str):
    """Parse an instance file; returns (spec, region, pieces, placement_group)."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    spec = resolve_tiling(data["tiling"])
    raw_region = data["region"]
    kind = raw_region["kind"]
    params = {k: v for k, v in raw_region.items() if k != "kind"}
    region = generate_region(spec, kind, params)
    mode = SymmetryMode.parse(data.get("mode", "one-sided"))
    raw_pieces = data["pieces"]
    forms: List[CanonicalForm] = []
    copies: List[int] = []
    for entry in raw_pieces:
        if isinstance(entry, str):
            text, n = entry, 1
        else:
            text, n = entry["form"], int(entry.get("copies", 1))
        cells = tuple(sorted(parse_point(part) for part in text.split(";")))
        forms.append(CanonicalForm(cells, mode, spec.name))
        copies.append(n)
    pieces = PieceSet(
        tuple(forms),
        data.get("multiplicity", "each-piece-once"),
        tuple(copies) if any(c != 1 for c in copies) else (),
    )
    group = data.get("placement_group", ROTATIONS_ONLY)
    if group not in (ROTATIONS_ONLY, ROTATIONS_AND_REFLECTIONS):
        raise ValueError(f"unknown placement group {group!r}")
    return spec, region, pieces, group
