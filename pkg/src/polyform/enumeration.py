"""Level-by-level polyform enumeration with canonical deduplication.

Level n is grown from level n-1 by attaching every boundary cell to
every retained form, canonicalizing each candidate under the chosen
symmetry mode, and deduplicating.  A brute-force oracle that never
touches canonical forms double-checks small counts.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from .canonical import CanonicalForm, SymmetryMode, mode_orientation_indices
from .engine import CHUNK, CompiledTiling, ICell, compile_tiling
from .exact import format_point
from .tiling import TilingSpec


@dataclass(frozen=True)
class Level:
    n: int
    forms: Optional[Tuple[Tuple[ICell, ...], ...]]
    count: int


@dataclass
class EnumerationResult:
    tiling: str
    mode: SymmetryMode
    counts: List[Tuple[int, int]]
    elapsed: float = 0.0
    partial: bool = False
    reached: int = 0
    form_files: List[str] = field(default_factory=list)
    levels: Optional[List["Level"]] = None

    def count_for(self, n: int) -> int:
        for m, c in self.counts:
            if m == n:
                return c
        raise KeyError(f"no count for n={n}")


class MemoryLimitExceeded(RuntimeError):
    """Enumeration stopped by the memory budget; partial counts attached."""

    def __init__(self, result: EnumerationResult):
        super().__init__(
            f"memory limit reached while building level {result.reached + 1} "
            f"of {result.tiling} ({result.mode.value})"
        )
        self.result = result


def _level_forms_to_canonical(
    ct: CompiledTiling, level: Level, mode: SymmetryMode
) -> Tuple[CanonicalForm, ...]:
    return tuple(
        CanonicalForm(tuple(ct.from_scaled(c) for c in form), mode, ct.spec.name)
        for form in level.forms
    )


def initial_level(spec: TilingSpec, mode: SymmetryMode) -> Level:
    """The 1-polyforms: deduplicated canonical singletons of every rep image."""
    ct = compile_tiling(spec)
    forms: Set[Tuple[ICell, ...]] = set()
    for images in ct.images:
        for image in images:
            forms.add(ct.canonical_cells([image], mode))
    ordered = tuple(sorted(forms))
    return Level(1, ordered, len(ordered))


def _candidate_batches(
    ct: CompiledTiling,
    forms: Sequence[Tuple[ICell, ...]],
    pruned: bool,
):
    """Yield (parents, new_cells) chunks; parent indices refer to ``forms``."""
    parent_idx: List[int] = []
    new_cells: List[ICell] = []
    for fi, form in enumerate(forms):
        cell_set = set(form)
        seen_q: Set[ICell] = set()
        for p in form:
            for q in ct.neighbors_of(p):
                if q not in cell_set and q not in seen_q:
                    seen_q.add(q)
                    parent_idx.append(fi)
                    new_cells.append(q)
        if len(parent_idx) >= CHUNK:
            yield parent_idx, new_cells
            parent_idx, new_cells = [], []
    if parent_idx:
        yield parent_idx, new_cells


def _assemble_chunk(
    forms_arr: np.ndarray, parent_idx: List[int], new_cells: List[ICell]
) -> np.ndarray:
    parents = forms_arr[np.asarray(parent_idx, dtype=np.int64)]
    extra = np.asarray(new_cells, dtype=np.int64)[:, None, :]
    return np.concatenate([parents, extra], axis=1)


def _removable_anchor(ct: CompiledTiling, cells: Tuple[ICell, ...]) -> ICell:
    """Lexicographically greatest cell whose removal keeps the form connected."""
    ordered = sorted(cells)
    return ordered[_anchor_index(ct, ordered)]


def _anchor_index(ct: CompiledTiling, cells: Sequence[ICell]) -> int:
    """Index of the greatest removable cell in an ascending-sorted form.

    A cell is removable exactly when it is not an articulation vertex of
    the form's adjacency graph, so one articulation-point pass replaces
    per-cell connectivity rechecks.
    """
    n = len(cells)
    if n <= 2:
        return n - 1
    index = {c: i for i, c in enumerate(cells)}
    adj: List[List[int]] = [[] for _ in range(n)]
    for i, c in enumerate(cells):
        for q in ct.neighbors_of(c):
            j = index.get(q)
            if j is not None:
                adj[i].append(j)
    disc = [0] * n
    low = [0] * n
    art = [False] * n
    counter = 1
    # iterative DFS from vertex 0; (node, parent, edge iterator) frames
    disc[0] = low[0] = counter
    stack = [(0, -1, iter(adj[0]))]
    root_children = 0
    while stack:
        node, par, it = stack[-1]
        advanced = False
        for nxt in it:
            if nxt == par:
                continue
            if disc[nxt]:
                if disc[nxt] < low[node]:
                    low[node] = disc[nxt]
                continue
            counter += 1
            disc[nxt] = low[nxt] = counter
            if node == 0:
                root_children += 1
            stack.append((nxt, node, iter(adj[nxt])))
            advanced = True
            break
        if not advanced:
            stack.pop()
            if par >= 0:
                if low[node] < low[par]:
                    low[par] = low[node]
                if par != 0 and low[node] >= disc[par]:
                    art[par] = True
    art[0] = root_children > 1
    for i in range(n - 1, -1, -1):
        if not art[i]:
            return i
    raise AssertionError("connected form with no removable cell")


def extend_level(
    spec: TilingSpec,
    level: Level,
    mode: SymmetryMode,
    *,
    pruned: bool = False,
    threads: int = 1,
    memory_estimate: Optional[List[int]] = None,
) -> Level:
    """Grow the complete level n+1 from a complete, retained level n."""
    if level.forms is None:
        raise ValueError("extend requires a level with retained forms")
    ct = compile_tiling(spec)
    forms = level.forms
    if not forms:
        return Level(level.n + 1, (), 0)
    forms_arr = np.asarray([[list(c) for c in f] for f in forms], dtype=np.int64)

    # One packing radix for the whole level so chunk keys are comparable.
    max_abs = int(np.abs(forms_arr).max(initial=0)) + ct.scale * ct._row_sum + ct._off_max
    base = ct.key_base(max_abs)

    chunk_pairs = list(_candidate_batches(ct, forms, pruned))
    chunks = [_assemble_chunk(forms_arr, pi, nc) for pi, nc in chunk_pairs]
    parent_chunks = [
        np.asarray(pi, dtype=np.int64) for pi, _ in chunk_pairs
    ] if pruned else []
    if memory_estimate is not None:
        memory_estimate.append(sum(c.nbytes for c in chunks) * 2)

    def work(chunk: np.ndarray) -> np.ndarray:
        keys, _ = ct.canonical_key_batch(chunk, mode, base=base)
        return keys

    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            key_chunks = list(pool.map(work, chunks))
    else:
        key_chunks = [work(c) for c in chunks]

    if not key_chunks:
        return Level(level.n + 1, (), 0)

    if pruned:
        # Keep a candidate only when its canonical parent (remove the
        # lex-greatest removable cell of the canonical child) is the form
        # that generated it, so each child class comes from one parent.
        parent_keys, _ = ct.canonical_key_batch(forms_arr, mode, base=base)
        kept: List[np.ndarray] = []
        for keys, parents in zip(key_chunks, parent_chunks):
            coords = ct.decode_keys(keys, base)
            rest = np.empty((len(keys), level.n, ct.dim), dtype=np.int64)
            for row in range(len(keys)):
                child = [tuple(int(v) for v in c) for c in coords[row]]
                ai = _anchor_index(ct, child)
                rest[row, :ai] = coords[row, :ai]
                rest[row, ai:] = coords[row, ai + 1:]
            rest_keys, _ = ct.canonical_key_batch(rest, mode, base=base)
            keep = (rest_keys == parent_keys[parents]).all(axis=1)
            kept.append(keys[keep])
        key_chunks = kept

    all_keys = np.concatenate(key_chunks, axis=0)
    unique = np.unique(all_keys, axis=0)
    coords = ct.decode_keys(unique, base)
    new_forms = tuple(
        tuple(tuple(int(v) for v in cell) for cell in row) for row in coords
    )
    return Level(level.n + 1, new_forms, len(new_forms))


def extend(spec: TilingSpec, level: Level, mode: SymmetryMode) -> Level:
    return extend_level(spec, level, mode)


def level_to_canonical_forms(
    spec: TilingSpec, level: Level, mode: SymmetryMode
) -> Tuple[CanonicalForm, ...]:
    ct = compile_tiling(spec)
    return _level_forms_to_canonical(ct, level, mode)


def serialize_level(spec: TilingSpec, level: Level, mode: SymmetryMode) -> List[str]:
    forms = level_to_canonical_forms(spec, level, mode)
    return sorted(f.serialize() for f in forms)


def enumerate_counts(
    spec: TilingSpec,
    mode: SymmetryMode,
    n_max: int,
    *,
    retain_forms: bool = False,
    pruned: bool = False,
    threads: int = 1,
    emit_path: Optional[str] = None,
    memory_limit: Optional[int] = None,
) -> EnumerationResult:
    """Counts of n-polyforms for n = 1..n_max, optionally emitting forms."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    start = time.monotonic()
    result = EnumerationResult(spec.name, mode, [])
    if n_max == 0:
        result.elapsed = time.monotonic() - start
        return result

    retained: List[Level] = []

    def record(level: Level):
        result.counts.append((level.n, level.count))
        result.reached = level.n
        if emit_path is not None:
            import os

            os.makedirs(emit_path, exist_ok=True)
            path = os.path.join(
                emit_path, f"{spec.name}-{mode.value}-n{level.n}.txt"
            )
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(f"# tiling: {spec.name}\n")
                fh.write(f"# mode: {mode.value}\n")
                fh.write(f"# n: {level.n}\n")
                for line in serialize_level(spec, level, mode):
                    fh.write(line + "\n")
            result.form_files.append(path)
        if retain_forms:
            retained.append(level)

    level = initial_level(spec, mode)
    record(level)
    for _ in range(n_max - 1):
        estimate: List[int] = []
        nxt = extend_level(
            spec, level, mode, pruned=pruned, threads=threads,
            memory_estimate=estimate,
        )
        if memory_limit is not None and estimate and estimate[0] > memory_limit:
            result.partial = True
            result.elapsed = time.monotonic() - start
            raise MemoryLimitExceeded(result)
        level = nxt
        record(level)
        if level.count == 0:
            # pad remaining levels: nothing can grow from an empty level
            for n in range(level.n + 1, n_max + 1):
                result.counts.append((n, 0))
                result.reached = n
            break

    result.elapsed = time.monotonic() - start
    if retain_forms:
        result.levels = retained
    return result


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------


def _oracle_patch(ct: CompiledTiling, n_max: int):
    """BFS patch guaranteed to contain a representative of every class.

    Every class has a member with one cell on a unit-cell position, and
    the rest within graph distance n_max - 1 of it; the patch is the ball
    of that radius plus the largest unit-cell-to-rep distance.
    """
    D = ct.scale
    # distances of all unit-cell vertex classes from the reps
    targets: Set[ICell] = set()
    for images in ct.images:
        for image in images:
            targets.add(tuple(v % D for v in image))
    dist: Dict[ICell, int] = {rep: 0 for rep in ct.reps}
    frontier = list(dist)
    radius = 0
    found = {t for t in targets if t in dist}
    while found != targets:
        radius += 1
        if radius > 16:
            raise RuntimeError("patch too small: unit-cell classes unreachable from reps")
        nxt = []
        for p in frontier:
            for q in ct.neighbors_of(p):
                if q not in dist:
                    dist[q] = radius
                    nxt.append(q)
                    r = tuple(v % D for v in q)
                    if r in targets:
                        found.add(r)
        frontier = nxt
    margin = radius
    total = margin + max(0, n_max - 1)
    while radius < total:
        radius += 1
        nxt = []
        for p in frontier:
            for q in ct.neighbors_of(p):
                if q not in dist:
                    dist[q] = radius
                    nxt.append(q)
        frontier = nxt
    return sorted(dist)


def _shift_normalize(ct: CompiledTiling, subset: Iterable[ICell]) -> Tuple[ICell, ...]:
    D = ct.scale
    pts = list(subset)
    mins = [min(p[j] for p in pts) for j in range(ct.dim)]
    shift = [-(m // D) * D for m in mins]
    return tuple(sorted(
        tuple(p[j] + shift[j] for j in range(ct.dim)) for p in pts
    ))


def _connected_subset_classes(ct: CompiledTiling, n_max: int):
    """Translation classes of every connected subset of a sufficient patch.

    Subsets are generated by classic anchored growth — each is rooted at
    its lowest-index cell and extended only through cells of higher
    index, so each subset appears exactly once — and folded immediately
    into translation-normalized class keys to keep memory proportional
    to the class counts, not the subset counts.  Cached per tiling.
    """
    cache = getattr(ct, "_oracle_class_cache", None)
    if cache is None:
        cache = ct._oracle_class_cache = {}
    for cached_n, classes in cache.items():
        if cached_n >= n_max:
            return classes[: n_max + 1]

    cells = _oracle_patch(ct, n_max)
    adjacency = {c: ct.neighbors_of(c) for c in cells}
    index = {c: i for i, c in enumerate(cells)}
    classes: List[Dict[Tuple[ICell, ...], int]] = [{} for _ in range(n_max + 1)]

    def record(current: List[ICell]):
        table = classes[len(current)]
        key = _shift_normalize(ct, current)
        if key not in table:
            table[key] = len(table)

    def grow(current: List[ICell], untried: List[ICell], seen: Set[ICell], root: int):
        for pos, cand in enumerate(untried):
            current.append(cand)
            record(current)
            if len(current) < n_max:
                fresh = [
                    q for q in adjacency[cand]
                    if q in index and index[q] > root and q not in seen
                ]
                grow(current, untried[pos + 1:] + fresh, seen | set(fresh), root)
            current.pop()

    for i, c in enumerate(cells):
        record([c])
        if n_max == 1:
            continue
        untried = [q for q in adjacency[c] if q in index and index[q] > i]
        grow([c], untried, {c} | set(untried), i)
    cache.clear()
    cache[n_max] = classes
    return classes


def brute_oracle(spec: TilingSpec, mode: SymmetryMode, n_max: int) -> List[int]:
    """Independent class counts by exhaustive patch search plus union-find.

    Enumerates all connected cell sets in a provably sufficient patch,
    buckets them by translation, and merges buckets connected by any
    orientation image.  No canonical-minimum machinery is involved.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1 for the oracle")
    ct = compile_tiling(spec)
    by_size = _connected_subset_classes(ct, n_max)

    idxs = mode_orientation_indices(spec, mode)
    counts = []
    for n in range(1, n_max + 1):
        classes = by_size[n]
        parent = list(range(len(classes)))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        def union(a: int, b: int):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[rb] = ra

        for key, ci in classes.items():
            for k in idxs:
                L = ct.linear[k]
                off = ct.offset[k]
                image = [
                    tuple(
                        int(sum(L[r, c] * p[c] for c in range(ct.dim)) + off[r])
                        for r in range(ct.dim)
                    )
                    for p in key
                ]
                other = classes.get(_shift_normalize(ct, image))
                if other is not None:
                    union(ci, other)
        counts.append(len({find(i) for i in range(len(classes))}))
    return counts
