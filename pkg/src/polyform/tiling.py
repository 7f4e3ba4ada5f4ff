"""Periodic Euclidean graph model: file format, parser, validator, lookups.

A tiling file describes the dual graph of a periodic tessellation:
orientation coset representatives of its automorphism group modulo the
translation lattice, plus one representative cell per vertex orbit with
the absolute positions of that representative's neighbors.  Everything
downstream (canonicalization, enumeration, packing, export) consumes
this model through :func:`classify` and :func:`neighbors`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Dict, List, Optional, Sequence, Tuple

from .exact import (
    AffineMap,
    Point,
    format_point,
    parse_rat,
    point_cmp,
    vec_add,
    vec_sub,
)

BUILTIN_NAMES = (
    "square",
    "cubic",
    "snub-trihexagonal",
    "tet-oct",
    "rectified-cubic",
    "truncated-octahedral",
    "disphenoid",
)


class TilingParseError(ValueError):
    """Raised on any syntactic or structural problem in a tiling file."""


class NotACell(ValueError):
    """The queried point is not a vertex of the tiling's dual graph."""


@dataclass(frozen=True)
class RenderGeometry:
    """Cell outline in lattice-basis coordinates.

    2D: ``outline`` is the polygon's vertex loop and ``faces`` is empty.
    3D: ``outline`` is the polyhedron vertex list and ``faces`` holds
    per-face vertex index loops.
    """

    outline: Tuple[Point, ...]
    faces: Tuple[Tuple[int, ...], ...] = ()


@dataclass(frozen=True)
class OrbitSpec:
    id: int
    rep: Point
    neighbor_points: Tuple[Point, ...]
    render: Optional[RenderGeometry] = None


@dataclass(frozen=True)
class VertexClass:
    """Constructive witness that a point is a vertex.

    Reconstruction: ``orientations[orientation](rep of orbit) + lattice_shift``
    equals the classified point.
    """

    orbit: int
    orientation: int
    lattice_shift: Point


@dataclass(frozen=True)
class TilingSpec:
    name: str
    dim: int
    orientations: Tuple[AffineMap, ...]
    orbits: Tuple[OrbitSpec, ...]
    embedding: Optional[Tuple[Tuple[float, ...], ...]] = None
    metadata: dict = field(default_factory=dict, compare=False, hash=False)

    def orbit_by_id(self, orbit_id: int) -> OrbitSpec:
        for orbit in self.orbits:
            if orbit.id == orbit_id:
                return orbit
        raise KeyError(f"no orbit with id {orbit_id} in tiling {self.name!r}")


def _require_keys(obj: dict, where: str, required: Sequence[str], optional: Sequence[str] = ()):
    if not isinstance(obj, dict):
        raise TilingParseError(f"{where}: expected an object")
    unknown = set(obj) - set(required) - set(optional)
    if unknown:
        raise TilingParseError(f"{where}: unknown keys {sorted(unknown)}")
    missing = [k for k in required if k not in obj]
    if missing:
        raise TilingParseError(f"{where}: missing keys {missing}")


def _parse_rat_at(value, where: str) -> Fraction:
    if not isinstance(value, str):
        raise TilingParseError(f"{where}: rationals must be strings, got {value!r}")
    try:
        return parse_rat(value)
    except ValueError as exc:
        raise TilingParseError(f"{where}: {exc}") from exc


def _parse_point_at(value, dim: int, where: str) -> Point:
    if not isinstance(value, list) or len(value) != dim:
        raise TilingParseError(f"{where}: expected an array of {dim} rationals")
    return tuple(_parse_rat_at(v, f"{where}[{i}]") for i, v in enumerate(value))


def _parse_orientation(obj, dim: int, where: str) -> AffineMap:
    _require_keys(obj, where, ["linear", "offset"])
    linear = obj["linear"]
    if not isinstance(linear, list) or len(linear) != dim:
        raise TilingParseError(f"{where}.linear: expected {dim} rows")
    rows = tuple(
        _parse_point_at(row, dim, f"{where}.linear[{i}]") for i, row in enumerate(linear)
    )
    offset = _parse_point_at(obj["offset"], dim, f"{where}.offset")
    return AffineMap(rows, offset)


def _parse_render(obj, dim: int, where: str) -> RenderGeometry:
    _require_keys(obj, where, ["outline"], ["faces"])
    outline = obj["outline"]
    if not isinstance(outline, list) or len(outline) < 3:
        raise TilingParseError(f"{where}.outline: expected at least 3 vertices")
    points = tuple(
        _parse_point_at(v, dim, f"{where}.outline[{i}]") for i, v in enumerate(outline)
    )
    faces: Tuple[Tuple[int, ...], ...] = ()
    if "faces" in obj:
        raw = obj["faces"]
        if not isinstance(raw, list):
            raise TilingParseError(f"{where}.faces: expected an array")
        faces = tuple(tuple(int(i) for i in face) for face in raw)
        for face in faces:
            if any(i < 0 or i >= len(points) for i in face):
                raise TilingParseError(f"{where}.faces: vertex index out of range")
    return RenderGeometry(points, faces)


def parse_tiling(data) -> TilingSpec:
    """Parse a tiling spec from bytes, text, or an already-decoded dict."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    if isinstance(data, str):
        try:
            obj = json.loads(data)
        except json.JSONDecodeError as exc:
            raise TilingParseError(
                f"syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
            ) from exc
    else:
        obj = data

    _require_keys(obj, "top level", ["name", "dim", "orientations", "orbits"],
                  ["embedding", "metadata"])
    name = obj["name"]
    if not isinstance(name, str) or not name:
        raise TilingParseError("name: expected a non-empty string")
    dim = obj["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise TilingParseError("dim: expected a positive integer")

    raw_orientations = obj["orientations"]
    if not isinstance(raw_orientations, list) or not raw_orientations:
        raise TilingParseError("orientations: expected a non-empty array")
    orientations = tuple(
        _parse_orientation(o, dim, f"orientations[{k}]")
        for k, o in enumerate(raw_orientations)
    )
    if not orientations[0].is_identity():
        raise TilingParseError("orientations[0] must be the identity map")
    for k, omap in enumerate(orientations):
        if not omap.is_unimodular():
            raise TilingParseError(
                f"orientations[{k}]: orientation does not preserve lattice "
                "(linear part must be integer with determinant +/-1)"
            )
        if any(not (0 <= c < 1) for c in omap.offset):
            raise TilingParseError(
                f"orientations[{k}].offset: must be translation-normalized into [0,1)"
            )

    raw_orbits = obj["orbits"]
    if not isinstance(raw_orbits, list) or not raw_orbits:
        raise TilingParseError("orbits: expected a non-empty array")
    orbits: List[OrbitSpec] = []
    seen_ids = set()
    for i, raw in enumerate(raw_orbits):
        where = f"orbits[{i}]"
        _require_keys(raw, where, ["id", "rep", "neighbors"], ["render"])
        orbit_id = raw["id"]
        if not isinstance(orbit_id, int):
            raise TilingParseError(f"{where}.id: expected an integer")
        if orbit_id in seen_ids:
            raise TilingParseError(f"{where}.id: duplicate orbit id {orbit_id}")
        seen_ids.add(orbit_id)
        rep = _parse_point_at(raw["rep"], dim, f"{where}.rep")
        if any(not (0 <= c < 1) for c in rep):
            raise TilingParseError(f"{where}.rep: coordinates must lie in [0,1)")
        raw_nbrs = raw["neighbors"]
        if not isinstance(raw_nbrs, list):
            raise TilingParseError(f"{where}.neighbors: expected an array")
        nbrs = tuple(
            _parse_point_at(v, dim, f"{where}.neighbors[{j}]")
            for j, v in enumerate(raw_nbrs)
        )
        if len(set(nbrs)) != len(nbrs):
            raise TilingParseError(f"{where}.neighbors: duplicate neighbor points")
        if rep in nbrs:
            raise TilingParseError(f"{where}.neighbors: representative listed as its own neighbor")
        render = None
        if "render" in raw and raw["render"] is not None:
            render = _parse_render(raw["render"], dim, f"{where}.render")
        orbits.append(OrbitSpec(orbit_id, rep, nbrs, render))

    embedding = None
    if "embedding" in obj and obj["embedding"] is not None:
        raw_emb = obj["embedding"]
        if (not isinstance(raw_emb, list) or len(raw_emb) != dim
                or any(not isinstance(r, list) or len(r) != dim for r in raw_emb)):
            raise TilingParseError("embedding: expected a dim x dim array of numbers")
        embedding = tuple(tuple(float(x) for x in row) for row in raw_emb)

    metadata = obj.get("metadata", {})
    if not isinstance(metadata, dict):
        raise TilingParseError("metadata: expected an object")

    return TilingSpec(name, dim, orientations, tuple(orbits), embedding, dict(metadata))


def load_builtin(name: str) -> TilingSpec:
    if name not in BUILTIN_NAMES:
        raise KeyError(f"unknown built-in tiling {name!r}; known: {', '.join(BUILTIN_NAMES)}")
    text = resources.files("polyform.data.tilings").joinpath(f"{name}.json").read_text("utf-8")
    return parse_tiling(text)


def resolve_tiling(name_or_path: str) -> TilingSpec:
    """Load a built-in tiling by name, or parse a tiling file by path."""
    if name_or_path in BUILTIN_NAMES:
        return load_builtin(name_or_path)
    with open(name_or_path, "rb") as fh:
        return parse_tiling(fh.read())


def _is_integral(point: Point) -> bool:
    return all(c.denominator == 1 for c in point)


def _orbit_images(spec: TilingSpec):
    """Precomputed orientations[k](rep_i) for all orbits and orientations."""
    return [
        [omap.apply(orbit.rep) for omap in spec.orientations]
        for orbit in spec.orbits
    ]


def classify(spec: TilingSpec, p: Point) -> List[VertexClass]:
    """All (orbit, orientation, integral shift) witnesses that p is a vertex."""
    if len(p) != spec.dim:
        raise ValueError(f"point of dimension {len(p)} on a {spec.dim}-dimensional tiling")
    matches = []
    for orbit in spec.orbits:
        for k, omap in enumerate(spec.orientations):
            t = vec_sub(p, omap.apply(orbit.rep))
            if _is_integral(t):
                matches.append(VertexClass(orbit.id, k, t))
    return matches


def neighbors(spec: TilingSpec, p: Point) -> frozenset:
    """Neighbor set of vertex p, via its first classification witness."""
    matches = classify(spec, p)
    if not matches:
        raise NotACell(f"{format_point(p)} is not a cell of this tiling")
    witness = matches[0]
    orbit = spec.orbit_by_id(witness.orbit)
    omap = spec.orientations[witness.orientation]
    return frozenset(
        vec_add(omap.apply(u), witness.lattice_shift) for u in orbit.neighbor_points
    )


def normalize_unit_cell(point: Point) -> Point:
    """Shift each coordinate into [0,1) by an integer translation."""
    from math import floor
    return tuple(c - floor(c) for c in point)


def orbit_translation_classes(spec: TilingSpec, orbit_id: int) -> List[Point]:
    """Distinct unit-cell positions of one orbit under all orientations."""
    orbit = spec.orbit_by_id(orbit_id)
    seen = []
    for omap in spec.orientations:
        q = normalize_unit_cell(omap.apply(orbit.rep))
        if q not in seen:
            seen.append(q)
    seen.sort(key=lambda pt: tuple(pt))
    return seen


def bfs_patch(spec: TilingSpec, radius: int) -> Dict[Point, int]:
    """Graph-distance ball of the given radius around every orbit rep."""
    dist: Dict[Point, int] = {orbit.rep: 0 for orbit in spec.orbits}
    frontier = list(dist)
    for r in range(1, radius + 1):
        nxt = []
        for p in frontier:
            for q in neighbors(spec, p):
                if q not in dist:
                    dist[q] = r
                    nxt.append(q)
        frontier = nxt
    return dist


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    details: Tuple[str, ...] = ()


@dataclass(frozen=True)
class ValidationReport:
    checks: Tuple[CheckResult, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failing(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def render(self) -> str:
        lines = []
        for c in self.checks:
            status = "pass" if c.passed else "FAIL"
            lines.append(f"{status}  {c.name}")
            for d in c.details[:20]:
                lines.append(f"       {d}")
        return "\n".join(lines)


def _check_closure(spec: TilingSpec) -> Tuple[CheckResult, CheckResult]:
    linear_index = {}
    for k, omap in enumerate(spec.orientations):
        linear_index.setdefault(omap.linear, []).append(k)

    def find_rep(candidate: AffineMap):
        for k in linear_index.get(candidate.linear, ()):
            if _is_integral(vec_sub(candidate.offset, spec.orientations[k].offset)):
                return k
        return None

    closure_fails = []
    for j, a in enumerate(spec.orientations):
        for k, b in enumerate(spec.orientations):
            if find_rep(a.compose(b)) is None:
                closure_fails.append(
                    f"orientations[{j}] o orientations[{k}] has no representative"
                )
    inverse_fails = []
    for j, a in enumerate(spec.orientations):
        if find_rep(a.inverse()) is None:
            inverse_fails.append(f"orientations[{j}] has no inverse representative")
    return (
        CheckResult("orientation-closure", not closure_fails, tuple(closure_fails)),
        CheckResult("orientation-inverses", not inverse_fails, tuple(inverse_fails)),
    )


def validate(spec: TilingSpec, radius: int = 4) -> ValidationReport:
    """Run all structural well-formedness checks on a radius-bounded patch."""
    if radius < 1:
        raise ValueError("radius must be >= 1")
    checks: List[CheckResult] = []

    closure, inverses = _check_closure(spec)
    checks.append(closure)
    checks.append(inverses)

    bad_linear = [
        f"orientations[{k}] linear part is not an integer matrix with determinant +/-1"
        for k, omap in enumerate(spec.orientations)
        if not omap.is_unimodular()
    ]
    checks.append(CheckResult("unimodular-linear", not bad_linear, tuple(bad_linear)))

    # BFS patch; every reached point must classify.
    images = _orbit_images(spec)
    orbit_ids = [o.id for o in spec.orbits]

    def classify_fast(p: Point):
        out = []
        for i, per_orbit in enumerate(images):
            for k, image in enumerate(per_orbit):
                t = vec_sub(p, image)
                if _is_integral(t):
                    out.append(VertexClass(orbit_ids[i], k, t))
        return out

    nbr_cache: Dict[Point, frozenset] = {}
    orbit_lookup = {o.id: o for o in spec.orbits}

    def neighbor_sets(p: Point, witnesses) -> List[frozenset]:
        sets = []
        for w in witnesses:
            orbit = orbit_lookup[w.orbit]
            omap = spec.orientations[w.orientation]
            sets.append(frozenset(
                vec_add(omap.apply(u), w.lattice_shift) for u in orbit.neighbor_points
            ))
        return sets

    totality_fails: List[str] = []
    stabilizer_fails: List[str] = []
    dist: Dict[Point, int] = {o.rep: 0 for o in spec.orbits}
    witness_of: Dict[Point, List[VertexClass]] = {}
    frontier = list(dist)
    for p in frontier:
        witness_of[p] = classify_fast(p)
    for r in range(1, radius + 1):
        nxt = []
        for p in frontier:
            if p not in nbr_cache:
                witnesses = witness_of[p]
                if not witnesses:
                    totality_fails.append(f"{format_point(p)} does not classify")
                    continue
                sets = neighbor_sets(p, witnesses)
                if any(s != sets[0] for s in sets[1:]):
                    stabilizer_fails.append(
                        f"neighbor set of {format_point(p)} differs across classify matches"
                    )
                nbr_cache[p] = sets[0]
            for q in nbr_cache[p]:
                if q not in dist:
                    dist[q] = r
                    witness_of[q] = classify_fast(q)
                    if not witness_of[q]:
                        totality_fails.append(f"{format_point(q)} does not classify")
                    nxt.append(q)
        frontier = nxt
    checks.append(CheckResult("classify-totality", not totality_fails, tuple(totality_fails[:20])))

    symmetry_fails = []
    for p, nbrs in nbr_cache.items():
        for q in nbrs:
            if q in nbr_cache and p not in nbr_cache[q]:
                symmetry_fails.append(
                    f"{format_point(q)} in neighbors({format_point(p)}) "
                    f"but not vice versa"
                )
    checks.append(CheckResult("adjacency-symmetry", not symmetry_fails, tuple(symmetry_fails[:20])))
    checks.append(CheckResult("stabilizer-consistency", not stabilizer_fails,
                              tuple(stabilizer_fails[:20])))

    rep_fails = []
    for orbit in spec.orbits:
        orbit_points = [
            p for p, ws in witness_of.items()
            if any(w.orbit == orbit.id for w in ws) and all(c >= 0 for c in p)
        ]
        earliest = min(orbit_points, key=lambda pt: tuple(pt), default=None)
        if earliest is not None and point_cmp(earliest, orbit.rep) < 0:
            rep_fails.append(
                f"orbit {orbit.id}: {format_point(earliest)} precedes rep "
                f"{format_point(orbit.rep)}"
            )
    checks.append(CheckResult("rep-lex-earliest", not rep_fails, tuple(rep_fails)))

    return ValidationReport(tuple(checks))
