"""Render polyforms to SVG (2D tilings) and OFF (3D tilings).

Each cell is drawn as its orbit's authored outline, transformed by the
affine map that classifies the cell and then by the tiling's embedding
matrix.  Geometry is exact until the final float conversion; styling is
a fixed per-orbit palette and not part of any contract.
"""

from __future__ import annotations

import math
from typing import Iterable, List, Optional, Sequence, Tuple

from .exact import Point, vec_add
from .tiling import NotACell, TilingSpec, classify

PALETTE = ("#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1", "#edc948")
STROKE = "#333333"


class MissingRenderData(RuntimeError):
    """The tiling file carries no outline/embedding for this request."""


def _embed(spec: TilingSpec, p: Point) -> Tuple[float, ...]:
    E = spec.embedding
    return tuple(
        sum(E[r][c] * float(p[c]) for c in range(spec.dim)) for r in range(spec.dim)
    )


def _require_render(spec: TilingSpec) -> None:
    if spec.embedding is None or all(o.render is None for o in spec.orbits):
        raise MissingRenderData(f"tiling {spec.name!r} has no render data")


def cell_geometry(spec: TilingSpec, cell: Point):
    """(orbit index for color, embedded outline vertices, face index loops)."""
    _require_render(spec)
    matches = classify(spec, cell)
    if not matches:
        raise NotACell(f"{cell} is not a cell of this tiling")
    witness = matches[0]
    orbit = spec.orbit_by_id(witness.orbit)
    if orbit.render is None:
        raise MissingRenderData(
            f"tiling {spec.name!r} orbit {orbit.id} has no render data"
        )
    omap = spec.orientations[witness.orientation]
    verts = [
        _embed(spec, vec_add(omap.apply(v), witness.lattice_shift))
        for v in orbit.render.outline
    ]
    color_idx = [o.id for o in spec.orbits].index(orbit.id)
    return color_idx, verts, orbit.render.faces


# -- SVG ---------------------------------------------------------------------


def _svg_polygons(spec: TilingSpec, cells: Sequence[Point], dx: float, dy: float) -> Tuple[List[str], Tuple[float, float, float, float]]:
    parts = []
    xs: List[float] = []
    ys: List[float] = []
    for cell in cells:
        color_idx, verts, _ = cell_geometry(spec, cell)
        # SVG y axis points down; flip so galleries read like the plane
        pts = [(x + dx, -(y) + dy) for x, y in verts]
        xs.extend(p[0] for p in pts)
        ys.extend(p[1] for p in pts)
        point_attr = " ".join(f"{x:.6g},{y:.6g}" for x, y in pts)
        fill = PALETTE[color_idx % len(PALETTE)]
        parts.append(
            f'<polygon points="{point_attr}" fill="{fill}" '
            f'stroke="{STROKE}" stroke-width="0.08"/>'
        )
    return parts, (min(xs), min(ys), max(xs), max(ys))


def _svg_document(body: List[str], bbox: Tuple[float, float, float, float]) -> str:
    x0, y0, x1, y1 = bbox
    pad = 0.5
    view = f"{x0 - pad:.6g} {y0 - pad:.6g} {x1 - x0 + 2 * pad:.6g} {y1 - y0 + 2 * pad:.6g}"
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{view}">\n'
        + "\n".join(body)
        + "\n</svg>\n"
    )


def form_to_svg(spec: TilingSpec, cells: Sequence[Point], title: Optional[str] = None) -> str:
    """One polyform as a standalone SVG document."""
    if spec.dim != 2:
        raise MissingRenderData("SVG export requires a 2-dimensional tiling")
    polys, bbox = _svg_polygons(spec, cells, 0.0, 0.0)
    body = []
    if title:
        body.append(f"<title>{title}</title>")
    body.extend(polys)
    return _svg_document(body, bbox)


def gallery_svg(spec: TilingSpec, forms: Sequence[Sequence[Point]]) -> str:
    """All forms tiled into one SVG, row-major on a uniform grid."""
    if spec.dim != 2:
        raise MissingRenderData("SVG export requires a 2-dimensional tiling")
    _require_render(spec)
    if not forms:
        raise ValueError("no forms to render")
    # First pass at origin to size the grid cells uniformly.
    sized = []
    span = 0.0
    for cells in forms:
        polys, bbox = _svg_polygons(spec, cells, 0.0, 0.0)
        sized.append((cells, bbox))
        span = max(span, bbox[2] - bbox[0], bbox[3] - bbox[1])
    pitch = span + 1.0
    columns = max(1, math.ceil(math.sqrt(len(forms))))
    body: List[str] = []
    bboxes = []
    for i, (cells, bbox) in enumerate(sized):
        dx = (i % columns) * pitch - bbox[0]
        dy = (i // columns) * pitch - bbox[1]
        polys, placed = _svg_polygons(spec, cells, dx, dy)
        body.extend(polys)
        bboxes.append(placed)
    total = (
        min(b[0] for b in bboxes),
        min(b[1] for b in bboxes),
        max(b[2] for b in bboxes),
        max(b[3] for b in bboxes),
    )
    return _svg_document(body, total)


# -- OFF ---------------------------------------------------------------------


def form_to_off(spec: TilingSpec, cells: Sequence[Point]) -> str:
    """One polyform as an OFF mesh, one polyhedron per cell (no vertex sharing)."""
    if spec.dim != 3:
        raise MissingRenderData("OFF export requires a 3-dimensional tiling")
    vertices: List[Tuple[float, ...]] = []
    faces: List[Tuple[int, ...]] = []
    for cell in cells:
        _, verts, cell_faces = cell_geometry(spec, cell)
        if not cell_faces:
            raise MissingRenderData(
                f"tiling {spec.name!r} has no face data for OFF export"
            )
        offset = len(vertices)
        vertices.extend(verts)
        faces.extend(tuple(i + offset for i in loop) for loop in cell_faces)
    lines = ["OFF", f"{len(vertices)} {len(faces)} 0"]
    for v in vertices:
        lines.append(" ".join(f"{c:.6g}" for c in v))
    for loop in faces:
        lines.append(f"{len(loop)} " + " ".join(str(i) for i in loop))
    return "\n".join(lines) + "\n"
