#!/usr/bin/env python3
"""Regenerate the built-in tiling data files in src/polyform/data/tilings.

Each tiling is authored from standard lattice geometry: orientation
coset representatives (point group elements composed with translation
coset offsets), orbit representatives, and absolute neighbor positions,
all in lattice-basis coordinates.  Run from the repository root.
"""

import itertools
import json
import math
import os
from fractions import Fraction

OUT = os.path.join(os.path.dirname(__file__), "..", "src", "polyform", "data", "tilings")


def rat(x) -> str:
    return str(Fraction(x))


def point(p):
    return [rat(c) for c in p]


def matrix(m):
    return [point(row) for row in m]


def signed_permutations(dim):
    """All signed permutation matrices of the given dimension."""
    mats = []
    for perm in itertools.permutations(range(dim)):
        for signs in itertools.product((1, -1), repeat=dim):
            rows = []
            for i in range(dim):
                row = [0] * dim
                row[perm[i]] = signs[i]
                rows.append(row)
            mats.append(rows)
    return mats


def orientation(linear, offset=None):
    dim = len(linear)
    if offset is None:
        offset = [0] * dim
    return {"linear": matrix(linear), "offset": point(offset)}


def identity_first(orients):
    dim = len(orients[0]["linear"])
    ident = orientation([[1 if i == j else 0 for j in range(dim)] for i in range(dim)])

    def is_ident(o):
        return o == ident

    rest = [o for o in orients if not is_ident(o)]
    return [ident] + rest


def mat_apply(linear, p):
    return tuple(sum(Fraction(linear[i][j]) * p[j] for j in range(len(p)))
                 for i in range(len(p)))


def orbit(orbit_id, rep, nbrs, render=None):
    out = {"id": orbit_id, "rep": point(rep), "neighbors": [point(u) for u in nbrs]}
    if render is not None:
        out["render"] = render
    return out


def write(name, spec):
    path = os.path.join(OUT, f"{name}.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(spec, fh, indent=1)
        fh.write("\n")
    print("wrote", path)


def square():
    d4 = [m for m in signed_permutations(2)]
    cell = [
        [Fraction(-1, 2), Fraction(-1, 2)],
        [Fraction(1, 2), Fraction(-1, 2)],
        [Fraction(1, 2), Fraction(1, 2)],
        [Fraction(-1, 2), Fraction(1, 2)],
    ]
    return {
        "name": "square",
        "dim": 2,
        "orientations": identity_first([orientation(m) for m in d4]),
        "orbits": [orbit(0, (0, 0), [(1, 0), (-1, 0), (0, 1), (0, -1)],
                         {"outline": [point(v) for v in cell]})],
        "embedding": [[1, 0], [0, 1]],
        "metadata": {"oeis": "A000105", "description": "square tiling (polyominoes)"},
    }


def cubic():
    half = Fraction(1, 2)
    verts = list(itertools.product((-half, half), repeat=3))
    vid = {v: i for i, v in enumerate(verts)}

    def face(axis, sign):
        pts = [v for v in verts if v[axis] == sign * half]
        # order the 4 face vertices into a loop
        a, b = [i for i in range(3) if i != axis]
        pts.sort(key=lambda v: (v[a], v[b]))
        loop = [pts[0], pts[1], pts[3], pts[2]]
        return [vid[v] for v in loop]

    faces = [face(axis, sign) for axis in range(3) for sign in (1, -1)]
    nbrs = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
    return {
        "name": "cubic",
        "dim": 3,
        "orientations": identity_first([orientation(m) for m in signed_permutations(3)]),
        "orbits": [orbit(0, (0, 0, 0), nbrs,
                         {"outline": [point(v) for v in verts], "faces": faces})],
        "embedding": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        "metadata": {"oeis": "A038119", "description": "cubic honeycomb (polycubes)"},
    }


def snub_trihexagonal():
    # Sixfold rotation in the published translation basis; offsets zero.
    a1 = [[1, 1], [-1, 0]]
    mats = []
    m = [[1, 0], [0, 1]]

    def mul(x, y):
        return [[sum(x[i][k] * y[k][j] for k in range(2)) for j in range(2)]
                for i in range(2)]

    for _ in range(6):
        mats.append(m)
        m = mul(a1, m)

    f = Fraction
    e1 = [(f(-10, 21), f(8, 21)), (f(-8, 21), f(-2, 21)), (f(2, 21), f(-10, 21)),
          (f(10, 21), f(-8, 21)), (f(8, 21), f(2, 21)), (f(-2, 21), f(10, 21))]
    e2 = [(f(8, 21), f(2, 21)), (f(11, 21), f(8, 21)), (f(2, 21), f(11, 21))]
    # Third orbit's neighbors chosen so the edge relation is symmetric
    # with e1/e2 (hexagon above at (0,1), the fixed triangle, and the
    # mirror-image triangle sharing its top edge).
    e3 = [(f(0), f(1)), (f(1, 3), f(1, 3)), (f(-2, 21), f(10, 21))]

    # Tile corners on the fine triangular lattice u=(2,0), v=(1,sqrt(3)),
    # expressed in the translation basis (denominator 7).
    u = (f(3, 7), f(-1, 7))
    v = (f(1, 7), f(2, 7))

    def add(p, q):
        return (p[0] + q[0], p[1] + q[1])

    def sub(p, q):
        return (p[0] - q[0], p[1] - q[1])

    def neg(p):
        return (-p[0], -p[1])

    hexagon = [u, v, sub(v, u), neg(u), neg(v), sub(u, v)]
    tri2 = [v, add(v, v), (f(4, 7), f(1, 7))]  # corners v, 2v, u+v
    tri3 = [v, (f(-1, 7), f(5, 7)), add(v, v)]  # corners v, 2v-u, 2v
    return {
        "name": "snub-trihexagonal",
        "dim": 2,
        "orientations": [orientation(m) for m in mats],
        "orbits": [
            orbit(1, (0, 0), e1, {"outline": [point(p) for p in hexagon]}),
            orbit(2, (f(1, 3), f(1, 3)), e2, {"outline": [point(p) for p in tri2]}),
            orbit(3, (f(2, 21), f(11, 21)), e3, {"outline": [point(p) for p in tri3]}),
        ],
        "embedding": [[5, 1], [math.sqrt(3), 3 * math.sqrt(3)]],
        "metadata": {"oeis": "A383908",
                     "description": "snub trihexagonal tiling (hexagons and triangles)"},
    }


def tet_oct():
    # Alternated cubic honeycomb; lattice basis spans two cube edges, so
    # octahedra sit at half-odd positions and tetrahedra at quarter points.
    f = Fraction
    half = f(1, 2)
    quarter = f(1, 4)
    coset_offsets = [(0, 0, 0), (half, half, 0), (half, 0, half), (0, half, half)]
    orients = []
    for m in signed_permutations(3):
        for off in coset_offsets:
            orients.append(orientation(m, off))

    oct_rep = (f(0), f(0), half)
    oct_nbrs = [
        (sx * quarter, sy * quarter, half + sz * quarter)
        for sx, sy, sz in itertools.product((1, -1), repeat=3)
    ]
    tet_rep = (quarter, quarter, quarter)
    tet_nbrs = [
        (quarter + sx * quarter, quarter + sy * quarter, quarter + sz * quarter)
        for sx, sy, sz in itertools.product((1, -1), repeat=3)
        if sx * sy * sz == 1
    ]
    return {
        "name": "tet-oct",
        "dim": 3,
        "orientations": identity_first(orients),
        "orbits": [
            orbit(0, oct_rep, oct_nbrs),
            orbit(1, tet_rep, tet_nbrs),
        ],
        "embedding": [[2, 0, 0], [0, 2, 0], [0, 0, 2]],
        "metadata": {"oeis": "A343909",
                     "description": "tetrahedral-octahedral (alternated cubic) honeycomb"},
    }


def rectified_cubic():
    f = Fraction
    half = f(1, 2)
    cubocta_nbrs = (
        [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
        + [(sx * half, sy * half, sz * half)
           for sx, sy, sz in itertools.product((1, -1), repeat=3)]
    )
    oct_nbrs = [
        (half + sx * half, half + sy * half, half + sz * half)
        for sx, sy, sz in itertools.product((1, -1), repeat=3)
    ]
    return {
        "name": "rectified-cubic",
        "dim": 3,
        "orientations": identity_first([orientation(m) for m in signed_permutations(3)]),
        "orbits": [
            orbit(0, (0, 0, 0), cubocta_nbrs),
            orbit(1, (half, half, half), oct_nbrs),
        ],
        "embedding": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        "metadata": {"oeis": "A384254",
                     "description": "rectified cubic (cuboctahedral-octahedral) honeycomb"},
    }


def truncated_octahedral():
    f = Fraction
    half = f(1, 2)
    orients = []
    for m in signed_permutations(3):
        for off in [(0, 0, 0), (half, half, half)]:
            orients.append(orientation(m, off))
    nbrs = (
        [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
        + [(sx * half, sy * half, sz * half)
           for sx, sy, sz in itertools.product((1, -1), repeat=3)]
    )
    return {
        "name": "truncated-octahedral",
        "dim": 3,
        "orientations": identity_first(orients),
        "orbits": [orbit(0, (0, 0, 0), nbrs)],
        "embedding": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        "metadata": {"oeis": "A038181",
                     "description": "bitruncated cubic honeycomb (splatts)"},
    }


def disphenoid():
    # Cells are the vertices of the bitruncated cubic honeycomb (one
    # disphenoid per vertex of that honeycomb), adjacent along its edges.
    f = Fraction
    half = f(1, 2)
    rep = (f(0), f(1, 4), half)
    nbrs = [
        (f(1, 4), f(0), half),
        (f(-1, 4), f(0), half),
        (f(0), half, f(1, 4)),
        (f(0), half, f(3, 4)),
    ]
    orients = []
    for m in signed_permutations(3):
        for off in [(0, 0, 0), (half, half, half)]:
            orients.append(orientation(m, off))
    return {
        "name": "disphenoid",
        "dim": 3,
        "orientations": identity_first(orients),
        "orbits": [orbit(0, rep, nbrs)],
        "embedding": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        "metadata": {"oeis": "A385024",
                     "description": "tetragonal disphenoid honeycomb "
                                    "(dual of the bitruncated cubic)"},
    }


def main():
    os.makedirs(OUT, exist_ok=True)
    write("square", square())
    write("cubic", cubic())
    write("snub-trihexagonal", snub_trihexagonal())
    write("tet-oct", tet_oct())
    write("rectified-cubic", rectified_cubic())
    write("truncated-octahedral", truncated_octahedral())
    write("disphenoid", disphenoid())


if __name__ == "__main__":
    main()
