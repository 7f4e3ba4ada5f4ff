#!/usr/bin/env python3
"""Regenerate the shipped packing instance files in src/polyform/data/instances.

Piece lists come straight from the enumerator, so the files stay in sync
with the canonical serialization.  Run from the repository root after
the package is installed.
"""

import json
import os
from fractions import Fraction

from polyform import SymmetryMode, load_builtin
from polyform.enumeration import enumerate_counts, serialize_level

OUT = os.path.join(
    os.path.dirname(__file__), "..", "src", "polyform", "data", "instances"
)


def forms(tiling: str, mode: SymmetryMode, n: int):
    spec = load_builtin(tiling)
    result = enumerate_counts(spec, mode, n, retain_forms=True)
    return serialize_level(spec, result.levels[-1], mode)


def write(name: str, payload: dict):
    path = os.path.join(OUT, name)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")
    print("wrote", path, f"({len(payload['pieces'])} pieces)")


def pentomino_3x20():
    pieces = forms("square", SymmetryMode.FREE, 5)
    assert len(pieces) == 12
    write("pentomino_3x20.json", {
        "tiling": "square",
        "region": {"kind": "rect", "width": 20, "height": 3},
        "mode": "free",
        "pieces": pieces,
        "placement_group": "rotations-and-reflections",
        "multiplicity": "each-piece-once",
    })


def splatt_3x5x8():
    pieces = forms("truncated-octahedral", SymmetryMode.ONE_SIDED, 4)
    assert len(pieces) == 44
    write("splatt_3x5x8.json", {
        "tiling": "truncated-octahedral",
        "region": {"kind": "bcc-box", "a": 3, "b": 5, "c": 8},
        "mode": "one-sided",
        "pieces": pieces,
        "placement_group": "rotations-only",
        "multiplicity": "each-piece-once",
    })


def hexacube_10x10x10():
    hexa = forms("cubic", SymmetryMode.ONE_SIDED, 6)
    assert len(hexa) == 166
    pieces = [{"form": "0,0,0", "copies": 4}] + list(hexa)
    write("hexacube_10x10x10.json", {
        "tiling": "cubic",
        "region": {"kind": "box", "a": 10, "b": 10, "c": 10},
        "mode": "one-sided",
        "pieces": pieces,
        "placement_group": "rotations-only",
        "multiplicity": "each-piece-once",
    })


def kepert_tet5():
    pieces = forms("tet-oct", SymmetryMode.ONE_SIDED, 4)
    assert len(pieces) == 11
    # Size-5 tetrahedral region minus the 11 tetrahedra that must stay
    # empty for full tetrahedral symmetry: 4 vertices, 6 edge midpoints,
    # and the center.
    h = Fraction(1, 2)
    q = Fraction(1, 4)
    spans = [(h, h, 0), (h, 0, h), (0, h, h)]

    def at(base, i, j, k):
        return tuple(
            base[t] + i * spans[0][t] + j * spans[1][t] + k * spans[2][t]
            for t in range(3)
        )

    excluded = {
        (0, 0, 0), (4, 0, 0), (0, 4, 0), (0, 0, 4),       # vertices
        (2, 0, 0), (0, 2, 0), (0, 0, 2),
        (2, 2, 0), (2, 0, 2), (0, 2, 2),                  # edge midpoints
        (1, 1, 1),                                        # center
    }
    cells = []
    for i in range(5):
        for j in range(5 - i):
            for k in range(5 - i - j):
                if (i, j, k) not in excluded:
                    cells.append(at((q, q, q), i, j, k))
    for i in range(4):
        for j in range(4 - i):
            for k in range(4 - i - j):
                cells.append(at((h, h, h), i, j, k))
    assert len(cells) == 44
    cell_strings = [",".join(str(c) for c in p) for p in cells]
    write("kepert_tet5.json", {
        "tiling": "tet-oct",
        "region": {"kind": "explicit", "cells": cell_strings},
        "mode": "one-sided",
        "pieces": pieces,
        "placement_group": "rotations-only",
        "multiplicity": "each-piece-once",
    })


if __name__ == "__main__":
    pentomino_3x20()
    splatt_3x5x8()
    hexacube_10x10x10()
    kepert_tet5()
