import random

import numpy as np
import pytest

from polyform.canonical import SymmetryMode, canonical_form
from polyform.engine import compile_tiling
from polyform.exact import parse_point
from polyform.tiling import BUILTIN_NAMES, NotACell, load_builtin, neighbors

MODES = [SymmetryMode.FREE, SymmetryMode.ONE_SIDED, SymmetryMode.FIXED]

EXPECTED_SCALE = {
    "square": 1,
    "cubic": 1,
    "snub-trihexagonal": 21,
    "rectified-cubic": 2,
    "truncated-octahedral": 2,
    "tet-oct": 4,
    "disphenoid": 4,
}


def random_connected(ct, rng, size):
    """Grow a random connected scaled cell set from a random orbit rep."""
    start = ct.reps[rng.randrange(len(ct.reps))]
    cells = {start}
    frontier = list(ct.neighbors_of(start))
    while len(cells) < size:
        q = frontier.pop(rng.randrange(len(frontier)))
        if q in cells:
            continue
        cells.add(q)
        frontier.extend(ct.neighbors_of(q))
    return sorted(cells)


class TestCompile:
    def test_compile_is_cached_per_spec(self):
        spec = load_builtin("square")
        assert compile_tiling(spec) is compile_tiling(spec)

    @pytest.mark.parametrize("name", BUILTIN_NAMES)
    def test_scale_is_lcm_of_denominators(self, name):
        assert compile_tiling(load_builtin(name)).scale == EXPECTED_SCALE[name]


class TestCoordinateConversion:
    def test_round_trip(self):
        ct = compile_tiling(load_builtin("snub-trihexagonal"))
        p = parse_point("8/21,2/21")
        assert ct.from_scaled(ct.to_scaled(p)) == p
        assert ct.to_scaled(p) == (8, 2)

    def test_off_grid_rejected(self):
        ct = compile_tiling(load_builtin("square"))
        with pytest.raises(NotACell, match="not on the tiling's lattice grid"):
            ct.to_scaled(parse_point("1/3,0"))


class TestGraphAgreement:
    """The integer engine must agree with the exact rational layer."""

    @pytest.mark.parametrize("name", BUILTIN_NAMES)
    def test_neighbors_match_reference(self, name):
        spec = load_builtin(name)
        ct = compile_tiling(spec)
        rng = random.Random(hash(name) & 0xFFFF)
        for _ in range(20):
            cell = random_connected(ct, rng, 4)[rng.randrange(4)]
            point = ct.from_scaled(cell)
            expect = {ct.to_scaled(q) for q in neighbors(spec, point)}
            assert set(ct.neighbors_of(cell)) == expect

    def test_non_cell_raises(self):
        ct = compile_tiling(load_builtin("snub-trihexagonal"))
        with pytest.raises(NotACell):
            ct.neighbors_of((1, 1))
        assert not ct.is_cell((1, 1))
        assert ct.is_cell((0, 0))

    def test_classify_cell_matches_reference_count(self):
        spec = load_builtin("tet-oct")
        ct = compile_tiling(spec)
        from polyform.tiling import classify
        for text in ["0,0,1/2", "1/4,1/4,1/4", "5/4,-3/4,9/4"]:
            p = parse_point(text)
            assert len(ct.classify_cell(ct.to_scaled(p))) == len(classify(spec, p))


class TestCanonicalAgreement:
    @pytest.mark.parametrize("name", BUILTIN_NAMES)
    @pytest.mark.parametrize("mode", MODES)
    def test_engine_matches_exact_reference(self, name, mode):
        spec = load_builtin(name)
        ct = compile_tiling(spec)
        rng = random.Random(0xC0FFEE ^ hash((name, mode.value)))
        for _ in range(25):
            cells = random_connected(ct, rng, rng.randint(1, 5))
            got = ct.canonical_cells(cells, mode)
            expect = canonical_form(
                spec, [ct.from_scaled(c) for c in cells], mode
            ).cells
            assert tuple(ct.from_scaled(c) for c in got) == expect

    def test_batch_keys_dedup_equivalent_sets(self):
        ct = compile_tiling(load_builtin("square"))
        # Same L-tromino three ways, plus one genuinely different form.
        batch = np.array([
            [[0, 0], [1, 0], [1, 1]],
            [[5, 5], [5, 6], [6, 5]],   # rotated + translated copy
            [[2, 0], [2, 1], [1, 1]],   # reflected copy
            [[0, 0], [1, 0], [2, 0]],   # straight tromino
        ], dtype=np.int64)
        keys, _ = ct.canonical_key_batch(batch, SymmetryMode.FREE)
        rows = [tuple(r) for r in keys]
        assert rows[0] == rows[1] == rows[2]
        assert rows[3] != rows[0]

    def test_decode_inverts_packing(self):
        ct = compile_tiling(load_builtin("cubic"))
        batch = np.array([[[0, 0, 0], [1, 0, 0], [1, 1, 0], [1, 1, 1]]], dtype=np.int64)
        keys, base = ct.canonical_key_batch(batch, SymmetryMode.FIXED)
        coords = ct.decode_keys(keys, base)
        assert coords.shape == (1, 4, 3)
        again, _ = ct.canonical_key_batch(coords, SymmetryMode.FIXED, base=base)
        assert (again == keys).all()

    def test_shared_base_makes_batches_comparable(self):
        ct = compile_tiling(load_builtin("square"))
        a = np.array([[[0, 0], [1, 0]]], dtype=np.int64)
        b = np.array([[[40, -17], [40, -16]]], dtype=np.int64)
        base = ct.key_base(41)
        ka, _ = ct.canonical_key_batch(a, SymmetryMode.FREE, base=base)
        kb, _ = ct.canonical_key_batch(b, SymmetryMode.FREE, base=base)
        assert (ka == kb).all()


class TestConnectivity:
    def test_connected_and_disconnected(self):
        ct = compile_tiling(load_builtin("square"))
        assert ct.is_connected([(0, 0), (1, 0), (1, 1)])
        assert not ct.is_connected([(0, 0), (2, 0)])
        assert not ct.is_connected([])
        assert ct.is_connected([(7, 7)])

    def test_diagonal_squares_are_not_adjacent(self):
        ct = compile_tiling(load_builtin("square"))
        assert not ct.is_connected([(0, 0), (1, 1)])
