import random

import pytest

from polyform.canonical import (
    CanonicalForm,
    SymmetryMode,
    canonical_candidates,
    canonical_form,
    check_one_sided_subgroup,
    mode_orientation_indices,
    normalize_translation,
    parse_form,
)
from polyform.exact import parse_point, vec_add
from polyform.tiling import BUILTIN_NAMES, load_builtin


def pts(*texts):
    return tuple(parse_point(t) for t in texts)


class TestSymmetryMode:
    def test_parse(self):
        assert SymmetryMode.parse("free") is SymmetryMode.FREE
        assert SymmetryMode.parse("one-sided") is SymmetryMode.ONE_SIDED
        assert SymmetryMode.parse("fixed") is SymmetryMode.FIXED

    def test_parse_rejects_unknown(self):
        with pytest.raises(ValueError, match="unknown symmetry mode 'chiral'"):
            SymmetryMode.parse("chiral")

    def test_orientation_subsets(self):
        square = load_builtin("square")
        assert len(mode_orientation_indices(square, SymmetryMode.FREE)) == 8
        assert len(mode_orientation_indices(square, SymmetryMode.ONE_SIDED)) == 4
        assert mode_orientation_indices(square, SymmetryMode.FIXED) == (0,)
        snub = load_builtin("snub-trihexagonal")
        # All snub orientations are rotations, so one-sided == free there.
        assert len(mode_orientation_indices(snub, SymmetryMode.ONE_SIDED)) == 6

    @pytest.mark.parametrize("name", BUILTIN_NAMES)
    def test_one_sided_orientations_form_a_subgroup(self, name):
        check_one_sided_subgroup(load_builtin(name))


class TestNormalizeTranslation:
    def test_worked_examples(self):
        assert normalize_translation(pts("0,0", "-10/21,8/21")) == pts("11/21,8/21", "1,0")
        assert normalize_translation(pts("0,0", "-8/21,-2/21")) == pts("13/21,19/21", "1,1")

    def test_already_normalized_is_stable(self):
        cells = pts("0,0", "8/21,2/21")
        assert normalize_translation(cells) == cells

    def test_output_is_sorted(self):
        out = normalize_translation(pts("2,3", "0,5", "1,1"))
        assert list(out) == sorted(out)

    def test_per_axis_minimum_lands_in_unit_interval(self):
        out = normalize_translation(pts("-7/2,9", "13/4,-2"))
        for axis in range(2):
            low = min(c[axis] for c in out)
            assert 0 <= low < 1

    def test_empty_rejected(self):
        with pytest.raises(ValueError, match="cannot normalize an empty cell set"):
            normalize_translation([])


class TestCanonicalSnubPair:
    """Hexagon-triangle pair on the snub tiling, worked end to end."""

    CELLS = pts("0,0", "8/21,2/21")

    def test_all_six_candidates_in_orientation_order(self):
        snub = load_builtin("snub-trihexagonal")
        cands = canonical_candidates(snub, self.CELLS, SymmetryMode.FREE)
        assert cands == [
            pts("0,0", "8/21,2/21"),
            pts("0,1", "10/21,13/21"),
            pts("0,1", "2/21,11/21"),
            pts("13/21,19/21", "1,1"),
            pts("11/21,8/21", "1,0"),
            pts("19/21,10/21", "1,0"),
        ]

    def test_winner_and_serialization(self):
        snub = load_builtin("snub-trihexagonal")
        form = canonical_form(snub, self.CELLS, SymmetryMode.FREE)
        assert form.cells == pts("0,0", "8/21,2/21")
        assert form.serialize() == "0,0;8/21,2/21"
        assert form.tiling == "snub-trihexagonal"
        assert len(form) == 2

    def test_invariance_under_the_whole_group(self):
        snub = load_builtin("snub-trihexagonal")
        base = canonical_form(snub, self.CELLS, SymmetryMode.FREE)
        rng = random.Random(3)
        for omap in snub.orientations:
            shift = (rng.randint(-5, 5), rng.randint(-5, 5))
            moved = [vec_add(omap.apply(c), shift) for c in self.CELLS]
            assert canonical_form(snub, moved, SymmetryMode.FREE) == base


class TestModesDistinguishChirality:
    S = pts("0,0", "1,0", "1,1", "2,1")
    Z = pts("0,1", "1,1", "1,0", "2,0")

    def test_free_merges_mirror_images(self):
        square = load_builtin("square")
        s = canonical_form(square, self.S, SymmetryMode.FREE)
        z = canonical_form(square, self.Z, SymmetryMode.FREE)
        assert s == z

    def test_one_sided_keeps_mirror_images_apart(self):
        square = load_builtin("square")
        s = canonical_form(square, self.S, SymmetryMode.ONE_SIDED)
        z = canonical_form(square, self.Z, SymmetryMode.ONE_SIDED)
        assert s != z

    def test_fixed_distinguishes_rotations(self):
        square = load_builtin("square")
        horiz = pts("0,0", "1,0")
        vert = pts("0,0", "0,1")
        assert canonical_form(square, horiz, SymmetryMode.FIXED) != \
            canonical_form(square, vert, SymmetryMode.FIXED)
        assert canonical_form(square, horiz, SymmetryMode.FREE) == \
            canonical_form(square, vert, SymmetryMode.FREE)

    def test_fixed_still_normalizes_translation(self):
        square = load_builtin("square")
        a = canonical_form(square, pts("4,7", "5,7"), SymmetryMode.FIXED)
        b = canonical_form(square, pts("0,0", "1,0"), SymmetryMode.FIXED)
        assert a == b


class TestSerialization:
    def test_round_trip(self):
        square = load_builtin("square")
        form = canonical_form(square, pts("0,0", "1,0", "1,1"), SymmetryMode.FREE)
        back = parse_form(form.serialize(), SymmetryMode.FREE, "square")
        assert back == form

    def test_parse_form_preserves_order(self):
        form = parse_form("0,0;8/21,2/21", SymmetryMode.FREE, "snub-trihexagonal")
        assert form.cells == pts("0,0", "8/21,2/21")

    def test_canonical_form_is_hashable_dedup_key(self):
        square = load_builtin("square")
        forms = {
            canonical_form(square, pts("0,0", "1,0"), SymmetryMode.FREE),
            canonical_form(square, pts("0,0", "0,1"), SymmetryMode.FREE),
            canonical_form(square, pts("3,3", "3,4"), SymmetryMode.FREE),
        }
        assert len(forms) == 1


class TestErrors:
    def test_non_cell_rejected(self):
        snub = load_builtin("snub-trihexagonal")
        with pytest.raises(ValueError, match="1/2,1/2 is not a cell of this tiling"):
            canonical_form(snub, pts("0,0", "1/2,1/2"), SymmetryMode.FREE)
