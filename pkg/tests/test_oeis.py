import pytest

from polyform.oeis import (
    BFile,
    BFileError,
    bfile_url,
    compare,
    default_cache_dir,
    fetch_bfile,
    parse_bfile,
)

SAMPLE = """\
# comment line

1 1
2 1
3 2

# trailing comment
5 12
"""


class TestParse:
    def test_comments_blanks_and_gaps(self):
        bf = parse_bfile(SAMPLE, "A000105")
        assert bf.sequence == "A000105"
        assert bf.entries == ((1, 1), (2, 1), (3, 2), (5, 12))
        assert bf.value_for(3) == 2
        assert bf.value_for(4) is None

    def test_whitespace_tolerance(self):
        bf = parse_bfile("  1   7 \n\t2\t9\n", "A000000")
        assert bf.entries == ((1, 7), (2, 9))

    def test_negative_index_allowed_but_value_must_be_nonnegative(self):
        assert parse_bfile("-1 0\n0 3\n", "A000000").entries == ((-1, 0), (0, 3))
        with pytest.raises(BFileError, match="line 1: negative value -2"):
            parse_bfile("1 -2\n", "A000000")

    def test_indices_must_strictly_increase(self):
        with pytest.raises(BFileError, match="line 2: index 2 not strictly increasing"):
            parse_bfile("2 5\n2 6\n", "A000000")
        with pytest.raises(BFileError, match="not strictly increasing"):
            parse_bfile("3 5\n1 6\n", "A000000")

    def test_malformed_lines(self):
        with pytest.raises(BFileError, match="line 1: expected 'index value'"):
            parse_bfile("1 2 3\n", "A000000")
        with pytest.raises(BFileError, match="line 1: non-integer field"):
            parse_bfile("one 2\n", "A000000")


class TestFetch:
    def test_url_shape(self):
        assert bfile_url("A000105") == "https://oeis.org/A000105/b000105.txt"

    def test_invalid_sequence_id(self):
        with pytest.raises(BFileError, match="invalid sequence id 'A12'"):
            fetch_bfile("A12")
        with pytest.raises(BFileError, match="invalid sequence id"):
            fetch_bfile("000105")

    def test_cache_hit_avoids_network(self, tmp_path):
        (tmp_path / "b000105.txt").write_text("1 1\n2 1\n3 2\n")
        bf = fetch_bfile("A000105", cache_dir=str(tmp_path), offline=True)
        assert bf.entries == ((1, 1), (2, 1), (3, 2))

    def test_offline_cache_miss_fails(self, tmp_path):
        with pytest.raises(BFileError, match="not in cache .* and offline mode is set"):
            fetch_bfile("A000105", cache_dir=str(tmp_path), offline=True)

    def test_cache_dir_env_override(self, monkeypatch, tmp_path):
        monkeypatch.setenv("POLYFORM_CACHE_DIR", str(tmp_path))
        assert default_cache_dir() == str(tmp_path)
        monkeypatch.delenv("POLYFORM_CACHE_DIR")
        assert default_cache_dir().endswith("/.cache/polyform")


class TestCompare:
    BF = BFile("A000105", ((1, 1), (2, 1), (3, 2), (4, 5)))

    def test_full_match(self):
        report = compare([(1, 1), (2, 1), (3, 2)], self.BF)
        assert report.verdict == "match"
        assert report.overlapping == 3
        assert all(status == "match" for _, status, _, _ in report.rows)

    def test_single_mismatch_flips_verdict(self):
        report = compare([(1, 1), (2, 2)], self.BF)
        assert report.verdict == "mismatch"
        assert report.rows[1] == (2, "mismatch", 2, 1)

    def test_missing_reference_rows_do_not_block(self):
        report = compare([(4, 5), (5, 12), (6, 35)], self.BF)
        assert report.verdict == "match"
        assert report.overlapping == 1
        assert [s for _, s, _, _ in report.rows] == ["match", "missing", "missing"]

    def test_no_overlap(self):
        report = compare([(9, 1)], self.BF)
        assert report.overlapping == 0
        assert report.verdict == "match"

    def test_render(self):
        report = compare([(1, 1), (2, 2), (5, 12)], self.BF)
        text = report.render()
        assert "n=1: match (1)" in text
        assert "n=2: MISMATCH computed 2 != reference 1" in text
        assert "n=5: missing from reference (computed 12)" in text
        assert text.endswith("verdict: mismatch")


class TestVendoredReferences:
    """The shipped b-files must themselves be well-formed."""

    def test_all_parse(self):
        from importlib import resources
        root = resources.files("polyform.data.bfiles")
        names = [p.name for p in root.iterdir() if p.name.endswith(".txt")]
        assert len(names) == 7
        for name in names:
            seq = "A" + name[1:7]
            bf = parse_bfile(root.joinpath(name).read_text(), seq)
            assert bf.entries, name
