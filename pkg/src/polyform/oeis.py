"""OEIS b-file client and count comparison.

b-files are the plain-text per-term files behind each OEIS sequence
(``https://oeis.org/A000105/b000105.txt``): blank lines and ``#``
comments are ignored, every other line is ``index value``.  Fetching is
cache-first and network access only happens when the caller asks for it.
"""

from __future__ import annotations

import os
import re
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

CACHE_ENV = "POLYFORM_CACHE_DIR"
SEQ_RE = re.compile(r"\AA[0-9]{6}\Z")


class BFileError(ValueError):
    pass


@dataclass(frozen=True)
class BFile:
    sequence: str
    entries: Tuple[Tuple[int, int], ...]

    def value_for(self, index: int) -> Optional[int]:
        for i, v in self.entries:
            if i == index:
                return v
        return None


def parse_bfile(text: str, sequence: str) -> BFile:
    entries: List[Tuple[int, int]] = []
    last_index = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if len(parts) != 2:
            raise BFileError(f"{sequence} line {lineno}: expected 'index value', got {line!r}")
        try:
            index, value = int(parts[0]), int(parts[1])
        except ValueError:
            raise BFileError(
                f"{sequence} line {lineno}: non-integer field in {line!r}"
            ) from None
        if value < 0:
            raise BFileError(f"{sequence} line {lineno}: negative value {value}")
        if last_index is not None and index <= last_index:
            raise BFileError(
                f"{sequence} line {lineno}: index {index} not strictly increasing"
            )
        last_index = index
        entries.append((index, value))
    return BFile(sequence, tuple(entries))


def default_cache_dir() -> str:
    env = os.environ.get(CACHE_ENV)
    if env:
        return env
    return os.path.join(os.path.expanduser("~"), ".cache", "polyform")


def bfile_url(sequence: str) -> str:
    return f"https://oeis.org/{sequence}/b{sequence[1:]}.txt"


def fetch_bfile(
    sequence: str, cache_dir: Optional[str] = None, offline: bool = False
) -> BFile:
    """Cache-first b-file lookup; network only on a cache miss when online."""
    if not SEQ_RE.match(sequence):
        raise BFileError(f"invalid sequence id {sequence!r} (expected A followed by 6 digits)")
    cache_dir = cache_dir or default_cache_dir()
    path = os.path.join(cache_dir, f"b{sequence[1:]}.txt")
    if os.path.exists(path):
        with open(path, "r", encoding="utf-8") as fh:
            return parse_bfile(fh.read(), sequence)
    if offline:
        raise BFileError(f"{sequence}: not in cache {cache_dir!r} and offline mode is set")
    url = bfile_url(sequence)
    try:
        with urllib.request.urlopen(url, timeout=30) as resp:
            body = resp.read().decode("utf-8")
    except urllib.error.HTTPError as exc:
        raise BFileError(f"{sequence}: HTTP {exc.code} fetching {url}") from exc
    except urllib.error.URLError as exc:
        raise BFileError(f"{sequence}: fetch failed: {exc.reason}") from exc
    parsed = parse_bfile(body, sequence)  # validate before caching
    os.makedirs(cache_dir, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(body)
    return parsed


@dataclass
class CompareReport:
    sequence: str
    rows: List[Tuple[int, str, Optional[int], Optional[int]]] = field(default_factory=list)
    # rows: (n, status, computed, reference) with status match|mismatch|missing

    @property
    def overlapping(self) -> int:
        return sum(1 for _, status, _, _ in self.rows if status != "missing")

    @property
    def verdict(self) -> str:
        if any(status == "mismatch" for _, status, _, _ in self.rows):
            return "mismatch"
        return "match"

    def render(self) -> str:
        lines = []
        for n, status, computed, reference in self.rows:
            if status == "missing":
                lines.append(f"n={n}: missing from reference (computed {computed})")
            elif status == "match":
                lines.append(f"n={n}: match ({computed})")
            else:
                lines.append(f"n={n}: MISMATCH computed {computed} != reference {reference}")
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines)


def compare(counts: List[Tuple[int, int]], bfile: BFile) -> CompareReport:
    """Match computed (n, count) pairs against a b-file.

    Indices absent from the b-file are reported but do not affect the
    verdict; the verdict is match iff every overlapping index agrees.
    """
    report = CompareReport(bfile.sequence)
    reference = dict(bfile.entries)
    for n, count in counts:
        if n in reference:
            status = "match" if count == reference[n] else "mismatch"
            report.rows.append((n, status, count, reference[n]))
        else:
            report.rows.append((n, "missing", count, None))
    return report
