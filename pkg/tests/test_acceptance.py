"""End-to-end acceptance criteria.

Each test covers one numbered criterion and writes a single PASS/FAIL
line with capture suspended, so the run log always shows the
per-criterion verdict.
"""

import dataclasses
import random
import time
from importlib import resources

import pytest

from polyform.canonical import SymmetryMode, canonical_candidates, canonical_form
from polyform.engine import compile_tiling
from polyform.enumeration import brute_oracle, enumerate_counts, serialize_level
from polyform.exact import parse_point
from polyform.packing import load_instance, naive_pack_count, solve_pack, verify_solution
from polyform.tiling import BUILTIN_NAMES, load_builtin, validate

FREE = SymmetryMode.FREE
ONE_SIDED = SymmetryMode.ONE_SIDED
FIXED = SymmetryMode.FIXED
MODES = (FREE, ONE_SIDED, FIXED)


def announce(capsys, num: int, ok: bool, detail: str):
    line = f"[criterion {num:2d}] {'PASS' if ok else 'FAIL'} - {detail}"
    with capsys.disabled():
        print(line, flush=True)


def free_counts(name: str, n_max: int):
    start = time.monotonic()
    result = enumerate_counts(load_builtin(name), FREE, n_max)
    return [c for _, c in result.counts], time.monotonic() - start


def check_counts(capsys, num, name, expected, budget, detail_name=None):
    got, elapsed = free_counts(name, len(expected))
    ok = got == expected and elapsed < budget
    announce(capsys, num, ok, f"{detail_name or name} free n<={len(expected)} in {elapsed:.1f}s")
    assert got == expected
    assert elapsed < budget, f"{name}: {elapsed:.1f}s exceeds {budget}s"


def test_criterion_01_snub_trihexagonal(capsys):
    check_counts(capsys, 1, "snub-trihexagonal", [3, 3, 7, 23, 69, 228, 766], 10)


def test_criterion_02_cubic_including_n10(capsys):
    start = time.monotonic()
    result = enumerate_counts(load_builtin("cubic"), FREE, 10)
    elapsed = time.monotonic() - start
    got = [c for _, c in result.counts]
    ok = got[:7] == [1, 1, 2, 7, 23, 112, 607] and got[9] == 178083 and elapsed < 120
    announce(capsys, 2, ok, f"cubic free n<=10 (n10={got[9]}) in {elapsed:.1f}s")
    assert got[:7] == [1, 1, 2, 7, 23, 112, 607]
    assert got[9] == 178083
    assert elapsed < 120


def test_criterion_03_tet_oct(capsys):
    check_counts(capsys, 3, "tet-oct", [2, 1, 4, 9, 44, 195, 1186], 60)


def test_criterion_04_rectified_cubic(capsys):
    check_counts(capsys, 4, "rectified-cubic", [2, 2, 9, 40, 290, 2529, 26629], 300)


@pytest.mark.skip(reason="extended non-blocking tier (n=10 -> 43305326) is beyond the suite's time budget")
def test_criterion_04_extended_rectified_cubic_n10():
    got, _ = free_counts("rectified-cubic", 10)
    assert got[9] == 43305326


def test_criterion_05_truncated_octahedral(capsys):
    check_counts(capsys, 5, "truncated-octahedral", [1, 2, 6, 35, 251, 2602, 30900], 300)


def test_criterion_06_disphenoid(capsys):
    check_counts(capsys, 6, "disphenoid", [1, 1, 2, 5, 14, 47, 172], 60)


def test_criterion_07_one_sided_checkpoints(capsys):
    checkpoints = [
        ("cubic", 6, 166),
        ("truncated-octahedral", 4, 44),
        ("tet-oct", 4, 11),
    ]
    got = {
        (name, n): enumerate_counts(load_builtin(name), ONE_SIDED, n).count_for(n)
        for name, n, _ in checkpoints
    }
    ok = all(got[(name, n)] == want for name, n, want in checkpoints)
    announce(capsys, 7, ok, "one-sided checkpoints "
             + ", ".join(f"{name} n{n}={got[(name, n)]}" for name, n, _ in checkpoints))
    for name, n, want in checkpoints:
        assert got[(name, n)] == want


def test_criterion_08_canonicalization_worked_example(capsys):
    snub = load_builtin("snub-trihexagonal")
    P = [parse_point("-10/21,8/21"), parse_point("0,0")]

    def pts(*texts):
        return tuple(parse_point(t) for t in texts)

    expected_candidates = {
        pts("11/21,8/21", "1,0"),
        pts("19/21,10/21", "1,0"),
        pts("0,0", "8/21,2/21"),
        pts("0,1", "10/21,13/21"),
        pts("0,1", "2/21,11/21"),
        pts("13/21,19/21", "1,1"),
    }
    candidates = canonical_candidates(snub, P, FREE)
    winner = canonical_form(snub, P, FREE)

    result = enumerate_counts(snub, FREE, 2, retain_forms=True)
    level2 = serialize_level(snub, result.levels[-1], FREE)
    expected_level2 = [
        "0,0;8/21,2/21",
        "2/21,11/21;1/3,1/3",
        "8/21,23/21;13/21,19/21",
    ]
    ok = (set(candidates) == expected_candidates
          and winner.serialize() == "0,0;8/21,2/21"
          and level2 == expected_level2)
    announce(capsys, 8, ok, "worked canonicalization example (6 candidates, winner, 3 level-2 names)")
    assert set(candidates) == expected_candidates
    assert len(candidates) == 6
    assert winner.serialize() == "0,0;8/21,2/21"
    assert level2 == expected_level2


def _random_connected(ct, rng, size):
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


def _check_invariance_and_idempotence(name, cases=1000):
    spec = load_builtin(name)
    ct = compile_tiling(spec)
    rng = random.Random(0xACCE97 ^ hash(name))
    D = ct.scale
    for case in range(cases):
        mode = MODES[case % 3]
        cells = _random_connected(ct, rng, rng.randint(1, 6))
        base = ct.canonical_cells(cells, mode)
        # idempotence: the canonical form is its own canonical form
        assert ct.canonical_cells(base, mode) == base
        # group invariance: any symmetric image canonicalizes identically
        idx = ct.mode_indices(mode)
        k = int(idx[rng.randrange(len(idx))])
        L, off = ct.linear[k], ct.offset[k]
        t = [D * rng.randint(-4, 4) for _ in range(ct.dim)]
        moved = [
            tuple(
                int(sum(L[r, c] * p[c] for c in range(ct.dim)) + off[r] + t[r])
                for r in range(ct.dim)
            )
            for p in cells
        ]
        assert ct.canonical_cells(moved, mode) == base
    return cases


def _check_neighbor_equivariance(name, radius=4):
    spec = load_builtin(name)
    ct = compile_tiling(spec)
    D = ct.scale
    # engine-level BFS patch of the requested radius around all reps
    dist = {rep: 0 for rep in ct.reps}
    frontier = list(dist)
    for r in range(1, radius + 1):
        nxt = []
        for p in frontier:
            for q in ct.neighbors_of(p):
                if q not in dist:
                    dist[q] = r
                    nxt.append(q)
        frontier = nxt
    rng = random.Random(17)
    for p in dist:
        nbrs = set(ct.neighbors_of(p))
        # adjacency symmetry
        for q in nbrs:
            assert p in ct.neighbors_of(q), (name, p, q)
        # translation equivariance by a random lattice vector
        t = tuple(D * rng.randint(-3, 3) for _ in range(ct.dim))
        shifted = {tuple(a + b for a, b in zip(q, t)) for q in nbrs}
        moved = tuple(a + b for a, b in zip(p, t))
        assert set(ct.neighbors_of(moved)) == shifted, (name, p, t)
    return len(dist)


def test_criterion_09_property_suites(capsys):
    ok = True
    try:
        # 1) canonicalization invariance + idempotence, >=1000 cases per built-in
        for name in BUILTIN_NAMES:
            assert _check_invariance_and_idempotence(name, cases=1000) >= 1000

        # 2) neighbor equivariance and adjacency symmetry on radius-4 patches
        for name in BUILTIN_NAMES:
            assert _check_neighbor_equivariance(name, radius=4) > 0

        # 3) independent oracle agreement, n <= 4, all built-ins and modes
        for name in BUILTIN_NAMES:
            spec = load_builtin(name)
            for mode in MODES:
                expect = [c for _, c in enumerate_counts(spec, mode, 4).counts]
                assert brute_oracle(spec, mode, 4) == expect, (name, mode)

        # 4) pruned extension equals baseline for n <= 6
        for name in BUILTIN_NAMES:
            spec = load_builtin(name)
            for mode in MODES:
                baseline = enumerate_counts(spec, mode, 6).counts
                pruned = enumerate_counts(spec, mode, 6, pruned=True).counts
                assert pruned == baseline, (name, mode)

        # 5) mode monotonicity on every computed level
        for name in BUILTIN_NAMES:
            spec = load_builtin(name)
            by_mode = {
                mode: [c for _, c in enumerate_counts(spec, mode, 5).counts]
                for mode in MODES
            }
            bound = len(spec.orientations)
            for f, o, x in zip(by_mode[FREE], by_mode[ONE_SIDED], by_mode[FIXED]):
                assert f <= o <= x <= bound * f, name

        # 6) determinism: thread counts and orientation order
        to = load_builtin("truncated-octahedral")
        single = enumerate_counts(to, FREE, 5, threads=1, retain_forms=True)
        multi = enumerate_counts(to, FREE, 5, threads=4, retain_forms=True)
        assert single.counts == multi.counts
        assert single.levels[-1].forms == multi.levels[-1].forms
        snub = load_builtin("snub-trihexagonal")
        rest = list(snub.orientations[1:])
        random.Random(23).shuffle(rest)
        permuted = dataclasses.replace(
            snub, orientations=(snub.orientations[0],) + tuple(rest))
        a = enumerate_counts(snub, FREE, 5, retain_forms=True)
        b = enumerate_counts(permuted, FREE, 5, retain_forms=True)
        assert a.counts == b.counts
        assert a.levels[-1].forms == b.levels[-1].forms
    except AssertionError:
        ok = False
        raise
    finally:
        announce(capsys, 9, ok, "property suites (invariance, equivariance, oracle, "
                        "pruning, monotonicity, determinism)")


def _instance(name):
    return str(resources.files("polyform.data.instances").joinpath(name))


def test_criterion_10_packing(capsys):
    ok = True
    try:
        spec, region, pieces, group = load_instance(_instance("pentomino_3x20.json"))
        start = time.monotonic()
        result = solve_pack(spec, region, pieces, group,
                            count_all=True, modulo_region_symmetry=True)
        elapsed = time.monotonic() - start
        assert result.complete
        assert result.raw_count == 8
        assert result.modulo_region_symmetry == 2
        assert elapsed < 60, f"pentomino search took {elapsed:.1f}s"
        assert naive_pack_count(spec, region, pieces, group) == 8

        spec, region, pieces, group = load_instance(_instance("splatt_3x5x8.json"))
        result = solve_pack(spec, region, pieces, group, first=True, limit_time=600)
        if result.solutions:
            for sol in result.solutions:
                verify_solution(spec, region, pieces, sol)
            splatt = "splatt: found a verified solution"
        else:
            assert not result.complete or result.raw_count == 0
            splatt = "splatt: clean stop at the 600s limit"
    except AssertionError:
        ok = False
        splatt = "packing assertions failed"
        raise
    finally:
        announce(capsys, 10, ok, f"pentomino 3x20 raw=8 modulo=2 (naive agrees); {splatt}")


def test_criterion_11_validator(capsys):
    ok = True
    try:
        for name in BUILTIN_NAMES:
            report = validate(load_builtin(name), radius=4)
            assert report.ok, f"{name}: {report.render()}"

        square = load_builtin("square")
        # dropped neighbor -> adjacency becomes asymmetric
        orbit = square.orbits[0]
        dropped = dataclasses.replace(orbit, neighbor_points=orbit.neighbor_points[:-1])
        mutated = dataclasses.replace(square, orbits=(dropped,))
        failing = {c.name for c in validate(mutated, radius=3).failing()}
        assert "adjacency-symmetry" in failing, failing

        # removed orientation -> group no longer closed
        snub = load_builtin("snub-trihexagonal")
        mutated = dataclasses.replace(snub, orientations=snub.orientations[:-1])
        failing = {c.name for c in validate(mutated, radius=2).failing()}
        assert "orientation-closure" in failing, failing

        # non-unimodular linear part
        from polyform.exact import AffineMap
        shear = AffineMap.make([[2, 1], [0, 1]], [0, 0])
        mutated = dataclasses.replace(
            square, orientations=square.orientations + (shear,))
        failing = {c.name for c in validate(mutated, radius=2).failing()}
        assert "unimodular-linear" in failing, failing
    except AssertionError:
        ok = False
        raise
    finally:
        announce(capsys, 11, ok, "validator passes all built-ins; 3 seeded defects detected by name")
