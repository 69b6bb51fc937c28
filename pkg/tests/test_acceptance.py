"""Acceptance gate: one test per criterion, each printing a single pass/fail line."""

import json
import math
import time

import numpy as np

from conftest import ACCEPTANCE_LINES
from diametral.cli import main
from diametral.geodesic import geodesic_distance
from diametral.lab import conjecture_probe, verify_theorem
from diametral.lab.generators import (gen_remark_polygon, gen_sharp_pentagon, gen_sharp_quad, gen_sharp_triangle,
                                      random_convex_polygon, random_symmetric_polygon, remark_angle_gap, trial_rng)
from diametral.planar import ConvexPolygon, is_diametral, polygon_diameter, separated_pair_property
from diametral.report import dumps, strip_timing
from diametral.solid import cube, hull3d
from diametral.surface import makuha_check

FIVE_PI_6 = 5 * math.pi / 6


def emit(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)


def test_criterion_01_planar_criterion_suite():
    t = time.perf_counter()
    r = verify_theorem("thm2.3", 10_000, seed=7)
    dt = time.perf_counter() - t
    ok = r.passed and dt <= 120
    emit(1, ok, f"{r.trials} polygons, {r.counts['sets']} vertex sets, "
                f"{r.counts['hypothesis_met']} meeting the hypothesis, {len(r.violations)} violations, {dt:.1f}s")
    assert r.passed, r.violations[:1]
    assert dt <= 120


def test_criterion_02_separated_pairs():
    r = verify_theorem("lemma2.1", 1_000, seed=0)
    floor = FIVE_PI_6 - 1e-9
    P, _ = gen_sharp_quad(1e-3)
    sharp = separated_pair_property(P, 50, np.random.default_rng(0))
    ok = r.passed and r.stats["min_sees_angle"] >= floor and abs(sharp.min_angle - FIVE_PI_6) <= 5e-3
    emit(2, ok, f"min sees-angle {r.stats['min_sees_angle']:.9f} over {r.counts['pairs']} pairs "
                f"(floor {floor:.9f}); sharp quad eps=1e-3 reaches {sharp.min_angle:.9f}, "
                f"{sharp.min_angle - FIVE_PI_6:.2e} above 5pi/6")
    assert r.passed and r.stats["min_sees_angle"] >= floor
    assert abs(sharp.min_angle - FIVE_PI_6) <= 5e-3


def test_criterion_03_constructions():
    problems = []
    for eps in (1e-4, 1e-3, 0.01, 0.1, 0.5):
        T = gen_sharp_triangle(eps)
        if abs(T.angles[0] - (math.pi / 3 + eps)) > 1e-9 or is_diametral(T, 0):
            problems.append(f"triangle eps={eps}")
        Q, (x, y) = gen_sharp_quad(eps)
        if abs(Q.angles[x] + Q.angles[y] - (FIVE_PI_6 + eps)) > 1e-6:
            problems.append(f"quad sum eps={eps}")
        if polygon_diameter(Q).vertex_pairs != ((0, 2),):
            problems.append(f"quad diameter eps={eps}")
    gaps = []
    for delta in (0.1, 0.05, 0.01):
        P, idx = gen_sharp_pentagon(delta)
        gaps.append(sum(P.angles[i] for i in idx) - 4 * math.pi / 3)
    if not (gaps[0] > gaps[1] > gaps[2] > 0):
        problems.append(f"pentagon gaps {gaps}")
    remark = {}
    for n in range(4, 9):
        g = []
        for delta in (0.1, 0.05, 0.01):
            P, idx = gen_remark_polygon(n, n // 2, delta)
            if any(is_diametral(P, i) for i in idx):
                problems.append(f"remark n={n} delta={delta} has a diametral x_i")
            g.append(remark_angle_gap(P, idx))
        if not (g[0] > g[1] > g[2] > 0):
            problems.append(f"remark n={n} gaps {g}")
        remark[n] = g[-1]
    ok = not problems
    emit(3, ok, f"pentagon excess {', '.join(f'{g:.4f}' for g in gaps)}; remark excess at delta=0.01 "
                f"{', '.join(f'n={n}:{g:.4f}' for n, g in remark.items())}"
                + (f"; problems: {problems}" if problems else ""))
    assert not problems


def _brute_pairs(P, tau_d):
    A = P.array
    D = np.linalg.norm(A[:, None, :] - A[None, :, :], axis=2)
    top = D.max()
    i, j = np.nonzero(np.triu(D >= top * (1 - tau_d), k=1))
    return set(zip(i.tolist(), j.tolist()))


def test_criterion_04_calipers_vs_brute_force():
    mismatches, multi = 0, 0
    for k in range(10_000):
        rng = trial_rng(4, k)
        u = rng.random()
        if u < 0.7:
            P = random_convex_polygon(int(rng.integers(3, 65)), rng)
        elif u < 0.85:
            P = random_symmetric_polygon(int(rng.integers(2, 33)), rng)
        else:
            # regular polygons: every long diagonal ties up to rounding
            n = int(rng.integers(3, 65))
            t = rng.uniform(0, 2 * math.pi) + 2 * math.pi * np.arange(n) / n
            P = ConvexPolygon(np.column_stack([np.cos(t), np.sin(t)]) * rng.uniform(0.1, 10))
        got = set(polygon_diameter(P).vertex_pairs)
        multi += len(got) > 1
        if got != _brute_pairs(P, P.tol.diam):
            mismatches += 1
    emit(4, mismatches == 0, f"10000 polygons ({multi} with several diameters), {mismatches} pair-set mismatches")
    assert mismatches == 0


def test_criterion_05_solid_criterion_suite():
    r = verify_theorem("thm3.1", 1_000, seed=0)
    gb = r.stats["max_gauss_bonnet_error"]
    met = {k: r.counts.get(f"hypothesis_met_{k}", 0) for k in (1, 2, 3)}
    both_sides = all(met.values()) and r.counts["sets"] > r.counts["hypothesis_met"]
    ok = r.passed and both_sides
    fams = {k[7:]: v for k, v in sorted(r.counts.items()) if k.startswith("family_")}
    emit(5, ok, f"{r.trials} polytopes {fams}, hypothesis met by |E|=1,2,3: {met[1]},{met[2]},{met[3]} of "
                f"{r.counts['sets']} sets, {len(r.violations)} violations, max Gauss-Bonnet error {gb:.1e}")
    assert r.passed, r.violations[:1]
    assert both_sides


def test_criterion_06_proof_machinery():
    s = verify_theorem("sections", 1_000, seed=0)
    u = verify_theorem("unfolding", 1_000, seed=0)
    ok = s.passed and u.passed and s.stats["max_section_excess"] <= 1e-9 and u.stats["max_angle_sum_error"] <= 1e-9
    emit(6, ok, f"{s.counts['sections']} sections, max(angle - theta/2) = {s.stats['max_section_excess']:.3e}; "
                f"{u.counts['tetrahedra']} tetrahedra, max |angle sum - 4pi| = {u.stats['max_angle_sum_error']:.1e}")
    assert s.passed and u.passed
    assert s.stats["max_section_excess"] <= 1e-9
    assert u.stats["max_angle_sum_error"] <= 1e-9


def test_criterion_07_geodesic_ground_truth():
    C = cube()
    V = C.vertices
    a = int(np.flatnonzero((V == 0).all(axis=1))[0])
    b = int(np.flatnonzero((V == 1).all(axis=1))[0])
    p, q = C.vertex_point(a), C.vertex_point(b)
    straight = {m: geodesic_distance(C, p, q, m=m)[0] for m in (0, 2, 8)}
    graph = {m: geodesic_distance(C, p, q, m=m)[1].graph_length for m in (2, 4, 8, 16)}
    exact = all(abs(v - math.sqrt(5)) <= 1e-6 for v in straight.values())
    mono = all(graph[m2] <= graph[m1] for m1, m2 in zip((2, 4, 8), (4, 8, 16)))
    emit(7, exact and mono, f"straightened {', '.join(f'm={m}:{v:.10f}' for m, v in straight.items())}; "
                            f"graph bound {', '.join(f'm={m}:{v:.10f}' for m, v in graph.items())}")
    assert exact and mono


def test_criterion_08_surface_criterion_suite():
    t = time.perf_counter()
    r = verify_theorem("thm4.4", 200, seed=0, m=8, density=5)
    dt = time.perf_counter() - t
    fails = len(r.violations)
    rate = r.stats["inconclusive_rate"]
    ok = fails == 0 and rate <= 0.2 and dt <= 600
    emit(8, ok, f"{r.trials} surfaces, {r.counts.get('hypothesis_met', 0)} point sets meeting the hypothesis, "
                f"{fails} definite fails, inconclusive rate {rate:.3f} "
                f"(first pass {r.stats['inconclusive_rate_first_pass']:.3f}), {dt:.0f}s")
    assert fails == 0, r.violations[:1]
    assert rate <= 0.2
    assert dt <= 600


def test_criterion_09_extrinsic_vs_intrinsic():
    suite = verify_theorem("makuha", 30, seed=0)
    X = np.random.default_rng(9).normal(size=(200, 3))
    S = hull3d(X / np.linalg.norm(X, axis=1)[:, None])
    rep = makuha_check(S)
    slack_ratio = rep.slack / (math.pi / 2 * rep.intrinsic)
    in_band = 0.9 <= rep.stated_ratio <= 1.0 + slack_ratio
    ok = suite.passed and rep.stated_holds and in_band
    emit(9, ok, f"{suite.trials} bodies pass extrinsic <= (pi/2) intrinsic + slack; 200-point sphere hull: "
                f"extrinsic {rep.extrinsic:.6f}, intrinsic {rep.intrinsic:.6f}, "
                f"extrinsic/((pi/2) intrinsic) = {rep.stated_ratio:.6f} (required [0.9, {1 + slack_ratio:.6f}]); "
                f"intrinsic/((pi/2) extrinsic) = {rep.sharp_ratio:.6f}")
    assert suite.passed and rep.stated_holds
    assert in_band, f"sphere-hull ratio {rep.stated_ratio:.6f} outside [0.9, 1 + slack]"


def test_criterion_10_conjecture_probe():
    r = conjecture_probe(1_000, seed=0)
    band = sum(v for k, v in r.counts.items() if k.startswith("pairs_open_band"))
    le = sum(v for k, v in r.counts.items() if k.startswith("pairs_le_bound"))
    emit(10, r.passed, f"{r.trials} bodies, {le} pairs with sum <= 3pi/2, {len(r.violations)} without a diametral "
                       f"end; {band} pairs in (3pi/2, 5pi/3], {len(r.notes)} of them logged without a diametral end")
    assert r.passed, r.violations[:1]


def test_criterion_11_determinism(tmp_path, capsys):
    runs = [["verify", "thm2.3", "--trials", "200"], ["verify", "thm3.1", "--trials", "50"],
            ["verify", "thm4.4", "--trials", "3", "--steiner", "4", "--sampling", "3"],
            ["search", "planar-3", "--trials", "60"], ["search", "solid-2", "--trials", "40"],
            ["search", "conjecture", "--trials", "100"]]
    same = []
    for argv in runs:
        texts = []
        for rep in range(2):
            out = tmp_path / f"{argv[1]}-{rep}.json"
            main([*argv, "--seed", "11", "--out", str(out)])
            texts.append(dumps(strip_timing(json.loads(out.read_text()))).encode())
        same.append(texts[0] == texts[1])
    capsys.readouterr()
    ok = all(same)
    emit(11, ok, f"{sum(same)}/{len(runs)} verify/search reruns byte-identical after removing timing fields")
    assert ok
