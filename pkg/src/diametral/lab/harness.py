"""Seeded verification suites.

Each suite draws ``trials`` bodies, one per derived seed, and checks one
implication on every instance. Results are merged in trial order, so a
report depends only on (suite, trials, seed, settings).
"""

from __future__ import annotations

import itertools
import math
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from ..core import (DEFAULT_TOL, DegenerateInput, DegeneratePoints, DegenerateTriangle, EmptySection,
                    InvalidParams, InvalidPolygon, InvalidPolytope, Tolerances, UnknownSuite, Verdict)
from ..geodesic import geodesic_distance
from ..io import body_text
from ..planar import (PLANAR_BOUNDS, QUAD_LEMMA_BOUND, SYMMETRIC_BOUND, ConvexPolygon, evaluate_criterion,
                      polygon_diameter, quad_lemma_check, separated_pair_property, symmetric_diameter_check,
                      two_point_diameter_check)
from ..solid import (SOLID_BOUNDS, SYMMETRIC_BOUND_3D, ConvexPolytope, complete_angle, evaluate_criterion_3d,
                     extrinsic_diameter, hull3d, section_angle_at_vertex, symmetric_diameter_check_3d,
                     two_point_diameter_check_3d, unfold_tetrahedron)
from ..surface import (DEFAULT_COST_CAP, SURFACE_BOUNDS, SYMMETRIC_BOUND_SURFACE, comparison_angle_check,
                       comparison_distance_check, evaluate_criterion_surface, intrinsic_diameter_estimate,
                       makuha_check, symmetric_surface_check, triangle_paths)
from . import generators as gen

MAX_SETS = 100


@dataclass
class SearchReport:
    """Aggregate of a suite or search run.

    ``violations`` holds definite counterexamples (body text, point set,
    verdict). ``best_sharpness`` is the configuration without a diametral
    member whose angle sum came closest to the bound from above.
    """

    family: str
    trials: int
    seed: int
    violations: list[dict[str, Any]] = field(default_factory=list)
    best_sharpness: dict[str, Any] | None = None
    counts: dict[str, int] = field(default_factory=dict)
    stats: dict[str, float] = field(default_factory=dict)
    notes: list[dict[str, Any]] = field(default_factory=list)
    settings: dict[str, Any] = field(default_factory=dict)
    runtime: dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self, timing: bool = True) -> dict[str, Any]:
        out = {
            "family": self.family,
            "trials": self.trials,
            "seed": self.seed,
            "passed": self.passed,
            "violations": self.violations,
            "best_sharpness": self.best_sharpness,
            "counts": dict(sorted(self.counts.items())),
            "stats": dict(sorted(self.stats.items())),
            "notes": self.notes,
            "settings": self.settings,
        }
        if timing:
            out["runtime"] = self.runtime
        return out


@dataclass(frozen=True)
class HarnessConfig:
    m: int = 8
    density: int = 5
    cost_cap: float = DEFAULT_COST_CAP
    tol: Tolerances = DEFAULT_TOL
    escalate: bool = True
    max_sets: int = MAX_SETS


class _Trial:
    """What one trial contributes; merged in trial order."""

    def __init__(self, index: int):
        self.index = index
        self.counts: Counter = Counter()
        self.mins: dict[str, float] = {}
        self.maxs: dict[str, float] = {}
        self.violations: list[dict] = []
        self.notes: list[dict] = []
        self.best: dict | None = None

    def low(self, key: str, value: float) -> None:
        self.mins[key] = min(self.mins.get(key, math.inf), float(value))

    def high(self, key: str, value: float) -> None:
        self.maxs[key] = max(self.maxs.get(key, -math.inf), float(value))

    def violation(self, body, points, verdict: str, **detail) -> None:
        self.violations.append({
            "trial": self.index,
            "body": body_text(body),
            "points": [int(p) if isinstance(p, (int, np.integer)) else p for p in points],
            "verdict": verdict,
            "detail": detail,
        })

    def sharp(self, angle_sum: float, bound: float, body, points) -> None:
        """Offer a non-diametral configuration as the sharpest candidate."""
        gap = angle_sum - bound
        if self.best is None or gap < self.best["gap"]:
            self.best = {"angle_sum": float(angle_sum), "bound": float(bound), "gap": float(gap),
                         "points": [int(p) for p in points], "body": body, "trial": self.index}


def _merge(report: SearchReport, parts: Sequence[_Trial]) -> None:
    counts: Counter = Counter()
    mins: dict[str, float] = {}
    maxs: dict[str, float] = {}
    best = None
    for t in sorted(parts, key=lambda t: t.index):
        counts.update(t.counts)
        for k, v in t.mins.items():
            mins[k] = min(mins.get(k, math.inf), v)
        for k, v in t.maxs.items():
            maxs[k] = max(maxs.get(k, -math.inf), v)
        report.violations.extend(t.violations)
        report.notes.extend(t.notes)
        if t.best is not None and (best is None or t.best["gap"] < best["gap"]):
            best = t.best
    report.counts = dict(counts)
    report.stats = {**{f"min_{k}": v for k, v in mins.items()}, **{f"max_{k}": v for k, v in maxs.items()}}
    if best is not None:
        best = dict(best)
        best["body"] = body_text(best["body"])
        report.best_sharpness = best


# -- point-set enumeration ------------------------------------------------------------


def vertex_sets(n: int, rng: np.random.Generator, angles: Sequence[float], max_sets: int = MAX_SETS,
                sizes: Sequence[int] = (1, 2, 3)) -> list[tuple[int, ...]]:
    """All vertex sets of the given sizes, or ``max_sets`` of them when there are more.

    A sample always includes the sharpest set of each size, since those are
    the sets most likely to meet a hypothesis.
    """
    sizes = [k for k in sizes if k <= n]
    total = sum(math.comb(n, k) for k in sizes)
    if total <= max_sets:
        return [c for k in sizes for c in itertools.combinations(range(n), k)]
    order = np.argsort(np.asarray(angles), kind="stable")
    chosen = {tuple(sorted(int(i) for i in order[:k])) for k in sizes}
    weights = np.array([math.comb(n, k) for k in sizes], dtype=float)
    weights /= weights.sum()
    while len(chosen) < max_sets:
        k = sizes[int(rng.choice(len(sizes), p=weights))]
        chosen.add(tuple(sorted(int(i) for i in rng.choice(n, size=k, replace=False))))
    return sorted(chosen, key=lambda c: (len(c), c))


# -- body families -------------------------------------------------------------------


def _planar_body(rng: np.random.Generator, tol: Tolerances) -> tuple[str, ConvexPolygon]:
    u = rng.random()
    if u < 0.8:
        n = int(rng.integers(3, 65))
        return "random", gen.random_convex_polygon(n, rng, tol=tol)
    if u < 0.85:
        return "triangle", gen.gen_sharp_triangle(float(rng.uniform(1e-4, math.pi / 6 - 1e-3)))
    if u < 0.9:
        return "quad", gen.gen_sharp_quad(float(rng.uniform(1e-4, gen.SHARP_QUAD_MAX_EPS)))[0]
    if u < 0.95:
        return "pentagon", gen.gen_sharp_pentagon(float(rng.uniform(1e-3, 0.5)))[0]
    n = int(rng.integers(4, 9))
    return "remark", gen.gen_remark_polygon(n, int(rng.integers(2, n - 1)), float(rng.uniform(1e-3, 0.4)))[0]


def _solid_body(rng: np.random.Generator, small: bool = False) -> tuple[str, ConvexPolytope]:
    """One body from the 3D families, with parameters on both sides of each bound."""
    u = rng.random()
    if u < 0.35:
        n = int(rng.integers(5, 15)) if small else int(rng.integers(4, 41))
        return "random", gen.random_polytope(n, rng)
    if u < 0.55:
        base = int(rng.integers(3, 7 if small else 13))
        h = float(np.exp(rng.uniform(math.log(0.1), math.log(20.0))))
        return "spike", gen.spike_pyramid(base, h, float(rng.uniform(0.5, 2.0)))
    if u < 0.75:
        base = int(rng.integers(3, 7 if small else 11))
        ht = float(np.exp(rng.uniform(math.log(0.1), math.log(10.0))))
        hb = float(np.exp(rng.uniform(math.log(0.1), math.log(10.0))))
        return "bipyramid", gen.bipyramid(base, ht, hb, jitter=float(rng.uniform(0, 0.8)), seed=rng)
    if u < 0.85:
        n = 2 * int(rng.integers(2, 5 if small else 7))
        height = float(np.exp(rng.uniform(math.log(0.3), math.log(12.0))))
        return "lens", gen.symmetric_lens(n, height, int(rng.integers(1, 3)))
    k = int(rng.integers(3, 8 if small else 12))
    P = gen.random_convex_polygon(k, rng, max_aspect=5.0)
    return "thin", gen.polygon_bipyramid(P, float(np.exp(rng.uniform(math.log(0.01), math.log(1.0)))))


def _symmetric_solid(rng: np.random.Generator, small: bool = False) -> ConvexPolytope:
    if rng.random() < 0.7:
        n = 2 * int(rng.integers(2, 5 if small else 7))
        height = float(np.exp(rng.uniform(math.log(0.5), math.log(30.0))))
        return gen.symmetric_lens(n, height, int(rng.integers(1, 3)))
    return gen.random_symmetric_polytope(int(rng.integers(3, 7 if small else 15)), rng)


def _gauss_bonnet(t: _Trial, T: ConvexPolytope, tol: Tolerances) -> None:
    err = abs(float(sum(T.curvatures)) - 4 * math.pi)
    t.high("gauss_bonnet_error", err)
    if err > len(T.vertices) * tol.abs:
        t.violation(T, [], "gauss_bonnet", error=err)


# -- planar suites --------------------------------------------------------------------


def _planar_criterion(t: _Trial, rng, cfg: HarnessConfig) -> None:
    family, P = _planar_body(rng, cfg.tol)
    t.counts[f"family_{family}"] += 1
    diam = polygon_diameter(P, cfg.tol.diam)
    angles = np.asarray(P.angles)
    diametral = np.zeros(len(P), dtype=bool)
    diametral[list(diam.endpoint_indices)] = True
    for E in vertex_sets(len(P), rng, angles, cfg.max_sets):
        t.counts["sets"] += 1
        k = len(E)
        total = float(angles[list(E)].sum())
        if total <= PLANAR_BOUNDS[k] + P.tol.abs:
            v = evaluate_criterion(P, E, diameter=diam)
            t.counts["hypothesis_met"] += 1
            t.low(f"margin_{k}", v.margin)
            if v.violation:
                t.violation(P, E, v.conclusion.value, angle_sum=v.angle_sum, bound=v.bound)
        elif not diametral[list(E)].any():
            t.sharp(total, PLANAR_BOUNDS[k], P, E)
    sharp = [i for i in range(len(P)) if angles[i] <= PLANAR_BOUNDS[1] + P.tol.abs]
    for i, j in itertools.combinations(sharp, 2):
        t.counts["two_point"] += 1
        if not two_point_diameter_check(P, i, j, cfg.tol.diam):
            t.violation(P, (i, j), "fails", check="two_point")


def _separated_pairs(t: _Trial, rng, cfg: HarnessConfig) -> None:
    if rng.random() < 0.9:
        P = gen.random_convex_polygon(int(rng.integers(3, 65)), rng, tol=cfg.tol)
    else:
        P = gen.gen_sharp_quad(float(rng.uniform(1e-4, gen.SHARP_QUAD_MAX_EPS)))[0]
    rep = separated_pair_property(P, 50, rng)
    t.counts["pairs"] += rep.pairs_checked
    if rep.pairs_checked:
        t.low("sees_angle", rep.min_angle)
    for pair, p, q, a in rep.violations:
        t.violation(P, list(pair), "fails", p=list(p), q=list(q), sees_angle=a)


def _quad_lemma(t: _Trial, rng, cfg: HarnessConfig) -> None:
    Q = gen.random_quadrilateral(rng)
    for start in range(4):
        x, y = start, (start + 1) % 4
        s = Q.angles[x] + Q.angles[y]
        if s > QUAD_LEMMA_BOUND + Q.tol.abs:
            continue
        t.counts["hypothesis_met"] += 1
        t.low("margin", QUAD_LEMMA_BOUND - s)
        if not quad_lemma_check(Q, start, cfg.tol.diam):
            t.violation(Q, (x, y), "fails", angle_sum=s)


def _symmetric_planar(t: _Trial, rng, cfg: HarnessConfig) -> None:
    P = gen.random_symmetric_polygon(int(rng.integers(2, 16)), rng)
    for i, a in enumerate(P.angles):
        if a > SYMMETRIC_BOUND + P.tol.abs:
            continue
        t.counts["hypothesis_met"] += 1
        if not symmetric_diameter_check(P, i, cfg.tol.diam):
            t.violation(P, (i,), "fails", angle=a)


# -- solid suites ---------------------------------------------------------------------


def _solid_criterion(t: _Trial, rng, cfg: HarnessConfig) -> None:
    family, T = _solid_body(rng)
    t.counts[f"family_{family}"] += 1
    _gauss_bonnet(t, T, cfg.tol)
    diam = extrinsic_diameter(T, cfg.tol.diam)
    theta = np.asarray(T.complete_angles)
    diametral = np.zeros(len(theta), dtype=bool)
    diametral[list(diam.endpoint_indices)] = True
    for E in vertex_sets(len(theta), rng, theta, cfg.max_sets):
        t.counts["sets"] += 1
        k = len(E)
        total = float(theta[list(E)].sum())
        if total <= SOLID_BOUNDS[k] + T.tol.abs:
            v = evaluate_criterion_3d(T, E, diameter=diam)
            t.counts["hypothesis_met"] += 1
            t.counts[f"hypothesis_met_{k}"] += 1
            if v.violation:
                t.violation(T, E, v.conclusion.value, angle_sum=v.angle_sum, bound=v.bound)
        elif not diametral[list(E)].any():
            t.sharp(total, SOLID_BOUNDS[k], T, E)
    sharp = [i for i in range(len(theta)) if theta[i] <= SOLID_BOUNDS[1] + T.tol.abs]
    for i, j in itertools.combinations(sharp, 2):
        t.counts["two_point"] += 1
        if not two_point_diameter_check_3d(T, i, j, cfg.tol.diam):
            t.violation(T, (i, j), "fails", check="two_point")


def _symmetric_solid_check(t: _Trial, rng, cfg: HarnessConfig) -> None:
    T = _symmetric_solid(rng)
    _gauss_bonnet(t, T, cfg.tol)
    for i, a in enumerate(T.complete_angles):
        if a > SYMMETRIC_BOUND_3D + T.tol.abs:
            continue
        t.counts["hypothesis_met"] += 1
        if not symmetric_diameter_check_3d(T, i, cfg.tol.diam):
            t.violation(T, (i,), "fails", angle=float(a))


def _random_inner_point(T: ConvexPolytope, rng) -> np.ndarray:
    w = rng.dirichlet(np.ones(len(T.vertices)))
    return w @ T.vertices


def _sections(t: _Trial, rng, cfg: HarnessConfig) -> None:
    _, T = _solid_body(rng)
    i = int(rng.integers(len(T.vertices)))
    theta = T.complete_angles[i]
    for _ in range(10):
        b = _random_inner_point(T, rng)
        c = _random_inner_point(T, rng) if rng.random() < 0.5 else T.vertices[int(rng.integers(len(T.vertices)))]
        try:
            a = section_angle_at_vertex(T, i, b, c)
        except (EmptySection, DegeneratePoints, DegenerateInput, InvalidPolygon):
            continue
        t.counts["sections"] += 1
        excess = a - theta / 2
        t.high("section_excess", excess)
        if excess > cfg.tol.abs:
            t.violation(T, (i,), "fails", section_angle=a, complete_angle=float(theta), b=b.tolist(), c=c.tolist())
        return
    t.counts["skipped"] += 1


def _unfolding(t: _Trial, rng, cfg: HarnessConfig) -> None:
    while True:
        X = rng.normal(size=(4, 3)) * np.exp(rng.uniform(-1, 1, 3))
        try:
            Q1, Q2 = unfold_tetrahedron(*X)
            T = hull3d(X)
            break
        except (DegeneratePoints, DegenerateInput, InvalidPolytope):
            continue
    total = sum(Q1.angles.values()) + sum(Q2.angles.values())
    err = abs(total - 4 * math.pi)
    t.counts["tetrahedra"] += 1
    t.high("angle_sum_error", err)
    for name, k in (("x", 0), ("y", 2)):
        # two faces at the unfolded vertex plus the one on the other hinge give its complete angle
        idx = int(np.argmin(np.linalg.norm(T.vertices - X[k], axis=1)))
        t.high("budget_error", abs(Q1.angles[name] + Q2.angles[name] - T.complete_angles[idx]))
    if err > cfg.tol.abs:
        t.violation(T, (), "fails", angle_sum=total)


# -- surface suites -------------------------------------------------------------------


def _surface_body(rng) -> tuple[str, ConvexPolytope]:
    return _solid_body(rng, small=True)


def _surface_criterion(t: _Trial, rng, cfg: HarnessConfig) -> None:
    family, S = _surface_body(rng)
    t.counts[f"family_{family}"] += 1
    theta = np.asarray(S.complete_angles)
    order = [int(i) for i in np.argsort(theta, kind="stable")]
    D = None
    for k in (1, 2, 3):
        E = order[:k]
        total = float(theta[E].sum())
        if total > SURFACE_BOUNDS[k] + S.tol.abs:
            continue
        if D is None:
            D = intrinsic_diameter_estimate(S, cfg.density, cfg.m, cost_cap=cfg.cost_cap)
        t.counts["hypothesis_met"] += 1
        v = evaluate_criterion_surface(S, E, cfg.m, cfg.density, estimate=D)
        if v.conclusion is Verdict.INCONCLUSIVE:
            t.counts["inconclusive_first"] += 1
            if cfg.escalate:
                v = evaluate_criterion_surface(S, E, 2 * cfg.m, 2 * cfg.density)
        t.counts[v.conclusion.value] += 1
        if v.violation:
            t.violation(S, E, v.conclusion.value, angle_sum=v.angle_sum, bound=v.bound, **v.details)


def _symmetric_surface(t: _Trial, rng, cfg: HarnessConfig) -> None:
    S = _symmetric_solid(rng, small=True)
    theta = S.complete_angles
    i = int(np.argmin(theta))
    if theta[i] > SYMMETRIC_BOUND_SURFACE + S.tol.abs:
        t.counts["skipped"] += 1
        return
    t.counts["hypothesis_met"] += 1
    v = symmetric_surface_check(S, i, cfg.m, cfg.density)
    if v is Verdict.INCONCLUSIVE and cfg.escalate:
        v = symmetric_surface_check(S, i, 2 * cfg.m, 2 * cfg.density)
    t.counts[v.value] += 1
    if v is Verdict.FAILS:
        t.violation(S, (i,), v.value, angle=float(theta[i]))


def _random_surface_points(S: ConvexPolytope, rng, k: int):
    pts = []
    for _ in range(k):
        if rng.random() < 0.3:
            pts.append(S.vertex_point(int(rng.integers(len(S.vertices)))))
        else:
            f = int(rng.integers(len(S.faces)))
            pts.append(S.face_point(f, rng.dirichlet(np.ones(len(S.faces[f])))))
    return pts


def _comparison_angles(t: _Trial, rng, cfg: HarnessConfig) -> None:
    _, S = _surface_body(rng)
    a, b, c = _random_surface_points(S, rng, 3)
    try:
        rep = comparison_angle_check(S, *triangle_paths(S, a, b, c, cfg.m), m=cfg.m)
    except (DegenerateTriangle, InvalidParams):
        t.counts["skipped"] += 1
        return
    t.counts["triangles"] += 1
    t.low("angle_margin", min(rep.margins))
    if not rep.ok:
        t.violation(S, (), "fails", points=[list(p.point) for p in (a, b, c)], margins=list(rep.margins),
                    slack=rep.slack)


def _comparison_distance(t: _Trial, rng, cfg: HarnessConfig) -> None:
    _, S = _surface_body(rng)
    a, b, c = _random_surface_points(S, rng, 3)
    try:
        lbc, _ = geodesic_distance(S, b, c, cfg.m)
        rep = comparison_distance_check(S, a, b, c, float(rng.uniform(0, lbc)), cfg.m)
    except (DegenerateTriangle, InvalidParams):
        t.counts["skipped"] += 1
        return
    t.counts["triangles"] += 1
    t.low("distance_margin", rep.margin)
    if not rep.ok:
        t.violation(S, (), "fails", points=[list(p.point) for p in (a, b, c)], margin=rep.margin, slack=rep.slack)


def _makuha(t: _Trial, rng, cfg: HarnessConfig) -> None:
    _, S = _surface_body(rng)
    rep = makuha_check(S, cfg.m, cfg.density)
    t.counts["bodies"] += 1
    t.high("stated_ratio", rep.stated_ratio)
    t.low("sharp_ratio", rep.sharp_ratio)
    t.high("sharp_ratio", rep.sharp_ratio)
    if not rep.stated_holds:
        t.violation(S, (), "fails", extrinsic=rep.extrinsic, intrinsic=rep.intrinsic, slack=rep.slack)
    if not rep.sharp_holds:
        t.counts["sharp_orientation_exceeded"] += 1


def _farthest(t: _Trial, rng, cfg: HarnessConfig) -> None:
    from .search import farthest_point_witness
    _, S = _surface_body(rng)
    theta = S.complete_angles
    cands = [i for i in range(len(theta)) if theta[i] <= math.pi + S.tol.abs]
    if not cands:
        t.counts["skipped"] += 1
        return
    y = cands[int(rng.integers(len(cands)))]
    w = farthest_point_witness(S, y, cfg.density, cfg.m)
    t.counts["hypothesis_met"] += 1
    t.counts[w.verdict.value] += 1
    if w.verdict is Verdict.FAILS:
        t.violation(S, (y,), w.verdict.value)


SUITES: dict[str, Callable[[_Trial, np.random.Generator, HarnessConfig], None]] = {
    "thm2.3": _planar_criterion,
    "lemma2.1": _separated_pairs,
    "lemma2.2": _quad_lemma,
    "cor2.4": _symmetric_planar,
    "thm3.1": _solid_criterion,
    "thm3.2": _symmetric_solid_check,
    "sections": _sections,
    "unfolding": _unfolding,
    "thm4.4": _surface_criterion,
    "cor4.5": _symmetric_surface,
    "lemma4.1": _comparison_angles,
    "lemma4.2": _comparison_distance,
    "makuha": _makuha,
    "farthest": _farthest,
}

SURFACE_SUITES = frozenset({"thm4.4", "cor4.5", "lemma4.1", "lemma4.2", "makuha", "farthest"})


def run_trials(family: str, trial_fn, trials: int, seed: int, settings: dict[str, Any]) -> SearchReport:
    if trials < 0:
        raise InvalidParams("trials must be non-negative")
    start = time.perf_counter()
    parts = []
    for i in range(trials):
        t = _Trial(i)
        trial_fn(t, gen.trial_rng(seed, i))
        parts.append(t)
    report = SearchReport(family, trials, seed, settings=settings)
    _merge(report, parts)
    elapsed = time.perf_counter() - start
    report.runtime = {"seconds": elapsed, "per_trial": elapsed / trials if trials else 0.0}
    return report


def verify_theorem(suite: str, trials: int, seed: int = 0, cost_cap: float = DEFAULT_COST_CAP, m: int = 8,
                   density: int = 5, tol: Tolerances = DEFAULT_TOL, escalate: bool = True) -> SearchReport:
    """Run a named suite over ``trials`` seeded instances.

    Surface suites count inconclusive verdicts separately; only definite
    fails under a satisfied hypothesis are violations.
    """
    if suite not in SUITES:
        raise UnknownSuite(suite)
    cfg = HarnessConfig(m, density, cost_cap, tol, escalate)
    fn = SUITES[suite]
    settings = {"suite": suite, "tol_abs": tol.abs, "tol_diam": tol.diam}
    if suite in SURFACE_SUITES:
        settings.update(m=m, density=density, escalate=escalate)
    report = run_trials(suite, lambda t, rng: fn(t, rng, cfg), trials, seed, settings)
    if suite in ("thm4.4", "cor4.5"):
        met = report.counts.get("hypothesis_met", 0)
        report.stats["inconclusive_rate"] = report.counts.get("inconclusive", 0) / met if met else 0.0
        report.stats["inconclusive_rate_first_pass"] = (
            report.counts.get("inconclusive_first", 0) / met if met else 0.0)
    return report
