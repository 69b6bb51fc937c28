"""Sharpness search, the conjecture probe and the farthest-point witness."""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..core import DEFAULT_TOL, DiametralError, HypothesisNotMet, InvalidParams, InvalidSetting, Tolerances, Verdict
from ..geodesic import geodesic_distance, graph_for
from ..io import body_text
from ..planar import PLANAR_BOUNDS, ConvexPolygon, convex_hull, polygon_diameter
from ..solid import CONJECTURED_PAIR_BOUND, SOLID_BOUNDS, ConvexPolytope, SurfacePoint, extrinsic_diameter, hull3d
from ..surface import (DEFAULT_COST_CAP, SURFACE_BOUNDS, farthest_from, intrinsic_diameter_estimate,
                       member_verdict, path_slack, surface_samples, _TargetTable)
from . import generators as gen
from .harness import SearchReport, _merge, _solid_body, _Trial

SETTINGS = {
    f"{kind}-{k}": (kind, k)
    for kind in ("planar", "solid", "surface")
    for k in (1, 2, 3)
}


# -- families: (init, build) over a real parameter vector ----------------------------------

_CONSTRUCTION_RANGE = {
    1: (1e-6, math.pi / 6 - 1e-6),
    2: (1e-6, gen.SHARP_QUAD_MAX_EPS),
    3: (1e-6, 0.9),
}


def _construction(k: int, t: float) -> ConvexPolygon:
    if k == 1:
        return gen.gen_sharp_triangle(t)
    if k == 2:
        return gen.gen_sharp_quad(t)[0]
    return gen.gen_sharp_pentagon(t)[0]


def _clip_log(x: float, k: int) -> float:
    lo, hi = _CONSTRUCTION_RANGE[k]
    return float(np.clip(math.exp(x), lo, hi))


@dataclass(frozen=True)
class _Family:
    name: str
    init: Callable[[np.random.Generator], np.ndarray]
    build: Callable[[np.ndarray], object]


def _families(kind: str, k: int) -> list[_Family]:
    lo, hi = _CONSTRUCTION_RANGE[k]
    log_init = lambda rng: np.array([rng.uniform(math.log(max(lo, 1e-3)), math.log(hi))])  # noqa: E731
    n_free = k + 2
    if kind == "planar":
        return [
            _Family("construction", log_init, lambda x: _construction(k, _clip_log(x[0], k))),
            _Family("free", lambda rng: rng.normal(size=2 * n_free),
                    lambda x: convex_hull(x.reshape(-1, 2))),
        ]

    def thin(x):
        return gen.polygon_bipyramid(_construction(k, _clip_log(x[0], k)), float(np.clip(math.exp(x[1]), 1e-4, 2.0)))

    thin_init = lambda rng: np.array([log_init(rng)[0], rng.uniform(math.log(1e-3), math.log(0.5))])  # noqa: E731
    fams = [_Family("thin_construction", thin_init, thin)]
    if kind == "solid":
        fams.append(_Family("free", lambda rng: rng.normal(size=3 * (k + 5)),
                            lambda x: hull3d(x.reshape(-1, 3))))
    else:
        fams.append(_Family("free", lambda rng: rng.normal(size=3 * (k + 4)),
                            lambda x: hull3d(x.reshape(-1, 3))))
    return fams


# -- objectives ----------------------------------------------------------------------


def _smallest_sum(angles, allowed, k: int):
    idx = [i for i in np.argsort(angles, kind="stable") if allowed[i]][:k]
    if len(idx) < k:
        return math.inf, ()
    return float(sum(angles[i] for i in idx)), tuple(sorted(int(i) for i in idx))


def _exact_objective(body, k: int):
    if isinstance(body, ConvexPolygon):
        angles = np.asarray(body.angles)
        ends = polygon_diameter(body).endpoint_indices
    else:
        angles = np.asarray(body.complete_angles)
        ends = extrinsic_diameter(body).endpoint_indices
    allowed = [i not in ends for i in range(len(angles))]
    return _smallest_sum(angles, allowed, k)


def _surface_objective(S: ConvexPolytope, k: int, m: int, density: int, cost_cap: float):
    """Smallest angle sum over k vertices that are each definitely not intrinsically diametral."""
    angles = np.asarray(S.complete_angles)
    D = intrinsic_diameter_estimate(S, density, m, cost_cap=cost_cap)
    sample = surface_samples(S, density)
    order = np.argsort(angles, kind="stable")
    allowed = [False] * len(angles)
    found = 0
    for i in order:
        far = farthest_from(S, S.vertex_point(int(i)), density, m, sample=sample)
        if member_verdict(far, D) is Verdict.FAILS:
            allowed[int(i)] = True
            found += 1
            if found == k:
                break
    return _smallest_sum(angles, allowed, k)


def sharpness_search(setting: str, iterations: int = 200, seed: int = 0, restarts: int = 4, m: int = 4,
                     density: int = 3, cost_cap: float = DEFAULT_COST_CAP) -> SearchReport:
    """Hill climbing with random restarts toward the smallest angle sum with no diametral member.

    The result approaches the bound from above; ``best_sharpness.gap`` is how
    close it got. A configuration at or below the bound would contradict
    the corresponding criterion and is recorded as a violation. Surface
    settings only accept members whose verdict is a definite fail.
    """
    if setting not in SETTINGS:
        raise InvalidSetting(setting)
    if iterations < 1 or restarts < 1:
        raise InvalidParams("iterations and restarts must be positive")
    kind, k = SETTINGS[setting]
    bound = {"planar": PLANAR_BOUNDS, "solid": SOLID_BOUNDS, "surface": SURFACE_BOUNDS}[kind][k]
    families = _families(kind, k)
    if kind == "surface":
        objective = lambda body: _surface_objective(body, k, m, density, cost_cap)  # noqa: E731
    else:
        objective = lambda body: _exact_objective(body, k)  # noqa: E731

    start = time.perf_counter()
    per = max(1, iterations // restarts)
    parts = []
    for r in range(restarts):
        rng = gen.trial_rng(seed, r)
        fam = families[r % len(families)]
        t = _Trial(r)
        t.counts[f"restarts_{fam.name}"] += 1

        def score(x):
            try:
                body = fam.build(x)
                val, E = objective(body)
            except DiametralError:
                return math.inf, (), None
            t.counts["evaluations"] += 1
            if math.isfinite(val):
                t.counts["feasible"] += 1
                if val <= bound + DEFAULT_TOL.abs:
                    t.violation(body, E, "fails", angle_sum=val, bound=bound, family=fam.name)
                else:
                    t.sharp(val, bound, body, E)
            return val, E, body

        x = fam.init(rng)
        cur = score(x)[0]
        for _ in range(20):
            if math.isfinite(cur):
                break
            x = fam.init(rng)
            cur = score(x)[0]
        step = 0.5
        for _ in range(per - 1):
            y = x + step * rng.normal(size=x.shape)
            val = score(y)[0]
            if val <= cur:
                x, cur = y, val
                step = min(step * 1.5, 2.0)
            else:
                step = max(step * 0.8, 1e-6)
        t.low(f"best_{fam.name}", cur)
        parts.append(t)
    report = SearchReport(f"search:{setting}", iterations, seed,
                          settings={"setting": setting, "restarts": restarts, "bound": bound,
                                    **({"m": m, "density": density} if kind == "surface" else {})})
    _merge(report, parts)
    report.counts["iterations"] = per * restarts
    report.runtime = {"seconds": time.perf_counter() - start}
    return report


# -- conjecture probe -----------------------------------------------------------------------

PAIR_BOUND = SOLID_BOUNDS[2]


def _default_diametral(T: ConvexPolytope) -> frozenset[int]:
    return extrinsic_diameter(T).endpoint_indices


def _probe_body(rng: np.random.Generator) -> tuple[str, ConvexPolytope]:
    if rng.random() < 0.25:
        eps = float(np.exp(rng.uniform(math.log(1e-4), math.log(gen.SHARP_QUAD_MAX_EPS))))
        h = float(np.exp(rng.uniform(math.log(1e-3), math.log(1.0))))
        return "thin_quad", gen.polygon_bipyramid(gen.gen_sharp_quad(eps)[0], h)
    return _solid_body(rng)


def conjecture_probe(trials: int = 1000, seed: int = 0,
                     diametral_fn: Callable[[ConvexPolytope], frozenset[int]] | None = None,
                     tol: Tolerances = DEFAULT_TOL) -> SearchReport:
    """Look for vertex pairs with angle sum in (3pi/2, 5pi/3] and neither end extrinsically diametral.

    Such pairs are logged in ``notes`` as potential refutations. A pair with
    sum at most 3pi/2 and no diametral end contradicts a proven bound, so
    it is a violation (an implementation bug). ``diametral_fn`` maps a body
    to its diametral vertex indices and can be replaced to test the flagging.
    """
    if trials < 0:
        raise InvalidParams("trials must be non-negative")
    diametral_fn = diametral_fn or _default_diametral
    start = time.perf_counter()
    parts = []
    bins = np.linspace(PAIR_BOUND - math.pi / 3, CONJECTURED_PAIR_BOUND, 7)
    for i in range(trials):
        rng = gen.trial_rng(seed, i)
        family, T = _probe_body(rng)
        t = _Trial(i)
        t.counts[f"family_{family}"] += 1
        theta = np.asarray(T.complete_angles)
        ends = diametral_fn(T)
        for a, b in itertools.combinations(range(len(theta)), 2):
            s = float(theta[a] + theta[b])
            if s > CONJECTURED_PAIR_BOUND + tol.abs:
                continue
            diam = a in ends or b in ends
            band = "le_bound" if s <= PAIR_BOUND + tol.abs else "open_band"
            t.counts[f"pairs_{band}_{'diametral' if diam else 'free'}"] += 1
            if band == "open_band":
                t.counts[f"hist_{int(np.searchsorted(bins, s))}_{'diametral' if diam else 'free'}"] += 1
            if diam:
                continue
            if band == "le_bound":
                t.violation(T, (a, b), "bug", angle_sum=s, bound=PAIR_BOUND)
            else:
                t.notes.append({"trial": i, "points": [a, b], "angle_sum": s, "body": body_text(T),
                                "kind": "potential_refutation"})
                t.sharp(s, PAIR_BOUND, T, (a, b))
        parts.append(t)
    report = SearchReport("conjecture", trials, seed,
                          settings={"pair_bound": PAIR_BOUND, "conjectured_bound": CONJECTURED_PAIR_BOUND,
                                    "histogram_edges": [float(x) for x in bins]})
    _merge(report, parts)
    report.runtime = {"seconds": time.perf_counter() - start}
    return report


# -- farthest-point witness ----------------------------------------------------------------


@dataclass(frozen=True)
class FarthestWitness:
    verdict: Verdict
    y: int
    x: SurfacePoint | None
    distance: float
    farthest: float
    slack: float


def farthest_point_witness(S: ConvexPolytope, y: int, density: int = 5, m: int = 8,
                           candidates: int = 8) -> FarthestWitness:
    """Look for a point x whose farthest points include the vertex ``y``.

    Candidates are the samples farthest from ``y``. ``holds`` when for some
    candidate the distance to ``y`` matches its farthest distance within the
    error bars; otherwise ``inconclusive``. Failing to find x never proves
    that none exists, so this check does not return ``fails``.
    """
    theta = S.complete_angles[y]
    if theta > math.pi + S.tol.abs:
        raise HypothesisNotMet(f"complete angle {theta:.6f} exceeds pi")
    graph = graph_for(S, m)
    sample = surface_samples(S, density)
    src = S.vertex_point(y)
    pts = [p for p in sample.points if p.key() != src.key()]
    (dist,), _ = graph.distances([src])
    g = _TargetTable(graph, pts).evaluate(dist[None, :])[0]
    best = (Verdict.INCONCLUSIVE, None, 0.0, 0.0, 0.0)
    for i in np.argsort(-g, kind="stable")[:candidates]:
        x = pts[int(i)]
        L, path = geodesic_distance(S, x, src, m, graph)
        far = farthest_from(S, x, density, m, sample=sample)
        sl = path_slack(path, m) + far.slack
        if L >= far.value - sl:
            return FarthestWitness(Verdict.HOLDS, y, x, L, far.value, sl)
        if best[1] is None:
            best = (Verdict.INCONCLUSIVE, x, L, far.value, sl)
    return FarthestWitness(*best[:1], y, *best[1:])
