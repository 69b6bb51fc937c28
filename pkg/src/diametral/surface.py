"""Intrinsic diameters, angle-sum criteria and comparison checks on polyhedral surfaces."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import (
    BadCardinality,
    BudgetExceeded,
    CriterionVerdict,
    DegenerateTriangle,
    HypothesisNotMet,
    InvalidParams,
    NotOnBoundary,
    Verdict,
    angle_between,
)
from .geodesic import GeodesicGraph, GeodesicPath, geodesic_distance, graph_for
from .solid import ConvexPolytope, SurfacePoint, complete_angle, extrinsic_diameter, mirror_vertex

SURFACE_BOUNDS = {1: 2 * math.pi / 3, 2: 5 * math.pi / 3, 3: 5 * math.pi / 2}
SYMMETRIC_BOUND_SURFACE = 5 * math.pi / 6

# Discretisation allowance per unit length, calibrated on the cube's opposite
# vertices with evenly spaced edge points: (graph - sqrt5) * (m + 1) / sqrt5
# peaks at 0.027 (m = 2) over m >= 1.
SLACK_C = 0.03
DEFAULT_COST_CAP = 5e8
TOP_K = 24
VERTEX_SEEDS = 3


def discretisation_slack(length: float, m: int) -> float:
    return SLACK_C * length / (m + 1)


def path_slack(path: GeodesicPath, m: int) -> float:
    """Error bar of one straightened distance: graph gap plus resolution term."""
    gap = path.graph_length - path.length if math.isfinite(path.graph_length) else 0.0
    return max(gap, 0.0) + discretisation_slack(path.length, m)


# -- sampling -----------------------------------------------------------------------


@dataclass(frozen=True)
class SurfaceSample:
    points: tuple[SurfacePoint, ...]
    density: int
    covering_radius: float


def surface_samples(S: ConvexPolytope, density: int) -> SurfaceSample:
    """Vertices, evenly spaced edge points and barycentric grids over fan triangles.

    Every surface point lies within ``covering_radius`` (measured inside its
    face) of some sample.
    """
    if density < 1:
        raise InvalidParams("sampling density must be at least 1")
    pts = [S.vertex_point(i) for i in range(len(S.vertices))]
    for e in range(len(S.edges)):
        pts.extend(S.edge_point(e, k / density) for k in range(1, density))
    longest = 0.0
    V = S.vertices
    for k, f in enumerate(S.faces):
        n = len(f)
        seen = set()
        for j in range(1, n - 1):
            tri = (0, j, j + 1)
            sides = [np.linalg.norm(V[f[a]] - V[f[b]]) for a, b in ((0, j), (j, j + 1), (0, j + 1))]
            longest = max(longest, max(sides))
            for a in range(density + 1):
                for b in range(density + 1 - a):
                    c = density - a - b
                    w = np.zeros(n)
                    w[tri[0]], w[tri[1]], w[tri[2]] = a / density, b / density, c / density
                    support = [i for i in range(n) if w[i] > 0]
                    if len(support) < 2:
                        continue
                    if len(support) == 2 and (support[1] - support[0]) in (1, n - 1):
                        continue  # lies on a polygon edge, covered by edge samples
                    key = tuple(np.round(w, 12))
                    if key in seen:
                        continue
                    seen.add(key)
                    pts.append(S.face_point(k, w))
    return SurfaceSample(tuple(pts), density, longest / density)


class _TargetTable:
    """Padded neighbour lists so graph distances to many samples vectorise."""

    def __init__(self, graph: GeodesicGraph, points: Sequence[SurfacePoint]):
        nbrs = [graph.neighbours(p) for p in points]
        width = max(len(ids) for ids, _ in nbrs)
        self.idx = np.zeros((len(points), width), dtype=np.int64)
        self.w = np.full((len(points), width), np.inf)
        for i, (ids, w) in enumerate(nbrs):
            self.idx[i, : len(ids)] = ids
            self.w[i, : len(ids)] = w

    def evaluate(self, dist: np.ndarray) -> np.ndarray:
        """``dist`` has shape (rows, nodes); returns (rows, samples)."""
        return np.min(dist[:, self.idx] + self.w[None, :, :], axis=2)


# -- diameter estimate ---------------------------------------------------------------


@dataclass(frozen=True)
class IntrinsicDiameterEstimate:
    """Best straightened distance over sampled pairs, with its error bar.

    ``value`` is the straightened length of the witness pair; ``graph_bound``
    the graph length for the same pair. ``lower_bound = value - slack``.
    """

    value: float
    lower_bound: float
    graph_bound: float
    slack: float
    witness: tuple[SurfacePoint, SurfacePoint]
    path: GeodesicPath
    m: int
    density: int
    n_samples: int
    covering_radius: float
    candidates: tuple[tuple[float, float], ...] = field(default=(), compare=False)


def _check_budget(graph: GeodesicGraph, n_samples: int, cap: float) -> None:
    cost = float(n_samples) * graph.n_nodes
    if cost > cap:
        raise BudgetExceeded(f"{n_samples} samples x {graph.n_nodes} graph nodes exceeds cost cap {cap:g}")


def _straightened(S, p, q, m, graph):
    if p.key() == q.key():
        return None
    return geodesic_distance(S, p, q, m=m, graph=graph)


def _local_candidates(S: ConvexPolytope, r: SurfacePoint, step: float, directions: int = 8) -> list[SurfacePoint]:
    """Points at distance ``step`` from ``r`` inside each face around it."""
    normals = S.face_planes[0]
    frames = []
    for k in S.faces_of(r):
        f = S.faces[k]
        e1 = S.vertices[f[1]] - S.vertices[f[0]]
        e1 /= np.linalg.norm(e1)
        frames.append((k, e1, np.cross(normals[k], e1)))
    out = []
    x = r.xyz
    for k, e1, e2 in frames:
        for i in range(directions):
            phi = 2 * math.pi * (i + 0.5) / directions
            y = x + step * (math.cos(phi) * e1 + math.sin(phi) * e2)
            try:
                out.append(S.point_in_face(k, y))
            except NotOnBoundary:
                pass
    return out


def _adjacent_faces(S: ConvexPolytope, k: int):
    out = []
    f = S.faces[k]
    for a, b in zip(f, f[1:] + f[:1]):
        e = S.edge_index[(min(a, b), max(a, b))]
        g = [h for h in S.edge_faces[e] if h != k][0]
        out.append((g, e))
    return out


def _climb(S, m, graph, fixed, cur, best_len, best_path, step, rounds=16):
    """Move ``cur`` uphill in straightened distance from ``fixed``; the step halves on failure."""
    floor = 1e-4 * S.scale
    for _ in range(rounds):
        if step < floor:
            break
        cands = _local_candidates(S, cur, step)
        improved = False
        if cands:
            (dist,), _ = graph.distances([fixed])
            g = _TargetTable(graph, cands).evaluate(dist[None, :])[0]
            for i in np.argsort(-g, kind="stable")[:4]:
                res = _straightened(S, fixed, cands[int(i)], m, graph)
                if res is not None and res[0] > best_len + 1e-12 * S.scale:
                    best_len, best_path, cur, improved = res[0], res[1], cands[int(i)], True
        if not improved:
            step *= 0.5
    return cur, best_len, best_path


def _refine(S, m, graph, p, q, best_len, best_path, step):
    """Alternating hill climb moving one endpoint at a time."""
    for _ in range(3):
        before = best_len
        q, best_len, best_path = _climb(S, m, graph, p, q, best_len, best_path, step)
        p, best_len, rev = _climb(S, m, graph, q, p, best_len, None, step)
        if rev is not None:
            best_path = geodesic_distance(S, p, q, m=m, graph=graph)[1]
            best_len = best_path.length
        if best_len <= before + 1e-12 * S.scale:
            break
    return p, q, best_len, best_path


def intrinsic_diameter_estimate(S: ConvexPolytope, density: int = 5, m: int = 8, top_k: int = TOP_K,
                                refine: bool = True, cost_cap: float = DEFAULT_COST_CAP) -> IntrinsicDiameterEstimate:
    """Estimate the intrinsic diameter from sampled pairs plus local refinement."""
    graph = graph_for(S, m)
    sample = surface_samples(S, density)
    pts = sample.points
    _check_budget(graph, len(pts), cost_cap)
    table = _TargetTable(graph, pts)
    n = len(pts)
    best_rows = []
    ecc = np.zeros(n)
    far = np.zeros(n, dtype=np.int64)
    chunk = max(1, int(4e6 // max(1, n * table.idx.shape[1])))
    for start in range(0, n, chunk):
        block = pts[start:start + chunk]
        dist, _ = graph.distances(block)
        G = table.evaluate(np.atleast_2d(dist))
        ecc[start:start + len(block)] = G.max(axis=1)
        far[start:start + len(block)] = G.argmax(axis=1)
        for r in range(G.shape[0]):
            G[r, : start + r + 1] = -np.inf  # upper triangle only
        flat = np.argsort(-G, axis=None)[:top_k]
        for f in flat:
            i, j = divmod(int(f), n)
            best_rows.append((float(G[i, j]), start + i, j))
    best_rows.sort(key=lambda t: (-t[0], t[1], t[2]))
    best = None
    cands = []
    for g_len, i, j in best_rows[:top_k]:
        res = _straightened(S, pts[i], pts[j], m, graph)
        if res is None:
            continue
        L, path = res
        cands.append((g_len, L))
        if best is None or L > best[0] + 1e-15:
            best = (L, path, pts[i], pts[j])
    L, path, p, q = best
    if refine:
        p, q, L, path = _refine(S, m, graph, p, q, L, path, sample.covering_radius)
        # diameters often leave a sharp vertex; climb from the most eccentric ones too
        nv = len(S.vertices)
        for v in np.argsort(-ecc[:nv], kind="stable")[:VERTEX_SEEDS]:
            x, w = pts[int(v)], pts[int(far[v])]
            res = _straightened(S, x, w, m, graph)
            if res is None:
                continue
            w, Lv, pv = _climb(S, m, graph, x, w, res[0], res[1], sample.covering_radius)
            if Lv > L + 1e-12 * S.scale:
                p, q, L, path = x, w, Lv, pv
    slack = path_slack(path, m)
    return IntrinsicDiameterEstimate(L, L - slack, path.graph_length, slack, (p, q), path, m, density, n,
                                     sample.covering_radius, tuple(cands))


@dataclass(frozen=True)
class FarthestReport:
    """Farthest sampled point from ``source`` and a rigorous upper bound on the true farthest distance."""

    source: SurfacePoint
    value: float
    upper: float
    slack: float
    witness: SurfacePoint
    path: GeodesicPath


def farthest_from(S: ConvexPolytope, x: SurfacePoint, density: int = 5, m: int = 8, top_k: int = TOP_K,
                  refine: bool = True, sample: SurfaceSample | None = None) -> FarthestReport:
    graph = graph_for(S, m)
    sample = sample or surface_samples(S, density)
    pts = [p for p in sample.points if p.key() != x.key()]
    (dist,), _ = graph.distances([x])
    g = _TargetTable(graph, pts).evaluate(dist[None, :])[0]
    upper = g.copy()
    order = np.argsort(-g, kind="stable")[:top_k]
    best = None
    for i in order:
        res = _straightened(S, x, pts[int(i)], m, graph)
        if res is None:
            continue
        L, path = res
        upper[int(i)] = min(upper[int(i)], L)
        if best is None or L > best[0] + 1e-15:
            best = (L, path, pts[int(i)])
    L, path, w = best
    if refine:
        w, L, path = _climb(S, m, graph, x, w, L, path, sample.covering_radius)
    hi = max(float(upper.max()), L) + sample.covering_radius
    return FarthestReport(x, L, hi, path_slack(path, m), w, path)


def _as_point(S: ConvexPolytope, p) -> SurfacePoint:
    return S.vertex_point(p) if isinstance(p, (int, np.integer)) else p


def member_verdict(far: FarthestReport, D: IntrinsicDiameterEstimate) -> Verdict:
    if far.value >= D.value - D.slack - far.slack:
        return Verdict.HOLDS
    if far.upper < D.lower_bound:
        return Verdict.FAILS
    return Verdict.INCONCLUSIVE


def evaluate_criterion_surface(S: ConvexPolytope, E: Sequence[SurfacePoint | int], m: int = 8, density: int = 5,
                               escalate: bool = False, estimate: IntrinsicDiameterEstimate | None = None,
                               tau: float = 1e-9) -> CriterionVerdict:
    """Angle-sum criterion with a three-valued intrinsic-diametral conclusion.

    A member holds when its farthest straightened distance reaches the
    diameter estimate within the combined error bars; it fails only when a
    rigorous upper bound on its farthest distance stays below the
    diameter's lower bound. With ``escalate`` an inconclusive result is
    recomputed once at doubled resolution and sampling.
    """
    pts = [_as_point(S, p) for p in E]
    if len(pts) not in SURFACE_BOUNDS:
        raise BadCardinality(f"criterion needs 1 to 3 points, got {len(pts)}")
    angles = tuple(complete_angle(S, p) for p in pts)
    total = float(sum(angles))
    bound = SURFACE_BOUNDS[len(pts)]
    D = estimate if estimate is not None else intrinsic_diameter_estimate(S, density, m)
    sample = surface_samples(S, density)
    fars = [farthest_from(S, p, density, m, sample=sample) for p in pts]
    best = max(fars, key=lambda f: f.value)
    if best.value > D.value:
        D = IntrinsicDiameterEstimate(best.value, best.value - best.slack, best.path.graph_length, best.slack,
                                      (best.source, best.witness), best.path, m, density, D.n_samples,
                                      D.covering_radius, D.candidates)
    member = [member_verdict(f, D) for f in fars]
    if any(v is Verdict.HOLDS for v in member):
        conclusion = Verdict.HOLDS
    elif all(v is Verdict.FAILS for v in member):
        conclusion = Verdict.FAILS
    else:
        conclusion = Verdict.INCONCLUSIVE
    if conclusion is Verdict.INCONCLUSIVE and escalate:
        return evaluate_criterion_surface(S, pts, 2 * m, 2 * density, escalate=False, tau=tau)
    return CriterionVerdict(
        angle_sum=total,
        bound=bound,
        hypothesis_holds=total <= bound + tau,
        conclusion=conclusion,
        diametral_members=tuple(i for i, v in enumerate(member) if v is Verdict.HOLDS),
        margin=bound - total,
        angles=angles,
        details={
            "diameter": D.value,
            "diameter_lower": D.lower_bound,
            "diameter_slack": D.slack,
            "farthest": [f.value for f in fars],
            "farthest_upper": [f.upper for f in fars],
            "member_verdicts": [v.value for v in member],
            "m": m,
            "density": density,
        },
    )


# -- tangent-cone angles ------------------------------------------------------------


def _vertex_chart(S: ConvexPolytope, v: int):
    """Angular coordinate of each face corner around vertex ``v``.

    Returns ``{face: (start, corner, e_start, normal)}`` and the total angle.
    The walk crosses from each face into the neighbour sharing the corner's
    closing edge, so the order is consistent whatever the star order is.
    """
    normals = S.face_planes[0]
    V = S.vertices
    corner = {}
    for k in S.vertex_faces[v]:
        f = S.faces[k]
        i = f.index(v)
        corner[k] = (f[(i + 1) % len(f)], f[i - 1])
    start_face = S.vertex_faces[v][0]
    chart, phi, k = {}, 0.0, start_face
    for _ in range(len(corner)):
        nxt, prv = corner[k]
        e0 = V[nxt] - V[v]
        e1 = V[prv] - V[v]
        ang = angle_between(e0, e1)
        chart[k] = (phi, ang, e0 / np.linalg.norm(e0), normals[k])
        phi += ang
        k = next(g for g, (n2, _) in corner.items() if n2 == prv)
    return chart, phi


def _angle_in_corner(d: np.ndarray, e0: np.ndarray, n: np.ndarray) -> float:
    return math.atan2(float(np.dot(np.cross(e0, d), n)), float(np.dot(e0, d)))


def tangent_angle(S: ConvexPolytope, p: SurfacePoint, d1, f1: int, d2, f2: int) -> float:
    """Angle at ``p`` between two surface directions, each given in a face containing ``p``.

    Directions are developed into the tangent cone at ``p``; at a vertex the
    answer is ``min(|a - b|, total - |a - b|)`` for their angular coordinates.
    """
    d1, d2 = np.asarray(d1, dtype=float), np.asarray(d2, dtype=float)
    if p.kind == "face":
        return angle_between(d1, d2)
    if p.kind == "edge":
        a, b = S.edges[p.index]
        t = S.vertices[b] - S.vertices[a]
        t /= np.linalg.norm(t)
        normals = S.face_planes[0]

        def chart(d, k, sign):
            w = np.cross(normals[k], t)
            if np.dot(S.face_centroid(k).xyz - p.xyz, w) < 0:
                w = -w
            return np.array([d @ t, sign * (d @ w)])

        fa, _ = S.edge_faces[p.index]
        return angle_between(chart(d1, f1, 1 if f1 == fa else -1), chart(d2, f2, 1 if f2 == fa else -1))
    chart, total = _vertex_chart(S, p.index)
    s1, _, e1, n1 = chart[f1]
    s2, _, e2, n2 = chart[f2]
    a = s1 + _angle_in_corner(d1, e1, n1)
    b = s2 + _angle_in_corner(d2, e2, n2)
    delta = abs(a - b) % total
    return min(delta, total - delta, math.pi)


def _direction_out(path: GeodesicPath, at_start: bool):
    pts = path.polyline
    if at_start:
        return pts[1] - pts[0], path.faces[0]
    return pts[-2] - pts[-1], path.faces[-1]


def _comparison_angles(a: float, b: float, c: float) -> tuple[float, float, float]:
    """Angles of the Euclidean triangle with sides a=|BC|, b=|CA|, c=|AB| at A, B, C."""

    def ang(opp, s1, s2):
        cosv = (s1 * s1 + s2 * s2 - opp * opp) / (2 * s1 * s2)
        return math.acos(min(1.0, max(-1.0, cosv)))

    return ang(a, b, c), ang(b, c, a), ang(c, a, b)


@dataclass(frozen=True)
class ComparisonReport:
    surface_angles: tuple[float, ...]
    comparison_angles: tuple[float, ...]
    margins: tuple[float, ...]
    slack: float

    @property
    def ok(self) -> bool:
        return min(self.margins) >= -self.slack


def comparison_angle_check(S: ConvexPolytope, ab: GeodesicPath, bc: GeodesicPath, ca: GeodesicPath,
                           m: int = 8) -> ComparisonReport:
    """Corner angles of a geodesic triangle against its Euclidean comparison triangle."""
    A, B, C = ab.p, bc.p, ca.p
    if ab.q.key() != B.key() or bc.q.key() != C.key() or ca.q.key() != A.key():
        raise InvalidParams("paths must run a->b, b->c, c->a")
    la, lb, lc = bc.length, ca.length, ab.length
    sl = path_slack(ab, m) + path_slack(bc, m) + path_slack(ca, m)
    if la > lb + lc + sl or lb > la + lc + sl or lc > la + lb + sl or min(la, lb, lc) <= 0:
        raise DegenerateTriangle("side lengths violate the triangle inequality")
    comp = _comparison_angles(la, lb, lc)
    surf = []
    for corner, out_path, in_path in ((A, ab, ca), (B, bc, ab), (C, ca, bc)):
        d1, f1 = _direction_out(out_path, True)
        d2, f2 = _direction_out(in_path, False)
        surf.append(tangent_angle(S, corner, d1, f1, d2, f2))
    margins = tuple(s - c for s, c in zip(surf, comp))
    angle_slack = 2 * sl / min(la, lb, lc) + 1e-9
    return ComparisonReport(tuple(surf), comp, margins, angle_slack)


@dataclass(frozen=True)
class DistanceComparison:
    surface_distance: float
    comparison_distance: float
    margin: float
    slack: float
    d: SurfacePoint

    @property
    def ok(self) -> bool:
        return self.margin >= -self.slack


def comparison_distance_check(S: ConvexPolytope, a, b, c, s: float | None = None, m: int = 8) -> DistanceComparison:
    """Distance from ``a`` to a point ``d`` on the b-c geodesic against the comparison triangle.

    ``s`` is the arc length from ``b`` to ``d`` (default: midpoint).
    """
    a, b, c = (_as_point(S, x) for x in (a, b, c))
    lab, ab = geodesic_distance(S, a, b, m)
    lbc, bc = geodesic_distance(S, b, c, m)
    lca, ca = geodesic_distance(S, c, a, m)
    sl = path_slack(ab, m) + path_slack(bc, m) + path_slack(ca, m)
    if lbc > lab + lca + sl or lab > lbc + lca + sl or lca > lab + lbc + sl:
        raise DegenerateTriangle("side lengths violate the triangle inequality")
    s = lbc / 2 if s is None else s
    if not 0 <= s <= lbc:
        raise InvalidParams("arc length outside the b-c path")
    d = bc.point_at(S, s)
    # comparison triangle: b' at origin, c' on the x axis
    ax = (lab ** 2 - lca ** 2 + lbc ** 2) / (2 * lbc)
    ay = math.sqrt(max(lab ** 2 - ax ** 2, 0.0))
    comp = math.hypot(ax - s, ay)
    if d.key() == a.key():
        rho, sl_ad = 0.0, 0.0
    else:
        rho, ad = geodesic_distance(S, a, d, m)
        sl_ad = path_slack(ad, m)
    return DistanceComparison(rho, comp, rho - comp, sl + sl_ad + 1e-9, d)


# -- extrinsic/intrinsic relation -------------------------------------------------------


@dataclass(frozen=True)
class MakuhaReport:
    """Both orientations of the half-pi relation between the two diameters.

    ``stated_*`` checks extrinsic <= (pi/2) intrinsic, which always holds
    since geodesics are never shorter than chords. ``sharp_*`` checks
    intrinsic <= (pi/2) extrinsic, the orientation with equality on the
    round sphere.
    """

    extrinsic: float
    intrinsic: float
    slack: float
    stated_ratio: float
    stated_holds: bool
    sharp_ratio: float
    sharp_holds: bool


def makuha_check(S: ConvexPolytope, m: int = 8, density: int = 5,
                 estimate: IntrinsicDiameterEstimate | None = None) -> MakuhaReport:
    ext = extrinsic_diameter(S).length
    est = estimate or intrinsic_diameter_estimate(S, density, m)
    half = math.pi / 2
    return MakuhaReport(
        extrinsic=ext,
        intrinsic=est.value,
        slack=est.slack,
        stated_ratio=ext / (half * est.value),
        stated_holds=ext <= half * est.value + est.slack,
        sharp_ratio=est.value / (half * ext),
        sharp_holds=est.lower_bound <= half * ext + 1e-9 * S.scale,
    )


# -- centrally symmetric surfaces -------------------------------------------------------


def symmetric_surface_check(S: ConvexPolytope, p: int, m: int = 8, density: int = 5, tau: float = 1e-9,
                            estimate: IntrinsicDiameterEstimate | None = None) -> Verdict:
    """Whether the geodesic from vertex ``p`` to its mirror image realises the diameter."""
    q = mirror_vertex(S, p)
    theta = complete_angle(S, p)
    if theta > SYMMETRIC_BOUND_SURFACE + tau:
        raise HypothesisNotMet(f"complete angle {theta:.6f} exceeds 5pi/6")
    D = estimate or intrinsic_diameter_estimate(S, density, m)
    L, path = geodesic_distance(S, S.vertex_point(p), S.vertex_point(q), m)
    sl = path_slack(path, m)
    if L >= D.value - D.slack - sl:
        return Verdict.HOLDS
    # the mirrored pair is only known up to its own error bar
    if L + sl < D.lower_bound:
        return Verdict.FAILS
    return Verdict.INCONCLUSIVE


def triangle_paths(S: ConvexPolytope, a, b, c, m: int = 8) -> tuple[GeodesicPath, GeodesicPath, GeodesicPath]:
    """Geodesics a->b, b->c, c->a."""
    a, b, c = (_as_point(S, x) for x in (a, b, c))
    return tuple(geodesic_distance(S, x, y, m)[1] for x, y in itertools.pairwise((a, b, c, a)))
