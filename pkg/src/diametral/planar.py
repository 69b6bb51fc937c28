"""Convex polygon geometry and the planar diametral-point criteria.

Polygons are strictly convex counterclockwise vertex cycles. Boundary points
are either vertices or points interior to an edge; the latter always have a
half-plane tangent cone, i.e. angle pi.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .core import (
    DEFAULT_TOL,
    BadCardinality,
    CriterionVerdict,
    DegenerateAngle,
    DegenerateInput,
    DiameterResult,
    HypothesisNotMet,
    IndexOutOfRange,
    InvalidPolygon,
    NotOnBoundary,
    NotSymmetric,
    OnDiameter,
    Tolerances,
    Verdict,
)

#: Criterion bounds for |E| = 1, 2, 3 boundary points.
PLANAR_BOUNDS = {1: math.pi / 3, 2: 5 * math.pi / 6, 3: 4 * math.pi / 3}
SEPARATED_PAIR_BOUND = 5 * math.pi / 6
QUAD_LEMMA_BOUND = math.pi
SYMMETRIC_BOUND = 5 * math.pi / 12


class Point2(NamedTuple):
    x: float
    y: float


def cross(o: Sequence[float], a: Sequence[float], b: Sequence[float]) -> float:
    """Twice the signed area of triangle oab (positive for a left turn)."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def angle_at(p: Sequence[float], a: Sequence[float], b: Sequence[float]) -> float:
    """Unsigned angle apb in [0, pi]."""
    ax, ay = a[0] - p[0], a[1] - p[1]
    bx, by = b[0] - p[0], b[1] - p[1]
    return abs(math.atan2(ax * by - ay * bx, ax * bx + ay * by))


def _strict_left(o, a, b, tau: float) -> bool:
    c = cross(o, a, b)
    if c <= tau:
        return False
    # turning angle, so long edges cannot hide a near-straight vertex
    return math.pi - angle_at(a, o, b) > tau


@dataclass(frozen=True)
class BoundaryPoint2:
    """A vertex (``vertex`` set) or an edge-interior point (``edge``, ``t``)."""

    point: Point2
    vertex: int | None = None
    edge: int | None = None
    t: float | None = None

    @property
    def is_vertex(self) -> bool:
        return self.vertex is not None


@dataclass(frozen=True)
class ConvexPolygon:
    """Strictly convex polygon given by a counterclockwise vertex cycle."""

    vertices: tuple[Point2, ...]
    tol: Tolerances = field(default=DEFAULT_TOL, compare=False)

    def __init__(self, vertices: Iterable[Sequence[float]], tol: Tolerances = DEFAULT_TOL):
        verts = tuple(Point2(float(v[0]), float(v[1])) for v in vertices)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "tol", tol)
        self._validate()

    def _validate(self) -> None:
        verts, tau = self.vertices, self.tol.abs
        n = len(verts)
        if n < 3:
            raise InvalidPolygon(f"need at least 3 vertices, got {n}")
        if not all(math.isfinite(c) for v in verts for c in v):
            raise InvalidPolygon("non-finite coordinate")
        for i in range(n):
            a, b, c = verts[i - 1], verts[i], verts[(i + 1) % n]
            if math.dist(a, b) <= tau:
                raise InvalidPolygon(f"repeated vertex at index {i}")
            if not _strict_left(a, b, c, tau):
                raise InvalidPolygon(f"vertex {i} is not a strict left turn")
        turning = sum(math.pi - angle_at(verts[i], verts[i - 1], verts[(i + 1) % n]) for i in range(n))
        if abs(turning - 2 * math.pi) > 1e-6:
            raise InvalidPolygon("vertex cycle winds more than once")

    def __len__(self) -> int:
        return len(self.vertices)

    @cached_property
    def array(self) -> np.ndarray:
        arr = np.array(self.vertices, dtype=float)
        arr.setflags(write=False)
        return arr

    @cached_property
    def angles(self) -> tuple[float, ...]:
        v, n = self.vertices, len(self.vertices)
        return tuple(angle_at(v[i], v[i - 1], v[(i + 1) % n]) for i in range(n))

    @property
    def scale(self) -> float:
        return max(1.0, max(abs(c) for v in self.vertices for c in v))

    def _check_index(self, i: int) -> int:
        if not isinstance(i, (int, np.integer)) or not 0 <= i < len(self.vertices):
            raise IndexOutOfRange(f"vertex index {i} out of range for {len(self.vertices)}-gon")
        return int(i)

    def vertex_point(self, i: int) -> BoundaryPoint2:
        i = self._check_index(i)
        return BoundaryPoint2(self.vertices[i], vertex=i)

    def edge_point(self, i: int, t: float) -> BoundaryPoint2:
        """Point at parameter ``t`` on the edge from vertex ``i`` to vertex ``i+1``."""
        i = self._check_index(i)
        if not 0.0 < t < 1.0:
            raise NotOnBoundary(f"edge parameter {t} not in (0, 1)")
        a, b = self.vertices[i], self.vertices[(i + 1) % len(self.vertices)]
        p = Point2(a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))
        return BoundaryPoint2(p, edge=i, t=float(t))

    def locate(self, p: Sequence[float]) -> BoundaryPoint2:
        """Classify an arbitrary point as a vertex or edge point of the boundary."""
        tau = self.tol.abs * self.scale
        verts, n = self.vertices, len(self.vertices)
        for i, v in enumerate(verts):
            if math.dist(v, p) <= tau:
                return BoundaryPoint2(v, vertex=i)
        for i in range(n):
            a, b = verts[i], verts[(i + 1) % n]
            length = math.dist(a, b)
            if abs(cross(a, b, p)) / length <= tau:
                t = ((p[0] - a[0]) * (b[0] - a[0]) + (p[1] - a[1]) * (b[1] - a[1])) / length**2
                if 0.0 < t < 1.0:
                    return self.edge_point(i, t)
        raise NotOnBoundary(f"point {tuple(p)} is not on the polygon boundary")

    def _resolve(self, p: BoundaryPoint2 | int) -> BoundaryPoint2:
        if isinstance(p, (int, np.integer)):
            return self.vertex_point(int(p))
        if p.is_vertex:
            self._check_index(p.vertex)
            if math.dist(self.vertices[p.vertex], p.point) > self.tol.abs * self.scale:
                raise NotOnBoundary(f"point does not match vertex {p.vertex}")
            return p
        if p.edge is None:
            return self.locate(p.point)
        q = self.edge_point(p.edge, p.t)
        if math.dist(q.point, p.point) > self.tol.abs * self.scale:
            raise NotOnBoundary("point does not lie on its stated edge")
        return p

    def transformed(self, matrix, offset=(0.0, 0.0)) -> "ConvexPolygon":
        """Image under ``x -> matrix @ x + offset`` (orientation-reversing maps re-ordered)."""
        m = np.asarray(matrix, dtype=float)
        pts = self.array @ m.T + np.asarray(offset, dtype=float)
        if np.linalg.det(m) < 0:
            pts = pts[::-1]
        return ConvexPolygon(pts, self.tol)


def convex_hull(points: Iterable[Sequence[float]], tol: Tolerances = DEFAULT_TOL) -> ConvexPolygon:
    """Monotone-chain hull; collinear and near-collinear boundary points are dropped."""
    pts = sorted({(float(p[0]), float(p[1])) for p in points})
    if len(pts) < 3:
        raise DegenerateInput("need at least 3 distinct points")
    tau = tol.abs

    def chain(seq):
        out: list[tuple[float, float]] = []
        for p in seq:
            while len(out) >= 2 and not _strict_left(out[-2], out[-1], p, tau):
                out.pop()
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise DegenerateInput("all points are collinear")
    # the seam vertex (first point) has not been tested against its wrap-around neighbours
    changed = True
    while changed and len(hull) >= 3:
        changed = False
        for i in range(len(hull)):
            if not _strict_left(hull[i - 1], hull[i], hull[(i + 1) % len(hull)], tau):
                del hull[i]
                changed = True
                break
    if len(hull) < 3:
        raise DegenerateInput("all points are collinear")
    return ConvexPolygon(hull, tol)


def _d2(v: Sequence[Point2], i: int, j: int) -> float:
    dx = v[i][0] - v[j][0]
    dy = v[i][1] - v[j][1]
    return dx * dx + dy * dy


def antipodal_pairs(P: ConvexPolygon) -> set[tuple[int, int]]:
    """Vertex pairs admitting parallel supporting lines (rotating calipers, O(n)).

    For every edge the farthest vertex from its line is tracked with a single
    advancing pointer; that vertex is antipodal to both edge endpoints.
    """
    v, n = P.vertices, len(P.vertices)
    tie = P.tol.abs * P.scale

    def height(i: int, k: int) -> float:
        return cross(v[i], v[(i + 1) % n], v[k % n])

    j = max(range(n), key=lambda k: height(0, k))
    pairs: set[tuple[int, int]] = set()
    for i in range(n):
        i1 = (i + 1) % n
        while height(i, j + 1) > height(i, j):
            j = (j + 1) % n
        far = [j % n]
        if abs(height(i, j + 1) - height(i, j)) <= tie:
            far.append((j + 1) % n)
        if abs(height(i, j - 1) - height(i, j)) <= tie:
            far.append((j - 1) % n)
        for k in far:
            for a in (i, i1):
                if a != k:
                    pairs.add((min(a, k), max(a, k)))
    return pairs


def polygon_diameter(P: ConvexPolygon, tau_d: float | None = None) -> DiameterResult[BoundaryPoint2]:
    """Diameter of a convex polygon with every vertex pair within relative ``tau_d``.

    Antipodal pairs seed the search. Any non-antipodal pair has a neighbour pair
    (one index shifted by one) that is strictly longer, so every near-maximal
    pair is reachable from a near-maximal antipodal pair through near-maximal
    pairs; a flood fill over index neighbours collects them all.
    """
    if tau_d is None:
        tau_d = P.tol.diam
    v, n = P.vertices, len(P.vertices)
    seeds = antipodal_pairs(P)
    best = max(_d2(v, i, j) for i, j in seeds)
    threshold = best * (1.0 - tau_d) ** 2
    found = {p for p in seeds if _d2(v, *p) >= threshold}
    queue = deque(found)
    while queue:
        i, j = queue.popleft()
        for a, b in (((i + 1) % n, j), ((i - 1) % n, j), (i, (j + 1) % n), (i, (j - 1) % n)):
            if a == b:
                continue
            key = (min(a, b), max(a, b))
            if key not in found and _d2(v, a, b) >= threshold:
                found.add(key)
                queue.append(key)
    vertex_pairs = tuple(sorted(found))
    pairs = tuple((P.vertex_point(i), P.vertex_point(j)) for i, j in vertex_pairs)
    return DiameterResult(math.sqrt(best), pairs, vertex_pairs, tau_d)


def brute_force_diameter(P: ConvexPolygon, tau_d: float | None = None) -> DiameterResult[BoundaryPoint2]:
    """O(n^2) reference over all vertex pairs."""
    if tau_d is None:
        tau_d = P.tol.diam
    v, n = P.vertices, len(P.vertices)
    best = max(_d2(v, i, j) for i in range(n) for j in range(i + 1, n))
    threshold = best * (1.0 - tau_d) ** 2
    vertex_pairs = tuple((i, j) for i in range(n) for j in range(i + 1, n) if _d2(v, i, j) >= threshold)
    pairs = tuple((P.vertex_point(i), P.vertex_point(j)) for i, j in vertex_pairs)
    return DiameterResult(math.sqrt(best), pairs, vertex_pairs, tau_d)


def vertex_angle(P: ConvexPolygon, i: int) -> float:
    return P.angles[P._check_index(i)]


def boundary_angle(P: ConvexPolygon, p: BoundaryPoint2 | int) -> float:
    p = P._resolve(p)
    return P.angles[p.vertex] if p.is_vertex else math.pi


def is_diametral(P: ConvexPolygon, p: BoundaryPoint2 | int, tau_d: float | None = None,
                 diameter: DiameterResult | None = None) -> bool:
    p = P._resolve(p)
    if not p.is_vertex:
        return False
    if diameter is None:
        diameter = polygon_diameter(P, tau_d)
    tau = P.tol.abs * P.scale
    return any(math.dist(P.vertices[k], p.point) <= tau for k in diameter.endpoint_indices)


def evaluate_criterion(P: ConvexPolygon, E: Sequence[BoundaryPoint2 | int], tau_d: float | None = None,
                       diameter: DiameterResult | None = None) -> CriterionVerdict:
    """Angle-sum criterion for 1, 2 or 3 boundary points.

    Only reports hypothesis and conclusion; whether the first implies the
    second is what callers check.
    """
    if len(E) not in PLANAR_BOUNDS:
        raise BadCardinality(f"criterion needs 1 to 3 points, got {len(E)}")
    points = [P._resolve(p) for p in E]
    if diameter is None:
        diameter = polygon_diameter(P, tau_d)
    angles = tuple(boundary_angle(P, p) for p in points)
    total = sum(angles)
    bound = PLANAR_BOUNDS[len(points)]
    members = tuple(k for k, p in enumerate(points) if is_diametral(P, p, diameter=diameter))
    return CriterionVerdict(
        angle_sum=total,
        bound=bound,
        hypothesis_holds=total <= bound + P.tol.abs,
        conclusion=Verdict.HOLDS if members else Verdict.FAILS,
        diametral_members=members,
        margin=bound - total,
        angles=angles,
    )


def two_point_diameter_check(P: ConvexPolygon, i: int, j: int, tau_d: float | None = None) -> bool:
    """Two boundary vertices with angle at most pi/3 should span a diameter."""
    for k in (i, j):
        if vertex_angle(P, k) > PLANAR_BOUNDS[1] + P.tol.abs:
            raise HypothesisNotMet(f"angle at vertex {k} exceeds pi/3")
    return polygon_diameter(P, tau_d).has_pair(i, j)


def sees_angle(u: Sequence[float], v: Sequence[float], p: Sequence[float], q: Sequence[float],
               tol: Tolerances = DEFAULT_TOL) -> float:
    """Sum of the angles under which ``p`` and ``q`` see the segment uv."""
    for w in (p, q):
        if _on_segment(w, u, v, tol.abs):
            raise DegenerateAngle(f"point {tuple(w)} lies on segment uv")
    return angle_at(p, u, v) + angle_at(q, u, v)


def _on_segment(p, a, b, tau: float) -> bool:
    length = math.dist(a, b)
    if math.dist(p, a) <= tau or math.dist(p, b) <= tau:
        return True
    if abs(cross(a, b, p)) / length > tau:
        return False
    t = ((p[0] - a[0]) * (b[0] - a[0]) + (p[1] - a[1]) * (b[1] - a[1])) / length**2
    return -tau <= t <= 1 + tau


def segments_intersect(p, q, a, b, tau: float = 0.0) -> bool:
    """Closed-segment intersection test with an absolute slack ``tau``."""
    d1, d2 = cross(a, b, p), cross(a, b, q)
    d3, d4 = cross(p, q, a), cross(p, q, b)
    if ((d1 > tau and d2 < -tau) or (d1 < -tau and d2 > tau)) and \
            ((d3 > tau and d4 < -tau) or (d3 < -tau and d4 > tau)):
        return True
    return (_on_segment(p, a, b, tau) or _on_segment(q, a, b, tau)
            or _on_segment(a, p, q, tau) or _on_segment(b, p, q, tau))


def is_separated_pair(P: ConvexPolygon, pair: tuple, p: Sequence[float], q: Sequence[float]) -> bool:
    """Whether segment pq crosses the diameter ``pair`` (vertex indices or points)."""
    u, v = (P.vertices[k] if isinstance(k, (int, np.integer)) else k for k in pair)
    tau = P.tol.abs * P.scale
    for w in (p, q):
        if _on_segment(w, u, v, tau):
            raise OnDiameter(f"point {tuple(w)} lies on the diameter")
    return segments_intersect(p, q, u, v, tau)


@dataclass(frozen=True)
class SeparatedPairReport:
    min_angle: float
    bound: float
    pairs_checked: int
    violations: tuple[tuple[tuple[int, int], Point2, Point2, float], ...]
    witness: tuple[tuple[int, int], Point2, Point2] | None

    @property
    def ok(self) -> bool:
        return not self.violations


def _chain(P: ConvexPolygon, i: int, j: int, rng: np.random.Generator, samples: int) -> np.ndarray:
    """Boundary points strictly between vertices i and j walking counterclockwise."""
    n = len(P)
    inner = [(i + k) % n for k in range(1, (j - i) % n)]
    if not inner:
        return np.empty((0, 2))
    pts = [P.vertices[k] for k in inner]
    edges = [(i + k) % n for k in range((j - i) % n)]
    if samples:
        e = rng.choice(edges, size=samples)
        t = rng.uniform(0.0, 1.0, size=samples)
        a = P.array[e]
        b = P.array[(e + 1) % n]
        pts.extend(a + t[:, None] * (b - a))
    return np.asarray(pts, dtype=float)


def _angles_to(points: np.ndarray, u, v) -> np.ndarray:
    a = np.asarray(u) - points
    b = np.asarray(v) - points
    return np.abs(np.arctan2(a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0], (a * b).sum(axis=1)))


def separated_pair_property(P: ConvexPolygon, samples: int = 50, seed: int | np.random.Generator = 0,
                            diameter: DiameterResult | None = None) -> SeparatedPairReport:
    """Check that separated pairs see each diameter under at least 5pi/6.

    For every diameter uv, boundary points on the two sides (all vertices plus
    ``samples`` random edge points per side) are paired across it. The sum of
    angles separates, so the minimum over pairs is the sum of the per-side minima.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    if diameter is None:
        diameter = polygon_diameter(P)
    threshold = SEPARATED_PAIR_BOUND - P.tol.abs
    best, witness, checked, violations = math.inf, None, 0, []
    for i, j in diameter.vertex_pairs:
        u, v = P.vertices[i], P.vertices[j]
        left = _chain(P, i, j, rng, samples)
        right = _chain(P, j, i, rng, samples)
        if not len(left) or not len(right):
            continue
        a = _angles_to(left, u, v)
        b = _angles_to(right, u, v)
        checked += len(a) * len(b)
        ka, kb = int(np.argmin(a)), int(np.argmin(b))
        low = float(a[ka] + b[kb])
        if low < best:
            best, witness = low, ((i, j), Point2(*left[ka]), Point2(*right[kb]))
        if low < threshold:
            bad = np.argwhere(a[:, None] + b[None, :] < threshold)
            for x, y in bad[:20]:
                violations.append(((i, j), Point2(*left[x]), Point2(*right[y]), float(a[x] + b[y])))
    return SeparatedPairReport(best, SEPARATED_PAIR_BOUND, checked, tuple(violations), witness)


def quad_lemma_check(Q: ConvexPolygon, start: int = 0, tau_d: float | None = None) -> bool:
    """In a convex quadrilateral with X + Y <= pi at adjacent x, y, one of them is diametral."""
    if len(Q) != 4:
        raise InvalidPolygon(f"expected a quadrilateral, got {len(Q)} vertices")
    x, y = start % 4, (start + 1) % 4
    if Q.angles[x] + Q.angles[y] > QUAD_LEMMA_BOUND + Q.tol.abs:
        raise HypothesisNotMet("X + Y exceeds pi")
    diam = polygon_diameter(Q, tau_d)
    return is_diametral(Q, x, diameter=diam) or is_diametral(Q, y, diameter=diam)


def mirror_index(P: ConvexPolygon, i: int) -> int:
    """Index of the vertex at -v_i; raises NotSymmetric if the polygon is not centrally symmetric."""
    tau = P.tol.abs * P.scale
    arr = P.array
    n = len(P)
    if n % 2:
        raise NotSymmetric("odd vertex count")
    shift = n // 2
    if not np.all(np.abs(arr + np.roll(arr, -shift, axis=0)) <= tau):
        raise NotSymmetric("polygon is not symmetric about the origin")
    return (i + shift) % n


def symmetric_diameter_check(P: ConvexPolygon, i: int, tau_d: float | None = None) -> bool:
    """For an origin-symmetric polygon with angle at most 5pi/12 at v_i, v_i(-v_i) is a diameter."""
    i = P._check_index(i)
    j = mirror_index(P, i)
    if P.angles[i] > SYMMETRIC_BOUND + P.tol.abs:
        raise HypothesisNotMet("vertex angle exceeds 5pi/12")
    return polygon_diameter(P, tau_d).has_pair(i, j)


def regular_polygon(n: int, circumradius: float = 1.0, phase: float = 0.0) -> ConvexPolygon:
    k = np.arange(n)
    ang = phase + 2 * np.pi * k / n
    return ConvexPolygon(np.column_stack([circumradius * np.cos(ang), circumradius * np.sin(ang)]))
