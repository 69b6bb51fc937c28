"""Convex polytopes in R^3: complete angles, extrinsic diameters and the 3D criteria.

Faces are vertex-index cycles ordered counterclockwise when seen from outside.
Besides the criteria themselves the module carries two proof devices used as
test oracles: planar cross-sections through a vertex and the double unfolding
of a tetrahedron.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.spatial import ConvexHull

from .core import (
    DEFAULT_TOL,
    BadCardinality,
    CriterionVerdict,
    DegenerateInput,
    DegeneratePoints,
    DiameterResult,
    EmptySection,
    HypothesisNotMet,
    IndexOutOfRange,
    InvalidPolytope,
    NotOnBoundary,
    NotSymmetric,
    Tolerances,
    Verdict,
)
from .planar import ConvexPolygon, angle_at, convex_hull

SOLID_BOUNDS = {1: 2 * math.pi / 3, 2: 3 * math.pi / 2, 3: 9 * math.pi / 4}
SYMMETRIC_BOUND_3D = 5 * math.pi / 6
#: Conjectured replacement for the two-point bound.
CONJECTURED_PAIR_BOUND = 5 * math.pi / 3


def _corner_angle(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    u, w = a - p, b - p
    return math.atan2(float(np.linalg.norm(np.cross(u, w))), float(np.dot(u, w)))


@dataclass(frozen=True)
class SurfacePoint:
    """A point on a polytope boundary, tied to the feature that carries it.

    ``kind`` is ``"vertex"``, ``"edge"`` or ``"face"``. For edges ``index``
    refers to ``ConvexPolytope.edges`` and ``params`` is ``(t,)`` measured from
    the lower vertex index; for faces ``params`` are weights over the face cycle.
    """

    kind: str
    index: int
    params: tuple[float, ...]
    point: tuple[float, float, float]

    @property
    def xyz(self) -> np.ndarray:
        return np.asarray(self.point, dtype=float)

    def key(self) -> tuple:
        return (self.kind, self.index, tuple(round(c, 12) for c in self.params))


@dataclass(frozen=True, eq=False)
class ConvexPolytope:
    """Vertex/face incidence of a convex polyhedron, validated on construction."""

    vertices: np.ndarray
    faces: tuple[tuple[int, ...], ...]
    tol: Tolerances = field(default=DEFAULT_TOL)

    def __init__(self, vertices, faces: Iterable[Sequence[int]], tol: Tolerances = DEFAULT_TOL,
                 validate: bool = True):
        verts = np.array(vertices, dtype=float)
        if verts.ndim != 2 or verts.shape[1] != 3:
            raise InvalidPolytope("vertices must be an (n, 3) array")
        verts.setflags(write=False)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "faces", tuple(tuple(int(i) for i in f) for f in faces))
        object.__setattr__(self, "tol", tol)
        if validate:
            self._validate()

    # -- construction -----------------------------------------------------

    @classmethod
    def from_points(cls, points, tol: Tolerances = DEFAULT_TOL) -> "ConvexPolytope":
        return hull3d(points, tol)

    def _validate(self) -> None:
        V, F = self.vertices, self.faces
        tau = self.tol.abs * self.scale
        if not np.all(np.isfinite(V)):
            raise InvalidPolytope("non-finite coordinate")
        if len(V) < 4 or len(F) < 4:
            raise InvalidPolytope("a polytope needs at least 4 vertices and 4 faces")
        used = set()
        for k, f in enumerate(F):
            if len(f) < 3 or len(set(f)) != len(f):
                raise InvalidPolytope(f"face {k} is not a simple cycle")
            if min(f) < 0 or max(f) >= len(V):
                raise InvalidPolytope(f"face {k} references a missing vertex")
            used.update(f)
        if len(used) != len(V):
            raise InvalidPolytope("some vertices belong to no face")
        directed: dict[tuple[int, int], int] = {}
        for k, f in enumerate(F):
            for a, b in zip(f, f[1:] + f[:1]):
                if (a, b) in directed:
                    raise InvalidPolytope(f"directed edge {a}->{b} used twice (faces {directed[(a, b)]}, {k})")
                directed[(a, b)] = k
        for a, b in directed:
            if (b, a) not in directed:
                raise InvalidPolytope(f"edge {a}-{b} is not shared by two oppositely oriented faces")
        normals, offsets = self.face_planes
        for k, f in enumerate(F):
            if np.linalg.norm(normals[k]) < 0.5:
                raise InvalidPolytope(f"face {k} is degenerate")
            off = V[list(f)] @ normals[k] - offsets[k]
            if np.max(np.abs(off)) > tau * 10:
                raise InvalidPolytope(f"face {k} is not planar")
        heights = V @ normals.T - offsets
        if np.max(heights) > tau * 10:
            k = int(np.argmax(np.max(heights, axis=0)))
            raise InvalidPolytope(f"not convex: a vertex lies outside face {k}")
        n_edges = len(directed) // 2
        if len(V) - n_edges + len(F) != 2:
            raise InvalidPolytope("Euler characteristic is not 2")
        total = sum(self.curvatures)
        if abs(total - 4 * math.pi) > max(len(V) * self.tol.abs, 1e-9):
            raise InvalidPolytope(f"total curvature {total} differs from 4pi")
        if min(self.curvatures) < -len(V) * self.tol.abs:
            raise InvalidPolytope("negative curvature at a vertex")

    # -- derived structure --------------------------------------------------

    @property
    def scale(self) -> float:
        return max(1.0, float(np.max(np.abs(self.vertices))))

    @cached_property
    def face_planes(self) -> tuple[np.ndarray, np.ndarray]:
        """Unit outward normals (Newell) and plane offsets."""
        V = self.vertices
        normals = np.zeros((len(self.faces), 3))
        offsets = np.zeros(len(self.faces))
        for k, f in enumerate(self.faces):
            P = V[list(f)]
            Q = np.roll(P, -1, axis=0)
            n = np.array([
                np.sum((P[:, 1] - Q[:, 1]) * (P[:, 2] + Q[:, 2])),
                np.sum((P[:, 2] - Q[:, 2]) * (P[:, 0] + Q[:, 0])),
                np.sum((P[:, 0] - Q[:, 0]) * (P[:, 1] + Q[:, 1])),
            ])
            norm = np.linalg.norm(n)
            if norm > 0:
                n = n / norm
            normals[k] = n
            offsets[k] = float(np.mean(P @ n))
        return normals, offsets

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        es = {(min(a, b), max(a, b)) for f in self.faces for a, b in zip(f, f[1:] + f[:1])}
        return tuple(sorted(es))

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return {e: k for k, e in enumerate(self.edges)}

    @cached_property
    def edge_faces(self) -> tuple[tuple[int, int], ...]:
        """For edge (a, b) with a < b: (face containing a->b, face containing b->a)."""
        owner = {}
        for k, f in enumerate(self.faces):
            for a, b in zip(f, f[1:] + f[:1]):
                owner[(a, b)] = k
        return tuple((owner[(a, b)], owner[(b, a)]) for a, b in self.edges)

    @cached_property
    def vertex_faces(self) -> tuple[tuple[int, ...], ...]:
        """Faces around each vertex in counterclockwise order seen from outside."""
        nxt: dict[tuple[int, int], int] = {}
        prev_of: dict[tuple[int, int], int] = {}
        for k, f in enumerate(self.faces):
            m = len(f)
            for j, v in enumerate(f):
                prev_of[(k, v)] = f[j - 1]
        owner = {}
        for k, f in enumerate(self.faces):
            for a, b in zip(f, f[1:] + f[:1]):
                owner[(a, b)] = k
        stars = []
        for v in range(len(self.vertices)):
            start = next(k for k, f in enumerate(self.faces) if v in f)
            ring, k = [start], start
            while True:
                u = prev_of[(k, v)]
                k = owner[(v, u)]
                if k == start:
                    break
                ring.append(k)
            stars.append(tuple(ring))
        return tuple(stars)

    @cached_property
    def corner_angles(self) -> dict[tuple[int, int], float]:
        """Interior angle of face ``k`` at vertex ``v``, keyed by (k, v)."""
        V = self.vertices
        out = {}
        for k, f in enumerate(self.faces):
            m = len(f)
            for j, v in enumerate(f):
                out[(k, v)] = _corner_angle(V[v], V[f[j - 1]], V[f[(j + 1) % m]])
        return out

    @cached_property
    def complete_angles(self) -> tuple[float, ...]:
        ca = self.corner_angles
        return tuple(sum(ca[(k, v)] for k in star) for v, star in enumerate(self.vertex_faces))

    @cached_property
    def curvatures(self) -> tuple[float, ...]:
        return tuple(2 * math.pi - t for t in self.complete_angles)

    # -- surface points -------------------------------------------------------

    def _check_vertex(self, i: int) -> int:
        if not isinstance(i, (int, np.integer)) or not 0 <= i < len(self.vertices):
            raise IndexOutOfRange(f"vertex index {i} out of range")
        return int(i)

    def vertex_point(self, i: int) -> SurfacePoint:
        i = self._check_vertex(i)
        return SurfacePoint("vertex", i, (), tuple(float(c) for c in self.vertices[i]))

    def edge_point(self, e: int | tuple[int, int], t: float) -> SurfacePoint:
        if isinstance(e, tuple):
            a, b = e
            if a > b:
                a, b, t = b, a, 1.0 - t
            e = self.edge_index[(a, b)]
        if not 0 <= e < len(self.edges):
            raise IndexOutOfRange(f"edge index {e} out of range")
        if not 0.0 < t < 1.0:
            raise NotOnBoundary(f"edge parameter {t} not in (0, 1)")
        a, b = self.edges[e]
        p = (1 - t) * self.vertices[a] + t * self.vertices[b]
        return SurfacePoint("edge", int(e), (float(t),), tuple(float(c) for c in p))

    def face_point(self, k: int, weights: Sequence[float]) -> SurfacePoint:
        if not 0 <= k < len(self.faces):
            raise IndexOutOfRange(f"face index {k} out of range")
        w = np.asarray(weights, dtype=float)
        f = self.faces[k]
        if w.shape != (len(f),) or np.any(w < -self.tol.abs) or abs(w.sum() - 1) > 1e-9:
            raise NotOnBoundary("face weights must be non-negative, one per face vertex, summing to 1")
        p = w @ self.vertices[list(f)]
        return SurfacePoint("face", int(k), tuple(float(c) for c in w), tuple(float(c) for c in p))

    def face_centroid(self, k: int) -> SurfacePoint:
        m = len(self.faces[k])
        return self.face_point(k, [1.0 / m] * m)

    def point_in_face(self, k: int, xyz) -> SurfacePoint:
        """Express a point lying in face ``k`` through fan barycentric weights."""
        f = self.faces[k]
        V = self.vertices
        x = np.asarray(xyz, dtype=float)
        n = self.face_planes[0][k]
        best, best_w = -math.inf, None
        for j in range(1, len(f) - 1):
            a, b, c = V[f[0]], V[f[j]], V[f[j + 1]]
            area = float(np.dot(np.cross(b - a, c - a), n))
            wb = float(np.dot(np.cross(x - a, c - a), n)) / area
            wc = float(np.dot(np.cross(b - a, x - a), n)) / area
            wa = 1.0 - wb - wc
            worst = min(wa, wb, wc)
            if worst > best:
                best = worst
                best_w = (j, wa, wb, wc)
        j, wa, wb, wc = best_w
        w = np.zeros(len(f))
        w[0], w[j], w[j + 1] = wa, wb, wc
        w = np.clip(w, 0.0, None)
        w /= w.sum()
        p = w @ V[list(f)]
        if np.linalg.norm(p - x) > 1e-7 * self.scale:
            raise NotOnBoundary(f"point is not in face {k}")
        return SurfacePoint("face", int(k), tuple(float(c) for c in w), tuple(float(c) for c in p))

    def locate(self, xyz, tau: float | None = None) -> SurfacePoint:
        """Classify a boundary point as vertex, edge-interior or face-interior."""
        x = np.asarray(xyz, dtype=float)
        tau = self.tol.abs * self.scale * 10 if tau is None else tau
        V = self.vertices
        d = np.linalg.norm(V - x, axis=1)
        i = int(np.argmin(d))
        if d[i] <= tau:
            return self.vertex_point(i)
        for e, (a, b) in enumerate(self.edges):
            ab = V[b] - V[a]
            t = float(np.dot(x - V[a], ab) / np.dot(ab, ab))
            if 0 < t < 1 and np.linalg.norm(V[a] + t * ab - x) <= tau:
                return self.edge_point(e, t)
        normals, offsets = self.face_planes
        h = normals @ x - offsets
        if np.max(h) > tau:
            raise NotOnBoundary("point lies outside the polytope")
        for k in np.argsort(np.abs(h)):
            if abs(h[k]) > tau:
                break
            try:
                return self.point_in_face(int(k), x)
            except NotOnBoundary:
                continue
        raise NotOnBoundary("point is not on the boundary")

    def faces_of(self, p: SurfacePoint) -> tuple[int, ...]:
        """Faces whose closure contains ``p``."""
        if p.kind == "vertex":
            return self.vertex_faces[p.index]
        if p.kind == "edge":
            return self.edge_faces[p.index]
        return (p.index,)

    def transformed(self, rotation, offset=(0.0, 0.0, 0.0)) -> "ConvexPolytope":
        R = np.asarray(rotation, dtype=float)
        V = self.vertices @ R.T + np.asarray(offset, dtype=float)
        faces = self.faces if np.linalg.det(R) > 0 else tuple(f[::-1] for f in self.faces)
        return ConvexPolytope(V, faces, self.tol)

    def to_off(self) -> str:
        lines = ["OFF", f"{len(self.vertices)} {len(self.faces)} {len(self.edges)}"]
        lines += [" ".join(repr(float(c)) for c in v) for v in self.vertices]
        lines += [" ".join(str(i) for i in (len(f),) + f) for f in self.faces]
        return "\n".join(lines) + "\n"


def hull3d(points, tol: Tolerances = DEFAULT_TOL) -> ConvexPolytope:
    """Convex hull with coplanar triangles merged into polygonal faces."""
    pts = np.asarray(points, dtype=float)
    if len(pts) < 4:
        raise DegenerateInput("need at least 4 points")
    try:
        hull = ConvexHull(pts)
    except Exception as exc:  # qhull raises its own error type for flat input
        raise DegenerateInput(f"points do not span 3D: {exc}") from None
    simplices = hull.simplices
    eq = hull.equations
    scale = max(1.0, float(np.max(np.abs(pts))))
    parent = list(range(len(simplices)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, nbrs in enumerate(hull.neighbors):
        for j in nbrs:
            if j > i and np.allclose(eq[i, :3], eq[j, :3], atol=1e-10) and \
                    abs(eq[i, 3] - eq[j, 3]) <= 1e-10 * scale:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(len(simplices)):
        groups.setdefault(find(i), []).append(i)

    faces = []
    for members in groups.values():
        directed = set()
        for s in members:
            a, b, c = (int(x) for x in simplices[s])
            if np.dot(np.cross(pts[b] - pts[a], pts[c] - pts[a]), eq[s, :3]) < 0:
                b, c = c, b
            directed.update([(a, b), (b, c), (c, a)])
        boundary = {(a, b) for a, b in directed if (b, a) not in directed}
        nxt = dict(boundary)
        start = min(nxt)
        cycle = [start]
        while nxt[cycle[-1]] != start:
            cycle.append(nxt[cycle[-1]])
        faces.append(cycle)

    used = sorted({v for f in faces for v in f})
    remap = {v: k for k, v in enumerate(used)}
    faces = [[remap[v] for v in f] for f in faces]
    verts = pts[used]
    faces = _drop_flat_corners(verts, faces, tol)
    used = sorted({v for f in faces for v in f})
    remap = {v: k for k, v in enumerate(used)}
    faces = [tuple(remap[v] for v in f) for f in faces]
    # canonical order makes results independent of qhull's facet numbering
    faces = [f[f.index(min(f)):] + f[:f.index(min(f))] for f in faces]
    faces.sort()
    return ConvexPolytope(verts[used], faces, tol)


def _drop_flat_corners(V, faces, tol: Tolerances):
    """Remove vertices whose incident face angles already add up to 2pi."""
    theta = np.zeros(len(V))
    for f in faces:
        m = len(f)
        for j, v in enumerate(f):
            theta[v] += _corner_angle(V[v], V[f[j - 1]], V[f[(j + 1) % m]])
    flat = {v for v in range(len(V)) if 2 * math.pi - theta[v] <= 1e3 * tol.abs}
    if not flat:
        return faces
    return [[v for v in f if v not in flat] for f in faces]


def complete_angle(T: ConvexPolytope, p: SurfacePoint | int) -> float:
    """Total angle of the tangent cone: face-angle sum at a vertex, 2pi elsewhere."""
    if isinstance(p, (int, np.integer)):
        return T.complete_angles[T._check_vertex(int(p))]
    if p.kind == "vertex":
        return T.complete_angles[T._check_vertex(p.index)]
    if p.kind not in ("edge", "face"):
        raise NotOnBoundary(f"unknown surface point kind {p.kind!r}")
    _check_on_surface(T, p)
    return 2 * math.pi


def _check_on_surface(T: ConvexPolytope, p: SurfacePoint) -> None:
    if p.kind == "edge":
        q = T.edge_point(p.index, p.params[0])
    else:
        q = T.face_point(p.index, p.params)
    if np.linalg.norm(q.xyz - p.xyz) > 10 * T.tol.abs * T.scale:
        raise NotOnBoundary("surface point does not lie on its stated feature")


def curvature(T: ConvexPolytope, p: SurfacePoint | int) -> float:
    return 2 * math.pi - complete_angle(T, p)


def _pairwise_d2(V: np.ndarray) -> np.ndarray:
    diff = V[:, None, :] - V[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def extrinsic_diameter(T: ConvexPolytope, tau_d: float | None = None) -> DiameterResult[SurfacePoint]:
    """Maximum over vertex pairs, with all pairs within relative ``tau_d``.

    Endpoints of a diameter of a convex body are extreme points, and the
    extreme points of a polytope are its vertices, so vertex pairs suffice.
    """
    if tau_d is None:
        tau_d = T.tol.diam
    d2 = _pairwise_d2(T.vertices)
    best = float(d2.max())
    ii, jj = np.nonzero(np.triu(d2 >= best * (1 - tau_d) ** 2, k=1))
    vertex_pairs = tuple(sorted(zip(ii.tolist(), jj.tolist())))
    pairs = tuple((T.vertex_point(i), T.vertex_point(j)) for i, j in vertex_pairs)
    return DiameterResult(math.sqrt(best), pairs, vertex_pairs, tau_d)


def is_extrinsic_diametral(T: ConvexPolytope, p: SurfacePoint | int, diameter: DiameterResult | None = None) -> bool:
    if isinstance(p, (int, np.integer)):
        p = T.vertex_point(int(p))
    if p.kind != "vertex":
        return False
    if diameter is None:
        diameter = extrinsic_diameter(T)
    tau = T.tol.abs * T.scale
    V = T.vertices
    return any(np.linalg.norm(V[k] - p.xyz) <= tau for k in diameter.endpoint_indices)


def evaluate_criterion_3d(T: ConvexPolytope, E: Sequence[SurfacePoint | int], tau_d: float | None = None,
                          diameter: DiameterResult | None = None) -> CriterionVerdict:
    if len(E) not in SOLID_BOUNDS:
        raise BadCardinality(f"criterion needs 1 to 3 points, got {len(E)}")
    points = [T.vertex_point(int(p)) if isinstance(p, (int, np.integer)) else p for p in E]
    if diameter is None:
        diameter = extrinsic_diameter(T, tau_d)
    angles = tuple(complete_angle(T, p) for p in points)
    total = sum(angles)
    bound = SOLID_BOUNDS[len(points)]
    members = tuple(k for k, p in enumerate(points) if is_extrinsic_diametral(T, p, diameter))
    return CriterionVerdict(
        angle_sum=total,
        bound=bound,
        hypothesis_holds=total <= bound + T.tol.abs,
        conclusion=Verdict.HOLDS if members else Verdict.FAILS,
        diametral_members=members,
        margin=bound - total,
        angles=angles,
    )


def two_point_diameter_check_3d(T: ConvexPolytope, p: SurfacePoint | int, q: SurfacePoint | int,
                                tau_d: float | None = None) -> bool:
    pts = [T.vertex_point(int(x)) if isinstance(x, (int, np.integer)) else x for x in (p, q)]
    for x in pts:
        if complete_angle(T, x) > SOLID_BOUNDS[1] + T.tol.abs:
            raise HypothesisNotMet("complete angle exceeds 2pi/3")
    # both points have angle < 2pi, so they are vertices
    return extrinsic_diameter(T, tau_d).has_pair(pts[0].index, pts[1].index)


def plane_frame(a, b, c) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Origin, in-plane orthonormal axes and unit normal of the plane through a, b, c."""
    a, b, c = (np.asarray(x, dtype=float) for x in (a, b, c))
    n = np.cross(b - a, c - a)
    norm = np.linalg.norm(n)
    if norm <= 1e-14 * max(1.0, np.linalg.norm(b - a) * np.linalg.norm(c - a)):
        raise DegeneratePoints("plane points are collinear")
    n /= norm
    e1 = (b - a) / np.linalg.norm(b - a)
    e2 = np.cross(n, e1)
    return a, e1, e2, n


def cross_section(T: ConvexPolytope, a, b, c) -> ConvexPolygon:
    """The polygon T ∩ plane(a, b, c) in plane coordinates.

    Coordinates are taken in the frame of :func:`plane_frame`: ``a`` maps to
    the origin and ``b`` onto the positive first axis.
    """
    origin, e1, e2, n = plane_frame(a, b, c)
    V = T.vertices
    tau = T.tol.abs * T.scale
    s = (V - origin) @ n
    if s.max() <= tau or s.min() >= -tau:
        raise EmptySection("plane does not meet the interior")
    pts = [V[i] for i in np.nonzero(np.abs(s) <= tau)[0]]
    for i, j in T.edges:
        if (s[i] > tau and s[j] < -tau) or (s[i] < -tau and s[j] > tau):
            pts.append(V[i] + s[i] / (s[i] - s[j]) * (V[j] - V[i]))
    P = np.asarray(pts) - origin
    return convex_hull(np.column_stack([P @ e1, P @ e2]), T.tol)


def section_angle_at_vertex(T: ConvexPolytope, vertex: int, b, c) -> float:
    """Angle at ``vertex`` of the cross-section by the plane through vertex, b and c."""
    section = cross_section(T, T.vertices[vertex], b, c)
    for k, v in enumerate(section.vertices):
        if math.hypot(*v) <= 1e-9 * T.scale:
            return section.angles[k]
    return math.pi


@dataclass(frozen=True)
class UnfoldedQuad:
    """Planar images of x, u, y, v from unfolding two triangles across a hinge edge."""

    x: tuple[float, float]
    u: tuple[float, float]
    y: tuple[float, float]
    v: tuple[float, float]
    edge: str

    @property
    def angles(self) -> dict[str, float]:
        """Angle sums at each image point over the two unfolded triangles."""
        x, u, y, v = self.x, self.u, self.y, self.v
        if self.edge == "uv":
            return {
                "x": angle_at(x, u, v),
                "y": angle_at(y, u, v),
                "u": angle_at(u, x, v) + angle_at(u, y, v),
                "v": angle_at(v, x, u) + angle_at(v, y, u),
            }
        return {
            "x": angle_at(x, u, y) + angle_at(x, v, y),
            "y": angle_at(y, u, x) + angle_at(y, v, x),
            "u": angle_at(u, x, y),
            "v": angle_at(v, x, y),
        }


def _hinge(p, q, r, s) -> tuple[tuple[float, float], ...]:
    """Place p at the origin, q on the positive axis, r above and s below the axis."""
    p, q, r, s = (np.asarray(z, dtype=float) for z in (p, q, r, s))
    axis = q - p
    L = float(np.linalg.norm(axis))
    e = axis / L

    def place(z, sign):
        w = z - p
        along = float(np.dot(w, e))
        off = float(np.linalg.norm(np.cross(e, w)))
        return (along, sign * off)

    return (0.0, 0.0), (L, 0.0), place(r, 1.0), place(s, -1.0)


def unfold_tetrahedron(x, u, y, v, tol: Tolerances = DEFAULT_TOL) -> tuple[UnfoldedQuad, UnfoldedQuad]:
    """Unfold xuv ∪ yuv across uv, and uxy ∪ vxy across xy.

    Each triangle is placed isometrically; the two apexes land on opposite
    sides of the hinge. Coplanar inputs are accepted (flat tetrahedron).
    """
    pts = [np.asarray(z, dtype=float) for z in (x, u, y, v)]
    scale = max(1.0, max(float(np.max(np.abs(z))) for z in pts))
    for i, j, k in ((0, 1, 3), (2, 1, 3), (1, 0, 2), (3, 0, 2)):
        area2 = np.linalg.norm(np.cross(pts[j] - pts[i], pts[k] - pts[i]))
        if area2 <= tol.abs * scale * scale:
            raise DegeneratePoints("three of the four points are collinear")
    X, U, Y, Vv = pts
    u1, v1, x1, y1 = _hinge(U, Vv, X, Y)
    Q = UnfoldedQuad(x=x1, u=u1, y=y1, v=v1, edge="uv")
    x2, y2, u2, v2 = _hinge(X, Y, U, Vv)
    Q2 = UnfoldedQuad(x=x2, u=u2, y=y2, v=v2, edge="xy")
    return Q, Q2


def mirror_vertex(T: ConvexPolytope, i: int) -> int:
    """Index of the vertex at -v_i; NotSymmetric unless the whole vertex set is origin-symmetric."""
    V = T.vertices
    tau = T.tol.abs * T.scale * 10
    d = np.linalg.norm(V[:, None, :] + V[None, :, :], axis=2)
    match = d.argmin(axis=1)
    if np.any(d[np.arange(len(V)), match] > tau):
        raise NotSymmetric("polytope is not symmetric about the origin")
    return int(match[i])


def symmetric_diameter_check_3d(T: ConvexPolytope, p: SurfacePoint | int, tau_d: float | None = None) -> bool:
    """For an origin-symmetric body with complete angle at most 5pi/6 at p, p(-p) is a diameter."""
    i = p if isinstance(p, (int, np.integer)) else p.index
    if not isinstance(p, (int, np.integer)) and p.kind != "vertex":
        raise HypothesisNotMet("non-vertex points have complete angle 2pi")
    j = mirror_vertex(T, int(i))
    if T.complete_angles[int(i)] > SYMMETRIC_BOUND_3D + T.tol.abs:
        raise HypothesisNotMet("complete angle exceeds 5pi/6")
    return extrinsic_diameter(T, tau_d).has_pair(int(i), j)


def cube(side: float = 1.0, center: bool = False) -> ConvexPolytope:
    c = np.array([[x, y, z] for z in (0, 1) for y in (0, 1) for x in (0, 1)], dtype=float) * side
    if center:
        c -= side / 2
    return hull3d(c)


def regular_tetrahedron(edge: float = 1.0) -> ConvexPolytope:
    pts = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float)
    return hull3d(pts * edge / (2 * math.sqrt(2)))
