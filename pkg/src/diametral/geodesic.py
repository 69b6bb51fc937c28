"""Approximate geodesics on convex polyhedral surfaces.

Distances come from a Steiner-point graph (vertices plus ``m`` points per
edge, joined by straight arcs inside each face). Edge points follow the
base-2 van der Corput order 1/2, 1/4, 3/4, 1/8, ..., so the grid for ``m``
contains the grid for every smaller ``m`` (graph bounds can only improve as
``m`` grows) and is exactly uniform whenever ``m + 1`` is a power of two. The graph path
fixes a face sequence; the sequence is unfolded into the plane, the shortest
path through it is pulled taut (funnel algorithm), and wherever the taut path
wraps around a vertex the sequence is rerouted around the vertex's other side.
On a convex surface every vertex has total angle below 2pi, so each reroute
strictly shortens the path and the loop ends with a path that is straight in
its unfolding. Every reported length belongs to an actual surface path, hence
is an upper bound on the intrinsic distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .core import Disconnected, InvalidParams, NonAdjacentSequence
from .solid import ConvexPolytope, SurfacePoint

MAX_FLIPS = 64


def steiner_params(m: int) -> np.ndarray:
    """First ``m`` terms of the base-2 van der Corput sequence."""
    out = np.empty(m)
    for k in range(m):
        n, denom, x = k + 1, 1.0, 0.0
        while n:
            denom *= 2
            n, bit = divmod(n, 2)
            x += bit / denom
        out[k] = x
    return out


class _Blocked:
    """Sentinel returned when a straight segment leaves its face strip."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "BLOCKED"

    def __bool__(self) -> bool:
        return False


BLOCKED = _Blocked()


@dataclass(frozen=True)
class GeodesicPath:
    """A polyline on the surface with the faces it runs through.

    ``breakpoints`` starts at ``p`` and ends at ``q``; consecutive breakpoints
    share ``faces[i]``. ``straight`` is true when the path unfolds to one
    segment, i.e. it is locally shortest.
    """

    p: SurfacePoint
    q: SurfacePoint
    faces: tuple[int, ...]
    breakpoints: tuple[SurfacePoint, ...]
    length: float
    graph_length: float
    straight: bool
    unfolded_faces: tuple[tuple[tuple[float, float], ...], ...] = field(default=(), compare=False)
    unfolded_segment: tuple[tuple[float, float], ...] = field(default=(), compare=False)

    @property
    def polyline(self) -> np.ndarray:
        return np.array([b.point for b in self.breakpoints])

    @property
    def slack(self) -> float:
        return self.graph_length - self.length

    def point_at(self, S: ConvexPolytope, s: float) -> SurfacePoint:
        """Surface point at arc length ``s`` from ``p``."""
        pts = self.polyline
        seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
        s = min(max(s, 0.0), float(seg.sum()))
        for k, L in enumerate(seg):
            if s <= L or k == len(seg) - 1:
                t = 0.0 if L == 0 else s / L
                x = pts[k] + min(t, 1.0) * (pts[k + 1] - pts[k])
                return S.locate(x, tau=1e-9 * S.scale) if t in (0.0, 1.0) else S.point_in_face(self.faces[k], x)
            s -= L
        return self.q


class GeodesicGraph:
    """Steiner graph over a polytope surface for a given resolution ``m``."""

    def __init__(self, S: ConvexPolytope, m: int):
        if m < 0:
            raise InvalidParams("Steiner resolution must be non-negative")
        self.S, self.m = S, int(m)
        V, E = S.vertices, S.edges
        nv = len(V)
        ts = steiner_params(m)
        self.params = ts
        pos = [V]
        if m:
            a = V[[e[0] for e in E]]
            b = V[[e[1] for e in E]]
            pos.append((a[:, None, :] * (1 - ts)[None, :, None] + b[:, None, :] * ts[None, :, None]).reshape(-1, 3))
        self.positions = np.vstack(pos)
        self.n_nodes = len(self.positions)

        boundary = []
        for f in S.faces:
            ids = []
            for a, b in zip(f, f[1:] + f[:1]):
                ids.append(a)
                e = S.edge_index[(min(a, b), max(a, b))]
                steiner = nv + e * m + np.arange(m)
                ids.extend(steiner)
            boundary.append(np.asarray(ids, dtype=np.int64))
        self.face_nodes = tuple(boundary)

        rows, cols = [], []
        for ids in boundary:
            i, j = np.triu_indices(len(ids), k=1)
            rows.append(ids[i])
            cols.append(ids[j])
        r = np.concatenate(rows)
        c = np.concatenate(cols)
        lo, hi = np.minimum(r, c), np.maximum(r, c)
        key = np.unique(lo * self.n_nodes + hi)
        lo, hi = key // self.n_nodes, key % self.n_nodes
        w = np.linalg.norm(self.positions[lo] - self.positions[hi], axis=1)
        keep = w > 0
        lo, hi, w = lo[keep], hi[keep], w[keep]
        mat = csr_matrix((np.concatenate([w, w]), (np.concatenate([lo, hi]), np.concatenate([hi, lo]))),
                         shape=(self.n_nodes, self.n_nodes))
        mat.sort_indices()
        self._csr = mat

    # -- node bookkeeping -------------------------------------------------------

    def node_of(self, p: SurfacePoint) -> int | None:
        """Graph node coinciding with ``p``, if any."""
        if p.kind == "vertex":
            return p.index
        if p.kind == "edge" and self.m:
            hit = np.flatnonzero(np.abs(self.params - p.params[0]) < 1e-12)
            if len(hit):
                return len(self.S.vertices) + p.index * self.m + int(hit[0])
        return None

    def node_point(self, i: int) -> SurfacePoint:
        nv = len(self.S.vertices)
        if i < nv:
            return self.S.vertex_point(int(i))
        e, k = divmod(int(i) - nv, self.m)
        return self.S.edge_point(e, float(self.params[k]))

    def neighbours(self, p: SurfacePoint) -> tuple[np.ndarray, np.ndarray]:
        """Graph nodes visible from ``p`` inside its faces, with straight-line weights."""
        node = self.node_of(p)
        if node is not None:
            return np.array([node]), np.array([0.0])
        ids = np.unique(np.concatenate([self.face_nodes[k] for k in self.S.faces_of(p)]))
        w = np.linalg.norm(self.positions[ids] - p.xyz, axis=1)
        return ids, w

    def _with_sources(self, points: Sequence[SurfacePoint]) -> tuple[csr_matrix, list[int]]:
        """Append one outgoing-only row per non-node source point."""
        base = self._csr
        indptr, indices, data = [base.indptr], [base.indices], [base.data]
        sources, extra, end = [], 0, base.indptr[-1]
        for p in points:
            node = self.node_of(p)
            if node is not None:
                sources.append(node)
                continue
            ids, w = self.neighbours(p)
            keep = w > 0
            indices.append(ids[keep].astype(base.indices.dtype))
            data.append(w[keep])
            end += int(keep.sum())
            indptr.append(np.array([end], dtype=base.indptr.dtype))
            sources.append(self.n_nodes + extra)
            extra += 1
        n = self.n_nodes + extra
        mat = csr_matrix((np.concatenate(data), np.concatenate(indices), np.concatenate(indptr)), shape=(n, n))
        return mat, sources

    def distances(self, sources: Sequence[SurfacePoint], with_predecessors: bool = False):
        mat, ids = self._with_sources(sources)
        out = dijkstra(mat, directed=True, indices=ids, return_predecessors=with_predecessors)
        return out, ids

    def target_distance(self, dist_row: np.ndarray, p: SurfacePoint, q: SurfacePoint) -> tuple[float, int | None]:
        """Graph distance to ``q`` given distances from ``p``; also the last graph node used."""
        best, via = math.inf, None
        node = self.node_of(q)
        if node is not None:
            best, via = float(dist_row[node]), node
        else:
            ids, w = self.neighbours(q)
            tot = dist_row[ids] + w
            k = int(np.argmin(tot))
            best, via = float(tot[k]), int(ids[k])
        if set(self.S.faces_of(p)) & set(self.S.faces_of(q)):
            direct = float(np.linalg.norm(p.xyz - q.xyz))
            if direct <= best:
                best, via = direct, None
        return best, via


@lru_cache(maxsize=16)
def graph_for(S: ConvexPolytope, m: int) -> GeodesicGraph:
    """Memoised graph construction (pure in ``S`` and ``m``)."""
    return GeodesicGraph(S, m)


# -- unfolding -------------------------------------------------------------------
# Planar points are Python complex numbers; rigid motions are z -> r * z + t, |r| = 1.


class _Charts:
    """Per-face planar coordinates of face vertices, cached on the polytope."""

    def __init__(self, S: ConvexPolytope):
        normals = S.face_planes[0]
        self.frames = []
        self.coords: list[dict[int, complex]] = []
        self.crossing: dict[tuple[int, int], tuple[int, int]] = {}
        owner = {}
        for k, f in enumerate(S.faces):
            o = S.vertices[f[0]]
            e1 = S.vertices[f[1]] - o
            e1 = e1 / np.linalg.norm(e1)
            e2 = np.cross(normals[k], e1)
            self.frames.append((o, e1, e2))
            loc = (S.vertices[list(f)] - o) @ np.column_stack([e1, e2])
            self.coords.append({v: complex(x, y) for v, (x, y) in zip(f, loc)})
            for a, b in zip(f, f[1:] + f[:1]):
                owner[(a, b)] = k
        for (a, b), k in owner.items():
            self.crossing[(k, owner[(b, a)])] = (a, b)

    def local(self, k: int, x) -> complex:
        o, e1, e2 = self.frames[k]
        d = np.asarray(x, dtype=float) - o
        return complex(float(d @ e1), float(d @ e2))


def _charts(S: ConvexPolytope) -> _Charts:
    cached = S.__dict__.get("_charts")
    if cached is None:
        cached = _Charts(S)
        S.__dict__["_charts"] = cached
    return cached


def shared_edge(S: ConvexPolytope, f: int, g: int) -> tuple[int, int] | None:
    """Shared edge as it is directed in face ``f`` (a -> b), or None."""
    return _charts(S).crossing.get((f, g))


@dataclass
class _Strip:
    faces: list[int]
    transforms: list[tuple[complex, complex]]
    portals: list[tuple[complex, complex, int, int]]  # left point, right point, left id, right id

    def place(self, S: ConvexPolytope, i: int, x) -> complex:
        r, t = self.transforms[i]
        return r * _charts(S).local(self.faces[i], x) + t

    def place_vertex(self, S: ConvexPolytope, i: int, v: int) -> complex:
        r, t = self.transforms[i]
        return r * _charts(S).coords[self.faces[i]][v] + t


def unfold(S: ConvexPolytope, faces: Sequence[int]) -> _Strip:
    """Isometric development of a face sequence into the plane."""
    ch = _charts(S)
    transforms = [(1 + 0j, 0j)]
    portals = []
    r, t = transforms[0]
    for i in range(len(faces) - 1):
        f, g = faces[i], faces[i + 1]
        edge = ch.crossing.get((f, g))
        if edge is None:
            raise NonAdjacentSequence(f"faces {f} and {g} do not share an edge")
        a, b = edge
        A = r * ch.coords[f][a] + t
        B = r * ch.coords[f][b] + t
        al, bl = ch.coords[g][a], ch.coords[g][b]
        rot = (B - A) / (bl - al)
        r = rot / abs(rot)
        t = A - r * al
        transforms.append((r, t))
        # leaving f across a->b (f on its left): b is on the traveller's left
        portals.append((B, A, b, a))
    return _Strip(list(faces), transforms, portals)


def _cross(o: complex, a: complex, b: complex) -> float:
    return ((a - o).conjugate() * (b - o)).imag


def _funnel(start: complex, end: complex, portals):
    """Shortest path through a portal sequence; returns points and bend records.

    Bends are (portal index, vertex id, side) with side ``"left"`` when the
    path wraps around a left portal endpoint.
    """
    pts = [(start, start, None, None)] + list(portals) + [(end, end, None, None)]
    apex = left = right = start
    apex_i = left_i = right_i = 0
    same_left = same_right = True
    path = [start]
    bends = []
    i = 1
    while i < len(pts):
        L, R = pts[i][0], pts[i][1]
        if _cross(apex, right, R) >= 0:
            if same_right or _cross(apex, left, R) <= 0:
                right, right_i, same_right = R, i, False
            else:
                path.append(left)
                bends.append((left_i - 1, pts[left_i][2], "left"))
                apex = right = left
                apex_i = right_i = left_i
                same_left = same_right = True
                i = apex_i + 1
                continue
        if _cross(apex, left, L) <= 0:
            if same_left or _cross(apex, right, L) >= 0:
                left, left_i, same_left = L, i, False
            else:
                path.append(right)
                bends.append((right_i - 1, pts[right_i][3], "right"))
                apex = left = right
                apex_i = left_i = right_i
                same_left = same_right = True
                i = apex_i + 1
                continue
        i += 1
    path.append(end)
    return path, bends


def _trim(S: ConvexPolytope, faces: list[int], p: SurfacePoint, q: SurfacePoint) -> list[int]:
    fp, fq = set(S.faces_of(p)), set(S.faces_of(q))
    start = max(i for i, f in enumerate(faces) if f in fp)
    faces = faces[start:]
    stop = min(i for i, f in enumerate(faces) if f in fq)
    return faces[: stop + 1]


def _simplify(faces: list[int]) -> list[int]:
    out: list[int] = []
    for f in faces:
        if out and out[-1] == f:
            continue
        if len(out) >= 2 and out[-2] == f:
            out.pop()
            continue
        out.append(f)
    return out


def _fan(S: ConvexPolytope, v: int, f: int, g: int, direction: int) -> list[int]:
    """Faces around vertex v from f to g (inclusive) walking in ``direction`` (+1 ccw)."""
    ring = S.vertex_faces[v]
    i, n = ring.index(f), len(ring)
    out = [f]
    while out[-1] != g:
        i = (i + direction) % n
        out.append(ring[i])
        if len(out) > n + 1:
            raise NonAdjacentSequence("face not found around vertex")
    return out


def straighten_in_sequence(S: ConvexPolytope, faces: Sequence[int], p: SurfacePoint, q: SurfacePoint,
                           tau: float = 1e-9):
    """Length of the straight unfolded segment pq through ``faces``, or BLOCKED.

    The segment must cross every shared edge of the strip, in order, within
    the edge's closed extent.
    """
    faces = list(faces)
    if not faces or faces[0] not in S.faces_of(p) or faces[-1] not in S.faces_of(q):
        raise NonAdjacentSequence("sequence must start at a face of p and end at a face of q")
    strip = unfold(S, faces)
    P = strip.place(S, 0, p.xyz)
    Q = strip.place(S, len(faces) - 1, q.xyz)
    d = Q - P
    L = abs(d)
    tol = tau * S.scale
    last = -tol
    for left, right, _, _ in strip.portals:
        e = left - right
        den = (d.conjugate() * e).imag
        if abs(den) <= 1e-15:
            return BLOCKED
        w = right - P
        s = (w.conjugate() * e).imag / den
        r = (w.conjugate() * d).imag / den
        el = abs(e)
        if r * el < -tol or (r - 1) * el > tol or s * L < last - tol or (s - 1) * L > tol:
            return BLOCKED
        last = s * L
    return L


# -- the distance query -----------------------------------------------------------


def _features(S: ConvexPolytope, graph: GeodesicGraph, nodes: list, p, q) -> list[SurfacePoint]:
    pts = [p]
    for n in nodes:
        pts.append(graph.node_point(n))
    pts.append(q)
    out = [pts[0]]
    for x in pts[1:]:
        if x.key() != out[-1].key():
            out.append(x)
    return out


def _initial_sequence(S: ConvexPolytope, pts: list[SurfacePoint]) -> list[int]:
    seq: list[int] = []
    for a, b in zip(pts, pts[1:]):
        cand = [f for f in S.faces_of(a) if f in set(S.faces_of(b))]
        if not cand:
            raise Disconnected("graph arc does not lie in a face")
        if seq and seq[-1] in cand:
            continue
        if not seq:
            seq.append(cand[0])
            continue
        prev = seq[-1]
        adjacent = [f for f in cand if shared_edge(S, prev, f) is not None]
        f = adjacent[0] if adjacent else cand[0]
        if adjacent:
            seq.append(f)
        elif a.kind == "vertex":
            ccw = _fan(S, a.index, prev, f, +1)
            cw = _fan(S, a.index, prev, f, -1)
            seq.extend((ccw if len(ccw) <= len(cw) else cw)[1:])
        else:
            raise Disconnected("consecutive graph arcs share no edge or vertex")
    return seq


@dataclass
class _Taut:
    faces: list[int]
    strip: _Strip
    path: list[complex]
    bends: list
    length: float


def _taut(S: ConvexPolytope, faces: list[int], p: SurfacePoint, q: SurfacePoint) -> _Taut:
    strip = unfold(S, faces)
    P = strip.place(S, 0, p.xyz)
    Q = strip.place(S, len(faces) - 1, q.xyz)
    path, bends = _funnel(P, Q, strip.portals)
    length = sum(abs(b - a) for a, b in zip(path, path[1:]))
    return _Taut(faces, strip, path, bends, length)


def _flip(S: ConvexPolytope, faces: list[int], strip: _Strip, bend) -> list[int]:
    """Reroute the face sequence around the other side of a vertex."""
    k, v, side = bend
    col = 2 if side == "left" else 3
    k0 = k
    while k0 - 1 >= 0 and strip.portals[k0 - 1][col] == v:
        k0 -= 1
    k1 = k
    while k1 + 1 < len(strip.portals) and strip.portals[k1 + 1][col] == v:
        k1 += 1
    A, B = faces[k0], faces[k1 + 1]
    run = faces[k0:k1 + 2]
    ring = S.vertex_faces[v]
    if A == B:
        replacement = [A]
    else:
        step = +1 if ring[(ring.index(A) + 1) % len(ring)] == run[1] else -1
        replacement = _fan(S, v, A, B, -step)
    return faces[:k0] + replacement + faces[k1 + 2:]


def _rerouted(S, taut: _Taut, bend, p, q) -> _Taut | None:
    try:
        return _taut(S, _simplify(_trim(S, _flip(S, taut.faces, taut.strip, bend), p, q)), p, q)
    except NonAdjacentSequence:
        return None


def _tighten(S, faces, p, q) -> _Taut:
    """Reroute around bend vertices until the taut path is straight or stops shrinking."""
    cur = _taut(S, faces, p, q)
    eps = 1e-13 * S.scale
    for _ in range(MAX_FLIPS):
        if not cur.bends:
            break
        for bend in cur.bends:
            cand = _rerouted(S, cur, bend, p, q)
            if cand is not None and cand.length < cur.length - eps:
                cur = cand
                break
        else:
            break
    return cur


def _polish(S, cur: _Taut, p, q, rounds: int = 8) -> _Taut:
    """Try the other side of every vertex on the strip boundary; keep any shorter path."""
    skip = {x.index for x in (p, q) if x.kind == "vertex"}
    eps = 1e-12 * S.scale
    for _ in range(rounds):
        if len(cur.faces) < 2:
            break
        seen = set()
        improved = False
        for k, (_, _, lid, rid) in enumerate(cur.strip.portals):
            for v, side in ((lid, "left"), (rid, "right")):
                if v in skip or (v, side) in seen:
                    continue
                seen.add((v, side))
                cand = _rerouted(S, cur, (k, v, side), p, q)
                if cand is None:
                    continue
                cand = _tighten(S, cand.faces, p, q)
                if cand.length < cur.length - eps:
                    cur, improved = cand, True
                    break
            if improved:
                break
        if not improved:
            break
    return cur


def _surface_point_on_portal(S: ConvexPolytope, strip: _Strip, k: int, x: complex) -> SurfacePoint:
    left, right, lid, rid = strip.portals[k]
    e = left - right
    t = ((x - right) * e.conjugate()).real / abs(e) ** 2
    if t <= 1e-12:
        return S.vertex_point(rid)
    if t >= 1 - 1e-12:
        return S.vertex_point(lid)
    return S.edge_point((rid, lid), t)


def _breakpoints(S, strip: _Strip, path2d: list[complex], p, q) -> tuple[SurfacePoint, ...]:
    """Crossing points of an unfolded polyline with every portal."""
    out = [p]
    seg = 0
    for k, (left, right, _, _) in enumerate(strip.portals):
        x = path2d[seg]
        e = left - right
        for j in range(seg, len(path2d) - 1):
            a, b = path2d[j], path2d[j + 1]
            d = b - a
            den = (d.conjugate() * e).imag
            if abs(den) < 1e-15:
                continue
            s = ((right - a).conjugate() * e).imag / den
            if -1e-9 <= s <= 1 + 1e-9:
                seg, x = j, a + min(max(s, 0.0), 1.0) * d
                break
        out.append(_surface_point_on_portal(S, strip, k, x))
    out.append(q)
    return tuple(out)


def _xy(z: complex) -> tuple[float, float]:
    return (z.real, z.imag)


def _strip_polygons(S: ConvexPolytope, strip: _Strip):
    return tuple(tuple(_xy(strip.place_vertex(S, i, v)) for v in S.faces[f]) for i, f in enumerate(strip.faces))


def _finish(S, taut: _Taut, p, q, g_len: float) -> tuple[float, GeodesicPath]:
    straight = not taut.bends
    if straight:
        breakpoints = _breakpoints(S, taut.strip, taut.path, p, q)
    else:
        breakpoints = (p,) + tuple(S.vertex_point(v) for _, v, _ in taut.bends) + (q,)
    length = min(taut.length, g_len)
    path = GeodesicPath(p, q, tuple(taut.faces), breakpoints, length, max(g_len, length), straight,
                        _strip_polygons(S, taut.strip), tuple(_xy(z) for z in taut.path))
    return length, path


def geodesic_distance(S: ConvexPolytope, p: SurfacePoint, q: SurfacePoint, m: int = 8,
                      graph: GeodesicGraph | None = None, polish: bool = True) -> tuple[float, GeodesicPath]:
    """Upper bound on the intrinsic distance from ``p`` to ``q`` and a path realising it.

    With ``polish`` the straightened path is also rerouted around each vertex
    of its strip, keeping any shorter result; this escapes the occasional
    wrong side-of-vertex choice made by a coarse graph.
    """
    if p.key() == q.key() or np.linalg.norm(p.xyz - q.xyz) == 0:
        raise InvalidParams("endpoints must differ")
    if graph is None:
        graph = graph_for(S, m)
    common = [f for f in S.faces_of(p) if f in set(S.faces_of(q))]
    if common:
        L = float(np.linalg.norm(p.xyz - q.xyz))
        return _finish(S, _taut(S, [common[0]], p, q), p, q, L)
    (dist, pred), (src,) = graph.distances([p], with_predecessors=True)
    dist, pred = dist[0], pred[0]
    g_len, via = graph.target_distance(dist, p, q)
    if not math.isfinite(g_len):
        raise Disconnected("no graph path between the points")
    nodes = []
    node = via
    while node is not None and node >= 0 and node != src:
        nodes.append(int(node))
        node = pred[node]
    nodes.reverse()
    pts = _features(S, graph, [n for n in nodes if n < graph.n_nodes], p, q)
    faces = _simplify(_trim(S, _initial_sequence(S, pts), p, q))
    taut = _tighten(S, faces, p, q)
    if polish:
        taut = _polish(S, taut, p, q)
    return _finish(S, taut, p, q, g_len)


def geodesic_in_sequence(S: ConvexPolytope, faces: Sequence[int], p: SurfacePoint, q: SurfacePoint,
                         graph_length: float = math.inf) -> tuple[float, GeodesicPath]:
    """Taut path starting from a given face sequence, rerouted around vertices until straight."""
    return _finish(S, _tighten(S, _simplify(_trim(S, list(faces), p, q)), p, q), p, q, graph_length)
