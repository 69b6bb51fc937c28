"""Seeded body generators and the explicit sharpness constructions."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from ..core import DEFAULT_TOL, DegenerateInput, InvalidParams, InvalidPolygon, InvalidPolytope, Tolerances
from ..planar import ConvexPolygon, angle_at, convex_hull
from ..solid import ConvexPolytope, hull3d

MASTER_SEED_MAX = 2**64 - 1


def trial_rng(master: int, index: int) -> np.random.Generator:
    """Generator for trial ``index`` under ``master``; independent of scheduling order."""
    if not 0 <= master <= MASTER_SEED_MAX:
        raise InvalidParams("seed must be an unsigned 64-bit integer")
    return np.random.default_rng(np.random.SeedSequence(entropy=int(master), spawn_key=(int(index),)))


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


# -- planar families -----------------------------------------------------------------


def random_convex_polygon(n: int, seed=None, max_aspect: float = 20.0,
                          tol: Tolerances = DEFAULT_TOL) -> ConvexPolygon:
    """Hull of ``n`` points at uniform angles on a random ellipse.

    Aspect ratios up to ``max_aspect`` give the sharp vertices the criteria
    need. Vertices closer than the tolerance to collinear are pruned, so the
    result may have fewer than ``n`` vertices.
    """
    if n < 3:
        raise InvalidParams("a polygon needs at least 3 vertices")
    rng = _rng(seed)
    for _ in range(100):
        a = 1.0
        b = math.exp(rng.uniform(0.0, math.log(max_aspect)))
        t = np.sort(rng.uniform(0, 2 * math.pi, n))
        phi = rng.uniform(0, math.pi)
        pts = np.column_stack([a * np.cos(t), b * np.sin(t)])
        c, s = math.cos(phi), math.sin(phi)
        pts = pts @ np.array([[c, s], [-s, c]])
        pts /= np.abs(pts).max()
        try:
            return convex_hull(pts, tol)
        except (DegenerateInput, InvalidPolygon):
            continue
    raise InvalidParams("could not draw a non-degenerate polygon")


def random_symmetric_polygon(n_half: int, seed=None, max_aspect: float = 20.0) -> ConvexPolygon:
    """Origin-symmetric polygon: hull of random ellipse points and their negatives."""
    if n_half < 2:
        raise InvalidParams("need at least 2 points per half")
    rng = _rng(seed)
    b = math.exp(rng.uniform(0.0, math.log(max_aspect)))
    t = rng.uniform(0, math.pi, n_half)
    pts = np.column_stack([np.cos(t), b * np.sin(t)])
    phi = rng.uniform(0, math.pi)
    c, s = math.cos(phi), math.sin(phi)
    pts = pts @ np.array([[c, s], [-s, c]])
    pts = np.vstack([pts, -pts])
    return convex_hull(pts / np.abs(pts).max())


def random_quadrilateral(seed=None) -> ConvexPolygon:
    rng = _rng(seed)
    while True:
        P = random_convex_polygon(4, rng, max_aspect=5.0)
        if len(P.vertices) == 4:
            return P


# -- polytope families ----------------------------------------------------------------


def random_polytope(n: int, seed=None, interior: float = 0.2) -> ConvexPolytope:
    """Hull of ``n`` points near a random ellipsoid (a share of them pulled inward)."""
    if n < 4:
        raise InvalidParams("a polytope needs at least 4 points")
    rng = _rng(seed)
    for _ in range(100):
        X = rng.normal(size=(n, 3))
        X /= np.linalg.norm(X, axis=1)[:, None]
        X *= np.where(rng.random(n) < interior, rng.uniform(0.3, 1.0, n), 1.0)[:, None]
        X *= np.exp(rng.uniform(-1.0, 1.0, 3))
        try:
            return hull3d(X)
        except (InvalidPolytope, DegenerateInput):
            continue
    raise InvalidParams("could not draw a non-degenerate polytope")


def pyramid_apex_angle(base_n: int, h: float, r: float = 1.0) -> float:
    """Complete angle at the apex of a right pyramid over a regular ``base_n``-gon.

    Each lateral face is isosceles with half-base ``r sin(pi/n)`` and slant
    height ``sqrt(h^2 + r^2 cos^2(pi/n))``, so the apex angle is
    ``n * 2 atan(r sin(pi/n) / slant)``.
    """
    half = r * math.sin(math.pi / base_n)
    slant = math.hypot(h, r * math.cos(math.pi / base_n))
    return base_n * 2 * math.atan2(half, slant)


def _ring(n: int, r: float, z: float, phase: float = 0.0) -> np.ndarray:
    t = phase + 2 * math.pi * np.arange(n) / n
    return np.column_stack([r * np.cos(t), r * np.sin(t), np.full(n, z)])


def spike_pyramid(base_n: int, h: float, r: float = 1.0) -> ConvexPolytope:
    """Right pyramid; the apex is the last vertex and has angle ``pyramid_apex_angle``."""
    if base_n < 3 or h <= 0 or r <= 0:
        raise InvalidParams("spike pyramid needs base_n >= 3 and positive h, r")
    V = np.vstack([_ring(base_n, r, 0.0), [[0.0, 0.0, h]]])
    return _build(V)


def bipyramid(base_n: int, h_top: float, h_bottom: float | None = None, r: float = 1.0,
              jitter: float = 0.0, seed=None) -> ConvexPolytope:
    """Bipyramid over a (possibly jittered) regular polygon; apexes are the last two vertices."""
    if base_n < 3 or h_top <= 0 or r <= 0:
        raise InvalidParams("bipyramid needs base_n >= 3 and positive heights")
    h_bottom = h_top if h_bottom is None else h_bottom
    if h_bottom <= 0:
        raise InvalidParams("bipyramid needs positive heights")
    rng = _rng(seed)
    t = 2 * math.pi * np.arange(base_n) / base_n
    if jitter:
        t = t + rng.uniform(-jitter, jitter, base_n) * math.pi / base_n
    ring = np.column_stack([r * np.cos(t), r * np.sin(t), np.zeros(base_n)])
    V = np.vstack([ring, [[0.0, 0.0, h_top], [0.0, 0.0, -h_bottom]]])
    return _build(V)


def polygon_bipyramid(P: ConvexPolygon, h: float, apex=None) -> ConvexPolytope:
    """Thin double pyramid over a planar polygon; polygon vertex ``i`` keeps index ``i``.

    As ``h -> 0`` the complete angle at each polygon vertex tends to twice its
    planar angle from above.
    """
    if h <= 0:
        raise InvalidParams("height must be positive")
    A = P.array
    c = A.mean(axis=0) if apex is None else np.asarray(apex, dtype=float)
    V = np.vstack([np.column_stack([A, np.zeros(len(A))]), [[c[0], c[1], h], [c[0], c[1], -h]]])
    return _build(V)


def symmetric_lens(n: int = 8, height: float = 3.0, rings: int = 2, r: float = 1.0) -> ConvexPolytope:
    """Origin-symmetric lens: two apexes at +-height and rings on the ellipse (r sin t, height cos t).

    ``n`` must be even so every ring maps onto itself under x -> -x. The top
    apex is vertex 0 and the bottom apex vertex 1; the apex angle equals
    ``pyramid_apex_angle(n, height * (1 - cos t1), r * sin t1)`` with
    ``t1 = pi / (2 rings)``.
    """
    if n < 4 or n % 2 or height <= 0 or rings < 1:
        raise InvalidParams("lens needs even n >= 4, positive height and at least one ring")
    pts = [[0.0, 0.0, height], [0.0, 0.0, -height]]
    for j in range(1, rings + 1):
        t = math.pi / 2 * j / rings
        rr, z = r * math.sin(t), height * math.cos(t)
        pts.extend(_ring(n, rr, z))
        if j < rings:
            pts.extend(_ring(n, rr, -z))
    return _build(np.array(pts))


def lens_apex_angle(n: int, height: float, rings: int = 2, r: float = 1.0) -> float:
    t1 = math.pi / 2 / rings
    return pyramid_apex_angle(n, height * (1 - math.cos(t1)), r * math.sin(t1))


def random_symmetric_polytope(n_half: int, seed=None) -> ConvexPolytope:
    rng = _rng(seed)
    X = rng.normal(size=(n_half, 3))
    X /= np.linalg.norm(X, axis=1)[:, None]
    X *= np.exp(rng.uniform(-1.0, 1.0, 3))
    return _build(np.vstack([X, -X]))


def _build(V: np.ndarray) -> ConvexPolytope:
    """Hull that keeps the caller's vertex numbering (every input must be extreme)."""
    T = hull3d(V)
    if len(T.vertices) != len(V):
        raise InvalidParams("construction produced non-extreme points")
    order = [int(np.argmin(np.linalg.norm(T.vertices - v, axis=1))) for v in V]
    remap = {old: new for new, old in enumerate(order)}
    faces = [tuple(remap[i] for i in f) for f in T.faces]
    return ConvexPolytope(V, faces, T.tol)


# -- the planar sharpness constructions --------------------------------------------------


def gen_sharp_triangle(eps: float) -> ConvexPolygon:
    """Isosceles triangle with unit legs and apex angle pi/3 + eps; the apex is vertex 0."""
    if not 0 < eps < math.pi / 6:
        raise InvalidParams("eps must lie in (0, pi/6)")
    A = math.pi / 3 + eps
    s, c = math.sin(A / 2), math.cos(A / 2)
    return ConvexPolygon([(0.0, c), (-s, 0.0), (s, 0.0)])


SHARP_QUAD_MAX_EPS = 0.5


def _quad_points(lam: float):
    v = np.array([0.0, 0.0])
    u = np.array([1.0, 0.0])
    xp = np.array([math.cos(math.pi / 6), -math.sin(math.pi / 6)])
    yp = np.array([math.cos(math.pi / 6), math.sin(math.pi / 6)])
    x = xp + lam * (yp - xp)
    y = yp - lam * (yp - xp)
    return v, x, u, y


def _quad_sum(lam: float) -> float:
    v, x, u, y = _quad_points(lam)
    return angle_at(x, v, u) + angle_at(y, u, v)


def gen_sharp_quad(eps: float) -> tuple[ConvexPolygon, tuple[int, int]]:
    """Quadrilateral v, x, u, y with angle sum 5pi/6 + eps at x and y; uv is the unique diameter.

    x', y', v form a unit equilateral triangle, u lies on its bisector at
    unit distance from v; x and y slide inward along x'y' by the same amount,
    found by root bracketing so the two angles add up exactly.
    """
    if not 0 < eps <= SHARP_QUAD_MAX_EPS:
        raise InvalidParams(f"eps must lie in (0, {SHARP_QUAD_MAX_EPS}]")
    target = 5 * math.pi / 6 + eps
    lam = brentq(lambda t: _quad_sum(t) - target, 0.0, 0.45, xtol=1e-15, rtol=1e-15)
    v, x, u, y = _quad_points(lam)
    return ConvexPolygon([v, x, u, y]), (1, 3)


def sharp_quad_reference() -> dict[str, np.ndarray]:
    """The unperturbed quadrilateral x'uy'v, for construction checks."""
    v, xp, u, yp = _quad_points(0.0)
    return {"v": v, "x'": xp, "u": u, "y'": yp}


def gen_sharp_pentagon(delta: float) -> tuple[ConvexPolygon, tuple[int, int, int]]:
    """Pentagon u, x, y, v, z whose marked vertices x, y, z have angle sum slightly above 4pi/3.

    u, v = (-1, 0), (1, 0); x, y lie on the unit circle below uv at distance
    ``delta`` from u and v, with xy parallel to uv; z sits on the altitude
    of the equilateral triangle uvz' at depth equal to the gap between the
    lines xy and uv. The excess over 4pi/3 vanishes as delta -> 0.
    """
    if not 0 < delta < 1.0:
        raise InvalidParams("delta must lie in (0, 1)")
    phi = 2 * math.asin(delta / 2)
    u = (-1.0, 0.0)
    v = (1.0, 0.0)
    x = (-math.cos(phi), -math.sin(phi))
    y = (math.cos(phi), -math.sin(phi))
    z = (0.0, math.sqrt(3) - math.sin(phi))
    return ConvexPolygon([u, x, y, v, z]), (1, 2, 4)


def _opposite(a: float, b: float, tol: float) -> bool:
    d = (a - b) % (2 * math.pi)
    return abs(d - math.pi) < tol


def gen_remark_polygon(n: int, k: int, delta: float) -> tuple[ConvexPolygon, tuple[int, ...]]:
    """(n+2)-gon u, v, x_1..x_n on the unit circle with uv the unique diameter.

    x_1..x_k run over the upper arc from near u to near v, x_{k+1}..x_n over
    the lower arc from near v back to near u. The extreme points sit at
    chord distance ``delta`` (upper) and 1.5x that angle (lower) from u, v,
    so no two marked points are antipodal and the sum of their angles
    exceeds (n-2)pi by about 2.5 times the angular offset.
    Returns the polygon and the indices of x_1..x_n in it.
    """
    if n < 4 or not 2 <= k <= n - 2:
        raise InvalidParams("need n >= 4 and 2 <= k <= n - 2")
    if not 0 < delta < 0.5:
        raise InvalidParams("delta must lie in (0, 0.5)")
    a = 2 * math.asin(delta / 2)
    upper = np.linspace(math.pi - a, a, k)
    lower = np.linspace(-1.5 * a, -(math.pi - 1.5 * a), n - k)
    angles = list(upper) + list(lower)
    # nudge lower points off any antipode of an upper point
    tol = 1e-6
    step = (math.pi - 3 * a) / max(n - k - 1, 1) * 0.25
    for j in range(k, n):
        for _ in range(8):
            if any(_opposite(angles[j], angles[i], tol) for i in range(k)):
                angles[j] -= step * 0.5
            else:
                break
    pts = {"u": (-1.0, 0.0), "v": (1.0, 0.0)}
    for i, t in enumerate(angles):
        pts[f"x{i + 1}"] = (math.cos(t), math.sin(t))
    order = ["u"] + [f"x{i}" for i in range(n, k, -1)] + ["v"] + [f"x{i}" for i in range(k, 0, -1)]
    # counterclockwise: u, lower arc left to right, v, upper arc right to left
    P = ConvexPolygon([pts[name] for name in order])
    index = {name: i for i, name in enumerate(order)}
    return P, tuple(index[f"x{i + 1}"] for i in range(n))


def remark_angle_gap(P: ConvexPolygon, marked: Sequence[int]) -> float:
    n = len(marked)
    return sum(P.angles[i] for i in marked) - (n - 2) * math.pi
