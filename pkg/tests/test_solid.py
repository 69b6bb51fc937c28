import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diametral.core import (BadCardinality, DegenerateInput, DegeneratePoints, EmptySection, HypothesisNotMet,
                            InvalidPolytope, NotOnBoundary, NotSymmetric)
from diametral.lab.generators import bipyramid, random_polytope, spike_pyramid, symmetric_lens
from diametral.solid import (ConvexPolytope, complete_angle, cross_section, cube, curvature, evaluate_criterion_3d,
                             extrinsic_diameter, hull3d, is_extrinsic_diametral, regular_tetrahedron,
                             section_angle_at_vertex, symmetric_diameter_check_3d, two_point_diameter_check_3d,
                             unfold_tetrahedron)

CUBE = cube()
TET = regular_tetrahedron()


def brute_pairs(T, rel=1e-7):
    V = T.vertices
    d = {(i, j): float(np.linalg.norm(V[i] - V[j])) for i, j in itertools.combinations(range(len(V)), 2)}
    top = max(d.values())
    return top, {k for k, v in d.items() if v >= top * (1 - rel)}


def random_rotation(rng):
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    return q * np.sign(np.diag(r))


seeds = st.integers(0, 2**32 - 1)


# -- construction ------------------------------------------------------------------


def test_cube_structure():
    assert len(CUBE.vertices) == 8 and len(CUBE.faces) == 6 and len(CUBE.edges) == 12


def test_hull_flat_input():
    with pytest.raises(DegenerateInput):
        hull3d([[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]])


def test_inward_faces_rejected():
    with pytest.raises(InvalidPolytope):
        ConvexPolytope(TET.vertices, [f[::-1] for f in TET.faces])


def test_nonconvex_rejected():
    V = np.vstack([CUBE.vertices, [[0.5, 0.5, 0.5]]])
    with pytest.raises(InvalidPolytope):
        ConvexPolytope(V, CUBE.faces)


# -- angles and curvature ----------------------------------------------------------


def test_complete_angles():
    assert all(a == pytest.approx(3 * math.pi / 2) for a in CUBE.complete_angles)
    assert all(a == pytest.approx(math.pi) for a in TET.complete_angles)
    assert complete_angle(CUBE, CUBE.face_centroid(0)) == 2 * math.pi
    assert complete_angle(CUBE, CUBE.edge_point(0, 0.3)) == 2 * math.pi


def test_curvature():
    assert curvature(CUBE, 0) == pytest.approx(math.pi / 2)
    assert sum(CUBE.curvatures) == pytest.approx(4 * math.pi)
    assert curvature(TET, 1) == pytest.approx(math.pi)
    assert sum(TET.curvatures) == pytest.approx(4 * math.pi)


def test_sphere_hull_gauss_bonnet():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(50, 3))
    T = hull3d(X / np.linalg.norm(X, axis=1)[:, None])
    assert abs(sum(T.curvatures) - 4 * math.pi) <= len(T.vertices) * 1e-9


def test_triangulation_does_not_change_angles():
    tri_faces = [t for f in CUBE.faces for t in ((f[0], f[1], f[2]), (f[0], f[2], f[3]))]
    T = ConvexPolytope(CUBE.vertices, tri_faces)
    assert np.allclose(T.complete_angles, CUBE.complete_angles, atol=1e-12)


def test_face_point_validation():
    with pytest.raises(NotOnBoundary):
        CUBE.face_point(0, [0.5, 0.5, 0.5, 0.5])


@settings(max_examples=50)
@given(st.integers(4, 60), seeds)
def test_gauss_bonnet_random(n, seed):
    T = random_polytope(n, seed)
    assert abs(sum(T.curvatures) - 4 * math.pi) <= len(T.vertices) * 1e-9
    assert all(0 < a < 2 * math.pi for a in T.complete_angles)


@settings(max_examples=40)
@given(st.integers(4, 40), seeds)
def test_rigid_motion_invariance(n, seed):
    rng = np.random.default_rng(seed)
    T = random_polytope(n, rng)
    R = random_rotation(rng)
    U = T.transformed(R, rng.normal(size=3))
    assert np.allclose(U.complete_angles, T.complete_angles, atol=1e-9)
    assert extrinsic_diameter(U).length == pytest.approx(extrinsic_diameter(T).length, rel=1e-12)


# -- diameters ---------------------------------------------------------------------


def test_cube_and_tetrahedron_diameters():
    d = extrinsic_diameter(CUBE)
    assert d.length == pytest.approx(math.sqrt(3))
    assert len(d.vertex_pairs) == 4
    d = extrinsic_diameter(TET)
    assert d.length == pytest.approx(1.0)
    assert len(d.vertex_pairs) == 6


@settings(max_examples=50)
@given(st.integers(4, 40), seeds)
def test_diameter_matches_brute_force(n, seed):
    T = random_polytope(n, seed)
    top, pairs = brute_pairs(T)
    d = extrinsic_diameter(T)
    assert d.length == pytest.approx(top, rel=1e-12)
    assert set(d.vertex_pairs) == pairs


# -- criteria --------------------------------------------------------------------------


def test_spike_apex_diametral():
    T = spike_pyramid(4, 10.0)
    v = evaluate_criterion_3d(T, [4])
    assert v.angle_sum < 2 * math.pi / 3
    assert v.hypothesis_holds and v.conclusion_holds


def test_tetrahedron_vertex():
    v = evaluate_criterion_3d(TET, [0])
    assert not v.hypothesis_holds and v.conclusion_holds


def test_lens_apexes():
    T = symmetric_lens(8, 6.0, 2)
    v = evaluate_criterion_3d(T, [0, 1])
    assert v.angle_sum <= 3 * math.pi / 2
    assert v.hypothesis_holds and v.conclusion_holds


def test_criterion_cardinality_3d():
    with pytest.raises(BadCardinality):
        evaluate_criterion_3d(CUBE, [0, 1, 2, 3])


def test_non_vertex_never_diametral():
    assert not is_extrinsic_diametral(CUBE, CUBE.face_centroid(2))


def test_two_point_3d():
    T = bipyramid(5, 6.0, 6.0)
    assert two_point_diameter_check_3d(T, 5, 6)
    with pytest.raises(HypothesisNotMet):
        two_point_diameter_check_3d(CUBE, 0, 7)


@settings(max_examples=60)
@given(st.integers(3, 10), st.floats(2.0, 30.0), st.floats(2.0, 30.0), st.floats(0, 0.9), seeds)
def test_sharp_bipyramid_apexes_form_diameter(n, ht, hb, jitter, seed):
    T = bipyramid(n, ht, hb, jitter=jitter, seed=seed)
    a, b = n, n + 1
    if max(T.complete_angles[a], T.complete_angles[b]) <= 2 * math.pi / 3:
        assert two_point_diameter_check_3d(T, a, b)


@settings(max_examples=60)
@given(st.integers(4, 30), seeds)
def test_solid_criterion_implication(n, seed):
    T = random_polytope(n, seed)
    d = extrinsic_diameter(T)
    idx = np.argsort(T.complete_angles)
    for k in (1, 2, 3):
        assert not evaluate_criterion_3d(T, [int(i) for i in idx[:k]], diameter=d).violation


# -- proof machinery ---------------------------------------------------------------------


def test_cube_mid_section_is_unit_square():
    S = cross_section(CUBE, (0, 0, 0.5), (1, 0, 0.5), (0, 1, 0.5))
    assert len(S) == 4
    assert sorted(S.angles) == pytest.approx([math.pi / 2] * 4)
    assert polygon_area(S.array) == pytest.approx(1.0)


def polygon_area(A):
    x, y = A[:, 0], A[:, 1]
    return 0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def test_tetrahedron_offset_face_section():
    V = TET.vertices
    f = TET.faces[0]
    apex = [i for i in range(4) if i not in f][0]
    s = 0.3
    # plane parallel to face f, moved a fraction s of the way towards the apex
    pts = [V[i] + s * (V[apex] - V[i]) for i in f]
    S = cross_section(TET, *pts)
    assert len(S) == 3
    side = (1 - s) * 1.0
    assert sorted(math.dist(S.vertices[i], S.vertices[(i + 1) % 3]) for i in range(3)) == pytest.approx([side] * 3)


def test_section_misses_body():
    with pytest.raises(EmptySection):
        cross_section(CUBE, (0, 0, 2), (1, 0, 2), (0, 1, 2))


def test_cube_vertex_section_angle():
    a = section_angle_at_vertex(CUBE, 0, (1, 0.3, 1), (0.2, 1, 1))
    assert a <= 3 * math.pi / 4 + 1e-9


@settings(max_examples=60)
@given(st.integers(4, 30), seeds)
def test_section_angle_at_most_half_complete_angle(n, seed):
    rng = np.random.default_rng(seed)
    T = random_polytope(n, rng)
    i = int(rng.integers(len(T.vertices)))
    b = rng.dirichlet(np.ones(len(T.vertices))) @ T.vertices
    c = rng.dirichlet(np.ones(len(T.vertices))) @ T.vertices
    try:
        a = section_angle_at_vertex(T, i, b, c)
    except (EmptySection, DegeneratePoints):
        return
    assert a <= T.complete_angles[i] / 2 + 1e-9


def test_unfold_regular_tetrahedron():
    x, u, y, v = TET.vertices
    Q1, Q2 = unfold_tetrahedron(x, u, y, v)
    for Q in (Q1, Q2):
        assert sorted(Q.angles.values()) == pytest.approx([math.pi / 3] * 2 + [2 * math.pi / 3] * 2)
    assert sum(Q1.angles.values()) + sum(Q2.angles.values()) == pytest.approx(4 * math.pi)


def test_unfold_flat_square():
    x, u, y, v = (0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0)
    Q1, _ = unfold_tetrahedron(x, u, y, v)
    pts = [Q1.x, Q1.u, Q1.y, Q1.v]
    d = [math.dist(pts[i], pts[(i + 1) % 4]) for i in range(4)]
    assert d == pytest.approx([1, 1, 1, 1])
    assert math.dist(Q1.x, Q1.y) == pytest.approx(math.sqrt(2))


def test_unfold_collinear_raises():
    with pytest.raises(DegeneratePoints):
        unfold_tetrahedron((0, 0, 0), (1, 0, 0), (2, 0, 0), (0, 1, 0))


@settings(max_examples=100)
@given(seeds)
def test_unfolding_preserves_lengths(seed):
    X = np.random.default_rng(seed).normal(size=(4, 3))
    x, u, y, v = X
    Q1, Q2 = unfold_tetrahedron(x, u, y, v)
    for Q, tris in ((Q1, ("xuv", "yuv")), (Q2, ("uxy", "vxy"))):
        P = {"x": Q.x, "u": Q.u, "y": Q.y, "v": Q.v}
        R = {"x": x, "u": u, "y": y, "v": v}
        for tri in tris:
            for a, b in itertools.combinations(tri, 2):
                assert math.dist(P[a], P[b]) == pytest.approx(float(np.linalg.norm(R[a] - R[b])), abs=1e-9)
    # x and y images on opposite sides of the hinge
    assert Q1.x[1] * Q1.y[1] < 0 and Q2.u[1] * Q2.v[1] < 0
    assert sum(Q1.angles.values()) + sum(Q2.angles.values()) == pytest.approx(4 * math.pi, abs=1e-9)


# -- symmetric bodies ----------------------------------------------------------------------


def test_elongated_octahedron():
    T = bipyramid(4, 5.0, 5.0)
    apex = 4
    assert T.complete_angles[apex] < 5 * math.pi / 6
    assert symmetric_diameter_check_3d(T, apex)
    with pytest.raises(HypothesisNotMet):
        symmetric_diameter_check_3d(cube(center=True), 0)
    with pytest.raises(NotSymmetric):
        symmetric_diameter_check_3d(spike_pyramid(4, 5.0), 4)


@pytest.mark.parametrize("height", [1.5, 2.0, 3.0, 5.0, 8.0, 20.0])
def test_lens_sweep(height):
    T = symmetric_lens(8, height, 2)
    if T.complete_angles[0] <= 5 * math.pi / 6:
        assert symmetric_diameter_check_3d(T, 0)
