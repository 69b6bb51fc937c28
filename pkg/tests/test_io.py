import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diametral.core import ParseError
from diametral.io import atomic_write, load_geometry, parse_csv, parse_off, polygon_to_csv, polytope_to_off
from diametral.lab.generators import random_convex_polygon, random_polytope
from diametral.solid import cube

SQUARE = "x,y\n0,0\n1,0\n1,1\n0,1\n"


def test_csv_basic():
    P = parse_csv(SQUARE)
    assert len(P.vertices) == 4


def test_csv_clockwise_and_comments():
    P = parse_csv("# a square\n0,0\n0,1\n\n1,1\n1,0\n")
    Q = parse_csv(SQUARE)
    assert sorted(P.vertices) == sorted(Q.vertices)
    assert sum(P.angles) == pytest.approx(2 * np.pi)


@pytest.mark.parametrize("text,line", [
    ("x,y\n0,0\n1,zero\n1,1\n", 3),
    ("0,0\n1,0,2\n1,1\n", 2),
    ("0,0\n1,nan\n1,1\n", 2),
    ("0,0\n1,0\n", 2),
])
def test_csv_errors_carry_line(text, line):
    with pytest.raises(ParseError) as info:
        parse_csv(text, "p.csv")
    assert info.value.line == line
    assert "p.csv" in str(info.value)


def test_csv_nonconvex():
    with pytest.raises(ParseError):
        parse_csv("0,0\n2,0\n1,0.2\n1,2\n")


def test_off_roundtrip_cube():
    C = cube()
    T = parse_off(polytope_to_off(C))
    assert np.array_equal(T.vertices, C.vertices)
    assert np.allclose(T.complete_angles, C.complete_angles)


def test_off_inward_faces_are_reoriented():
    C = cube()
    lines = polytope_to_off(C).splitlines()
    nv = len(C.vertices)
    for i in range(2 + nv, len(lines)):
        toks = lines[i].split()
        lines[i] = " ".join([toks[0]] + toks[1:][::-1])
    T = parse_off("\n".join(lines))
    assert np.allclose(T.complete_angles, C.complete_angles)


def test_off_without_faces_uses_hull():
    V = cube().vertices
    text = "OFF\n8 0 0\n" + "".join(" ".join(map(str, v)) + "\n" for v in V)
    T = parse_off(text)
    assert np.array_equal(T.vertices, V) and len(T.faces) == 6


@pytest.mark.parametrize("text,line", [
    ("", 1),
    ("OFFX\n", 1),
    ("OFF\n4 4 6\n0 0 0\n1 0 0\n0 1 0\n", 5),
    ("OFF\n4 1 0\n0 0 0\n1 0 0\n0 1 0\n0 0 x\n3 0 1 2\n", 6),
    ("OFF\n4 1 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n3 0 1 9\n", 7),
])
def test_off_errors_carry_line(text, line):
    with pytest.raises(ParseError) as info:
        parse_off(text)
    assert info.value.line == line


def test_load_geometry(tmp_path):
    (tmp_path / "sq.csv").write_text(SQUARE)
    (tmp_path / "c.off").write_text(polytope_to_off(cube()))
    (tmp_path / "x.txt").write_text("")
    assert len(load_geometry(tmp_path / "sq.csv").vertices) == 4
    assert len(load_geometry(tmp_path / "c.off").vertices) == 8
    with pytest.raises(ParseError):
        load_geometry(tmp_path / "x.txt")
    with pytest.raises(ParseError):
        load_geometry(tmp_path / "missing.csv")


def test_atomic_write(tmp_path):
    p = tmp_path / "sub" / "out.json"
    atomic_write(p, "one")
    atomic_write(p, "two")
    assert p.read_text() == "two"
    assert [q.name for q in p.parent.iterdir()] == ["out.json"]


@settings(max_examples=50)
@given(st.integers(3, 40), st.integers(0, 2**32 - 1))
def test_csv_roundtrip(n, seed):
    P = random_convex_polygon(n, seed)
    Q = parse_csv(polygon_to_csv(P))
    assert np.array_equal(P.array, Q.array)


@settings(max_examples=30)
@given(st.integers(4, 30), st.integers(0, 2**32 - 1))
def test_off_roundtrip(n, seed):
    T = random_polytope(n, seed)
    U = parse_off(polytope_to_off(T))
    assert np.array_equal(T.vertices, U.vertices) and T.faces == U.faces
