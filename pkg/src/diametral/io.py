"""Reading and writing polygons (CSV ``x,y``) and polytopes (OFF), plus atomic file writes."""

from __future__ import annotations

import csv
import io
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from .core import DEFAULT_TOL, DiametralError, ParseError, Tolerances
from .planar import ConvexPolygon, cross
from .solid import ConvexPolytope, hull3d


def _float(tok: str, line: int, path) -> float:
    try:
        x = float(tok)
    except ValueError:
        raise ParseError(f"not a number: {tok!r}", line, path) from None
    if not math.isfinite(x):
        raise ParseError(f"non-finite value: {tok!r}", line, path)
    return x


def parse_csv(text: str, path: str | None = None, tol: Tolerances = DEFAULT_TOL) -> ConvexPolygon:
    """Polygon from ``x,y`` rows in cyclic order (either orientation).

    Blank lines and ``#`` comments are skipped; a leading ``x,y`` header is allowed.
    """
    pts, rows = [], []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        cells = [c.strip() for c in row]
        if not cells or not any(cells) or cells[0].startswith("#"):
            continue
        if not pts and not rows and [c.lower() for c in cells] == ["x", "y"]:
            continue
        if len(cells) != 2:
            raise ParseError(f"expected 2 columns, got {len(cells)}", lineno, path)
        pts.append((_float(cells[0], lineno, path), _float(cells[1], lineno, path)))
        rows.append(lineno)
    if len(pts) < 3:
        raise ParseError(f"need at least 3 points, got {len(pts)}", rows[-1] if rows else None, path)
    area2 = sum(cross((0.0, 0.0), pts[i - 1], pts[i]) for i in range(len(pts)))
    if area2 < 0:
        pts.reverse()
    try:
        return ConvexPolygon(pts, tol)
    except DiametralError as exc:
        raise ParseError(f"not a strictly convex polygon: {exc}", None, path) from None


def _off_tokens(text: str):
    """(line number, tokens) for non-empty lines with comments removed."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].split()
        if body:
            yield lineno, body


def parse_off(text: str, path: str | None = None, tol: Tolerances = DEFAULT_TOL) -> ConvexPolytope:
    """Polytope from an OFF file. Faces may be wound either way; vertex numbering is kept."""
    lines = list(_off_tokens(text))
    if not lines:
        raise ParseError("empty file", 1, path)
    lineno, toks = lines[0]
    if toks[0] != "OFF":
        raise ParseError("missing OFF header", lineno, path)
    rest = toks[1:]
    pos = 1
    if not rest:
        if len(lines) < 2:
            raise ParseError("missing counts line", lineno, path)
        lineno, rest = lines[1]
        pos = 2
    if len(rest) < 2:
        raise ParseError("counts line needs vertex and face counts", lineno, path)
    try:
        nv, nf = int(rest[0]), int(rest[1])
    except ValueError:
        raise ParseError("counts must be integers", lineno, path) from None
    if nv < 4 or nf < 0:
        raise ParseError("a polytope needs at least 4 vertices", lineno, path)
    if len(lines) < pos + nv + nf:
        last = lines[-1][0]
        raise ParseError(f"expected {nv} vertices and {nf} faces", last, path)
    V = []
    for lineno, toks in lines[pos:pos + nv]:
        if len(toks) != 3:
            raise ParseError(f"vertex line needs 3 coordinates, got {len(toks)}", lineno, path)
        V.append([_float(t, lineno, path) for t in toks])
    F = []
    for lineno, toks in lines[pos + nv:pos + nv + nf]:
        try:
            ids = [int(t) for t in toks]
        except ValueError:
            raise ParseError("face indices must be integers", lineno, path) from None
        if len(ids) < 4 or ids[0] != len(ids) - 1:
            raise ParseError("face line must be a count followed by that many indices", lineno, path)
        if min(ids[1:]) < 0 or max(ids[1:]) >= nv:
            raise ParseError("face index out of range", lineno, path)
        F.append(ids[1:])
    if len(lines) > pos + nv + nf:
        raise ParseError("trailing data after faces", lines[pos + nv + nf][0], path)
    V = np.asarray(V)
    try:
        if F:
            F = [_outward(V, f) for f in F]
            return ConvexPolytope(V, F, tol)
        return _hull_keep_order(V, tol)
    except DiametralError as exc:
        try:
            return _hull_keep_order(V, tol)
        except DiametralError:
            raise ParseError(f"not a convex polytope: {exc}", None, path) from None


def _outward(V: np.ndarray, f: list[int]) -> list[int]:
    c = V.mean(axis=0)
    P = V[f]
    n = np.zeros(3)
    for a, b in zip(P, np.roll(P, -1, axis=0)):
        n += np.cross(a, b)
    return f if np.dot(n, P.mean(axis=0) - c) >= 0 else f[::-1]


def _hull_keep_order(V: np.ndarray, tol: Tolerances) -> ConvexPolytope:
    T = hull3d(V, tol)
    if len(T.vertices) != len(V):
        raise ParseError("some listed vertices are not extreme points")
    return T


def polygon_to_csv(P: ConvexPolygon) -> str:
    return "x,y\n" + "".join(f"{x!r},{y!r}\n" for x, y in P.vertices)


def polytope_to_off(T: ConvexPolytope) -> str:
    return T.to_off()


def body_text(body) -> str:
    return polygon_to_csv(body) if isinstance(body, ConvexPolygon) else polytope_to_off(body)


def load_geometry(path: str | os.PathLike, tol: Tolerances = DEFAULT_TOL):
    """Polygon or polytope by file extension (``.csv`` / ``.off``)."""
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", None, str(p)) from None
    suffix = p.suffix.lower()
    if suffix == ".csv":
        return parse_csv(text, str(p), tol)
    if suffix == ".off":
        return parse_off(text, str(p), tol)
    raise ParseError(f"unknown geometry format {suffix!r} (expected .csv or .off)", None, str(p))


def atomic_write(path: str | os.PathLike, data: str | bytes) -> None:
    """Write via a temporary file in the target directory, then rename over ``path``."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    mode = "wb" if isinstance(data, bytes) else "w"
    fd, tmp = tempfile.mkstemp(prefix=f".{p.name}.", dir=p.parent)
    try:
        with os.fdopen(fd, mode) as fh:
            fh.write(data)
        os.replace(tmp, p)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
