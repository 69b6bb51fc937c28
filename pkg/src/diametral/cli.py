"""Command-line front end: ``diametral <analyze|verify|gen|search|plot>``.

Exit codes: 0 when every check passes, 2 when a check finds a violation,
3 on parse or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import report as rpt
from .core import (BadPointSpec, BudgetExceeded, DiametralError, NotSymmetric, ParseError,
                   Tolerances, Unplottable, Verdict, format_angle)
from .io import atomic_write, body_text, load_geometry
from .lab import generators as gen
from .lab.harness import SUITES, verify_theorem
from .lab.search import SETTINGS, conjecture_probe, sharpness_search
from .planar import (PLANAR_BOUNDS, QUAD_LEMMA_BOUND, SYMMETRIC_BOUND, BoundaryPoint2, ConvexPolygon,
                     evaluate_criterion, mirror_index, polygon_diameter, quad_lemma_check,
                     symmetric_diameter_check, two_point_diameter_check)
from .solid import (SOLID_BOUNDS, SYMMETRIC_BOUND_3D, ConvexPolytope, SurfacePoint, complete_angle,
                    evaluate_criterion_3d, extrinsic_diameter, mirror_vertex, symmetric_diameter_check_3d,
                    two_point_diameter_check_3d)
from .surface import (DEFAULT_COST_CAP, SYMMETRIC_BOUND_SURFACE, evaluate_criterion_surface,
                      intrinsic_diameter_estimate, makuha_check, symmetric_surface_check)
from .svg import polygon_svg, unfolding_svg

EXIT_OK, EXIT_VIOLATION, EXIT_CONFIG = 0, 2, 3
SEED_MAX = 2**64 - 1


class ConfigError(DiametralError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


# -- job configuration -----------------------------------------------------------------


@dataclass
class JobConfig:
    """One analyze job. Numeric fields are range-checked; manifests may not add other keys."""

    command: str = "analyze"
    input: str = ""
    points: str = ""
    seed: int = 0
    trials: int = 100
    steiner: int = 8
    sampling: int = 5
    tol_abs: float = 1e-9
    tol_diam: float = 1e-7
    out: str | None = None

    def validate(self) -> "JobConfig":
        if self.command != "analyze":
            raise ConfigError(f"manifest jobs must be analyze jobs, got {self.command!r}")
        if not isinstance(self.seed, int) or not 0 <= self.seed <= SEED_MAX:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        if not isinstance(self.trials, int) or self.trials < 0:
            raise ConfigError("trials must be a non-negative integer")
        if not isinstance(self.steiner, int) or not 0 <= self.steiner <= 64:
            raise ConfigError("steiner must be an integer in [0, 64]")
        if not isinstance(self.sampling, int) or not 1 <= self.sampling <= 50:
            raise ConfigError("sampling must be an integer in [1, 50]")
        for name in ("tol_abs", "tol_diam"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not 0 < v < 1e-2:
                raise ConfigError(f"{name} must lie in (0, 0.01)")
        return self

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "JobConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown job keys: {', '.join(unknown)}")
        if "input" not in data:
            raise ConfigError("job needs an input")
        return cls(**data).validate()

    @property
    def tol(self) -> Tolerances:
        return Tolerances(float(self.tol_abs), float(self.tol_diam))


def _tol(args) -> Tolerances:
    for name in ("tol_abs", "tol_diam"):
        v = getattr(args, name)
        if not 0 < v < 1e-2:
            raise ConfigError(f"--{name.replace('_', '-')} must lie in (0, 0.01)")
    return Tolerances(args.tol_abs, args.tol_diam)


def _check_common(args) -> None:
    if not 0 <= args.seed <= SEED_MAX:
        raise ConfigError("--seed must be an unsigned 64-bit integer")
    if args.trials is not None and args.trials < 0:
        raise ConfigError("--trials must be non-negative")
    if args.steiner is not None and not 0 <= args.steiner <= 64:
        raise ConfigError("--steiner must lie in [0, 64]")
    if args.sampling is not None and not 1 <= args.sampling <= 50:
        raise ConfigError("--sampling must lie in [1, 50]")


# -- point specs -----------------------------------------------------------------------


def parse_points(body, spec: str):
    """Boundary points from a spec string.

    ``"0,2"`` lists vertex indices. Otherwise items are separated by ``;``:
    ``v3`` or ``3`` is a vertex, ``e5@0.25`` the point at parameter 0.25 on
    edge 5, and ``f2@0.2,0.3,0.5`` (3D only) a face point by vertex weights.
    """
    spec = spec.strip()
    if not spec:
        raise BadPointSpec("empty point spec")
    items = spec.split(",") if all(s.strip().isdigit() for s in spec.split(",")) else spec.split(";")
    out = []
    for raw in items:
        item = raw.strip()
        try:
            if item.isdigit() or (item[:1] == "v" and item[1:].isdigit()):
                i = int(item.lstrip("v"))
                n = len(body.vertices)
                if not 0 <= i < n:
                    raise BadPointSpec(f"vertex {i} out of range (body has {n})")
                out.append(i)
            elif item[:1] == "e" and "@" in item:
                e, t = item[1:].split("@", 1)
                out.append(body.edge_point(int(e), float(t)))
            elif item[:1] == "f" and "@" in item and isinstance(body, ConvexPolytope):
                k, w = item[1:].split("@", 1)
                out.append(body.face_point(int(k), [float(x) for x in w.split(",")]))
            else:
                raise BadPointSpec(f"cannot parse point {item!r}")
        except BadPointSpec:
            raise
        except (ValueError, IndexError, DiametralError) as exc:
            raise BadPointSpec(f"bad point {item!r}: {exc}") from None
    return out


def _point_json(p) -> Any:
    if isinstance(p, (int, np.integer)):
        return {"kind": "vertex", "index": int(p)}
    if isinstance(p, BoundaryPoint2):
        if p.is_vertex:
            return {"kind": "vertex", "index": p.vertex}
        return {"kind": "edge", "index": p.edge, "t": p.t, "point": list(p.point)}
    return {"kind": p.kind, "index": p.index, "params": list(p.params), "point": list(p.point)}


def _vertex_of(p) -> int | None:
    if isinstance(p, (int, np.integer)):
        return int(p)
    if isinstance(p, BoundaryPoint2):
        return p.vertex if p.is_vertex else None
    return p.index if p.kind == "vertex" else None


# -- analyze ---------------------------------------------------------------------------


def _criterion_check(name: str, anchor: str, v) -> dict:
    return rpt.check(
        name, anchor, v.conclusion.value,
        {"bound_minus_sum": v.margin, "angle_sum": format_angle(v.angle_sum), "bound": format_angle(v.bound)},
        hypothesis_holds=v.hypothesis_holds,
        violation=v.violation,
        angles=[format_angle(a) for a in v.angles],
        diametral_members=list(v.diametral_members),
        **({"surface": v.details} if v.details else {}),
    )


def _implication(name: str, anchor: str, ok: bool, **details) -> dict:
    return rpt.check(name, anchor, "holds" if ok else "fails", {}, hypothesis_holds=True, violation=not ok, **details)


def _analyze_polygon(P: ConvexPolygon, E, tol: Tolerances) -> tuple[list[dict], dict]:
    diam = polygon_diameter(P, tol.diam)
    checks = []
    geometry = {
        "kind": "polygon",
        "vertices": [list(v) for v in P.vertices],
        "angles": [format_angle(a) for a in P.angles],
        "diameter": {"length": diam.length, "pairs": [list(p) for p in diam.vertex_pairs]},
        "points": [_point_json(p) for p in E],
        "marked": [v for v in (_vertex_of(p) for p in E) if v is not None],
    }
    if 1 <= len(E) <= 3:
        checks.append(_criterion_check(f"planar_criterion_{len(E)}", f"thm2.3:{len(E)}",
                                       evaluate_criterion(P, E, diameter=diam)))
    verts = [_vertex_of(p) for p in E]
    if len(E) == 2 and None not in verts and all(P.angles[i] <= PLANAR_BOUNDS[1] + P.tol.abs for i in verts):
        checks.append(_implication("two_point_diameter", "thm2.3:pair", two_point_diameter_check(P, *verts)))
    if len(P) == 4 and len(E) == 2 and None not in verts and (verts[1] - verts[0]) % 4 in (1, 3):
        x, y = verts
        start = x if (y - x) % 4 == 1 else y
        if P.angles[x] + P.angles[y] <= QUAD_LEMMA_BOUND + P.tol.abs:
            checks.append(_implication("quad_adjacent_pair", "lemma2.2", quad_lemma_check(P, start)))
    if len(E) == 1 and verts[0] is not None:
        try:
            mirror_index(P, verts[0])
            if P.angles[verts[0]] <= SYMMETRIC_BOUND + P.tol.abs:
                checks.append(_implication("symmetric_diameter", "cor2.4", symmetric_diameter_check(P, verts[0])))
        except NotSymmetric:
            pass
    return checks, geometry


def _analyze_polytope(T: ConvexPolytope, E, tol: Tolerances, m: int, density: int) -> tuple[list[dict], dict]:
    diam = extrinsic_diameter(T, tol.diam)
    checks = []
    geometry = {
        "kind": "polytope",
        "n_vertices": len(T.vertices),
        "n_faces": len(T.faces),
        "complete_angles": [format_angle(a) for a in T.complete_angles],
        "extrinsic_diameter": {"length": diam.length, "pairs": [list(p) for p in diam.vertex_pairs]},
        "points": [_point_json(p) for p in E],
    }
    if 1 <= len(E) <= 3:
        checks.append(_criterion_check(f"solid_criterion_{len(E)}", f"thm3.1:{len(E)}",
                                       evaluate_criterion_3d(T, E, diameter=diam)))
    verts = [_vertex_of(p) for p in E]
    if len(E) == 2 and None not in verts and all(T.complete_angles[i] <= SOLID_BOUNDS[1] + T.tol.abs
                                                 for i in verts):
        checks.append(_implication("two_point_diameter_3d", "thm3.1:pair", two_point_diameter_check_3d(T, *verts)))
    symmetric = False
    if len(E) == 1 and verts[0] is not None:
        try:
            mirror_vertex(T, verts[0])
            symmetric = True
        except NotSymmetric:
            pass
        if symmetric and T.complete_angles[verts[0]] <= SYMMETRIC_BOUND_3D + T.tol.abs:
            checks.append(_implication("symmetric_diameter_3d", "thm3.2",
                                       symmetric_diameter_check_3d(T, verts[0])))
    try:
        D = intrinsic_diameter_estimate(T, density, m, cost_cap=DEFAULT_COST_CAP)
    except BudgetExceeded as exc:
        checks.append(rpt.check("surface_checks", "thm4.4", "not_applicable", {}, reason=str(exc)))
        return checks, geometry
    path = D.path
    geometry["intrinsic_diameter"] = {
        "value": D.value, "lower_bound": D.lower_bound, "slack": D.slack, "graph_bound": D.graph_bound,
        "m": m, "density": density,
    }
    geometry["geodesic"] = {
        "length": path.length,
        "faces": list(path.faces),
        "polyline": path.polyline.tolist(),
        "unfolded_faces": [list(map(list, f)) for f in path.unfolded_faces],
        "unfolded_segment": [list(p) for p in path.unfolded_segment],
    }
    if 1 <= len(E) <= 3:
        v = evaluate_criterion_surface(T, E, m, density, escalate=True, estimate=D)
        checks.append(_criterion_check(f"surface_criterion_{len(E)}", f"thm4.4:{len(E)}", v))
    if symmetric and T.complete_angles[verts[0]] <= SYMMETRIC_BOUND_SURFACE + T.tol.abs:
        sv = symmetric_surface_check(T, verts[0], m, density, estimate=D)
        checks.append(rpt.check("symmetric_surface_diameter", "cor4.5", sv.value, {}, hypothesis_holds=True,
                                violation=sv is Verdict.FAILS))
    mk = makuha_check(T, m, density, estimate=D)
    checks.append(rpt.check("extrinsic_vs_intrinsic", "makuha", "holds" if mk.stated_holds else "fails",
                            {"stated_ratio": mk.stated_ratio, "sharp_ratio": mk.sharp_ratio},
                            hypothesis_holds=True, violation=not mk.stated_holds,
                            extrinsic=mk.extrinsic, intrinsic=mk.intrinsic, slack=mk.slack,
                            sharp_holds=mk.sharp_holds))
    return checks, geometry


def analyze_job(job: JobConfig) -> dict:
    body = load_geometry(job.input, job.tol)
    E = parse_points(body, job.points) if job.points else []
    if len(E) > 3:
        raise BadPointSpec("at most 3 points can be tested")
    if isinstance(body, ConvexPolygon):
        checks, geometry = _analyze_polygon(body, E, job.tol)
    else:
        checks, geometry = _analyze_polytope(body, E, job.tol, job.steiner, job.sampling)
    config = {k: v for k, v in asdict(job).items() if k not in ("out", "trials", "seed")}
    return rpt.make_report("analyze", config, checks, geometry=geometry)


def _has_violation(report: dict) -> bool:
    checks = list(report.get("checks", []))
    for job in report.get("jobs", []):
        checks.extend(job.get("checks", []))
    return any(c.get("verdict") == "violation" or c.get("details", {}).get("violation") for c in checks)


def cmd_analyze(args) -> tuple[dict, int]:
    tol = _tol(args)
    if args.manifest:
        try:
            data = json.loads(Path(args.manifest).read_text())
        except OSError as exc:
            raise ParseError(f"cannot read manifest: {exc.strerror}", None, args.manifest) from None
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, exc.lineno, args.manifest) from None
        if not isinstance(data, dict) or set(data) - {"jobs"} or not isinstance(data.get("jobs"), list):
            raise ConfigError("manifest must be an object with a single 'jobs' list")
        base = Path(args.manifest).parent
        reports = []
        for entry in data["jobs"]:
            if not isinstance(entry, dict):
                raise ConfigError("each job must be an object")
            job = JobConfig.from_dict(entry)
            if not Path(job.input).is_absolute():
                job.input = str(base / job.input)
            rep = analyze_job(job)
            if job.out:
                atomic_write(base / job.out if not Path(job.out).is_absolute() else job.out, rpt.dumps(rep))
            reports.append(rep)
        report = rpt.make_report("analyze", {"manifest": str(args.manifest)}, [], jobs=reports)
    else:
        if not args.geometry:
            raise ConfigError("analyze needs a geometry file or --manifest")
        job = JobConfig(input=args.geometry, points=args.points or "", seed=args.seed,
                        steiner=8 if args.steiner is None else args.steiner,
                        sampling=5 if args.sampling is None else args.sampling,
                        tol_abs=tol.abs, tol_diam=tol.diam).validate()
        report = analyze_job(job)
    return report, EXIT_VIOLATION if _has_violation(report) else EXIT_OK


# -- verify / search -------------------------------------------------------------------


def _search_report(command: str, name: str, sr, config: dict) -> dict:
    res = sr.to_dict(timing=False)
    check = rpt.check(name, name, "pass" if sr.passed else "violation",
                      {k: v for k, v in sorted(sr.stats.items())},
                      violations=len(sr.violations), inconclusive=sr.counts.get("inconclusive", 0))
    return rpt.make_report(command, config, [check], result=res, timing=sr.runtime)


def cmd_verify(args) -> tuple[dict, int]:
    tol = _tol(args)
    if args.suite not in SUITES:
        raise ConfigError(f"unknown suite {args.suite!r}; choose from {', '.join(sorted(SUITES))}")
    trials = 100 if args.trials is None else args.trials
    m = 8 if args.steiner is None else args.steiner
    density = 5 if args.sampling is None else args.sampling
    sr = verify_theorem(args.suite, trials, args.seed, m=m, density=density, tol=tol)
    config = {"suite": args.suite, "trials": trials, "seed": args.seed, "steiner": m, "sampling": density,
              "tol_abs": tol.abs, "tol_diam": tol.diam}
    return _search_report("verify", args.suite, sr, config), EXIT_OK if sr.passed else EXIT_VIOLATION


def cmd_search(args) -> tuple[dict, int]:
    if args.setting == "conjecture":
        trials = 1000 if args.trials is None else args.trials
        sr = conjecture_probe(trials, args.seed)
        config = {"setting": "conjecture", "trials": trials, "seed": args.seed}
    elif args.setting in SETTINGS:
        trials = 200 if args.trials is None else args.trials
        m = 4 if args.steiner is None else args.steiner
        density = 3 if args.sampling is None else args.sampling
        if trials < 1:
            raise ConfigError("--trials must be positive for a sharpness search")
        sr = sharpness_search(args.setting, trials, args.seed, m=m, density=density)
        config = {"setting": args.setting, "trials": trials, "seed": args.seed, "steiner": m, "sampling": density}
    else:
        raise ConfigError(f"unknown setting {args.setting!r}; choose from conjecture, {', '.join(SETTINGS)}")
    return _search_report("search", args.setting, sr, config), EXIT_OK if sr.passed else EXIT_VIOLATION


# -- gen -------------------------------------------------------------------------------

GEN_IDS = ("triangle", "quad", "pentagon", "remark", "spike", "bipyramid", "lens")


def _need(args, name: str, default):
    v = getattr(args, name)
    return default if v is None else v


def _planar_expected(P: ConvexPolygon, marked: Sequence[int], bound: float) -> dict:
    diam = polygon_diameter(P)
    s = sum(P.angles[i] for i in marked)
    return {
        "marked": list(marked),
        "angle_sum": s,
        "angle_sum_text": format_angle(s),
        "bound": bound,
        "bound_text": format_angle(bound),
        "excess": s - bound,
        "diameter_length": diam.length,
        "diameter_pairs": [list(p) for p in diam.vertex_pairs],
        "unique_diameter": len(diam.vertex_pairs) == 1,
        "marked_diametral": sorted(set(marked) & set(diam.endpoint_indices)),
    }


def _solid_expected(T: ConvexPolytope, apexes: Sequence[int], closed_form: float | None) -> dict:
    diam = extrinsic_diameter(T)
    out = {
        "apexes": list(apexes),
        "apex_angles": [complete_angle(T, a) for a in apexes],
        "apex_angles_text": [format_angle(complete_angle(T, a)) for a in apexes],
        "diameter_length": diam.length,
        "diameter_pairs": [list(p) for p in diam.vertex_pairs],
    }
    if closed_form is not None:
        out["apex_angle_closed_form"] = closed_form
    return out


def generate(args) -> tuple[Any, dict, dict]:
    """Body, parameters and expected properties for a generator id."""
    kind = args.example
    if kind == "triangle":
        eps = _need(args, "eps", 0.01)
        P = gen.gen_sharp_triangle(eps)
        return P, {"eps": eps}, _planar_expected(P, [0], PLANAR_BOUNDS[1])
    if kind == "quad":
        eps = _need(args, "eps", 0.01)
        P, E = gen.gen_sharp_quad(eps)
        return P, {"eps": eps}, _planar_expected(P, E, PLANAR_BOUNDS[2])
    if kind == "pentagon":
        delta = _need(args, "delta", 0.05)
        P, E = gen.gen_sharp_pentagon(delta)
        return P, {"delta": delta}, _planar_expected(P, E, PLANAR_BOUNDS[3])
    if kind == "remark":
        n, k, delta = _need(args, "n", 4), _need(args, "k", 2), _need(args, "delta", 0.05)
        P, E = gen.gen_remark_polygon(n, k, delta)
        return P, {"n": n, "k": k, "delta": delta}, _planar_expected(P, E, (n - 2) * math.pi)
    if kind == "spike":
        base, h, r = _need(args, "base", 4), _need(args, "height", 10.0), _need(args, "radius", 1.0)
        T = gen.spike_pyramid(base, h, r)
        return T, {"base": base, "height": h, "radius": r}, _solid_expected(T, [base], gen.pyramid_apex_angle(base, h, r))
    if kind == "bipyramid":
        base, h = _need(args, "base", 6), _need(args, "height", 3.0)
        hb, r, jit = _need(args, "h_bottom", h), _need(args, "radius", 1.0), _need(args, "jitter", 0.0)
        T = gen.bipyramid(base, h, hb, r, jit, seed=gen.trial_rng(args.seed, 0))
        params = {"base": base, "height": h, "h_bottom": hb, "radius": r, "jitter": jit, "seed": args.seed}
        closed = gen.pyramid_apex_angle(base, h, r) if jit == 0 else None
        return T, params, _solid_expected(T, [base, base + 1], closed)
    if kind == "lens":
        n, h, rings = _need(args, "n", 8), _need(args, "height", 3.0), _need(args, "rings", 2)
        T = gen.symmetric_lens(n, h, rings)
        return T, {"n": n, "height": h, "rings": rings}, _solid_expected(T, [0, 1], gen.lens_apex_angle(n, h, rings))
    raise ConfigError(f"unknown example {kind!r}; choose from {', '.join(GEN_IDS)}")


def cmd_gen(args) -> tuple[dict, int]:
    body, params, expected = generate(args)
    ext = ".csv" if isinstance(body, ConvexPolygon) else ".off"
    out = Path(args.out or f"{args.example}{ext}")
    sidecar = out.with_suffix(".json")
    atomic_write(out, body_text(body))
    side = {"example": args.example, "params": params, "geometry": out.name, "expected": expected}
    atomic_write(sidecar, rpt.dumps(side))
    report = rpt.make_report("gen", {"example": args.example, **params}, [], [str(out), str(sidecar)],
                             result={"expected": expected})
    return report, EXIT_OK


# -- plot ------------------------------------------------------------------------------


def cmd_plot(args) -> tuple[dict, int]:
    body = load_geometry(args.geometry)
    rep = None
    if args.report:
        try:
            rep = json.loads(Path(args.report).read_text())
        except OSError as exc:
            raise ParseError(f"cannot read report: {exc.strerror}", None, args.report) from None
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, exc.lineno, args.report) from None
    geometry = (rep or {}).get("geometry", {})
    title = Path(args.geometry).name
    if isinstance(body, ConvexPolygon):
        marked = [int(i) for i in geometry.get("marked", []) if 0 <= int(i) < len(body)]
        svg = polygon_svg(body, marked, title)
    else:
        geo = geometry.get("geodesic")
        if not geo:
            raise Unplottable("3D bodies can only be plotted from a report containing a geodesic path")
        svg = unfolding_svg(geo["unfolded_faces"], geo["unfolded_segment"],
                            f"{title}: geodesic {geo['length']:.6f}")
    out = Path(args.out or Path(args.geometry).with_suffix(".svg").name)
    atomic_write(out, svg)
    return rpt.make_report("plot", {"geometry": str(args.geometry), "report": args.report}, [], [str(out)]), EXIT_OK


# -- entry point -----------------------------------------------------------------------


def _summary(report: dict, code: int) -> str:
    lines = []
    for c in report.get("checks", []):
        lines.append(f"{c['name']} [{c['anchor']}]: {c['verdict']}")
        if "hypothesis_holds" in c:
            lines.append(f"  hypothesis {'met' if c['hypothesis_holds'] else 'not met'}")
        for k, v in sorted(c.get("margins", {}).items()):
            if k in ("min_sees_angle",) and isinstance(v, float):
                lines.append(f"  {k} = {format_angle(v)}")
            else:
                lines.append(f"  {k} = {v}")
        det = c.get("details", {})
        if "inconclusive" in det:
            lines.append(f"  inconclusive = {det['inconclusive']}")
        if "violations" in det:
            lines.append(f"  violations = {det['violations']}")
    for job in report.get("jobs", []):
        lines.append(_summary(job, code).rstrip("\n"))
    geo = report.get("geometry", {})
    if "diameter" in geo:
        lines.append(f"diameter = {geo['diameter']['length']!r} pairs {geo['diameter']['pairs']}")
    if "extrinsic_diameter" in geo:
        lines.append(f"extrinsic diameter = {geo['extrinsic_diameter']['length']!r}")
    if "intrinsic_diameter" in geo:
        lines.append(f"intrinsic diameter ~ {geo['intrinsic_diameter']['value']!r}")
    for a in report.get("artifacts", []):
        lines.append(f"wrote {a}")
    lines.append("PASS" if code == EXIT_OK else "VIOLATION")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="master seed (unsigned 64-bit)")
    common.add_argument("--trials", type=int, default=None)
    common.add_argument("--steiner", type=int, default=None, help="Steiner points per edge")
    common.add_argument("--sampling", type=int, default=None, help="face-sampling density")
    common.add_argument("--tol-abs", type=float, default=1e-9)
    common.add_argument("--tol-diam", type=float, default=1e-7)
    common.add_argument("--out", default=None)
    common.add_argument("--json", action="store_true", help="print the JSON report")

    p = _Parser(prog="diametral", description="Diametral-point criteria for convex bodies.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    a = sub.add_parser("analyze", parents=[common], help="check the criteria on one body")
    a.add_argument("geometry", nargs="?")
    a.add_argument("--points", "-E", default="", help="e.g. '0,2' or 'v0;e3@0.5'")
    a.add_argument("--manifest", default=None, help="JSON file listing analyze jobs")
    v = sub.add_parser("verify", parents=[common], help="run a seeded verification suite")
    v.add_argument("suite")
    g = sub.add_parser("gen", parents=[common], help="write a construction and its expected properties")
    g.add_argument("example")
    for name, typ in (("eps", float), ("delta", float), ("n", int), ("k", int), ("base", int),
                      ("height", float), ("h-bottom", float), ("radius", float), ("jitter", float), ("rings", int)):
        g.add_argument(f"--{name}", type=typ, default=None)
    s = sub.add_parser("search", parents=[common], help="sharpness search or conjecture probe")
    s.add_argument("setting")
    pl = sub.add_parser("plot", parents=[common], help="SVG of a polygon or an unfolded geodesic")
    pl.add_argument("geometry")
    pl.add_argument("--report", default=None)
    return p


COMMANDS = {"analyze": cmd_analyze, "verify": cmd_verify, "gen": cmd_gen, "search": cmd_search, "plot": cmd_plot}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors (3) and --help (0)
        return int(exc.code or 0)
    try:
        _check_common(args)
        report, code = COMMANDS[args.command](args)
        if args.command in ("analyze", "verify", "search") and args.out:
            atomic_write(args.out, rpt.dumps(report))
    except (ParseError, BadPointSpec, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DiametralError, KeyError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    sys.stdout.write(rpt.dumps(report) if args.json else _summary(report, code))
    return code


if __name__ == "__main__":
    sys.exit(main())
