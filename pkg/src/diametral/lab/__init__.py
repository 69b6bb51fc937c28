"""Generators, seeded verification suites and search experiments."""

from .generators import (bipyramid, gen_remark_polygon, gen_sharp_pentagon, gen_sharp_quad, gen_sharp_triangle,
                         lens_apex_angle, polygon_bipyramid, pyramid_apex_angle, random_convex_polygon,
                         random_polytope, random_quadrilateral, random_symmetric_polygon,
                         random_symmetric_polytope, remark_angle_gap, spike_pyramid, symmetric_lens, trial_rng)
from .harness import SUITES, SearchReport, verify_theorem
from .search import SETTINGS, FarthestWitness, conjecture_probe, farthest_point_witness, sharpness_search

__all__ = [
    "SETTINGS", "SUITES", "FarthestWitness", "SearchReport", "bipyramid", "conjecture_probe",
    "farthest_point_witness", "gen_remark_polygon", "gen_sharp_pentagon", "gen_sharp_quad", "gen_sharp_triangle",
    "lens_apex_angle", "polygon_bipyramid", "pyramid_apex_angle", "random_convex_polygon", "random_polytope",
    "random_quadrilateral", "random_symmetric_polygon", "random_symmetric_polytope", "remark_angle_gap",
    "sharpness_search", "spike_pyramid", "symmetric_lens", "trial_rng", "verify_theorem",
]
