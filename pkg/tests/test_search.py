import math

import pytest

from diametral.core import HypothesisNotMet, InvalidSetting, Verdict
from diametral.lab import SETTINGS, conjecture_probe, farthest_point_witness, sharpness_search
from diametral.lab.generators import spike_pyramid
from diametral.planar import PLANAR_BOUNDS
from diametral.report import dumps
from diametral.solid import SOLID_BOUNDS, cube, regular_tetrahedron


def test_settings():
    assert sorted(SETTINGS) == sorted(f"{k}-{i}" for k in ("planar", "solid", "surface") for i in (1, 2, 3))
    with pytest.raises(InvalidSetting):
        sharpness_search("planar-4")


@pytest.mark.parametrize("setting", ["planar-1", "planar-2", "planar-3"])
def test_planar_search_approaches_bound(setting):
    r = sharpness_search(setting, iterations=60, seed=0)
    k = SETTINGS[setting][1]
    assert r.passed
    best = r.best_sharpness
    assert best["bound"] == PLANAR_BOUNDS[k]
    assert 0 < best["gap"] < 0.05


@pytest.mark.parametrize("setting", ["solid-1", "solid-2"])
def test_solid_search(setting):
    r = sharpness_search(setting, iterations=40, seed=0)
    assert r.passed
    assert r.best_sharpness["gap"] > 0
    assert r.best_sharpness["bound"] == SOLID_BOUNDS[SETTINGS[setting][1]]


def test_surface_search_runs():
    r = sharpness_search("surface-1", iterations=4, restarts=2, seed=0, m=2, density=2)
    assert r.passed
    assert r.settings["m"] == 2


def test_search_deterministic():
    a = sharpness_search("planar-2", iterations=30, seed=5).to_dict(timing=False)
    b = sharpness_search("planar-2", iterations=30, seed=5).to_dict(timing=False)
    assert dumps(a) == dumps(b)


def test_conjecture_probe_small():
    r = conjecture_probe(60, seed=3)
    assert r.passed
    assert sum(v for k, v in r.counts.items() if k.startswith("pairs_")) > 0
    assert all(n["kind"] == "potential_refutation" and 3 * math.pi / 2 < n["angle_sum"] for n in r.notes)


def test_conjecture_probe_flags_broken_oracle():
    r = conjecture_probe(40, seed=3, diametral_fn=lambda T: frozenset())
    assert not r.passed
    assert all(v["verdict"] == "bug" and v["detail"]["angle_sum"] <= 3 * math.pi / 2 + 1e-9 for v in r.violations)


def test_farthest_witness():
    w = farthest_point_witness(regular_tetrahedron(), 0)
    assert w.verdict is Verdict.HOLDS
    w = farthest_point_witness(spike_pyramid(4, 8.0), 4)
    assert w.verdict is Verdict.HOLDS and w.distance >= w.farthest - w.slack
    with pytest.raises(HypothesisNotMet):
        farthest_point_witness(cube(), 0)
