import json
import math

import jsonschema
import pytest

from diametral.core import Unplottable
from diametral.lab.generators import gen_sharp_pentagon
from diametral.planar import ConvexPolygon
from diametral.report import angle_record, check, dumps, load_schema, make_report, strip_timing, validate
from diametral.svg import polygon_svg, unfolding_svg


def test_schema_is_valid_draft():
    jsonschema.Draft202012Validator.check_schema(load_schema())


def test_make_report_validates():
    rep = make_report("analyze", {"input": "a.csv"}, [check("c", "anchor", "holds", {"m": 1.0}, True, extra=[1])],
                      ["b.svg", "a.svg"], timing={"seconds": 1.0})
    validate(rep)
    assert rep["artifacts"] == ["a.svg", "b.svg"]
    assert "timing" not in strip_timing(rep)


def test_report_rejects_unknown_keys():
    rep = make_report("analyze", {}, [])
    rep["surprise"] = 1
    with pytest.raises(jsonschema.ValidationError):
        validate(rep)


def test_report_rejects_bad_verdict():
    rep = make_report("analyze", {}, [check("c", "a", "maybe")])
    with pytest.raises(jsonschema.ValidationError):
        validate(rep)


def test_dumps_canonical():
    a = dumps({"b": 1, "a": [float("inf"), 2.5]})
    assert a == dumps(json.loads(a))
    assert a.endswith("\n") and a.index('"a"') < a.index('"b"')
    assert '"inf"' in a


def test_angle_record():
    r = angle_record(5 * math.pi / 6)
    assert r["radians"] == 5 * math.pi / 6
    assert r["text"].endswith("(5π/6)")


def test_square_svg_has_both_diagonals():
    P = ConvexPolygon([(0, 0), (1, 0), (1, 1), (0, 1)])
    svg = polygon_svg(P, [0], "square")
    assert svg.count('stroke="#c62828"') == 2
    assert "v0: 1.570796326795 (π/2)" in svg
    assert svg == polygon_svg(P, [0], "square")


def test_pentagon_svg_unique_diameter():
    P, marked = gen_sharp_pentagon(0.05)
    svg = polygon_svg(P, marked)
    assert svg.count('stroke="#c62828"') == 1
    assert svg.count("<circle") == 3


def test_unfolding_svg():
    faces = [((0, 0), (1, 0), (1, 1), (0, 1)), ((0, 1), (1, 1), (1, 2), (0, 2))]
    svg = unfolding_svg(faces, [(0, 0), (1, 2)])
    assert svg.count("<polygon") == 2 and svg.count("<line") == 1
    with pytest.raises(Unplottable):
        unfolding_svg([], [])
