import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from polyrealize.io import dumps_report, format_coordinates, format_off, parse_coordinates, parse_off
from polyrealize.surface import ParseError, generate

coord = st.integers(-10 ** 6, 10 ** 6) | st.fractions(max_denominator=50)


@given(st.lists(st.tuples(coord, coord, coord), min_size=1, max_size=20))
def test_coordinates_roundtrip(rows):
    back = parse_coordinates(format_coordinates(rows), len(rows))
    assert [tuple(Fraction(x) for x in r) for r in back] == [tuple(Fraction(x) for x in r) for r in rows]


def test_coordinate_types():
    rows = parse_coordinates("# header\n1 2 3\n1/2 -4 6/3\n")
    assert rows == [(1, 2, 3), (Fraction(1, 2), -4, 2)]
    assert type(rows[1][2]) is int


@pytest.mark.parametrize("text", ["1 2\n", "1 2 x\n", "1 2 3/0\n", "1.5 2 3\n"])
def test_coordinate_errors(text):
    with pytest.raises(ParseError):
        parse_coordinates(text)


def test_coordinate_count():
    with pytest.raises(ParseError, match="expected 3 coordinate rows"):
        parse_coordinates("1 2 3\n", 3)


def test_off_export(torus7):
    coords = [(i, i * i, 3 * i + 1) for i in range(7)]
    text = format_off(torus7, coords)
    assert text.startswith("OFF\n7 14 0\n")
    verts, faces = parse_off(text)
    assert len(verts) == 7 and len(faces) == 14
    assert all(len(f) == 3 and all(0 <= x < 7 for x in f) for f in faces)
    # consistent orientation: every directed edge appears once
    directed = [(f[i], f[(i + 1) % 3]) for f in faces for i in range(3)]
    assert len(set(directed)) == len(directed)


def test_off_rationals():
    t = generate("simplex_boundary")
    coords = [(0, 0, 0), (Fraction(1, 2), 0, 0), (0, 1, 0), (0, 0, 1)]
    verts, _ = parse_off(format_off(t, coords))
    assert verts[1] == (0.5, 0.0, 0.0)


def test_report_floats():
    text = dumps_report({"x": 0.1, "y": [1.0, 2], "z": Fraction(1, 3), "w": None, "b": True})
    assert '"x": 0.10000000000000001' in text
    assert '"z": "1/3"' in text
    data = json.loads(text)
    assert data["y"] == [1.0, 2] and isinstance(data["y"][0], float)
    assert data["w"] is None and data["b"] is True


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_report_float_roundtrip(x):
    assert json.loads(dumps_report({"v": x}))["v"] == x


def test_report_rejects_objects():
    with pytest.raises(TypeError):
        dumps_report({"x": object()})
