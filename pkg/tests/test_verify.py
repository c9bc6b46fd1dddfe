import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from conftest import CONVEX_OCTAHEDRON
from polyrealize.functional import FunctionalMode, evaluate
from polyrealize.geometry import GeometryError
from polyrealize.search import SearchConfig, init_coordinates
from polyrealize.surface import SurfaceError, Triangulation, generate
from polyrealize.verify import convexity_certificate, verify_realization

BIPYRAMID = Triangulation(5, ((1, 2, 4), (2, 3, 4), (3, 1, 4), (1, 2, 5), (2, 3, 5), (3, 1, 5)))
BASE = [(0, 0, 0), (10, 1, 0), (1, 10, 0), (3, 3, 10)]


def random_coords(t, seed, cube):
    cfg = SearchConfig(initial_cube=cube, bounding_box=250)
    return init_coordinates(t, cfg, random.Random(seed))


def test_genus5_realized(genus5):
    cert = verify_realization(*genus5)
    assert cert.verdict and cert.general_position and not cert.improper_pairs
    assert cert.neighboring_noncoplanar


def test_local_minimum_not_realized(minimum_case):
    cert = verify_realization(*minimum_case)
    assert not cert.verdict
    assert cert.improper_pairs
    (f, g), seg = cert.improper_pairs[0]
    assert seg.kind == "segment"


def test_degenerate_not_realized(tetrahedron):
    cert = verify_realization(tetrahedron, [(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)])
    assert not cert.verdict and not cert.general_position
    assert cert.general_position.violation == (1, 2, 3, 4)
    assert not cert.neighboring_noncoplanar


def test_size_mismatch(tetrahedron):
    with pytest.raises(ValueError):
        verify_realization(tetrahedron, [(0, 0, 0)])


def test_convexity_examples(tetrahedron, octahedron, minimum_case):
    for seed in range(10):
        assert convexity_certificate(tetrahedron, random_coords(tetrahedron, seed, 20)).verdict
    outside = convexity_certificate(BIPYRAMID, BASE + [(3, 4, -9)])
    assert outside.verdict
    pushed = convexity_certificate(BIPYRAMID, BASE + [(3, 2, 1)])
    assert not pushed.verdict and pushed.violating
    assert not convexity_certificate(*minimum_case).verdict
    assert convexity_certificate(octahedron, CONVEX_OCTAHEDRON).verdict


def test_convexity_errors(torus7, octahedron):
    with pytest.raises(SurfaceError):
        convexity_certificate(torus7, random_coords(torus7, 0, 50))
    flat = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1), (5, 3, 2)]
    with pytest.raises(GeometryError):
        convexity_certificate(octahedron, flat)


def test_rational_coordinates(tetrahedron):
    pts = [(F(0), F(0), F(0)), (F(1, 2), F(0), F(0)), (F(0), F(1, 3), F(0)), (F(1, 7), F(1, 7), F(1, 5))]
    assert convexity_certificate(tetrahedron, pts).verdict
    assert verify_realization(tetrahedron, pts).verdict


@given(st.integers(0, 10 ** 6), st.sampled_from(["octahedron", "moebius_torus"]))
@settings(max_examples=150)
def test_strict_zero_iff_verified(seed, kind):
    t = generate(kind)
    coords = random_coords(t, seed, 8 if kind == "octahedron" else 25)
    value, _ = evaluate(t, coords, FunctionalMode("strict"))
    assert value.exactly_zero == verify_realization(t, coords).verdict


@given(st.integers(0, 10 ** 6))
@settings(max_examples=150)
def test_extended_zero_iff_convex(seed):
    t = generate("octahedron")
    coords = random_coords(t, seed, 6)
    value, _ = evaluate(t, coords, FunctionalMode("strict", extended=True))
    cert = convexity_certificate(t, coords)
    assert value.exactly_zero == cert.verdict
    if cert.verdict:
        assert verify_realization(t, coords).verdict
