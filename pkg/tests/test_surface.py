from math import comb

import pytest
from hypothesis import given, strategies as st

from polyrealize.surface import (
    ParseError,
    SurfaceError,
    Triangulation,
    format_triangulation,
    generate,
    heawood_min_vertices,
    is_isomorphic,
    is_neighborly,
    non_face_triangles,
    orient_faces,
    parse_triangulation,
    reduce_degree3,
    replay_records,
    subdivide,
    validate_surface,
    vertex_link,
)

OCTA_TEXT = "6 8\n1 2 3\n1 2 4\n1 3 5\n1 4 5\n2 3 6\n2 4 6\n3 5 6\n4 5 6"


def same_cycle(cycle, expected):
    n = len(expected)
    if len(cycle) != n:
        return False
    rots = [tuple(expected[i:] + expected[:i]) for i in range(n)]
    rev = list(reversed(expected))
    rots += [tuple(rev[i:] + rev[:i]) for i in range(n)]
    return tuple(cycle) in rots


def euler_ok(t):
    info = validate_surface(t)
    chi = info.euler_characteristic
    n, f1, f2 = info.f_vector
    return f1 == 3 * n - 3 * chi and f2 == 2 * n - 2 * chi and 2 * f1 == 3 * f2


# -- parsing ------------------------------------------------------------------


def test_parse_octahedron(octahedron):
    t = parse_triangulation(OCTA_TEXT)
    assert t.n == 6 and len(t.faces) == 8
    assert is_isomorphic(t, octahedron)


def test_parse_tetrahedron():
    t = parse_triangulation("4 4\n1 2 3\n1 2 4\n1 3 4\n2 3 4")
    assert validate_surface(t).f_vector == (4, 6, 4)


def test_parse_comments_and_crlf():
    t = parse_triangulation("# tetra\r\n4 4 # header\r\n1 2 3\r\n1 2 4\r\n\r\n1 3 4\r\n2 3 4\r\n")
    assert len(t.faces) == 4


@pytest.mark.parametrize("text,needle", [
    ("3 1\n1 2 2", "repeated"),
    ("4 4\n1 2 3\n1 2 4\n1 3 4\n3 2 1", "duplicate"),
    ("4 4\n1 2 3\n1 2 4\n1 3 4\n2 3 5", "range"),
    ("4 4\n1 2 3\n1 2 4\n1 3 4", "expected"),
    ("4 4\n1 2 x\n1 2 4\n1 3 4\n2 3 4", "line 2"),
])
def test_parse_errors(text, needle):
    with pytest.raises(ParseError) as exc:
        parse_triangulation(text)
    assert needle in str(exc.value)


def test_parse_error_position():
    with pytest.raises(ParseError) as exc:
        parse_triangulation("4 4\n1 2 3\n1 2 four\n1 3 4\n2 3 4")
    assert exc.value.line == 3 and exc.value.column == 5


def test_roundtrip_format():
    t = generate("standard_torus", 3, 4)
    assert parse_triangulation(format_triangulation(t)) == t


# -- validation ------------------------------------------------------------------


def test_validate_octahedron(octahedron):
    info = validate_surface(octahedron)
    assert info.f_vector == (6, 12, 8)
    assert info.euler_characteristic == 2 and info.genus == 0
    assert info.orientable and info.connected and info.min_degree == 4


def test_validate_torus7(torus7):
    info = validate_surface(torus7)
    assert info.f_vector == (7, 21, 14)
    assert info.euler_characteristic == 0 and info.genus == 1


def test_validate_genus5(genus5):
    t, _ = genus5
    info = validate_surface(t)
    assert info.f_vector == (12, 60, 40)
    assert info.euler_characteristic == -8 and info.genus == 5


def test_rp2_non_orientable(rp2):
    info = validate_surface(rp2)
    assert not info.orientable and info.genus is None
    assert info.euler_characteristic == 1
    assert orient_faces(rp2) is None
    assert is_neighborly(rp2)


def test_orientable_examples(octahedron, torus7, genus5):
    for t in (octahedron, torus7, genus5[0], generate("standard_torus", 3, 10)):
        assert validate_surface(t).orientable


def test_non_manifold_edge():
    # two tetrahedra glued along one edge: edge (1,2) lies in four triangles
    faces = [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4),
             (1, 2, 5), (1, 2, 6), (1, 5, 6), (2, 5, 6)]
    with pytest.raises(SurfaceError, match=r"non-manifold edge \(1,2\)"):
        validate_surface(Triangulation(6, tuple(faces)))


def test_open_surface_rejected():
    with pytest.raises(SurfaceError, match="non-manifold edge"):
        validate_surface(Triangulation(4, ((1, 2, 3), (1, 2, 4), (1, 3, 4))))


def test_pinched_vertex():
    # two tetrahedra sharing only vertex 1
    faces = [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4),
             (1, 5, 6), (1, 5, 7), (1, 6, 7), (5, 6, 7)]
    with pytest.raises(SurfaceError, match="pinched vertex"):
        validate_surface(Triangulation(7, tuple(faces)))


def test_disconnected():
    faces = [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4),
             (5, 6, 7), (5, 6, 8), (5, 7, 8), (6, 7, 8)]
    with pytest.raises(SurfaceError, match="disconnected"):
        validate_surface(Triangulation(8, tuple(faces)))


def test_orientation_is_consistent(torus7):
    faces = orient_faces(torus7)
    directed = set()
    for a, b, c in faces:
        for e in ((a, b), (b, c), (c, a)):
            assert e not in directed
            directed.add(e)


# -- invariants and counts -----------------------------------------------------------


@pytest.mark.parametrize("chi,expected", [(2, 4), (0, 7), (-2, 9), (-4, 10), (-6, 11), (-8, 12), (-10, 12)])
def test_heawood(chi, expected):
    assert heawood_min_vertices(chi) == expected


@given(st.integers(min_value=-400, max_value=2))
def test_heawood_is_ceiling(chi):
    n = heawood_min_vertices(chi)
    # n is the least integer with (2n - 7)^2 >= 49 - 24 chi and 2n >= 7
    assert 2 * n - 7 >= 0 and (2 * n - 7) ** 2 >= 49 - 24 * chi
    assert 2 * (n - 1) - 7 < 0 or (2 * (n - 1) - 7) ** 2 < 49 - 24 * chi


def test_neighborly(octahedron, torus7, genus5):
    assert is_neighborly(torus7)
    assert not is_neighborly(octahedron)
    assert not is_neighborly(genus5[0])
    assert len(genus5[0].edges()) == 60 < comb(12, 2)


def test_links(octahedron, tetrahedron, genus5):
    assert same_cycle(vertex_link(octahedron, 1), [2, 3, 5, 4])
    assert same_cycle(vertex_link(tetrahedron, 4), [1, 2, 3])
    assert same_cycle(vertex_link(genus5[0], 1), [2, 3, 5, 7, 9, 10, 8, 6, 4])


def test_subdivide_counts(tetrahedron, octahedron):
    assert validate_surface(subdivide(tetrahedron, (1, 2, 3))).f_vector == (5, 9, 6)
    assert validate_surface(subdivide(tetrahedron, (1, 2))).f_vector == (5, 9, 6)
    info = validate_surface(subdivide(octahedron, (4, 5, 6)))
    assert info.f_vector == (7, 15, 10) and info.euler_characteristic == 2


def test_subdivide_missing_target(octahedron):
    with pytest.raises(SurfaceError):
        subdivide(octahedron, (1, 2, 6))
    with pytest.raises(SurfaceError):
        subdivide(octahedron, (1, 6))


def test_generators():
    t = generate("standard_torus", 3, 10)
    info = validate_surface(t)
    assert info.f_vector == (30, 90, 60) and info.genus == 1
    assert is_isomorphic(generate("octahedron"), parse_triangulation(OCTA_TEXT))
    assert validate_surface(generate("simplex_boundary")).f_vector == (4, 6, 4)
    with pytest.raises(SurfaceError):
        generate("standard_torus", 2, 5)
    with pytest.raises(SurfaceError):
        generate("klein_bottle")


@given(st.integers(3, 7), st.integers(3, 7))
def test_standard_torus_counts(a, b):
    t = generate("standard_torus", a, b)
    info = validate_surface(t)
    assert info.f_vector == (a * b, 3 * a * b, 2 * a * b)
    assert info.genus == 1 and euler_ok(t)


@st.composite
def subdivided(draw, base):
    t = base
    for _ in range(draw(st.integers(0, 6))):
        if draw(st.booleans()):
            target = draw(st.sampled_from(t.faces))
        else:
            target = draw(st.sampled_from(sorted(t.edges())))
        t = subdivide(t, target)
    return t


@given(st.sampled_from(["octahedron", "simplex_boundary", "moebius_torus"]).flatmap(
    lambda k: subdivided(generate(k))))
def test_subdivision_preserves_topology(t):
    info = validate_surface(t)
    assert info.orientable and info.connected
    assert euler_ok(t)


@given(subdivided(generate("octahedron")))
def test_reduce_then_replay_is_isomorphic(t):
    red = reduce_degree3(t)
    assert not red.stuck
    assert is_isomorphic(replay_records(red), t)
    info = validate_surface(red.triangulation)
    assert red.triangulation.n == 4 or info.min_degree >= 4


def test_reduce_examples(tetrahedron, octahedron):
    red = reduce_degree3(tetrahedron)
    assert red.triangulation.face_sets == tetrahedron.face_sets and red.records == ()
    red = reduce_degree3(octahedron)
    assert is_isomorphic(red.triangulation, octahedron) and red.records == ()
    red = reduce_degree3(subdivide(octahedron, (1, 2, 3)))
    assert is_isomorphic(red.triangulation, octahedron)
    assert len(red.records) == 1
    rec = red.records[0]
    assert rec.removed_vertex == 7 and set(rec.link_triangle) == {1, 2, 3}


def test_reduce_requires_sphere(torus7):
    with pytest.raises(SurfaceError):
        reduce_degree3(torus7)


def test_non_face_triangles(tetrahedron, octahedron):
    assert non_face_triangles(tetrahedron) == []
    nf = non_face_triangles(octahedron)
    assert len(nf) == 12 and (1, 2, 6) in nf
    assert nf == sorted(nf)


def test_triangulation_invariants():
    with pytest.raises(SurfaceError):
        Triangulation(5, ((1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)))  # vertex 5 unused
