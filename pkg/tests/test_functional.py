import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import CONVEX_OCTAHEDRON
from polyrealize.functional import (
    FunctionalMode,
    PairCache,
    build_pair_table,
    evaluate,
    evaluate_after_move,
    total_edge_length,
)
from polyrealize.geometry import GeometryError
from polyrealize.search import SearchConfig, init_coordinates
from polyrealize.surface import generate

PAPER = FunctionalMode("paper")
STRICT = FunctionalMode("strict")
DISJOINT = FunctionalMode("disjoint")
EXTENDED = FunctionalMode("strict", extended=True)

DIRS = ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1))


def random_coords(t, seed, cube=50):
    cfg = SearchConfig(initial_cube=cube, bounding_box=max(cube, 250))
    return init_coordinates(t, cfg, random.Random(seed))


def test_local_minimum_value(minimum_case):
    t, coords = minimum_case
    value, _ = evaluate(t, coords, PAPER)
    assert value.value == pytest.approx(3.17, abs=0.01)
    assert not value.exactly_zero and value.improper_pair_count > 0


def test_genus5_is_zero(genus5):
    t, coords = genus5
    value, _ = evaluate(t, coords, STRICT)
    assert value.exactly_zero and value.value == 0.0 and value.improper_pair_count == 0


def test_tetrahedron_always_zero(tetrahedron):
    for seed in range(20):
        value, _ = evaluate(tetrahedron, random_coords(tetrahedron, seed), STRICT)
        assert value.exactly_zero


def test_pair_table_classes(octahedron, torus7):
    table = build_pair_table(octahedron, extended=True)
    classes = [row[1] for row in table.rows]
    # octahedron: 4 opposite face pairs, 12 pairs meeting at one vertex
    assert classes.count(0) == 4 and classes.count(1) == 12
    assert len(table.triangles) == 8 + 12
    table = build_pair_table(torus7)
    # every pair of the 14 faces except the 21 edge-sharing ones
    assert len(table.rows) == 14 * 13 // 2 - 21


@given(st.integers(0, 10 ** 6), st.tuples(*[st.integers(-40, 40)] * 3))
@settings(max_examples=40)
def test_translation_invariance(seed, d):
    t = generate("moebius_torus")
    coords = random_coords(t, seed)
    moved = [tuple(p[k] + d[k] for k in range(3)) for p in coords]
    for mode in (PAPER, DISJOINT):
        a, _ = evaluate(t, coords, mode)
        b, _ = evaluate(t, moved, mode)
        assert a.improper_pair_count == b.improper_pair_count
        assert a.value == pytest.approx(b.value, rel=1e-12)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=40)
def test_pair_sets_are_monotone(seed):
    t = generate("octahedron")
    coords = random_coords(t, seed, cube=12)
    d, _ = evaluate(t, coords, DISJOINT)
    p, _ = evaluate(t, coords, PAPER)
    s, _ = evaluate(t, coords, STRICT)
    e, _ = evaluate(t, coords, EXTENDED)
    assert 0 <= d.value <= p.value <= s.value <= e.value
    assert d.improper_pair_count <= p.improper_pair_count <= e.improper_pair_count


@given(st.integers(0, 10 ** 6))
@settings(max_examples=40)
def test_normalized_shares_flags(seed):
    t = generate("moebius_torus")
    coords = random_coords(t, seed, cube=15)
    raw, _ = evaluate(t, coords, PAPER)
    norm, _ = evaluate(t, coords, FunctionalMode("paper", normalized=True))
    assert raw.exactly_zero == norm.exactly_zero
    assert norm.value == pytest.approx(raw.value / total_edge_length(t, coords), rel=1e-12)


def test_convex_octahedron_extended_zero(octahedron):
    value, _ = evaluate(octahedron, CONVEX_OCTAHEDRON, EXTENDED)
    assert value.exactly_zero


def test_errors(octahedron):
    flat = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1), (5, 3, 2)]
    with pytest.raises(GeometryError, match="coplanar quadruple"):
        evaluate(octahedron, flat)
    with pytest.raises(ValueError):
        evaluate(octahedron, CONVEX_OCTAHEDRON[:5])


def test_revert_restores_exactly(torus7):
    coords = random_coords(torus7, 2)
    cache = PairCache(torus7, coords, PAPER)
    before = (cache.functional(), cache.pair_state(), cache.coords)
    value, delta = evaluate_after_move(cache, 3, tuple(c + 1 for c in coords[3]))
    assert value is not None
    cache.revert(delta)
    assert (cache.functional(), cache.pair_state(), cache.coords) == before


def test_stale_delta(torus7):
    cache = PairCache(torus7, random_coords(torus7, 3), PAPER)
    staged = []
    for v, (x, y, z) in enumerate(cache.coords):
        for dx, dy, dz in DIRS:
            delta = cache.propose(v, (x + dx, y + dy, z + dz))
            if delta is not None:
                staged.append(delta)
                break
        if len(staged) == 2:
            break
    with pytest.raises(RuntimeError):
        cache.apply(staged[0])
    cache.apply(staged[1])


def test_move_outside_box_or_degenerate(torus7):
    coords = random_coords(torus7, 4)
    cache = PairCache(torus7, coords, PAPER, box=(0, 250))
    assert cache.propose(0, (-1, 0, 0)) is None
    # onto the midpoint of two other vertices (made even so it is a lattice point)
    a, b = coords[1], coords[2]
    mid = tuple((a[k] + b[k]) // 2 for k in range(3))
    if all((a[k] + b[k]) % 2 == 0 for k in range(3)):
        assert cache.propose(0, mid) is None


@given(st.integers(0, 10 ** 6), st.booleans())
@settings(max_examples=15)
def test_incremental_matches_full(seed, extended):
    t = generate("octahedron" if extended else "moebius_torus")
    mode = FunctionalMode("paper", extended=extended)
    rng = random.Random(seed)
    coords = random_coords(t, seed, cube=20)
    cache = PairCache(t, coords, mode, box=(0, 250))
    for _ in range(60):
        v = rng.randrange(t.n)
        d = DIRS[rng.randrange(6)]
        p = cache.coords[v]
        if rng.random() < 0.1:
            delta = cache.propose_swap(v, (v + 1) % t.n)
        else:
            delta = cache.propose(v, (p[0] + d[0], p[1] + d[1], p[2] + d[2]))
        if delta is None:
            continue
        fresh, _ = evaluate(t, _staged_coords(cache, delta), mode)
        assert delta.value.improper_pair_count == fresh.improper_pair_count
        assert delta.value.value == pytest.approx(fresh.value, rel=1e-9, abs=1e-12)
        if rng.random() < 0.5:
            cache.apply(delta)
        else:
            cache.revert(delta)
        full, _ = evaluate(t, cache.coords, mode)
        now = cache.functional()
        assert now.improper_pair_count == full.improper_pair_count
        assert now.value == pytest.approx(full.value, rel=1e-9, abs=1e-12)


def _staged_coords(cache, delta):
    coords = list(cache.coords)
    for v, p in delta.moves:
        coords[v] = p
    return coords
