import os
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from polyrealize.io import parse_coordinates
from polyrealize.surface import Triangulation, generate, parse_triangulation

sys.path.insert(0, str(Path(__file__).parent))

DATA = Path(__file__).parent / "data"

settings.register_profile("default", deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# six-vertex real projective plane (half of the icosahedron, antipodes glued)
RP2_FACES = ((1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 6, 2),
             (2, 3, 5), (3, 4, 6), (4, 5, 2), (5, 6, 3), (6, 2, 4))

# positions for the octahedron with every vertex extreme
CONVEX_OCTAHEDRON = [(10, 1, 2), (1, 10, 0), (2, 0, 10), (0, 1, -10), (1, -10, 2), (-10, 2, 1)]


def load_faces(name: str) -> Triangulation:
    return parse_triangulation((DATA / f"{name}.faces").read_text())


def load_coords(name: str, n: int):
    return parse_coordinates((DATA / f"{name}.coords").read_text(), n)


@pytest.fixture
def octahedron():
    return generate("octahedron")


@pytest.fixture
def tetrahedron():
    return generate("simplex_boundary")


@pytest.fixture
def torus7():
    return generate("moebius_torus")


@pytest.fixture
def minimum_case():
    t = load_faces("octahedron_min")
    return t, load_coords("octahedron_min", t.n)


@pytest.fixture
def genus5():
    t = load_faces("genus5")
    return t, load_coords("genus5", t.n)


@pytest.fixture
def rp2():
    return Triangulation(6, RP2_FACES)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for num in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[num])
