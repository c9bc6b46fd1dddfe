"""Polyhedral realizations of triangulated surfaces with small integer coordinates."""

__version__ = "0.1.0"

from ._backend import BACKEND
from .functional import FunctionalMode, FunctionalValue, PairCache, evaluate, evaluate_after_move
from .geometry import GeometryError, in_general_position, orient3d, triangle_intersection
from .search import RunReport, SearchConfig, reinsert_vertices, run_convexify, run_realize
from .surface import (
    ParseError,
    SurfaceError,
    Triangulation,
    generate,
    heawood_min_vertices,
    parse_triangulation,
    validate_surface,
)
from .verify import convexity_certificate, verify_realization

__all__ = [
    "BACKEND",
    "FunctionalMode",
    "FunctionalValue",
    "GeometryError",
    "PairCache",
    "ParseError",
    "RunReport",
    "SearchConfig",
    "SurfaceError",
    "Triangulation",
    "convexity_certificate",
    "evaluate",
    "evaluate_after_move",
    "generate",
    "heawood_min_vertices",
    "in_general_position",
    "orient3d",
    "parse_triangulation",
    "reinsert_vertices",
    "run_convexify",
    "run_realize",
    "triangle_intersection",
    "validate_surface",
    "verify_realization",
]
