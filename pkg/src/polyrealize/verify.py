"""Exact certificates for realizations and for convex position.

Verification does not go through the search kernel: every pair is settled by
the rational triangle intersection in ``geometry``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

from .geometry import (
    GeneralPosition,
    GeometryError,
    SegmentOrContact,
    improper_from_segment,
    in_general_position,
    orient3d,
    triangle_intersection,
)
from .surface import SurfaceError, Triangulation, orient_faces, validate_surface

FacePair = Tuple[Tuple[int, int, int], Tuple[int, int, int]]


@dataclass(frozen=True)
class RealizationCertificate:
    general_position: GeneralPosition
    improper_pairs: Tuple[Tuple[FacePair, SegmentOrContact], ...]
    neighboring_noncoplanar: bool
    verdict: bool


@dataclass(frozen=True)
class ConvexityCertificate:
    verdict: bool
    violating: Tuple[Tuple[Tuple[int, int, int], int], ...] = ()


def _check_sizes(t: Triangulation, coords):
    if len(coords) != t.n:
        raise ValueError(f"expected {t.n} coordinates, got {len(coords)}")


def verify_realization(t: Triangulation, coords: Sequence) -> RealizationCertificate:
    """Is this a polyhedral realization: general position and no two faces
    meeting in anything but a common edge or vertex?"""
    _check_sizes(t, coords)
    pts = [tuple(p) for p in coords]
    gp = in_general_position(pts)

    noncoplanar = True
    for f, g in combinations(t.faces, 2):
        shared = set(f) & set(g)
        if len(shared) == 2:
            quad = sorted(set(f) | set(g))
            if orient3d(*(pts[x - 1] for x in quad)) == 0:
                noncoplanar = False
                break

    if not gp:
        return RealizationCertificate(gp, (), noncoplanar, False)

    bad = []
    for f, g in combinations(t.faces, 2):
        if len(set(f) & set(g)) >= 2:
            continue
        t1 = [pts[x - 1] for x in f]
        t2 = [pts[x - 1] for x in g]
        seg = triangle_intersection(t1, t2)
        if improper_from_segment(t1, t2, seg):
            bad.append(((f, g), seg))
    return RealizationCertificate(gp, tuple(bad), noncoplanar, not bad)


def convexity_certificate(t: Triangulation, coords: Sequence) -> ConvexityCertificate:
    """Every face plane must have all other vertices strictly on its inner side.

    Coordinates may be integers or Fractions. Faces are oriented consistently
    and turned outward by the sign of the enclosed signed volume.
    """
    info = validate_surface(t)
    if not info.orientable or info.genus != 0:
        raise SurfaceError("triangulation is not a 2-sphere")
    _check_sizes(t, coords)
    pts = [tuple(p) for p in coords]
    gp = in_general_position(pts)
    if not gp:
        raise GeometryError(f"coordinates not in general position: {gp.describe()}")

    faces = orient_faces(t)
    volume = 0
    for a, b, c in faces:
        p, q, r = pts[a - 1], pts[b - 1], pts[c - 1]
        volume += (p[0] * (q[1] * r[2] - q[2] * r[1])
                   + p[1] * (q[2] * r[0] - q[0] * r[2])
                   + p[2] * (q[0] * r[1] - q[1] * r[0]))
    if volume < 0:
        faces = tuple((a, c, b) for a, b, c in faces)

    violating = []
    for face in faces:
        a, b, c = (pts[x - 1] for x in face)
        for w in range(1, t.n + 1):
            if w in face:
                continue
            if orient3d(a, b, c, pts[w - 1]) >= 0:
                violating.append((face, w))
    return ConvexityCertificate(not violating, tuple(violating))
