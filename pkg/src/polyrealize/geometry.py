"""Exact predicates and triangle/triangle intersection on integer grid points.

Every verdict here (collinearity, coplanarity, whether two triangles cross
improperly) is decided in integer or rational arithmetic. Floating point only
appears in reported lengths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence, Tuple

from . import _backend

Point = Tuple[int, int, int]
RationalPoint = Tuple[Fraction, Fraction, Fraction]


class GeometryError(ValueError):
    """Degenerate input that the exact kernel refuses to handle."""


def _sub(p, q):
    return (p[0] - q[0], p[1] - q[1], p[2] - q[2])


def _cross(u, v):
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def _dot(u, v):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def orient3d(p, q, r, s) -> int:
    """Sign of det(q - p, r - p, s - p).

    Works for ints and Fractions alike; no rounding is involved.
    """
    return _sign(_dot(_cross(_sub(q, p), _sub(r, p)), _sub(s, p)))


def collinear(p, q, r) -> bool:
    return _cross(_sub(q, p), _sub(r, p)) == (0, 0, 0)


@dataclass(frozen=True)
class GeneralPosition:
    """Outcome of a general-position check.

    ``violation`` holds 1-based indices of the first collinear triple, or if
    there is none, the first coplanar quadruple (lexicographic order).
    """

    ok: bool
    violation: Optional[Tuple[int, ...]] = None

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "general position"
        kind = "collinear triple" if len(self.violation) == 3 else "coplanar quadruple"
        return f"{kind} ({','.join(map(str, self.violation))})"


def in_general_position(points: Sequence) -> GeneralPosition:
    """Full O(n^4) check that no three points are collinear and no four coplanar."""
    pts = [tuple(p) for p in points]
    for idx in combinations(range(len(pts)), 3):
        if collinear(*(pts[i] for i in idx)):
            return GeneralPosition(False, tuple(i + 1 for i in idx))
    for idx in combinations(range(len(pts)), 4):
        if orient3d(*(pts[i] for i in idx)) == 0:
            return GeneralPosition(False, tuple(i + 1 for i in idx))
    return GeneralPosition(True)


def general_position_after_move(points: Sequence[Point], v: int, newpos: Point) -> bool:
    """Check only the triples and quadruples through vertex ``v`` (0-based).

    Assumes the remaining points are already in general position.
    """
    return _backend.point_in_general_position(points, v, tuple(newpos))


# -- triangle / triangle intersection ---------------------------------------


@dataclass(frozen=True)
class SegmentOrContact:
    kind: str  # "empty" | "point" | "segment"
    endpoints: Tuple[RationalPoint, ...] = ()

    @property
    def squared_length(self) -> Fraction:
        if self.kind != "segment":
            return Fraction(0)
        p, q = self.endpoints
        d = _sub(q, p)
        return _dot(d, d)

    @property
    def length(self) -> float:
        return math.sqrt(self.squared_length)

    def same_as(self, other: "SegmentOrContact") -> bool:
        """Equality up to endpoint order."""
        if self.kind != other.kind:
            return False
        return set(self.endpoints) == set(other.endpoints)


EMPTY = SegmentOrContact("empty")


def _clip_interval(tri, normal, base_num, den, direction):
    """Parameter interval {t : base + t*direction lies in the closed triangle}.

    The line must lie in the triangle's plane. ``base = base_num / den`` with
    ``den > 0``. Returns (lo, hi) as Fractions (None for unbounded) or None
    if the interval is empty.
    """
    lo = hi = None
    for k in range(3):
        u, w, z = tri[k], tri[(k + 1) % 3], tri[(k + 2) % 3]
        edge = _sub(w, u)
        side = _sign(_dot(_cross(edge, _sub(z, u)), normal))
        # den * g(t) = alpha + beta * t, where g >= 0 on z's side
        scaled_u = (u[0] * den, u[1] * den, u[2] * den)
        alpha = side * _dot(_cross(edge, _sub(base_num, scaled_u)), normal)
        beta = side * den * _dot(_cross(edge, direction), normal)
        if beta == 0:
            if alpha < 0:
                return None
            continue
        bound = Fraction(-alpha, beta)
        if beta > 0:
            lo = bound if lo is None else max(lo, bound)
        else:
            hi = bound if hi is None else min(hi, bound)
    if lo is not None and hi is not None and lo > hi:
        return None
    return lo, hi


def triangle_intersection(t1: Sequence[Point], t2: Sequence[Point]) -> SegmentOrContact:
    """Exact intersection of two closed, non-coplanar triangles.

    Both triangles are cut with the common line of their supporting planes;
    the overlap of the two parameter intervals is the answer.
    """
    t1 = [tuple(p) for p in t1]
    t2 = [tuple(p) for p in t2]
    n1 = _cross(_sub(t1[1], t1[0]), _sub(t1[2], t1[0]))
    n2 = _cross(_sub(t2[1], t2[0]), _sub(t2[2], t2[0]))
    if n1 == (0, 0, 0) or n2 == (0, 0, 0):
        raise GeometryError("degenerate triangle")

    # cheap exact rejection: one triangle strictly on one side of the other's plane
    s1 = {_sign(_dot(n2, _sub(p, t2[0]))) for p in t1}
    s2 = {_sign(_dot(n1, _sub(p, t1[0]))) for p in t2}
    if s1 == {0}:
        raise GeometryError("coplanar triangle pair")
    if s1 in ({1}, {-1}) or s2 in ({1}, {-1}):
        return EMPTY

    direction = _cross(n1, n2)
    if direction == (0, 0, 0):
        # parallel planes; identical planes were rejected above
        return EMPTY

    # base point on the common line with coordinate k set to zero
    k = max(range(3), key=lambda a: abs(direction[a]))
    i, j = (k + 1) % 3, (k + 2) % 3
    h1 = _dot(n1, t1[0])
    h2 = _dot(n2, t2[0])
    den = direction[k]  # = n1[i]*n2[j] - n1[j]*n2[i]
    num = [0, 0, 0]
    num[i] = h1 * n2[j] - h2 * n1[j]
    num[j] = n1[i] * h2 - n2[i] * h1
    if den < 0:
        den = -den
        num = [-c for c in num]
    base_num = tuple(num)

    iv1 = _clip_interval(t1, n1, base_num, den, direction)
    if iv1 is None:
        return EMPTY
    iv2 = _clip_interval(t2, n2, base_num, den, direction)
    if iv2 is None:
        return EMPTY
    lo = max(iv1[0], iv2[0])
    hi = min(iv1[1], iv2[1])
    if lo > hi:
        return EMPTY

    def at(t):
        return tuple(Fraction(base_num[a], den) + t * direction[a] for a in range(3))

    if lo == hi:
        return SegmentOrContact("point", (at(lo),))
    return SegmentOrContact("segment", (at(lo), at(hi)))


def shared_vertex_count(t1: Sequence[Point], t2: Sequence[Point]) -> int:
    return len({tuple(p) for p in t1} & {tuple(p) for p in t2})


def pair_contribution(t1: Sequence[Point], t2: Sequence[Point]) -> Tuple[bool, float]:
    """Exact improper flag and intersection length for one triangle pair.

    Vertices are matched by coordinates, which is sound under general
    position. Edge-sharing pairs always meet in exactly their edge and
    contribute nothing.
    """
    return _backend.pair_contribution(
        tuple(map(tuple, t1)), tuple(map(tuple, t2))
    )


def improper_from_segment(t1, t2, seg: SegmentOrContact) -> bool:
    """Whether an exact intersection result is more than the shared part."""
    shared = shared_vertex_count(t1, t2)
    if shared >= 2:
        return False
    if shared == 1:
        return seg.kind == "segment"
    return seg.kind != "empty"
