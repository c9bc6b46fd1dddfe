"""The intersection segment functional and its variants.

Pairs of triangles are split into classes so a single cache can answer for
several modes at once:

* class 0: two faces with no common vertex
* class 1: two faces with exactly one common vertex
* class 2: a face and a non-face triple (spheres only)

Two faces sharing an edge always meet in exactly that edge under general
position, so such pairs never enter the cache.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from . import _backend
from .geometry import GeometryError, in_general_position
from .surface import Triangulation, non_face_triangles

CLS_DISJOINT = 0
CLS_SHARED = 1
CLS_NONFACE = 2

# default box half-width when the caller does not impose one
UNBOXED = 1 << 18

BASE_MASKS = {
    # pairs of faces that do not share an edge
    "paper": (1 << CLS_DISJOINT) | (1 << CLS_SHARED),
    "strict": (1 << CLS_DISJOINT) | (1 << CLS_SHARED),
    # only vertex-disjoint face pairs
    "disjoint": 1 << CLS_DISJOINT,
}


@dataclass(frozen=True)
class FunctionalMode:
    base: str = "paper"
    extended: bool = False
    normalized: bool = False

    def __post_init__(self):
        if self.base not in BASE_MASKS:
            raise ValueError(f"unknown functional base {self.base!r}")

    @property
    def mask(self) -> int:
        return BASE_MASKS[self.base] | ((1 << CLS_NONFACE) if self.extended else 0)


@dataclass(frozen=True)
class FunctionalValue:
    value: float
    exactly_zero: bool
    improper_pair_count: int


@dataclass(frozen=True)
class PairTable:
    """Triangles (faces first, then non-faces) and the pairs between them."""

    triangles: Tuple[Tuple[int, int, int], ...]
    nfaces: int
    pairs: Tuple[Tuple[int, int], ...]
    rows: Tuple[Tuple[int, ...], ...]
    edges: Tuple[Tuple[int, int], ...]


def build_pair_table(t: Triangulation, extended: bool = False) -> PairTable:
    """Pairs are listed in lexicographic order of (first, second) triangle index."""
    tris = list(t.faces)
    if extended:
        tris.extend(non_face_triangles(t))
    nf = len(t.faces)
    pairs = []
    rows = []
    for i in range(nf):
        f = tris[i]
        for j in range(i + 1, len(tris)):
            g = tris[j]
            shared = set(f) & set(g)
            if len(shared) >= 2:
                continue
            cls = CLS_NONFACE if j >= nf else (CLS_SHARED if shared else CLS_DISJOINT)
            if shared:
                (p,) = shared
                a, b = (x for x in f if x != p)
                c, d = (x for x in g if x != p)
                row = (1, cls, p - 1, a - 1, b - 1, c - 1, d - 1, 0)
            else:
                row = (0, cls) + tuple(x - 1 for x in f) + tuple(x - 1 for x in g)
            pairs.append((i, j))
            rows.append(row)
    edges = tuple((a - 1, b - 1) for a, b in t.edges())
    return PairTable(tuple(tris), nf, tuple(pairs), tuple(rows), edges)


def _make_engine(coords, table: PairTable, box_lo: int, box_hi: int):
    compiled = _backend.compiled_backend()
    if _backend.BACKEND != "python" and compiled is not None:
        limit = compiled.COORD_LIMIT
        inside = all(-limit <= x <= limit for p in coords for x in p)
        if inside and -limit <= box_lo and box_hi <= limit:
            return compiled.Engine(coords, table.rows, table.edges, box_lo, box_hi)
    return _backend.python_backend().Engine(coords, table.rows, table.edges, box_lo, box_hi)


@dataclass(frozen=True)
class CacheDelta:
    """A staged single-vertex move (or swap) awaiting apply()."""

    moves: Tuple[Tuple[int, Tuple[int, int, int]], ...]
    value: FunctionalValue
    token: int


class PairCache:
    """Per-pair exact flags and float lengths for one coordinatized surface.

    The cache owns a kernel engine. Moves are staged first and only change
    the cache when applied, so rejecting a move leaves it untouched.
    """

    def __init__(self, t: Triangulation, coords, mode: FunctionalMode,
                 box: Optional[Tuple[int, int]] = None, table: Optional[PairTable] = None):
        coords = [tuple(int(x) for x in p) for p in coords]
        if len(coords) != t.n:
            raise ValueError(f"expected {t.n} coordinates, got {len(coords)}")
        gp = in_general_position(coords)
        if not gp:
            raise GeometryError(f"coordinates not in general position: {gp.describe()}")
        if box is None:
            lo = min(min(p) for p in coords)
            hi = max(max(p) for p in coords)
            box = (min(lo, -UNBOXED), max(hi, UNBOXED))
        self.triangulation = t
        self.mode = mode
        self.table = table if table is not None else build_pair_table(t, mode.extended)
        self.engine = _make_engine(coords, self.table, box[0], box[1])
        self._token = 0
        self._staged: Optional[CacheDelta] = None

    # -- reading ------------------------------------------------------------

    @property
    def coords(self) -> List[Tuple[int, int, int]]:
        return self.engine.get_coords()

    def raw_value(self, mask: Optional[int] = None) -> float:
        return self.engine.value(self.mode.mask if mask is None else mask)

    def functional(self, mask: Optional[int] = None, normalized: Optional[bool] = None) -> FunctionalValue:
        mask = self.mode.mask if mask is None else mask
        normalized = self.mode.normalized if normalized is None else normalized
        raw = self.engine.value(mask)
        bad = self.engine.improper(mask)
        if normalized:
            raw = raw / self.engine.edge_total()
        return FunctionalValue(raw, bad == 0, bad)

    def pair_state(self):
        """(flags, lengths) per pair, in table order."""
        return self.engine.pair_state()

    # -- moves --------------------------------------------------------------

    def _staged_functional(self, mask, normalized) -> FunctionalValue:
        raw = self.engine.staged_value(mask)
        bad = self.engine.staged_improper(mask)
        if normalized:
            raw = raw / self.engine.staged_edge_total()
        return FunctionalValue(raw, bad == 0, bad)

    def propose(self, v: int, newpos) -> Optional[CacheDelta]:
        """Stage moving vertex v (0-based). None if the move leaves the box or
        breaks general position."""
        x, y, z = (int(c) for c in newpos)
        status = self.engine.propose_move(v, x, y, z)
        if status != 1:
            self._staged = None
            return None
        self._token += 1
        value = self._staged_functional(self.mode.mask, self.mode.normalized)
        self._staged = CacheDelta(((v, (x, y, z)),), value, self._token)
        return self._staged

    def propose_swap(self, u: int, w: int) -> CacheDelta:
        coords = self.engine.get_coords()
        self.engine.propose_swap(u, w)
        self._token += 1
        value = self._staged_functional(self.mode.mask, self.mode.normalized)
        self._staged = CacheDelta(((u, coords[w]), (w, coords[u])), value, self._token)
        return self._staged

    def staged(self, mask: int, normalized: bool = False) -> FunctionalValue:
        return self._staged_functional(mask, normalized)

    def apply(self, delta: CacheDelta) -> None:
        if self._staged is None or delta.token != self._staged.token:
            raise RuntimeError("delta is stale; stage it again before applying")
        self.engine.commit()
        self._staged = None

    def revert(self, delta: Optional[CacheDelta] = None) -> None:
        self.engine.discard()
        self._staged = None


def evaluate(t: Triangulation, coords: Sequence, mode: FunctionalMode = FunctionalMode()
             ) -> Tuple[FunctionalValue, PairCache]:
    """Evaluate the functional from scratch; also returns the filled cache."""
    cache = PairCache(t, coords, mode)
    return cache.functional(), cache


def evaluate_after_move(cache: PairCache, v: int, newpos) -> Tuple[Optional[FunctionalValue], Optional[CacheDelta]]:
    """Value after moving vertex v (0-based), recomputing only the pairs that
    involve triangles through v. The cache is unchanged until
    ``cache.apply(delta)``."""
    delta = cache.propose(v, newpos)
    if delta is None:
        return None, None
    return delta.value, delta


def total_edge_length(t: Triangulation, coords) -> float:
    total = 0.0
    for a, b in t.edges():
        p, q = coords[a - 1], coords[b - 1]
        dx, dy, dz = float(q[0] - p[0]), float(q[1] - p[1]), float(q[2] - p[2])
        total += math.sqrt(dx * dx + dy * dy + dz * dz)
    return total
