"""Hill-climbing search for integer coordinates with zero functional.

One step draws an untested (vertex, direction) unit move at random, accepts
it only if the objective strictly drops, and otherwise crosses it off. Once
every move has been crossed off the state is a local minimum and a single
admissible move is taken regardless of its effect (an escape). Attempts that
run out of steps are restarted from fresh random coordinates.
"""

from __future__ import annotations

import logging
import random
import time
from dataclasses import asdict, dataclass, replace
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import _backend
from .functional import BASE_MASKS, FunctionalMode, PairCache, build_pair_table
from .geometry import in_general_position
from .surface import (
    RemovalRecord,
    SurfaceError,
    Triangulation,
    reduce_degree3,
    validate_surface,
)
from .verify import convexity_certificate, verify_realization

log = logging.getLogger(__name__)

ACCEPTED = "accepted"
REJECTED = "rejected"
ESCAPED = "escaped"
EXHAUSTED = "exhausted"

_DIRECTIONS = ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1))


class SearchError(RuntimeError):
    pass


class PlacementError(SearchError):
    """Random initial placement kept failing to reach general position."""


@dataclass(frozen=True)
class SearchConfig:
    initial_cube: int = 50
    bounding_box: int = 250
    step_budget_per_restart: int = 5_400_000
    max_restarts: Optional[int] = None  # None: restart forever
    seed: int = 0
    slide_to_limit: bool = False
    swap_pairs_on_minimum: bool = False
    normalized_objective: bool = False
    pool_init: int = 0
    success_mode: str = "strict"
    objective_base: str = "paper"
    extended: bool = False

    def __post_init__(self):
        if self.initial_cube < 1 or self.bounding_box < 1:
            raise ValueError("cube and box sizes must be positive")
        if self.initial_cube > self.bounding_box:
            raise ValueError("initial cube must fit inside the bounding box")
        if self.step_budget_per_restart < 0:
            raise ValueError("step budget must be nonnegative")
        if self.max_restarts is not None and self.max_restarts < 0:
            raise ValueError("max_restarts must be nonnegative")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.pool_init < 0:
            raise ValueError("pool_init must be nonnegative")
        for name in (self.success_mode, self.objective_base):
            if name not in BASE_MASKS:
                raise ValueError(f"unknown functional base {name!r}")

    @property
    def box(self) -> Tuple[int, int]:
        return 0, self.bounding_box

    @property
    def cube(self) -> Tuple[int, int]:
        lo = (self.bounding_box - self.initial_cube) // 2
        return lo, lo + self.initial_cube

    def objective_mode(self) -> FunctionalMode:
        return FunctionalMode(self.objective_base, self.extended, self.normalized_objective)

    def success_mask(self) -> int:
        return FunctionalMode(self.success_mode, self.extended).mask

    def table_mask(self) -> int:
        return self.objective_mode().mask | self.success_mask()


@dataclass
class RunReport:
    instance: str
    config: Dict
    success: bool
    steps_total: int = 0
    restarts: int = 0
    accepted_moves: int = 0
    escapes: int = 0
    initial_value: Optional[float] = None
    final_value: Optional[float] = None
    wall_time_ms: float = 0.0
    final_coordinates: Optional[List[Tuple[int, int, int]]] = None
    message: str = ""

    def to_dict(self) -> Dict:
        return asdict(self)


# -- initial coordinates --------------------------------------------------------


def _place(n: int, cfg: SearchConfig, rng: random.Random,
           vertex_tries: int = 1000, full_tries: int = 100) -> List[Tuple[int, int, int]]:
    lo, hi = cfg.cube
    for _ in range(full_tries):
        pts: List[Tuple[int, int, int]] = []
        for _ in range(n):
            for _ in range(vertex_tries):
                p = (rng.randint(lo, hi), rng.randint(lo, hi), rng.randint(lo, hi))
                if _backend.point_in_general_position(pts, -1, p):
                    pts.append(p)
                    break
            else:
                break
        if len(pts) == n:
            return pts
    raise PlacementError(f"could not place {n} points in general position in the initial cube")


def init_coordinates(t: Triangulation, cfg: SearchConfig, rng: random.Random,
                     table=None) -> List[Tuple[int, int, int]]:
    """Random general-position integer points in the initial cube, centered in
    the bounding box. With ``pool_init = k > 1`` the best of k draws (by the
    objective) is returned; ties keep the earliest draw."""
    if cfg.pool_init <= 1:
        return _place(t.n, cfg, rng)
    mode = cfg.objective_mode()
    table = table if table is not None else build_pair_table(t, mode.extended)
    best = None
    best_value = None
    for _ in range(cfg.pool_init):
        pts = _place(t.n, cfg, rng)
        value = PairCache(t, pts, mode, box=cfg.box, table=table).functional().value
        if best is None or value < best_value:
            best, best_value = pts, value
    return best


# -- search state ---------------------------------------------------------------------


class SearchState:
    """Coordinates, pair cache and move bookkeeping of one attempt."""

    def __init__(self, t: Triangulation, cfg: SearchConfig, coords, rng: random.Random,
                 table=None):
        self.t = t
        self.cfg = cfg
        self.rng = rng
        mode = cfg.objective_mode()
        self.table = table if table is not None else build_pair_table(t, cfg.extended)
        self.cache = PairCache(t, coords, mode, box=cfg.box, table=self.table)
        self.engine = self.cache.engine
        self.xyz = [list(p) for p in self.engine.get_coords()]
        self.success_mask = cfg.success_mask()
        self.objective_mask = mode.mask
        self.normalized = cfg.normalized_objective
        self.moves = list(range(6 * t.n))
        self.remaining = len(self.moves)
        self.steps = 0
        self.accepted = 0
        self.escapes = 0
        self.current = self._objective()

    def _objective(self) -> float:
        raw = self.engine.value(self.objective_mask)
        if self.normalized:
            raw = raw / self.engine.edge_total()
        return raw

    def _staged_objective(self) -> float:
        raw = self.engine.staged_value(self.objective_mask)
        if self.normalized:
            raw = raw / self.engine.staged_edge_total()
        return raw

    def is_solved(self) -> bool:
        return self.engine.improper(self.success_mask) == 0

    def maybe_tighten(self) -> bool:
        """Once every pair the objective sees is proper but some success pair
        is not, widen the objective to the success pairs."""
        if self.success_mask & ~self.objective_mask == 0:
            return False
        if self.engine.improper(self.objective_mask) == 0 and not self.is_solved():
            self.objective_mask |= self.success_mask
            self.current = self._objective()
            self.remaining = len(self.moves)
            return True
        return False

    @property
    def coords(self) -> List[Tuple[int, int, int]]:
        return self.engine.get_coords()

    def _commit(self):
        self.engine.commit()
        self.xyz = [list(p) for p in self.engine.get_coords()]

    def step(self) -> str:
        """One step of the local search; see the module docstring."""
        if self.remaining == 0:
            return self._escape()
        k = self.rng.randrange(self.remaining)
        move = self.moves[k]
        v, d = divmod(move, 6)
        dx, dy, dz = _DIRECTIONS[d]
        p = self.xyz[v]
        x, y, z = p[0] + dx, p[1] + dy, p[2] + dz
        self.steps += 1
        engine = self.engine
        if engine.propose_move(v, x, y, z) == 1:
            new = self._staged_objective()
            if new < self.current:
                engine.commit()
                p[0], p[1], p[2] = x, y, z
                self.current = new
                self.accepted += 1
                self.remaining = len(self.moves)
                if self.cfg.slide_to_limit:
                    self._slide(v, dx, dy, dz)
                return ACCEPTED
            engine.discard()
        last = self.remaining - 1
        self.moves[k], self.moves[last] = self.moves[last], self.moves[k]
        self.remaining = last
        return REJECTED

    def _slide(self, v, dx, dy, dz):
        # keep going in the accepted direction while it still improves
        budget = self.cfg.step_budget_per_restart
        p = self.xyz[v]
        while self.steps < budget and not self.is_solved():
            x, y, z = p[0] + dx, p[1] + dy, p[2] + dz
            self.steps += 1
            if self.engine.propose_move(v, x, y, z) != 1:
                return
            new = self._staged_objective()
            if not new < self.current:
                self.engine.discard()
                return
            self.engine.commit()
            p[0], p[1], p[2] = x, y, z
            self.current = new
            self.accepted += 1

    def _escape(self) -> str:
        self.steps += 1
        if self.cfg.swap_pairs_on_minimum:
            return self._swap_escape()
        order = list(self.moves)
        self.rng.shuffle(order)
        for move in order:
            v, d = divmod(move, 6)
            dx, dy, dz = _DIRECTIONS[d]
            p = self.xyz[v]
            if self.engine.propose_move(v, p[0] + dx, p[1] + dy, p[2] + dz) == 1:
                self._commit()
                self.current = self._objective()
                self.escapes += 1
                self.remaining = len(self.moves)
                return ESCAPED
        return EXHAUSTED

    def _swap_escape(self) -> str:
        # exchange the positions of two vertices, preferring an improving pair
        n = self.t.n
        better = []
        for u in range(n):
            for w in range(u + 1, n):
                self.engine.propose_swap(u, w)
                if self._staged_objective() < self.current:
                    better.append((u, w))
                self.engine.discard()
        if better:
            u, w = better[self.rng.randrange(len(better))]
        else:
            u = self.rng.randrange(n)
            w = self.rng.randrange(n - 1)
            if w >= u:
                w += 1
        self.engine.propose_swap(u, w)
        self._commit()
        self.current = self._objective()
        self.escapes += 1
        self.remaining = len(self.moves)
        return ESCAPED


def step(state: SearchState, cfg: Optional[SearchConfig] = None) -> str:
    return state.step()


# -- drivers -------------------------------------------------------------------------


def _config_echo(cfg: SearchConfig) -> Dict:
    return asdict(cfg)


def _certified(t: Triangulation, coords, convex: bool) -> bool:
    if not verify_realization(t, coords).verdict:
        return False
    if convex and not convexity_certificate(t, coords).verdict:
        return False
    return True


def run_realize(t: Triangulation, cfg: SearchConfig, instance: str = "",
                init_coords: Optional[Sequence] = None,
                should_stop: Optional[Callable[[], bool]] = None,
                convex: bool = False) -> RunReport:
    """Search until the success functional is exactly zero and the result
    verifies, restarting from fresh coordinates whenever an attempt uses up
    its step budget.

    ``init_coords`` replaces the random start of the first attempt only.
    With ``convex`` the convexity certificate is also required (spheres).
    """
    info = validate_surface(t)
    if not info.orientable:
        raise SurfaceError("non-orientable closed surfaces do not embed in R^3")
    start = time.perf_counter()
    report = RunReport(instance, _config_echo(cfg), False)
    if cfg.step_budget_per_restart == 0:
        report.message = "step budget is zero"
        return report

    rng = random.Random(cfg.seed)
    table = build_pair_table(t, cfg.extended)
    budget = cfg.step_budget_per_restart
    attempt = 0
    while True:
        if attempt == 0 and init_coords is not None:
            coords = [tuple(int(x) for x in p) for p in init_coords]
            lo, hi = cfg.box
            if any(not lo <= x <= hi for p in coords for x in p):
                raise SearchError("initial coordinates lie outside the bounding box")
        else:
            coords = init_coordinates(t, cfg, rng, table)
        state = SearchState(t, cfg, coords, rng, table)
        if attempt == 0:
            report.initial_value = state.current
        state.maybe_tighten()
        solved = state.is_solved() and _certified(t, state.coords, convex)
        while not solved and state.steps < budget:
            outcome = state.step()
            if outcome == EXHAUSTED:
                break
            if outcome != REJECTED and state.is_solved():
                solved = _certified(t, state.coords, convex)
            elif outcome != REJECTED:
                state.maybe_tighten()
            if should_stop is not None and state.steps % 1024 == 0 and should_stop():
                break
        report.steps_total += state.steps
        report.accepted_moves += state.accepted
        report.escapes += state.escapes
        report.final_value = state.current
        if solved:
            report.success = True
            report.final_coordinates = state.coords
            break
        if should_stop is not None and should_stop():
            report.message = "cancelled"
            break
        if cfg.max_restarts is not None and attempt >= cfg.max_restarts:
            report.message = "step budget exhausted"
            break
        attempt += 1
        report.restarts += 1
        log.debug("restart %d for %s", attempt, instance)
    report.wall_time_ms = (time.perf_counter() - start) * 1000.0
    return report


# -- convex realizations of spheres -----------------------------------------------------


def _outward_normal(face_pts, inner_pt):
    a, b, c = face_pts
    u = tuple(b[k] - a[k] for k in range(3))
    w = tuple(c[k] - a[k] for k in range(3))
    nrm = (u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0])
    side = sum(nrm[k] * (inner_pt[k] - a[k]) for k in range(3))
    if side > 0:
        nrm = tuple(-x for x in nrm)
    return nrm


def _dot(u, v):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


_FRACTIONS = (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(1, 4), Fraction(3, 4),
              Fraction(1, 5), Fraction(2, 5), Fraction(3, 5), Fraction(4, 5))
_WEIGHTS = ((1, 1, 1), (2, 1, 1), (1, 2, 1), (1, 1, 2), (3, 2, 1), (1, 3, 2), (2, 1, 3))


def reinsert_vertices(coords: Dict[int, Tuple], records: Sequence[RemovalRecord],
                      faces: Sequence[Tuple[int, int, int]]) -> Dict[int, Tuple]:
    """Put removed degree-3 vertices back, last removed first.

    ``coords`` maps labels to points of a convex realization of ``faces``.
    Each vertex goes on the outward normal through a point of its link
    triangle (the centroid first), beyond that triangle's plane and beneath
    every other face plane; the offset is the midpoint of the exact feasible
    interval, nudged inside it if general position requires.
    """
    pts = {k: tuple(Fraction(x) for x in p) for k, p in coords.items()}
    current = [tuple(f) for f in faces]
    for rec in reversed(records):
        key = frozenset(rec.link_triangle)
        idx = next((i for i, f in enumerate(current) if frozenset(f) == key), None)
        if idx is None:
            raise SearchError(f"link triangle {rec.link_triangle} is not a current face")
        a, b, c = current[idx]
        others = [x for x in pts if x not in key]
        tri = [pts[a], pts[b], pts[c]]
        nrm = _outward_normal(tri, pts[others[0]])
        placed = None
        for wts in _WEIGHTS:
            total = sum(wts)
            base = tuple(sum(Fraction(wts[i]) * tri[i][k] for i in range(3)) / total
                         for k in range(3))
            upper = None
            for j, f in enumerate(current):
                if j == idx:
                    continue
                fp = [pts[x] for x in f]
                inner = next(pts[x] for x in pts if x not in f)
                nf = _outward_normal(fp, inner)
                slope = _dot(nf, nrm)
                if slope > 0:
                    gap = _dot(nf, tuple(base[k] - fp[0][k] for k in range(3)))
                    bound = -gap / slope
                    upper = bound if upper is None else min(upper, bound)
            hi = upper if upper is not None else Fraction(2)
            if hi <= 0:
                continue
            for frac in _FRACTIONS:
                s = hi * frac
                cand = tuple(base[k] + s * nrm[k] for k in range(3))
                labels = list(pts) + [rec.removed_vertex]
                trial = dict(pts)
                trial[rec.removed_vertex] = cand
                if not in_general_position([trial[x] for x in labels]):
                    continue
                placed = cand
                break
            if placed is not None:
                break
        if placed is None:
            raise SearchError(f"no feasible position for vertex {rec.removed_vertex}")
        pts[rec.removed_vertex] = placed
        v = rec.removed_vertex
        current.pop(idx)
        current.extend([(a, b, v), (b, c, v), (c, a, v)])
        labels = sorted(pts)
        index = {x: i + 1 for i, x in enumerate(labels)}
        stage = Triangulation(len(labels), tuple(tuple(index[x] for x in f) for f in current))
        if not convexity_certificate(stage, [pts[x] for x in labels]).verdict:
            raise SearchError(f"convexity lost after reinserting vertex {v}")
    return pts


def run_convexify(t: Triangulation, cfg: SearchConfig, instance: str = "",
                  should_stop: Optional[Callable[[], bool]] = None):
    """Convex realization of a sphere: strip degree-3 vertices, search with
    the extended functional, then put the stripped vertices back.

    Returns (report, coordinates) where coordinates is a list of Fraction
    triples in label order, or None on failure.
    """
    info = validate_surface(t)
    if not info.orientable or info.genus != 0:
        raise SurfaceError("convexification needs a 2-sphere")
    red = reduce_degree3(t)
    if red.stuck:
        raise SearchError("degree-3 reduction got stuck")
    rcfg = replace(cfg, extended=True, success_mode="strict", objective_base="paper")
    report = run_realize(red.triangulation, rcfg, instance, should_stop=should_stop, convex=True)
    report.config = _config_echo(cfg)
    if not report.success:
        return report, None
    start = time.perf_counter()
    base = {red.original_labels[i]: p for i, p in enumerate(report.final_coordinates)}
    faces = [tuple(red.original_labels[x - 1] for x in f) for f in red.triangulation.faces]
    pts = reinsert_vertices(base, red.records, faces)
    coords = [pts[v] for v in range(1, t.n + 1)]
    if not convexity_certificate(t, coords).verdict:
        raise SearchError("final coordinates fail the convexity certificate")
    report.final_coordinates = [tuple(p) for p in coords]
    report.wall_time_ms += (time.perf_counter() - start) * 1000.0
    return report, coords
