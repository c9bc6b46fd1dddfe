"""Combinatorics of triangulated closed surfaces.

Vertices are labeled 1..n throughout, matching the face-list files.
"""

from __future__ import annotations

import re
from collections import defaultdict, deque
from dataclasses import dataclass, field
from itertools import combinations
from math import comb, isqrt
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

Face = Tuple[int, int, int]
Edge = Tuple[int, int]


class SurfaceError(ValueError):
    """Input is not a valid closed, connected triangulated surface."""


class ParseError(SurfaceError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def _edge(a: int, b: int) -> Edge:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class Triangulation:
    """A vertex count plus a list of triangles.

    Faces keep the vertex order they were given in (an orientation, if the
    source had one); equality of faces is as 3-sets.
    """

    n: int
    faces: Tuple[Face, ...]

    def __post_init__(self):
        faces = tuple(tuple(int(x) for x in f) for f in self.faces)
        object.__setattr__(self, "faces", faces)
        if self.n < 1:
            raise SurfaceError("vertex count must be positive")
        seen = set()
        used = set()
        for f in faces:
            if len(f) != 3:
                raise SurfaceError(f"face {f} does not have three vertices")
            if len(set(f)) != 3:
                raise SurfaceError(f"repeated vertex in triangle {f}")
            for x in f:
                if not 1 <= x <= self.n:
                    raise SurfaceError(f"vertex {x} out of range 1..{self.n}")
            key = frozenset(f)
            if key in seen:
                raise SurfaceError(f"duplicate triangle {tuple(sorted(f))}")
            seen.add(key)
            used.update(f)
        missing = set(range(1, self.n + 1)) - used
        if missing:
            raise SurfaceError(f"vertex {min(missing)} lies in no triangle")

    @property
    def face_sets(self) -> frozenset:
        return frozenset(frozenset(f) for f in self.faces)

    def edges(self) -> List[Edge]:
        return sorted({_edge(f[i], f[(i + 1) % 3]) for f in self.faces for i in range(3)})

    def degree(self, v: int) -> int:
        return sum(1 for f in self.faces if v in f)


@dataclass(frozen=True)
class SurfaceInfo:
    f_vector: Tuple[int, int, int]
    euler_characteristic: int
    genus: Optional[int]
    orientable: bool
    connected: bool
    min_degree: int


@dataclass(frozen=True)
class RemovalRecord:
    removed_vertex: int
    link_triangle: Face


@dataclass(frozen=True)
class Reduction:
    """Result of stripping degree-3 vertices from a sphere.

    ``triangulation`` uses compact labels 1..m; ``original_labels[i]`` is the
    input label of compact vertex i+1. Records use input labels.
    """

    triangulation: Triangulation
    records: Tuple[RemovalRecord, ...]
    original_labels: Tuple[int, ...]
    stuck: bool = False


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"\S+")


def parse_triangulation(text: str) -> Triangulation:
    """Read the face-list format: ``n m`` followed by m lines ``i j k``."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        tokens = [(m.group(), m.start() + 1) for m in _TOKEN.finditer(line)]
        if not tokens:
            continue
        values = []
        for tok, col in tokens:
            try:
                values.append(int(tok))
            except ValueError:
                raise ParseError(f"expected an integer, got {tok!r}", lineno, col) from None
        rows.append((lineno, values))
    if not rows:
        raise ParseError("empty input", 1)
    lineno, header = rows[0]
    if len(header) != 2:
        raise ParseError("header must be 'n m'", lineno)
    n, m = header
    if n < 1 or m < 0:
        raise ParseError("header values out of range", lineno)
    body = rows[1:]
    if len(body) != m:
        last = body[-1][0] if body else lineno
        raise ParseError(f"expected {m} triangles, found {len(body)}", last)
    faces = []
    seen = set()
    for lineno, vals in body:
        if len(vals) != 3:
            raise ParseError("triangle line must hold three vertex labels", lineno)
        for x in vals:
            if not 1 <= x <= n:
                raise ParseError(f"vertex {x} out of range 1..{n}", lineno)
        if len(set(vals)) != 3:
            raise ParseError(f"repeated vertex in triangle {tuple(vals)}", lineno)
        key = frozenset(vals)
        if key in seen:
            raise ParseError(f"duplicate triangle {tuple(sorted(vals))}", lineno)
        seen.add(key)
        faces.append(tuple(vals))
    try:
        return Triangulation(n, tuple(faces))
    except SurfaceError as exc:
        raise ParseError(str(exc), rows[0][0]) from None


def format_triangulation(t: Triangulation) -> str:
    lines = [f"{t.n} {len(t.faces)}"]
    lines.extend(f"{a} {b} {c}" for a, b, c in t.faces)
    return "\n".join(lines) + "\n"


# -- validation ----------------------------------------------------------------


def _edge_faces(t: Triangulation) -> Dict[Edge, List[int]]:
    table: Dict[Edge, List[int]] = defaultdict(list)
    for idx, f in enumerate(t.faces):
        for i in range(3):
            table[_edge(f[i], f[(i + 1) % 3])].append(idx)
    return table


def _link_edges(t: Triangulation, v: int) -> List[Edge]:
    out = []
    for f in t.faces:
        if v in f:
            a, b = (x for x in f if x != v)
            out.append((a, b))
    return out


def _chain_link(edges: List[Edge]) -> Optional[List[int]]:
    """Chain link edges into one cycle, starting at the smallest vertex and
    stepping to its smaller neighbour. None if they do not form one cycle."""
    if not edges:
        return None
    nbrs: Dict[int, List[int]] = defaultdict(list)
    for a, b in edges:
        nbrs[a].append(b)
        nbrs[b].append(a)
    if any(len(x) != 2 for x in nbrs.values()):
        return None
    start = min(nbrs)
    cycle = [start]
    prev, cur = start, min(nbrs[start])
    while cur != start:
        cycle.append(cur)
        a, b = nbrs[cur]
        prev, cur = cur, (b if a == prev else a)
        if len(cycle) > len(nbrs):
            return None
    return cycle if len(cycle) == len(nbrs) else None


def orient_faces(t: Triangulation) -> Optional[Tuple[Face, ...]]:
    """Consistently oriented copies of the faces, or None if non-orientable.

    Orientation spreads by BFS from face 0 (kept as given) across shared
    edges; each component is seeded separately.
    """
    table = _edge_faces(t)
    oriented: List[Optional[Face]] = [None] * len(t.faces)
    for seed in range(len(t.faces)):
        if oriented[seed] is not None:
            continue
        oriented[seed] = t.faces[seed]
        queue = deque([seed])
        while queue:
            idx = queue.popleft()
            f = oriented[idx]
            for i in range(3):
                a, b = f[i], f[(i + 1) % 3]
                for other in table[_edge(a, b)]:
                    if other == idx:
                        continue
                    g = t.faces[other]
                    # neighbour must traverse the shared edge as b -> a
                    c = next(x for x in g if x != a and x != b)
                    want = (b, a, c)
                    if oriented[other] is None:
                        oriented[other] = want
                        queue.append(other)
                    elif not _same_cycle(oriented[other], want):
                        return None
    return tuple(oriented)


def _same_cycle(f: Face, g: Face) -> bool:
    return g in (f, (f[1], f[2], f[0]), (f[2], f[0], f[1]))


def _components(t: Triangulation) -> int:
    parent = list(range(t.n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b, c in t.faces:
        ra = find(a)
        for x in (b, c):
            rx = find(x)
            if rx != ra:
                parent[rx] = ra
    return len({find(v) for v in range(1, t.n + 1)})


def validate_surface(t: Triangulation) -> SurfaceInfo:
    """Check t is a connected closed 2-manifold and compute its invariants.

    Raises SurfaceError for non-manifold edges, pinched vertices and
    disconnected input. Non-orientable surfaces are reported, not refused.
    """
    table = _edge_faces(t)
    for e in sorted(table):
        if len(table[e]) != 2:
            raise SurfaceError(f"non-manifold edge ({e[0]},{e[1]})")
    degrees = []
    for v in range(1, t.n + 1):
        link = _link_edges(t, v)
        if _chain_link(link) is None:
            raise SurfaceError(f"pinched vertex {v} (link is not a single cycle)")
        degrees.append(len(link))
    if _components(t) != 1:
        raise SurfaceError("disconnected complex")
    f1 = len(table)
    f2 = len(t.faces)
    chi = t.n - f1 + f2
    orientable = orient_faces(t) is not None
    genus = (2 - chi) // 2 if orientable else None
    return SurfaceInfo((t.n, f1, f2), chi, genus, orientable, True, min(degrees))


def heawood_min_vertices(chi: int) -> int:
    """Smallest n allowed by ceil((7 + sqrt(49 - 24 chi)) / 2), in integers."""
    disc = 49 - 24 * chi
    if disc < 0:
        raise ValueError("49 - 24*chi must be nonnegative")
    root = isqrt(disc)
    if root * root == disc:
        return (8 + root) // 2
    return (7 + root) // 2 + 1


def is_neighborly(t: Triangulation) -> bool:
    return len(t.edges()) == comb(t.n, 2)


def vertex_link(t: Triangulation, v: int) -> Tuple[int, ...]:
    """Link cycle of v: smallest neighbour first, then its smaller neighbour."""
    if not 1 <= v <= t.n:
        raise SurfaceError(f"vertex {v} out of range 1..{t.n}")
    cycle = _chain_link(_link_edges(t, v))
    if cycle is None:
        raise SurfaceError(f"link of vertex {v} is not a single cycle")
    return tuple(cycle)


# -- subdivisions and degree-3 reduction ---------------------------------------


def subdivide(t: Triangulation, target: Iterable[int]) -> Triangulation:
    """Stellar subdivision of a face (3 labels) or an edge (2 labels).

    The new vertex gets label n+1; orientation of the affected faces is kept.
    """
    target = tuple(target)
    v = t.n + 1
    if len(target) == 3:
        key = frozenset(target)
        faces = []
        hit = False
        for f in t.faces:
            if frozenset(f) == key:
                a, b, c = f
                faces.extend([(a, b, v), (b, c, v), (c, a, v)])
                hit = True
            else:
                faces.append(f)
        if not hit:
            raise SurfaceError(f"triangle {target} is not a face")
        return Triangulation(v, tuple(faces))
    if len(target) == 2:
        a, b = target
        faces = []
        hits = 0
        for f in t.faces:
            if a in f and b in f:
                i = f.index(a)
                p, q, z = f[i], f[(i + 1) % 3], f[(i + 2) % 3]
                if q != b:
                    # orientation runs b -> a in this face
                    p, q, z = f[(i + 2) % 3], f[i], f[(i + 1) % 3]
                faces.extend([(p, v, z), (v, q, z)])
                hits += 1
            else:
                faces.append(f)
        if hits == 0:
            raise SurfaceError(f"edge {target} is not an edge")
        return Triangulation(v, tuple(faces))
    raise SurfaceError("subdivision target must be a face or an edge")


def _require_sphere(t: Triangulation) -> SurfaceInfo:
    info = validate_surface(t)
    if not info.orientable or info.genus != 0:
        raise SurfaceError("triangulation is not a 2-sphere")
    return info


def reduce_degree3(t: Triangulation) -> Reduction:
    """Repeatedly replace the star of the lowest-labeled degree-3 vertex by
    its link triangle, until none is left or four vertices remain."""
    _require_sphere(t)
    faces = list(orient_faces(t))
    alive = set(range(1, t.n + 1))
    records = []
    stuck = False
    while len(alive) > 4:
        deg: Dict[int, int] = defaultdict(int)
        for f in faces:
            for x in f:
                deg[x] += 1
        face_keys = {frozenset(f) for f in faces}
        candidates = sorted(v for v in alive if deg[v] == 3)
        chosen = None
        for v in candidates:
            star = [f for f in faces if v in f]
            link = _chain_link([tuple(x for x in f if x != v) for f in star])
            if frozenset(link) in face_keys:
                continue
            chosen = (v, star)
            break
        if chosen is None:
            stuck = bool(candidates)
            break
        v, star = chosen
        # star faces read (v, a, b), (v, b, c), (v, c, a); the link is (a, b, c)
        first = star[0]
        i = first.index(v)
        a, b = first[(i + 1) % 3], first[(i + 2) % 3]
        c = next(x for f in star for x in f if x not in (v, a, b))
        faces = [f for f in faces if v not in f] + [(a, b, c)]
        alive.discard(v)
        records.append(RemovalRecord(v, (a, b, c)))
    labels = tuple(sorted(alive))
    relabel = {old: new for new, old in enumerate(labels, start=1)}
    reduced = Triangulation(
        len(labels), tuple(tuple(relabel[x] for x in f) for f in faces)
    )
    return Reduction(reduced, tuple(records), labels, stuck)


def replay_records(reduction: Reduction) -> Triangulation:
    """Undo a reduction: reinsert removed vertices as face subdivisions.

    Labels of the result are the original labels, so it can be compared to
    the input directly.
    """
    faces = [tuple(reduction.original_labels[x - 1] for x in f)
             for f in reduction.triangulation.faces]
    for rec in reversed(reduction.records):
        key = frozenset(rec.link_triangle)
        idx = next(i for i, f in enumerate(faces) if frozenset(f) == key)
        a, b, c = faces.pop(idx)
        v = rec.removed_vertex
        faces.extend([(a, b, v), (b, c, v), (c, a, v)])
    n = len(reduction.original_labels) + len(reduction.records)
    return Triangulation(n, tuple(faces))


# -- generators ------------------------------------------------------------------


def standard_torus(a: int, b: int) -> Triangulation:
    """The a x b grid torus, each square cut along its (i,j)-(i+1,j+1) diagonal."""
    if a < 3 or b < 3:
        raise SurfaceError("standard torus needs a >= 3 and b >= 3")

    def lab(i, j):
        return (i % a) * b + (j % b) + 1

    faces = []
    for i in range(a):
        for j in range(b):
            faces.append((lab(i, j), lab(i + 1, j), lab(i + 1, j + 1)))
            faces.append((lab(i, j), lab(i + 1, j + 1), lab(i, j + 1)))
    return Triangulation(a * b, tuple(faces))


def octahedron() -> Triangulation:
    return Triangulation(6, ((1, 2, 3), (1, 2, 4), (1, 3, 5), (1, 4, 5),
                             (2, 3, 6), (2, 4, 6), (3, 5, 6), (4, 5, 6)))


def simplex_boundary() -> Triangulation:
    return Triangulation(4, ((1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)))


def moebius_torus() -> Triangulation:
    """Möbius' 7-vertex torus: the two Z_7 orbits {i,i+1,i+3} and {i,i+2,i+3}."""
    faces = []
    for i in range(7):
        faces.append(tuple(((i + d) % 7) + 1 for d in (0, 1, 3)))
        faces.append(tuple(((i + d) % 7) + 1 for d in (0, 2, 3)))
    return Triangulation(7, tuple(faces))


GENERATORS = {
    "standard_torus": standard_torus,
    "octahedron": octahedron,
    "simplex_boundary": simplex_boundary,
    "moebius_torus": moebius_torus,
}


def generate(kind: str, *params: int) -> Triangulation:
    try:
        fn = GENERATORS[kind]
    except KeyError:
        raise SurfaceError(f"unknown generator {kind!r}") from None
    return fn(*params)


def non_face_triangles(t: Triangulation) -> List[Face]:
    """All vertex triples that are not faces, in lexicographic order."""
    _require_sphere(t)
    faces = t.face_sets
    return [c for c in combinations(range(1, t.n + 1), 3) if frozenset(c) not in faces]


def is_isomorphic(s: Triangulation, t: Triangulation) -> bool:
    """Brute-force isomorphism test by backtracking; fine for small inputs."""
    if s.n != t.n or len(s.faces) != len(t.faces):
        return False
    sf = s.face_sets
    tf = t.face_sets
    s_adj = defaultdict(set)
    for f in s.faces:
        for x in f:
            s_adj[x].update(y for y in f if y != x)
    t_adj = defaultdict(set)
    for f in t.faces:
        for x in f:
            t_adj[x].update(y for y in f if y != x)
    order = list(range(1, s.n + 1))
    mapping: Dict[int, int] = {}
    used = set()

    def consistent(x, y):
        if len(s_adj[x]) != len(t_adj[y]):
            return False
        for z in s_adj[x]:
            if z in mapping and mapping[z] not in t_adj[y]:
                return False
        return True

    def extend(k):
        if k == len(order):
            return {frozenset(mapping[x] for x in f) for f in sf} == set(tf)
        x = order[k]
        for y in range(1, t.n + 1):
            if y not in used and consistent(x, y):
                mapping[x] = y
                used.add(y)
                if extend(k + 1):
                    return True
                del mapping[x]
                used.discard(y)
        return False

    return extend(0)
