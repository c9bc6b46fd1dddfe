"""Pure-Python implementation of the hot kernels.

Mirrors ``_kernels.pyx`` operation for operation, including the order of
floating-point operations, so both backends produce bit-identical values.
Used whenever the compiled extension is unavailable or disabled.
"""

from __future__ import annotations

from math import sqrt

BACKEND = "python"


def orient(p, q, r, s):
    """det(q - p, r - p, s - p) as an exact integer."""
    ux, uy, uz = q[0] - p[0], q[1] - p[1], q[2] - p[2]
    vx, vy, vz = r[0] - p[0], r[1] - p[1], r[2] - p[2]
    wx, wy, wz = s[0] - p[0], s[1] - p[1], s[2] - p[2]
    return (
        (uy * vz - uz * vy) * wx
        + (uz * vx - ux * vz) * wy
        + (ux * vy - uy * vx) * wz
    )


def _edge_point(p, q, op, oq, base):
    """Float point where segment pq crosses the plane with signed values op, oq."""
    den = float(op - oq)
    fp, fq = float(op), float(oq)
    return (
        (fp * (q[0] - base[0]) - fq * (p[0] - base[0])) / den,
        (fp * (q[1] - base[1]) - fq * (p[1] - base[1])) / den,
        (fp * (q[2] - base[2]) - fq * (p[2] - base[2])) / den,
    )


def _same(x, y):
    return (x > 0) == (y > 0)


def disjoint_pair(a, b, c, d, e, f):
    """Triangles abc and def with no common vertex, points in general position."""
    oa = orient(d, e, f, a)
    ob = orient(d, e, f, b)
    oc = orient(d, e, f, c)
    if _same(oa, ob) and _same(ob, oc):
        return False, 0.0
    od = orient(a, b, c, d)
    oe = orient(a, b, c, e)
    of = orient(a, b, c, f)
    if _same(od, oe) and _same(oe, of):
        return False, 0.0

    # rotate so that a (resp. d) is the vertex alone on its side
    if _same(oa, ob):
        a, b, c = c, a, b
        oa, ob, oc = oc, oa, ob
    elif _same(oa, oc):
        a, b, c = b, c, a
        oa, ob, oc = ob, oc, oa
    if _same(od, oe):
        d, e, f = f, d, e
        od, oe, of = of, od, oe
    elif _same(od, of):
        d, e, f = e, f, d
        od, oe, of = oe, of, od
    # make a lie on the positive side of def and d on the positive side of abc
    if oa < 0:
        e, f = f, e
        oe, of = of, oe
        oa, ob, oc = -oa, -ob, -oc
    if od < 0:
        b, c = c, b
        ob, oc = oc, ob
        od, oe, of = -od, -oe, -of

    if orient(a, b, d, e) > 0 or orient(a, c, f, d) > 0:
        return False, 0.0

    # the intervals overlap; measure the overlap along the common line
    i1 = _edge_point(a, b, oa, ob, a)
    j1 = _edge_point(a, c, oa, oc, a)
    i2 = _edge_point(d, e, od, oe, a)
    j2 = _edge_point(d, f, od, of, a)
    return True, _overlap(i1, j1, i2, j2)


def _overlap(i1, j1, i2, j2):
    dx, dy, dz = j1[0] - i1[0], j1[1] - i1[1], j1[2] - i1[2]
    if dx * dx + dy * dy + dz * dz == 0.0:
        dx, dy, dz = j2[0] - i2[0], j2[1] - i2[1], j2[2] - i2[2]
    norm = sqrt(dx * dx + dy * dy + dz * dz)
    if norm == 0.0:
        return 0.0
    dx, dy, dz = dx / norm, dy / norm, dz / norm
    s1 = i1[0] * dx + i1[1] * dy + i1[2] * dz
    t1 = j1[0] * dx + j1[1] * dy + j1[2] * dz
    s2 = i2[0] * dx + i2[1] * dy + i2[2] * dz
    t2 = j2[0] * dx + j2[1] * dy + j2[2] * dz
    lo1, hi1 = (s1, t1) if s1 <= t1 else (t1, s1)
    lo2, hi2 = (s2, t2) if s2 <= t2 else (t2, s2)
    lo = lo1 if lo1 >= lo2 else lo2
    hi = hi1 if hi1 <= hi2 else hi2
    return hi - lo if hi > lo else 0.0


def shared_pair(p, a, b, c, d):
    """Triangles pab and pcd sharing exactly the vertex p."""
    sa = orient(p, c, d, a)
    sb = orient(p, c, d, b)
    if _same(sa, sb):
        return False, 0.0
    sc = orient(p, a, b, c)
    sd = orient(p, a, b, d)
    if _same(sc, sd):
        return False, 0.0
    # the ray of pcd along the common line must fall inside the angle apb
    if not _same(orient(p, a, d, c), sc):
        return False, 0.0
    if _same(orient(p, b, d, c), sc):
        return False, 0.0
    x1 = _edge_point(a, b, sa, sb, p)
    x2 = _edge_point(c, d, sc, sd, p)
    l1 = sqrt(x1[0] * x1[0] + x1[1] * x1[1] + x1[2] * x1[2])
    l2 = sqrt(x2[0] * x2[0] + x2[1] * x2[1] + x2[2] * x2[2])
    return True, (l1 if l1 <= l2 else l2)


def pair_contribution(t1, t2):
    """Classify two triangles given as coordinate triples (shared = equal points)."""
    shared = [p for p in t1 if p in t2]
    if len(shared) >= 2:
        return False, 0.0
    if len(shared) == 1:
        p = shared[0]
        a, b = [q for q in t1 if q != p]
        c, d = [q for q in t2 if q != p]
        return shared_pair(p, a, b, c, d)
    return disjoint_pair(t1[0], t1[1], t1[2], t2[0], t2[1], t2[2])


def point_in_general_position(points, v, pos):
    """Is ``pos`` (standing in for vertex v; v=-1 for a new point) in general
    position with respect to every other point?"""
    others = [points[i] for i in range(len(points)) if i != v]
    m = len(others)
    px, py, pz = pos
    diffs = [(q[0] - px, q[1] - py, q[2] - pz) for q in others]
    for i in range(m):
        if diffs[i] == (0, 0, 0):
            return False
    for i in range(m):
        ux, uy, uz = diffs[i]
        for j in range(i + 1, m):
            vx, vy, vz = diffs[j]
            cx = uy * vz - uz * vy
            cy = uz * vx - ux * vz
            cz = ux * vy - uy * vx
            if cx == 0 and cy == 0 and cz == 0:
                return False
            for k in range(j + 1, m):
                wx, wy, wz = diffs[k]
                if cx * wx + cy * wy + cz * wz == 0:
                    return False
    return True


class Engine:
    """Pair cache with staged single-vertex moves and position swaps.

    ``pairs`` rows are (kind, cls, v0..v5): kind 0 means triangles v0v1v2 and
    v3v4v5 share no vertex; kind 1 means triangles v0v1v2 and v0v3v4 share v0
    (v5 unused). ``cls`` is a small integer used to select pair subsets.
    """

    def __init__(self, coords, pairs, edges, box_lo, box_hi):
        self.n = len(coords)
        self.coords = [tuple(int(c) for c in p) for p in coords]
        self.kind = [int(r[0]) for r in pairs]
        self.cls = [int(r[1]) for r in pairs]
        self.pv = [tuple(int(x) for x in r[2:8]) for r in pairs]
        self.edges = [(int(u), int(w)) for u, w in edges]
        self.box_lo = int(box_lo)
        self.box_hi = int(box_hi)
        npairs = len(self.pv)
        self.vpairs = [[] for _ in range(self.n)]
        for idx in range(npairs):
            verts = self.pv[idx][:5] if self.kind[idx] == 1 else self.pv[idx]
            for x in sorted(set(verts)):
                self.vpairs[x].append(idx)
        self.vedges = [[] for _ in range(self.n)]
        for idx, (u, w) in enumerate(self.edges):
            self.vedges[u].append(idx)
            self.vedges[w].append(idx)
        self.flags = [0] * npairs
        self.lengths = [0.0] * npairs
        self.elen = [0.0] * len(self.edges)
        self._staged = None
        self.recompute()

    # -- evaluation --------------------------------------------------------

    def _eval_pair(self, idx, coords):
        r = self.pv[idx]
        if self.kind[idx] == 1:
            return shared_pair(coords[r[0]], coords[r[1]], coords[r[2]],
                               coords[r[3]], coords[r[4]])
        return disjoint_pair(coords[r[0]], coords[r[1]], coords[r[2]],
                             coords[r[3]], coords[r[4]], coords[r[5]])

    def _edge_len(self, idx, coords):
        u, w = self.edges[idx]
        p, q = coords[u], coords[w]
        dx, dy, dz = float(q[0] - p[0]), float(q[1] - p[1]), float(q[2] - p[2])
        return sqrt(dx * dx + dy * dy + dz * dz)

    def recompute(self):
        for idx in range(len(self.pv)):
            flag, length = self._eval_pair(idx, self.coords)
            self.flags[idx] = 1 if flag else 0
            self.lengths[idx] = length
        for idx in range(len(self.edges)):
            self.elen[idx] = self._edge_len(idx, self.coords)
        self._staged = None

    def pair_state(self):
        return list(self.flags), list(self.lengths)

    def get_coords(self):
        return [tuple(p) for p in self.coords]

    @staticmethod
    def _sum(lengths, cls, mask):
        total = 0.0
        for idx in range(len(lengths)):
            if (mask >> cls[idx]) & 1:
                total += lengths[idx]
        return total

    @staticmethod
    def _count(flags, cls, mask):
        count = 0
        for idx in range(len(flags)):
            if flags[idx] and (mask >> cls[idx]) & 1:
                count += 1
        return count

    @staticmethod
    def _esum(elen):
        total = 0.0
        for x in elen:
            total += x
        return total

    def value(self, mask):
        return self._sum(self.lengths, self.cls, mask)

    def improper(self, mask):
        return self._count(self.flags, self.cls, mask)

    def edge_total(self):
        return self._esum(self.elen)

    # -- staged moves ------------------------------------------------------

    def _stage(self, moved):
        coords = list(self.coords)
        for v, pos in moved:
            coords[v] = pos
        touched = sorted({idx for v, _ in moved for idx in self.vpairs[v]})
        etouched = sorted({idx for v, _ in moved for idx in self.vedges[v]})
        flags = list(self.flags)
        lengths = list(self.lengths)
        for idx in touched:
            flag, length = self._eval_pair(idx, coords)
            flags[idx] = 1 if flag else 0
            lengths[idx] = length
        elen = list(self.elen)
        for idx in etouched:
            elen[idx] = self._edge_len(idx, coords)
        self._staged = (coords, flags, lengths, elen)

    def propose_move(self, v, x, y, z):
        """Stage moving v to (x, y, z).

        Returns -1 outside the box, 0 if general position breaks, 1 when
        staged.
        """
        lo, hi = self.box_lo, self.box_hi
        if not (lo <= x <= hi and lo <= y <= hi and lo <= z <= hi):
            self._staged = None
            return -1
        if not point_in_general_position(self.coords, v, (x, y, z)):
            self._staged = None
            return 0
        self._stage([(v, (x, y, z))])
        return 1

    def propose_swap(self, u, w):
        self._stage([(u, self.coords[w]), (w, self.coords[u])])
        return 1

    def staged_value(self, mask):
        return self._sum(self._staged[2], self.cls, mask)

    def staged_improper(self, mask):
        return self._count(self._staged[1], self.cls, mask)

    def staged_edge_total(self):
        return self._esum(self._staged[3])

    def commit(self):
        if self._staged is None:
            raise RuntimeError("nothing staged")
        self.coords, self.flags, self.lengths, self.elen = self._staged
        self._staged = None

    def discard(self):
        self._staged = None
