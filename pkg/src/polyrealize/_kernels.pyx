# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels: exact pair classification, general-position checks
and the incremental pair cache.

Floating-point expressions follow ``_pykernels`` operation for operation so
that both backends return identical doubles.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt

from . import _pykernels

BACKEND = "cython"

ctypedef long long i64

# Coordinates must satisfy |x| <= COORD_LIMIT so that every determinant and
# every difference of two determinants fits in 64 bits.
COORD_LIMIT = 262144
cdef i64 _LIMIT = COORD_LIMIT


cdef inline i64 _orient(const i64* p, const i64* q, const i64* r, const i64* s) nogil:
    cdef i64 ux = q[0] - p[0], uy = q[1] - p[1], uz = q[2] - p[2]
    cdef i64 vx = r[0] - p[0], vy = r[1] - p[1], vz = r[2] - p[2]
    cdef i64 wx = s[0] - p[0], wy = s[1] - p[1], wz = s[2] - p[2]
    return ((uy * vz - uz * vy) * wx
            + (uz * vx - ux * vz) * wy
            + (ux * vy - uy * vx) * wz)


cdef inline bint _same(i64 x, i64 y) nogil:
    return (x > 0) == (y > 0)


cdef inline void _edge_point(const i64* p, const i64* q, i64 op, i64 oq,
                             const i64* base, double* out) nogil:
    cdef double den = <double>(op - oq)
    cdef double fp = <double>op, fq = <double>oq
    out[0] = (fp * <double>(q[0] - base[0]) - fq * <double>(p[0] - base[0])) / den
    out[1] = (fp * <double>(q[1] - base[1]) - fq * <double>(p[1] - base[1])) / den
    out[2] = (fp * <double>(q[2] - base[2]) - fq * <double>(p[2] - base[2])) / den


cdef double _overlap(double* i1, double* j1, double* i2, double* j2) nogil:
    cdef double dx = j1[0] - i1[0], dy = j1[1] - i1[1], dz = j1[2] - i1[2]
    cdef double norm, s1, t1, s2, t2, lo1, hi1, lo2, hi2, lo, hi
    if dx * dx + dy * dy + dz * dz == 0.0:
        dx = j2[0] - i2[0]
        dy = j2[1] - i2[1]
        dz = j2[2] - i2[2]
    norm = sqrt(dx * dx + dy * dy + dz * dz)
    if norm == 0.0:
        return 0.0
    dx = dx / norm
    dy = dy / norm
    dz = dz / norm
    s1 = i1[0] * dx + i1[1] * dy + i1[2] * dz
    t1 = j1[0] * dx + j1[1] * dy + j1[2] * dz
    s2 = i2[0] * dx + i2[1] * dy + i2[2] * dz
    t2 = j2[0] * dx + j2[1] * dy + j2[2] * dz
    if s1 <= t1:
        lo1 = s1
        hi1 = t1
    else:
        lo1 = t1
        hi1 = s1
    if s2 <= t2:
        lo2 = s2
        hi2 = t2
    else:
        lo2 = t2
        hi2 = s2
    lo = lo1 if lo1 >= lo2 else lo2
    hi = hi1 if hi1 <= hi2 else hi2
    return hi - lo if hi > lo else 0.0


cdef int _disjoint(const i64* a, const i64* b, const i64* c,
                   const i64* d, const i64* e, const i64* f, double* length) nogil:
    cdef i64 oa = _orient(d, e, f, a), ob = _orient(d, e, f, b), oc = _orient(d, e, f, c)
    cdef i64 od, oe, of, tmp
    cdef const i64* t
    cdef double i1[3]
    cdef double j1[3]
    cdef double i2[3]
    cdef double j2[3]
    length[0] = 0.0
    if _same(oa, ob) and _same(ob, oc):
        return 0
    od = _orient(a, b, c, d)
    oe = _orient(a, b, c, e)
    of = _orient(a, b, c, f)
    if _same(od, oe) and _same(oe, of):
        return 0

    if _same(oa, ob):
        t = c; c = b; b = a; a = t
        tmp = oc; oc = ob; ob = oa; oa = tmp
    elif _same(oa, oc):
        t = a; a = b; b = c; c = t
        tmp = oa; oa = ob; ob = oc; oc = tmp
    if _same(od, oe):
        t = f; f = e; e = d; d = t
        tmp = of; of = oe; oe = od; od = tmp
    elif _same(od, of):
        t = d; d = e; e = f; f = t
        tmp = od; od = oe; oe = of; of = tmp
    if oa < 0:
        t = e; e = f; f = t
        tmp = oe; oe = of; of = tmp
        oa = -oa
        ob = -ob
        oc = -oc
    if od < 0:
        t = b; b = c; c = t
        tmp = ob; ob = oc; oc = tmp
        od = -od
        oe = -oe
        of = -of

    if _orient(a, b, d, e) > 0 or _orient(a, c, f, d) > 0:
        return 0

    _edge_point(a, b, oa, ob, a, i1)
    _edge_point(a, c, oa, oc, a, j1)
    _edge_point(d, e, od, oe, a, i2)
    _edge_point(d, f, od, of, a, j2)
    length[0] = _overlap(i1, j1, i2, j2)
    return 1


cdef int _shared(const i64* p, const i64* a, const i64* b,
                 const i64* c, const i64* d, double* length) nogil:
    cdef i64 sa, sb, sc, sd
    cdef double x1[3]
    cdef double x2[3]
    cdef double l1, l2
    length[0] = 0.0
    sa = _orient(p, c, d, a)
    sb = _orient(p, c, d, b)
    if _same(sa, sb):
        return 0
    sc = _orient(p, a, b, c)
    sd = _orient(p, a, b, d)
    if _same(sc, sd):
        return 0
    if not _same(_orient(p, a, d, c), sc):
        return 0
    if _same(_orient(p, b, d, c), sc):
        return 0
    _edge_point(a, b, sa, sb, p, x1)
    _edge_point(c, d, sc, sd, p, x2)
    l1 = sqrt(x1[0] * x1[0] + x1[1] * x1[1] + x1[2] * x1[2])
    l2 = sqrt(x2[0] * x2[0] + x2[1] * x2[1] + x2[2] * x2[2])
    length[0] = l1 if l1 <= l2 else l2
    return 1


cdef bint _point_ok(const i64* coords, int n, int v, i64 px, i64 py, i64 pz,
                    i64* diffs) nogil:
    """General position of point p (replacing vertex v) against all others.

    ``diffs`` is scratch space for 3*n values.
    """
    cdef int m = 0, i, j, k
    cdef i64 ux, uy, uz, vx, vy, vz, cx, cy, cz
    for i in range(n):
        if i == v:
            continue
        diffs[3 * m] = coords[3 * i] - px
        diffs[3 * m + 1] = coords[3 * i + 1] - py
        diffs[3 * m + 2] = coords[3 * i + 2] - pz
        if diffs[3 * m] == 0 and diffs[3 * m + 1] == 0 and diffs[3 * m + 2] == 0:
            return False
        m += 1
    for i in range(m):
        ux = diffs[3 * i]
        uy = diffs[3 * i + 1]
        uz = diffs[3 * i + 2]
        for j in range(i + 1, m):
            vx = diffs[3 * j]
            vy = diffs[3 * j + 1]
            vz = diffs[3 * j + 2]
            cx = uy * vz - uz * vy
            cy = uz * vx - ux * vz
            cz = ux * vy - uy * vx
            if cx == 0 and cy == 0 and cz == 0:
                return False
            for k in range(j + 1, m):
                if cx * diffs[3 * k] + cy * diffs[3 * k + 1] + cz * diffs[3 * k + 2] == 0:
                    return False
    return True


def _fits(points):
    for p in points:
        for x in p:
            if x > COORD_LIMIT or x < -COORD_LIMIT:
                return False
    return True


def orient(p, q, r, s):
    if not _fits((p, q, r, s)):
        return _pykernels.orient(p, q, r, s)
    cdef i64 buf[12]
    cdef int k
    for k in range(3):
        buf[k] = p[k]
        buf[3 + k] = q[k]
        buf[6 + k] = r[k]
        buf[9 + k] = s[k]
    return _orient(buf, buf + 3, buf + 6, buf + 9)


def pair_contribution(t1, t2):
    shared = [p for p in t1 if p in t2]
    if len(shared) >= 2:
        return False, 0.0
    if not _fits(tuple(t1) + tuple(t2)):
        return _pykernels.pair_contribution(t1, t2)
    cdef i64 buf[18]
    cdef double length = 0.0
    cdef int flag, k, slot
    if len(shared) == 1:
        p = shared[0]
        rest = [p] + [q for q in t1 if q != p] + [q for q in t2 if q != p]
        for slot in range(5):
            for k in range(3):
                buf[3 * slot + k] = rest[slot][k]
        flag = _shared(buf, buf + 3, buf + 6, buf + 9, buf + 12, &length)
    else:
        rest = list(t1) + list(t2)
        for slot in range(6):
            for k in range(3):
                buf[3 * slot + k] = rest[slot][k]
        flag = _disjoint(buf, buf + 3, buf + 6, buf + 9, buf + 12, buf + 15, &length)
    return bool(flag), length


def point_in_general_position(points, int v, pos):
    pts = [tuple(p) for p in points]
    if not _fits(pts + [tuple(pos)]):
        return _pykernels.point_in_general_position(pts, v, pos)
    cdef int n = len(pts)
    cdef cnp.ndarray[i64, ndim=2, mode="c"] arr = np.zeros((max(n, 1), 3), dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1, mode="c"] scratch = np.zeros(3 * max(n, 1), dtype=np.int64)
    cdef int i
    for i in range(n):
        arr[i, 0] = pts[i][0]
        arr[i, 1] = pts[i][1]
        arr[i, 2] = pts[i][2]
    return bool(_point_ok(&arr[0, 0], n, v, pos[0], pos[1], pos[2], &scratch[0]))


cdef class Engine:
    """Pair cache with staged single-vertex moves and position swaps.

    Same contract as ``_pykernels.Engine``.
    """

    cdef public int n
    cdef int npairs, nedges
    cdef i64 box_lo, box_hi
    cdef i64[:, ::1] coords
    cdef i64[:, ::1] scoords
    cdef signed char[::1] kind
    cdef signed char[::1] cls
    cdef int[:, ::1] pv
    cdef signed char[::1] flags
    cdef double[::1] lengths
    cdef int[:, ::1] edges
    cdef double[::1] elen
    cdef int[::1] vptr
    cdef int[::1] vpairs
    cdef int[::1] eptr
    cdef int[::1] vedges
    # staging
    cdef bint staged
    cdef int[::1] slot
    cdef int[::1] touched
    cdef int ntouched
    cdef signed char[::1] sflags
    cdef double[::1] slengths
    cdef int[::1] eslot
    cdef int[::1] etouched
    cdef int netouched
    cdef double[::1] selen
    cdef i64[::1] scratch
    cdef object _pending
    cdef int _pending_v
    cdef int _pending_w

    def __init__(self, coords, pairs, edges, box_lo, box_hi):
        cdef int i, k, idx, x
        if box_lo < -_LIMIT or box_hi > _LIMIT:
            raise ValueError("bounding box exceeds the compiled kernel's coordinate range")
        self.box_lo = box_lo
        self.box_hi = box_hi
        self.coords = np.ascontiguousarray(np.asarray(coords, dtype=np.int64).reshape(-1, 3))
        self.n = self.coords.shape[0]
        if not _fits(np.asarray(self.coords).tolist()):
            raise ValueError("coordinates exceed the compiled kernel's range")
        self.scoords = np.array(self.coords, dtype=np.int64)
        parr = np.asarray(pairs, dtype=np.int64).reshape(-1, 8)
        self.npairs = parr.shape[0]
        self.kind = np.ascontiguousarray(parr[:, 0], dtype=np.int8)
        self.cls = np.ascontiguousarray(parr[:, 1], dtype=np.int8)
        self.pv = np.ascontiguousarray(parr[:, 2:8], dtype=np.int32)
        earr = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        self.nedges = earr.shape[0]
        self.edges = np.ascontiguousarray(earr, dtype=np.int32)

        buckets = [[] for _ in range(self.n)]
        for idx in range(self.npairs):
            verts = set()
            for k in range(5 if self.kind[idx] == 1 else 6):
                verts.add(self.pv[idx, k])
            for x in sorted(verts):
                buckets[x].append(idx)
        self.vptr, self.vpairs = _csr(buckets)
        ebuckets = [[] for _ in range(self.n)]
        for idx in range(self.nedges):
            ebuckets[self.edges[idx, 0]].append(idx)
            ebuckets[self.edges[idx, 1]].append(idx)
        self.eptr, self.vedges = _csr(ebuckets)

        self.flags = np.zeros(self.npairs, dtype=np.int8)
        self.lengths = np.zeros(self.npairs, dtype=np.float64)
        self.elen = np.zeros(self.nedges, dtype=np.float64)
        self.slot = np.full(self.npairs, -1, dtype=np.int32)
        self.touched = np.zeros(self.npairs, dtype=np.int32)
        self.sflags = np.zeros(self.npairs, dtype=np.int8)
        self.slengths = np.zeros(self.npairs, dtype=np.float64)
        self.eslot = np.full(self.nedges, -1, dtype=np.int32)
        self.etouched = np.zeros(self.nedges, dtype=np.int32)
        self.selen = np.zeros(self.nedges, dtype=np.float64)
        self.scratch = np.zeros(3 * max(self.n, 1), dtype=np.int64)
        self.staged = False
        self.recompute()

    cdef int _eval(self, int idx, i64[:, ::1] c, double* length):
        cdef int[:, ::1] pv = self.pv
        if self.kind[idx] == 1:
            return _shared(&c[pv[idx, 0], 0], &c[pv[idx, 1], 0], &c[pv[idx, 2], 0],
                           &c[pv[idx, 3], 0], &c[pv[idx, 4], 0], length)
        return _disjoint(&c[pv[idx, 0], 0], &c[pv[idx, 1], 0], &c[pv[idx, 2], 0],
                         &c[pv[idx, 3], 0], &c[pv[idx, 4], 0], &c[pv[idx, 5], 0], length)

    cdef double _edge_len(self, int idx, i64[:, ::1] c):
        cdef int u = self.edges[idx, 0], w = self.edges[idx, 1]
        cdef double dx = <double>(c[w, 0] - c[u, 0])
        cdef double dy = <double>(c[w, 1] - c[u, 1])
        cdef double dz = <double>(c[w, 2] - c[u, 2])
        return sqrt(dx * dx + dy * dy + dz * dz)

    def recompute(self):
        cdef int idx
        cdef double length
        for idx in range(self.npairs):
            self.flags[idx] = self._eval(idx, self.coords, &length)
            self.lengths[idx] = length
        for idx in range(self.nedges):
            self.elen[idx] = self._edge_len(idx, self.coords)
        self._clear_stage()

    def pair_state(self):
        return [int(x) for x in self.flags], [float(x) for x in self.lengths]

    def get_coords(self):
        return [(int(self.coords[i, 0]), int(self.coords[i, 1]), int(self.coords[i, 2]))
                for i in range(self.n)]

    cdef double _sum(self, bint use_stage, int mask):
        cdef double total = 0.0
        cdef int idx, s
        for idx in range(self.npairs):
            if (mask >> self.cls[idx]) & 1:
                s = self.slot[idx] if use_stage else -1
                if s >= 0:
                    total += self.slengths[s]
                else:
                    total += self.lengths[idx]
        return total

    cdef int _count(self, bint use_stage, int mask):
        cdef int count = 0, idx, s, f
        for idx in range(self.npairs):
            if (mask >> self.cls[idx]) & 1:
                s = self.slot[idx] if use_stage else -1
                f = self.sflags[s] if s >= 0 else self.flags[idx]
                if f:
                    count += 1
        return count

    cdef double _esum(self, bint use_stage):
        cdef double total = 0.0
        cdef int idx, s
        for idx in range(self.nedges):
            s = self.eslot[idx] if use_stage else -1
            if s >= 0:
                total += self.selen[s]
            else:
                total += self.elen[idx]
        return total

    def value(self, int mask):
        return self._sum(False, mask)

    def improper(self, int mask):
        return self._count(False, mask)

    def edge_total(self):
        return self._esum(False)

    cdef void _clear_stage(self):
        cdef int k
        for k in range(self.ntouched):
            self.slot[self.touched[k]] = -1
        for k in range(self.netouched):
            self.eslot[self.etouched[k]] = -1
        self.ntouched = 0
        self.netouched = 0
        self.staged = False

    cdef void _stage(self, int u, int w):
        """Recompute everything touching vertices u and w (w may be -1)
        against ``scoords``, which must already hold the new positions."""
        cdef int k, idx, s
        cdef double length
        for k in range(self.vptr[u], self.vptr[u + 1]):
            idx = self.vpairs[k]
            self.slot[idx] = self.ntouched
            self.touched[self.ntouched] = idx
            self.ntouched += 1
        if w >= 0:
            for k in range(self.vptr[w], self.vptr[w + 1]):
                idx = self.vpairs[k]
                if self.slot[idx] < 0:
                    self.slot[idx] = self.ntouched
                    self.touched[self.ntouched] = idx
                    self.ntouched += 1
        for s in range(self.ntouched):
            idx = self.touched[s]
            self.sflags[s] = self._eval(idx, self.scoords, &length)
            self.slengths[s] = length
        for k in range(self.eptr[u], self.eptr[u + 1]):
            idx = self.vedges[k]
            self.eslot[idx] = self.netouched
            self.etouched[self.netouched] = idx
            self.netouched += 1
        if w >= 0:
            for k in range(self.eptr[w], self.eptr[w + 1]):
                idx = self.vedges[k]
                if self.eslot[idx] < 0:
                    self.eslot[idx] = self.netouched
                    self.etouched[self.netouched] = idx
                    self.netouched += 1
        for s in range(self.netouched):
            self.selen[s] = self._edge_len(self.etouched[s], self.scoords)
        self.staged = True

    cdef void _sync_scoords(self):
        cdef int i, k
        for i in range(self.n):
            for k in range(3):
                self.scoords[i, k] = self.coords[i, k]

    def propose_move(self, int v, i64 x, i64 y, i64 z):
        self._clear_stage()
        if x < self.box_lo or x > self.box_hi or y < self.box_lo or y > self.box_hi \
                or z < self.box_lo or z > self.box_hi:
            return -1
        if not _point_ok(&self.coords[0, 0], self.n, v, x, y, z, &self.scratch[0]):
            return 0
        self.scoords[v, 0] = x
        self.scoords[v, 1] = y
        self.scoords[v, 2] = z
        self._stage(v, -1)
        self.scoords[v, 0] = self.coords[v, 0]
        self.scoords[v, 1] = self.coords[v, 1]
        self.scoords[v, 2] = self.coords[v, 2]
        self._pending_v = v
        self._pending = (x, y, z)
        return 1

    def propose_swap(self, int u, int w):
        cdef int k
        self._clear_stage()
        for k in range(3):
            self.scoords[u, k] = self.coords[w, k]
            self.scoords[w, k] = self.coords[u, k]
        self._stage(u, w)
        for k in range(3):
            self.scoords[u, k] = self.coords[u, k]
            self.scoords[w, k] = self.coords[w, k]
        self._pending_v = u
        self._pending_w = w
        self._pending = None
        return 1

    def staged_value(self, int mask):
        return self._sum(True, mask)

    def staged_improper(self, int mask):
        return self._count(True, mask)

    def staged_edge_total(self):
        return self._esum(True)

    def commit(self):
        cdef int s, idx, k, u, w
        cdef i64 tmp
        if not self.staged:
            raise RuntimeError("nothing staged")
        for s in range(self.ntouched):
            idx = self.touched[s]
            self.flags[idx] = self.sflags[s]
            self.lengths[idx] = self.slengths[s]
        for s in range(self.netouched):
            self.elen[self.etouched[s]] = self.selen[s]
        if self._pending is None:
            u = self._pending_v
            w = self._pending_w
            for k in range(3):
                tmp = self.coords[u, k]
                self.coords[u, k] = self.coords[w, k]
                self.coords[w, k] = tmp
                self.scoords[u, k] = self.coords[u, k]
                self.scoords[w, k] = self.coords[w, k]
        else:
            u = self._pending_v
            for k in range(3):
                self.coords[u, k] = self._pending[k]
                self.scoords[u, k] = self._pending[k]
        self._clear_stage()

    def discard(self):
        self._clear_stage()


def _csr(buckets):
    ptr = np.zeros(len(buckets) + 1, dtype=np.int32)
    flat = []
    for i, b in enumerate(buckets):
        flat.extend(b)
        ptr[i + 1] = len(flat)
    return ptr, np.asarray(flat if flat else [0], dtype=np.int32)
