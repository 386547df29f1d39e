"""Planar primitives for curve surgery.

Signed area, segment-intersection certificates for polylines, smoothing, and
two planners for paths that avoid a set of polyline obstacles inside a disk:
a grid A* search with clearance (:func:`connect_in_complement`) and a
topological router over a constrained Delaunay triangulation of the free
space (:class:`WireRouter`), which keeps many connectors mutually disjoint.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import heapq

import numpy as np
import triangle
from scipy import ndimage

from .errors import DomainError, NoPathFound

TWO_PI = 2 * np.pi


@dataclass
class PlanarCurve:
    """Closed polyline carrying a circle parameterization.

    Parameters
    ----------
    points : numpy.ndarray of complex
        Vertices; the last connects back to the first.
    params : numpy.ndarray of float
        Strictly increasing circle parameters in [0, 2 pi), one per vertex.
    """

    points: np.ndarray
    params: np.ndarray

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=complex).ravel()
        self.params = np.asarray(self.params, dtype=float).ravel()
        if self.points.size != self.params.size or self.points.size < 3:
            raise DomainError("a closed curve needs at least 3 points and one parameter per point")
        if np.any(np.diff(self.params) <= 0) or self.params[0] < 0 or self.params[-1] >= TWO_PI:
            raise DomainError("params must be strictly increasing in [0, 2 pi)")

    def __len__(self):
        return self.points.size

    def evaluate(self, theta):
        """Periodic linear interpolation of the points at parameters ``theta``."""
        return periodic_interp(theta, self.params, self.points)


@dataclass
class Arc:
    """Open polyline with the parameter interval it came from.

    ``params`` (optional) holds one parameter per point.
    """

    points: np.ndarray
    param_interval: tuple
    params: np.ndarray = field(default=None)

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=complex).ravel()
        if self.points.size < 2:
            raise DomainError("an arc needs at least 2 points")
        if self.params is not None:
            self.params = np.asarray(self.params, dtype=float).ravel()

    @property
    def start(self):
        return complex(self.points[0])

    @property
    def end(self):
        return complex(self.points[-1])


def periodic_interp(theta, params, values):
    """Linear interpolation on the circle through ``(params, values)``."""
    theta = np.mod(np.asarray(theta, dtype=float), TWO_PI)
    xp = np.concatenate([params[-1:] - TWO_PI, params, params[:1] + TWO_PI])
    fp = np.concatenate([values[-1:], values, values[:1]])
    return np.interp(theta, xp, fp.real) + 1j * np.interp(theta, xp, fp.imag)


def _points_of(curve):
    return curve.points if hasattr(curve, "points") else np.asarray(curve, dtype=complex)


def signed_area(curve):
    """Shoelace area of a closed polyline; positive when counterclockwise."""
    z = _points_of(curve)
    x, y = z.real, z.imag
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def turning_angles(path):
    """Absolute turning angle at each interior vertex of an open polyline."""
    z = np.asarray(path, dtype=complex)
    if z.size < 3:
        return np.zeros(0)
    d = np.diff(z)
    with np.errstate(invalid="ignore"):
        ang = np.abs(np.angle(d[1:] / d[:-1]))
    return np.nan_to_num(ang)


# orientation predicates -------------------------------------------------------

_ORIENT_ERR = 8 * np.finfo(float).eps


def _orient_exact(a, b, c):
    ax, ay = Fraction(a.real), Fraction(a.imag)
    bx, by = Fraction(b.real), Fraction(b.imag)
    cx, cy = Fraction(c.real), Fraction(c.imag)
    d = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    return (d > 0) - (d < 0)


def orient(a, b, c):
    """Sign of the turn ``a -> b -> c`` (+1 left, -1 right, 0 collinear).

    Evaluated in floating point with an error bound; uncertain cases are
    recomputed exactly with rationals.
    """
    a, b, c = np.broadcast_arrays(*(np.asarray(v, dtype=complex) for v in (a, b, c)))
    l = (b.real - a.real) * (c.imag - a.imag)
    r = (b.imag - a.imag) * (c.real - a.real)
    det = l - r
    sign = np.sign(det).astype(int)
    unsure = np.abs(det) <= _ORIENT_ERR * (np.abs(l) + np.abs(r))
    if np.any(unsure):
        idx = np.flatnonzero(unsure.ravel())
        flat = sign.ravel()
        af, bf, cf = a.ravel(), b.ravel(), c.ravel()
        for i in idx:
            flat[i] = _orient_exact(af[i], bf[i], cf[i])
        sign = flat.reshape(det.shape)
    return sign


def _on_segment(a, b, c):
    """For collinear a, b, c: whether c lies within the bounding box of segment ab."""
    return (
        (np.minimum(a.real, b.real) <= c.real) & (c.real <= np.maximum(a.real, b.real))
        & (np.minimum(a.imag, b.imag) <= c.imag) & (c.imag <= np.maximum(a.imag, b.imag))
    )


def segments_intersect(p1, p2, q1, q2):
    """Whether closed segments ``[p1, p2]`` and ``[q1, q2]`` share a point (vectorized)."""
    p1, p2, q1, q2 = (np.asarray(v, dtype=complex) for v in (p1, p2, q1, q2))
    o1, o2 = orient(p1, p2, q1), orient(p1, p2, q2)
    o3, o4 = orient(q1, q2, p1), orient(q1, q2, p2)
    proper = (o1 * o2 < 0) & (o3 * o4 < 0)
    touch = (
        ((o1 == 0) & _on_segment(p1, p2, q1))
        | ((o2 == 0) & _on_segment(p1, p2, q2))
        | ((o3 == 0) & _on_segment(q1, q2, p1))
        | ((o4 == 0) & _on_segment(q1, q2, p2))
    )
    return proper | touch


def _candidate_pairs(a, b, chunk=2_000_000):
    """Index pairs ``(i, j), i < j`` of segments whose bounding boxes overlap.

    A sweep over x: segments sorted by left end; each segment is paired with
    the ones whose left end falls inside its x-extent, then filtered by y.
    """
    xmin = np.minimum(a.real, b.real)
    xmax = np.maximum(a.real, b.real)
    ymin = np.minimum(a.imag, b.imag)
    ymax = np.maximum(a.imag, b.imag)
    order = np.argsort(xmin, kind="stable")
    xs = xmin[order]
    hi = np.searchsorted(xs, xmax[order], side="right")
    counts = hi - np.arange(order.size) - 1
    counts = np.maximum(counts, 0)
    starts = np.arange(order.size)
    out_i, out_j = [], []
    # process in chunks of sorted positions to bound memory
    pos = 0
    while pos < order.size:
        csum = np.cumsum(counts[pos:])
        end = pos + max(1, int(np.searchsorted(csum, chunk, side="right")))
        c = counts[pos:end]
        total = int(c.sum())
        if total:
            src = np.repeat(starts[pos:end], c)
            offs = np.arange(total) - np.repeat(np.cumsum(c) - c, c)
            dst = src + 1 + offs
            i, j = order[src], order[dst]
            keep = (ymin[i] <= ymax[j]) & (ymin[j] <= ymax[i])
            out_i.append(i[keep])
            out_j.append(j[keep])
        pos = end
    if not out_i:
        return np.zeros(0, dtype=int), np.zeros(0, dtype=int)
    i, j = np.concatenate(out_i), np.concatenate(out_j)
    return np.minimum(i, j), np.maximum(i, j)


def _drop_repeats(z, closed):
    keep = np.ones(z.size, dtype=bool)
    keep[1:] = z[1:] != z[:-1]
    if closed and z.size > 1 and z[-1] == z[0]:
        keep[-1] = False
    return z[keep], np.flatnonzero(keep)


def _folds_back(a, b, c):
    """Adjacent segments ab, bc overlapping along a line (a reversal at b)."""
    d1, d2 = b - a, c - b
    return (orient(a, b, c) == 0) & ((d1.real * d2.real + d1.imag * d2.imag) < 0)


def crossing_segments(polylines, closed=False):
    """All intersecting pairs of non-adjacent segments in a family of polylines.

    Parameters
    ----------
    polylines : list of array_like
        Each an open polyline (or closed when ``closed`` is true).
    closed : bool

    Returns
    -------
    list of ((line, segment), (line, segment))
        Segment ``k`` of a line joins its vertices ``k`` and ``k + 1``
        (indices in the input, before repeated vertices are removed).
    """
    seg_a, seg_b, line_id, seg_id, orig_id, nsegs = [], [], [], [], [], []
    for li, poly in enumerate(polylines):
        z, kept = _drop_repeats(np.asarray(poly, dtype=complex).ravel(), closed)
        if closed:
            a, b, ids = z, np.roll(z, -1), kept
        else:
            a, b, ids = z[:-1], z[1:], kept[:-1]
        seg_a.append(a)
        seg_b.append(b)
        line_id.append(np.full(a.size, li))
        seg_id.append(np.arange(a.size))
        orig_id.append(ids)
        nsegs.append(a.size)
    if not seg_a:
        return []
    a, b = np.concatenate(seg_a), np.concatenate(seg_b)
    line, local = np.concatenate(line_id), np.concatenate(seg_id)
    orig = np.concatenate(orig_id)
    witnesses = []
    # adjacent segments may only meet at their shared vertex
    same = line[:-1] == line[1:]
    fold = same & _folds_back(a[:-1], b[:-1], b[1:])
    for k in np.flatnonzero(fold):
        witnesses.append(((int(line[k]), int(orig[k])), (int(line[k + 1]), int(orig[k + 1]))))
    if closed:
        starts = np.concatenate([[0], np.cumsum(nsegs)[:-1]])
        for s, n in zip(starts, nsegs):
            if n >= 3 and _folds_back(a[s + n - 1], b[s + n - 1], b[s]):
                witnesses.append(((int(line[s]), int(orig[s + n - 1])), (int(line[s]), int(orig[s]))))

    i, j = _candidate_pairs(a, b)
    adjacent = (line[i] == line[j]) & (np.abs(local[i] - local[j]) == 1)
    if closed:
        n_of = np.asarray(nsegs)[line[i]]
        adjacent |= (line[i] == line[j]) & (np.abs(local[i] - local[j]) == n_of - 1)
    i, j = i[~adjacent], j[~adjacent]
    hit = segments_intersect(a[i], b[i], a[j], b[j])
    for k in np.flatnonzero(hit):
        ii, jj = i[k], j[k]
        witnesses.append(((int(line[ii]), int(orig[ii])), (int(line[jj]), int(orig[jj]))))
    witnesses.sort()
    return witnesses


def intersection_point(p1, p2, q1, q2):
    """Common point of two intersecting segments (midpoint of the overlap when collinear)."""
    d, e = p2 - p1, q2 - q1
    den = d.real * e.imag - d.imag * e.real
    if den == 0:
        ends = [w for w in (p1, p2, q1, q2) if _on_segment(p1, p2, w) and _on_segment(q1, q2, w)]
        return sum(ends) / len(ends) if ends else 0.5 * (p1 + q1)
    w = q1 - p1
    s = (w.real * e.imag - w.imag * e.real) / den
    return p1 + s * d


def polyline_is_simple(curve, closed=True):
    """Whether a polyline has no self-intersections.

    Non-adjacent segments must be disjoint; adjacent segments may share only
    their common vertex.

    Returns
    -------
    (bool, list of (int, int))
        The witnesses are index pairs of intersecting segments.
    """
    z = _points_of(curve)
    pairs = crossing_segments([z], closed=closed)
    witnesses = [(s1[1], s2[1]) for s1, s2 in pairs]
    return not witnesses, witnesses


def smooth_path(path, rounds):
    """Chaikin corner cutting with fixed endpoints.

    Each round replaces every interior corner by the points at 1/4 and 3/4
    of its two incident segments.
    """
    z = np.asarray(path, dtype=complex).ravel()
    if rounds < 0:
        raise DomainError("rounds must be nonnegative")
    for _ in range(int(rounds)):
        if z.size < 3:
            break
        q = 0.75 * z[:-1] + 0.25 * z[1:]
        r = 0.25 * z[:-1] + 0.75 * z[1:]
        inner = np.empty(2 * (z.size - 1), dtype=complex)
        inner[0::2], inner[1::2] = q, r
        z = np.concatenate([z[:1], inner[1:-1], z[-1:]])
    return z


# grid planner ------------------------------------------------------------------

_MAX_GRID = 1024


def _rasterize(obstacles, origin, cell, shape):
    mask = np.zeros(shape, dtype=bool)
    for arc in obstacles:
        z = np.asarray(arc.points if hasattr(arc, "points") else arc, dtype=complex)
        seg = np.diff(z)
        n = np.maximum(1, np.ceil(np.abs(seg) / (0.5 * cell)).astype(int))
        for a, d, k in zip(z[:-1], seg, n):
            pts = a + d * np.linspace(0, 1, k + 1)
            ix = np.floor((pts.real - origin.real) / cell).astype(int)
            iy = np.floor((pts.imag - origin.imag) / cell).astype(int)
            ok = (ix >= 0) & (ix < shape[0]) & (iy >= 0) & (iy < shape[1])
            mask[ix[ok], iy[ok]] = True
    return mask


def _astar(free, start, goal):
    """Octile-heuristic A* on an 8-connected boolean grid."""
    sq2 = np.sqrt(2.0)
    nx, ny = free.shape

    def h(c):
        dx, dy = abs(c[0] - goal[0]), abs(c[1] - goal[1])
        return (dx + dy) + (sq2 - 2) * min(dx, dy)

    g = {start: 0.0}
    parent = {start: None}
    heap = [(h(start), 0.0, start)]
    moves = [(1, 0, 1.0), (-1, 0, 1.0), (0, 1, 1.0), (0, -1, 1.0),
             (1, 1, sq2), (1, -1, sq2), (-1, 1, sq2), (-1, -1, sq2)]
    closed = set()
    while heap:
        _, gc, cur = heapq.heappop(heap)
        if cur in closed:
            continue
        if cur == goal:
            path = []
            while cur is not None:
                path.append(cur)
                cur = parent[cur]
            return path[::-1]
        closed.add(cur)
        for dx, dy, w in moves:
            nxt = (cur[0] + dx, cur[1] + dy)
            if not (0 <= nxt[0] < nx and 0 <= nxt[1] < ny) or not free[nxt]:
                continue
            if dx and dy and not (free[cur[0] + dx, cur[1]] and free[cur[0], cur[1] + dy]):
                continue  # no corner cutting past blocked cells
            cand = gc + w
            if cand < g.get(nxt, np.inf):
                g[nxt] = cand
                parent[nxt] = cur
                heapq.heappush(heap, (cand + h(nxt), cand, nxt))
    return None


def _segment_clear(a, b, dist_field, origin, cell, need):
    n = max(2, int(np.ceil(abs(b - a) / (0.5 * cell))) + 1)
    pts = a + (b - a) * np.linspace(0, 1, n)
    ix = np.clip(np.floor((pts.real - origin.real) / cell).astype(int), 0, dist_field.shape[0] - 1)
    iy = np.clip(np.floor((pts.imag - origin.imag) / cell).astype(int), 0, dist_field.shape[1] - 1)
    return bool(np.all(dist_field[ix, iy] >= need))


def _shortcut(path, clear):
    out = [path[0]]
    i = 0
    while i < len(path) - 1:
        j = len(path) - 1
        while j > i + 1 and not clear(path[i], path[j]):
            j -= 1
        out.append(path[j])
        i = j
    return np.array(out)


def connect_in_complement(obstacles, start, end, clearance, radius, retries=4, smoothing=2):
    """Polyline from ``start`` to ``end`` avoiding obstacles inside ``|w| < radius``.

    A* search on a uniform grid (cell about ``clearance / 4``) whose blocked
    cells are those within ``clearance / 2`` of an obstacle or outside the
    disk, followed by line-of-sight shortcutting and corner cutting.  The
    endpoints themselves may touch obstacles (they are usually arc ends), so
    cells within ``clearance`` of them stay free.  On failure the clearance is
    halved, up to ``retries`` times.

    Raises
    ------
    NoPathFound
    """
    start, end = complex(start), complex(end)
    if abs(start) >= radius or abs(end) >= radius:
        raise DomainError("endpoints must lie inside the disk")
    for _ in range(retries + 1):
        path = _grid_path(obstacles, start, end, clearance, radius, smoothing)
        if path is not None:
            return path
        clearance /= 2
    raise NoPathFound("no path in the free space at any tried clearance")


def _grid_path(obstacles, start, end, clearance, radius, smoothing):
    cell = max(clearance / 4, 2 * radius / _MAX_GRID)
    n = int(np.ceil(2 * radius / cell)) + 1
    origin = complex(-radius, -radius)
    blocked = _rasterize(obstacles, origin, cell, (n, n))
    if blocked.any():
        dist = ndimage.distance_transform_edt(~blocked) * cell
    else:
        dist = np.full((n, n), np.inf)
    cx = origin.real + (np.arange(n) + 0.5) * cell
    X, Y = np.meshgrid(cx, origin.imag + (np.arange(n) + 0.5) * cell, indexing="ij")
    W = X + 1j * Y
    inside = np.abs(W) < radius - cell
    need = clearance / 2 + cell
    free = inside & (dist >= need)
    near_ends = (np.abs(W - start) <= clearance) | (np.abs(W - end) <= clearance)
    free |= near_ends & inside

    def to_cell(w):
        return (int(np.floor((w.real - origin.real) / cell)), int(np.floor((w.imag - origin.imag) / cell)))

    s, e = to_cell(start), to_cell(end)
    if not (free[s] and free[e]):
        return None
    cells = _astar(free, s, e)
    if cells is None:
        return None
    centers = np.array([W[c] for c in cells])
    pts = np.concatenate([[start], centers[1:-1], [end]]) if len(centers) > 2 else np.array([start, end])
    ok_field = np.where(free, np.maximum(dist, need), 0.0)

    def clear(a, b):
        return _segment_clear(a, b, ok_field, origin, cell, need)

    pts = _shortcut(list(pts), clear)
    smooth = smooth_path(pts, smoothing)
    if all(clear(a, b) for a, b in zip(smooth[:-1], smooth[1:])):
        return smooth
    return pts


# triangulation planner ----------------------------------------------------------


class WireRouter:
    """Non-crossing connectors ("wires") routed through a fixed triangulation.

    The disk minus the obstacle polylines is triangulated once.  A wire joins
    two mesh vertices and is stored combinatorially: the ordered list of mesh
    edges it crosses, together with its rank among the other wires crossing
    each edge.  Inside a triangle the wires already present cut it into
    regions, and a new wire may only move between edge slots of the same
    region, so wires never cross by construction.

    Geometry is produced only when drawing: a wire crossing an edge with
    ``k`` wires on it passes through the point at fraction
    ``(rank + 1) / (k + 1)`` of the edge.  Within a convex triangle, chords
    whose endpoints do not interleave along the boundary are disjoint, so the
    drawing is simple and wires keep a separation proportional to the local
    edge length no matter how many of them share a corridor.

    Parameters
    ----------
    obstacles : list of array_like
        Open polylines (complex points); they must not intersect each other.
    radius : float
        The free space is the inscribed polygon of the disk ``|w| < radius``.
    boundary_vertices : int
    """

    def __init__(self, obstacles, radius, boundary_vertices=256):
        ang = TWO_PI * np.arange(boundary_vertices) / boundary_vertices
        ring = radius * np.exp(1j * ang)
        pieces = [np.asarray(p, dtype=complex).ravel() for p in obstacles] + [ring]
        allpts = np.concatenate(pieces)
        xy = np.column_stack([allpts.real, allpts.imag])
        uniq, first, inverse = np.unique(xy, axis=0, return_index=True, return_inverse=True)
        # keep vertices in first-appearance order so ids are stable
        order = np.argsort(first, kind="stable")
        rank = np.empty_like(order)
        rank[order] = np.arange(order.size)
        ids = rank[inverse.ravel()]
        verts = uniq[order]
        segs, offset = [], 0
        for k, piece in enumerate(pieces):
            pid = ids[offset:offset + piece.size]
            offset += piece.size
            if k == len(pieces) - 1:
                pid = np.append(pid, pid[0])
            segs.append(np.column_stack([pid[:-1], pid[1:]]))
        seg = np.concatenate(segs)
        seg = seg[seg[:, 0] != seg[:, 1]]
        try:
            tri = triangle.triangulate({"vertices": verts, "segments": seg.astype(np.int32)}, "pn")
        except RuntimeError as exc:
            raise NoPathFound(f"triangulation failed: {exc}") from exc
        if len(tri["vertices"]) != len(verts):
            raise NoPathFound("obstacles intersect; free space is not a valid planar subdivision")
        self.radius = radius
        self.vertices = tri["vertices"][:, 0] + 1j * tri["vertices"][:, 1]
        self.index = {(float(x), float(y)): i for i, (x, y) in enumerate(verts)}
        self.ring = set(ids[offset - ring.size:offset].tolist())
        T = tri["triangles"].astype(np.int64)
        self.triangles = T
        nv = np.int64(len(verts))

        # edges: local edge i of a triangle joins vertices i and i+1 (opposite vertex i+2)
        a, b = T, np.roll(T, -1, axis=1)
        keys = np.minimum(a, b) + nv * np.maximum(a, b)
        uk, einv = np.unique(keys.ravel(), return_inverse=True)
        self.tri_edges = einv.reshape(T.shape)
        self.edge_lo = uk % nv
        self.edge_hi = uk // nv
        owners = np.full((uk.size, 2), -1, dtype=np.int64)
        flat_t = np.repeat(np.arange(T.shape[0]), 3)
        first_seen = np.zeros(uk.size, dtype=bool)
        for t, e in zip(flat_t.tolist(), einv.tolist()):
            owners[e, 1 if first_seen[e] else 0] = t
            first_seen[e] = True
        self.edge_tris = owners
        s = np.sort(seg.astype(np.int64), axis=1)
        self.blocked = set(np.flatnonzero(np.isin(uk, s[:, 0] + nv * s[:, 1])).tolist())
        self.blocked.update(np.flatnonzero(owners[:, 1] < 0).tolist())
        order = np.argsort(T.ravel(), kind="stable")
        starts = np.searchsorted(T.ravel()[order], np.arange(len(verts) + 1))
        self._vt_order, self._vt_start = order // 3, starts

        self._tri, self._tedges = T.tolist(), self.tri_edges.tolist()
        self._lo, self._hi = self.edge_lo.tolist(), self.edge_hi.tolist()
        self._etris = owners.tolist()
        self._V = self.vertices.tolist()
        self.crossings = {}   # edge -> tokens in order from edge_lo to edge_hi
        self.token_edge = {}
        self.chords = {}      # triangle -> [(wire, mark, mark)], mark = ("v", vertex) or ("e", token)
        self.wires = {}
        self._next_token = 0
        self._next_wire = 0
        self._fractions = None

    def vertex_id(self, w):
        return self.index.get((float(w.real), float(w.imag)))

    def _incident(self, v):
        return self._vt_order[self._vt_start[v]:self._vt_start[v + 1]]

    # combinatorics -------------------------------------------------------------

    def _slot_point(self, e, j):
        k = len(self.crossings.get(e, ()))
        lo, hi = self._V[self._lo[e]], self._V[self._hi[e]]
        return lo + (j + 0.5) / (k + 1) * (hi - lo)

    def _regions(self, t, cache):
        """Region labels in triangle ``t`` for its vertices and edge slots.

        Boundary points get a coordinate in [0, 3): local vertex i sits at i
        and local edge i (from vertex i to i + 1) spans (i, i + 1).  Chords
        do not cross, so their coordinate intervals are nested or disjoint,
        and a point's region is the innermost interval containing it.
        """
        hit = cache.get(t)
        if hit is not None:
            return hit
        tv, te = self._tri[t], self._tedges[t]
        chords = self.chords.get(t)
        points = []  # (coordinate, key)
        where = {}   # token -> coordinate
        for i in range(3):
            points.append((float(i), ("v", tv[i])))
            e = te[i]
            tokens = self.crossings.get(e, ())
            k = len(tokens)
            forward = tv[i] == self._lo[e]
            for r, tok in enumerate(tokens):
                f = (r + 1) / (k + 1)
                where[tok] = i + (f if forward else 1 - f)
            if e in self.blocked:
                continue
            for j in range(k + 1):
                f = (j + 0.5) / (k + 1)
                points.append((i + (f if forward else 1 - f), ("s", e, j)))
        if not chords:
            out = dict.fromkeys((key for _, key in points), -1)
            cache[t] = out
            return out
        vpos = {tv[0]: 0.0, tv[1]: 1.0, tv[2]: 2.0}
        # events at equal coordinates: interval ends, then points, then starts
        events = []
        for n, (_, m1, m2) in enumerate(chords):
            c1 = vpos[m1[1]] if m1[0] == "v" else where[m1[1]]
            c2 = vpos[m2[1]] if m2[0] == "v" else where[m2[1]]
            lo, hi = (c1, c2) if c1 < c2 else (c2, c1)
            events.append((lo, 2, n))
            events.append((hi, 0, n))
        for c, key in points:
            events.append((c, 1, key))
        events.sort(key=lambda ev: (ev[0], ev[1]))
        stack, out = [], {}
        for _, kind, ref in events:
            if kind == 2:
                stack.append(ref)
            elif kind == 0:
                stack.pop()
            else:
                out[ref] = stack[-1] if stack else -1
        cache[t] = out
        return out

    def _other_triangle(self, e, t):
        a, b = self._etris[e]
        return b if a == t else a

    def _search(self, start, goal_test, heuristic, first_triangles=None):
        """A* over (edge, slot, entered triangle) states.

        ``goal_test(v)`` returns True when vertex ``v`` ends the route; the
        route may end at the vertex opposite the edge it entered through.
        """
        cache = {}
        blocked, crossings = self.blocked, self.crossings
        heap, best, parent = [], {}, {}
        s_pos = self._V[start]
        tris = self._incident(start).tolist() if first_triangles is None else list(first_triangles)
        for t in tris:
            i = self._tri[t].index(start)
            e = self._tedges[t][(i + 1) % 3]  # the edge opposite the start vertex
            if e in blocked:
                continue
            reg = self._regions(t, cache)
            lab = reg[("v", start)]
            for j in range(len(crossings.get(e, ())) + 1):
                if reg[("s", e, j)] != lab:
                    continue
                p = self._slot_point(e, j)
                state = (e, j, self._other_triangle(e, t))
                g = abs(p - s_pos)
                if g < best.get(state, np.inf):
                    best[state] = g
                    parent[state] = (None, t)
                    heapq.heappush(heap, (g + heuristic(p), g, state))
        while heap:
            _, g, state = heapq.heappop(heap)
            if g > best[state]:
                continue
            e, j, t = state
            p = self._slot_point(e, j)
            reg = self._regions(t, cache)
            lab = reg[("s", e, j)]
            tv, te = self._tri[t], self._tedges[t]
            i = te.index(e)
            opposite = tv[(i + 2) % 3]
            if goal_test(opposite) and reg[("v", opposite)] == lab:
                return self._unwind(parent, state, start, opposite, t)
            for e2 in te:
                if e2 == e or e2 in blocked:
                    continue
                t2 = self._other_triangle(e2, t)
                for j2 in range(len(crossings.get(e2, ())) + 1):
                    if reg[("s", e2, j2)] != lab:
                        continue
                    p2 = self._slot_point(e2, j2)
                    nxt = (e2, j2, t2)
                    g2 = g + abs(p2 - p)
                    if g2 < best.get(nxt, np.inf):
                        best[nxt] = g2
                        parent[nxt] = (state, t)
                        heapq.heappush(heap, (g2 + heuristic(p2), g2, nxt))
        raise NoPathFound("no non-crossing route between the given vertices")

    def _unwind(self, parent, state, start, goal, last_triangle):
        steps = []  # (edge, slot, triangle holding the chord that ends at this slot)
        while state is not None:
            prev, t = parent[state]
            steps.append((state[0], state[1], t))
            state = prev
        steps.reverse()
        return start, goal, steps, last_triangle

    def _commit(self, route):
        start, goal, steps, last_triangle = route
        self._fractions = None
        slots = [(e, j) for e, j, _ in steps]
        if len(set(slots)) != len(slots):
            raise NoPathFound("route passes the same edge slot twice")
        wid = self._next_wire
        self._next_wire += 1
        tokens = list(range(self._next_token, self._next_token + len(steps)))
        self._next_token += len(steps)
        # slot indices refer to the lists before insertion: insert from the back
        for k in sorted(range(len(steps)), key=lambda k: -slots[k][1]):
            e, j = slots[k]
            self.crossings.setdefault(e, []).insert(j, tokens[k])
            self.token_edge[tokens[k]] = e
        marks = [("v", start)] + [("e", tok) for tok in tokens] + [("v", goal)]
        tris = [t for _, _, t in steps] + [last_triangle]
        for t, m1, m2 in zip(tris, marks[:-1], marks[1:]):
            self.chords.setdefault(t, []).append((wid, m1, m2))
        self.wires[wid] = {"start": start, "end": goal, "tokens": tokens, "triangles": tris, "edge": None}
        return wid

    # public interface ----------------------------------------------------------

    def _direct_edge(self, s, g):
        for t in self._incident(s).tolist():
            for e in self._tedges[t]:
                if {self._lo[e], self._hi[e]} == {s, g}:
                    if e not in self.blocked and not self.crossings.get(e):
                        return e
                    return None
        return None

    def is_direct(self, start, end):
        """Whether the two vertices are joined by a free, uncrossed mesh edge."""
        s, g = self.vertex_id(complex(start)), self.vertex_id(complex(end))
        return s is not None and g is not None and self._direct_edge(s, g) is not None

    def route_length(self, start, end):
        """Number of edge crossings a wire between the vertices would need now."""
        s, g = self.vertex_id(complex(start)), self.vertex_id(complex(end))
        if self._direct_edge(s, g) is not None:
            return 0
        goal = self.vertices[g]
        return len(self._search(s, lambda v: v == g, lambda p: abs(p - goal))[2])

    def connect(self, start, end):
        """Route a wire between two obstacle vertices; returns its id."""
        s, g = self.vertex_id(complex(start)), self.vertex_id(complex(end))
        if s is None or g is None:
            raise DomainError("wire endpoints must be mesh vertices")
        e = self._direct_edge(s, g)
        if e is not None:
            wid = self._next_wire
            self._next_wire += 1
            self.blocked.add(e)
            self.wires[wid] = {"start": s, "end": g, "tokens": [], "triangles": [], "edge": e}
            return wid
        goal = self.vertices[g]
        route = self._search(s, lambda v: v == g, lambda p: abs(p - goal))
        return self._commit(route)

    def connect_to_boundary(self, start, side_triangles):
        """Route a wire from a vertex to the disk boundary, leaving the vertex
        through one of ``side_triangles``; returns its id."""
        s = self.vertex_id(complex(start))
        ring, R = self.ring, self.radius
        route = self._search(s, lambda v: v in ring,
                             lambda p: max(R - abs(p), 0.0), first_triangles=side_triangles)
        return self._commit(route)

    def remove(self, wid):
        """Delete a wire (used for temporary barriers)."""
        w = self.wires.pop(wid)
        self._fractions = None
        if w["edge"] is not None:
            self.blocked.discard(w["edge"])
            return
        for tok in w["tokens"]:
            e = self.token_edge.pop(tok)
            self.crossings[e].remove(tok)
        for t in set(w["triangles"]):
            self.chords[t] = [c for c in self.chords[t] if c[0] != wid]

    def _token_fractions(self):
        if self._fractions is None:
            frac = {}
            for tokens in self.crossings.values():
                k = len(tokens)
                for r, tok in enumerate(tokens):
                    frac[tok] = (r + 1) / (k + 1)
            self._fractions = frac
        return self._fractions

    def draw(self, wid):
        """Polyline of a wire from its start vertex to its end vertex."""
        w = self.wires[wid]
        frac = self._token_fractions()
        toks = w["tokens"]
        e = np.array([self.token_edge[t] for t in toks], dtype=np.int64)
        f = np.array([frac[t] for t in toks])
        lo, hi = self.vertices[self.edge_lo[e]], self.vertices[self.edge_hi[e]]
        mid = lo + f * (hi - lo)
        return np.concatenate([[self.vertices[w["start"]]], mid, [self.vertices[w["end"]]]])

    def right_side_triangles(self, prev, v, nxt):
        """Triangles at vertex ``v`` lying to the right of the path prev -> v -> nxt."""
        vid = self.vertex_id(complex(v))
        V = self.vertices
        out = []
        d_next = complex(nxt) - V[vid]
        psi = np.mod(-np.angle((complex(prev) - V[vid]) / d_next), TWO_PI)
        for t in self._incident(vid):
            c = V[self.triangles[t]].mean()
            phi = np.mod(-np.angle((c - V[vid]) / d_next), TWO_PI)
            if 0 < phi < psi:
                out.append(int(t))
        return out
