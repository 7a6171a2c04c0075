"""Polygonal sites: validation, features, convex hulls, pockets.

A polygonal site is a connected union of line segments whose relative
interiors are pairwise disjoint (corner-on-edge contacts are rejected: the
corners and edges must form a simplicial complex).  Its features are its
corners and its relatively-open edges.  A pocket is a connected component of
CH(P) \\ P; it is bounded when it is also a bounded component of the plane
minus P (a hole), unbounded when a convex-hull edge closes it.
"""

import math

import numpy as np

from .geom import EPS, DegenerateInput, tangent_disk

_INF = float("inf")


class SiteError(Exception):
    pass


class NotConnected(SiteError):
    pass


class SelfIntersecting(SiteError):
    pass


class ZeroLengthSegment(SiteError):
    pass


class Feature:
    """Corner or edge of a site, with precomputed geometry.

    `site` is the family-wide site id, `idx` the per-site feature index
    (corners first, then edges), `fid` the family-wide feature id (assigned
    when the family is assembled).
    """

    __slots__ = ("kind", "site", "idx", "fid",
                 "x", "y", "ax", "ay", "bx", "by",
                 "ux", "uy", "nx", "ny", "length",
                 "corner_a", "corner_b", "incident_edges")

    def __init__(self, kind, site, idx):
        self.kind = kind
        self.site = site
        self.idx = idx
        self.fid = -1

    @classmethod
    def corner(cls, site, idx, x, y):
        f = cls("corner", site, idx)
        f.x = float(x)
        f.y = float(y)
        f.incident_edges = []
        return f

    @classmethod
    def edge(cls, site, idx, a, b, corner_a, corner_b):
        f = cls("edge", site, idx)
        f.ax, f.ay = float(a[0]), float(a[1])
        f.bx, f.by = float(b[0]), float(b[1])
        dx = f.bx - f.ax
        dy = f.by - f.ay
        f.length = math.hypot(dx, dy)
        f.ux = dx / f.length
        f.uy = dy / f.length
        f.nx = -f.uy
        f.ny = f.ux
        f.corner_a = corner_a
        f.corner_b = corner_b
        return f

    def ref_point(self):
        if self.kind == "corner":
            return (self.x, self.y)
        return (0.5 * (self.ax + self.bx), 0.5 * (self.ay + self.by))

    def distance(self, px, py):
        if self.kind == "corner":
            return math.hypot(px - self.x, py - self.y)
        qx = px - self.ax
        qy = py - self.ay
        t = qx * self.ux + qy * self.uy
        if t <= 0.0:
            return math.hypot(qx, qy)
        if t >= self.length:
            return math.hypot(px - self.bx, py - self.by)
        return abs(qx * self.nx + qy * self.ny)

    def key(self):
        return (self.site, 0 if self.kind == "corner" else 1, self.idx)

    def __repr__(self):
        if self.kind == "corner":
            return f"Corner(s{self.site}#{self.idx} ({self.x:.4g},{self.y:.4g}))"
        return (f"Edge(s{self.site}#{self.idx} "
                f"({self.ax:.4g},{self.ay:.4g})-({self.bx:.4g},{self.by:.4g}))")


class Pocket:
    """Connected component of CH(P) minus P."""

    __slots__ = ("index", "features", "corners", "hull_edge", "bounded", "loop")

    def __init__(self, index, features, corners, hull_edge, bounded, loop):
        self.index = index
        self.features = features      # set of per-site feature indices
        self.corners = corners        # set of per-site corner indices
        self.hull_edge = hull_edge    # (corner_i, corner_j) closing it, or None
        self.bounded = bounded
        self.loop = loop              # closed polyline of corner coordinates

    def __repr__(self):
        k = "bounded" if self.bounded else "unbounded"
        return f"Pocket#{self.index}({k}, {len(self.corners)} corners)"


class PolygonalSite:
    """Validated site: deduplicated corners, edges, adjacency, hull, pockets."""

    def __init__(self, corners_xy, edges_idx, site_id=0, snap=None):
        self.site = site_id
        self.corners_xy = np.asarray(corners_xy, dtype=float)
        self.edges_idx = list(edges_idx)
        self.m = len(self.edges_idx)

        n_c = len(self.corners_xy)
        self.features = []
        for i, (x, y) in enumerate(self.corners_xy):
            self.features.append(Feature.corner(site_id, i, x, y))
        for j, (a, b) in enumerate(self.edges_idx):
            f = Feature.edge(site_id, n_c + j, self.corners_xy[a],
                             self.corners_xy[b], a, b)
            self.features.append(f)
            self.features[a].incident_edges.append(n_c + j)
            self.features[b].incident_edges.append(n_c + j)
        self.n_corners = n_c

        # numpy views for batch distance evaluation
        ea = np.array([[f.ax, f.ay] for f in self.features[n_c:]], dtype=float).reshape(-1, 2)
        eu = np.array([[f.ux, f.uy] for f in self.features[n_c:]], dtype=float).reshape(-1, 2)
        el = np.array([f.length for f in self.features[n_c:]], dtype=float)
        self._ea, self._eu, self._el = ea, eu, el

        self.hull = _convex_hull(self.corners_xy)
        self.pockets = []
        self._build_pockets()

    # -- distances ----------------------------------------------------------
    def distance(self, px, py):
        """d(x, P): distance to the nearest point of the site."""
        d2 = np.hypot(self.corners_xy[:, 0] - px, self.corners_xy[:, 1] - py)
        best = d2.min()
        if self.m:
            qx = px - self._ea[:, 0]
            qy = py - self._ea[:, 1]
            t = np.clip(qx * self._eu[:, 0] + qy * self._eu[:, 1], 0.0, self._el)
            ex = qx - t * self._eu[:, 0]
            ey = qy - t * self._eu[:, 1]
            best = min(best, float(np.hypot(ex, ey).min()))
        return float(best)

    def nearest_feature(self, px, py, slab=True):
        """(feature index, distance); `slab` decides corner/edge tie ownership
        by counting an edge only where the foot is interior to it."""
        dc = np.hypot(self.corners_xy[:, 0] - px, self.corners_xy[:, 1] - py)
        i = int(dc.argmin())
        best_i, best_d = i, float(dc[i])
        if self.m:
            qx = px - self._ea[:, 0]
            qy = py - self._ea[:, 1]
            t = qx * self._eu[:, 0] + qy * self._eu[:, 1]
            de = np.abs(qx * self._eu[:, 1] - qy * self._eu[:, 0])
            if slab:
                de = np.where((t > 0.0) & (t < self._el), de, np.inf)
            else:
                tc = np.clip(t, 0.0, self._el)
                ex = qx - tc * self._eu[:, 0]
                ey = qy - tc * self._eu[:, 1]
                de = np.hypot(ex, ey)
            j = int(de.argmin())
            if de[j] < best_d:
                best_i, best_d = self.n_corners + j, float(de[j])
        return best_i, best_d

    def batch_distance(self, pts):
        """Vector of d(x, P) for an (N, 2) array of points."""
        pts = np.asarray(pts, dtype=float)
        d = np.hypot(pts[:, None, 0] - self.corners_xy[None, :, 0],
                     pts[:, None, 1] - self.corners_xy[None, :, 1]).min(axis=1)
        if self.m:
            qx = pts[:, None, 0] - self._ea[None, :, 0]
            qy = pts[:, None, 1] - self._ea[None, :, 1]
            t = np.clip(qx * self._eu[None, :, 0] + qy * self._eu[None, :, 1],
                        0.0, self._el[None, :])
            ex = qx - t * self._eu[None, :, 0]
            ey = qy - t * self._eu[None, :, 1]
            d = np.minimum(d, np.hypot(ex, ey).min(axis=1))
        return d

    def hull_points(self):
        return self.corners_xy[self.hull]

    # -- pockets ------------------------------------------------------------
    def _build_pockets(self):
        """Pockets = bounded faces of the site graph augmented with the
        convex-hull edges that are not already site edges."""
        n_c = self.n_corners
        site_edge_set = {frozenset(e) for e in self.edges_idx}
        hull = self.hull
        extra = []
        if len(hull) >= 3:
            for i in range(len(hull)):
                a, b = hull[i], hull[(i + 1) % len(hull)]
                if frozenset((a, b)) not in site_edge_set:
                    extra.append((a, b))

        edges_all = [(a, b, j) for j, (a, b) in enumerate(self.edges_idx)]
        edges_all += [(a, b, -1 - i) for i, (a, b) in enumerate(extra)]

        # half edges: (edge_ref, origin, target)
        out_at = [[] for _ in range(n_c)]
        halves = []
        for (a, b, ref) in edges_all:
            halves.append([a, b, ref])
            halves.append([b, a, ref])
        for h_i, (a, b, ref) in enumerate(halves):
            out_at[a].append(h_i)

        def angle_of(h_i):
            a, b, _ = halves[h_i]
            return math.atan2(self.corners_xy[b][1] - self.corners_xy[a][1],
                              self.corners_xy[b][0] - self.corners_xy[a][0])

        order = {}
        for v in range(n_c):
            out_at[v].sort(key=angle_of)
            for pos, h_i in enumerate(out_at[v]):
                order[h_i] = pos

        def twin(h_i):
            return h_i ^ 1

        def nxt(h_i):
            # continue the face walk: at the head, take the cw-neighbor of the twin
            t = twin(h_i)
            v = halves[t][0]
            ring = out_at[v]
            return ring[(order[t] - 1) % len(ring)]

        seen = [False] * len(halves)
        self.pockets = []
        for start in range(len(halves)):
            if seen[start]:
                continue
            walk = []
            h = start
            while not seen[h]:
                seen[h] = True
                walk.append(h)
                h = nxt(h)
            # signed area from origin points
            pts = [self.corners_xy[halves[h][0]] for h in walk]
            area = 0.0
            for i in range(len(pts)):
                x1, y1 = pts[i]
                x2, y2 = pts[(i + 1) % len(pts)]
                area += x1 * y2 - x2 * y1
            if area <= 1e-12 * (1.0 + max(abs(p[0]) + abs(p[1]) for p in pts)) ** 2:
                continue  # outer face (or flattened walk)
            feats = set()
            corners = set()
            hull_edge = None
            added = 0
            for h in walk:
                a, b, ref = halves[h]
                corners.add(a)
                if ref >= 0:
                    feats.add(n_c + ref)
                else:
                    added += 1
                    hull_edge = (a, b)
            feats |= corners
            if added > 1:
                raise SiteError("pocket closed by more than one hull edge")
            self.pockets.append(Pocket(len(self.pockets), feats, corners,
                                       hull_edge, added == 0,
                                       [tuple(p) for p in pts]))

    @property
    def bounded_pockets(self):
        return [p for p in self.pockets if p.bounded]

    @property
    def unbounded_pockets(self):
        return [p for p in self.pockets if not p.bounded]

    def hull_site_edges(self):
        """Per-site indices of site edges lying on the convex hull."""
        hull = self.hull
        if len(hull) < 2:
            return [i + self.n_corners for i in range(self.m)]
        pairs = {frozenset((hull[i], hull[(i + 1) % len(hull)]))
                 for i in range(len(hull))} if len(hull) >= 3 else {frozenset(hull)}
        out = []
        for j, (a, b) in enumerate(self.edges_idx):
            if frozenset((a, b)) in pairs:
                out.append(self.n_corners + j)
        return out

    def __repr__(self):
        return (f"PolygonalSite(site={self.site}, corners={self.n_corners}, "
                f"edges={self.m}, pockets={len(self.pockets)})")


def _convex_hull(pts):
    """Indices of hull corners, ccw, keeping collinear boundary points."""
    n = len(pts)
    if n == 1:
        return [0]
    idx = sorted(range(n), key=lambda i: (pts[i][0], pts[i][1]))
    span = math.hypot(pts[idx[-1]][0] - pts[idx[0]][0],
                      pts[idx[-1]][1] - pts[idx[0]][1])
    tol = 1e-12 * (1.0 + span * span)

    def cross(o, a, b):
        return ((pts[a][0] - pts[o][0]) * (pts[b][1] - pts[o][1])
                - (pts[a][1] - pts[o][1]) * (pts[b][0] - pts[o][0]))

    def build(seq):
        out = []
        for i in seq:
            while len(out) >= 2 and cross(out[-2], out[-1], i) < -tol:
                out.pop()
            out.append(i)
        return out

    lower = build(idx)
    upper = build(reversed(idx))
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 0:
        hull = [idx[0]]
    return hull


def validate_site(segments, site_id=0, snap=None):
    """Build a PolygonalSite from raw segments.

    Deduplicates endpoints (snap tolerance relative to the segment cloud),
    verifies nonzero lengths, pairwise disjoint relative interiors
    (corner-on-edge contacts rejected), and connectivity.
    """
    segs = [((float(a[0]), float(a[1])), (float(b[0]), float(b[1])))
            for a, b in segments]
    if not segs:
        raise SiteError("a site needs at least one segment")
    xs = [p[0] for s in segs for p in s]
    ys = [p[1] for s in segs for p in s]
    diam = math.hypot(max(xs) - min(xs), max(ys) - min(ys))
    if snap is None:
        snap = EPS * max(diam, 1.0)

    corners = []
    key_of = {}

    def corner_id(p):
        kx = round(p[0] / snap) if snap > 0 else p[0]
        ky = round(p[1] / snap) if snap > 0 else p[1]
        for dx in (0, -1, 1):
            for dy in (0, -1, 1):
                j = key_of.get((kx + dx, ky + dy))
                if j is not None and math.hypot(corners[j][0] - p[0],
                                                corners[j][1] - p[1]) <= snap:
                    return j
        corners.append(p)
        key_of[(kx, ky)] = len(corners) - 1
        return len(corners) - 1

    edges = []
    for a, b in segs:
        ia = corner_id(a)
        ib = corner_id(b)
        if ia == ib:
            raise ZeroLengthSegment(f"segment {a}-{b} has zero length")
        edges.append((ia, ib))

    if len({frozenset(e) for e in edges}) != len(edges):
        raise SelfIntersecting("duplicate segment")

    # pairwise relative-interior disjointness
    for i in range(len(edges)):
        for j in range(i + 1, len(edges)):
            if _segments_conflict(corners, edges[i], edges[j], snap):
                raise SelfIntersecting(
                    f"segments {i} and {j} have intersecting relative interiors")

    # connectivity via union-find on shared endpoints
    parent = list(range(len(corners)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    roots = {find(i) for i in range(len(corners))}
    if len(roots) != 1:
        raise NotConnected(f"site splits into {len(roots)} components")

    return PolygonalSite(corners, edges, site_id=site_id, snap=snap)


def _segments_conflict(corners, e1, e2, tol):
    a, b = corners[e1[0]], corners[e1[1]]
    c, d = corners[e2[0]], corners[e2[1]]
    shared = set(e1) & set(e2)

    def orient(p, q, r):
        return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])

    def on_interior(p, q, r):
        # r strictly inside segment pq (within tol of the line)
        L = math.hypot(q[0] - p[0], q[1] - p[1])
        if abs(orient(p, q, r)) > tol * L:
            return False
        t = ((r[0] - p[0]) * (q[0] - p[0]) + (r[1] - p[1]) * (q[1] - p[1])) / (L * L)
        return tol / L < t < 1.0 - tol / L

    if shared:
        # sharing one endpoint: conflict only if collinear overlapping
        if len(shared) == 2:
            return True
        s = shared.pop()
        p = corners[s]
        q = a if e1[0] != s else b
        r = c if e2[0] != s else d
        L1 = math.hypot(q[0] - p[0], q[1] - p[1])
        if abs(orient(p, q, r)) <= tol * L1:
            # same direction from the shared endpoint = overlap
            if ((q[0] - p[0]) * (r[0] - p[0]) + (q[1] - p[1]) * (r[1] - p[1])) > 0:
                return True
        return False

    # corner in the interior of the other edge
    for r in (c, d):
        if on_interior(a, b, r):
            return True
    for r in (a, b):
        if on_interior(c, d, r):
            return True

    # proper crossing
    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)
    if ((o1 > 0) != (o2 > 0)) and ((o3 > 0) != (o4 > 0)):
        L1 = math.hypot(b[0] - a[0], b[1] - a[1])
        L2 = math.hypot(d[0] - c[0], d[1] - c[1])
        if min(abs(o1), abs(o2)) > tol * L1 * 1e-3 or min(abs(o3), abs(o4)) > tol * L2 * 1e-3:
            return True
    return False


def convex_hull_and_pockets(site):
    """Hull polygon (corner coordinates, ccw) and the site's pockets."""
    return site.hull_points(), site.pockets


class SiteFamily:
    """Family of pairwise-disjoint polygonal sites with global feature ids."""

    def __init__(self, sites):
        self.sites = list(sites)
        self.k = len(self.sites)
        self.n = sum(s.m for s in self.sites)
        xs = np.concatenate([s.corners_xy[:, 0] for s in self.sites])
        ys = np.concatenate([s.corners_xy[:, 1] for s in self.sites])
        self.bbox = (float(xs.min()), float(ys.min()), float(xs.max()), float(ys.max()))
        self.scale = max(math.hypot(self.bbox[2] - self.bbox[0],
                                    self.bbox[3] - self.bbox[1]), 1e-300)
        self.eps = EPS * self.scale

        self.features = []
        self.offsets = []
        for s_id, s in enumerate(self.sites):
            if s.site != s_id:
                raise ValueError("site ids must match their position in the family")
            self.offsets.append(len(self.features))
            for f in s.features:
                f.fid = len(self.features)
                self.features.append(f)
        self.offsets.append(len(self.features))

    @classmethod
    def from_segment_lists(cls, segment_lists):
        sites = [validate_site(segs, site_id=i)
                 for i, segs in enumerate(segment_lists)]
        fam = cls(sites)
        fam.check_disjoint()
        return fam

    def feature(self, fid):
        return self.features[fid]

    def site_of(self, fid):
        return self.features[fid].site

    def check_disjoint(self):
        for i in range(self.k):
            for j in range(i + 1, self.k):
                si, sj = self.sites[i], self.sites[j]
                for (a, b) in si.edges_idx:
                    pa, pb = si.corners_xy[a], si.corners_xy[b]
                    mid = (0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1]))
                    if sj.distance(*mid) <= self.eps:
                        raise SelfIntersecting(f"sites {i} and {j} touch")
                    for p in (pa, pb):
                        if sj.distance(p[0], p[1]) <= self.eps:
                            raise SelfIntersecting(f"sites {i} and {j} touch")
                # conservative: check real segment crossings
                for (a, b) in si.edges_idx:
                    for (c, d) in sj.edges_idx:
                        if _cross_test(si.corners_xy[a], si.corners_xy[b],
                                       sj.corners_xy[c], sj.corners_xy[d]):
                            raise SelfIntersecting(f"sites {i} and {j} intersect")

    def __repr__(self):
        return f"SiteFamily(k={self.k}, n={self.n})"


def _cross_test(a, b, c, d):
    def orient(p, q, r):
        return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    return ((o1 > 0) != (o2 > 0)) and ((o3 > 0) != (o4 > 0))


class Violation:
    __slots__ = ("condition", "features", "detail")

    def __init__(self, condition, features, detail=""):
        self.condition = condition
        self.features = features
        self.detail = detail

    def __repr__(self):
        return f"Violation({self.condition}: {self.features} {self.detail})"


def check_general_position(family, quadruple_cutoff=64, samples=100_000, rng=None):
    """Check the three general-position conditions across a family.

    Across distinct sites: no two edges parallel, no three corners collinear,
    and no disk touching four features.  The quadruple check is exhaustive up
    to `quadruple_cutoff` features, sampled above it.  Returns a list of
    Violations (empty = in general position).
    """
    out = []
    eps = family.eps
    feats = family.features
    edges = [f for f in feats if f.kind == "edge"]
    corners = [f for f in feats if f.kind == "corner"]

    for i in range(len(edges)):
        for j in range(i + 1, len(edges)):
            e1, e2 = edges[i], edges[j]
            if e1.site == e2.site:
                continue
            if abs(e1.ux * e2.uy - e1.uy * e2.ux) <= EPS:
                out.append(Violation("parallel-edges", (e1.key(), e2.key())))

    cs = [c for c in corners]
    for i in range(len(cs)):
        for j in range(i + 1, len(cs)):
            for l in range(j + 1, len(cs)):
                a, b, c = cs[i], cs[j], cs[l]
                if a.site == b.site == c.site:
                    continue
                det = ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x))
                L = max(math.hypot(b.x - a.x, b.y - a.y),
                        math.hypot(c.x - a.x, c.y - a.y), 1e-300)
                if abs(det) <= EPS * L * L:
                    out.append(Violation("collinear-corners",
                                         (a.key(), b.key(), c.key())))

    # Four-feature disks: solve every cross-site triple once, then test all
    # remaining features against each solution disk.  A fourth-feature edge
    # only counts when the tangency foot is interior to it (contact at an
    # endpoint is the endpoint corner's contact, caught by corner quadruples).
    F = len(feats)
    cx = np.array([f.x if f.kind == "corner" else np.nan for f in feats])
    cy = np.array([f.y if f.kind == "corner" else np.nan for f in feats])
    is_c = np.array([f.kind == "corner" for f in feats])
    eax = np.array([f.ax if f.kind == "edge" else np.nan for f in feats])
    eay = np.array([f.ay if f.kind == "edge" else np.nan for f in feats])
    eux = np.array([f.ux if f.kind == "edge" else np.nan for f in feats])
    euy = np.array([f.uy if f.kind == "edge" else np.nan for f in feats])
    elen = np.array([f.length if f.kind == "edge" else np.nan for f in feats])
    site_arr = np.array([f.site for f in feats])

    def fourth_hits(disk, triple_ids):
        dc = np.hypot(cx - disk.cx, cy - disk.cy)
        hit_c = is_c & (np.abs(dc - disk.r) <= eps)
        t = (disk.cx - eax) * eux + (disk.cy - eay) * euy
        dl = np.abs((disk.cx - eax) * (-euy) + (disk.cy - eay) * eux)
        hit_e = (~is_c) & (np.abs(dl - disk.r) <= eps) \
            & (t > eps) & (t < elen - eps)
        hits = np.flatnonzero(hit_c | hit_e)
        return [h for h in hits if h not in triple_ids]

    from itertools import combinations
    if F <= quadruple_cutoff:
        triples = combinations(range(F), 3)
    else:
        if rng is None:
            rng = np.random.default_rng(0)
        seen = set()
        for _ in range(samples):
            q = tuple(sorted(rng.choice(F, size=3, replace=False).tolist()))
            seen.add(q)
        triples = sorted(seen)

    for q in triples:
        fs = [feats[i] for i in q]
        if site_arr[q[0]] == site_arr[q[1]] == site_arr[q[2]]:
            continue
        try:
            disks = tangent_disk(fs, scale=family.scale)
        except DegenerateInput:
            continue
        for d in disks:
            for h in fourth_hits(d, set(q)):
                if len({site_arr[h]} | {f.site for f in fs}) >= 2:
                    out.append(Violation(
                        "four-feature-disk",
                        tuple(f.key() for f in fs) + (feats[h].key(),),
                        f"disk r={d.r:.6g}"))
    return out
