"""The farthest-polygon Voronoi diagram as a planar subdivision.

A Diagram holds vertices, arcs (straight or parabolic bisector pieces labeled
by their two defining features), and cells (faces labeled by one feature).
Faces are recovered from the arc soup by a half-edge walk; arcs reaching
infinity end at symbolic infinity vertices, which are closed into a cycle of
"gap" edges so that unbounded faces walk like bounded ones and the circular
site sequence at infinity falls out of the gap labels.

Vertex identity is exact: builders hand each finite arc endpoint a dedup key
(usually the sorted triple of defining features plus a solution index), so
arcs meeting at a vertex share bit-identical coordinates.  A coordinate merge
pass afterwards only matters for symmetric degenerate inputs.
"""

import math

from .geom import EPS, real_roots, curve_intersections, DegenerateInput
from .locator import Piece, TrapezoidMap

_INF = float("inf")
_TWO_PI = 2.0 * math.pi


class ArcSpec:
    """Builder input: one bisector piece with endpoint identities.

    end0/end1 correspond to params t0/t1; each is None (at infinity) or a
    tuple (dedup_key, (x, y)) with canonical coordinates.
    """

    __slots__ = ("curve", "t0", "t1", "fa", "fb", "end0", "end1")

    def __init__(self, curve, t0, t1, fa, fb, end0, end1):
        self.curve = curve
        self.t0 = t0
        self.t1 = t1
        self.fa = fa
        self.fb = fb
        self.end0 = end0
        self.end1 = end1


class DiagramVertex:
    __slots__ = ("vid", "x", "y", "kind", "features", "r")

    def __init__(self, vid, x, y, features):
        self.vid = vid
        self.x = x
        self.y = y
        self.features = features  # sorted tuple of fids
        self.kind = None
        self.r = 0.0

    def __repr__(self):
        return f"V{self.vid}({self.x:.4g},{self.y:.4g},{self.kind})"


class InfinityVertex:
    __slots__ = ("iid", "theta", "offset", "features", "kind", "aid")

    def __init__(self, iid, theta, offset, features, aid):
        self.iid = iid
        self.theta = theta % _TWO_PI
        self.offset = offset
        self.features = features
        self.kind = None
        self.aid = aid

    def __repr__(self):
        return f"Inf{self.iid}(theta={self.theta:.4g},{self.kind})"


class DiagramArc:
    __slots__ = ("aid", "curve", "t0", "t1", "fa", "fb", "kind",
                 "v0", "v1", "face_left", "face_right")

    def __init__(self, aid, curve, t0, t1, fa, fb, v0, v1):
        self.aid = aid
        self.curve = curve
        self.t0 = t0
        self.t1 = t1
        self.fa = fa
        self.fb = fb
        self.v0 = v0  # vertex id; negative = -1 - infinity-vertex id
        self.v1 = v1
        self.kind = None  # 'medial' | 'pure'
        self.face_left = None
        self.face_right = None

    def pair(self):
        return (self.fa, self.fb) if self.fa < self.fb else (self.fb, self.fa)

    def __repr__(self):
        return f"A{self.aid}({self.fa},{self.fb},{self.kind})"


class DiagramCell:
    __slots__ = ("cid", "feature", "site", "walk", "unbounded", "component")

    def __init__(self, cid, feature, site, walk, unbounded):
        self.cid = cid
        self.feature = feature
        self.site = site
        self.walk = walk  # list of (aid, +1/-1) directed arcs, or ('gap', i)
        self.unbounded = unbounded
        self.component = None

    def __repr__(self):
        return f"C{self.cid}(f={self.feature},s={self.site})"


class LocateResult:
    __slots__ = ("where", "index", "witnesses", "boundary")

    def __init__(self, where, index, witnesses, boundary):
        self.where = where      # 'cell' | 'arc' | 'vertex'
        self.index = index
        self.witnesses = witnesses  # list of (site, fid, distance)
        self.boundary = boundary

    @property
    def site(self):
        return self.witnesses[0][0]

    @property
    def feature(self):
        return self.witnesses[0][1]

    @property
    def phi(self):
        return self.witnesses[0][2]


def _closer_left(curve, t, fa, fb):
    """Which of the two defining features is closer on the curve's left side."""
    pt = curve.point(t)
    tx, ty = curve.tangent(t)
    nx, ny = -ty, tx  # left normal
    if fa.kind == "corner" and fb.kind == "corner":
        s = (fa.x - pt[0]) * nx + (fa.y - pt[1]) * ny
        return fa if s > 0.0 else fb
    if fa.kind != fb.kind:
        c, e = (fa, fb) if fa.kind == "corner" else (fb, fa)
        if curve.kind == "par":
            return c if curve.curvature_sign(t) > 0.0 else e
        # perpendicular line at a corner of an incident edge: the edge owns
        # the slab side
        mx = 0.5 * (e.ax + e.bx) - c.x
        my = 0.5 * (e.ay + e.by) - c.y
        return e if mx * nx + my * ny > 0.0 else c
    # edge-edge: compare distance gradients
    sa = 1.0 if (pt[0] - fa.ax) * fa.nx + (pt[1] - fa.ay) * fa.ny > 0.0 else -1.0
    sb = 1.0 if (pt[0] - fb.ax) * fb.nx + (pt[1] - fb.ay) * fb.ny > 0.0 else -1.0
    g = (sa * fa.nx - sb * fb.nx) * nx + (sa * fa.ny - sb * fb.ny) * ny
    # d(.,fa) - d(.,fb) grows leftward  =>  fb closer on the left
    return fb if g > 0.0 else fa


def point_arc_distance(pt, arc):
    """Distance from a point to an arc (curve restricted to [t0, t1])."""
    c = arc.curve
    xc, yc = c.xy_polys()
    dx = list(xc)
    dx[0] -= pt[0]
    dy = list(yc)
    dy[0] -= pt[1]
    # minimize dx^2 + dy^2: roots of derivative
    d2 = [0.0] * (2 * max(len(dx), len(dy)) - 1)
    for i, a in enumerate(dx):
        for j, b in enumerate(dx):
            d2[i + j] += a * b
    for i, a in enumerate(dy):
        for j, b in enumerate(dy):
            d2[i + j] += a * b
    deriv = [i * d2[i] for i in range(1, len(d2))]
    cands = [t for t in real_roots(deriv) if arc.t0 <= t <= arc.t1]
    for end in (arc.t0, arc.t1):
        if end != -_INF and end != _INF:
            cands.append(end)
    best = _INF
    for t in cands:
        p = c.point(t)
        best = min(best, math.hypot(p[0] - pt[0], p[1] - pt[1]))
    return best


class Diagram:
    """Farthest-polygon Voronoi diagram of a subset of a family's sites."""

    def __init__(self, family, site_ids):
        self.family = family
        self.site_ids = sorted(site_ids)
        self.vertices = []
        self.inf_vertices = []
        self.arcs = []
        self.cells = []
        self.components = []   # list of dicts {site, cells, bounded}
        self.sigma = []
        self.gap_faces = []    # cell id per gap, in ccw theta order
        self._locator = None
        self._locator_seed = 0
        self.stats = {}

    # ------------------------------------------------------------------
    @classmethod
    def from_arcs(cls, family, site_ids, specs, locator_seed=0, merge_tol=None):
        d = cls(family, site_ids)
        d._locator_seed = locator_seed
        if merge_tol is None:
            merge_tol = 1e-9 * family.scale
        feats = family.features

        # deterministic arc order
        specs = sorted(specs, key=lambda s: (min(s.fa, s.fb), max(s.fa, s.fb),
                                             round(s.t0, 12) if s.t0 > -_INF else -_INF))

        # vertex registry by exact key, then coordinate merge
        key_to_idx = {}
        verts = []  # [x, y, set of fids]

        def vert_index(end):
            key, (x, y) = end
            i = key_to_idx.get(key)
            if i is None:
                i = len(verts)
                key_to_idx[key] = i
                verts.append([x, y, set()])
            return i

        raw_arcs = []
        for s in specs:
            i0 = vert_index(s.end0) if s.end0 is not None else None
            i1 = vert_index(s.end1) if s.end1 is not None else None
            raw_arcs.append((s, i0, i1))
            for i in (i0, i1):
                if i is not None:
                    verts[i][2].update((s.fa, s.fb))

        # coordinate merge (degenerate symmetric inputs)
        parent = list(range(len(verts)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        bucket = {}
        q = merge_tol if merge_tol > 0 else 1.0
        for i, (x, y, _) in enumerate(verts):
            kx, ky = round(x / q), round(y / q)
            for dx in (0, -1, 1):
                for dy in (0, -1, 1):
                    j = bucket.get((kx + dx, ky + dy))
                    if j is not None and math.hypot(verts[j][0] - x,
                                                    verts[j][1] - y) <= merge_tol:
                        parent[find(i)] = find(j)
            bucket.setdefault((kx, ky), i)

        rep_map = {}
        for i in range(len(verts)):
            r = find(i)
            if r not in rep_map:
                rep_map[r] = len(rep_map)
        vmap = [rep_map[find(i)] for i in range(len(verts))]
        merged = [None] * len(rep_map)
        for i, (x, y, fs) in enumerate(verts):
            m = vmap[i]
            if merged[m] is None:
                merged[m] = [x, y, set()]
            merged[m][2] |= fs

        for vid, (x, y, fs) in enumerate(merged):
            v = DiagramVertex(vid, x, y, tuple(sorted(fs)))
            d.vertices.append(v)

        # arcs + infinity vertices
        for (s, i0, i1) in raw_arcs:
            aid = len(d.arcs)
            v0 = vmap[i0] if i0 is not None else None
            v1 = vmap[i1] if i1 is not None else None
            arc = DiagramArc(aid, s.curve.sub(s.t0, s.t1), s.t0, s.t1,
                             s.fa, s.fb,
                             v0 if v0 is not None else -1,
                             v1 if v1 is not None else -1)
            fa, fb = feats[s.fa], feats[s.fb]
            arc.kind = "medial" if fa.site == fb.site else "pure"
            if v0 is None:
                arc.v0 = -1 - d._add_inf_vertex(arc, at_t0=True)
            if v1 is None:
                arc.v1 = -1 - d._add_inf_vertex(arc, at_t0=False)
            d.arcs.append(arc)

        d._classify_vertices()
        d._build_faces()
        d._build_components()
        d._assert_bounds()
        return d

    def _add_inf_vertex(self, arc, at_t0):
        c = arc.curve
        if c.kind == "par":
            raise DegenerateInput("parabolic arcs cannot reach infinity")
        dx, dy = (-c.dx, -c.dy) if at_t0 else (c.dx, c.dy)
        theta = math.atan2(dy, dx) % _TWO_PI
        # secondary order among parallel rays: signed offset of the ray line
        off = -c.ox * dy + c.oy * dx
        fa, fb = self.family.features[arc.fa], self.family.features[arc.fb]
        iv = InfinityVertex(len(self.inf_vertices), theta, off,
                            tuple(sorted((arc.fa, arc.fb))), arc.aid)
        iv.kind = "pure_inf" if fa.site != fb.site else "medial_inf"
        self.inf_vertices.append(iv)
        return iv.iid

    def _classify_vertices(self):
        feats = self.family.features
        for v in self.vertices:
            sites = {feats[f].site for f in v.features}
            dists = [feats[f].distance(v.x, v.y) for f in v.features]
            v.r = sum(dists) / len(dists)
            if v.r <= 10 * EPS * self.family.scale:
                v.kind = "corner_leaf"
                v.r = 0.0
            elif len(sites) == 1:
                v.kind = "medial"
            elif len(sites) == len(v.features):
                v.kind = "pure"
            else:
                v.kind = "mixed"

    # -- faces ----------------------------------------------------------
    def _out_halves_at_vertex(self):
        """vid -> list of (angle_key, half) sorted ccw; half = ('a', aid, dir)
        meaning the half-edge leaves the vertex along +dir of the arc."""
        incident = {v.vid: [] for v in self.vertices}
        for a in self.arcs:
            if a.v0 >= 0:
                tx, ty = a.curve.tangent(a.t0)
                curv = a.curve.curvature_sign(a.t0)
                ang = math.atan2(ty, tx)
                incident[a.v0].append(((ang, curv), ("a", a.aid, 1)))
            if a.v1 >= 0:
                tx, ty = a.curve.tangent(a.t1)
                curv = -a.curve.curvature_sign(a.t1)
                ang = math.atan2(-ty, -tx)
                incident[a.v1].append(((ang, curv), ("a", a.aid, -1)))
        for vid in incident:
            incident[vid].sort(key=lambda p: p[0])
        return incident

    def _build_faces(self):
        # infinity ring in ccw order
        order = sorted(range(len(self.inf_vertices)),
                       key=lambda i: (self.inf_vertices[i].theta,
                                      self.inf_vertices[i].offset))
        self._inf_order = order
        n_inf = len(order)
        pos_of = {iid: k for k, iid in enumerate(order)}

        incident = self._out_halves_at_vertex()

        # half-edge encoding: real halves ('a', aid, dir); gap halves
        # ('g', k, dir): gap k connects ring position k -> k+1 (ccw); dir=+1
        # traverses ccw.
        nxt = {}

        ring_at = {}
        for v in self.vertices:
            ring = [h for _, h in incident[v.vid]]
            ring_at[v.vid] = ring
        ring_pos = {}
        for vid, ring in ring_at.items():
            for i, h in enumerate(ring):
                ring_pos[(vid, h)] = i

        def head_of(half):
            kind = half[0]
            if kind == "a":
                a = self.arcs[half[1]]
                v = a.v1 if half[2] == 1 else a.v0
                return ("v", v) if v >= 0 else ("i", -1 - v)
            k, dr = half[1], half[2]
            return ("i", order[(k + 1) % n_inf]) if dr == 1 else ("i", order[k])

        def twin(half):
            return (half[0], half[1], -half[2])

        def succ(half):
            """Next half-edge of the face on the left of `half`."""
            h = head_of(half)
            t = twin(half)
            if h[0] == "v":
                vid = h[1]
                ring = ring_at[vid]
                i = ring_pos[(vid, t)]
                return ring[(i - 1) % len(ring)]
            # infinity vertex: ccw ring is [gap ccw-out, arc back-in, gap cw-out]
            iid = h[1]
            k = pos_of[iid]
            iv = self.inf_vertices[iid]
            a = self.arcs[iv.aid]
            arc_half_out = ("a", a.aid, -1) if a.v1 == -1 - iid else ("a", a.aid, 1)
            ring = [("g", k, 1), arc_half_out, ("g", (k - 1) % n_inf, -1)]
            i = ring.index(t)
            return ring[(i - 1) % len(ring)]

        halves = []
        for a in self.arcs:
            halves.append(("a", a.aid, 1))
            halves.append(("a", a.aid, -1))
        for k in range(n_inf):
            halves.append(("g", k, 1))
            halves.append(("g", k, -1))

        feats = self.family.features
        visited = set()
        self.cells = []
        self.gap_faces = [None] * n_inf
        for start in halves:
            if start in visited:
                continue
            orbit = []
            h = start
            while h not in visited:
                visited.add(h)
                orbit.append(h)
                h = succ(h)
            # face label from real halves: on a medial arc the closer feature
            # owns its side; on a pure arc the farther one does (the diagram
            # is farthest-site)
            label = None
            has_gap = False
            for (knd, idx, dr) in orbit:
                if knd == "g":
                    has_gap = True
                    continue
                a = self.arcs[idx]
                closer = _closer_left(a.curve, self._mid_param(a),
                                      feats[a.fa], feats[a.fb])
                other = feats[a.fb] if closer is feats[a.fa] else feats[a.fa]
                left_owner = closer if a.kind == "medial" else other
                right_owner = other if a.kind == "medial" else closer
                own = left_owner if dr == 1 else right_owner
                if label is None:
                    label = own.fid
                elif label != own.fid:
                    raise DegenerateInput(
                        f"inconsistent cell labels {label} vs {own.fid} on a face")
            if label is None:
                # all-gap orbit: the pseudo-face beyond infinity
                continue
            cid = len(self.cells)
            cell = DiagramCell(cid, label, feats[label].site, orbit, has_gap)
            self.cells.append(cell)
            for (knd, idx, dr) in orbit:
                if knd == "a":
                    if dr == 1:
                        self.arcs[idx].face_left = cid
                    else:
                        self.arcs[idx].face_right = cid
                else:
                    self.gap_faces[idx] = cid

        # sigma: site sequence at infinity (ccw), collapsed
        sig = []
        for k in range(n_inf):
            cid = self.gap_faces[k]
            if cid is None:
                continue
            s = self.cells[cid].site
            if not sig or sig[-1] != s:
                sig.append(s)
        if len(sig) > 1 and sig[0] == sig[-1]:
            sig.pop()
        if not sig:
            sig = [self.site_ids[0]] if self.site_ids else []
        self.sigma = sig

    def _mid_param(self, a):
        t0 = a.t0 if a.t0 > -_INF else min(a.t1, 0.0) - 1.0
        t1 = a.t1 if a.t1 < _INF else max(a.t0, 0.0) + 1.0
        return 0.5 * (t0 + t1)

    # -- components -------------------------------------------------------
    def _build_components(self):
        n = len(self.cells)
        parent = list(range(n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        def union(i, j):
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[ri] = rj

        for a in self.arcs:
            if a.kind == "medial" and a.face_left is not None and a.face_right is not None:
                union(a.face_left, a.face_right)
        # same-site cells around medial vertices
        by_vertex = {}
        for a in self.arcs:
            for v in (a.v0, a.v1):
                if v >= 0:
                    by_vertex.setdefault(v, []).extend(
                        [f for f in (a.face_left, a.face_right) if f is not None])
        for v, faces in by_vertex.items():
            if self.vertices[v].kind in ("medial", "corner_leaf"):
                for f in faces[1:]:
                    union(faces[0], f)

        groups = {}
        for i, c in enumerate(self.cells):
            groups.setdefault(find(i), []).append(i)
        self.components = []
        for cells in groups.values():
            site = self.cells[cells[0]].site
            bounded = not any(self.cells[c].unbounded for c in cells)
            self.components.append({"site": site, "cells": sorted(cells),
                                    "bounded": bounded})
            for c in cells:
                self.cells[c].component = len(self.components) - 1
        self.components.sort(key=lambda g: (g["site"], g["cells"][0]))
        for i, g in enumerate(self.components):
            for c in g["cells"]:
                self.cells[c].component = i

    def _assert_bounds(self):
        k = len(self.site_ids)
        self.stats = {
            "k": k,
            "n": sum(self.family.sites[s].m for s in self.site_ids),
            "vertices": len(self.vertices),
            "arcs": len(self.arcs),
            "cells": len(self.cells),
            "components": len(self.components),
            "pure_infinity": sum(1 for iv in self.inf_vertices
                                 if iv.kind == "pure_inf"),
        }
        if k >= 2:
            if self.stats["pure_infinity"] > 2 * k - 2:
                raise AssertionError(
                    f"{self.stats['pure_infinity']} pure vertices at infinity"
                    f" exceeds 2k-2 = {2 * k - 2}")
            if len(self.components) > 2 * k - 2:
                raise AssertionError(
                    f"{len(self.components)} components exceeds 2k-2")
            if _has_abab(self.sigma):
                raise AssertionError(f"sigma {self.sigma} contains an abab pattern")

    # -- queries ----------------------------------------------------------
    @property
    def locator(self):
        if self._locator is None:
            self.build_locator(self._locator_seed)
        return self._locator

    def build_locator(self, seed=0):
        """Trapezoidal point-location structure over x-monotone arc pieces."""
        scale = self.family.scale
        clamp = 1e9 * max(scale, 1.0)
        shear = 0.001220703125  # 2^-13 + 2^-15-ish irregular default
        tries = 0
        while True:
            pieces = []
            us = []
            ok = True
            for a in self.arcs:
                t0 = a.t0 if a.t0 > -_INF else -clamp
                t1 = a.t1 if a.t1 < _INF else clamp
                cuts = [t0, t1]
                xc, yc = a.curve.xy_polys()
                uc = [xc[i] + shear * (yc[i] if i < len(yc) else 0.0)
                      for i in range(len(xc))]
                if len(uc) > 2 and uc[2] != 0.0:
                    te = -uc[1] / (2.0 * uc[2])
                    if t0 < te < t1:
                        cuts = [t0, te, t1]
                elif abs(uc[1]) < 1e-12:
                    ok = False  # vertical in sheared coords: bump shear
                    break
                for i in range(len(cuts) - 1):
                    pa = self._endpoint_coords(a, cuts[i])
                    pb = self._endpoint_coords(a, cuts[i + 1])
                    pc = Piece(a.curve, cuts[i], cuts[i + 1], a.aid, shear,
                               pa=pa, pb=pb)
                    if not pc.pL < pc.pR:
                        continue
                    pieces.append(pc)
                    us.append(pc.pL[0])
                    us.append(pc.pR[0])
            if ok:
                us_sorted = sorted(us)
                gap_tol = 1e-13 * max(1.0, scale)
                for i in range(len(us_sorted) - 1):
                    if 0.0 < us_sorted[i + 1] - us_sorted[i] < gap_tol:
                        ok = False
                        break
            if ok or tries > 6:
                break
            shear *= 1.61803398875
            tries += 1

        tm = TrapezoidMap(pieces, seed=seed, shear=shear)
        for pc in pieces:
            # traversed left-to-right the arc's left side faces up iff the
            # parameter increases in that direction
            a = self.arcs[pc.arc_id]
            pc.face_above = a.face_left if pc.sign == 1 else a.face_right
            pc.face_below = a.face_right if pc.sign == 1 else a.face_left
        self._locator = tm
        return tm

    def _endpoint_coords(self, a, t):
        if t == a.t0 and a.v0 >= 0:
            v = self.vertices[a.v0]
            return (v.x, v.y)
        if t == a.t1 and a.v1 >= 0:
            v = self.vertices[a.v1]
            return (v.x, v.y)
        return a.curve.point(t)

    def locate(self, x, y, eps=None):
        """Resolve a point to the cell / arc / vertex containing it.

        Points within eps of an arc report the arc; within eps of a vertex,
        the vertex."""
        if eps is None:
            eps = EPS * self.family.scale
        tm = self.locator
        trap = tm.find_trap(x, y)
        feats = self.family.features
        for pc in (trap.top, trap.bottom):
            if pc is None:
                continue
            a = self.arcs[pc.arc_id]
            d = point_arc_distance((x, y), a)
            if d <= eps:
                for vid in (a.v0, a.v1):
                    if vid >= 0:
                        v = self.vertices[vid]
                        if math.hypot(v.x - x, v.y - y) <= eps:
                            wits = [(feats[f].site, f, feats[f].distance(x, y))
                                    for f in v.features]
                            return LocateResult("vertex", vid, wits, True)
                wits = [(feats[f].site, f, feats[f].distance(x, y))
                        for f in (a.fa, a.fb)]
                return LocateResult("arc", a.aid, wits, True)
        if trap.bottom is not None:
            cid = trap.bottom.face_above
        elif trap.top is not None:
            cid = trap.top.face_below
        else:
            cid = None
        if cid is None:
            # empty diagram region (k=1 with a single cell, or inconsistency)
            cid = 0 if self.cells else None
        cell = self.cells[cid]
        f = feats[cell.feature]
        return LocateResult("cell", cid, [(f.site, f.fid, f.distance(x, y))], False)

    def farthest_site_query(self, x, y=None):
        """(site, Phi, witness feature) for a query point; multiple witnesses
        with a boundary flag when the point lies on an arc or vertex."""
        if y is None:
            x, y = x
        return self.locate(x, y)

    def phi(self, x, y):
        return self.locate(x, y).phi

    # -- structure validation ----------------------------------------------
    def validate_structure(self):
        """Run the structural checks; returns a list of violation strings."""
        out = []
        feats = self.family.features
        k = len(self.site_ids)
        eps = 1e-6 * self.family.scale

        for v in self.vertices:
            sites = [feats[f].site for f in v.features]
            if v.kind == "corner_leaf":
                continue
            if len(v.features) < 3:
                out.append(f"vertex {v.vid} has {len(v.features)} features")
                continue
            if len(v.features) > 3:
                # allowed only for degenerate symmetric input; flag it
                out.append(f"vertex {v.vid} has {len(v.features)} features (degenerate)")
            ds = [feats[f].distance(v.x, v.y) for f in v.features]
            if max(ds) - min(ds) > eps:
                out.append(f"vertex {v.vid} not equidistant: {ds}")
            mult = sorted((sites.count(s) for s in set(sites)), reverse=True)
            want = {"medial": [3], "mixed": [2, 1], "pure": [1, 1, 1]}.get(v.kind)
            if len(v.features) == 3 and mult != want:
                out.append(f"vertex {v.vid} kind {v.kind} has site multiset {mult}")

        for a in self.arcs:
            sa, sb = feats[a.fa].site, feats[a.fb].site
            if a.kind == "pure" and sa == sb:
                out.append(f"arc {a.aid} pure but same site")
            if a.kind == "medial" and sa != sb:
                out.append(f"arc {a.aid} medial but sites differ")
            if a.face_left is not None and a.face_right is not None:
                cl, cr = self.cells[a.face_left], self.cells[a.face_right]
                if a.kind == "pure" and cl.site == cr.site:
                    out.append(f"pure arc {a.aid} separates same-site cells")
                if a.kind == "medial" and cl.site != cr.site:
                    out.append(f"medial arc {a.aid} separates different sites")

        # cell chains: boundary decomposes into one pure run and one medial run
        for c in self.cells:
            kinds = []
            for h in c.walk:
                if h[0] == "a":
                    kinds.append(self.arcs[h[1]].kind)
            if not kinds:
                continue
            runs = 1
            for i in range(1, len(kinds)):
                if kinds[i] != kinds[i - 1]:
                    runs += 1
            if kinds[0] != kinds[-1] and runs > 1:
                pass
            elif kinds[0] == kinds[-1] and runs > 1:
                runs -= 1
            if runs > 2:
                out.append(f"cell {c.cid} boundary has {runs} kind runs")
            if k >= 2 and "pure" not in kinds:
                out.append(f"cell {c.cid} has no pure arc on its lower chain")

        if k >= 2:
            if self.stats["pure_infinity"] > 2 * k - 2:
                out.append("too many pure vertices at infinity")
            if len(self.components) > 2 * k - 2:
                out.append("too many components")
            if _has_abab(self.sigma):
                out.append(f"sigma has abab: {self.sigma}")
            by_site = {}
            for g in self.components:
                by_site.setdefault(g["site"], []).append(g)
            for s, gs in by_site.items():
                if any(g["bounded"] for g in gs) and len(gs) != 1:
                    out.append(f"site {s} has a bounded component but {len(gs)} components")

        # Euler consistency on the closed-up structure
        V = len(self.vertices) + len(self.inf_vertices)
        E = len(self.arcs) + len(self.inf_vertices)  # gaps = #inf vertices
        F = len(self.cells) + (1 if self.inf_vertices else 0)
        C = self._graph_components()
        if self.inf_vertices:
            if V - E + F != 1 + C:
                out.append(f"Euler check failed: V={V} E={E} F={F} C={C}")
        return out

    def _graph_components(self):
        n = len(self.vertices)
        m = len(self.inf_vertices)
        parent = list(range(n + m + 1))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        def union(i, j):
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[ri] = rj

        def node(v):
            return v if v >= 0 else n + (-1 - v)

        for a in self.arcs:
            union(node(a.v0), node(a.v1))
        order = getattr(self, "_inf_order", [])
        for i in range(len(order)):
            union(n + order[i], n + order[(i + 1) % len(order)])
        roots = {find(i) for i in range(n + m)}
        return len(roots) if n + m else 0

    # -- misc ---------------------------------------------------------------
    def arcs_of_pair(self, fa, fb):
        key = (fa, fb) if fa < fb else (fb, fa)
        return [a for a in self.arcs if a.pair() == key]

    def __repr__(self):
        return (f"Diagram(sites={self.site_ids}, V={len(self.vertices)}, "
                f"A={len(self.arcs)}, C={len(self.cells)})")


def _has_abab(seq):
    """Circular sequence contains an a..b..a..b pattern (order-2 DS check)."""
    n = len(seq)
    if n < 4:
        return False
    seq2 = seq + seq
    for i in range(n):
        for j in range(i + 1, i + n):
            a, b = seq2[i], seq2[j]
            if a == b:
                continue
            # look for a..b..a..b starting at i within one wrap
            ka = None
            for k in range(j + 1, i + n):
                if seq2[k] == a and ka is None:
                    ka = k
                elif seq2[k] == b and ka is not None:
                    return True
    return False


# -- module-level wrappers matching the library surface ---------------------

def build_locator(diagram, seed=0):
    return diagram.build_locator(seed)


def locate(diagram, point):
    return diagram.locate(point[0], point[1])


def farthest_site_query(diagram, point):
    return diagram.farthest_site_query(point[0], point[1])


def validate_structure(diagram):
    return diagram.validate_structure()


class ParametricOutcome:
    __slots__ = ("status", "cell", "arc", "interval", "inside_t")

    def __init__(self, status, cell=None, arc=None, interval=None, inside_t=None):
        self.status = status  # 'located' | 'found_inside' | 'no_point'
        self.cell = cell
        self.arc = arc
        self.interval = interval
        self.inside_t = inside_t


class NoSuchPoint(Exception):
    pass


def parametric_locate(diagram, alpha, interval, resolver, alpha_pair=None):
    """Simulate locating an unknown point s* constrained to the curve alpha.

    `resolver(splits, lo, hi)` is consulted whenever a comparator crosses the
    current interval: `splits` are the crossing parameters strictly inside
    (lo, hi).  It returns ('pick', a, b) to narrow to [a, b], ('found', t)
    when it finds an in-region point (aborting the search), or ('empty',)
    when no point can exist.  Comparators that miss the interval are skipped,
    and every primitive is the sign of a degree-<=2 polynomial.

    `alpha_pair` names alpha's defining feature pair so that arcs supported
    by the same bisector are recognized (the on-arc case) instead of being
    intersected with alpha.
    """
    tm = diagram.locator
    node = tm.root
    lo, hi = interval
    located_arc = None
    xc, yc = alpha.xy_polys()
    uc = [xc[i] + tm.shear * (yc[i] if i < len(yc) else 0.0)
          for i in range(len(xc))]

    def u_roots(const):
        c = list(uc)
        c[0] -= const
        return [r for r in real_roots(c) if lo < r < hi]

    def u_at(t):
        return uc[0] + t * (uc[1] + (uc[2] * t if len(uc) > 2 else 0.0))

    def resolve(splits):
        nonlocal lo, hi
        splits = sorted(set(splits))
        if not splits:
            return None
        ans = resolver(splits, lo, hi)
        if ans[0] == "found":
            return ParametricOutcome("found_inside", interval=(lo, hi),
                                     inside_t=ans[1])
        if ans[0] == "empty":
            return ParametricOutcome("no_point", interval=(lo, hi))
        lo, hi = ans[1], ans[2]
        return None

    guard = 0
    while node.kind != "leaf":
        guard += 1
        if guard > 100000:
            raise RuntimeError("parametric locate did not terminate")
        if node.kind == "x":
            res = resolve(u_roots(node.point[0]))
            if res is not None:
                return res
            mid = _mid_of(lo, hi)
            node = node.left if (u_at(mid), alpha.point(mid)[1]) < node.point \
                else node.right
        else:
            pc = node.piece
            arc = diagram.arcs[pc.arc_id]
            same = alpha_pair is not None and arc.pair() == alpha_pair
            # prune to the piece's abscissa span (two vertical comparators)
            res = resolve(u_roots(pc.pL[0]) + u_roots(pc.pR[0]))
            if res is not None:
                return res
            mid = _mid_of(lo, hi)
            um = u_at(mid)
            if um < pc.pL[0] or um > pc.pR[0]:
                # s* lies outside this piece's slab: above/below is decided
                # by continuation; compare at the nearer wall
                node = node.left if alpha.point(mid)[1] > pc.y_at_u(
                    min(max(um, pc.pL[0]), pc.pR[0])) else node.right
                continue
            if same:
                located_arc = arc.aid
                node = node.right  # walk to the trap below the arc
                continue
            sub = alpha.sub(max(lo, -1e18), min(hi, 1e18))
            hits = curve_intersections(sub, pc.curve.sub(
                min(pc.ta, pc.tb), max(pc.ta, pc.tb)), scale=diagram.family.scale)
            res = resolve([h.t1 for h in hits if lo < h.t1 < hi])
            if res is not None:
                return res
            mid = _mid_of(lo, hi)
            pt = alpha.point(mid)
            node = node.left if pt[1] > pc.y_at_u(u_at(mid)) else node.right

    trap = node.trap
    if trap.bottom is not None:
        cid = trap.bottom.face_above
    elif trap.top is not None:
        cid = trap.top.face_below
    else:
        cid = 0 if diagram.cells else None
    return ParametricOutcome("located", cell=cid, arc=located_arc,
                             interval=(lo, hi))


def _mid_of(lo, hi):
    if lo == -_INF and hi == _INF:
        return 0.0
    if lo == -_INF:
        return hi - 1.0
    if hi == _INF:
        return lo + 1.0
    return 0.5 * (lo + hi)
