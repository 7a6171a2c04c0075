"""Medial axis of one polygonal site, as a full-plane nearest-feature diagram.

The subdivision assigns each point its nearest feature (corners radially,
edges only across their open slab, so spokes — the perpendicular rays at
corners — separate corner cells from incident edge cells).  Arcs are computed
pair by pair: the equal-distance locus of two features is trimmed against all
other features' dominance.  Candidate pairs are seeded from adjacency and
proximity, and a self-healing pass inserts any pair a discovered vertex still
misses, so the construction never depends on the seeding heuristic for
correctness.

The result doubles as the k=1 farthest-polygon diagram: trees (one per
pocket) and the isolated spokes of hull edges are labeled for the merge
machinery.
"""

import math

import numpy as np

from .geom import (EPS, DegenerateInput, dominance_boundary, real_roots,
                   triple_equidistant_points)
from .diagram import ArcSpec, Diagram

_INF = float("inf")


def _poly_pad(c, n=3):
    c = list(c)
    while len(c) < n:
        c.append(0.0)
    return c


def _batched_roots(coeffs):
    """Real roots per row of an (N, 5) ascending-coefficient matrix."""
    out = [[] for _ in range(len(coeffs))]
    if len(coeffs) == 0:
        return out
    C = np.asarray(coeffs, dtype=float)
    mag = np.abs(C).max(axis=1)
    mag[mag == 0.0] = 1.0
    C = C / mag[:, None]
    deg = np.zeros(len(C), dtype=int)
    for d in range(4, -1, -1):
        live = (deg == 0) & (np.abs(C[:, d]) > 1e-13)
        deg[live] = d
    for i in np.flatnonzero(deg <= 2):
        a2, a1, a0 = C[i, 2], C[i, 1], C[i, 0]
        if deg[i] == 2:
            disc = a1 * a1 - 4.0 * a2 * a0
            if disc >= 0.0:
                s = math.sqrt(disc)
                out[i] = sorted(((-a1 + s) / (2 * a2), (-a1 - s) / (2 * a2)))
        elif deg[i] == 1:
            out[i] = [-a0 / a1]
    hard = np.flatnonzero(deg >= 3)
    if len(hard):
        comps = np.zeros((len(hard), 4, 4))
        sizes = deg[hard]
        for j, i in enumerate(hard):
            d = deg[i]
            m = np.zeros((4, 4))
            m[1:d, 0:d - 1] = np.eye(d - 1)
            m[0:d, d - 1] = -C[i, 0:d] / C[i, d]
            # pad inert identity block so eigvals of the padded matrix keep
            # the true roots plus zeros we can filter by residual
            for q in range(d, 4):
                m[q, q] = 0.0
            comps[j] = m
        eig = np.linalg.eigvals(comps)
        for j, i in enumerate(hard):
            d = deg[i]
            roots = []
            for z in eig[j]:
                if abs(z.imag) <= 1e-8 * (1.0 + abs(z.real)):
                    t = z.real
                    # companion padding introduces spurious zeros; verify
                    val = 0.0
                    for cc in C[i, ::-1]:
                        val = val * t + cc
                    dval = 0.0
                    dcoef = [q * C[i, q] for q in range(1, 5)]
                    for cc in dcoef[::-1]:
                        dval = dval * t + cc
                    if dval != 0.0:
                        t -= val / dval
                    val2 = 0.0
                    for cc in C[i, ::-1]:
                        val2 = val2 * t + cc
                    if abs(val2) <= 1e-6 * (1.0 + abs(t) ** d):
                        roots.append(t)
            roots.sort()
            ded = []
            for r in roots:
                if not ded or abs(r - ded[-1]) > 1e-9 * (1.0 + abs(r)):
                    ded.append(r)
            out[i] = ded
    return out


class _SiteArrays:
    """Numpy views of one site's features under the slab convention."""

    def __init__(self, site, family):
        feats = [family.features[family.offsets[site.site] + i]
                 for i in range(len(site.features))]
        self.scale = family.scale
        self.feats = feats
        self.fids = np.array([f.fid for f in feats])
        self.corner_mask = np.array([f.kind == "corner" for f in feats])
        self.cx = np.array([f.x if f.kind == "corner" else 0.0 for f in feats])
        self.cy = np.array([f.y if f.kind == "corner" else 0.0 for f in feats])
        self.eax = np.array([f.ax if f.kind == "edge" else 0.0 for f in feats])
        self.eay = np.array([f.ay if f.kind == "edge" else 0.0 for f in feats])
        self.eux = np.array([f.ux if f.kind == "edge" else 1.0 for f in feats])
        self.euy = np.array([f.uy if f.kind == "edge" else 0.0 for f in feats])
        self.enx = np.array([f.nx if f.kind == "edge" else 1.0 for f in feats])
        self.eny = np.array([f.ny if f.kind == "edge" else 0.0 for f in feats])
        self.elen = np.array([f.length if f.kind == "edge" else 1.0 for f in feats])

    def slab_dist(self, pts):
        """(M, F) slab-convention distances for an (M, 2) point array."""
        pts = np.asarray(pts, dtype=float)
        dc = np.hypot(pts[:, None, 0] - self.cx[None, :],
                      pts[:, None, 1] - self.cy[None, :])
        qx = pts[:, None, 0] - self.eax[None, :]
        qy = pts[:, None, 1] - self.eay[None, :]
        t = qx * self.eux[None, :] + qy * self.euy[None, :]
        dl = np.abs(qx * self.enx[None, :] + qy * self.eny[None, :])
        inside = (t > 0.0) & (t < self.elen[None, :])
        de = np.where(inside, dl, np.inf)
        return np.where(self.corner_mask[None, :], dc, de)

    def vertex_dist(self, pts):
        """Like slab_dist but edges count tangencies at their closed
        endpoints too (a disk may touch an edge exactly at a corner).
        Tolerances grow with the query's distance, matching the accuracy of
        far-out vertex estimates."""
        pts = np.asarray(pts, dtype=float)
        dc = np.hypot(pts[:, None, 0] - self.cx[None, :],
                      pts[:, None, 1] - self.cy[None, :])
        qx = pts[:, None, 0] - self.eax[None, :]
        qy = pts[:, None, 1] - self.eay[None, :]
        t = qx * self.eux[None, :] + qy * self.euy[None, :]
        dl = np.abs(qx * self.enx[None, :] + qy * self.eny[None, :])
        tol = 1e-7 * (self.scale + np.hypot(pts[:, 0], pts[:, 1]))[:, None]
        inside = (t > -tol) & (t < self.elen[None, :] + tol)
        de = np.where(inside, dl, np.inf)
        return np.where(self.corner_mask[None, :], dc, de)


def _dist2_poly_corner(xc, yc, cx, cy):
    x0, x1, x2 = xc
    y0, y1, y2 = yc
    return [
        (x0 - cx) ** 2 + (y0 - cy) ** 2,
        2 * ((x0 - cx) * x1 + (y0 - cy) * y1),
        x1 * x1 + y1 * y1 + 2 * ((x0 - cx) * x2 + (y0 - cy) * y2),
        2 * (x1 * x2 + y1 * y2),
        x2 * x2 + y2 * y2,
    ]


def _line_poly(xc, yc, nx, ny, off):
    return [nx * xc[0] + ny * yc[0] - off,
            nx * xc[1] + ny * yc[1],
            nx * xc[2] + ny * yc[2]]


def _square_poly(p):
    a0, a1, a2 = p
    return [a0 * a0, 2 * a0 * a1, a1 * a1 + 2 * a0 * a2, 2 * a1 * a2, a2 * a2]


class MedialAxis:
    """Medial axis of one site: its k=1 diagram plus forest bookkeeping."""

    def __init__(self, site, diagram, trees, spokes):
        self.site = site
        self.diagram = diagram
        self.trees = trees     # list of _Tree
        self.spokes = spokes   # list of arc ids (isolated spokes)

    def tree_of_pocket(self, pocket):
        for t in self.trees:
            if t.pocket is pocket or t.pocket_index == pocket.index:
                return t
        return None

    def __repr__(self):
        return (f"MedialAxis(site={self.site.site}, trees={len(self.trees)}, "
                f"spokes={len(self.spokes)})")


class _Tree:
    __slots__ = ("arcs", "nodes", "pocket", "pocket_index", "infinite_arcs")

    def __init__(self, arcs, nodes, infinite_arcs):
        self.arcs = arcs
        self.nodes = nodes   # node_key -> dict(kind, pos, arcs)
        self.pocket = None
        self.pocket_index = None
        self.infinite_arcs = infinite_arcs

    def __repr__(self):
        return f"Tree(arcs={len(self.arcs)}, pocket={self.pocket_index})"


def compute_medial_axis(site, family, locator_seed=0):
    """Medial axis subdivision of one site, as a single-site Diagram wrapped
    with its pocket trees and isolated spokes."""
    specs = _medial_arc_specs(site, family)
    dgm = Diagram.from_arcs(family, [site.site], specs,
                            locator_seed=locator_seed)
    trees, spokes = _census(site, family, dgm)
    return MedialAxis(site, dgm, trees, spokes)


def tree_of_pocket(axis, pocket):
    """The unique tree of a pocket (None for a hull-edge spoke query)."""
    return axis.tree_of_pocket(pocket)


# ---------------------------------------------------------------------------

def _medial_arc_specs(site, family):
    arrays = _SiteArrays(site, family)
    feats = arrays.feats
    F = len(feats)
    scale = max(family.scale, 1e-300)

    pairs = set()
    # adjacency seeds: corner-incident-edge (spokes) and edges sharing a corner
    for f in feats:
        if f.kind == "corner":
            for e_idx in f.incident_edges:
                pairs.add(_pkey(f.idx, e_idx))
            for i in range(len(f.incident_edges)):
                for j in range(i + 1, len(f.incident_edges)):
                    pairs.add(_pkey(f.incident_edges[i], f.incident_edges[j]))
    if F <= 28:
        for i in range(F):
            for j in range(i + 1, F):
                pairs.add((i, j))
    else:
        # proximity seeds
        refs = np.array([f.ref_point() for f in feats])
        d = np.hypot(refs[:, None, 0] - refs[None, :, 0],
                     refs[:, None, 1] - refs[None, :, 1])
        np.fill_diagonal(d, np.inf)
        kn = min(12, F - 1)
        for i in range(F):
            for j in np.argpartition(d[i], kn)[:kn]:
                pairs.add(_pkey(i, int(j)))

    attempted = set()
    arcs_out = []   # (curve, a, b, ia, ib, end0, end1) with local feature idx
    queue = list(sorted(pairs))
    rounds = 0
    while queue:
        rounds += 1
        if rounds > 8 * F * F:
            raise DegenerateInput("medial axis healing did not converge")
        batch, queue = queue, []
        for (i, j) in batch:
            if (i, j) in attempted:
                continue
            attempted.add((i, j))
            arcs_out.extend(_trim_pair(site, family, arrays, i, j, scale))
        # census: find under-determined vertices and queue their missing pairs
        missing = _missing_pairs(site, family, arrays, arcs_out, attempted, scale)
        queue = [p for p in missing if p not in attempted]

    return _to_specs(site, family, arrays, arcs_out, scale)


def _pkey(i, j):
    return (i, j) if i < j else (j, i)


def _trim_pair(site, family, arrays, i, j, scale):
    """Surviving sub-arcs of the dominance boundary of features i, j."""
    feats = arrays.feats
    fa, fb = feats[i], feats[j]
    try:
        pieces = dominance_boundary(fa, fb, tol=EPS * scale)
    except DegenerateInput:
        return []
    out = []
    for piece in pieces:
        t0, t1 = piece.t0, piece.t1
        xc, yc = piece.xy_polys()
        xc = _poly_pad(xc)
        yc = _poly_pad(yc)
        if fa.kind == "corner":
            r2 = _dist2_poly_corner(xc, yc, fa.x, fa.y)
        else:
            r2 = _square_poly(_line_poly(xc, yc, fa.nx, fa.ny,
                                         fa.nx * fa.ax + fa.ny * fa.ay))
        rows = []
        # split where the locus touches the site (leaf corners: r = 0); runs
        # must not merge across these
        zero_cuts = list(real_roots(r2))
        cuts = list(zero_cuts)
        for m, f in enumerate(feats):
            if m == i or m == j:
                continue
            if f.kind == "corner":
                d2 = _dist2_poly_corner(xc, yc, f.x, f.y)
                rows.append([d2[q] - r2[q] for q in range(5)])
            else:
                d2 = _square_poly(_line_poly(xc, yc, f.nx, f.ny,
                                             f.nx * f.ax + f.ny * f.ay))
                rows.append([d2[q] - r2[q] for q in range(5)])
                # slab boundary crossings
                sp = _line_poly(xc, yc, f.ux, f.uy, f.ux * f.ax + f.uy * f.ay)
                for off in (0.0, f.length):
                    c = [sp[0] - off, sp[1], sp[2]]
                    cuts.extend(real_roots(c))
        for roots in _batched_roots(rows):
            cuts.extend(roots)
        lo = t0 if t0 > -_INF else None
        hi = t1 if t1 < _INF else None
        span = abs((hi if hi is not None else 0) - (lo if lo is not None else 0)) + scale
        cuts = sorted({t for t in cuts
                       if (lo is None or t > lo + 0) and (hi is None or t < hi)})
        grid = ([lo] if lo is not None else [min(cuts, default=0.0) - 4 * span]) \
            + cuts + ([hi] if hi is not None else [max(cuts, default=0.0) + 4 * span])
        mids = [(grid[q] + grid[q + 1]) * 0.5 for q in range(len(grid) - 1)]
        if not mids:
            continue
        pts = np.array([piece.point(t) for t in mids])
        dists = arrays.slab_dist(pts)
        cols = [m for m in range(len(feats)) if m not in (i, j)]
        if cols:
            others = dists[:, cols].min(axis=1)
        else:
            others = np.full(len(mids), np.inf)
        own = np.array([math.sqrt(max(_eval5(r2, t), 0.0)) for t in mids])
        ok = own <= others + 1e-9 * scale
        zset = sorted(zero_cuts)

        def is_zero_cut(t):
            for z in zset:
                if abs(t - z) <= 1e-9 * (1.0 + abs(t)):
                    return True
            return False

        # assemble maximal surviving runs, breaking at site-touch points
        q = 0
        while q < len(mids):
            if not ok[q]:
                q += 1
                continue
            q2 = q
            while q2 + 1 < len(mids) and ok[q2 + 1] and not is_zero_cut(grid[q2 + 1]):
                q2 += 1
            a = grid[q] if not (q == 0 and lo is None) else -_INF
            b = grid[q2 + 1] if not (q2 == len(mids) - 1 and hi is None) else _INF
            out.append((piece, a, b, i, j))
            q = q2 + 1
    return out


def _eval5(c, t):
    return c[0] + t * (c[1] + t * (c[2] + t * (c[3] + t * c[4])))


def _quant_key(p, scale, rel=1e-6):
    """Magnitude-aware quantization key (power-of-two cell size)."""
    q = rel * (scale + math.hypot(p[0], p[1]))
    q = 2.0 ** math.ceil(math.log2(q))
    return (round(p[0] / q), round(p[1] / q), q)


def _missing_pairs(site, family, arrays, arcs_out, attempted, scale):
    """Pairs implied by arc endpoints whose vertices are still under-covered."""
    verts = {}
    for (piece, a, b, i, j) in arcs_out:
        for t in (a, b):
            if t in (-_INF, _INF):
                continue
            p = piece.point(t)
            r = math.sqrt(max(_eval5_from(piece, arrays, i, t), 0.0))
            if r <= 10 * EPS * scale + 1e-7 * scale:
                continue  # corner leaf
            key = _quant_key(p, scale)
            verts.setdefault(key, {"pt": p, "pairs": set()})["pairs"].add(_pkey(i, j))
    missing = set()
    for v in verts.values():
        present = v["pairs"]
        feats_here = set()
        for (i, j) in present:
            feats_here.update((i, j))
        if len(feats_here) < 3:
            # find the actual feature set by distance
            d = arrays.vertex_dist(np.array([v["pt"]]))[0]
            r = min(d[list(feats_here)]) if feats_here else d.min()
            near = {int(m) for m in np.flatnonzero(d <= r + 1e-6 * scale)}
            feats_here |= near
        for a in feats_here:
            for b in feats_here:
                if a < b and (a, b) not in present and (a, b) not in attempted:
                    missing.add((a, b))
    return missing


def _eval5_from(piece, arrays, i, t):
    f = arrays.feats[i]
    xc, yc = piece.xy_polys()
    xc = _poly_pad(xc)
    yc = _poly_pad(yc)
    if f.kind == "corner":
        r2 = _dist2_poly_corner(xc, yc, f.x, f.y)
    else:
        r2 = _square_poly(_line_poly(xc, yc, f.nx, f.ny,
                                     f.nx * f.ax + f.ny * f.ay))
    return _eval5(r2, t)


def _to_specs(site, family, arrays, arcs_out, scale):
    """Resolve arc endpoints into exact vertex keys and emit ArcSpecs."""
    feats = arrays.feats
    base = family.offsets[site.site]
    corner_xy = site.corners_xy
    specs = []
    leaf_tol = 1e-7 * scale
    fallback_registry = {}

    def fallback_key(p):
        # shared key for unsolvable (degenerate) vertices: probe neighbors
        q = 2.0 ** math.ceil(math.log2(1e-6 * (scale + math.hypot(p[0], p[1]))))
        kx, ky = round(p[0] / q), round(p[1] / q)
        for dx in (0, -1, 1):
            for dy in (0, -1, 1):
                hit = fallback_registry.get((kx + dx, ky + dy, q))
                if hit is not None and math.hypot(hit[1][0] - p[0],
                                                  hit[1][1] - p[1]) <= 2.0 * q:
                    return hit
        key = ("pt", kx, ky, q)
        fallback_registry[(kx, ky, q)] = (key, p)
        return (key, p)

    def endpoint(piece, t, i, j):
        if t in (-_INF, _INF):
            return None, t
        p = piece.point(t)
        r = math.sqrt(max(_eval5_from(piece, arrays, i, t), 0.0))
        if r <= leaf_tol:
            # leaf at a corner of the site
            ci = int(np.argmin(np.hypot(corner_xy[:, 0] - p[0],
                                        corner_xy[:, 1] - p[1])))
            cpt = (float(corner_xy[ci, 0]), float(corner_xy[ci, 1]))
            return (("corner", base + ci), cpt), piece.param_of(cpt)
        d = arrays.vertex_dist(np.array([p]))[0]
        d[i] = np.inf
        d[j] = np.inf
        near = np.flatnonzero(d <= d.min() + 1e-7 * scale)
        # prefer corners among ties, then lowest feature id
        third = min(near, key=lambda m: (feats[m].kind != "corner", m))
        tri = tuple(sorted((feats[i].fid, feats[j].fid, feats[int(third)].fid)))
        cands = triple_equidistant_points(*[family.features[f] for f in tri],
                                          scale=scale)
        best, bi = None, -1
        for s_idx, (cx, cy, cr) in enumerate(cands):
            dd = math.hypot(cx - p[0], cy - p[1])
            if best is None or dd < best:
                best, bi = dd, s_idx
        if bi >= 0 and best <= 1e-5 * (scale + r):
            cx, cy, cr = cands[bi]
            return (("tri", tri, bi), (cx, cy)), piece.param_of((cx, cy))
        # fallback: coordinate-keyed vertex (degenerate configurations)
        key, pt = fallback_key(p)
        return (key, pt), piece.param_of(pt)

    for (piece, a, b, i, j) in arcs_out:
        end0, ta = endpoint(piece, a, i, j)
        end1, tb = endpoint(piece, b, i, j)
        if ta is not None and tb is not None and not tb > ta:
            continue
        if ta is not None and tb is not None and tb - ta <= 1e-10 * scale:
            continue
        specs.append(ArcSpec(piece, ta if ta is not None else -_INF,
                             tb if tb is not None else _INF,
                             feats[i].fid, feats[j].fid, end0, end1))
    return specs


# ---------------------------------------------------------------------------

def _census(site, family, dgm):
    """Split the axis into pocket trees and isolated spokes."""
    hull_edges = {family.offsets[site.site] + e for e in site.hull_site_edges()}
    feats = family.features

    # connect arcs through non-corner vertices
    parent = list(range(len(dgm.arcs)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj

    at_vertex = {}
    for a in dgm.arcs:
        for v in (a.v0, a.v1):
            if v >= 0 and dgm.vertices[v].kind != "corner_leaf":
                at_vertex.setdefault(v, []).append(a.aid)
    for v, lst in at_vertex.items():
        for x in lst[1:]:
            union(lst[0], x)

    groups = {}
    for a in dgm.arcs:
        groups.setdefault(find(a.aid), []).append(a.aid)

    trees = []
    spokes = []
    for aids in groups.values():
        if len(aids) == 1:
            a = dgm.arcs[aids[0]]
            pair = a.pair()
            kinds = {feats[pair[0]].kind, feats[pair[1]].kind}
            unbounded = a.v0 < 0 or a.v1 < 0
            if kinds == {"corner", "edge"} and unbounded and \
                    (pair[0] in hull_edges or pair[1] in hull_edges):
                spokes.append(aids[0])
                continue
        nodes = {}
        inf_arcs = []
        for aid in aids:
            a = dgm.arcs[aid]
            for (v, end) in ((a.v0, 0), (a.v1, 1)):
                if v < 0:
                    key = ("inf", -1 - v)
                    pos = None
                    kind = "inf"
                    inf_arcs.append(aid)
                elif dgm.vertices[v].kind == "corner_leaf":
                    key = ("leaf", aid, end)
                    pos = (dgm.vertices[v].x, dgm.vertices[v].y)
                    kind = "corner"
                else:
                    key = ("v", v)
                    pos = (dgm.vertices[v].x, dgm.vertices[v].y)
                    kind = "interior"
                node = nodes.setdefault(key, {"kind": kind, "pos": pos, "arcs": []})
                node["arcs"].append((aid, end))
        trees.append(_Tree(sorted(aids), nodes, inf_arcs))

    # match trees to pockets by leaf corners
    corner_xy = site.corners_xy
    for t in trees:
        leaf_corners = set()
        for key, nd in t.nodes.items():
            if nd["kind"] == "corner":
                p = nd["pos"]
                ci = int(np.argmin(np.hypot(corner_xy[:, 0] - p[0],
                                            corner_xy[:, 1] - p[1])))
                leaf_corners.add(ci)
        best, best_score = None, -1
        for pk in site.pockets:
            if leaf_corners <= pk.corners:
                score = len(leaf_corners) + 1.0 / (1 + len(pk.corners))
                if score > best_score:
                    best, best_score = pk, score
        if best is not None:
            t.pocket = best
            t.pocket_index = best.index
    return trees, spokes
