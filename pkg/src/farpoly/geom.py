"""Numeric kernel: degree-<=2 curves, bisectors, tangent disks, intersections.

Everything downstream (medial axes, diagram merging, point location) reduces to
a small set of primitives implemented here:

- real roots of polynomials of degree <= 4 (closed forms + Newton polish),
- parameterized curves (segment / ray / line / parabolic arc) with implicit
  conic forms,
- distance functions to corners and edges (closed and slab conventions),
- bisector loci between two features,
- disks tangent to three features,
- intersections of two curves (at most four points).

Coordinates are plain floats.  Tolerances are relative: callers pass a `scale`
(the bounding-box diameter of the instance); the effective tolerance is
EPS * scale, which matches working at EPS on coordinates normalized to a
unit-diameter box.
"""

import math

EPS = 1e-9

__all__ = [
    "EPS", "DegenerateInput", "OverlapError", "Disk", "HalfplaneAtInfinity",
    "Curve", "segment_curve", "ray_curve", "line_curve", "parabola_curve",
    "real_roots", "distance_point_feature", "dominance_boundary",
    "bisector_curve", "tangent_disk", "curve_intersections", "Intersection",
]


class DegenerateInput(Exception):
    """Input violates the general-position assumptions the algorithms need."""


class OverlapError(Exception):
    """Two curves share a supporting curve over an interval."""


class Disk:
    """Closed disk given by center and radius."""

    __slots__ = ("cx", "cy", "r")

    def __init__(self, cx, cy, r):
        self.cx = float(cx)
        self.cy = float(cy)
        self.r = float(r)

    @property
    def center(self):
        return (self.cx, self.cy)

    def __repr__(self):
        return f"Disk(({self.cx:.6g}, {self.cy:.6g}), r={self.r:.6g})"


class HalfplaneAtInfinity:
    """Limit 'disk' of a vertex at infinity: direction angle plus offset."""

    __slots__ = ("direction", "offset")

    def __init__(self, direction, offset):
        self.direction = float(direction) % (2.0 * math.pi)
        self.offset = float(offset)

    def __repr__(self):
        return f"HalfplaneAtInfinity(phi={self.direction:.6g}, offset={self.offset:.6g})"


# ---------------------------------------------------------------------------
# small polynomial helpers (ascending coefficients: c[0] + c[1] t + ...)

def _poly_eval(c, t):
    acc = 0.0
    for k in reversed(c):
        acc = acc * t + k
    return acc


def _poly_deriv(c):
    return [i * c[i] for i in range(1, len(c))]


def _poly_mul(a, b):
    out = [0.0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0.0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def _poly_add(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0.0) + (b[i] if i < len(b) else 0.0)
            for i in range(n)]


def _poly_scale(a, s):
    return [ai * s for ai in a]


def _newton_polish(coeffs, x, iters=3):
    d = _poly_deriv(coeffs)
    for _ in range(iters):
        f = _poly_eval(coeffs, x)
        fp = _poly_eval(d, x)
        if fp == 0.0:
            break
        step = f / fp
        x -= step
        if abs(step) < 1e-16 * (1.0 + abs(x)):
            break
    return x


def _cubic_roots(a, b, c, d):
    # a t^3 + b t^2 + c t + d, a != 0; trigonometric / Cardano split
    b /= a
    c /= a
    d /= a
    p = c - b * b / 3.0
    q = 2.0 * b ** 3 / 27.0 - b * c / 3.0 + d
    shift = -b / 3.0
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    roots = []
    if disc > 0.0:
        s = math.sqrt(disc)
        u = -q / 2.0 + s
        v = -q / 2.0 - s
        u = math.copysign(abs(u) ** (1.0 / 3.0), u)
        v = math.copysign(abs(v) ** (1.0 / 3.0), v)
        roots.append(u + v + shift)
    else:
        # three real roots
        rho = math.sqrt(max(-p / 3.0, 0.0))
        if rho == 0.0:
            roots.append(shift)
        else:
            arg = max(-1.0, min(1.0, 3.0 * q / (2.0 * p * rho)))
            theta = math.acos(arg) / 3.0
            for k in range(3):
                roots.append(2.0 * rho * math.cos(theta - 2.0 * math.pi * k / 3.0) + shift)
    return roots


def real_roots(coeffs, tol=1e-12):
    """Real roots of a polynomial (ascending coefficients), degree <= 4.

    Returns a sorted list; near-multiple roots are collapsed to one entry.
    Closed forms with a Newton polish; degrades gracefully for near-degree
    drops (tiny leading coefficients are trimmed).
    """
    c = list(map(float, coeffs))
    while c and c[-1] == 0.0:
        c.pop()
    if not c:
        return []
    mag = max(abs(v) for v in c)
    if mag == 0.0:
        return []
    c = [v / mag for v in c]
    # trim leading coefficients that cannot influence roots at working precision
    while len(c) > 1 and abs(c[-1]) < 1e-14 * max(abs(v) for v in c[:-1]):
        c.pop()
    deg = len(c) - 1
    if deg <= 0:
        return []
    if deg == 1:
        return [-c[0] / c[1]]
    if deg == 2:
        a, b, cc = c[2], c[1], c[0]
        disc = b * b - 4.0 * a * cc
        if disc < 0.0:
            if disc > -tol * max(b * b, abs(4.0 * a * cc), 1e-300):
                return [-b / (2.0 * a)]
            return []
        s = math.sqrt(disc)
        # numerically stable pairing
        q = -0.5 * (b + math.copysign(s, b)) if b != 0.0 else 0.5 * s
        roots = []
        if a != 0.0:
            roots.append(q / a)
        if q != 0.0:
            roots.append(cc / q)
        elif disc == 0.0 or not roots:
            roots.append(0.0)
        out = sorted(set(roots))
        return _cluster(out, coeffs=c)
    if deg == 3:
        raw = _cubic_roots(c[3], c[2], c[1], c[0])
    else:
        raw = _quartic_roots(c[4], c[3], c[2], c[1], c[0])
    raw = [_newton_polish(c, r) for r in raw]
    raw.sort()
    return _cluster(raw, coeffs=c)


def _cluster(roots, coeffs=None, rel=1e-9):
    out = []
    for r in roots:
        if out and abs(r - out[-1]) <= rel * (1.0 + abs(r) + abs(out[-1])):
            out[-1] = 0.5 * (out[-1] + r)
        else:
            out.append(r)
    return out


def _quartic_roots(a, b, c, d, e):
    # Ferrari: reduce to depressed quartic y^4 + p y^2 + q y + r
    b /= a
    c /= a
    d /= a
    e /= a
    shift = -b / 4.0
    p = c - 3.0 * b * b / 8.0
    q = d - b * c / 2.0 + b ** 3 / 8.0
    r = e - b * d / 4.0 + b * b * c / 16.0 - 3.0 * b ** 4 / 256.0
    roots = []
    if abs(q) < 1e-14 * (1.0 + abs(p) + abs(r)):
        # biquadratic
        for z in real_roots([r, p, 1.0]):
            if z < 0.0:
                if z > -1e-12 * (1.0 + abs(p)):
                    z = 0.0
                else:
                    continue
            s = math.sqrt(z)
            roots.extend([s + shift, -s + shift])
        return roots
    # resolvent cubic: z^3 + 2 p z^2 + (p^2 - 4 r) z - q^2 = 0, need z > 0
    zs = _cubic_roots(1.0, 2.0 * p, p * p - 4.0 * r, -q * q)
    z = max(zs)
    if z <= 0.0:
        return roots
    s = math.sqrt(z)
    # factor into two quadratics: (y^2 + s y + u)(y^2 - s y + v)
    u = (p + z - q / s) / 2.0
    v = (p + z + q / s) / 2.0
    for (B, C) in ((s, u), (-s, v)):
        disc = B * B - 4.0 * C
        if disc >= 0.0:
            sq = math.sqrt(disc)
            roots.append((-B + sq) / 2.0 + shift)
            roots.append((-B - sq) / 2.0 + shift)
        elif disc > -1e-12 * (1.0 + B * B + abs(C)):
            roots.append(-B / 2.0 + shift)
    return roots


# ---------------------------------------------------------------------------
# curves

_INF = float("inf")


class Curve:
    """Parameterized curve of algebraic degree <= 2.

    kinds:
      'seg'  point(t) = o + t*d, |d| = 1, t in [0, length]
      'ray'  same, t in [0, inf)
      'line' same, t in (-inf, inf)
      'par'  point(s) = foot + s*u + h(s)*n with h(s) = (s^2 + p^2) / (2p);
             focus = foot + p*n, directrix through foot along u.

    Parabolic arcs are stored with a monotone parameter interval; the
    supporting algebraic curve always has degree <= 2.
    """

    __slots__ = ("kind", "ox", "oy", "dx", "dy", "nx", "ny", "p", "t0", "t1")

    def __init__(self, kind, ox, oy, dx, dy, nx=0.0, ny=0.0, p=0.0,
                 t0=-_INF, t1=_INF):
        self.kind = kind
        self.ox = ox
        self.oy = oy
        self.dx = dx
        self.dy = dy
        self.nx = nx
        self.ny = ny
        self.p = p
        self.t0 = t0
        self.t1 = t1

    # -- evaluation ---------------------------------------------------------
    def point(self, t):
        if self.kind == "par":
            h = (t * t + self.p * self.p) / (2.0 * self.p)
            return (self.ox + t * self.dx + h * self.nx,
                    self.oy + t * self.dy + h * self.ny)
        return (self.ox + t * self.dx, self.oy + t * self.dy)

    def tangent(self, t):
        """Unit tangent in the direction of increasing parameter."""
        if self.kind == "par":
            hp = t / self.p
            tx = self.dx + hp * self.nx
            ty = self.dy + hp * self.ny
            m = math.hypot(tx, ty)
            return (tx / m, ty / m)
        return (self.dx, self.dy)

    def curvature_sign(self, t):
        # sign of cross(x', x''): 0 for straight kinds
        if self.kind != "par":
            return 0.0
        hp = t / self.p
        cx = (self.dx + hp * self.nx) * (self.ny / self.p) \
            - (self.dy + hp * self.ny) * (self.nx / self.p)
        return cx

    def param_of(self, pt):
        if self.kind == "par":
            return (pt[0] - self.ox) * self.dx + (pt[1] - self.oy) * self.dy
        return (pt[0] - self.ox) * self.dx + (pt[1] - self.oy) * self.dy

    def contains_param(self, t, tol=0.0):
        return self.t0 - tol <= t <= self.t1 + tol

    @property
    def bounded(self):
        return self.t0 > -_INF and self.t1 < _INF

    @property
    def focus(self):
        return (self.ox + self.p * self.nx, self.oy + self.p * self.ny)

    def sub(self, a, b):
        """Restriction to [a, b]; preserves the parameterization."""
        kind = self.kind
        if kind != "par":
            if a > -_INF and b < _INF:
                kind = "seg"
            elif a == -_INF and b == _INF:
                kind = "line"
            else:
                kind = "ray"
        return Curve(kind, self.ox, self.oy, self.dx, self.dy,
                     self.nx, self.ny, self.p, a, b)

    # -- algebra ------------------------------------------------------------
    def xy_polys(self):
        """Coordinate polynomials in the parameter (ascending coefficients)."""
        if self.kind == "par":
            a = self.p * self.p / (2.0 * self.p)
            inv = 1.0 / (2.0 * self.p)
            xc = [self.ox + a * self.nx, self.dx, inv * self.nx]
            yc = [self.oy + a * self.ny, self.dy, inv * self.ny]
            return xc, yc
        return [self.ox, self.dx], [self.oy, self.dy]

    def implicit(self):
        """Conic coefficients (A, B, C, D, E, F) with A x^2 + B xy + C y^2 + D x + E y + F = 0."""
        if self.kind == "par":
            fx, fy = self.focus
            b = self.nx * self.ox + self.ny * self.oy
            A = 1.0 - self.nx * self.nx
            B = -2.0 * self.nx * self.ny
            C = 1.0 - self.ny * self.ny
            D = -2.0 * fx + 2.0 * b * self.nx
            E = -2.0 * fy + 2.0 * b * self.ny
            F = fx * fx + fy * fy - b * b
            return (A, B, C, D, E, F)
        # line through (ox, oy) with direction d: normal form
        nx, ny = -self.dy, self.dx
        return (0.0, 0.0, 0.0, nx, ny, -(nx * self.ox + ny * self.oy))

    def x_extreme_params(self):
        """Parameters where the tangent is vertical (x-monotone split points)."""
        if self.kind == "par":
            if self.nx == 0.0:
                return []
            t = -self.p * self.dx / self.nx
            if self.t0 < t < self.t1:
                return [t]
        return []

    def __repr__(self):
        return (f"Curve({self.kind!r}, o=({self.ox:.4g},{self.oy:.4g}), "
                f"d=({self.dx:.4g},{self.dy:.4g}), t=[{self.t0:.4g},{self.t1:.4g}])")


def segment_curve(p0, p1):
    dx = p1[0] - p0[0]
    dy = p1[1] - p0[1]
    L = math.hypot(dx, dy)
    if L == 0.0:
        raise DegenerateInput("zero-length segment curve")
    return Curve("seg", p0[0], p0[1], dx / L, dy / L, t0=0.0, t1=L)


def ray_curve(origin, direction):
    m = math.hypot(direction[0], direction[1])
    return Curve("ray", origin[0], origin[1], direction[0] / m, direction[1] / m,
                 t0=0.0, t1=_INF)


def line_curve(origin, direction):
    m = math.hypot(direction[0], direction[1])
    return Curve("line", origin[0], origin[1], direction[0] / m, direction[1] / m)


def parabola_curve(focus, line_point, line_dir, t0=-_INF, t1=_INF):
    """Parabola with the given focus and directrix (point + direction)."""
    m = math.hypot(line_dir[0], line_dir[1])
    ux, uy = line_dir[0] / m, line_dir[1] / m
    # normal pointing from the directrix toward the focus
    nx, ny = -uy, ux
    s = (focus[0] - line_point[0]) * nx + (focus[1] - line_point[1]) * ny
    if s < 0.0:
        nx, ny, s = -nx, -ny, -s
    if s == 0.0:
        raise DegenerateInput("focus lies on the directrix")
    foot = (focus[0] - s * nx, focus[1] - s * ny)
    return Curve("par", foot[0], foot[1], ux, uy, nx, ny, s, t0, t1)


# ---------------------------------------------------------------------------
# feature distances
#
# Features are duck-typed: kind 'corner' with x, y or kind 'edge' with
# ax, ay, bx, by, ux, uy (unit a->b), nx, ny (left normal), length.

def distance_point_feature(pt, f):
    """Euclidean distance from pt to the closed feature (corner or edge)."""
    if f.kind == "corner":
        return math.hypot(pt[0] - f.x, pt[1] - f.y)
    px = pt[0] - f.ax
    py = pt[1] - f.ay
    t = px * f.ux + py * f.uy
    if t <= 0.0:
        return math.hypot(px, py)
    if t >= f.length:
        return math.hypot(pt[0] - f.bx, pt[1] - f.by)
    return abs(px * f.nx + py * f.ny)


def slab_distance(pt, f):
    """Distance under the slab convention: edges count only where the nearest
    point is interior to the edge; elsewhere +inf (their endpoint corners,
    always present as features, cover the rest)."""
    if f.kind == "corner":
        return math.hypot(pt[0] - f.x, pt[1] - f.y)
    px = pt[0] - f.ax
    py = pt[1] - f.ay
    t = px * f.ux + py * f.uy
    if t <= 0.0 or t >= f.length:
        return _INF
    return abs(px * f.nx + py * f.ny)


def _slab_interval_on_curve(curve, f, tol):
    """Parameter sub-intervals of `curve` lying inside the open slab of edge f."""
    xc, yc = curve.xy_polys()
    # s(t) = <x(t) - a, u>, want 0 < s < length
    sc = _poly_add(_poly_scale(xc, f.ux), _poly_scale(yc, f.uy))
    sc[0] -= f.ax * f.ux + f.ay * f.uy
    lo = list(sc)
    hi = list(sc)
    hi[0] -= f.length
    cuts = [r for r in real_roots(lo) + real_roots(hi)
            if curve.t0 - tol < r < curve.t1 + tol]
    lo_t = curve.t0
    hi_t = curve.t1
    pts = sorted(set([lo_t, hi_t] + cuts))
    out = []
    for a, b in zip(pts, pts[1:]):
        mid = _mid_param(a, b)
        val = _poly_eval(sc, mid)
        if 0.0 < val < f.length:
            out.append((a, b))
    # merge touching intervals
    merged = []
    for a, b in out:
        if merged and a <= merged[-1][1] + tol:
            merged[-1] = (merged[-1][0], b)
        else:
            merged.append((a, b))
    return merged


def _mid_param(a, b):
    if a == -_INF and b == _INF:
        return 0.0
    if a == -_INF:
        return b - 1.0
    if b == _INF:
        return a + 1.0
    return 0.5 * (a + b)


# ---------------------------------------------------------------------------
# bisectors

def _edges_incident(fa, fb):
    if fa.kind == "corner" and fb.kind == "edge":
        c, e = fa, fb
    elif fb.kind == "corner" and fa.kind == "edge":
        c, e = fb, fa
    else:
        return None
    da = math.hypot(c.x - e.ax, c.y - e.ay)
    db = math.hypot(c.x - e.bx, c.y - e.by)
    tol = 1e-12 * (1.0 + e.length)
    if da <= tol or db <= tol:
        return c, e
    return None


def dominance_boundary(fa, fb, tol=EPS, clip=True):
    """Equal-distance locus of two features under the slab convention.

    Returns a list of Curves.  Handles same-site adjacency: for a corner and
    an incident edge the locus is the full perpendicular line at the corner
    (whose trimmed pieces are the spokes); for parallel edges the midline.
    With clip=False the supporting loci are returned without slab clipping.
    """
    if fa.kind == "corner" and fb.kind == "corner":
        mx = 0.5 * (fa.x + fb.x)
        my = 0.5 * (fa.y + fb.y)
        dx = fb.x - fa.x
        dy = fb.y - fa.y
        L = math.hypot(dx, dy)
        if L <= tol:
            raise DegenerateInput("coincident corners")
        return [line_curve((mx, my), (-dy, dx))]

    inc = _edges_incident(fa, fb)
    if inc is not None:
        c, e = inc
        return [line_curve((c.x, c.y), (e.nx, e.ny))]

    if fa.kind == "edge" and fb.kind == "edge":
        cross = fa.ux * fb.uy - fa.uy * fb.ux
        ca = fa.nx * fa.ax + fa.ny * fa.ay
        cb = fb.nx * fb.ax + fb.ny * fb.ay
        out = []
        if abs(cross) <= 1e-12:
            # parallel supporting lines: midline (if distinct)
            dot = fa.nx * fb.nx + fa.ny * fb.ny  # +-1
            gap = ca - dot * cb
            if abs(gap) <= tol:
                raise DegenerateInput("edges on a common supporting line")
            # locus |<n_a,x>-ca| = |<n_b,x>-cb|: line <n_a, x> = (ca + dot*cb)/2
            off = 0.5 * (ca + dot * cb)
            origin = (fa.nx * off, fa.ny * off)
            base = [line_curve(origin, (fa.ux, fa.uy))]
        else:
            # supporting lines meet at O; two angular bisector lines
            # solve n_a.x = ca, n_b.x = cb
            det = fa.nx * fb.ny - fa.ny * fb.nx
            ox = (ca * fb.ny - fa.ny * cb) / det
            oy = (fa.nx * cb - ca * fb.nx) / det
            d1 = (fa.ux + fb.ux, fa.uy + fb.uy)
            d2 = (fa.ux - fb.ux, fa.uy - fb.uy)
            base = []
            if math.hypot(*d1) > 1e-12:
                base.append(line_curve((ox, oy), d1))
            if math.hypot(*d2) > 1e-12:
                base.append(line_curve((ox, oy), d2))
        if not clip:
            return base
        for ln in base:
            for (a, b) in _slab_interval_on_curve(ln, fa, tol):
                for (a2, b2) in _intersect_intervals(
                        [(a, b)], _slab_interval_on_curve(ln.sub(a, b), fb, tol)):
                    out.append(ln.sub(a2, b2))
        return out

    # corner vs non-incident edge: parabola clipped to the edge slab
    c, e = (fa, fb) if fa.kind == "corner" else (fb, fa)
    d_line = (c.x - e.ax) * e.nx + (c.y - e.ay) * e.ny
    if abs(d_line) <= tol:
        raise DegenerateInput("corner on the supporting line of the edge")
    par = parabola_curve((c.x, c.y), (e.ax, e.ay), (e.ux, e.uy))
    if not clip:
        return [par]
    # slab of e in the parabola's own parameter (coordinate along directrix)
    sa = (e.ax - par.ox) * par.dx + (e.ay - par.oy) * par.dy
    sb = (e.bx - par.ox) * par.dx + (e.by - par.oy) * par.dy
    if sa > sb:
        sa, sb = sb, sa
    return [par.sub(sa, sb)]


def triple_equidistant_points(f1, f2, f3, scale=1.0):
    """All points equidistant (closed-feature distances) from three features.

    Solved by intersecting pairwise equal-distance loci, so it also covers
    configurations where a tangency degenerates onto an edge endpoint (where
    the tangent-disk system is singular).  Returns a deterministically
    ordered list of (x, y, r).
    """
    tol = max(EPS * scale, 1e-12)
    combos = ((f1, f2, f1, f3), (f1, f2, f2, f3), (f1, f3, f2, f3))
    raw = []
    for (a, b, c, d) in combos:
        try:
            cas = dominance_boundary(a, b, tol, clip=False)
            cbs = dominance_boundary(c, d, tol, clip=False)
        except DegenerateInput:
            continue
        for ca in cas:
            for cb in cbs:
                try:
                    hits = curve_intersections(ca, cb, scale=scale)
                except (OverlapError, DegenerateInput):
                    continue
                for h in hits:
                    raw.append((h.x, h.y))
    out = []
    for (x, y) in raw:
        ds = [distance_point_feature((x, y), f) for f in (f1, f2, f3)]
        r = sum(ds) / 3.0
        if max(ds) - min(ds) > 1e-6 * (scale + r):
            continue
        if any(math.hypot(x - o[0], y - o[1]) <= 1e-7 * (scale + r)
               for o in out):
            continue
        out.append((x, y, r))
    out.sort(key=lambda p: (p[0], p[1]))
    return out


def _intersect_intervals(A, B):
    out = []
    for a0, a1 in A:
        for b0, b1 in B:
            lo = max(a0, b0)
            hi = min(a1, b1)
            if lo < hi:
                out.append((lo, hi))
    return out


def bisector_curve(fa, fb, tol=EPS):
    """Bisector of two features of distinct, disjoint sites.

    corner/corner -> line; corner/edge -> parabolic arc; edge/edge -> pieces
    of the two angular-bisector lines within both slabs.  Raises
    DegenerateInput for parallel supporting lines or intersecting features.
    """
    if getattr(fa, "site", None) is not None and getattr(fb, "site", None) is not None:
        if fa.site == fb.site:
            raise DegenerateInput("features belong to the same site")
    if fa.kind == "edge" and fb.kind == "edge":
        if abs(fa.ux * fb.uy - fa.uy * fb.ux) <= tol:
            raise DegenerateInput("parallel edges")
    return dominance_boundary(fa, fb, tol)


# ---------------------------------------------------------------------------
# tangent disks

def _touches(disk, f, tol):
    if f.kind == "corner":
        return abs(math.hypot(disk.cx - f.x, disk.cy - f.y) - disk.r) <= tol
    px = disk.cx - f.ax
    py = disk.cy - f.ay
    t = px * f.ux + py * f.uy
    if t < -tol or t > f.length + tol:
        return False
    return abs(abs(px * f.nx + py * f.ny) - disk.r) <= tol


def _line_dist_poly(xc, yc, e):
    # signed distance to the supporting line of edge e along a parameterized curve
    c = _poly_add(_poly_scale(xc, e.nx), _poly_scale(yc, e.ny))
    c[0] -= e.nx * e.ax + e.ny * e.ay
    return c


def _corner_dist2_poly(xc, yc, f):
    dx = list(xc)
    dx[0] -= f.x
    dy = list(yc)
    dy[0] -= f.y
    return _poly_add(_poly_mul(dx, dx), _poly_mul(dy, dy))


def tangent_disk(features, scale=1.0, tol=None):
    """Disks touching each of the given features.

    Three features: the (at most two) solutions of the induced degree-<=2
    system, filtered so every contact is realized on the closed feature.
    Two features: the one-parameter family is returned as its bisector
    curve(s) instead of disks.  Raises DegenerateInput on singular systems.
    """
    if tol is None:
        tol = EPS * scale
    feats = list(features)
    if len(feats) == 2:
        return dominance_boundary(feats[0], feats[1], tol)
    if len(feats) != 3:
        raise ValueError("tangent_disk expects 2 or 3 features")

    corners = [f for f in feats if f.kind == "corner"]
    edges = [f for f in feats if f.kind == "edge"]
    cands = []

    def solve_on_locus(curve, r2, r_of_t, fe):
        # centers on an equal-distance locus of two features, with squared
        # radius polynomial r2(t); match the third feature's line distance
        xc, yc = curve.xy_polys()
        ld = _line_dist_poly(xc, yc, fe)
        poly = _poly_add(_poly_mul(ld, ld), _poly_scale(r2, -1.0))
        for t in real_roots(poly):
            pt = curve.point(t)
            cands.append(Disk(pt[0], pt[1], r_of_t(t)))

    if len(corners) == 3:
        (a, b, c) = corners
        d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y))
        if abs(d) <= tol * scale:
            raise DegenerateInput("collinear corners")
        ux = ((a.x ** 2 + a.y ** 2) * (b.y - c.y) + (b.x ** 2 + b.y ** 2) * (c.y - a.y)
              + (c.x ** 2 + c.y ** 2) * (a.y - b.y)) / d
        uy = ((a.x ** 2 + a.y ** 2) * (c.x - b.x) + (b.x ** 2 + b.y ** 2) * (a.x - c.x)
              + (c.x ** 2 + c.y ** 2) * (b.x - a.x)) / d
        cands.append(Disk(ux, uy, math.hypot(ux - a.x, uy - a.y)))
    elif len(corners) == 2:
        # center on the perpendicular bisector line of the two corners
        ln = dominance_boundary(corners[0], corners[1], tol)[0]
        xc, yc = ln.xy_polys()
        g = _corner_dist2_poly(xc, yc, corners[0])
        ld = _line_dist_poly(xc, yc, edges[0])
        poly = _poly_add(g, _poly_scale(_poly_mul(ld, ld), -1.0))
        for t in real_roots(poly):
            pt = ln.point(t)
            cands.append(Disk(pt[0], pt[1],
                              math.hypot(pt[0] - corners[0].x, pt[1] - corners[0].y)))
    elif len(corners) == 1:
        # center equidistant from the corner and one edge: a parabola, or the
        # perpendicular line at the corner when it lies on the edge
        e1, e2 = edges
        for piece in dominance_boundary(corners[0], e1, tol):
            full = piece.sub(-_INF, _INF) if piece.kind != "par" else Curve(
                "par", piece.ox, piece.oy, piece.dx, piece.dy,
                piece.nx, piece.ny, piece.p)
            if full.kind == "par":
                inv = 1.0 / (2.0 * full.p)
                r = [full.p * full.p * inv, 0.0, inv]  # h(t)
                r2 = _poly_mul(r, r)
                solve_on_locus(full, r2, lambda t, f=full: (t * t + f.p * f.p) / (2.0 * f.p), e2)
            else:
                # perpendicular at an on-line corner: r(t) = |t|
                solve_on_locus(full, [0.0, 0.0, 1.0], lambda t: abs(t), e2)
    else:
        # three edges: intersect angular bisector lines of two pairs
        e1, e2, e3 = edges
        ls1 = _bisector_lines(e1, e2, tol)
        ls2 = _bisector_lines(e1, e3, tol)
        for l1 in ls1:
            for l2 in ls2:
                den = l1.dx * l2.dy - l1.dy * l2.dx
                if abs(den) <= 1e-14:
                    continue
                # solve l1.point(t) == l2.point(s)
                rx = l2.ox - l1.ox
                ry = l2.oy - l1.oy
                t = (rx * l2.dy - ry * l2.dx) / den
                pt = l1.point(t)
                r = abs((pt[0] - e1.ax) * e1.nx + (pt[1] - e1.ay) * e1.ny)
                cands.append(Disk(pt[0], pt[1], r))

    chk = max(tol, 1e-9) * max(scale, 1e-12)
    out = []
    for dsk in cands:
        if dsk.r < -chk:
            continue
        dsk.r = abs(dsk.r)
        # far-out disks accumulate cancellation error proportional to radius
        touch = max(1e-7 * scale, 1e-7 * dsk.r, 10.0 * chk)
        if all(_touches(dsk, f, touch) for f in feats):
            if not any(math.hypot(dsk.cx - o.cx, dsk.cy - o.cy) <= touch
                       and abs(dsk.r - o.r) <= touch for o in out):
                out.append(dsk)
    if len(out) > 2:
        raise DegenerateInput("more than two disks touch the three features")
    return out


def _bisector_lines(e1, e2, tol):
    cross = e1.ux * e2.uy - e1.uy * e2.ux
    c1 = e1.nx * e1.ax + e1.ny * e1.ay
    c2 = e2.nx * e2.ax + e2.ny * e2.ay
    if abs(cross) <= 1e-12:
        dot = e1.nx * e2.nx + e1.ny * e2.ny
        off = 0.5 * (c1 + dot * c2)
        return [line_curve((e1.nx * off, e1.ny * off), (e1.ux, e1.uy))]
    det = e1.nx * e2.ny - e1.ny * e2.nx
    ox = (c1 * e2.ny - e1.ny * c2) / det
    oy = (e1.nx * c2 - c1 * e2.nx) / det
    out = []
    for d in ((e1.ux + e2.ux, e1.uy + e2.uy), (e1.ux - e2.ux, e1.uy - e2.uy)):
        if math.hypot(*d) > 1e-12:
            out.append(line_curve((ox, oy), d))
    return out


# ---------------------------------------------------------------------------
# curve intersections

class Intersection:
    __slots__ = ("x", "y", "t1", "t2", "multiplicity")

    def __init__(self, x, y, t1, t2, multiplicity=1):
        self.x = x
        self.y = y
        self.t1 = t1
        self.t2 = t2
        self.multiplicity = multiplicity

    @property
    def point(self):
        return (self.x, self.y)

    def __repr__(self):
        return f"Intersection(({self.x:.6g},{self.y:.6g}), mult={self.multiplicity})"


def _same_support(c1, c2, tol):
    i1 = c1.implicit()
    i2 = c2.implicit()
    m1 = max(abs(v) for v in i1)
    m2 = max(abs(v) for v in i2)
    if m1 == 0.0 or m2 == 0.0:
        return False
    a = [v / m1 for v in i1]
    b = [v / m2 for v in i2]
    # allow a global sign flip
    if sum(x * y for x, y in zip(a, b)) < 0.0:
        b = [-v for v in b]
    return all(abs(x - y) <= 1e-7 for x, y in zip(a, b))


def curve_intersections(c1, c2, scale=1.0, tol=None):
    """All intersections of two curves within both parameter intervals.

    At most four points; tangential contacts carry multiplicity 2.  Raises
    OverlapError when the supporting curves coincide over an interval.
    """
    if tol is None:
        tol = EPS * scale
    if (c1.kind == "par") == (c2.kind == "par") and _same_support(c1, c2, tol):
        # overlap iff the parameter images intersect in more than a point
        a0 = c2.t0 if c2.t0 > -_INF else -1e18
        a1 = c2.t1 if c2.t1 < _INF else 1e18
        p0 = c1.param_of(c2.point(a0))
        p1 = c1.param_of(c2.point(a1))
        lo = max(min(p0, p1), c1.t0)
        hi = min(max(p0, p1), c1.t1)
        if hi - lo > tol:
            raise OverlapError("curves share a supporting curve over an interval")
        if abs(hi - lo) <= tol and hi >= lo:
            t = 0.5 * (lo + hi)
            pt = c1.point(t)
            return [Intersection(pt[0], pt[1], t, c2.param_of(pt), 1)]
        return []

    # substitute the lower-degree parameterization into the other implicit
    if c1.kind != "par" or c2.kind == "par":
        a, b, swap = c1, c2, False
    else:
        a, b, swap = c2, c1, True
    xc, yc = a.xy_polys()
    A, B, C, D, E, F = b.implicit()
    poly = [F]
    if A:
        poly = _poly_add(poly, _poly_scale(_poly_mul(xc, xc), A))
    if B:
        poly = _poly_add(poly, _poly_scale(_poly_mul(xc, yc), B))
    if C:
        poly = _poly_add(poly, _poly_scale(_poly_mul(yc, yc), C))
    if D:
        poly = _poly_add(poly, _poly_scale(xc, D))
    if E:
        poly = _poly_add(poly, _poly_scale(yc, E))

    dpoly = _poly_deriv(poly)
    out = []
    tol_t = max(tol, 1e-12 * scale)
    for t in real_roots(poly):
        if not a.contains_param(t, tol_t):
            continue
        pt = a.point(t)
        s = b.param_of(pt)
        if not b.contains_param(s, tol_t):
            continue
        # parabola param projection is exact for points on the curve; verify
        chk = b.point(s)
        if math.hypot(chk[0] - pt[0], chk[1] - pt[1]) > 1e-6 * scale:
            continue
        mult = 2 if abs(_poly_eval(dpoly, t)) <= 1e-7 * max(
            1.0, max(abs(v) for v in poly)) else 1
        if swap:
            out.append(Intersection(pt[0], pt[1], s, t, mult))
        else:
            out.append(Intersection(pt[0], pt[1], t, s, mult))
    # dedupe clustered roots
    dedup = []
    for it in out:
        if not any(math.hypot(it.x - o.x, it.y - o.y) <= 10 * tol_t for o in dedup):
            dedup.append(it)
    if len(dedup) > 4:
        raise DegenerateInput("more than four intersections of degree-2 curves")
    return dedup
