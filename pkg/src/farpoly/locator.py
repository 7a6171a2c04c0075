"""Point location: randomized incremental trapezoidal map with a history DAG.

The map is built over x-monotone pieces of the diagram arcs.  Internally a
sheared abscissa u = x + shear*y replaces x so that no piece is vertical and
no two distinct endpoints share an abscissa; the shear is bumped until both
hold.  Unbounded piece ends are clamped at a parameter far beyond any
meaningful coordinate, which is equivalent to clipping at a gigantic box.

Every query decomposes into two primitive predicates — left/right of a point
and above/below an x-monotone line or parabolic piece — each the sign of a
polynomial of degree <= 2 in the query coordinates, which is exactly what the
parametric-search protocol needs.  Queries run in expected O(log n),
construction in expected O(n log n) under a seeded random insertion order.
"""

import random

from .geom import real_roots

_INF = float("inf")


class Piece:
    """x-monotone sub-arc handled by the locator.

    Endpoint parameters are finite (unbounded arcs come pre-clamped).
    `sign` is +1 when the curve parameter increases from left to right.
    """

    __slots__ = ("curve", "ta", "tb", "arc_id", "pL", "pR",
                 "sign", "face_above", "face_below", "_ucoef", "_ycoef")

    def __init__(self, curve, ta, tb, arc_id, shear, pa=None, pb=None):
        # pa/pb: canonical xy endpoint coordinates; shared vertices must pass
        # the exact same floats through every incident piece
        self.curve = curve
        self.ta = ta
        self.tb = tb
        self.arc_id = arc_id
        self.face_above = None
        self.face_below = None
        xc, yc = curve.xy_polys()
        uc = [xc[i] + shear * yc[i] for i in range(len(xc))]
        while len(uc) < 3:
            uc.append(0.0)
        yc = list(yc)
        while len(yc) < 3:
            yc.append(0.0)
        self._ucoef = uc
        self._ycoef = yc
        ua, ya = self._uy_of(ta) if pa is None else (pa[0] + shear * pa[1], pa[1])
        ub, yb = self._uy_of(tb) if pb is None else (pb[0] + shear * pb[1], pb[1])
        if (ua, ya) < (ub, yb):
            self.pL, self.pR = (ua, ya), (ub, yb)
            self.sign = 1
        else:
            self.pL, self.pR = (ub, yb), (ua, ya)
            self.sign = -1

    def _uy_of(self, t):
        c = self._ucoef
        y = self._ycoef
        return (c[0] + t * (c[1] + t * c[2]), y[0] + t * (y[1] + t * y[2]))

    def param_at_u(self, u):
        c = self._ucoef
        if c[2] == 0.0:
            return (u - c[0]) / c[1]
        lo = min(self.ta, self.tb)
        hi = max(self.ta, self.tb)
        best, bd = 0.5 * (lo + hi), _INF
        for r in real_roots([c[0] - u, c[1], c[2]]):
            d = max(lo - r, r - hi, 0.0)
            if d < bd:
                best, bd = r, d
        return best

    def y_at_u(self, u):
        t = self.param_at_u(u)
        c = self._ycoef
        return c[0] + t * (c[1] + t * c[2])

    def slope_curv_at(self, u):
        """(dy/du, d(dy/du)/du) just right of abscissa u, for shared-endpoint
        ordering of pieces."""
        t = self.param_at_u(u)
        uc, yc = self._ucoef, self._ycoef
        du = uc[1] + 2.0 * t * uc[2]
        dy = yc[1] + 2.0 * t * yc[2]
        if du == 0.0:
            # endpoint at a parabola's u-extreme: vertical tangent
            return (_INF if dy > 0 else -_INF, 0.0)
        slope = dy / du
        curv = (2.0 * yc[2] * du - 2.0 * uc[2] * dy) / (du * du * du)
        return (slope, curv)


class _Trap:
    __slots__ = ("top", "bottom", "leftp", "rightp", "ul", "ll", "ur", "lr", "node")

    def __init__(self, top, bottom, leftp, rightp):
        self.top = top
        self.bottom = bottom
        self.leftp = leftp
        self.rightp = rightp
        self.ul = self.ll = self.ur = self.lr = None
        self.node = None


class _Node:
    __slots__ = ("kind", "point", "piece", "trap", "left", "right")

    def __init__(self, kind, point=None, piece=None, trap=None):
        self.kind = kind  # 'x' | 'y' | 'leaf'
        self.point = point
        self.piece = piece
        self.trap = trap
        self.left = None   # x: lex-smaller side / y: above
        self.right = None  # x: lex-greater-or-equal side / y: below
        if trap is not None:
            trap.node = self

    def morph(self, other):
        """Replace this node's content in place (history DAG update)."""
        self.kind = other.kind
        self.point = other.point
        self.piece = other.piece
        self.trap = other.trap
        self.left = other.left
        self.right = other.right
        if self.trap is not None:
            self.trap.node = self


class TrapezoidMap:
    """History-DAG trapezoidal map over Pieces (static; no deletions)."""

    def __init__(self, pieces, seed=0, shear=1e-3):
        self.shear = shear
        self.pieces = pieces
        root = _Trap(None, None, None, None)
        self.root = _Node("leaf", trap=root)
        order = list(range(len(pieces)))
        random.Random(seed).shuffle(order)
        for i in order:
            self._insert(pieces[i])

    # -- queries -----------------------------------------------------------
    def to_uy(self, x, y):
        return (x + self.shear * y, y)

    def find_trap(self, x, y):
        """Trapezoid containing the query point (ties resolved downward)."""
        u, yy = self.to_uy(x, y)
        node = self.root
        while node.kind != "leaf":
            if node.kind == "x":
                node = node.left if (u, yy) < node.point else node.right
            else:
                node = node.left if yy > node.piece.y_at_u(u) else node.right
        return node.trap

    # -- construction ------------------------------------------------------
    def _locate_start(self, p, piece):
        node = self.root
        while node.kind != "leaf":
            if node.kind == "x":
                node = node.left if p < node.point else node.right
            else:
                other = node.piece
                if p == other.pL or p == other.pR:
                    node = node.left if piece.slope_curv_at(p[0]) > \
                        other.slope_curv_at(p[0]) else node.right
                else:
                    yp = other.y_at_u(p[0])
                    if p[1] > yp:
                        node = node.left
                    elif p[1] < yp:
                        node = node.right
                    else:
                        node = node.left if piece.slope_curv_at(p[0]) > \
                            other.slope_curv_at(p[0]) else node.right
        return node.trap

    @staticmethod
    def _redir_right(nb, old, upper_new, lower_new):
        # nb lies left of a wall and pointed right at `old`
        if nb is not None:
            if nb.ur is old:
                nb.ur = upper_new
            if nb.lr is old:
                nb.lr = lower_new

    @staticmethod
    def _redir_left(nb, old, upper_new, lower_new):
        # nb lies right of a wall and pointed left at `old`
        if nb is not None:
            if nb.ul is old:
                nb.ul = upper_new
            if nb.ll is old:
                nb.ll = lower_new

    def _insert(self, piece):
        p, q = piece.pL, piece.pR
        if not p < q:
            raise ValueError("zero-width piece")
        traps = [self._locate_start(p, piece)]
        while traps[-1].rightp is not None and traps[-1].rightp < q:
            t = traps[-1]
            nxt = t.lr if t.rightp[1] > piece.y_at_u(t.rightp[0]) else t.ur
            if nxt is None:
                raise RuntimeError("trapezoid walk fell off the map")
            traps.append(nxt)

        first, last = traps[0], traps[-1]
        has_left = first.leftp is None or first.leftp < p
        has_right = last.rightp is None or q < last.rightp
        left = _Trap(first.top, first.bottom, first.leftp, p) if has_left else None
        right = _Trap(last.top, last.bottom, q, last.rightp) if has_right else None

        # merged chains above and below the piece
        upper_of = []
        lower_of = []
        for i, t in enumerate(traps):
            lp = p if i == 0 else t.leftp
            rp = q if i == len(traps) - 1 else t.rightp
            if i > 0 and upper_of[-1].top is t.top:
                upper_of[-1].rightp = rp
                upper_of.append(upper_of[-1])
            else:
                upper_of.append(_Trap(t.top, piece, lp, rp))
            if i > 0 and lower_of[-1].bottom is t.bottom:
                lower_of[-1].rightp = rp
                lower_of.append(lower_of[-1])
            else:
                lower_of.append(_Trap(piece, t.bottom, lp, rp))

        # interior walls: exactly one chain breaks at each
        for i in range(len(traps) - 1):
            t, tn = traps[i], traps[i + 1]
            w = t.rightp
            if w[1] > piece.y_at_u(w[0]):
                # wall point above the piece: upper chain breaks here
                ucur, unext = upper_of[i], upper_of[i + 1]
                assert lower_of[i] is lower_of[i + 1]
                right_above = t.ur if t.ur is not tn else unext
                left_above = tn.ul if tn.ul is not t else ucur
                ucur.ur = right_above
                ucur.lr = unext
                unext.ul = left_above
                unext.ll = ucur
                if t.ur is not tn:
                    self._redir_left(t.ur, t, ucur, ucur)
                if tn.ul is not t:
                    self._redir_right(tn.ul, tn, unext, unext)
            else:
                lcur, lnext = lower_of[i], lower_of[i + 1]
                assert upper_of[i] is upper_of[i + 1]
                right_below = t.lr if t.lr is not tn else lnext
                left_below = tn.ll if tn.ll is not t else lcur
                lcur.lr = right_below
                lcur.ur = lnext
                lnext.ll = left_below
                lnext.ul = lcur
                if t.lr is not tn:
                    self._redir_left(t.lr, t, lcur, lcur)
                if tn.ll is not t:
                    self._redir_right(tn.ll, tn, lnext, lnext)

        # left end
        U0, W0 = upper_of[0], lower_of[0]
        if left is not None:
            left.ul, left.ll = first.ul, first.ll
            left.ur, left.lr = U0, W0
            U0.ul = U0.ll = left
            W0.ul = W0.ll = left
            self._redir_right(first.ul, first, left, left)
            if first.ll is not first.ul:
                self._redir_right(first.ll, first, left, left)
        else:
            U0.ul = U0.ll = first.ul
            W0.ul = W0.ll = first.ll
            # the wall here is generated by p itself
            self._redir_right(first.ul, first, U0, W0)
            if first.ll is not first.ul:
                self._redir_right(first.ll, first, U0, W0)

        # right end
        UN, WN = upper_of[-1], lower_of[-1]
        if right is not None:
            right.ur, right.lr = last.ur, last.lr
            right.ul, right.ll = UN, WN
            UN.ur = UN.lr = right
            WN.ur = WN.lr = right
            self._redir_left(last.ur, last, right, right)
            if last.lr is not last.ur:
                self._redir_left(last.lr, last, right, right)
        else:
            UN.ur = UN.lr = last.ur
            WN.ur = WN.lr = last.lr
            self._redir_left(last.ur, last, UN, WN)
            if last.lr is not last.ur:
                self._redir_left(last.lr, last, UN, WN)

        # history DAG updates (leaf nodes morph into small subtrees)
        leaf_cache = {}

        def leaf_for(trap):
            node = leaf_cache.get(id(trap))
            if node is None:
                node = _Node("leaf", trap=trap)
                leaf_cache[id(trap)] = node
            return node

        for i, t in enumerate(traps):
            y_node = _Node("y", piece=piece)
            y_node.left = leaf_for(upper_of[i])
            y_node.right = leaf_for(lower_of[i])
            sub = y_node
            if i == len(traps) - 1 and right is not None:
                xr = _Node("x", point=q)
                xr.left = sub
                xr.right = leaf_for(right)
                sub = xr
            if i == 0 and left is not None:
                xl = _Node("x", point=p)
                xl.left = leaf_for(left)
                xl.right = sub
                sub = xl
            t.node.morph(sub)

    # -- diagnostics ---------------------------------------------------------
    def all_traps(self):
        out = []
        seen = set()
        stack = [self.root]
        while stack:
            n = stack.pop()
            if id(n) in seen:
                continue
            seen.add(id(n))
            if n.kind == "leaf":
                if id(n.trap) not in {id(t) for t in out}:
                    out.append(n.trap)
            else:
                stack.append(n.left)
                stack.append(n.right)
        return out
