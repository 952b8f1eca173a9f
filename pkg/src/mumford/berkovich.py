"""Balls in P^1(Q_p), type-2 points of the Berkovich line, and finite subtrees.

A type-2 point is the closed ball ``{x : val(x - c) >= q}``, written
``zeta(c, q)``; its radius is ``p**-q``.  Radius exponents are rationals so
that midpoints of odd-length edges are representable.  The path metric is
``d(zeta(c1,q1), zeta(c2,q2)) = (q1 - Q) + (q2 - Q)`` where
``Q = min(q1, q2, val(c1 - c2))`` is the exponent of the meet.
"""

import math
from fractions import Fraction

from .padic import Padic, PrecisionError, truncate, valuation
from .proj import INF, is_zero

__all__ = [
    "Ball",
    "BerkPoint",
    "MetricTree",
    "meet",
    "distance",
    "span_tree",
    "retract",
    "gauss_image",
    "ball_image",
    "point_in_ball",
    "berk_in_ball",
    "path_point",
    "closed_disjoint",
    "tree_root",
]


def _frac(x):
    if isinstance(x, Padic):
        return x.lift()
    return Fraction(x)


def _val(x, p):
    return valuation(x, p)


def _ceil(q):
    return math.ceil(Fraction(q))


class BerkPoint:
    """Type-2 (or half-integer type-3) point ``zeta(center, q)`` with a canonical key."""

    __slots__ = ("p", "center", "q", "key")

    def __init__(self, center, q, p):
        q = Fraction(q)
        if isinstance(center, Padic):
            center = truncate(center, p, _ceil(q))
        else:
            center = truncate(Fraction(center), p, _ceil(q))
        self.p = p
        self.center = center
        self.q = q
        self.key = (q, center)

    @property
    def radius(self):
        return Fraction(self.p) ** (-self.q) if self.q.denominator == 1 else None

    def __eq__(self, o):
        return isinstance(o, BerkPoint) and self.key == o.key

    def __hash__(self):
        return hash(self.key)

    def __lt__(self, o):
        return self.key < o.key

    def __repr__(self):
        return "zeta(%s, %s)" % (self.center, self.q)

    def contains_point(self, x):
        """Whether the closed ball of this point contains the type-1 point ``x``."""
        if x is INF:
            return False
        return _val_ge(x - self.center, self.q, self.p)

    def to_json(self):
        return {"center": str(self.center), "radius_exp": str(self.q)}


def _val_ge(x, q, p):
    if isinstance(x, Padic) and x.unit == 0 and x.prec is not None:
        if x.val >= q:
            return True
        raise PrecisionError("point too close to a ball boundary for the carried precision")
    return valuation(x, p) >= q


def _val_gt(x, q, p):
    if isinstance(x, Padic) and x.unit == 0 and x.prec is not None:
        if x.val > q:
            return True
        raise PrecisionError("point too close to a ball boundary for the carried precision")
    return valuation(x, p) > q


def meet(P1, P2):
    """The smallest closed ball containing both."""
    p = P1.p
    v = _val(P1.center - P2.center, p)
    Q = min(P1.q, P2.q, v)
    return BerkPoint(P1.center, Q, p)


def distance(P1, P2):
    p = P1.p
    v = _val(P1.center - P2.center, p)
    Q = min(P1.q, P2.q, v)
    return (P1.q - Q) + (P2.q - Q)


def path_point(P1, P2, t):
    """The point at distance ``t`` from ``P1`` on the path to ``P2``."""
    p = P1.p
    v = _val(P1.center - P2.center, p)
    Q = min(P1.q, P2.q, v)
    up = P1.q - Q
    t = Fraction(t)
    if t <= up:
        return BerkPoint(P1.center, P1.q - t, p)
    return BerkPoint(P2.center, Q + (t - up), p)


class Ball:
    """An open or closed ball of P^1.

    ``complement=False``: the affine ball ``{x : val(x-c) > q}`` (open) or
    ``{x : val(x-c) >= q}`` (closed).  ``complement=True``: the complement in
    P^1 of the affine ball with the given ``closed`` flag; it contains INF.
    """

    __slots__ = ("p", "center", "q", "closed", "complement")

    def __init__(self, center, q, p, closed=False, complement=False):
        q = Fraction(q)
        k = math.floor(q) + 1 if not closed else _ceil(q)
        self.center = truncate(center, p, k)
        self.q = q
        self.p = p
        self.closed = bool(closed)
        self.complement = bool(complement)

    @property
    def is_open(self):
        return self.closed == self.complement

    def closure(self):
        """The closed ball sharing this ball's Gauss point."""
        if self.complement:
            return Ball(self.center, self.q, self.p, closed=False, complement=True)
        return Ball(self.center, self.q, self.p, closed=True)

    def interior(self):
        if self.complement:
            return Ball(self.center, self.q, self.p, closed=True, complement=True)
        return Ball(self.center, self.q, self.p, closed=False)

    def complement_ball(self):
        return Ball(self.center, self.q, self.p, closed=self.closed, complement=not self.complement)

    def gauss_point(self):
        return BerkPoint(self.center, self.q, self.p)

    def _affine_contains(self, x):
        if x is INF:
            return False
        d = x - self.center
        return _val_ge(d, self.q, self.p) if self.closed else _val_gt(d, self.q, self.p)

    def contains(self, x):
        inside = self._affine_contains(x)
        return (not inside) if self.complement else inside

    __contains__ = contains

    def _norm(self):
        k = math.floor(self.q) + 1 if not self.closed else _ceil(self.q)
        return (self.complement, self.closed, self.q, truncate(self.center, self.p, k))

    def __eq__(self, o):
        return isinstance(o, Ball) and self._norm() == o._norm()

    def __hash__(self):
        return hash(self._norm())

    @property
    def diameter_exp(self):
        """``q`` with diameter ``p**-q`` (affine balls)."""
        return self.q

    def __repr__(self):
        s = "B%s(%s, %s^-%s)" % ("+" if self.closed else "", self.center, self.p, self.q)
        return ("P1\\" + s) if self.complement else s

    def to_json(self):
        return {
            "center": str(self.center),
            "radius_exp": str(self.q),
            "closed": self.closed,
            "complement": self.complement,
        }

    @classmethod
    def from_json(cls, obj, p):
        return cls(Fraction(obj["center"]), Fraction(obj["radius_exp"]), p,
                   closed=obj.get("closed", False), complement=obj.get("complement", False))


def closed_disjoint(B1, B2):
    """Disjointness of two balls (compared as balls over C_p)."""
    if B1.complement and B2.complement:
        return False
    if B1.complement:
        B1, B2 = B2, B1
    if B2.complement:
        hole = Ball(B2.center, B2.q, B2.p, closed=B2.closed)
        return _affine_subset(B1, hole)
    return not (B1._affine_contains(B2.center) or B2._affine_contains(B1.center))


def _affine_subset(A, H):
    """Affine ball ``A`` contained in affine ball ``H``."""
    if not H._affine_contains(A.center):
        return False
    if A.q != H.q:
        return A.q > H.q
    return H.closed or not A.closed


def point_in_ball(x, B):
    return B.contains(x)


def berk_in_ball(P, B):
    """Whether the type-2 point ``P`` lies in the analytic ball attached to ``B``."""
    p = P.p
    v = _val(P.center - B.center, p)
    if B.closed:
        inside = P.q >= B.q and v >= B.q
    else:
        inside = P.q > B.q and v > B.q
    return (not inside) if B.complement else inside


def gauss_image(m, P):
    """Image of the type-2 point ``zeta(c, q)`` under the Mobius map ``m``."""
    p = P.p
    c, q = P.center, P.q
    al, be, ga, de = m.a, m.b, m.c, m.d
    D = m.det()
    vD = _val(D, p)
    if is_zero(ga):
        return BerkPoint(apply_affine(m, c), q + vD - 2 * _val(de, p), p)
    den = ga * c + de
    # pole -de/ga inside the closed ball <=> val(c - pole) >= q
    if _val(den, p) - _val(ga, p) >= q:
        return BerkPoint(_frac(al) / _frac(ga), vD - 2 * _val(ga, p) - q, p)
    return BerkPoint(_frac(al * c + be) / _frac(den), q + vD - 2 * _val(den, p), p)


def apply_affine(m, c):
    return _frac(m.a * c + m.b) / _frac(m.d)


def _affine_image(m, A):
    """Image of an affine ball: an affine ball or a complement ball."""
    p = A.p
    c, q = A.center, A.q
    al, be, ga, de = m.a, m.b, m.c, m.d
    vD = _val(m.det(), p)
    if is_zero(ga):
        return Ball(apply_affine(m, c), q + vD - 2 * _val(de, p), p, closed=A.closed)
    den = ga * c + de
    vden = _val(den, p) if not is_zero(den) else math.inf
    vpole = vden - _val(ga, p)
    pole_in = vpole >= q if A.closed else vpole > q
    if not pole_in:
        return Ball(_frac(al * c + be) / _frac(den), q + vD - 2 * vden, p, closed=A.closed)
    q2 = vD - 2 * _val(ga, p) - q
    # closed ball -> complement of an open ball; open ball -> complement of a closed ball
    return Ball(_frac(al) / _frac(ga), q2, p, closed=not A.closed, complement=True)


def ball_image(m, B):
    """Exact image of a ball under a Mobius map."""
    if not B.complement:
        return _affine_image(m, B)
    inner = _affine_image(m, Ball(B.center, B.q, B.p, closed=B.closed))
    return inner.complement_ball()


# -- trees ---------------------------------------------------------------


class MetricTree:
    """A finite metric tree whose vertices are type-2 points."""

    def __init__(self, p):
        self.p = p
        self.vertices = {}
        self.adj = {}
        self.leaves = set()

    def add_vertex(self, P):
        if P.key not in self.vertices:
            self.vertices[P.key] = P
            self.adj[P.key] = {}
        return P.key

    def add_edge(self, u, v):
        ku = self.add_vertex(u)
        kv = self.add_vertex(v)
        L = distance(u, v)
        self.adj[ku][kv] = L
        self.adj[kv][ku] = L

    def remove_edge(self, ku, kv):
        del self.adj[ku][kv]
        del self.adj[kv][ku]

    def neighbors(self, key):
        return sorted(self.adj[key])

    def degree(self, key):
        return len(self.adj[key])

    def edges(self):
        out = []
        for u in sorted(self.adj):
            for v in sorted(self.adj[u]):
                if u < v:
                    out.append((u, v, self.adj[u][v]))
        return out

    def __contains__(self, key):
        return key in self.vertices

    def __len__(self):
        return len(self.vertices)

    def suppress_degree_two(self, keep=()):
        """Merge edges through degree-2 vertices that are not marked as kept."""
        keep = set(keep)
        changed = True
        while changed:
            changed = False
            for k in sorted(self.adj):
                if k in keep or k in self.leaves:
                    continue
                nb = list(self.adj[k])
                if len(nb) == 2:
                    u, v = nb
                    del self.adj[u][k]
                    del self.adj[v][k]
                    del self.adj[k]
                    del self.vertices[k]
                    L = distance(self.vertices[u], self.vertices[v])
                    self.adj[u][v] = L
                    self.adj[v][u] = L
                    changed = True
        return self

    def path(self, ku, kv):
        """Vertex keys along the unique path."""
        prev = {ku: None}
        queue = [ku]
        for x in queue:
            if x == kv:
                break
            for y in self.adj[x]:
                if y not in prev:
                    prev[y] = x
                    queue.append(y)
        if kv not in prev:
            raise ValueError("vertices are not connected")
        out = [kv]
        while out[-1] != ku:
            out.append(prev[out[-1]])
        return out[::-1]

    def to_json(self):
        keys = sorted(self.vertices)
        index = {k: i for i, k in enumerate(keys)}
        return {
            "vertices": [self.vertices[k].to_json() for k in keys],
            "edges": [{"u": index[u], "v": index[v], "length": str(L)} for u, v, L in self.edges()],
        }


def span_tree(points, p, depth=None):
    """The subtree spanned by type-2 points and/or type-1 points.

    Type-1 points (scalars) are realized as the closed balls of exponent
    ``depth``.  Vertices are the inputs and the branch points; degree-2
    branch points do not occur except possibly at the top, where the vertex
    is kept only if it is an input.
    """
    berk = []
    for x in points:
        if isinstance(x, BerkPoint):
            berk.append(x)
        else:
            if x is INF:
                raise ValueError("INF cannot be a leaf of a spanned tree")
            if depth is None:
                raise ValueError("type-1 points need a finite depth")
            d = depth
            if isinstance(x, Padic) and x.absprec < d:
                d = math.floor(x.absprec)
            B = BerkPoint(x, d, p)
            berk.append(B)
    uniq = {}
    for B in berk:
        uniq[B.key] = B
    T = MetricTree(p)
    inputs = set(uniq)
    pts = [uniq[k] for k in sorted(uniq)]
    if not pts:
        return T
    T.leaves = set()
    root = _build(T, pts, p)
    T.add_vertex(root)
    # the top vertex is a branch point or an input; drop it if it is a pass-through
    T.suppress_degree_two(keep=inputs)
    for k in inputs:
        if T.degree(k) <= 1:
            T.leaves.add(k)
    T.inputs = inputs
    return T


def _build(T, pts, p):
    """Insert the subtree over ``pts`` (all sharing a common closed ball) and return its top vertex."""
    c0 = pts[0].center
    Q = min(P.q for P in pts)
    for P in pts[1:]:
        v = valuation(P.center - c0, p)
        if v < Q:
            Q = v
    top = BerkPoint(c0, Q, p)
    T.add_vertex(top)
    k = math.floor(Q) + 1
    groups = {}
    for P in pts:
        if P.q == Q and P.key == top.key:
            continue
        r = truncate(P.center, p, k)
        groups.setdefault(r, []).append(P)
    for r in sorted(groups):
        child = _build(T, groups[r], p)
        T.add_edge(top, child)
    return top


def tree_root(T):
    """The point of ``T`` closest to INF: the meet of all vertices."""
    verts = [T.vertices[k] for k in sorted(T.vertices)]
    r = verts[0]
    for P in verts[1:]:
        r = meet(r, P)
    return r


def retract(z, T):
    """The point of ``T`` nearest to the type-1 point ``z`` (INF allowed)."""
    p = T.p
    root = tree_root(T)
    if z is INF:
        return root
    best = None
    for k in sorted(T.vertices):
        P = T.vertices[k]
        v = valuation(z - P.center, p) if not _is_close(z, P.center) else math.inf
        t = min(P.q, v)
        if best is None or t > best[0]:
            best = (t, P)
    t, P = best
    if t <= root.q:
        return root
    return BerkPoint(P.center, t, p)


def _is_close(x, y):
    try:
        return is_zero(x - y)
    except PrecisionError:
        return True
