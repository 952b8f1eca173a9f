"""Theta functions, period matrices, canonical embeddings and the plane quartic fit.

All series are truncated to ``Gamma_m``, the elements whose reduced words have
length at most ``m``.  With a good fundamental domain the truncation error is
controlled by ``c`` (minimum distance between the Gauss points of the balls)
and ``d`` (minimum ball diameter), so ``m`` is chosen from the requested
number of digits.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .domain import reduce_point
from .padic import Padic, PrecisionError, format_digits, valuation, working_precision
from .proj import INF, apply, orbit

__all__ = [
    "PeriodMatrix",
    "CanonicalPoint",
    "boundary_points",
    "theta_m",
    "period_matrix",
    "period_matrix_m",
    "canonical_embed",
    "embedding_m",
    "solve_linear",
    "QUARTIC_MONOMIALS",
    "quartic_monomials",
    "fit_plane_quartic",
    "quartic_residual",
    "interior_sample",
    "embedded_quartic",
]


def _pad(x, p, N):
    if p is None or isinstance(x, Padic):
        return x
    return Padic.from_rational(Fraction(x), p, N)


def _letter_maps(gens, p, N):
    maps = {}
    for i, g in enumerate(gens):
        maps[i + 1] = g if p is None else g.to_padic(p, N)
        maps[-(i + 1)] = g.adjugate() if p is None else g.adjugate().to_padic(p, N)
    return maps


def boundary_points(B, p):
    """Rational points on the sphere ``B^+ \\ B`` of an affine open ball, in a fixed order.

    ``c + p^q``, ``c + 2 p^q``, ... then the same shifted by multiples of
    ``p^(q+1)``.  A half-integer ``q`` has no such points; the sequence then
    starts at ``p^ceil(q)``.
    """
    if B.complement:
        raise ValueError("boundary points are only defined for affine balls")
    q = math.ceil(B.q)
    step = Fraction(p) ** q
    c = Fraction(B.center)
    for k in range(0, 50):
        for u in range(1, p):
            yield c + u * step + k * step * p


def _first_boundary(B, p, avoid=()):
    for x in boundary_points(B, p):
        if all(x != y for y in avoid):
            return x
    raise ValueError("no admissible boundary point")


def _theta_many(gens, m, a, b, zs, p, N):
    # Theta_m(a, b; z) for each z in zs from one pass over the orbit of (a, b)
    maps = _letter_maps(gens, p, N)
    zp = [_pad(z, p, N) for z in zs]
    num = [_pad(Fraction(1), p, N) for _ in zs]
    den = [_pad(Fraction(1), p, N) for _ in zs]
    for w, (x, y) in orbit(maps, m, (_pad(a, p, N), _pad(b, p, N))):
        if x is INF or y is INF:
            raise ValueError("orbit of the base points meets INF at word %r" % (w,))
        for k, z in enumerate(zp):
            d = z - y
            if d == 0 if p is None else d.is_zero():
                raise ValueError("pole: z equals the image of b under word %r" % (w,))
            num[k] = num[k] * (z - x)
            den[k] = den[k] * d
    return [u / v for u, v in zip(num, den)]


def theta_m(a, b, z, m, gens, p, N=40):
    """``prod over Gamma_m of (z - gamma a)/(z - gamma b)`` to ``N`` relative digits.

    With ``p=None`` the product is computed exactly over the rationals.
    """
    return _theta_many(gens, m, a, b, [z], p, N)[0]


@dataclass
class PeriodMatrix:
    Q: list
    n: int
    m: int
    c: Fraction
    log_d: Fraction
    N: int
    p: int

    @property
    def g(self):
        return len(self.Q)

    def valuations(self):
        return [[x.valuation for x in row] for row in self.Q]

    def to_json(self):
        return {
            "p": self.p,
            "n": self.n,
            "m": self.m,
            "c": str(self.c),
            "log_d": str(self.log_d),
            "N": self.N,
            "Q": [[format_digits(x) for x in row] for row in self.Q],
            "val": [[str(v) for v in row] for row in self.valuations()],
        }


def period_matrix_m(n, c):
    """Smallest ``m`` with ``c m >= n``."""
    return max(0, math.ceil(Fraction(n) / Fraction(c)))


def _period_row(args):
    gens, F_balls_prime, p, i, m, N = args
    a = _first_boundary(F_balls_prime[i], p)
    ga = apply(gens[i], a)
    zs, gzs = [], []
    for j in range(len(gens)):
        z = _first_boundary(F_balls_prime[j], p, avoid=(a,))
        zs.append(z)
        gzs.append(apply(gens[j], z))
    vals = _theta_many(gens, m, a, ga, zs + gzs, p, N)
    g = len(gens)
    return [vals[j] / vals[g + j] for j in range(g)]


def period_matrix(gens, F, n, m=None, guard=None, threads=1):
    """Period matrix ``Q_ij = Theta(a, g_i a; z) / Theta(a, g_i a; g_j z)`` to ``n`` relative digits.

    ``a`` is taken on the boundary sphere of ``B'_i`` and ``z`` on that of
    ``B'_j``; ``m`` defaults to ``ceil(n / c)``.
    """
    if not F.infinity_interior():
        raise ValueError("INF must lie in the interior of the domain; change coordinates first")
    p = F.p
    c = F.c
    if m is None:
        m = period_matrix_m(n, c)
    N = working_precision(n, guard)
    g = len(gens)
    bp = [F.Bp(i) for i in range(g)]
    jobs = [(list(gens), bp, p, i, m, N) for i in range(g)]
    if threads and threads > 1 and g > 1:
        with ProcessPoolExecutor(max_workers=min(threads, g)) as ex:
            rows = list(ex.map(_period_row, jobs))
    else:
        rows = [_period_row(j) for j in jobs]
    Q = [[x.with_prec(n) for x in row] for row in rows]
    return PeriodMatrix(Q, n, m, c, F.log_d, N, p)


# -- canonical embedding ---------------------------------------------------


@dataclass
class CanonicalPoint:
    coords: list
    n: int
    m: int
    p: int

    def to_json(self):
        return {"p": self.p, "n": self.n, "m": self.m, "coords": [format_digits(x) for x in self.coords]}


def embedding_m(n, c, log_d):
    """Smallest ``m`` with ``m c + log_p(d) >= n``."""
    return max(0, math.ceil((Fraction(n) - Fraction(log_d)) / Fraction(c)))


def _absolute(x, n):
    # round to absolute precision p^n
    if x.is_zero() or x.valuation >= n:
        return Padic.zero(x.p, x.cap, absprec=n)
    return x.with_prec(n - x.valuation)


class _LogDerivative:
    """The truncated series for ``u'/u`` of one generator, with the orbit cached."""

    def __init__(self, gens, i, F, m, N, avoid=()):
        p = F.p
        self.p = p
        self.N = N
        self.a = _first_boundary(F.Bp(i), p, avoid=avoid)
        ga = apply(gens[i], self.a)
        maps = _letter_maps(gens, p, N)
        self.pairs = []
        for w, (x, y) in orbit(maps, m, (_pad(self.a, p, N), _pad(ga, p, N))):
            self.pairs.append((x, y, x - y))

    def __call__(self, z):
        zp = _pad(z, self.p, self.N)
        total = Padic.zero(self.p, self.N)
        for x, y, diff in self.pairs:
            total = total + diff / ((zp - x) * (zp - y))
        return total


def _prepare(gens, F, n, m, guard):
    if not F.infinity_interior():
        raise ValueError("INF must lie in the interior of the domain; change coordinates first")
    if m is None:
        m = embedding_m(n, F.c, F.log_d)
    N = working_precision(n, guard) + 2 * max(0, math.ceil(-F.log_d))
    return m, N


def canonical_embed(gens, F, z, n, m=None, guard=None, _series=None):
    """Image of ``z`` under the canonical map, ``(w_1 : ... : w_g)`` to absolute precision ``p^n``."""
    m, N = _prepare(gens, F, n, m, guard)
    if not isinstance(z, Padic):
        z, _ = reduce_point(F, Fraction(z))
    series = _series or [_LogDerivative(gens, i, F, m, N, avoid=(z,)) for i in range(len(gens))]
    coords = [_absolute(s(z), n) for s in series]
    if all(x.is_zero() for x in coords):
        raise PrecisionError("all coordinates vanish at the requested precision")
    return CanonicalPoint(coords, n, m, F.p)


def interior_sample(F, count, first=None):
    """Deterministic rational points of the interior of ``F``: ``first``, then 0, 1, 2, ..."""
    closures = [b.closure() for b in F.balls]
    out = []
    cands = ([Fraction(first)] if first is not None else []) + [Fraction(k) for k in range(0, 100000)]
    for z in cands:
        if z in out:
            continue
        if all(not cl.contains(z) for cl in closures):
            out.append(z)
            if len(out) == count:
                return out
    raise ValueError("interior sample exhausted")


# -- linear algebra and the quartic ------------------------------------------


def solve_linear(A, rhs, p=None, cap=None):
    """Solve ``A x = rhs`` over Q_p by Gaussian elimination with min-valuation pivoting.

    Entries may be ints, Fractions or Padics.  Extra rows of an overdetermined
    system must be consistent to the tracked precision.
    """
    rows = len(A)
    cols = len(A[0])
    if p is None:
        for row in A:
            for x in row:
                if isinstance(x, Padic):
                    p, cap = x.p, x.cap
                    break
            if p is not None:
                break
    if p is None:
        raise ValueError("p is required for rational systems")
    cap = cap or 40
    M = [[_pad(x, p, cap) for x in A[r]] + [_pad(rhs[r], p, cap)] for r in range(rows)]
    rank = 0
    where = []
    for col in range(cols):
        best = None
        for r in range(rank, rows):
            x = M[r][col]
            if x.is_zero():
                continue
            if best is None or x.valuation < M[best][col].valuation:
                best = r
        if best is None:
            raise ValueError("matrix is rank deficient at the tracked precision (rank %d)" % rank)
        M[rank], M[best] = M[best], M[rank]
        piv = M[rank][col]
        for r in range(rows):
            if r == rank:
                continue
            f = M[r][col]
            if f.is_zero():
                continue
            f = f / piv
            for k in range(col, cols + 1):
                M[r][k] = M[r][k] - f * M[rank][k]
        where.append(col)
        rank += 1
    for r in range(rank, rows):
        if not M[r][cols].is_zero():
            raise ValueError("inconsistent overdetermined system")
    x = [None] * cols
    for r, col in enumerate(where):
        x[col] = M[r][cols] / M[r][col]
    return x


QUARTIC_MONOMIALS = [
    (4, 0, 0), (3, 1, 0), (3, 0, 1), (2, 2, 0), (2, 1, 1), (2, 0, 2),
    (1, 3, 0), (1, 2, 1), (1, 1, 2), (1, 0, 3),
    (0, 4, 0), (0, 3, 1), (0, 2, 2), (0, 1, 3), (0, 0, 4),
]


def quartic_monomials(pt):
    x, y, z = pt
    return [x**i * y**j * z**k for i, j, k in QUARTIC_MONOMIALS]


def fit_plane_quartic(points):
    """Coefficients ``C_1..C_15`` (``C_1 = 1``) of the plane quartic through 14 or more points.

    Monomials are ordered ``x^4, x^3 y, x^3 z, x^2 y^2, ..., z^4``.
    """
    if len(points) < 14:
        raise ValueError("need at least 14 points")
    pts = [pt.coords if isinstance(pt, CanonicalPoint) else pt for pt in points]
    A, b = [], []
    for pt in pts:
        mons = quartic_monomials(pt)
        A.append(mons[1:])
        b.append(-mons[0])
    sol = solve_linear(A, b)
    one = Padic.from_rational(1, sol[0].p, sol[0].cap)
    return [one] + sol


def quartic_residual(C, pt):
    """Valuation of the quartic at a projective point, both taken primitive.

    Coefficients and coordinates are replaced by their rational lifts; the
    point and the coefficient vector are each scaled so their smallest
    valuation is 0, which makes the answer independent of representatives.
    """
    coords = pt.coords if isinstance(pt, CanonicalPoint) else pt
    p = next(x.p for x in list(coords) + list(C) if isinstance(x, Padic))
    lift = lambda x: Fraction(x.lift()) if isinstance(x, Padic) else Fraction(x)
    xs = [lift(x) for x in coords]
    v = min(valuation(x, p) for x in xs if x != 0)
    xs = [x / Fraction(p) ** v for x in xs]
    cs = [lift(c) for c in C]
    vc = min(valuation(c, p) for c in cs if c != 0)
    total = sum(c * mon for c, mon in zip(cs, quartic_monomials(xs)))
    return valuation(total, p) - vc


def embedded_quartic(gens, F, n, zs, m=None, guard=None):
    """Fit the quartic through the canonical images of ``zs``.

    The fit runs on the untruncated working-precision series values and the
    coefficients are then rounded to absolute precision ``p^n``.  Errors in
    the truncated series are strongly correlated between points, so tracked
    precision through the elimination is far more pessimistic than the
    actual agreement between successive ``m`` (see the test suite).
    Returns ``(coefficients, canonical points, raw points)``.
    """
    m, N = _prepare(gens, F, n, m, guard)
    series = [_LogDerivative(gens, i, F, m, N, avoid=tuple(zs)) for i in range(len(gens))]
    raw = []
    for z in zs:
        zr = z if isinstance(z, Padic) else reduce_point(F, Fraction(z))[0]
        raw.append([s(zr) for s in series])
    C = fit_plane_quartic(raw)
    pts = [CanonicalPoint([_absolute(x, n) for x in r], n, m, F.p) for r in raw]
    return [C[0]] + [_absolute(c, n) for c in C[1:]], pts, raw
