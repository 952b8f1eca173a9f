"""2x2 matrices acting on P^1(Q_p), hyperbolicity, eigen-data and free-group words.

Points of P^1 are plain scalars (``int``, ``Fraction`` or ``Padic``) together
with the sentinel :data:`INF`.  Words are tuples of signed generator indices:
``1`` is the first generator, ``-1`` its inverse; the tuple ``(h1, ..., hk)``
stands for the product ``h1 h2 ... hk``.
"""

import math
from fractions import Fraction

from .padic import Padic, PrecisionError, valuation

__all__ = [
    "INF",
    "Mat2",
    "apply",
    "is_zero",
    "is_hyperbolic",
    "eigen_data",
    "enumerate_words",
    "count_words",
    "word_matrix",
    "orbit",
    "reduce_word",
    "invert_word",
    "parse_point",
    "point_to_str",
]


class _Infinity:
    __slots__ = ()

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return "INF"


INF = _Infinity()


def is_zero(x):
    """Exact zero test; raises on a p-adic zero known only to finite precision."""
    if isinstance(x, Padic):
        if x.unit != 0:
            return False
        if x.prec is None:
            return True
        raise PrecisionError("cannot decide whether a value vanishes at absolute precision %d" % x.val)
    return x == 0


def _div(x, y):
    if isinstance(x, int) and isinstance(y, int):
        return Fraction(x, y)
    return x / y


class Mat2:
    """An invertible 2x2 matrix, considered up to scalars when acting on P^1."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        self.a = a
        self.b = b
        self.c = c
        self.d = d

    @classmethod
    def from_rows(cls, rows):
        """Build from ``[[a, b], [c, d]]`` with entries as ints, Fractions or rational strings."""
        (a, b), (c, d) = rows
        m = cls(*(Fraction(x) for x in (a, b, c, d)))
        if m.det() == 0:
            raise ValueError("singular matrix")
        return m

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    def rows(self):
        return [[self.a, self.b], [self.c, self.d]]

    def det(self):
        return self.a * self.d - self.b * self.c

    def trace(self):
        return self.a + self.d

    def __mul__(self, o):
        return Mat2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def adjugate(self):
        """The inverse up to the scalar ``det``; equal to the inverse in PGL(2)."""
        return Mat2(self.d, -self.b, -self.c, self.a)

    def inverse(self):
        D = self.det()
        return Mat2(_div(self.d, D), _div(-self.b, D), _div(-self.c, D), _div(self.a, D))

    def __pow__(self, n):
        if n < 0:
            return self.adjugate() ** (-n)
        r = Mat2.identity()
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def __call__(self, z):
        return apply(self, z)

    def primitive(self):
        """Scale a rational matrix to coprime integer entries (a PGL normal form up to sign)."""
        es = [Fraction(x) for x in (self.a, self.b, self.c, self.d)]
        den = 1
        for e in es:
            den = den * e.denominator // math.gcd(den, e.denominator)
        ints = [int(e * den) for e in es]
        g = 0
        for x in ints:
            g = math.gcd(g, x)
        ints = [x // g for x in ints]
        for x in ints:
            if x:
                if x < 0:
                    ints = [-y for y in ints]
                break
        return Mat2(*ints)

    def projectively_equal(self, o):
        """Equality in PGL(2) for exact entries."""
        x = (self.a, self.b, self.c, self.d)
        y = (o.a, o.b, o.c, o.d)
        for i in range(4):
            for j in range(i + 1, 4):
                if x[i] * y[j] != x[j] * y[i]:
                    return False
        return True

    def is_scalar(self):
        return self.b == 0 and self.c == 0 and self.a == self.d

    def to_padic(self, p, N):
        f = lambda x: x if isinstance(x, Padic) else Padic.from_rational(x, p, N)
        return Mat2(f(self.a), f(self.b), f(self.c), f(self.d))

    def to_json(self):
        return [[str(Fraction(self.a)), str(Fraction(self.b))], [str(Fraction(self.c)), str(Fraction(self.d))]]

    def __eq__(self, o):
        if not isinstance(o, Mat2):
            return NotImplemented
        return (self.a, self.b, self.c, self.d) == (o.a, o.b, o.c, o.d)

    __hash__ = None

    def __repr__(self):
        return "Mat2([[%s, %s], [%s, %s]])" % (self.a, self.b, self.c, self.d)


def apply(m, z):
    """The Mobius action ``z -> (az+b)/(cz+d)`` on P^1."""
    if z is INF:
        if is_zero(m.c):
            return INF
        return _div(m.a, m.c)
    den = m.c * z + m.d
    if is_zero(den):
        return INF
    return _div(m.a * z + m.b, den)


def is_hyperbolic(m, p):
    """Newton-polygon test: the eigenvalues have distinct valuations iff 2 val(tr) < val(det)."""
    t = m.trace()
    D = m.det()
    try:
        vt = valuation(t, p)
    except PrecisionError:
        raise PrecisionError("trace vanishes at the carried precision; supply more input digits")
    return 2 * vt < valuation(D, p)


def _rational_sqrt(q):
    q = Fraction(q)
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _is_exact(x):
    return isinstance(x, (int, Fraction)) or (isinstance(x, Padic) and x.exact)


def eigen_data(m, p, N=40):
    """Eigenvalues and fixed points of a hyperbolic matrix.

    Returns ``(lam1, lam2, f1, f2)`` with ``val(lam1) < val(lam2)``; ``f1`` is
    the attracting fixed point (iterating ``m`` pushes points towards it) and
    ``f2`` the repelling one.  Exact rationals are returned whenever the
    discriminant is a rational square, otherwise p-adics with ``N`` digits.
    """
    if not is_hyperbolic(m, p):
        raise ValueError("matrix is not hyperbolic")
    t = m.trace()
    D = m.det()
    lam1 = lam2 = None
    if all(_is_exact(x) for x in (m.a, m.b, m.c, m.d)):
        tq = Fraction(t.lift()) if isinstance(t, Padic) else Fraction(t)
        Dq = Fraction(D.lift()) if isinstance(D, Padic) else Fraction(D)
        r = _rational_sqrt(tq * tq - 4 * Dq)
        if r is not None:
            x, y = (tq + r) / 2, (tq - r) / 2
            lam1, lam2 = (x, y) if valuation(x, p) < valuation(y, p) else (y, x)
    if lam1 is None:
        # lam1 is the attracting fixed point of lam -> t - D/lam
        tp = t if isinstance(t, Padic) else Padic.from_rational(t, p, N)
        Dp = D if isinstance(D, Padic) else Padic.from_rational(D, p, N)
        tp = tp.with_prec(N) if not tp.exact else Padic.from_rational(tp.lift(), p, N)
        lam = tp
        gain = valuation(Dp, p) - 2 * valuation(tp, p)
        for _ in range(N // max(gain, 1) + 2):
            lam = tp - Dp / lam
        # tracked precision ignores the iteration error, which is below p^-N here
        lam1 = lam.with_prec(N)
        lam2 = Dp / lam1
    f1 = _fixed_point(m, lam1)
    f2 = _fixed_point(m, lam2)
    return lam1, lam2, f1, f2


def _fixed_point(m, lam):
    # the eigenvector (z : 1) for lam
    if not is_zero(m.c):
        return _div(lam - m.d, m.c)
    if not is_zero(m.b):
        dl = lam - m.a
        if is_zero(dl):
            return INF
        return _div(m.b, dl)
    # diagonal
    return INF if _same(lam, m.a) else 0


def _same(x, y):
    try:
        return is_zero(x - y)
    except PrecisionError:
        return True


# -- words ---------------------------------------------------------------


def _letters(g):
    out = []
    for i in range(1, g + 1):
        out.append(i)
        out.append(-i)
    return out


def count_words(g, m):
    """Number of reduced words of length at most ``m`` in a free group of rank ``g``."""
    if g == 0:
        return 1
    return 1 + sum(2 * g * (2 * g - 1) ** (k - 1) for k in range(1, m + 1))


def enumerate_words(g, m):
    """All reduced words of length <= m, each once, in depth-first order."""
    yield ()
    letters = _letters(g)

    def rec(w):
        if len(w) == m:
            return
        for h in letters:
            if w and h == -w[-1]:
                continue
            nw = w + (h,)
            yield nw
            yield from rec(nw)

    yield from rec(())


def reduce_word(w):
    out = []
    for h in w:
        if out and out[-1] == -h:
            out.pop()
        else:
            out.append(h)
    return tuple(out)


def invert_word(w):
    return tuple(-h for h in reversed(w))


def word_matrix(gens, w, inverses=None):
    """The product ``h1 h2 ... hk`` as a matrix (inverses taken as adjugates)."""
    if inverses is None:
        inverses = [g.adjugate() for g in gens]
    m = Mat2.identity()
    for h in w:
        m = m * (gens[h - 1] if h > 0 else inverses[-h - 1])
    return m


def orbit(letter_maps, m, points, inverse=lambda h: -h):
    """Images of ``points`` under every reduced word of length <= m.

    ``letter_maps`` maps each letter to a matrix.  Words grow on the left, so
    each word costs one Mobius application per point.  Yields
    ``(word, images)``; ``inverse`` gives the letter that may not precede a
    given letter (``-h`` for free groups, ``h`` for involutions).
    """
    points = tuple(points)
    yield (), points
    if m == 0:
        return
    letters = list(letter_maps)
    stack = []
    for h in reversed(letters):
        stack.append(((h,), letter_maps[h]))
    # depth-first, images computed on demand from the parent
    cache = {(): points}
    while stack:
        w, M = stack.pop()
        parent = cache[w[1:]]
        imgs = tuple(apply(M, z) for z in parent)
        yield w, imgs
        if len(w) < m:
            cache[w] = imgs
            first = w[0]
            for h in reversed(letters):
                if h == inverse(first):
                    continue
                stack.append(((h,) + w, letter_maps[h]))
        # parents are only needed while their subtree is on the stack
    return


def parse_point(s):
    """Parse a rational string or one of ``inf``, ``oo``, ``∞``."""
    if s is INF:
        return INF
    if isinstance(s, str) and s.strip().lower() in ("inf", "oo", "∞", "infinity"):
        return INF
    return Fraction(s)


def point_to_str(z):
    if z is INF:
        return "inf"
    return str(Fraction(z))
