"""Involutions, Whittaker groups and hyperelliptic branch points.

A Whittaker group is the index-2 subgroup ``W = <s_i s_0>`` of a free product
of involutions ``s_0, ..., s_g``.  The theta product ``G = Theta(a, b; .)``
over the whole free product is invariant, and its values at the fixed points
of the ``s_i`` are the branch points of ``Omega/W -> P^1``.
:func:`ramification_to_whittaker` runs the digit-by-digit inverse search.
"""

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .berkovich import Ball, closed_disjoint
from .padic import Padic, format_digits, valuation, working_precision
from .proj import INF, Mat2, apply, is_hyperbolic, orbit, point_to_str

__all__ = [
    "NotValid",
    "SearchExhausted",
    "Involution",
    "WhittakerPresentation",
    "RamificationData",
    "involution_from_fixed_points",
    "whittaker_group",
    "count_alternating_words",
    "extended_theta",
    "find_theta_parameters",
    "ramification_points",
    "kadziela_normalization",
    "normalize_presentation",
    "ramification_to_whittaker",
]


class NotValid(ValueError):
    """The two smallest ramification values have equal absolute value."""


class SearchExhausted(ValueError):
    """No residue vector matches at digit ``t``."""

    def __init__(self, t):
        super().__init__("digit search exhausted at t=%d" % t)
        self.t = t


@dataclass
class Involution:
    a: object
    b: object
    matrix: Mat2

    def to_json(self):
        return [point_to_str(self.a), point_to_str(self.b)]


def involution_from_fixed_points(a, b):
    """The order-2 element of PGL(2) fixing ``a`` and ``b``.

    ``M diag(1, -1) M^-1`` with ``M = [[a, b], [1, 1]]``; one fixed point may be INF.
    """
    if a is INF and b is INF or (a is not INF and b is not INF and Fraction(a) == Fraction(b)):
        raise ValueError("fixed points must be distinct")
    if a is INF:
        a, b = b, a
    a = Fraction(a)
    if b is INF:
        # z -> 2a - z
        return Involution(a, INF, Mat2(Fraction(-1), 2 * a, Fraction(0), Fraction(1)))
    b = Fraction(b)
    d = a - b
    return Involution(a, b, Mat2((a + b) / d, -2 * a * b / d, 2 / d, -(a + b) / d))


def _pair_ball(a, b, p):
    # smallest open ball containing a and b: val(x - a) > val(a - b) - 1
    return Ball(a, valuation(a - b, p) - 1, p)


@dataclass
class WhittakerPresentation:
    involutions: list
    p: int

    @property
    def g(self):
        return len(self.involutions) - 1

    @property
    def generators(self):
        """Free generators ``s_i s_0`` of ``W``."""
        s0 = self.involutions[0].matrix
        return [s.matrix * s0 for s in self.involutions[1:]]

    def balls(self):
        return [_pair_ball(s.a, s.b, self.p) for s in self.involutions]

    def fixed_points(self):
        out = []
        for s in self.involutions:
            out += [s.a, s.b]
        return out

    def to_json(self):
        return {
            "p": self.p,
            "fixed_points": [s.to_json() for s in self.involutions],
            "generators": [m.to_json() for m in self.generators],
        }


def whittaker_group(pairs, p):
    """Build the involutions from fixed-point pairs and check the free product conditions."""
    invs = [involution_from_fixed_points(a, b) for a, b in pairs]
    W = WhittakerPresentation(invs, p)
    # a pair containing INF has no affine ball; the remaining pairs are checked
    finite = [k for k, s in enumerate(invs) if s.b is not INF]
    closures = {k: _pair_ball(invs[k].a, invs[k].b, p).closure() for k in finite}
    for i, j in itertools.combinations(finite, 2):
        if not closed_disjoint(closures[i], closures[j]):
            raise ValueError("free product condition violated: balls %d and %d meet" % (i, j))
    for k, m in enumerate(W.generators):
        if not is_hyperbolic(m, p):
            raise ValueError("generator %d of W is not hyperbolic" % (k + 1))
    return W


def count_alternating_words(letters, m):
    """Words of length <= m over ``letters`` involutions with no letter repeated adjacently."""
    if letters <= 1:
        return 1 + (letters if m >= 1 else 0)
    return 1 + letters * sum((letters - 1) ** (k - 1) for k in range(1, m + 1))


def _maps(invs, p=None, N=None):
    out = {}
    for k, s in enumerate(invs):
        M = s.matrix if isinstance(s, Involution) else s
        out[k] = M.to_padic(p, N) if p is not None else M
    return out


def _theta_parts(invs, a, b, zs, m, p=None, N=None):
    """Per ``z``: (product of nonzero factors, order of vanishing) of Theta_m(a, b; z)."""
    maps = _maps(invs, p, N)
    conv = (lambda x: x if isinstance(x, Padic) or x is INF else Padic.from_rational(x, p, N)) if p else (
        lambda x: x if x is INF else Fraction(x))
    zc = [conv(z) for z in zs]
    prod = [Fraction(1) if p is None else Padic.from_rational(1, p, N) for _ in zs]
    order = [0] * len(zs)
    for w, (x, y) in orbit(maps, m, (conv(a), conv(b)), inverse=lambda h: h):
        if x is INF or y is INF:
            raise ValueError("INF lies in the orbit of the theta parameters (word %r)" % (w,))
        for k, z in enumerate(zc):
            if z is INF:
                continue
            num = z - x
            den = z - y
            if _is_zero(num):
                order[k] += 1
                num = 1
            if _is_zero(den):
                order[k] -= 1
                den = 1
            prod[k] = prod[k] * num / den
    return prod, order


def _is_zero(x):
    return x.is_zero() if isinstance(x, Padic) else x == 0


def extended_theta(invs, a, b, z, m, p=None, N=None):
    """``prod (z - g a)/(z - g b)`` over alternating words ``g`` of length <= m.

    Exact rational arithmetic when ``p`` is None, otherwise ``N`` p-adic digits.
    Returns 0 or INF when ``z`` lies in the orbit of ``a`` or ``b``; ``z = INF`` gives 1.
    """
    if z is INF:
        return Fraction(1)
    (v,), (o,) = _theta_parts(invs, a, b, [z], m, p, N)
    if o > 0:
        return Fraction(0) if p is None else Padic.zero(p, N)
    if o < 0:
        return INF
    return v


def _orbit_points(invs, x, m):
    return {y for _, (y,) in orbit(_maps(invs), m, (x,), inverse=lambda h: h)}


def find_theta_parameters(invs, p, m=3, N=20):
    """First admissible ``(a, b)`` in a deterministic sweep.

    ``a, b`` avoid INF and each other's orbits at word length <= m, and
    ``|G(INF) - G(s_0 INF)| <= p^-1`` (``G(INF) = 1``).
    """
    fixed = set()
    for s in invs:
        fixed |= {s.a, s.b}
    s_ref = next((s.matrix for s in invs if s.b is not INF), invs[0].matrix)
    w = apply(s_ref, INF)
    cands = [Fraction(k) for k in range(-20, 21)] + [Fraction(k, p) for k in range(1, 3 * p)]
    cands = [c for c in cands if c not in fixed]
    for a, b in itertools.permutations(cands, 2):
        oa = _orbit_points(invs, a, m)
        if INF in oa or b in oa:
            continue
        ob = _orbit_points(invs, b, m)
        if INF in ob:
            continue
        G = extended_theta(invs, a, b, w, m, p, N)
        if G is INF:
            continue
        diff = (1 - G) if isinstance(G, Padic) else Padic.from_rational(1 - Fraction(G), p, N)
        if diff.is_zero() or diff.valuation >= 1:
            return a, b
    raise ValueError("no admissible theta parameters found")


@dataclass
class RamificationData:
    values: list  # one per fixed point, in presentation order
    m: int
    n: int
    p: int
    a: object = None
    b: object = None

    def to_json(self):
        def enc(x):
            if x is INF:
                return "inf"
            if isinstance(x, Padic):
                return format_digits(x) if not (x.is_zero() and x.prec is not None) else "(…0)_%d" % self.p
            return str(x)

        return {
            "p": self.p,
            "n": self.n,
            "m": self.m,
            "theta_parameters": [point_to_str(self.a), point_to_str(self.b)],
            "values": [enc(x) for x in self.values],
        }


def _agree(u, v, n):
    if u is INF or v is INF:
        return u is v
    if isinstance(u, Fraction) or isinstance(v, Fraction):
        return u == v
    d = u - v
    if u.is_zero():
        return v.is_zero() or v.valuation >= n
    return d.is_zero() or d.valuation - u.valuation >= n


def ramification_points(W, n, a=None, b=None, m_start=2, m_max=16, guard=None):
    """Branch values ``G(a_i), G(b_i)`` at ``n`` relative digits.

    ``m`` grows until two consecutive truncations agree on every value.
    """
    p = W.p
    invs = W.involutions
    if a is None or b is None:
        a, b = find_theta_parameters(invs, p)
    N = working_precision(n, guard)
    pts = W.fixed_points()
    prev = None
    for m in range(m_start, m_max + 1):
        vals = [extended_theta(invs, a, b, z, m, p, N) for z in pts]
        if prev is not None and all(_agree(u, v, n) for u, v in zip(prev, vals)):
            out = [v.with_prec(n) if isinstance(v, Padic) else v for v in vals]
            return RamificationData(out, m, n, p, a, b)
        prev = vals
    raise ValueError("branch values did not stabilize by m=%d" % m_max)


# -- normalization -----------------------------------------------------------


def _mobius_to(a0, u, w):
    # z -> k (z - a0)/(z - w) with u -> 1
    k = (u - w) / (u - a0)
    return Mat2(k, -k * a0, Fraction(1), -w)


def kadziela_normalization(pairs, p):
    """A Mobius map putting fixed-point pairs into the form
    ``{0, b_0}, {a_1, b_1}, ..., {1, INF}`` with ``0 < |b_0| < |a_1| <= ... <= |b_{g-1}| < 1``.

    Returns ``(h, new_pairs)``; the first matching choice in a fixed order is used.
    """
    order = list(range(len(pairs)))
    for i in order:
        for a0, b0 in (pairs[i], pairs[i][::-1]):
            for j in reversed(order):
                if j == i:
                    continue
                for u, w in (pairs[j], pairs[j][::-1]):
                    if INF in (a0, u) or a0 == u:
                        continue
                    if w is INF:
                        h = Mat2((Fraction(1) / (u - a0)), -a0 / (u - a0), Fraction(0), Fraction(1))
                    else:
                        h = _mobius_to(a0, u, w)
                    hb0 = apply(h, b0)
                    rest = [k for k in order if k not in (i, j)]
                    mids = []
                    for k in rest:
                        mids.append(tuple(apply(h, x) for x in pairs[k]))
                    if hb0 is INF or hb0 == 0 or any(x is INF or x == 0 for pr in mids for x in pr):
                        continue
                    absv = lambda x: -valuation(x, p)
                    vals = sorted(absv(x) for pr in mids for x in pr)
                    if not (absv(hb0) < (vals[0] if vals else 0)) or (vals and vals[-1] >= 0):
                        continue
                    if absv(hb0) >= 0:
                        continue
                    new = [(Fraction(0), hb0)] + mids + [(Fraction(1), INF)]
                    return h.primitive(), new
    raise ValueError("no normalization satisfies the absolute value chain")


def normalize_presentation(W):
    """The presentation conjugated into normalized position, with ``G = Theta(0, 1; .)``."""
    h, pairs = kadziela_normalization([(s.a, s.b) for s in W.involutions], W.p)
    return h, WhittakerPresentation([involution_from_fixed_points(a, b) for a, b in pairs], W.p)


# -- the inverse search ----------------------------------------------------------


def _mod(x, p, t):
    """``x mod p^t`` as an integer in ``[0, p^t)``, or None if ``x`` is not integral."""
    if x is INF:
        return None
    if isinstance(x, Padic):
        x = Fraction(x.lift())
    x = Fraction(x)
    if x != 0 and valuation(x, p) < 0:
        return None
    M = p**t
    return x.numerator * pow(x.denominator, -1, M) % M


def _pairs_from(xs, g):
    # x_0 pairs with 0, then consecutive x's, then {1, INF}
    pairs = [(Fraction(0), xs[0])]
    for k in range(g - 1):
        pairs.append((xs[1 + 2 * k], xs[2 + 2 * k]))
    pairs.append((Fraction(1), INF))
    return pairs


def _nudge(xs, p, t):
    # separate colliding representatives without changing residues mod p^t;
    # the offset is far below p^t so a zero residue still reads as "deep"
    xs = list(xs)
    taken = {Fraction(0), Fraction(1)}
    step = p ** (3 * t)
    for k in range(len(xs)):
        while xs[k] in taken:
            xs[k] += step
        taken.add(xs[k])
    return xs


def _partial_values(xs, g, p, t):
    xs = _nudge([Fraction(x) for x in xs], p, t)
    invs = [involution_from_fixed_points(a, b) for a, b in _pairs_from(xs, g)]
    out = []
    for z in xs:
        v = extended_theta(invs, Fraction(0), Fraction(1), z, t - 2)
        out.append(_mod(v, p, t))
    return out


def ramification_to_whittaker(R, d, p, g=None):
    """Fixed points ``x_0, ..., x_{2g-2}`` mod ``p^d`` whose normalized Whittaker group
    has branch values ``{0, r_0, ..., r_{2g-2}, 1, INF}``.

    ``R`` lists the ``2g - 1`` values other than ``0, 1, INF``.  Raises
    :class:`NotValid` when the two smallest have equal absolute value.
    Returns ``(xs, certificate)`` where ``xs`` are residues and the certificate
    lists the truncated theta values mod ``p^d``.
    """
    rs = [Fraction(r.lift()) if isinstance(r, Padic) else Fraction(r) for r in R]
    if g is None:
        g = (len(rs) + 1) // 2
    if len(rs) != 2 * g - 1:
        raise ValueError("expected %d values" % (2 * g - 1))
    if d < 3:
        raise ValueError("precision d must be at least 3")
    absv = lambda x: -valuation(x, p) if x != 0 else -math.inf
    rs.sort(key=absv)
    if len(rs) > 1 and absv(rs[0]) == absv(rs[1]):
        raise NotValid("NOT VALID")
    targets = {t: sorted(_mod(r, p, t) for r in rs) for t in range(2, d + 1)}
    inv4 = pow(4, -1, p * p)
    inv2 = pow(2, -1, p * p)

    def seeds():
        cands = [k for k, r in enumerate(rs) if _mod(r, p, 2) == 0] or list(range(len(rs)))
        for i in reversed(cands):
            rest = [r for k, r in enumerate(rs) if k != i]
            x0 = (-_mod(rs[i], p, 2) * inv4) % (p * p)
            others = [(-_mod(r, p, 2) * inv2) % (p * p) for r in rest]
            yield [x0] + others

    deepest = [3]

    def search(xs, t):
        deepest[0] = max(deepest[0], t)
        if t > d:
            return xs
        for v in itertools.product(range(p), repeat=len(xs)):
            cand = [x + vi * p ** (t - 1) for x, vi in zip(xs, v)]
            vals = _partial_values(cand, g, p, t)
            if None in vals or sorted(vals) != targets[t]:
                continue
            found = search(cand, t + 1)
            if found is not None:
                return found
        return None

    for xs in seeds():
        found = search(xs, 3)
        if found is not None:
            cert = _partial_values(found, g, p, d)
            return [x % p**d for x in found], cert
    raise SearchExhausted(min(deepest[0], d))
