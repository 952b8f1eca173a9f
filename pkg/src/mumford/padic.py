"""p-adic numbers at capped relative precision.

A nonzero element is stored as ``p**val * unit`` where ``unit`` is prime to
``p``.  Inexact values know ``prec`` significant digits, so ``unit`` lives in
``[1, p**prec)``.  Exact values (``prec is None``) carry an arbitrary integer
unit; integers and fractions with p-power denominators are embedded exactly.
Zero comes in two flavours: the exact zero, and a zero known only modulo
``p**val`` (``unit == 0``, ``prec == 0``).
"""

import math
import re
from fractions import Fraction

__all__ = [
    "Padic",
    "PrecisionError",
    "DEFAULT_GUARD",
    "working_precision",
    "parse_rational",
    "parse_digits",
    "format_digits",
    "to_json",
    "from_json",
    "valuation",
    "val_ge",
    "val_gt",
    "truncate",
    "to_padic",
]

DEFAULT_GUARD = 10


class PrecisionError(ArithmeticError):
    """Raised when a result cannot be decided at the carried precision."""


def working_precision(n, guard=None):
    """Relative digits to carry for an output wanted to ``n`` digits."""
    if guard is None:
        import os

        guard = int(os.environ.get("MUMFORD_GUARD_DIGITS", DEFAULT_GUARD))
    return n + guard


def _split(n, p):
    # n != 0 -> (v, u) with n = p**v * u, p does not divide u
    if n % p:
        return 0, n
    # repeated squaring keeps this fast for integers with huge p-power factors
    pw = [p]
    while n % (pw[-1] * pw[-1]) == 0:
        pw.append(pw[-1] * pw[-1])
    v = 0
    for i in reversed(range(len(pw))):
        while n % pw[i] == 0:
            n //= pw[i]
            v += 1 << i
    return v, n


class Padic:
    __slots__ = ("p", "val", "unit", "prec", "cap")

    def __init__(self, p, val, unit, prec, cap):
        self.p = p
        self.val = val
        self.unit = unit
        self.prec = prec
        self.cap = cap

    # -- construction -------------------------------------------------
    @classmethod
    def _new(cls, p, val, unit, prec, cap):
        x = object.__new__(cls)
        x.p = p
        x.val = val
        x.unit = unit
        x.prec = prec
        x.cap = cap
        return x

    @classmethod
    def zero(cls, p, cap, absprec=None):
        """Exact zero, or zero known modulo ``p**absprec``."""
        if absprec is None:
            return cls._new(p, 0, 0, None, cap)
        return cls._new(p, absprec, 0, 0, cap)

    @classmethod
    def from_rational(cls, q, p, cap):
        q = Fraction(q)
        if q == 0:
            return cls.zero(p, cap)
        vn, un = _split(q.numerator, p)
        vd, ud = _split(q.denominator, p)
        if ud == 1:
            return cls._new(p, vn - vd, un, None, cap)
        mod = p**cap
        return cls._new(p, vn - vd, un * pow(ud, -1, mod) % mod, cap, cap)

    def _coerce(self, other):
        if isinstance(other, Padic):
            if other.p != self.p:
                raise ValueError("cannot mix p-adics of different primes")
            return other
        if isinstance(other, (int, Fraction)):
            return Padic.from_rational(other, self.p, self.cap)
        return NotImplemented

    # -- predicates ---------------------------------------------------
    @property
    def exact(self):
        return self.prec is None

    def is_zero(self):
        """True for the exact zero and for zeros known to finite precision."""
        return self.unit == 0

    def is_exact_zero(self):
        return self.unit == 0 and self.prec is None

    @property
    def valuation(self):
        if self.unit == 0:
            if self.prec is None:
                return math.inf
            raise PrecisionError("valuation of a zero known only modulo p^%d" % self.val)
        return self.val

    @property
    def absprec(self):
        """Absolute precision: the value is known modulo p**absprec."""
        if self.prec is None:
            return math.inf
        if self.unit == 0:
            return self.val
        return self.val + self.prec

    def norm(self):
        if self.unit == 0:
            if self.prec is None:
                return Fraction(0)
            raise PrecisionError("norm of an inexact zero")
        return Fraction(1, self.p**self.val) if self.val >= 0 else Fraction(self.p ** (-self.val))

    # -- arithmetic ---------------------------------------------------
    def __neg__(self):
        if self.unit == 0:
            return self
        if self.prec is None:
            return Padic._new(self.p, self.val, -self.unit, None, self.cap)
        return Padic._new(self.p, self.val, (-self.unit) % self.p**self.prec, self.prec, self.cap)

    def __pos__(self):
        return self

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _add(self, -other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _add(other, -self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _div(self, other)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _div(other, self)

    def inverse(self):
        return _div(Padic._new(self.p, 0, 1, None, self.cap), self)

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = Padic._new(self.p, 0, 1, None, self.cap)
        base = self
        while n:
            if n & 1:
                result = _mul(result, base)
            base = _mul(base, base)
            n >>= 1
        return result

    # -- comparison ---------------------------------------------------
    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _add(self, -other).unit == 0

    def __ne__(self, other):
        eq = self.__eq__(other)
        if eq is NotImplemented:
            return eq
        return not eq

    __hash__ = None

    # -- conversions --------------------------------------------------
    def lift(self):
        """The stored representative as an exact rational."""
        if self.unit == 0:
            return Fraction(0)
        if self.val >= 0:
            return Fraction(self.unit * self.p**self.val)
        return Fraction(self.unit, self.p ** (-self.val))

    def with_prec(self, prec):
        """Truncate to at most ``prec`` relative digits."""
        if self.unit == 0 or (self.prec is not None and self.prec <= prec):
            return self
        mod = self.p**prec
        return Padic._new(self.p, self.val, self.unit % mod, prec, self.cap)

    def digits(self, count=None):
        """Unit digits, lowest power first.

        Inexact values yield their ``prec`` known digits; exact values yield
        ``count`` digits (default: until the expansion terminates, or ``cap``
        for a negative unit).
        """
        if self.unit == 0:
            return []
        p = self.p
        if self.prec is not None:
            n = self.prec if count is None else min(count, self.prec)
            u = self.unit
        elif count is None:
            if self.unit > 0:
                out, u = [], self.unit
                while u:
                    u, d = divmod(u, p)
                    out.append(d)
                return out
            n, u = self.cap, self.unit % p**self.cap
        else:
            n, u = count, self.unit % p**count
        out = []
        for _ in range(n):
            u, d = divmod(u, p)
            out.append(d)
        return out

    def __repr__(self):
        try:
            return format_digits(self)
        except ValueError:
            return "Padic(p=%d, val=%r, unit=%r, prec=%r)" % (self.p, self.val, self.unit, self.prec)

    def __str__(self):
        return self.__repr__()


def _add(x, y):
    p = x.p
    cap = x.cap if x.cap >= y.cap else y.cap
    if x.unit == 0 and x.prec is None:
        return y
    if y.unit == 0 and y.prec is None:
        return x
    if x.prec is None and y.prec is None:
        v = x.val if x.val < y.val else y.val
        s = x.unit * p ** (x.val - v) + y.unit * p ** (y.val - v)
        if s == 0:
            return Padic._new(p, 0, 0, None, cap)
        w, u = _split(s, p)
        return Padic._new(p, v + w, u, None, cap)
    a = x.absprec
    b = y.absprec
    A = a if a < b else b
    if x.unit == 0:
        if y.unit == 0:
            return Padic._new(p, A, 0, 0, cap)
        v = y.val
        if v >= A:
            return Padic._new(p, A, 0, 0, cap)
        n = A - v
        return Padic._new(p, v, y.unit % p**n, n, cap)
    if y.unit == 0:
        v = x.val
        if v >= A:
            return Padic._new(p, A, 0, 0, cap)
        n = A - v
        return Padic._new(p, v, x.unit % p**n, n, cap)
    xv = x.val
    yv = y.val
    if xv == yv:
        v = xv
        s = x.unit + y.unit
    elif xv < yv:
        v = xv
        s = x.unit + y.unit * p ** (yv - xv)
    else:
        v = yv
        s = x.unit * p ** (xv - yv) + y.unit
    if v >= A:
        return Padic._new(p, A, 0, 0, cap)
    n = A - v
    s %= p**n
    if s == 0:
        return Padic._new(p, A, 0, 0, cap)
    w = 0
    while s % p == 0:
        s //= p
        w += 1
    return Padic._new(p, v + w, s, n - w, cap)


def _mul(x, y):
    p = x.p
    cap = x.cap if x.cap >= y.cap else y.cap
    if x.unit == 0 or y.unit == 0:
        if (x.unit == 0 and x.prec is None) or (y.unit == 0 and y.prec is None):
            return Padic._new(p, 0, 0, None, cap)
        if x.unit == 0 and y.unit == 0:
            return Padic._new(p, x.val + y.val, 0, 0, cap)
        z, o = (x, y) if x.unit == 0 else (y, x)
        return Padic._new(p, z.val + o.val, 0, 0, cap)
    xp = x.prec
    yp = y.prec
    if xp is None:
        if yp is None:
            return Padic._new(p, x.val + y.val, x.unit * y.unit, None, cap)
        n = yp
    elif yp is None or xp < yp:
        n = xp
    else:
        n = yp
    return Padic._new(p, x.val + y.val, x.unit * y.unit % p**n, n, cap)


def _div(x, y):
    p = x.p
    cap = x.cap if x.cap >= y.cap else y.cap
    if y.unit == 0:
        if y.prec is None:
            raise ZeroDivisionError("division by zero")
        raise PrecisionError("precision-exhausted divisor")
    if x.unit == 0:
        if x.prec is None:
            return x
        return Padic._new(p, x.val - y.val, 0, 0, cap)
    xp = x.prec
    yp = y.prec
    if xp is None and yp is None:
        if y.unit in (1, -1):
            return Padic._new(p, x.val - y.val, x.unit * y.unit, None, cap)
        n = cap
    elif xp is None:
        n = yp
    elif yp is None or xp < yp:
        n = xp
    else:
        n = yp
    mod = p**n
    return Padic._new(p, x.val - y.val, x.unit * pow(y.unit, -1, mod) % mod, n, cap)


# -- generic helpers over int / Fraction / Padic -------------------------


def valuation(x, p):
    """p-adic valuation of an int, Fraction or Padic; ``math.inf`` for exact zero."""
    if isinstance(x, Padic):
        return x.valuation
    x = Fraction(x)
    if x == 0:
        return math.inf
    return _split(x.numerator, p)[0] - _split(x.denominator, p)[0]


def val_ge(x, q, p):
    """Decide ``val(x) >= q``; inexact zeros decide only when precise enough."""
    if isinstance(x, Padic) and x.unit == 0 and x.prec is not None:
        if x.val >= q:
            return True
        raise PrecisionError("cannot decide val >= %s at absolute precision %d" % (q, x.val))
    return valuation(x, p) >= q


def val_gt(x, q, p):
    """Decide ``val(x) > q`` (valuations are integers)."""
    return val_ge(x, math.floor(q) + 1, p)


def truncate(x, p, k):
    """The rational sum of the digits of ``x`` below ``p**k``."""
    if isinstance(x, Padic):
        if x.absprec < k:
            raise PrecisionError("need absolute precision %d, have %s" % (k, x.absprec))
        if x.unit == 0 or x.val >= k:
            return Fraction(0)
        n = k - x.val
        u = x.unit % p**n
        return Fraction(u * p**x.val) if x.val >= 0 else Fraction(u, p ** (-x.val))
    x = Fraction(x)
    if x == 0:
        return x
    v = valuation(x, p)
    if v >= k:
        return Fraction(0)
    u = x / Fraction(p) ** v
    mod = p ** (k - v)
    r = u.numerator * pow(u.denominator, -1, mod) % mod
    return Fraction(r) * Fraction(p) ** v


def to_padic(x, p, N):
    if isinstance(x, Padic):
        return x
    return Padic.from_rational(x, p, N)


def parse_rational(numerator, denominator, p, N):
    """Embed ``numerator/denominator`` in Q_p with ``N`` relative digits."""
    if denominator == 0:
        raise ZeroDivisionError("division by zero")
    return Padic.from_rational(Fraction(numerator, denominator), p, N)


# -- digit strings ------------------------------------------------------

_DIGITS_RE = re.compile(r"^\((…|\.\.\.)?([0-9]*)(?:\.([0-9]+))?\)_([0-9]+)$")


def format_digits(x):
    """Render ``x`` as ``(…a_k…a_1a_0.a_-1…)_p``, higher powers to the left."""
    p = x.p
    if p > 10:
        raise ValueError("digit strings support primes below 10 only")
    if x.unit == 0:
        if x.prec is None:
            return "(0)_%d" % p
        if x.val <= 0:
            raise ValueError("zero known only modulo p^%d has no digit string" % x.val)
        return "(…%s)_%d" % ("0" * x.val, p)
    ds = x.digits()
    ellipsis = "…" if (x.prec is not None or x.unit < 0) else ""
    lo = x.val
    hi = lo + len(ds)  # exclusive
    if ellipsis and hi < 0:
        # the digits between p^hi and the point are unknown
        raise ValueError("known digits end below p^-1; no digit string")
    # place digit for power e at index
    powers = range(min(lo, 0), max(hi, 1) if lo >= 0 else max(hi, 0))
    left = []
    right = []
    for e in reversed(powers):
        d = ds[e - lo] if lo <= e < hi else 0
        (left if e >= 0 else right).append(str(d))
    if ellipsis and hi <= 0:
        left = []
    s = "".join(left)
    if right:
        s += "." + "".join(right)
    return "(%s%s)_%d" % (ellipsis, s, p)


def parse_digits(s, p=None, cap=None):
    """Inverse of :func:`format_digits`."""
    m = _DIGITS_RE.match(s.strip())
    if not m:
        raise ValueError("malformed p-adic digit string: %r" % s)
    trunc, left, right, prime = m.groups()
    prime = int(prime)
    if p is not None and p != prime:
        raise ValueError("digit string is base %d, expected %d" % (prime, p))
    p = prime
    right = right or ""
    if not left and not (trunc and right):
        raise ValueError("malformed p-adic digit string: %r" % s)
    allds = left + right
    if any(int(c) >= p for c in allds):
        raise ValueError("digit >= %d in %r" % (p, s))
    low = -len(right)
    stripped = allds.rstrip("0")
    nz = len(allds) - len(stripped)
    if cap is None:
        cap = max(len(allds), 1) + DEFAULT_GUARD
    if not stripped:
        if trunc:
            return Padic.zero(p, cap, absprec=low + len(allds))
        return Padic.zero(p, cap)
    val = low + nz
    unit = 0
    for c in stripped:
        unit = unit * p + int(c)
    if trunc:
        return Padic._new(p, val, unit, len(stripped), cap)
    return Padic._new(p, val, unit, None, cap)


# -- JSON ---------------------------------------------------------------


def to_json(x):
    if x.unit == 0:
        if x.prec is None:
            return {"p": x.p, "val": None, "digits": []}
        return {"p": x.p, "val": x.val, "digits": []}
    out = {"p": x.p, "val": x.val, "digits": x.digits()}
    if x.prec is None:
        out["exact"] = True
    return out


def from_json(obj, cap=None):
    p = obj["p"]
    ds = list(obj["digits"])
    if cap is None:
        cap = len(ds) + DEFAULT_GUARD
    if not ds:
        if obj["val"] is None:
            return Padic.zero(p, cap)
        return Padic.zero(p, cap, absprec=obj["val"])
    if ds[0] == 0 or any(not 0 <= d < p for d in ds):
        raise ValueError("invalid digit list for p=%d" % p)
    unit = 0
    for d in reversed(ds):
        unit = unit * p + d
    if obj.get("exact"):
        return Padic._new(p, obj["val"], unit, None, cap)
    return Padic._new(p, obj["val"], unit, len(ds), cap)
