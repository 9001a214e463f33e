"""Exact arithmetic in the rational function field Q(s), where q = s^2.

A scalar is a fraction of integer-coefficient polynomials in s, kept in
canonical form: gcd(num, den) = 1 (including integer content) and the
denominator has positive leading coefficient.  Equality is representation
equality.  Storing s rather than q keeps every half-integer power of q
polynomial.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _igcd

REAL = "REAL"
UNIT = "UNIT"

# ---------------------------------------------------------------------------
# dense integer polynomials: tuples of ints, ascending degree, no trailing 0
# ---------------------------------------------------------------------------


def _trim(cs):
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def _padd(a, b):
    n = max(len(a), len(b))
    return _trim((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))


def _pneg(a):
    return tuple(-c for c in a)


def _psub(a, b):
    return _padd(a, _pneg(b))


def _pmul(a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                if cb:
                    out[i + j] += ca * cb
    return _trim(out)


def _pshift(a, k):
    if not a:
        return ()
    return (0,) * k + tuple(a)


def _pcontent(a):
    g = 0
    for c in a:
        g = _igcd(g, abs(c))
    return g


def _pprimitive(a):
    if not a:
        return (), 0
    g = _pcontent(a)
    if a[-1] < 0:
        g = -g
    return tuple(c // g for c in a), g


def _pdivmod_frac(a, b):
    """Division with remainder over Q; a, b integer tuples, b nonzero."""
    r = [Fraction(c) for c in a]
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lb = Fraction(b[-1])
    for i in range(len(a) - len(b), -1, -1):
        if len(r) < i + len(b):
            continue
        coef = r[i + len(b) - 1] / lb
        q[i] = coef
        if coef:
            for j, cb in enumerate(b):
                r[i + j] -= coef * cb
        del r[i + len(b) - 1]
    while r and r[-1] == 0:
        r.pop()
    return q, r


def _pdiv_exact(a, b):
    """Exact division in Z[s]; raises if not divisible."""
    if not a:
        return ()
    r = list(a)
    lb = b[-1]
    q = [0] * (len(a) - len(b) + 1)
    for i in range(len(a) - len(b), -1, -1):
        while r and r[-1] == 0:
            r.pop()
        if len(r) < i + len(b):
            continue
        top = r[-1]
        if top % lb:
            raise ArithmeticError("inexact polynomial division")
        coef = top // lb
        q[i] = coef
        for j in range(len(b)):
            r[i + j] -= coef * b[j]
    if any(r):
        raise ArithmeticError("inexact polynomial division")
    return _trim(q)


def _pseudo_rem(a, b):
    """Integer pseudo-remainder of a by b (content is irrelevant here)."""
    lb = b[-1]
    r = list(a)
    while True:
        while r and r[-1] == 0:
            r.pop()
        if len(r) < len(b):
            return r
        top = r.pop()
        r = [lb * x for x in r]
        off = len(r) - (len(b) - 1)
        for j in range(len(b) - 1):
            r[off + j] -= top * b[j]


def _pgcd(a, b):
    """Primitive gcd in Z[s] with positive leading coefficient, via a
    primitive pseudo-remainder sequence (all-integer)."""
    a = _pprimitive(a)[0] if a else ()
    b = _pprimitive(b)[0] if b else ()
    while b:
        r = _pseudo_rem(a, b)
        a, b = b, (_pprimitive(r)[0] if any(r) else ())
    return a


def _peval(a, s):
    v = 0j
    for c in reversed(a):
        v = v * s + c
    return v


def _pstr(a):
    if not a:
        return "0"
    parts = []
    for i in range(len(a) - 1, -1, -1):
        c = a[i]
        if c == 0:
            continue
        if i == 0:
            term = str(abs(c))
        else:
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            term = f"{mag}s" if i == 1 else f"{mag}s^{i}"
        if not parts:
            parts.append(term if c > 0 else "-" + term)
        else:
            parts.append((" + " if c > 0 else " - ") + term)
    return "".join(parts)


# ---------------------------------------------------------------------------


class QScalar:
    """Element of Q(s) in canonical fraction form."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=(1,), canonical=False):
        if canonical:
            self.num = tuple(num)
            self.den = tuple(den)
            return
        num = _trim(num)
        den = _trim(den)
        if not den:
            raise ZeroDivisionError("zero denominator in Q(s)")
        if not num:
            self.num, self.den = (), (1,)
            return
        if den == (1,):
            self.num, self.den = num, den
            return
        nz_den = sum(1 for c in den if c)
        if nz_den == 1:
            # monomial denominator c*s^k: cancel the s-valuation directly
            k = len(den) - 1
            v = 0
            while num[v] == 0:
                v += 1
            shift = min(v, k)
            if shift:
                num = num[shift:]
                den = den[shift:]
        else:
            g = _pgcd(num, den)
            if g != (1,):
                num = _pdiv_exact(num, g)
                den = _pdiv_exact(den, g)
        c = _igcd(_pcontent(num), _pcontent(den))
        if den[-1] < 0:
            c = -c
        if c != 1:
            num = tuple(x // c for x in num)
            den = tuple(x // c for x in den)
        self.num = num
        self.den = den

    # -- constructors --------------------------------------------------

    @classmethod
    def from_int(cls, n):
        return cls((n,) if n else ())

    @classmethod
    def from_fraction(cls, fr):
        fr = Fraction(fr)
        return cls((fr.numerator,) if fr.numerator else (), (fr.denominator,))

    @classmethod
    def s_power(cls, k):
        """s^k for any integer k."""
        if k >= 0:
            return cls(_pshift((1,), k), (1,), canonical=True)
        return cls((1,), _pshift((1,), -k), canonical=True)

    @classmethod
    def q_power(cls, k):
        return cls.s_power(2 * k)

    # -- predicates -----------------------------------------------------

    def is_zero(self):
        return not self.num

    def is_one(self):
        return self.num == (1,) and self.den == (1,)

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if not isinstance(other, QScalar):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.num:
            return other
        if not other.num:
            return self
        if self.den == (1,) and other.den == (1,):
            return QScalar(_padd(self.num, other.num), (1,), canonical=True)
        return QScalar(
            _padd(_pmul(self.num, other.den), _pmul(other.num, self.den)),
            _pmul(self.den, other.den),
        )

    __radd__ = __add__

    def __neg__(self):
        return QScalar(_pneg(self.num), self.den, canonical=True)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.num or not other.num:
            return ZERO
        if self.num == (1,) and self.den == (1,):
            return other
        if other.num == (1,) and other.den == (1,):
            return self
        if self.den == (1,) and other.den == (1,):
            return QScalar(_pmul(self.num, other.num), (1,), canonical=True)
        return QScalar(_pmul(self.num, other.num), _pmul(self.den, other.den))

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero in Q(s)")
        return QScalar(self.den, self.num)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _coerce(other) * self.inverse()

    def __pow__(self, k):
        if k == 0:
            return ONE
        base = self if k > 0 else self.inverse()
        out = ONE
        for _ in range(abs(k)):
            out = out * base
        return out

    # -- star ------------------------------------------------------------

    def star(self, mode=REAL):
        """Conjugation: identity for REAL, s -> s^{-1} for UNIT.

        Rational coefficients are self-conjugate in both modes.
        """
        if mode == REAL:
            return self
        if mode != UNIT:
            raise ValueError(f"unknown star mode {mode!r}")
        if not self.num:
            return self
        dn = len(self.num) - 1
        dd = len(self.den) - 1
        num = _trim(reversed(self.num))
        den = _trim(reversed(self.den))
        if dd >= dn:
            num = _pshift(num, dd - dn)
        else:
            den = _pshift(den, dn - dd)
        return QScalar(num, den)

    # -- numerics / io -----------------------------------------------------

    def evaluate(self, s):
        """Numeric value at s = given complex number."""
        dv = _peval(self.den, s)
        return _peval(self.num, s) / dv

    def __repr__(self):
        if self.den == (1,):
            return _pstr(self.num)
        return f"({_pstr(self.num)})/({_pstr(self.den)})"


def _coerce(x):
    if isinstance(x, QScalar):
        return x
    if isinstance(x, int):
        return QScalar.from_int(x)
    if isinstance(x, Fraction):
        return QScalar.from_fraction(x)
    return NotImplemented


ZERO = QScalar(())
ONE = QScalar((1,))
S = QScalar.s_power(1)
Q = QScalar.q_power(1)


def scalar_ops(x, y, op, mode=REAL):
    """Field operations dispatch; division by zero raises ZeroDivisionError."""
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    if op == "star":
        return x.star(mode)
    raise ValueError(f"unknown op {op!r}")
