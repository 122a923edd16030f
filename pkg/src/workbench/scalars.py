"""Exact scalars for the workbench.

Three scalar variants circulate in the package:

* exact rationals           -- gmpy2.mpq
* Gaussian rationals a+b*i  -- GRat (pairs of mpq, a genuine field)
* multiprecision complex    -- mpmath.mpc at a configurable number of digits

GRat is the workhorse: hbar defaults to i, so almost every exact computation
happens over Q(i).  Plain rationals are the im == 0 case of GRat; helper
constructors accept ints, mpq, Fraction and strings like "-3/2+1/5*i".
"""

import os
import re as _re
from fractions import Fraction

import gmpy2
from gmpy2 import mpq
import mpmath
from mpmath import mp

_MPQ_ZERO = mpq(0)
_MPQ_ONE = mpq(1)


def default_dps():
    """Default working precision in decimal digits (>= 50 per contract).

    The WORKBENCH_PRECISION environment variable overrides the built-in 64.
    """
    v = os.environ.get("WORKBENCH_PRECISION")
    if v:
        n = int(v)
        if n < 50:
            raise ValueError("precision must be at least 50 decimal digits")
        return n
    return 64


class GRat:
    """Gaussian rational a + b*i with exact mpq components."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is type(_MPQ_ZERO) else mpq(re)
        self.im = im if type(im) is type(_MPQ_ZERO) else mpq(im)

    # -- predicates ---------------------------------------------------------

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    @property
    def is_rational(self):
        return not self.im

    def kind(self):
        return "exact-rational" if not self.im else "gaussian-rational"

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = as_grat(other)
        if other is NotImplemented:
            return NotImplemented
        return GRat(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = as_grat(other)
        if other is NotImplemented:
            return NotImplemented
        return GRat(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = as_grat(other)
        if other is NotImplemented:
            return NotImplemented
        return GRat(other.re - self.re, other.im - self.im)

    def __neg__(self):
        return GRat(-self.re, -self.im)

    def __mul__(self, other):
        other = as_grat(other)
        if other is NotImplemented:
            return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b:
            if not d:
                return GRat(a * c)
            return GRat(a * c, a * d)
        if not d:
            return GRat(a * c, b * c)
        return GRat(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = as_grat(other)
        if other is NotImplemented:
            return NotImplemented
        c, d = other.re, other.im
        if not d:
            if not c:
                raise ZeroDivisionError("division by zero GRat")
            return GRat(self.re / c, self.im / c)
        n2 = c * c + d * d
        a, b = self.re, self.im
        return GRat((a * c + b * d) / n2, (b * c - a * d) / n2)

    def __rtruediv__(self, other):
        other = as_grat(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, k):
        if not isinstance(k, int):
            raise TypeError("GRat powers must be integers")
        if k < 0:
            return (ONE / self) ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self):
        return GRat(self.re, -self.im)

    def abs2(self):
        """|z|^2 as an exact mpq."""
        return self.re * self.re + self.im * self.im

    # -- comparison / hashing -----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, GRat):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)) or type(other) is type(_MPQ_ZERO):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    # -- conversions ---------------------------------------------------------

    def to_mpc(self):
        return mpmath.mpc(_mpq_to_mpf(self.re), _mpq_to_mpf(self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return "GRat(%s)" % format_exact(self)

    def __str__(self):
        return format_exact(self)


ZERO = GRat(0)
ONE = GRat(1)
I = GRat(0, 1)


def _mpq_to_mpf(q):
    return mpmath.mpf(int(q.numerator)) / mpmath.mpf(int(q.denominator))


def as_grat(x):
    """Coerce ints/mpq/Fraction/str to GRat; NotImplemented on failure."""
    if isinstance(x, GRat):
        return x
    if isinstance(x, int) or type(x) is type(_MPQ_ZERO) or isinstance(x, Fraction):
        return GRat(x)
    if isinstance(x, str):
        return parse_exact(x)
    return NotImplemented


def grat(x, y=0):
    g = as_grat(x)
    if g is NotImplemented:
        raise TypeError("cannot coerce %r to GRat" % (x,))
    if y:
        g = g + GRat(0, mpq(y))
    return g


_TERM = _re.compile(
    r"\s*(?P<sign>[+-])?\s*(?:"
    r"(?P<coef>\d+(?:/\d+)?)\s*(?:\*\s*)?(?P<i1>i)?"
    r"|(?P<i2>i)"
    r")\s*"
)


def parse_exact(s):
    """Parse "p/q", "p/q+r/s*i", "i", "-2i", ... into a GRat.

    Floats are rejected on purpose: exact scalars travel as strings.
    """
    if not isinstance(s, str):
        raise TypeError("parse_exact expects a string")
    if any(ch in s for ch in ".eE") and not s.strip() in ("e", "E"):
        if "." in s:
            raise ValueError("float literals are not exact: %r" % s)
    text = s.strip()
    if not text:
        raise ValueError("empty scalar string")
    pos = 0
    re_part = _MPQ_ZERO
    im_part = _MPQ_ZERO
    nterms = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError("cannot parse scalar %r" % s)
        sign = -1 if m.group("sign") == "-" else 1
        if m.group("i2"):
            im_part += sign
        else:
            val = mpq(m.group("coef")) * sign
            if m.group("i1"):
                im_part += val
            else:
                re_part += val
        pos = m.end()
        nterms += 1
        if nterms > 2:
            raise ValueError("too many terms in scalar %r" % s)
    return GRat(re_part, im_part)


def format_exact(x):
    x = grat(x)
    if not x.im:
        return str(x.re)
    if not x.re:
        if x.im == 1:
            return "i"
        if x.im == -1:
            return "-i"
        return "%s*i" % x.im
    im = x.im
    sgn = "+" if im > 0 else "-"
    mag = abs(im)
    istr = "i" if mag == 1 else "%s*i" % mag
    return "%s%s%s" % (x.re, sgn, istr)


def scalar_kind(x):
    """Variant tag of a scalar value."""
    if isinstance(x, GRat):
        return x.kind()
    if isinstance(x, int) or type(x) is type(_MPQ_ZERO) or isinstance(x, Fraction):
        return "exact-rational"
    if isinstance(x, (mpmath.mpc, mpmath.mpf)):
        return "multiprecision-complex"
    raise TypeError("not a workbench scalar: %r" % (x,))


def is_exact(x):
    return isinstance(x, (GRat, int, Fraction)) or type(x) is type(_MPQ_ZERO)


def to_mpc(x):
    """Any scalar -> mpmath.mpc at the current context precision."""
    if isinstance(x, GRat):
        return x.to_mpc()
    if isinstance(x, int):
        return mpmath.mpc(x)
    if type(x) is type(_MPQ_ZERO) or isinstance(x, Fraction):
        return mpmath.mpc(_mpq_to_mpf(mpq(x)))
    return mpmath.mpc(x)


def rand_rat(rng, lo=-9, hi=9, den=7):
    """Small random rational, deterministic under the supplied rng."""
    num = rng.randint(lo, hi)
    d = rng.randint(1, den)
    return GRat(mpq(num, d))


def rand_distinct_rats(rng, count, lo=-9, hi=9, den=7):
    seen = set()
    out = []
    while len(out) < count:
        x = rand_rat(rng, lo, hi, den)
        if x not in seen:
            seen.add(x)
            out.append(x)
    return out


class workdps:
    """Context manager: run a block at `dps` decimal digits."""

    def __init__(self, dps):
        self.dps = dps

    def __enter__(self):
        self.saved = mp.dps
        mp.dps = self.dps
        return mp

    def __exit__(self, *exc):
        mp.dps = self.saved
        return False
