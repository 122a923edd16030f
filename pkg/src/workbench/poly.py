"""Univariate polynomials with exact shift calculus, plus twisted polynomials.

Coefficients may be GRat (exact mode) or mpmath numbers (numeric mode); all
routines are generic over scalars supporting +,*,- and truthiness.
"""

import mpmath

from .scalars import GRat, ZERO, ONE, as_grat, grat, to_mpc, is_exact

NEG_INF = float("-inf")


def _as_coeff(x):
    g = as_grat(x)
    return x if g is NotImplemented else g


class Poly:
    """Dense polynomial sum_k c[k] u^k; trailing zeros always stripped."""

    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        cs = [_as_coeff(x) for x in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.c = tuple(cs)

    @classmethod
    def const(cls, x):
        return cls((x,))

    @classmethod
    def x(cls):
        return cls((ZERO, ONE))

    @classmethod
    def from_roots(cls, roots, leading=None):
        roots = list(roots)
        numeric = isinstance(leading, (mpmath.mpc, mpmath.mpf)) or any(
            isinstance(r, (mpmath.mpc, mpmath.mpf)) for r in roots)
        if numeric:
            lead = mpmath.mpf(1) if leading is None else (
                to_mpc(leading) if is_exact(leading) else leading)
            p = cls((lead,))
            one = mpmath.mpf(1)
            for r in roots:
                rr = r if isinstance(r, (mpmath.mpc, mpmath.mpf)) \
                    else to_mpc(_as_coeff(r))
                p = p * cls((-rr, one))
            return p
        p = cls.const(ONE if leading is None else leading)
        for r in roots:
            p = p * cls((-_as_coeff(r), ONE))
        return p

    @property
    def degree(self):
        return len(self.c) - 1 if self.c else NEG_INF

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.c == other.c
        return len(self.c) <= 1 and (self.c[0] if self.c else ZERO) == other

    def __hash__(self):
        return hash(self.c)

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, x in enumerate(b):
            out[k] = out[k] + x
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-x for x in self.c])

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            x = other
            return Poly([ci * x for ci in self.c])
        a, b = self.c, other.c
        if not a or not b:
            return Poly()
        zero = ZERO if (is_exact(a[0]) and is_exact(b[0])) else mpmath.mpc(0)
        out = [zero] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] = out[i + j] + ai * bj
        return Poly(out)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k):
        out = Poly.const(ONE)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __call__(self, u):
        if not self.c:
            return ZERO
        acc = self.c[-1]
        for x in reversed(self.c[:-1]):
            acc = acc * u + x
        return acc

    def shift_by(self, c):
        """p(u + c), exact Taylor shift."""
        if not self.c or not c:
            return self
        cs = list(self.c)
        n = len(cs)
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                cs[j] = cs[j] + c * cs[j + 1]
        return Poly(cs)

    def deriv(self):
        return Poly([k * x for k, x in enumerate(self.c)][1:])

    def monic(self):
        if not self.c:
            raise ZeroDivisionError("monic of zero polynomial")
        lead = self.c[-1]
        if lead == 1:
            return self
        if isinstance(lead, GRat):
            inv = ONE / lead
            return Poly([x * inv for x in self.c])
        return Poly([x / lead for x in self.c])

    def divmod(self, other):
        if not other.c:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.c)
        kindref = self.c[0] if self.c else other.c[0]
        zero = ZERO if (is_exact(kindref) and is_exact(other.c[0])) \
            else mpmath.mpc(0)
        q = [zero] * max(len(rem) - len(other.c) + 1, 0)
        dlead = other.c[-1]
        dn = len(other.c)
        while len(rem) >= dn:
            while rem and not rem[-1]:
                rem.pop()
            if len(rem) < dn:
                break
            coef = rem[-1] / dlead if not isinstance(rem[-1], GRat) else rem[-1] / dlead
            k = len(rem) - dn
            q[k] = coef
            for j, dj in enumerate(other.c):
                rem[k + j] = rem[k + j] - coef * dj
            rem.pop()
        return Poly(q), Poly(rem)

    def __repr__(self):
        if not self.c:
            return "Poly(0)"
        terms = []
        for k, x in enumerate(self.c):
            if x:
                terms.append("(%s)*u^%d" % (x, k))
        return "Poly(%s)" % " + ".join(terms)

    def to_mp(self):
        return Poly([to_mpc(x) if is_exact(x) else x for x in self.c])

    def mp_roots(self, extraprec=50):
        cs = [to_mpc(x) if is_exact(x) else mpmath.mpc(x) for x in self.c]
        if len(cs) <= 1:
            return []
        return mpmath.polyroots(list(reversed(cs)), maxsteps=200,
                                extraprec=extraprec)


def poly_shift(p, k, hbar):
    """q(u) = p(u + k*hbar), the f^{[2k]} shift convention."""
    return p.shift_by(grat(hbar) * k if is_exact(hbar) else hbar * k)


def poly_gcd(a, b):
    """Monic gcd over a field (exact coefficients)."""
    while b.c:
        a, b = b, a.divmod(b)[1]
    return a.monic() if a.c else a


def lagrange_interpolate(points, leading=None):
    """Exact polynomial through the given (x, y) pairs.

    With `leading` supplied the result is the unique degree-len(points)
    polynomial with that leading coefficient through all points (the
    transfer-matrix reconstruction mode: fix the classical character, then
    interpolate).
    """
    xs = [_as_coeff(x) for x, _ in points]
    ys = [y for _, y in points]
    for i in range(len(xs)):
        for j in range(i + 1, len(xs)):
            if xs[i] == xs[j]:
                raise ValueError("duplicate abscissa %s" % (xs[i],))
    if leading is not None:
        extra = Poly.from_roots(xs, leading=_as_coeff(leading))
        pts = [(x, y - extra(x)) for (x, _), y in zip(points, ys)]
        return extra + lagrange_interpolate(pts)
    numeric = any(isinstance(v, (mpmath.mpc, mpmath.mpf))
                  for v in list(xs) + list(ys))
    one = mpmath.mpf(1) if numeric else ONE
    total = Poly()
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        num = Poly.const(one)
        den = one
        for j, xj in enumerate(xs):
            if j != i:
                num = num * Poly((-xj, one))
                den = den * (xi - xj)
        inv = (ONE / den) if isinstance(den, GRat) else 1 / den
        total = total + num * (yi * inv)
    return total


class TwistedPoly:
    """kappa^{u/hbar} * p(u), the twisted-polynomial class of Q-functions."""

    __slots__ = ("kappa", "poly", "hbar")

    def __init__(self, kappa, poly, hbar):
        self.kappa = _as_coeff(kappa)
        self.poly = poly if isinstance(poly, Poly) else Poly.const(poly)
        self.hbar = _as_coeff(hbar)

    def __mul__(self, other):
        if isinstance(other, TwistedPoly):
            return TwistedPoly(self.kappa * other.kappa,
                               self.poly * other.poly, self.hbar)
        return TwistedPoly(self.kappa, self.poly * other, self.hbar)

    __rmul__ = __mul__

    def __neg__(self):
        return TwistedPoly(self.kappa, -self.poly, self.hbar)

    def __add__(self, other):
        if not isinstance(other, TwistedPoly):
            raise TypeError("can only add twisted polynomials")
        if self.kappa != other.kappa:
            raise ValueError("twisted sum needs matching kappa "
                             "(%s vs %s)" % (self.kappa, other.kappa))
        return TwistedPoly(self.kappa, self.poly + other.poly, self.hbar)

    def __sub__(self, other):
        return self + (-other)

    def shift(self, k):
        """value(u + k*hbar) as a twisted polynomial again."""
        if isinstance(self.kappa, GRat):
            kap = self.kappa ** k
        else:
            kap = self.kappa ** k
        return TwistedPoly(self.kappa,
                           poly_shift(self.poly, k, self.hbar) * kap,
                           self.hbar)

    def __eq__(self, other):
        if not isinstance(other, TwistedPoly):
            return NotImplemented
        return self.kappa == other.kappa and self.poly == other.poly

    def __hash__(self):
        return hash((self.kappa, self.poly))

    def eval_mp(self, u):
        """Numeric value at u (principal branch for kappa^{u/hbar})."""
        kap = to_mpc(self.kappa) if is_exact(self.kappa) else mpmath.mpc(self.kappa)
        hb = to_mpc(self.hbar) if is_exact(self.hbar) else mpmath.mpc(self.hbar)
        uu = to_mpc(u) if is_exact(u) else mpmath.mpc(u)
        pref = mpmath.exp((uu / hb) * mpmath.log(kap))
        return pref * self.poly.to_mp()(uu)

    def __repr__(self):
        return "TwistedPoly(kappa=%s, %r)" % (self.kappa, self.poly)


class RatFunc:
    """Fraction of two Polys over an exact field, reduced via monic gcd."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, reduce=True):
        if den is None:
            den = Poly.const(ONE)
        if not den.c:
            raise ZeroDivisionError("zero denominator")
        if reduce and num.c:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num = num.divmod(g)[0]
                den = den.divmod(g)[0]
        lead = den.c[-1]
        if lead != 1:
            inv = ONE / lead
            num = num * inv
            den = den * inv
        self.num = num
        self.den = den

    @classmethod
    def const(cls, x):
        return cls(Poly.const(x), Poly.const(ONE), reduce=False)

    def __add__(self, other):
        other = self._coerce(other)
        return RatFunc(self.num * other.den + other.num * self.den,
                       self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if not other.num.c:
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc(other, Poly.const(ONE), reduce=False)
        return RatFunc.const(other)

    def __eq__(self, other):
        other = self._coerce(other)
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __call__(self, x):
        den = self.den(x)
        num = self.num(x)
        return num / den

    def __repr__(self):
        return "RatFunc(%r / %r)" % (self.num, self.den)
