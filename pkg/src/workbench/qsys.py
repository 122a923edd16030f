"""Baxter Q-functions from transfer-matrix spectra.

Pipeline: joint-diagonalize the antisymmetric transfer family numerically,
interpolate each eigenvalue into a polynomial in u (the classical character
fixes the leading coefficient), solve the finite-difference Baxter equation
for twisted-polynomial q's, complete the full 2^n family through the
QQ-relations, and close the loop by rebuilding transfer eigenvalues from
quantum-eigenvalue tableaux and Wronskian determinant ratios.

Polynomial form of the n-term Baxter equation used by solve_tq: with
nu_1(u) = prod_alpha (u - theta_alpha - hbar*nu^alpha_1) and the ladder
W_a(u) = prod_{k=a}^{n-1} nu_1(u - hbar k),

    sum_{a=0}^{n} (-1)^a T_{a,1}(u) W_a(u) z_i^{1-a} q_i(u + hbar(1-a)) = 0.

This is the difference operator sum_a (-1)^a T_{a,1}(u) D^{-a} acting on
kappa^{u/hbar}-twisted polynomials once the Gamma-function dressing of the
full Q-function is divided out; the W_a ladders are what remains of that
dressing.  The mirror equation, solved by solve_tq(dual=True), uses
W*_a(u) = prod_{b=a+1}^{n} nu_n(u + hbar b) and effective twist det(G)/z_j:

    sum_{a=0}^{n} (-1)^a T_{a,1}(u + hbar a) W*_a(u) z_j^{-a} q^j(u + hbar a) = 0.

Similarly the QQ-relation between levels m and m+1 picks up a rational gap
factor D_m(u) (the ratio of the two Gamma dressings); when some weight gap
nu^alpha_{m+1} - nu^alpha_{m+2} is not an integer that factor is not
rational and the polynomial bookkeeping for the affected subsets is
abandoned: they are marked unavailable in the QSystem instead of solved.

Exact mode works over Gaussian rationals; numeric mode works at a chosen
mpmath precision, with all tolerances tied to the single dps knob.
"""

import itertools
from fractions import Fraction

import mpmath

from .scalars import GRat, ZERO, ONE, grat, as_grat, is_exact, workdps, default_dps
from .poly import Poly, poly_shift, lagrange_interpolate, TwistedPoly
from .linalg import Mat, joint_eigen, exact_nullspace
from .yangian import monodromy, transfer_cbr, elementary_symmetric

NEG_INF = float("-inf")


def _tol_for(dps):
    """Working tolerance in numeric mode: ~40 guard digits below 64 dps."""
    return mpmath.mpf(10) ** (24 - dps)


def _zs(spec):
    info = spec.twist_info or {}
    zs = info.get("z")
    if not zs:
        raise ValueError("twist eigenvalues unavailable; build the chain with a "
                         "diagonal or companion twist carrying twist_info['z']")
    zs = [as_grat(z) for z in zs]
    if len(zs) != spec.n:
        raise ValueError("need %d twist eigenvalues, got %d" % (spec.n, len(zs)))
    return zs


def _det_twist(zs):
    out = ONE
    for z in zs:
        out = out * z
    return out


def _complete_homogeneous(zs, smax):
    """h_0..h_smax of the twist eigenvalues (leading coefficients of the
    symmetric row transfers)."""
    h = [ONE] + [ZERO] * smax
    for z in zs:
        for s in range(1, smax + 1):
            h[s] = h[s] + z * h[s - 1]
    return h


def _chop(p, tol, scale=1):
    """Zero out numeric coefficients below tol*scale (no-op on exact polys)."""
    if not p.c or is_exact(p.c[0]):
        return p
    bound = tol * max(scale, 1)
    return Poly([mpmath.mpc(0) if abs(c) <= bound else c for c in p.c])


def _poly_scale(p):
    if not p.c or is_exact(p.c[0]):
        return 1
    return max([abs(c) for c in p.c] + [mpmath.mpf(1)])


def _num(x):
    return x.to_mpc() if is_exact(x) else x


def _as_fraction(x):
    """Exact rational content of a weight entry (GRat, mpq, Fraction, int)."""
    if isinstance(x, GRat):
        if not x.is_rational:
            raise ValueError("expected a rational weight, got %s" % (x,))
        x = x.re
    if hasattr(x, "numerator"):
        return Fraction(int(x.numerator), int(x.denominator))
    return Fraction(x)


def _monomial(k, exact):
    one = ONE if exact else mpmath.mpf(1)
    zero = ZERO if exact else mpmath.mpf(0)
    return Poly((zero,) * k + (one,))


def _shifted_monomial(k, off, hbar, exact):
    """u^k rewritten around u + off*hbar."""
    mono = _monomial(k, exact)
    if off == 0:
        return mono
    return poly_shift(mono, off, hbar if exact else _num(hbar))


def _poly_product(ps):
    out = Poly((ONE,))
    for p in ps:
        out = out * p
    return out


# ---------------------------------------------------------------------------
# state spectra


class StateSpectrum(object):
    """Transfer eigenvalue polynomials of one joint eigenstate.

    shapes maps a Young-diagram tuple to the Poly eigenvalue of the fused
    transfer matrix of that shape; the single columns (1,)*a for a = 1..n
    must be present.  T of the empty shape is 1 (column(0) returns it).
    """

    def __init__(self, n, chain_length, hbar, shapes, vector=None, index=None):
        self.n = n
        self.L = chain_length
        self.hbar = hbar
        self.shapes = dict(shapes)
        self.vector = vector
        self.index = index
        for a in range(1, n + 1):
            if (1,) * a not in self.shapes:
                raise ValueError("missing transfer eigenvalue for column %d" % a)

    @property
    def exact(self):
        p = self.shapes[(1,)]
        return bool(p.c) and is_exact(p.c[0])

    def column(self, a):
        """Eigenvalue of the a-th antisymmetric transfer (a=0 gives 1)."""
        if a == 0:
            return Poly((ONE if self.exact else mpmath.mpf(1),))
        return self.shapes[(1,) * a]

    @property
    def integrals(self):
        """Commuting charges as plain coefficients: (a, beta) -> coefficient
        of u^beta in the a-th antisymmetric transfer eigenvalue."""
        out = {}
        for a in range(1, self.n + 1):
            for beta, c in enumerate(self.column(a).c):
                out[(a, beta)] = c
        return out


def transfer_spectrum(spec, precision=None, rows=()):
    """Joint spectrum of the antisymmetric transfer family, a = 1..n.

    Diagonalizes the commuting family at exact rational sample points and
    interpolates each eigenvalue to a polynomial in u, pinning the leading
    coefficient to the classical character e_a(z) u^(aL) (h_s(z) u^(sL) for
    the optional symmetric rows s in rows).  Returns a list of StateSpectrum
    in diagonalizer order, with the joint eigenvector attached.

    Raises ValueError if two states share every eigenvalue polynomial (the
    family does not separate the spectrum).
    """
    dps = precision or default_dps()
    tol = _tol_for(dps)
    zs = _zs(spec)
    n, L = spec.n, spec.L
    es = elementary_symmetric(zs)
    hs = _complete_homogeneous(zs, max(rows) if rows else 0)

    shape_list = [((1,) * a, es[a]) for a in range(1, n + 1)]
    for s in rows:
        if s >= 2:
            shape_list.append(((s,), hs[s]))

    tm = monodromy(spec)
    cache = {}
    ops = [(lam, transfer_cbr(tm, lam, cache=cache)) for lam, _ in shape_list]

    family = []
    meta = []
    points = {}
    for si, (lam, op) in enumerate(ops):
        deg = L * sum(lam)
        pts = [grat(Fraction(2 * r + 1, 2)) for r in range(deg + 1)]
        points[si] = pts
        for pt in pts:
            family.append(op(pt))
            meta.append(si)

    eigs, vecs = joint_eigen(family, precision=dps)
    dim = spec.chain_dim

    states = []
    with workdps(dps):
        for idx in range(dim):
            shp = {}
            for si, (lam, _) in enumerate(ops):
                vals = [eigs[k][idx] for k in range(len(meta)) if meta[k] == si]
                xs = [pt.to_mpc() for pt in points[si]]
                lead = shape_list[si][1].to_mpc()
                # last point is the holdout; interpolate on the rest
                p = lagrange_interpolate(list(zip(xs[:-1], vals[:-1])),
                                         leading=lead)
                scale = max(_poly_scale(p), abs(vals[-1]))
                if abs(p(xs[-1]) - vals[-1]) > tol * scale:
                    raise ValueError("transfer eigenvalue interpolation failed "
                                     "the holdout check at shape %s" % (lam,))
                shp[lam] = _chop(p, tol, scale)
            states.append(StateSpectrum(n, L, spec.hbar, shp,
                                        vector=vecs[idx], index=idx))

        for i in range(dim):
            for j in range(i + 1, dim):
                same = True
                for lam, _ in shape_list:
                    pi, pj = states[i].shapes[lam], states[j].shapes[lam]
                    sc = max(_poly_scale(pi), _poly_scale(pj))
                    kmax = max(len(pi.c), len(pj.c))
                    for k in range(kmax):
                        ci = pi.c[k] if k < len(pi.c) else 0
                        cj = pj.c[k] if k < len(pj.c) else 0
                        if abs(ci - cj) > tol * sc:
                            same = False
                            break
                    if not same:
                        break
                if same:
                    raise ValueError("non-simple joint spectrum: states %d and "
                                     "%d share all transfer eigenvalues" % (i, j))
    return states


def vacuum_spectrum(spec, rows=()):
    """Exact StateSpectrum of the highest-weight vector.

    On the highest-weight state the fused transfers act by tableau sums with
    trivial q's: the a-th column eigenvalue is the sum over strictly
    decreasing index a-tuples of prod_r z_{j_r} nu_{j_r}(u - hbar(r-1)).
    """
    zs = _zs(spec)
    n = spec.n
    hbar = spec.hbar
    nus = [spec.nu(j) for j in range(1, n + 1)]
    shapes = {}
    for a in range(1, n + 1):
        total = Poly(())
        for combo in itertools.combinations(range(n), a):
            js = sorted(combo, reverse=True)
            term = Poly((ONE,))
            for r, j in enumerate(js):
                term = term * (poly_shift(nus[j], -r, hbar) * Poly((zs[j],)))
            total = total + term
        shapes[(1,) * a] = total
    for s in rows:
        if s >= 2:
            total = Poly(())
            for combo in itertools.combinations_with_replacement(range(n), s):
                js = sorted(combo, reverse=True)
                term = Poly((ONE,))
                for col, j in enumerate(js):
                    term = term * (poly_shift(nus[j], col, hbar) * Poly((zs[j],)))
                total = total + term
            shapes[(s,)] = total
    return StateSpectrum(n, spec.L, hbar, shapes)


# ---------------------------------------------------------------------------
# linear solving over polynomial columns


def _linear_poly_solve(cols, rhs, exact, tol=None):
    """Solve sum_k x_k cols[k] = rhs for scalars x_k.

    Returns the coefficient list, or None if no solution exists.  Raises
    ValueError when the exact solution set is not a single point; the
    numeric path returns the least-squares minimizer when it meets the
    residual tolerance.
    """
    deg = rhs.degree
    for c in cols:
        deg = max(deg, c.degree)
    if deg == NEG_INF:
        return [ZERO if exact else mpmath.mpf(0)] * len(cols)
    nrows = int(deg) + 1
    if exact:
        rows = []
        for r in range(nrows):
            row = [c.c[r] if r < len(c.c) else ZERO for c in cols]
            row.append(-(rhs.c[r] if r < len(rhs.c) else ZERO))
            rows.append(row)
        ns = exact_nullspace(Mat.from_rows(rows))
        sols = [v for v in ns if v[-1] != ZERO]
        if not sols:
            return None
        if len(ns) > 1:
            raise ValueError("underdetermined polynomial linear system")
        v = sols[0]
        inv = ONE / v[-1]
        return [x * inv for x in v[:-1]]
    if not cols:
        sc = _poly_scale(rhs)
        return [] if all(abs(c) <= tol * sc for c in rhs.c) else None
    A = mpmath.matrix(nrows, len(cols))
    b = mpmath.matrix(nrows, 1)
    scale = mpmath.mpf(1)
    for r in range(nrows):
        for k, c in enumerate(cols):
            A[r, k] = c.c[r] if r < len(c.c) else 0
            scale = max(scale, abs(A[r, k]))
        b[r] = rhs.c[r] if r < len(rhs.c) else 0
        scale = max(scale, abs(b[r]))
    try:
        x, _ = mpmath.qr_solve(A, b)
    except (ZeroDivisionError, ValueError):
        return None
    resid = A * x - b
    xnorm = max([abs(v) for v in x] + [mpmath.mpf(1)])
    if max(abs(v) for v in resid) > tol * scale * xnorm:
        return None
    return list(x)


# ---------------------------------------------------------------------------
# the Baxter equation


def _tq_ladders(spec, dual):
    n = spec.n
    hbar = spec.hbar
    if not dual:
        nu1 = spec.nu(1)
        return [_poly_product([poly_shift(nu1, -k, hbar) for k in range(a, n)])
                for a in range(n + 1)]
    nun = spec.nu(n)
    return [_poly_product([poly_shift(nun, b, hbar) for b in range(a + 1, n + 1)])
            for a in range(n + 1)]


def _tq_residual_pieces(spectrum, spec, index, dual):
    """Coefficients A_a(u) and shift offsets so that the Baxter residual of
    a candidate q is sum_a A_a(u) q(u + hbar*off_a)."""
    n = spec.n
    zs = _zs(spec)
    ladders = _tq_ladders(spec, dual)
    exact = spectrum.exact
    pieces = []
    for a in range(n + 1):
        sign = ONE if a % 2 == 0 else -ONE
        if not dual:
            zfac = zs[index - 1] ** (1 - a)
            off = 1 - a
            tpol = spectrum.column(a)
        else:
            zfac = zs[index - 1] ** (-a)
            off = a
            tpol = poly_shift(spectrum.column(a), a,
                              spec.hbar if exact else _num(spec.hbar))
        coeff = ladders[a] * Poly((sign * zfac,))
        coeff = (coeff if exact else coeff.to_mp()) * tpol
        pieces.append((coeff, off))
    return pieces


def _weight_caps(spec, dual):
    """Degree cap for the auto sector search, from the weight spread."""
    total = Fraction(0)
    for rep in spec.reps:
        w = rep.weights
        if dual:
            spread = sum(_as_fraction(w[j]) - _as_fraction(w[-1])
                         for j in range(len(w) - 1))
        else:
            spread = sum(_as_fraction(w[0]) - _as_fraction(w[j])
                         for j in range(1, len(w)))
        if spread.denominator != 1 or spread < 0:
            return None
        total += spread
    return int(total)


def solve_tq(spectrum, spec, M="auto", index=1, dual=False, precision=None):
    """Solve the Baxter equation of one state for a twisted polynomial.

    The default index=1 returns q-hat_1 = z_1^{u/hbar} q_1(u), q_1 monic of
    degree M; other indices give the remaining single-index solutions
    (effective twist z_i), and dual=True solves the mirror equation for the
    dual singles (effective twist det(G)/z_i).

    M="auto" searches magnon sectors upward from zero and keeps the smallest
    sector that admits a solution.  Raises ValueError when no sector works,
    or when the requested sector has no (or no unique) monic solution.
    """
    exact = spectrum.exact
    dps = precision or default_dps()
    tol = None if exact else _tol_for(dps)
    zs = _zs(spec)
    hbar = spec.hbar
    pieces = _tq_residual_pieces(spectrum, spec, index, dual)

    def attempt(m):
        cols = []
        for k in range(m):
            col = Poly(())
            for coeff, off in pieces:
                col = col + coeff * _shifted_monomial(k, off, hbar, exact)
            cols.append(col)
        rhs = Poly(())
        for coeff, off in pieces:
            rhs = rhs - coeff * _shifted_monomial(m, off, hbar, exact)
        return _linear_poly_solve(cols, rhs, exact, tol)

    if M == "auto":
        cap = _weight_caps(spec, dual)
        if cap is None:
            raise ValueError("auto sector search needs nonnegative integer "
                             "weight spreads; pass M explicitly")
        sol = None
        for m in range(cap + 1):
            sol = attempt(m)
            if sol is not None:
                M = m
                break
        if sol is None:
            raise ValueError("no twisted polynomial solves the Baxter "
                             "equation in sectors 0..%d" % cap)
    else:
        sol = attempt(M)
        if sol is None:
            raise ValueError("no monic solution of degree %d" % M)

    q = Poly(list(sol) + [ONE if exact else mpmath.mpf(1)])
    kappa = (_det_twist(zs) / zs[index - 1]) if dual else zs[index - 1]
    if exact:
        return TwistedPoly(kappa, q, hbar)
    q = _chop(q, _tol_for(dps), _poly_scale(q))
    return TwistedPoly(kappa.to_mpc(), q, _num(hbar))


def solve_singles(spectrum, spec, M="auto", precision=None, dual=False):
    """All n single-index Baxter solutions of one state (dual=True: duals)."""
    return [solve_tq(spectrum, spec, M=M, index=i, dual=dual,
                     precision=precision)
            for i in range(1, spec.n + 1)]


def tq_residual(spectrum, spec, qhat, index=1, dual=False):
    """Residual polynomial of the Baxter equation on a candidate q-hat."""
    pieces = _tq_residual_pieces(spectrum, spec, index, dual)
    exact = spectrum.exact
    hb = spec.hbar if exact else _num(spec.hbar)
    out = Poly(())
    for coeff, off in pieces:
        out = out + coeff * poly_shift(qhat.poly, off, hb)
    return out


# ---------------------------------------------------------------------------
# QQ completion


def _qq_gap(spec, m):
    """Polynomials (gnum, gden) with gnum/gden the level-m QQ gap factor;
    None when some per-site weight gap is not an integer."""
    hbar = spec.hbar
    gnum = Poly((ONE,))
    gden = Poly((ONE,))
    for a in range(spec.L):
        w = spec.reps[a].weights
        hi = _as_fraction(w[m])
        lo = _as_fraction(w[m + 1])
        if (hi - lo).denominator != 1:
            return None
        th = as_grat(spec.theta[a])
        if hi >= lo:
            for k in range(int(lo) + 1, int(hi) + 1):
                gnum = gnum * Poly((-th - hbar * grat(k), ONE))
        else:
            for k in range(int(hi) + 1, int(lo) + 1):
                gden = gden * Poly((-th - hbar * grat(k), ONE))
    return gnum, gden


def _pair_factor(zs, i, j):
    """(z_i - z_j)/(z_i z_j) in ascending index order."""
    a, b = min(i, j), max(i, j)
    return (zs[a - 1] - zs[b - 1]) / (zs[a - 1] * zs[b - 1])


def _norm_const(zs, subset):
    out = ONE
    idx = sorted(subset)
    for p in range(len(idx)):
        for q in range(p + 1, len(idx)):
            out = out * _pair_factor(zs, idx[p], idx[q])
    return out


def _perm_sign(seq):
    seq = tuple(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


class QSystem(object):
    """The 2^n family of twisted-polynomial Q-functions of one state.

    Subsets are stored sorted; antisymmetric index order is served by get()
    with the permutation sign.  Q of the empty set is 1 and the full set
    carries twist prod(z).  Subsets whose polynomial part does not exist
    (non-integer weight gaps block the QQ-ladder) are listed in .unavailable
    with a reason string, and get() raises KeyError for them.
    """

    def __init__(self, n, hbar, zs, Q, unavailable=None, exact=True):
        self.n = n
        self.hbar = hbar
        self.z = tuple(zs)
        self.Q = dict(Q)
        self.unavailable = dict(unavailable or {})
        self.exact = exact

    def available(self, indices):
        return frozenset(indices) in self.Q

    def get(self, indices):
        """Q with an arbitrary (ordered, possibly repeating) index string."""
        idx = tuple(indices)
        key = frozenset(idx)
        if len(key) != len(idx):
            kap = ONE if self.exact else mpmath.mpf(1)
            return TwistedPoly(kap, Poly(()), self.hbar)
        if key not in self.Q:
            reason = self.unavailable.get(key, "not computed")
            raise KeyError("Q_%s unavailable: %s" % (sorted(idx), reason))
        tp = self.Q[key]
        if _perm_sign(idx) == 1:
            return tp
        return TwistedPoly(tp.kappa, Poly([-c for c in tp.poly.c]), tp.hbar)

    def chain(self, k):
        return self.get(range(1, k + 1))

    def dual(self, indices):
        """Hodge dual: the complementary Q with the permutation sign of the
        concatenation (complement, indices)."""
        A = tuple(sorted(set(indices)))
        Abar = tuple(sorted(set(range(1, self.n + 1)) - set(A)))
        tp = self.get(Abar)
        if _perm_sign(Abar + A) == -1:
            tp = TwistedPoly(tp.kappa, Poly([-c for c in tp.poly.c]), tp.hbar)
        return tp


def hodge(qsys):
    """All available Hodge duals as a dict frozenset -> TwistedPoly."""
    out = {}
    full = frozenset(range(1, qsys.n + 1))
    for key in qsys.Q:
        A = frozenset(full - key)
        out[A] = qsys.dual(A)
    return out


def _kappa_expected(zs, key, exact):
    out = ONE
    for i in key:
        out = out * zs[i - 1]
    return out if exact else out.to_mpc()


def _scalar_close(a, b, tol):
    if tol is None:
        return a == b
    am = _num(a)
    bm = _num(b)
    return abs(am - bm) <= tol * max(1, abs(bm))


def qq_complete(spec, singles=None, chain=None, precision=None):
    """Complete a QSystem from seed Q-functions via the QQ-relations.

    Seed with either singles (the n single-index twisted polynomials in
    index order) or chain (the nested tower Q_1, Q_12, ..., up to at most
    the level-(n-1) member).  Q of the empty set is 1 and of the full set
    is (prod z)^{u/hbar}, both free.  Every determined subset is
    cross-checked in all rational QQ-relations; inconsistent seeds raise
    ValueError.  Subsets blocked by non-integer weight gaps are marked
    unavailable instead of solved.
    """
    n = spec.n
    zs = _zs(spec)
    for i in range(n):
        for j in range(i + 1, n):
            if zs[i] == zs[j]:
                raise ValueError("QQ completion needs pairwise distinct "
                                 "twist eigenvalues")
    seeds = {}
    if singles is not None:
        for i, tp in enumerate(singles, start=1):
            seeds[frozenset([i])] = tp
    if chain is not None:
        for k, tp in enumerate(chain, start=1):
            seeds[frozenset(range(1, k + 1))] = tp
    if not seeds:
        raise ValueError("qq_complete needs seed Q-functions")
    exact = all(not tp.poly.c or is_exact(tp.poly.c[0])
                for tp in seeds.values())
    dps = precision or default_dps()
    tol = None if exact else _tol_for(dps)
    hb = spec.hbar if exact else _num(spec.hbar)
    one = ONE if exact else mpmath.mpf(1)

    Q = {frozenset(): TwistedPoly(one, Poly((one,)), hb)}
    dg = _det_twist(zs)
    Q[frozenset(range(1, n + 1))] = TwistedPoly(dg if exact else dg.to_mpc(),
                                                Poly((one,)), hb)
    for key, tp in seeds.items():
        kexp = _kappa_expected(zs, key, exact)
        if not _scalar_close(tp.kappa, kexp, tol):
            raise ValueError("seed Q_%s carries twist %s, expected %s"
                             % (sorted(key), tp.kappa, kexp))
        Q[key] = tp

    gaps = {m: _qq_gap(spec, m) for m in range(n - 1)}

    triples = []
    idx_all = range(1, n + 1)
    for size in range(n - 1):
        for A in itertools.combinations(idx_all, size):
            rest = [i for i in idx_all if i not in A]
            for b, c in itertools.combinations(rest, 2):
                triples.append((frozenset(A), b, c))

    progress = True
    while progress:
        progress = False
        for A, b, c in triples:
            if gaps[len(A)] is None:
                continue
            keys = {"Abc": A | {b, c}, "A": A, "Ab": A | {b}, "Ac": A | {c}}
            missing = [name for name, k in keys.items() if k not in Q]
            if len(missing) != 1:
                continue
            got = _qq_solve(hb, zs, Q, A, b, c, gaps[len(A)], missing[0],
                            exact, tol)
            if got is not None:
                Q[keys[missing[0]]] = got
                progress = True

    unavailable = {}
    for size in range(1, n):
        for A in itertools.combinations(idx_all, size):
            if frozenset(A) not in Q:
                unavailable[frozenset(A)] = ("non-integer weight gap "
                                             "obstructs the polynomial "
                                             "QQ-ladder")

    for key, tp in Q.items():
        if tp.poly.c and not _scalar_close(tp.poly.c[-1], one, tol):
            raise ValueError("Q_%s is not monic; inconsistent seeds"
                             % sorted(key))
    for A, b, c in triples:
        if gaps[len(A)] is None:
            continue
        if not all(k in Q for k in (A | {b, c}, A, A | {b}, A | {c})):
            continue
        if not _qq_holds(hb, zs, Q, A, b, c, gaps[len(A)], exact, tol):
            raise ValueError("QQ-relation fails for A=%s b=%d c=%d"
                             % (sorted(A), b, c))
    return QSystem(n, hb, zs, Q, unavailable, exact)


def _qq_sides(hb, zs, Q, A, b, c, gap, exact):
    """Cross-multiplied polynomial sides of the gap-corrected QQ-relation,
    both normalized by the common twist kappa_Ab*kappa_Ac."""
    gnum, gden = gap
    NL = _norm_const(zs, A | {b, c}) * _norm_const(zs, A)
    NR = _norm_const(zs, A | {b}) * _norm_const(zs, A | {c})
    kA = _kappa_expected(zs, A, exact)
    kAb = _kappa_expected(zs, A | {b}, exact)
    kAc = _kappa_expected(zs, A | {c}, exact)
    if not exact:
        gnum, gden = gnum.to_mp(), gden.to_mp()
        NL, NR = NL.to_mpc(), NR.to_mpc()
    one = ONE if exact else mpmath.mpf(1)
    lhs = Q[A | {b, c}].poly * poly_shift(Q[A].poly, -1, hb)
    lhs = lhs * Poly((NL / kA,)) * gnum
    t1 = Q[A | {b}].poly * poly_shift(Q[A | {c}].poly, -1, hb)
    t2 = Q[A | {c}].poly * poly_shift(Q[A | {b}].poly, -1, hb)
    rhs = t1 * Poly((one / kAc,)) - t2 * Poly((one / kAb,))
    rhs = rhs * Poly((NR,)) * gden
    return lhs, rhs


def _qq_holds(hb, zs, Q, A, b, c, gap, exact, tol):
    lhs, rhs = _qq_sides(hb, zs, Q, A, b, c, gap, exact)
    diff = lhs - rhs
    if exact:
        return not diff.c
    sc = max(_poly_scale(lhs), _poly_scale(rhs))
    return all(abs(x) <= tol * sc for x in diff.c)


def _qq_solve(hb, zs, Q, A, b, c, gap, target, exact, tol):
    """Solve one QQ-relation for the single missing member; None on failure."""
    gnum, gden = gap
    NL = _norm_const(zs, A | {b, c}) * _norm_const(zs, A)
    NR = _norm_const(zs, A | {b}) * _norm_const(zs, A | {c})
    kA = _kappa_expected(zs, A, exact)
    kAb = _kappa_expected(zs, A | {b}, exact)
    kAc = _kappa_expected(zs, A | {c}, exact)
    if not exact:
        gnum, gden = gnum.to_mp(), gden.to_mp()
        NL, NR = NL.to_mpc(), NR.to_mpc()
    one = ONE if exact else mpmath.mpf(1)

    if target in ("Abc", "A"):
        t1 = Q[A | {b}].poly * poly_shift(Q[A | {c}].poly, -1, hb)
        t2 = Q[A | {c}].poly * poly_shift(Q[A | {b}].poly, -1, hb)
        rhs = (t1 * Poly((one / kAc,)) - t2 * Poly((one / kAb,)))
        rhs = rhs * Poly((NR,)) * gden
        if target == "Abc":
            den = poly_shift(Q[A].poly, -1, hb) * Poly((NL / kA,)) * gnum
        else:
            den = Q[A | {b, c}].poly * Poly((NL / kA,)) * gnum
        quo, _ = _poly_divmod_checked(rhs, den, exact, tol)
        if quo is None:
            return None
        if target == "Abc":
            return TwistedPoly(_kappa_expected(zs, A | {b, c}, exact), quo, hb)
        return TwistedPoly(kA, poly_shift(quo, 1, hb), hb)

    # difference-equation solve for the missing one of Ab, Ac
    if target == "Ac":
        qfix, kfix, kmiss = Q[A | {b}], kAb, kAc
    else:
        qfix, kfix, kmiss = Q[A | {c}], kAc, kAb
    lhs = Q[A | {b, c}].poly * poly_shift(Q[A].poly, -1, hb)
    lhs = lhs * Poly((NL / kA,)) * gnum
    degL = lhs.degree
    degB = (qfix.poly * gden).degree
    if degL == NEG_INF or degB == NEG_INF:
        return None
    dX = int(degL) - int(degB)
    if dX < 0:
        return None
    qfixm2 = poly_shift(qfix.poly, -1, hb)
    cols = []
    for k in range(dX + 1):
        mono = _monomial(k, exact)
        common = qfix.poly * poly_shift(mono, -1, hb) * Poly((one / kmiss,)) \
            - mono * qfixm2 * Poly((one / kfix,))
        if target == "Ab":
            common = Poly(()) - common
        cols.append(common * Poly((NR,)) * gden)
    try:
        sol = _linear_poly_solve(cols, lhs, exact, tol)
    except ValueError:
        return None
    if sol is None:
        return None
    X = Poly(list(sol))
    if not exact:
        X = _chop(X, tol, _poly_scale(X))
    return TwistedPoly(kmiss, X, hb)


def _poly_divmod_checked(num, den, exact, tol):
    if not den.c:
        return None, None
    quo, rem = num.divmod(den)
    if exact:
        if rem.c:
            return None, None
        return quo, rem
    sc = max(_poly_scale(num), _poly_scale(den) * _poly_scale(quo))
    if rem.c and max(abs(x) for x in rem.c) > tol * sc:
        return None, None
    return _chop(quo, tol, _poly_scale(quo)), rem


def qsystem_from_spectrum(spec, spectrum, M="auto", precision=None):
    """solve_tq for all singles, then qq_complete: one-call Q-system."""
    singles = solve_singles(spectrum, spec, M=M, precision=precision)
    return qq_complete(spec, singles=singles, precision=precision)


# ---------------------------------------------------------------------------
# quantum eigenvalues and tableaux


class LambdaEV(object):
    """One quantum eigenvalue z_factor * num/den; evaluation at a root of
    the denominator (a Bethe root) raises ValueError."""

    def __init__(self, z_factor, num, den, label):
        self.z_factor = z_factor
        self.num = num
        self.den = den
        self.label = label

    def __call__(self, u):
        dv = self.den(u)
        if not dv:
            raise ValueError("quantum eigenvalue %s has a pole at u=%s"
                             % (self.label, u))
        return self.z_factor * self.num(u) / dv


def quantum_eigenvalues(qsys, spec, dual=False):
    """The n quantum eigenvalues (dual=True: the mirror family).

    Lambda_j(u) = z_j nu_j(u) q_{1..j-1}(u-hbar) q_{1..j}(u+hbar)
                  / (q_{1..j-1}(u) q_{1..j}(u));
    the mirror family runs over Hodge-dual chains with reflected shifts,
    Lambda^j(u) = z_{n-j+1} nu_j(u) p_{k-1}(u+hbar) p_k(u-hbar)
                  / (p_{k-1}(u) p_k(u)),  k = n-j+1,
    where p_k is the polynomial part of the dual chain member.
    """
    n = qsys.n
    hb = qsys.hbar
    zs = qsys.z
    exact = qsys.exact
    out = []
    if not dual:
        chain = [qsys.chain(k).poly for k in range(n + 1)]
        for j in range(1, n + 1):
            nu = spec.nu(j)
            if not exact:
                nu = nu.to_mp()
            num = nu * poly_shift(chain[j - 1], -1, hb) \
                * poly_shift(chain[j], 1, hb)
            den = chain[j - 1] * chain[j]
            zf = zs[j - 1] if exact else zs[j - 1].to_mpc()
            out.append(LambdaEV(zf, num, den, "Lambda_%d" % j))
        return out
    duals = [qsys.dual(range(1, k + 1)).poly for k in range(n + 1)]
    for j in range(1, n + 1):
        k = n - j + 1
        nu = spec.nu(j)
        if not exact:
            nu = nu.to_mp()
        num = nu * poly_shift(duals[k - 1], 1, hb) \
            * poly_shift(duals[k], -1, hb)
        den = duals[k - 1] * duals[k]
        zf = zs[k - 1] if exact else zs[k - 1].to_mpc()
        out.append(LambdaEV(zf, num, den, "Lambda^%d" % j))
    return out


def vanishing_points(qsys, spec):
    """Values Lambda_r(theta_alpha + hbar nu^alpha_r) for all r, alpha; each
    should vanish (exactly, or to working precision)."""
    lams = quantum_eigenvalues(qsys, spec)
    out = []
    for r in range(1, qsys.n + 1):
        for a in range(spec.L):
            w = spec.reps[a].weights[r - 1]
            pt = as_grat(spec.theta[a]) + spec.hbar * grat(_as_fraction(w))
            if not qsys.exact:
                pt = pt.to_mpc()
            out.append((r, a, lams[r - 1](pt)))
    return out


def _fillings(lam, allowed, increasing):
    """Semistandard fillings of the diagram lam: rows weakly monotone
    rightward, columns strictly monotone downward; increasing picks the
    direction (False: decreasing rows/columns)."""
    lam = [x for x in lam if x > 0]
    if not lam:
        yield []
        return
    rows = len(lam)

    def rec(fill, r, s):
        if r == rows:
            yield [row[:] for row in fill]
            return
        if s == lam[r]:
            yield from rec(fill, r + 1, 0)
            return
        for v in allowed:
            if s > 0:
                prev = fill[r][s - 1]
                if (v > prev) if not increasing else (v < prev):
                    continue
            if r > 0 and s < lam[r - 1]:
                up = fill[r - 1][s]
                if (v >= up) if not increasing else (v <= up):
                    continue
            fill[r][s] = v
            yield from rec(fill, r, s + 1)

    fill = [[None] * x for x in lam]
    yield from rec(fill, 0, 0)


def tableau_transfer(lams, lam, u, hbar, k=None, star=False, n=None):
    """Transfer eigenvalue of shape lam as a tableau sum over quantum
    eigenvalues lams (output of quantum_eigenvalues).

    star=False: entries from {1..k}, rows weakly decreasing, columns
    strictly decreasing, box (a,s) evaluated at u + hbar(s-a).  star=True:
    entries from {n-k+1..n}, monotonicities reversed, box shift
    u + hbar(a-s).  k defaults to n; k < n gives the k-th rung of the
    Baecklund flow (restricted entry set).
    """
    n = n if n is not None else len(lams)
    kk = n if k is None else k
    ex = is_exact(u)
    hb = hbar if ex else _num(hbar)
    zero = ZERO if ex else mpmath.mpf(0)
    one = ONE if ex else mpmath.mpf(1)
    lam = [x for x in lam if x > 0]
    if len(lam) > kk:
        return zero
    allowed = list(range(1, kk + 1)) if not star \
        else list(range(n - kk + 1, n + 1))
    total = zero
    found = False
    for fill in _fillings(lam, allowed, increasing=star):
        term = one
        for a0, row in enumerate(fill):
            for s0, v in enumerate(row):
                off = (s0 - a0) if not star else (a0 - s0)
                term = term * lams[v - 1](u + hb * grat(off) if ex
                                          else u + hb * off)
        total = total + term
        found = True
    if not found:
        return zero
    return total


# ---------------------------------------------------------------------------
# Wronskian / Baecklund transfer values


def _poly_det(rows):
    k = len(rows)
    if k == 0:
        return Poly((ONE,))
    if k == 1:
        return rows[0][0]
    out = Poly(())
    for j in range(k):
        minor = [[rows[i][jj] for jj in range(k) if jj != j]
                 for i in range(1, k)]
        term = rows[0][j] * _poly_det(minor)
        out = (out + term) if j % 2 == 0 else (out - term)
    return out


def _gamma_ladder(nu, d, hb, star):
    """Gamma-dressing ratio ladder as (num, den) Polys: for d > 0 the
    product of nu at d consecutive shifts, for d < 0 its reciprocal with the
    mirrored shift pattern."""
    num = Poly((nu.c[-1] / nu.c[-1],)) if nu.c else Poly((ONE,))
    den = num
    if d > 0:
        for e in range(d):
            num = num * poly_shift(nu, e if not star else -e, hb)
    elif d < 0:
        if not star:
            for e in range(d, 0):
                den = den * poly_shift(nu, e, hb)
        else:
            for e in range(1, -d + 1):
                den = den * poly_shift(nu, e, hb)
    return num, den


def wronskian_transfer(qsys, spec, lam, u=None, k=None, star=False):
    """Transfer eigenvalue of shape lam as a Wronskian determinant ratio.

    star=False uses the single-index q's:
        T(u) = prod_j ladder(d_j)/ladder(1-j)
               * det(z_i^{d_j} q_i(u + hbar d_j))
               / det(z_i^{1-j} q_i(u + hbar(1-j))),
    d_j = lam_j - j + 1, ladders built from nu_1; star=True uses the Hodge
    duals with reflected shifts and nu_n ladders.  k < n restricts to the
    first k q's (the k-th Baecklund rung); lam with more than k nonzero rows
    gives 0.  Returns a Poly when u is None, else the value at u.
    """
    n = qsys.n
    hb = qsys.hbar
    K = n if k is None else k
    exact = qsys.exact
    lam = [x for x in lam if x > 0]
    if len(lam) > K:
        if u is None:
            return Poly(())
        return ZERO if exact else mpmath.mpf(0)
    dvals = [(lam[j] if j < len(lam) else 0) - j for j in range(K)]
    dbase = [-j for j in range(K)]

    if not star:
        qrows = [qsys.get([i]).poly for i in range(1, K + 1)]
        nu = spec.nu(1)
        sshift = 1
    else:
        qrows = [qsys.dual([i]).poly for i in range(1, K + 1)]
        nu = spec.nu(n)
        sshift = -1
    if not exact:
        nu = nu.to_mp()
    zs = qsys.z

    def build(ds):
        rows = []
        for i in range(K):
            row = []
            for d in ds:
                zf = zs[i] ** d
                if not exact:
                    zf = zf.to_mpc()
                row.append(poly_shift(qrows[i], sshift * d, hb) * Poly((zf,)))
            rows.append(row)
        return _poly_det(rows)

    det_num = build(dvals)
    det_den = build(dbase)

    one = ONE if exact else mpmath.mpf(1)
    gnum, gden = Poly((one,)), Poly((one,))
    for d in dvals:
        a, b = _gamma_ladder(nu, d, hb, star)
        gnum, gden = gnum * a, gden * b
    for d in dbase:
        a, b = _gamma_ladder(nu, d, hb, star)
        gnum, gden = gnum * b, gden * a

    tol = None if exact else _tol_for(default_dps())
    quo, _ = _poly_divmod_checked(det_num * gnum, det_den * gden, exact, tol)
    if quo is None:
        raise ValueError("Wronskian ratio is not polynomial; "
                         "inconsistent Q-system")
    return quo if u is None else quo(u)


def backlund_transfer(qsys, spec, k, lam, u=None, star=False):
    """The k-th Baecklund-flow transfer value: the Wronskian ratio over the
    first k q's (first k duals for star=True)."""
    return wronskian_transfer(qsys, spec, lam, u=u, k=k, star=star)


# ---------------------------------------------------------------------------
# quantisation conditions


def _uniform_weights(spec):
    w0 = tuple(_as_fraction(x) for x in spec.reps[0].weights)
    for rep in spec.reps[1:]:
        if tuple(_as_fraction(x) for x in rep.weights) != w0:
            raise ValueError("quantisation condition implemented for chains "
                             "with one common site representation")
    if any(x.denominator != 1 for x in w0):
        raise ValueError("quantisation condition needs integer weights")
    return [int(x) for x in w0]


def quantisation_check(qsys, spec):
    """det(z_i^{1-j} q_i(u - hbar(j-1))) against its theta-product target.

    The determinant over the single-index q's must be proportional to
    prod_{j=2}^{n} prod_{k=nu_j+1}^{nu_1} Q_theta(u - hbar(k+n-j)); returns
    the proportionality constant, raising ValueError on mismatch."""
    n = qsys.n
    hb = qsys.hbar
    w = _uniform_weights(spec)
    zs = qsys.z
    exact = qsys.exact
    rows = []
    for i in range(1, n + 1):
        qi = qsys.get([i]).poly
        row = []
        for j in range(1, n + 1):
            zf = zs[i - 1] ** (1 - j)
            if not exact:
                zf = zf.to_mpc()
            row.append(poly_shift(qi, -(j - 1), hb) * Poly((zf,)))
        rows.append(row)
    lhs = _poly_det(rows)
    qth = spec.q_theta()
    if not exact:
        qth = qth.to_mp()
    rhs = Poly((ONE if exact else mpmath.mpf(1),))
    for j in range(2, n + 1):
        for kk in range(w[j - 1] + 1, w[0] + 1):
            rhs = rhs * poly_shift(qth, -(kk + n - j), hb)
    return _proportional(lhs, rhs, exact)


def hodge_quantisation_check(qsys, spec):
    """Mirror condition on the Hodge duals: det(z_i^{1-j} q^i(u+hbar(j-1)))
    proportional to prod_{j=1}^{n-1} prod_{k=nu_n+1}^{nu_j}
    Q_theta(u + hbar(j-k))."""
    n = qsys.n
    hb = qsys.hbar
    w = _uniform_weights(spec)
    zs = qsys.z
    exact = qsys.exact
    rows = []
    for i in range(1, n + 1):
        qi = qsys.dual([i]).poly
        row = []
        for j in range(1, n + 1):
            zf = zs[i - 1] ** (1 - j)
            if not exact:
                zf = zf.to_mpc()
            row.append(poly_shift(qi, j - 1, hb) * Poly((zf,)))
        rows.append(row)
    lhs = _poly_det(rows)
    qth = spec.q_theta()
    if not exact:
        qth = qth.to_mp()
    rhs = Poly((ONE if exact else mpmath.mpf(1),))
    for j in range(1, n):
        for kk in range(w[n - 1] + 1, w[j - 1] + 1):
            rhs = rhs * poly_shift(qth, j - kk, hb)
    return _proportional(lhs, rhs, exact)


def _proportional(lhs, rhs, exact):
    if not rhs.c:
        raise ValueError("degenerate quantisation target")
    if not lhs.c:
        raise ValueError("quantisation determinant vanishes identically")
    if lhs.degree != rhs.degree:
        raise ValueError("quantisation condition violated: degree %s vs %s"
                         % (lhs.degree, rhs.degree))
    const = lhs.c[-1] / rhs.c[-1]
    diff = lhs - rhs * Poly((const,))
    if exact:
        if diff.c:
            raise ValueError("quantisation condition violated")
    elif diff.c:
        tol = _tol_for(default_dps())
        if max(abs(x) for x in diff.c) > tol * _poly_scale(lhs):
            raise ValueError("quantisation condition violated")
    return const


# ---------------------------------------------------------------------------
# Drinfeld polynomials


def drinfeld_polys(weight_funcs=None, hbar=None, weights=None, theta=None):
    """Drinfeld polynomials of a highest-weight module, or None.

    Pass weight_funcs as a list of n rational weight functions, each a
    (num, den) pair of Polys with lambda_j = num_j/den_j; or pass
    weights/theta for (products of) evaluation modules, weights being one
    weight tuple or a list of per-site tuples and theta the matching
    inhomogeneities.

    For each j the monic P_j solves P_j(u+hbar)/P_j(u) =
    lambda_{j+1}(u)/lambda_j(u).  Returns [P_1..P_{n-1}], or None when some
    ratio admits no such presentation.
    """
    if hbar is None:
        raise ValueError("drinfeld_polys needs hbar")
    if weight_funcs is None:
        if weights is None:
            raise ValueError("pass weight_funcs or weights")
        if not isinstance(weights[0], (list, tuple)):
            weights = [weights]
            theta = [theta]
        nn = len(weights[0])
        weight_funcs = []
        for j in range(nn):
            num = Poly((ONE,))
            den = Poly((ONE,))
            for a, wt in enumerate(weights):
                th = as_grat(theta[a])
                num = num * Poly((-th - hbar * grat(_as_fraction(wt[j])), ONE))
                den = den * Poly((-th, ONE))
            weight_funcs.append((num, den))
    n = len(weight_funcs)
    out = []
    for j in range(n - 1):
        n1, d1 = weight_funcs[j]
        n2, d2 = weight_funcs[j + 1]
        rnum = n2 * d1
        rden = n1 * d2
        if rnum.degree != rden.degree or rnum.degree == NEG_INF:
            return None
        if rnum.c[-1] != rden.c[-1]:
            return None
        deg = int(rnum.degree)
        sub_n = rnum.c[deg - 1] if deg >= 1 else ZERO
        sub_d = rden.c[deg - 1] if deg >= 1 else ZERO
        dval = (sub_n - sub_d) / (hbar * rnum.c[-1])
        if not dval.is_rational:
            return None
        frac = _as_fraction(dval)
        if frac.denominator != 1 or frac < 0:
            return None
        d = int(frac)
        cols = []
        for kk in range(d):
            mono = _monomial(kk, True)
            cols.append(poly_shift(mono, 1, hbar) * rden - mono * rnum)
        mono = _monomial(d, True)
        rhs = mono * rnum - poly_shift(mono, 1, hbar) * rden
        sol = _linear_poly_solve(cols, rhs, True)
        if sol is None:
            return None
        out.append(Poly(list(sol) + [ONE]))
    return out


# ---------------------------------------------------------------------------
# Bethe roots


def bethe_residual(qsys, spec, precision=None):
    """Nested Bethe-equation residuals at the roots of the chain q's.

    At each root u0 of q_{1..k} the pole cancellation between neighbouring
    quantum eigenvalues requires

        z_k nu_k(u0) q_{k-1}(u0-hbar) q_k(u0+hbar) q_{k+1}(u0)
      + z_{k+1} nu_{k+1}(u0) q_{k-1}(u0) q_k(u0-hbar) q_{k+1}(u0+hbar) = 0.

    Returns a list of (level, root, residual, scale) with mpmath values;
    empty for root-free (vacuum) states."""
    dps = precision or default_dps()
    n = qsys.n
    zs = qsys.z
    out = []
    with workdps(dps):
        hb = _num(qsys.hbar)
        for k in range(1, n):
            qk = qsys.chain(k).poly
            if qk.degree == NEG_INF or qk.degree == 0:
                continue
            qm = qsys.chain(k - 1).poly.to_mp()
            qp = qsys.chain(k + 1).poly.to_mp()
            qkm = qk.to_mp()
            nuk = spec.nu(k).to_mp()
            nuk1 = spec.nu(k + 1).to_mp()
            zk = _num(zs[k - 1])
            zk1 = _num(zs[k])
            for u0 in qk.mp_roots():
                t1 = zk * nuk(u0) * qm(u0 - hb) * qkm(u0 + hb) * qp(u0)
                t2 = zk1 * nuk1(u0) * qm(u0) * qkm(u0 - hb) * qp(u0 + hb)
                scale = max(abs(t1), abs(t2), mpmath.mpf(1))
                out.append((k, u0, t1 + t2, scale))
    return out


def twisted_close(a, b, tol=None):
    """Coefficient-wise comparison of twisted polynomials after matching the
    twist; a twist mismatch is an immediate inequality."""
    if tol is None:
        return a == b
    if not _scalar_close(a.kappa, b.kappa, tol):
        return False
    pa, pb = a.poly.to_mp(), b.poly.to_mp()
    sc = max(_poly_scale(pa), _poly_scale(pb))
    for k in range(max(len(pa.c), len(pb.c))):
        ca = pa.c[k] if k < len(pa.c) else 0
        cb = pb.c[k] if k < len(pb.c) else 0
        if abs(ca - cb) > tol * sc:
            return False
    return True
