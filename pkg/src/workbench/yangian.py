"""Lax operators, twisted monodromies, quantum minors, fused transfers.

Conventions (fixed once, used everywhere):
  * R(u,v) = (u-v)I - hbar P  (polynomial normalization, P = permutation);
  * Lax  L(u-theta) = (u-theta)I - hbar sum_ij e_ij (x) E_ji;
  * monodromy T(u) = L(u-theta_1) ... L(u-theta_L) G, site 1 leftmost,
    twist G multiplying on the right;
  * quantum minors antisymmetrize the upper indices with *descending*
    shifts: T[A;B](u) = sum_s sgn(s) T_{a_s(1) b_1}(u) T_{a_s(2) b_2}(u-h)
    ... T_{a_s(k) b_k}(u-(k-1)h).
"""

import itertools
import warnings

from .scalars import GRat, ZERO, ONE, I, as_grat, grat
from .poly import Poly
from .linalg import (Mat, kron, perm_matrix_p, young_symmetrizer,
                     young_contents, exact_rank)
from .reps import RepSpec, rep_matrices


# ----------------------------------------------------------- OperatorPoly


class OpPoly:
    """Polynomial in the spectral parameter with square-matrix coefficients."""

    __slots__ = ("c", "dim")

    def __init__(self, coeffs, dim=None):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        if not coeffs:
            if dim is None:
                raise ValueError("zero OpPoly needs an explicit dimension")
            self.dim = dim
        else:
            self.dim = coeffs[0].nr
        self.c = coeffs

    @classmethod
    def zero(cls, dim):
        return cls([], dim)

    @classmethod
    def const(cls, mat):
        return cls([mat], mat.nr)

    @classmethod
    def one(cls, dim):
        return cls([Mat.eye(dim)], dim)

    @property
    def degree(self):
        return len(self.c) - 1

    def coeff(self, k):
        return self.c[k] if k < len(self.c) else Mat.zeros(self.dim)

    def __add__(self, other):
        n = max(len(self.c), len(other.c))
        return OpPoly([self.coeff(k) + other.coeff(k) for k in range(n)],
                      self.dim)

    def __sub__(self, other):
        n = max(len(self.c), len(other.c))
        return OpPoly([self.coeff(k) - other.coeff(k) for k in range(n)],
                      self.dim)

    def __neg__(self):
        return OpPoly([-m for m in self.c], self.dim)

    def __matmul__(self, other):
        if not self.c or not other.c:
            return OpPoly.zero(self.dim)
        out = [None] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if a.is_zero():
                continue
            for j, b in enumerate(other.c):
                if b.is_zero():
                    continue
                p = a @ b
                out[i + j] = p if out[i + j] is None else out[i + j] + p
        return OpPoly([m if m is not None else Mat.zeros(self.dim)
                       for m in out], self.dim)

    def scale(self, s):
        """Multiply by a scalar or a scalar Poly."""
        if isinstance(s, Poly):
            if not s.c or not self.c:
                return OpPoly.zero(self.dim)
            out = [Mat.zeros(self.dim)
                   for _ in range(len(self.c) + len(s.c) - 1)]
            for i, a in enumerate(self.c):
                for j, b in enumerate(s.c):
                    if b:
                        out[i + j] = out[i + j] + a * b
            return OpPoly(out, self.dim)
        s = as_grat(s)
        return OpPoly([m * s for m in self.c], self.dim)

    def shift(self, k, hbar):
        """u -> u + k*hbar, exactly."""
        if not k or not self.c:
            return self
        h = as_grat(hbar) * grat(k)
        # repeated synthetic division (Taylor shift)
        work = list(self.c)
        n = len(work)
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                work[j] = work[j] + work[j + 1] * h
        return OpPoly(work, self.dim)

    def __call__(self, u):
        u = as_grat(u)
        if not self.c:
            return Mat.zeros(self.dim)
        acc = self.c[-1]
        for m in reversed(self.c[:-1]):
            acc = acc * u + m
        return acc

    def trace(self):
        return Poly([m.trace() for m in self.c])

    def is_zero(self):
        return not self.c

    def __eq__(self, other):
        return isinstance(other, OpPoly) and (self - other).is_zero()

    def __repr__(self):
        return "OpPoly(dim=%d, degree=%d)" % (self.dim, self.degree)


class TMat:
    """n x n auxiliary-space matrix whose entries are OpPoly's."""

    def __init__(self, n, dim, entries, hbar):
        self.n = n
        self.dim = dim
        self.e = entries  # dict (i, j) 1-indexed -> OpPoly
        self.hbar = hbar

    def entry(self, i, j):
        return self.e.get((i, j)) or OpPoly.zero(self.dim)

    def __matmul__(self, other):
        ent = {}
        for i in range(1, self.n + 1):
            for j in range(1, self.n + 1):
                acc = OpPoly.zero(self.dim)
                for k in range(1, self.n + 1):
                    a, b = self.e.get((i, k)), other.e.get((k, j))
                    if a is None or b is None or a.is_zero() or b.is_zero():
                        continue
                    acc = acc + (a @ b)
                ent[(i, j)] = acc
        return TMat(self.n, self.dim, ent, self.hbar)

    def right_twist(self, g):
        """Multiply by a scalar auxiliary-space matrix on the right."""
        ent = {}
        for i in range(1, self.n + 1):
            for j in range(1, self.n + 1):
                acc = OpPoly.zero(self.dim)
                for k in range(1, self.n + 1):
                    a = self.e.get((i, k))
                    s = g[k - 1, j - 1]
                    if a is None or a.is_zero() or not s:
                        continue
                    acc = acc + a.scale(s)
                ent[(i, j)] = acc
        return TMat(self.n, self.dim, ent, self.hbar)

    def eval_big(self, u):
        """Evaluate to a matrix on aux (x) physical, aux index major."""
        n, d = self.n, self.dim
        big = Mat.zeros(n * d)
        for (i, j), p in self.e.items():
            blk = p(u)
            for r in range(d):
                for c in range(d):
                    v = blk[r, c]
                    if v:
                        big[(i - 1) * d + r, (j - 1) * d + c] = v
        return big

    def trace(self):
        acc = OpPoly.zero(self.dim)
        for i in range(1, self.n + 1):
            acc = acc + self.entry(i, i)
        return acc


# ------------------------------------------------------------- chain spec


def elementary_symmetric(zs):
    """All elementary symmetric polynomials e_0..e_n of the list."""
    es = [ONE]
    for z in zs:
        es = [es[0]] + [es[k] + es[k - 1] * z for k in range(1, len(es))] \
            + [es[-1] * z]
    return es


def mct_default_w(n):
    """Generic auxiliary parameters (2, 3, ...) used when none are given."""
    return [grat(k) for k in range(2, n + 1)]


def mct(z, w=None):
    """Modified companion twist: G_ij = chi_j d_i1 / w_{|j-1|} + d_{i,j+1} w_j
    with w_{|j|} = (-1)^j w_1 ... w_j and chi_j = e_j(z)."""
    z = [as_grat(x) for x in z]
    n = len(z)
    if len(set(z)) < n:
        warnings.warn("repeated twist eigenvalues: companion frame degenerate")
    w = mct_default_w(n) if w is None else [as_grat(x) for x in w]
    if len(w) != n - 1:
        raise ValueError("need n-1 auxiliary twist parameters")
    if any(not x for x in w):
        raise ValueError("auxiliary twist parameters must be nonzero")
    chi = elementary_symmetric(z)
    wabs = [ONE]
    for j in range(1, n):
        wabs.append(-wabs[-1] * w[j - 1])
    g = Mat.zeros(n)
    for j in range(1, n + 1):
        g[0, j - 1] = chi[j] / wabs[j - 1]
        if j + 1 <= n:
            g[j, j - 1] = w[j - 1]
    return g


class ChainSpec:
    """Inhomogeneous twisted gl(n) spin chain."""

    def __init__(self, n, length, site_reps, theta, hbar=I, twist=None,
                 twist_info=None):
        self.n = n
        self.L = length
        reps = []
        for r in site_reps:
            if isinstance(r, RepSpec):
                reps.append(rep_matrices(r))
            else:
                reps.append(r)
        self.reps = reps
        if len(theta) != length:
            raise ValueError("need one inhomogeneity per site")
        self.theta = [as_grat(t) for t in theta]
        self.hbar = as_grat(hbar)
        self.twist = Mat.eye(n) if twist is None else twist
        self.twist_info = twist_info or {}
        self.dims = [r.dim for r in reps]
        self.chain_dim = 1
        for d in self.dims:
            self.chain_dim *= d

    @classmethod
    def from_json(cls, obj):
        from .scalars import parse_exact
        n = int(obj["rank"])
        length = int(obj["length"])
        sites = obj.get("sites")
        ncp = obj.get("noncompact")
        if sites is None:
            if ncp is None:
                sites = [{"kind": "defining"}] * length
            else:
                sites = [{"kind": "noncompact-sym",
                          "params": {"s": parse_exact(str(ncp["s"])),
                                     "Nmax": int(ncp["Nmax"])}}] * length

        def scal(x):
            return parse_exact(x) if isinstance(x, str) else grat(x)

        reps = []
        for s in sites:
            if isinstance(s, dict):
                p = dict(s.get("params", {}))
                for key in ("s",):
                    if key in p and isinstance(p[key], str):
                        p[key] = parse_exact(p[key])
                if "lam" in p:
                    p["lam"] = [scal(x) for x in p["lam"]]
                reps.append(RepSpec(n, s["kind"], p))
            else:
                reps.append(RepSpec(n, s))
        theta = [scal(t) for t in obj["theta"]]
        hbar = scal(obj.get("hbar", "i"))
        tw = obj.get("twist", {})
        frame = tw.get("frame", "diagonal") if isinstance(tw, dict) else tw
        info = {"frame": frame}
        if frame in ("diagonal", "diag"):
            zs = [scal(x) for x in tw.get("z", [1] * n)]
            g = Mat.diag(zs)
            info["z"] = zs
        elif frame in ("mct", "MCT", "companion"):
            zs = [scal(x) for x in tw.get("z", [1] * n)]
            ws = tw.get("w")
            ws = [scal(x) for x in ws] if ws is not None \
                else mct_default_w(n)
            g = mct(zs, ws)
            info["z"] = zs
            info["w"] = ws
        elif frame in ("custom", "matrix"):
            rows = tw["matrix"]
            g = Mat.from_rows([[scal(x) for x in row] for row in rows])
        else:
            raise ValueError("unknown twist frame %r" % frame)
        return cls(n, length, reps, theta, hbar, g, info)

    def embed(self, alpha, m):
        """Embed a site-alpha operator into the full chain space."""
        out = m
        if alpha > 0:
            left = 1
            for d in self.dims[:alpha]:
                left *= d
            out = kron(Mat.eye(left), out)
        if alpha < self.L - 1:
            right = 1
            for d in self.dims[alpha + 1:]:
                right *= d
            out = kron(out, Mat.eye(right))
        return out

    def nu(self, j):
        """Weight function nu_j(u) = prod_a (u - theta_a - hbar nu^a_j)."""
        roots = [self.theta[a] + self.hbar * self.reps[a].weights[j - 1]
                 for a in range(self.L)]
        return Poly.from_roots(roots)

    def q_theta(self):
        return Poly.from_roots(self.theta)

    def vacuum(self, lowest=False):
        """Column vector: tensor product of per-site extremal vectors."""
        vecs = [(r.lowest_vector() if lowest else r.highest_vector())
                for r in self.reps]
        out = vecs[0] if vecs else Mat.eye(1)
        for v in vecs[1:]:
            out = kron(out, v)
        return out


# ------------------------------------------------------------- monodromy


def yang_r(u, v, n, hbar=I):
    """Rational R-matrix (u-v) I - hbar P on C^n (x) C^n."""
    d = as_grat(u) - as_grat(v)
    return Mat.eye(n * n) * d - perm_matrix_p(n) * as_grat(hbar)


def lax(rep, theta, hbar, embed=None):
    """Lax matrix (u - theta) - hbar sum e_ij (x) E_ji as a TMat.

    `embed` maps site operators into the chain space (identity if None).
    """
    theta = as_grat(theta)
    hbar = as_grat(hbar)
    if embed is None:
        embed = lambda m: m
    eye = embed(Mat.eye(rep.dim))
    dim = eye.nr
    ent = {}
    for i in range(1, rep.n + 1):
        for j in range(1, rep.n + 1):
            low = embed(rep.E(j, i)) * (-hbar)
            if i == j:
                low = low - eye * theta
                ent[(i, j)] = OpPoly([low, eye])
            else:
                ent[(i, j)] = OpPoly.const(low)
    return TMat(rep.n, dim, ent, hbar)


def monodromy(spec, twisted=True):
    """T(u) = L^(1)(u - theta_1) ... L^(L)(u - theta_L) G, site 1 leftmost."""
    n = spec.n
    if spec.L == 0:
        ent = {(i, j): OpPoly.const(Mat.eye(1) * spec.twist[i - 1, j - 1])
               for i in range(1, n + 1) for j in range(1, n + 1)}
        return TMat(n, 1, ent, spec.hbar)
    prod = None
    for alpha in range(spec.L):
        fac = lax(spec.reps[alpha], spec.theta[alpha], spec.hbar,
                  embed=lambda m, a=alpha: spec.embed(a, m))
        prod = fac if prod is None else prod @ fac
    if twisted:
        prod = prod.right_twist(spec.twist)
    return prod


# --------------------------------------------------------- quantum minors


def quantum_minor(tm, rows, cols):
    """T[rows; cols](u), antisymmetrized over the upper (row) indices with
    descending shifts u, u-h, ..., u-(k-1)h."""
    rows, cols = list(rows), list(cols)
    if len(rows) != len(cols):
        raise ValueError("minor needs equal index counts")
    k = len(rows)
    if len(set(rows)) < k or len(set(cols)) < k:
        return OpPoly.zero(tm.dim)
    acc = OpPoly.zero(tm.dim)
    for sigma in itertools.permutations(range(k)):
        sgn = _perm_sign_tuple(sigma)
        term = None
        for m in range(k):
            f = tm.entry(rows[sigma[m]], cols[m]).shift(-m, tm.hbar)
            term = f if term is None else term @ f
        acc = acc + term if sgn > 0 else acc - term
    return acc


def quantum_minor_alt(tm, rows, cols):
    """Equivalent presentation: antisymmetrize the lower indices, shifts
    ascending from u-(k-1)h back to u."""
    rows, cols = list(rows), list(cols)
    k = len(rows)
    if len(set(rows)) < k or len(set(cols)) < k:
        return OpPoly.zero(tm.dim)
    acc = OpPoly.zero(tm.dim)
    for sigma in itertools.permutations(range(k)):
        sgn = _perm_sign_tuple(sigma)
        term = None
        for m in range(k):
            f = tm.entry(rows[m], cols[sigma[m]]).shift(-(k - 1 - m),
                                                        tm.hbar)
            term = f if term is None else term @ f
        acc = acc + term if sgn > 0 else acc - term
    return acc


def _perm_sign_tuple(sigma):
    sgn = 1
    seen = [False] * len(sigma)
    for s in range(len(sigma)):
        if seen[s]:
            continue
        ln = 0
        t = s
        while not seen[t]:
            seen[t] = True
            t = sigma[t]
            ln += 1
        if ln % 2 == 0:
            sgn = -sgn
    return sgn


def qdet(tm):
    idx = list(range(1, tm.n + 1))
    return quantum_minor(tm, idx, idx)


def transfer_antisym(tm, a):
    """T_{a,1}(u) = sum of principal a x a quantum minors."""
    if a < 0:
        return OpPoly.zero(tm.dim)
    if a == 0:
        return OpPoly.one(tm.dim)
    if a > tm.n:
        return OpPoly.zero(tm.dim)
    acc = OpPoly.zero(tm.dim)
    for sub in itertools.combinations(range(1, tm.n + 1), a):
        acc = acc + quantum_minor(tm, sub, sub)
    return acc


def talalaev_coeffs(tm):
    """Coefficients C_a of det(1 - T(u) D^{-1}) = sum_a (-1)^a C_a D^{-a}.

    Expanded as a column determinant, tracking how each D^{-1} shifts the
    arguments of the factors to its right; independent bookkeeping from
    quantum_minor, used as a cross-check of the minor conventions.
    """
    n = tm.n
    out = [OpPoly.zero(tm.dim) for _ in range(n + 1)]
    out[0] = OpPoly.one(tm.dim)
    for a in range(1, n + 1):
        acc = OpPoly.zero(tm.dim)
        for pos in itertools.combinations(range(1, n + 1), a):
            for tau in itertools.permutations(range(a)):
                sgn = _perm_sign_tuple(tau)
                term = None
                for m in range(a):
                    f = tm.entry(pos[tau[m]], pos[m]).shift(-m, tm.hbar)
                    term = f if term is None else term @ f
                acc = acc + term if sgn > 0 else acc - term
        out[a] = acc
    return out


# ------------------------------------------------------ CBR and T-system


def _conjugate(lam):
    lam = [x for x in lam if x > 0]
    if not lam:
        return []
    return [sum(1 for r in lam if r > c) for c in range(lam[0])]


def transfer_cbr(tm, lam, mu=None, cache=None):
    """CBR determinant T_{lam/mu}(u) = det T_{lam'_j + i - j - mu'_i, 1}
    (u + h (i - 1 - mu'_i)) over i, j = 1..lam_1.

    `cache` may hold antisymmetric transfers across calls on the same tm."""
    lam = [x for x in lam if x > 0]
    if not lam:
        return OpPoly.one(tm.dim)
    if len(lam) > tm.n and mu is None:
        # column height exceeds n: vanishing transfer
        return OpPoly.zero(tm.dim)
    width = lam[0]
    lamp = _conjugate(lam)
    mup = _conjugate(mu or [])
    mup = mup + [0] * (width - len(mup))
    if cache is None:
        cache = {}

    def t_a1(a, shift):
        if a < 0:
            return None
        key = (a, shift)
        if key not in cache:
            base = cache.get((a, 0))
            if base is None:
                base = transfer_antisym(tm, a)
                cache[(a, 0)] = base
            cache[key] = base.shift(shift, tm.hbar)
        return cache[key]

    acc = OpPoly.zero(tm.dim)
    for sigma in itertools.permutations(range(width)):
        sgn = _perm_sign_tuple(sigma)
        term = OpPoly.one(tm.dim)
        dead = False
        for i in range(width):  # row index i+1, column sigma(i)+1
            j = sigma[i]
            a = lamp[j] + i - j - mup[i]
            f = t_a1(a, i - mup[i])
            if f is None or f.is_zero():
                dead = True
                break
            term = term @ f
        if dead:
            continue
        acc = acc + term if sgn > 0 else acc - term
    return acc


def check_hirota(tm, a, s):
    """Residual of T_{a,s} T^{[2]}_{a,s} - T^{[2]}_{a+1,s} T_{a-1,s}
    - T_{a,s+1} T^{[2]}_{a,s-1} (rectangular diagrams, T_{0,s}=T_{a,0}=1)."""
    def rect(aa, ss):
        if aa == 0 or ss == 0:
            return OpPoly.one(tm.dim)
        return transfer_cbr(tm, [ss] * aa)

    lhs = rect(a, s) @ rect(a, s).shift(1, tm.hbar)
    r1 = rect(a + 1, s).shift(1, tm.hbar) @ rect(a - 1, s)
    r2 = rect(a, s + 1) @ rect(a, s - 1).shift(1, tm.hbar)
    return lhs - r1 - r2


# -------------------------------------------------------- fused transfer


def fused_transfer(spec, lam):
    """Trace of the Young-fused monodromy
    P^lam  T_1(u + h c_1) ... T_m(u + h c_m), auxiliary slots in
    column-major box order with contents c_j = col - row.

    Computed as tr(P X) = sum_{I,J} P[I,J] X[J,I] with the product
    X[J,I] = prod_t T_{j_t i_t}(u + h c_t); suffix products are memoized
    so no matrix products on the full aux (x) physical space are needed."""
    lam = [x for x in lam if x > 0]
    tm = monodromy(spec)
    n, d, h = spec.n, tm.dim, spec.hbar
    m = sum(lam)
    contents = young_contents(lam)
    proj = young_symmetrizer(lam, n)
    naux = n ** m
    shifted = [{key: p.shift(c, h) for key, p in tm.e.items()}
               for c in contents]

    def digits(idx):
        out = []
        for _ in range(m):
            out.append(idx % n)
            idx //= n
        out.reverse()
        return tuple(x + 1 for x in out)

    digit_cache = [digits(idx) for idx in range(naux)]
    suffix_cache = {}

    def suffix(t, key):
        """Product T^{(t)}_{key[0]} ... T^{(m-1)}_{key[m-1-t]}."""
        got = suffix_cache.get((t, key))
        if got is not None:
            return got
        head = shifted[t][key[0]]
        out = head if t == m - 1 else head @ suffix(t + 1, key[1:])
        suffix_cache[(t, key)] = out
        return out

    acc = OpPoly.zero(d)
    for ii in range(naux):
        di = digit_cache[ii]
        for jj in range(naux):
            w = proj[ii, jj]
            if not w:
                continue
            dj = digit_cache[jj]
            key = tuple((dj[t], di[t]) for t in range(m))
            acc = acc + suffix(0, key).scale(w)
    return acc


def projector_absorbs(spec, lam):
    """Check P (prod_j T_j) == P (prod_j T_j) P  (projection survival)."""
    lam = [x for x in lam if x > 0]
    tm = monodromy(spec)
    n, d, h = spec.n, tm.dim, spec.hbar
    m = sum(lam)
    contents = young_contents(lam)
    proj = kron(young_symmetrizer(lam, n), Mat.eye(d))
    big = None
    for slot in range(m):
        shifted = {key: p.shift(contents[slot], h)
                   for key, p in tm.e.items()}
        naux = n ** m
        deg = max(p.degree for p in shifted.values())
        coeffs = [Mat.zeros(naux * d) for _ in range(deg + 1)]
        left, right = n ** slot, n ** (m - slot - 1)
        for (i, j), p in shifted.items():
            for k, cmat in enumerate(p.c):
                if cmat.is_zero():
                    continue
                aux = Mat.unit(n, i - 1, j - 1)
                if left > 1:
                    aux = kron(Mat.eye(left), aux)
                if right > 1:
                    aux = kron(aux, Mat.eye(right))
                coeffs[k] = coeffs[k] + kron(aux, cmat)
        fac = OpPoly(coeffs, naux * d)
        big = fac if big is None else big @ fac
    lhs = OpPoly([proj @ c for c in big.c], big.dim)
    rhs = OpPoly([c @ proj for c in lhs.c], big.dim)
    return lhs == rhs


# ------------------------------------------------------------ extras


def xxx_hamiltonian(spec):
    """First logarithmic derivative t(h/2)^{-1} t'(h/2) of the fundamental
    transfer matrix for a homogeneous defining-representation chain with
    theta_a = -hbar/2.  For trivial twist this equals the periodic
    permutation sum  sum_a P_{a,a+1}  exactly (no rescaling, no shift)."""
    from .linalg import exact_inverse
    if any(r.kind != "defining" for r in spec.reps):
        raise ValueError("Hamiltonian defined for defining-rep chains")
    want = -spec.hbar / grat(2)
    if any(t != want for t in spec.theta):
        raise ValueError("homogeneous chain with theta = -hbar/2 required")
    t = transfer_antisym(monodromy(spec), 1)
    tp = OpPoly([t.coeff(k) * grat(k) for k in range(1, t.degree + 1)],
                t.dim)
    pt = spec.hbar / grat(2)
    inv = exact_inverse(t(pt))
    if inv is None:
        raise ValueError("transfer matrix not invertible at hbar/2")
    return inv @ tp(pt)


def permutation_sum(spec):
    """sum_a P_{a,a+1} (periodic) on a defining-representation chain."""
    perm = perm_matrix_p(spec.n)
    acc = Mat.zeros(spec.chain_dim)
    for a in range(spec.L):
        acc = acc + _two_site(spec, a, (a + 1) % spec.L, perm)
    return acc


def _two_site(spec, a, b, op):
    """Embed a two-site operator acting on (possibly non-adjacent) a < b
    or wrapped (b < a) pairs of defining sites."""
    n, L = spec.n, spec.L
    dims = spec.dims
    big = Mat.zeros(spec.chain_dim)
    # op indexed by (i a, i b; j a, j b) with each in 0..n-1
    for ia in range(n):
        for ib in range(n):
            for ja in range(n):
                for jb in range(n):
                    v = op[ia * n + ib, ja * n + jb]
                    if not v:
                        continue
                    fac = None
                    for site in range(L):
                        if site == a:
                            m = Mat.unit(n, ia, ja)
                        elif site == b:
                            m = Mat.unit(n, ib, jb)
                        else:
                            m = Mat.eye(dims[site])
                        fac = m if fac is None else kron(fac, m)
                    big = big + fac * v
    return big


def special_point_transfer(spec, lam, alpha):
    """Evaluate T_lam at theta_alpha + hbar nu^alpha_n and classify.

    The transfer matrix at this point is invertible iff lam fits inside
    the reduced weight diagram nu^alpha - nu^alpha_n of site alpha.
    """
    tm = monodromy(spec)
    point = spec.theta[alpha] + spec.hbar * spec.reps[alpha].weights[-1]
    mat = transfer_cbr(tm, lam)(point)
    if mat.is_zero():
        return {"status": "zero", "rank": 0, "point": point, "matrix": mat}
    r = exact_rank(mat)
    status = "invertible" if r == mat.nr else "other"
    return {"status": status, "rank": r, "point": point, "matrix": mat}
