"""Separation of variables for the companion-twisted chain.

Everything here lives in the companion-twist frame: the twist matrix is
G_ij = chi_j delta_{i1} / w_{|j-1|} + delta_{i,j+1} w_j with w_{|j|} =
(-1)^j w_1 .. w_j.  The operators B(u), C(u) and the Gelfand-Tsetlin
generators are built from the *bare* (untwisted) monodromy entries; the
auxiliary parameters w only enter as coefficients of the minor words and
as the frame data used by the generating transfers.

Left states are covectors labelled by tuples of per-site GT patterns
(rows top first).  The separated values sit on the *dual* diagonals,

    mu_kj = lam_{n-k+j-1, j},     x^a_kj = theta_a + hbar (mu_kj - j + 1),

and the right states use the *main* diagonals

    mu_kj = lam_{n+j-k-1, n-k},   y^a_kj = theta_a + hbar (mu_kj + j - 1).

Compact generation runs over embedded gl(k+1) windows of the bare
monodromy, re-twisted by companion matrices with auxiliary eigenvalues
(the states do not depend on those eigenvalues) and the w-tail of the
chain frame.  Truncated (lowest-weight -s, then s, ..., s) chains are
generated from the highest-weight vector instead: rectangular transfers
T_{n-1,m}(theta + hbar(n - s - m)) on the left, complementary (starred)
skew transfers at theta - hbar s on the right.
"""

import itertools
import warnings
from fractions import Fraction

from .scalars import ZERO, ONE, as_grat, grat
from .poly import Poly
from .linalg import Mat, exact_det, exact_nullspace, exact_solve
from .reps import gt_patterns
from .yangian import (OpPoly, TMat, mct, mct_default_w, monodromy,
                      quantum_minor, transfer_antisym, transfer_cbr)


def _int(x):
    g = as_grat(x)
    if g.im or g.re.denominator != 1:
        raise ValueError("expected an integer, got %r" % (x,))
    return int(g.re)


def _require_mct(spec):
    """Check the chain is in the companion frame; return the w parameters."""
    info = spec.twist_info or {}
    if info.get("frame") not in ("mct", "MCT", "companion"):
        raise ValueError("separated operators need the companion-twist "
                         "frame (twist_info frame 'mct')")
    w = info.get("w")
    w = mct_default_w(spec.n) if w is None else [as_grat(x) for x in w]
    if len(w) != spec.n - 1:
        raise ValueError("need n-1 auxiliary twist parameters")
    return w


# ------------------------------------------------------------ minor words


def b_minor_word(n, w):
    """Terms of B(u) as (coefficient, factors), factor = (rows, cols, shift).

    One term per chain (J_1, ..., J_{n-1}) of subsets J_k of {1..n-1} with
    |J_k| = k; the k-th factor is the size-k minor T[J_k; {1} u (J_{k-1}+1)]
    shifted by (k-1) hbar, with coefficient prod_k w_{J_k} / prod_k w_1..w_k.
    """
    w = [as_grat(x) for x in w]
    if len(w) != n - 1:
        raise ValueError("need n-1 companion parameters")
    den = ONE
    for k in range(1, n):
        for a in range(1, k + 1):
            den = den * w[a - 1]
    word = []
    pools = [itertools.combinations(range(1, n), k) for k in range(1, n)]
    for chain in itertools.product(*pools):
        num = ONE
        for js in chain:
            for a in js:
                num = num * w[a - 1]
        factors = []
        for k in range(1, n):
            cols = (1,) if k == 1 else \
                (1,) + tuple(a + 1 for a in chain[k - 2])
            factors.append((chain[k - 1], cols, k - 1))
        word.append((num / den, tuple(factors)))
    return word


def star_map(word):
    """The * anti-automorphism on a minor word: factor order reverses and a
    size-a minor at shift r moves to shift a-1-r."""
    out = []
    for coeff, factors in word:
        out.append((coeff, tuple((rows, cols, len(rows) - 1 - shift)
                                 for rows, cols, shift in reversed(factors))))
    return out


def eval_minor_word(tm, word):
    """Evaluate a minor word against a monodromy TMat."""
    cache = {}
    acc = OpPoly.zero(tm.dim)
    for coeff, factors in word:
        term = OpPoly.one(tm.dim)
        for rows, cols, shift in factors:
            key = (tuple(rows), tuple(cols), shift)
            f = cache.get(key)
            if f is None:
                base = cache.get(key[:2] + (0,))
                if base is None:
                    base = quantum_minor(tm, rows, cols)
                    cache[key[:2] + (0,)] = base
                f = base.shift(shift, tm.hbar) if shift else base
                cache[key] = f
            term = term @ f
        acc = acc + (term.scale(coeff) if coeff != ONE else term)
    return acc


def b_operator(spec, u=None):
    """B(u), monic of degree L n(n-1)/2, from bare monodromy minors."""
    w = _require_mct(spec)
    bare = monodromy(spec, twisted=False)
    op = eval_minor_word(bare, b_minor_word(spec.n, w))
    return op if u is None else op(u)


def c_operator(spec, u=None):
    """C(u) = B*(u): reversed factor order, all minors unshifted."""
    w = _require_mct(spec)
    bare = monodromy(spec, twisted=False)
    op = eval_minor_word(bare, star_map(b_minor_word(spec.n, w)))
    return op if u is None else op(u)


def gt_generators(spec, a, u=None):
    """GT_a(u): principal a x a quantum minor of the bare monodromy."""
    if not 1 <= a <= spec.n:
        raise ValueError("GT level must lie in 1..n")
    bare = monodromy(spec, twisted=False)
    op = quantum_minor(bare, range(1, a + 1), range(1, a + 1))
    return op if u is None else op(u)


# --------------------------------------------------------- starred shapes


def star_skew(lam, mu=(), r=None):
    """Complement of the skew shape lam/mu in the r x r square, rotated by
    180 degrees: returns (Lam, Mu) with Lam'_j = r - mu'_{r+1-j} and
    Mu'_i = r - lam'_{r+1-i}.  The plain skew transfer of (Lam, Mu) is the
    starred transfer of lam/mu; the result does not depend on admissible r.
    """
    lam = [x for x in (_int(v) for v in lam) if x]
    mu = [x for x in (_int(v) for v in mu) if x]
    for p in (lam, mu):
        if any(a < 0 for a in p) or any(p[i] < p[i + 1]
                                        for i in range(len(p) - 1)):
            raise ValueError("arguments must be partitions")
    if len(mu) > len(lam) or any(m > l for m, l in zip(mu, lam)):
        raise ValueError("mu must sit inside lam")
    need = max([1, len(lam)] + lam[:1])
    if r is None:
        r = need
    elif r < need:
        raise ValueError("square of size %d cannot hold the shape" % r)

    def conjp(p):
        return [sum(1 for x in p if x > c) for c in range(r)]

    lamp, mup = conjp(lam), conjp(mu)
    lam_star = [r - mup[r - j] for j in range(1, r + 1)]
    mu_star = [r - lamp[r - i] for i in range(1, r + 1)]

    def unconj(pp):
        top = pp[0] if pp else 0
        return tuple(sum(1 for x in pp if x >= c) for c in range(1, top + 1))

    return unconj(lam_star), unconj(mu_star)


# ------------------------------------------------------- separated labels


def dual_diagonal(pattern, k):
    """mu_kj = lam_{n-k+j-1, j} for j = 1..k (rows listed top first)."""
    return [as_grat(pattern[k + 1 - j][j - 1]) for j in range(1, k + 1)]


def main_diagonal(pattern, k):
    """mu_kj = lam_{n+j-k-1, n-k} for j = 1..k."""
    n = len(pattern[0])
    return [as_grat(pattern[k + 1 - j][n - k - 1]) for j in range(1, k + 1)]


class SeparatedSpectrum:
    """Separated-variable values keyed by (site, level, slot) = (a, k, j)."""

    def __init__(self, values, side="left"):
        self.values = dict(values)
        self.side = side

    def __getitem__(self, key):
        return self.values[key]

    def __eq__(self, other):
        return (isinstance(other, SeparatedSpectrum)
                and self.side == other.side and self.values == other.values)

    def roots(self):
        return [self.values[k] for k in sorted(self.values)]

    def poly(self):
        """prod (u - x) over the grid."""
        return Poly.from_roots(self.roots())

    def __repr__(self):
        return "SeparatedSpectrum(%s, %d values)" % (self.side,
                                                     len(self.values))


class SovState:
    """One separated state: row covector (side 'left') or column vector
    (side 'right'), its per-site patterns and value grid."""

    def __init__(self, patterns, side, vector, variables, charge):
        self.patterns = patterns
        self.side = side
        self.vector = vector
        self.variables = variables
        self.charge = charge
        self.norm = ONE  # rescaling applied on top of the raw product

    def eigen_poly(self):
        return self.variables.poly()

    def entries(self):
        return self.vector.row(0) if self.side == "left" \
            else self.vector.col(0)

    def __repr__(self):
        return "SovState(side=%r, charge=%d)" % (self.side, self.charge)


def separated_grid(spec, patterns, side="left"):
    """x-values (left, dual diagonals) or y-values (right, main diagonals)
    of a tuple of per-site patterns."""
    vals = {}
    for alpha, pat in enumerate(patterns):
        for k in range(1, spec.n):
            mu = dual_diagonal(pat, k) if side == "left" \
                else main_diagonal(pat, k)
            for j in range(1, k + 1):
                off = mu[j - 1] - grat(j - 1) if side == "left" \
                    else mu[j - 1] + grat(j - 1)
                vals[(alpha, k, j)] = spec.theta[alpha] + spec.hbar * off
    return SeparatedSpectrum(vals, side)


def _highest_pattern(weights):
    w = tuple(as_grat(x) for x in weights)
    return tuple(w[:a] for a in range(len(w), 0, -1))


def _lowest_pattern(weights):
    w = tuple(as_grat(x) for x in weights)
    n = len(w)
    return tuple(w[n - a:] for a in range(n, 0, -1))


def _noncompact_pattern(n, s, excite):
    """Continued pattern of the (-s, s, .., s) class: row a has first entry
    -s - excite_a and interior entries s."""
    s = as_grat(s)
    rows = [(-s,) + (s,) * (n - 1)]
    for a in range(n - 1, 0, -1):
        rows.append((-s - grat(excite[a - 1]),) + (s,) * (a - 1))
    return tuple(rows)


def _top_grid(spec, side):
    pats = tuple(_highest_pattern(r.weights) for r in spec.reps)
    return separated_grid(spec, pats, side)


def _grid_charge(spec, grid, top):
    acc = ZERO
    for key, v in grid.values.items():
        acc = acc + (top.values[key] - v)
    return _int(acc / spec.hbar)


# --------------------------------------------------------- basis builders


def _dual_row(vec):
    sup = [i for i in range(vec.nr) if vec[i, 0]]
    if len(sup) != 1:
        raise ValueError("extremal chain vector is not a coordinate vector")
    out = Mat.zeros(1, vec.nr)
    out[0, sup[0]] = ONE / vec[sup[0], 0]
    return out


def _sub_transfers(spec, w, z_aux=None):
    """Embedded gl(k+1) windows of the bare monodromy, companion-twisted
    with auxiliary eigenvalues and the w-tail of the chain frame."""
    n = spec.n
    if z_aux is None:
        z_aux = [grat(Fraction(2 * m + 3, 2)) for m in range(n)]
    z_aux = [as_grat(z) for z in z_aux]
    if len(z_aux) < n:
        raise ValueError("need n auxiliary twist eigenvalues")
    bare = monodromy(spec, twisted=False)
    subs = {}
    for k in range(1, n):
        r = n - k - 1
        ent = {(i, j): bare.entry(i + r, j + r)
               for i in range(1, k + 2) for j in range(1, k + 2)}
        g = mct(z_aux[:k + 1], w[r:])
        subs[k] = TMat(k + 1, bare.dim, ent, spec.hbar).right_twist(g)
    return subs


def _assert_independent(states):
    pivots = []
    clash = []
    for st in states:
        row = list(st.entries())
        for pc, prow in pivots:
            f = row[pc]
            if f:
                row = [a - f * b for a, b in zip(row, prow)]
        piv = next((i for i, x in enumerate(row) if x), None)
        if piv is None:
            clash.append(st.patterns)
            continue
        inv = ONE / row[piv]
        pivots.append((piv, [x * inv for x in row]))
    if clash:
        raise ValueError("separated states are not independent; colliding "
                         "patterns: %r" % (clash,))


def _chain_charges(spec):
    out = [0]
    for r in spec.reps:
        if r.charges is None:
            raise ValueError("site representation has no charge grading")
        out = [a + b for a in out for b in r.charges]
    return out


def _block_check(entries, charges, c):
    for i, v in enumerate(entries):
        if v and charges[i] != c:
            raise RuntimeError("separated state leaks outside its charge "
                               "block; raise the truncation cap")


def _descending_tuples(slots, budget, maxpart=None):
    if slots == 0:
        yield ()
        return
    top = budget if maxpart is None else min(maxpart, budget)
    for first in range(top, -1, -1):
        for rest in _descending_tuples(slots - 1, budget - first, first):
            yield (first,) + rest


def _noncompact_s(spec):
    s = as_grat(spec.reps[0].weights[1]) if spec.n > 1 \
        else -as_grat(spec.reps[0].weights[0])
    want = [-s] + [s] * (spec.n - 1)
    for r in spec.reps:
        if not r.truncated:
            raise ValueError("cannot mix truncated and exact site "
                             "representations")
        if [as_grat(x) for x in r.weights] != want:
            raise ValueError("truncated bases cover the (-s, s, ..., s) "
                             "class only")
    return s


def _cap_warning(spec, max_charge):
    margin = spec.n * (spec.n - 1) * spec.L
    cap = min(r.cap for r in spec.reps)
    if cap < max_charge + margin:
        warnings.warn("truncation cap %d below max charge %d plus margin %d;"
                      " generated states may be inexact"
                      % (cap, max_charge, margin))


def sov_left_basis(spec, z_aux=None, max_charge=None):
    """Left separated basis.

    Compact chains: one covector per tuple of per-site GT patterns,

        <0| prod_{k asc} prod_a  phi^{n-k-1}(T_{mu-bar})(theta_a + h nu_{k+1})

    with <0| the lowest-weight dual vector, mu-bar the dual diagonal above
    its weight floor and phi the window embedding from _sub_transfers.
    Raises if the generated family is not independent (lists the colliding
    patterns).  Truncated chains instead run the highest-weight ladder

        <0-bar| prod_a prod_j T_{n-1, m_j}(theta_a + h (n - 1 - s - m_j))

    over per-site labels m_1 >= ... >= m_{n-1} >= 0 with total charge at
    most `max_charge` (required); the full chain twist is used there, so
    those states depend on the twist eigenvalues only through overall
    scale.  Each truncated state is checked to stay inside its charge
    block."""
    w = _require_mct(spec)
    if any(r.truncated for r in spec.reps):
        return _noncompact_left(spec, max_charge)
    n = spec.n
    subs = _sub_transfers(spec, w, z_aux)
    row0 = _dual_row(spec.vacuum(lowest=True))
    per_site = [gt_patterns(r.weights) for r in spec.reps]
    anti = {k: {} for k in range(1, n)}
    ops = {}
    top = _top_grid(spec, "left")
    states = []
    for combo in itertools.product(*per_site):
        row = row0
        for k in range(1, n):
            for alpha in range(spec.L):
                nu = as_grat(spec.reps[alpha].weights[k])
                mubar = tuple(_int(x - nu)
                              for x in dual_diagonal(combo[alpha], k))
                if not any(mubar):
                    continue
                key = (k, mubar)
                op = ops.get(key)
                if op is None:
                    op = transfer_cbr(subs[k], list(mubar), cache=anti[k])
                    ops[key] = op
                row = row @ op(spec.theta[alpha] + spec.hbar * nu)
        grid = separated_grid(spec, combo, "left")
        states.append(SovState(tuple(combo), "left", row, grid,
                               _grid_charge(spec, grid, top)))
    _assert_independent(states)
    return states


def _noncompact_left(spec, max_charge):
    if max_charge is None:
        raise ValueError("truncated chains need max_charge")
    n = spec.n
    s = _noncompact_s(spec)
    _cap_warning(spec, max_charge)
    tw = monodromy(spec, twisted=True)
    row0 = _dual_row(spec.vacuum())
    anti, ops = {}, {}
    labels = sorted(_descending_tuples(n - 1, max_charge),
                    key=lambda t: (sum(t), t))
    combos = sorted((c for c in itertools.product(labels, repeat=spec.L)
                     if sum(sum(t) for t in c) <= max_charge),
                    key=lambda c: (sum(sum(t) for t in c), c))
    charges = _chain_charges(spec)
    top = _top_grid(spec, "left")
    states = []
    for combo in combos:
        row = row0
        for alpha, lab in enumerate(combo):
            for m in lab:
                if not m:
                    continue
                op = ops.get(m)
                if op is None:
                    op = transfer_cbr(tw, [m] * (n - 1), cache=anti)
                    ops[m] = op
                row = row @ op(spec.theta[alpha]
                               + spec.hbar * (grat(n - 1) - s - grat(m)))
        pats = tuple(_noncompact_pattern(n, s, lab) for lab in combo)
        grid = separated_grid(spec, pats, "left")
        st = SovState(pats, "left", row, grid,
                      _grid_charge(spec, grid, top))
        _block_check(st.entries(), charges, st.charge)
        states.append(st)
    _assert_independent(states)
    return states


def sov_right_basis(spec, z_aux=None, max_charge=None):
    """Right separated basis, mirror of sov_left_basis: columns generated
    from the highest-weight vector by complementary (starred) skew window
    transfers at theta_a + h nu_{n-k}, level k = 1 acting first.  Truncated
    chains act with full-chain starred transfers at theta_a - h s, one
    partition (at most n-1 parts) per site, total weight <= max_charge."""
    w = _require_mct(spec)
    if any(r.truncated for r in spec.reps):
        return _noncompact_right(spec, max_charge)
    n = spec.n
    subs = _sub_transfers(spec, w, z_aux)
    col0 = spec.vacuum()
    per_site = [gt_patterns(r.weights) for r in spec.reps]
    anti = {k: {} for k in range(1, n)}
    ops = {}
    top = _top_grid(spec, "right")
    states = []
    for combo in itertools.product(*per_site):
        col = col0
        for k in range(1, n):
            for alpha in range(spec.L):
                nu = as_grat(spec.reps[alpha].weights[n - k - 1])
                mubar = tuple(_int(nu - x)
                              for x in main_diagonal(combo[alpha], k))
                if not any(mubar):
                    continue
                key = (k, mubar)
                op = ops.get(key)
                if op is None:
                    lam2, mu2 = star_skew(mubar)
                    op = transfer_cbr(subs[k], list(lam2), list(mu2),
                                      cache=anti[k])
                    ops[key] = op
                col = op(spec.theta[alpha] + spec.hbar * nu) @ col
        grid = separated_grid(spec, combo, "right")
        states.append(SovState(tuple(combo), "right", col, grid,
                               _grid_charge(spec, grid, top)))
    _assert_independent(states)
    return states


def _noncompact_right(spec, max_charge):
    if max_charge is None:
        raise ValueError("truncated chains need max_charge")
    n = spec.n
    s = _noncompact_s(spec)
    _cap_warning(spec, max_charge)
    tw = monodromy(spec, twisted=True)
    col0 = spec.vacuum()
    anti, ops = {}, {}
    parts = sorted(_descending_tuples(n - 1, max_charge),
                   key=lambda t: (sum(t), t))
    combos = sorted((c for c in itertools.product(parts, repeat=spec.L)
                     if sum(sum(t) for t in c) <= max_charge),
                    key=lambda c: (sum(sum(t) for t in c), c))
    charges = _chain_charges(spec)
    top = _top_grid(spec, "right")
    states = []
    for combo in combos:
        col = col0
        for alpha, part in enumerate(combo):
            if not any(part):
                continue
            op = ops.get(part)
            if op is None:
                lam2, mu2 = star_skew(part)
                op = transfer_cbr(tw, list(lam2), list(mu2), cache=anti)
                ops[part] = op
            col = op(spec.theta[alpha] - spec.hbar * s) @ col
        pats = tuple(_noncompact_pattern(n, s, part) for part in combo)
        grid = separated_grid(spec, pats, "right")
        st = SovState(pats, "right", col, grid,
                      _grid_charge(spec, grid, top))
        _block_check(st.entries(), charges, st.charge)
        states.append(st)
    _assert_independent(states)
    return states


# ------------------------------------------------- exchange relation check


def check_bt_commutation(spec, lam, u, v):
    """Residuals of T_lam(v) B(u) - f_lam(u,v) B(u) T_lam(v) with

        f_lam(u,v) = prod_a (u - v + h(a - 1 - lam_a)) / (u - v + h(a - 1)).

    Returns (projected, full): `full` is the residual matrix itself and
    `projected` stacks it against the covectors annihilating every first
    column entry T_{j1}(v) of the *bare* monodromy (those entries head the
    remainder of the exchange relation); the projection is exactly zero
    while the full residual is generically not."""
    u, v = as_grat(u), as_grat(v)
    lam = [x for x in (_int(a) for a in lam) if x > 0]
    f = ONE
    for a in range(1, len(lam) + 1):
        den = u - v + spec.hbar * grat(a - 1)
        if not den:
            raise ZeroDivisionError("f_lambda has a pole at this u - v")
        f = f * (u - v + spec.hbar * grat(a - 1 - lam[a - 1])) / den
    tw = monodromy(spec, twisted=True)
    bare = monodromy(spec, twisted=False)
    tl = transfer_cbr(tw, lam)(v)
    b = b_operator(spec)(u)
    full = tl @ b - (b @ tl) * f
    d = tw.dim
    stack = Mat.zeros(d, spec.n * d)
    for j in range(1, spec.n + 1):
        blk = bare.entry(j, 1)(v)
        for r in range(d):
            for c in range(d):
                if blk[r, c]:
                    stack[r, (j - 1) * d + c] = blk[r, c]
    null = exact_nullspace(stack.transpose())
    proj = Mat.from_rows(null) @ full if null else Mat.zeros(0, d)
    return proj, full


# ----------------------------------------------------- charge and momenta


def sov_charge(spec):
    """Excitation number N = (sum_top x - sum X)/hbar off the subleading
    coefficient of the monic B(u); diagonal on both separated bases, zero
    on the highest-weight vector."""
    b = b_operator(spec)
    dd = spec.L * spec.n * (spec.n - 1) // 2
    if dd == 0:
        return Mat.zeros(b.dim)
    base = ZERO
    for v in _top_grid(spec, "left").values.values():
        base = base + v
    return (b.coeff(dd - 1) + Mat.eye(b.dim) * base) * (ONE / spec.hbar)


def _complete_left_basis(spec, basis):
    if any(r.truncated for r in spec.reps):
        raise ValueError("matrix realisation needs a complete compact basis")
    if basis is None:
        basis = sov_left_basis(spec)
    d = basis[0].vector.nc
    if len(basis) != d:
        raise ValueError("basis does not span the chain space")
    return basis, Mat.from_rows([st.vector.row(0) for st in basis])


def sov_coordinate(spec, alpha, k, j, basis=None):
    """Multiplication operator by x^alpha_{kj}, diagonal on the left basis."""
    if not (0 <= alpha < spec.L and 1 <= j <= k <= spec.n - 1):
        raise ValueError("no separated variable at that index")
    basis, wmat = _complete_left_basis(spec, basis)
    diag = Mat.diag([st.variables[(alpha, k, j)] for st in basis])
    x = exact_solve(wmat, diag @ wmat)
    if x is None:
        raise ValueError("left basis is singular")
    return x


def _x_at(spec, st, alpha, k, j):
    """Pattern value X_{kj} of a state, boundary row X_{k,k+1} included;
    None when the slot does not exist."""
    if 1 <= j <= k <= spec.n - 1:
        return st.variables[(alpha, k, j)]
    if j == k + 1 and 0 <= k <= spec.n - 1:
        nu = as_grat(spec.reps[alpha].weights[k])
        return spec.theta[alpha] + spec.hbar * (nu - grat(k))
    return None


def _bump(patterns, alpha, k, j, delta):
    pat = [list(r) for r in patterns[alpha]]
    pat[k + 1 - j][j - 1] = pat[k + 1 - j][j - 1] + grat(delta)
    new = tuple(tuple(r) for r in pat)
    return patterns[:alpha] + (new,) + patterns[alpha + 1:]


def conjugate_momenta(spec, alpha, k, j, sign, basis=None):
    """Shift operator P^{+-alpha}_{kj} on the left basis: <L| P = c <L'|
    with L' the pattern tuple with mu_kj moved by +-1 and

        c+ = (X_{k-1,j} - X_{kj}) (X_{k,j-1} - X_{kj} - h)
        c- = (X_{kj} - X_{k+1,j}) (X_{kj} - X_{k,j+1} - h)

    where factors whose slot does not exist are simply absent.  Shifts off
    the pattern lattice always come with vanishing c."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if not (0 <= alpha < spec.L and 1 <= j <= k <= spec.n - 1):
        raise ValueError("no separated variable at that index")
    basis, wmat = _complete_left_basis(spec, basis)
    d = wmat.nc
    index = {st.patterns: i for i, st in enumerate(basis)}
    h = spec.hbar
    rows = []
    for st in basis:
        x = st.variables[(alpha, k, j)]
        if sign > 0:
            t1 = _x_at(spec, st, alpha, k - 1, j)
            t2 = _x_at(spec, st, alpha, k, j - 1)
            c = ONE if t1 is None else (t1 - x)
            if t2 is not None:
                c = c * (t2 - x - h)
        else:
            t1 = _x_at(spec, st, alpha, k + 1, j)
            t2 = _x_at(spec, st, alpha, k, j + 1)
            c = ONE if t1 is None else (x - t1)
            if t2 is not None:
                c = c * (x - t2 - h)
        tgt = index.get(_bump(st.patterns, alpha, k, j, sign))
        if tgt is None:
            if c:
                raise RuntimeError("pattern shift leaves the lattice with a "
                                   "non-vanishing coefficient")
            rows.append([ZERO] * d)
        else:
            rows.append([c * vv for vv in wmat.row(tgt)])
    p = exact_solve(wmat, Mat.from_rows(rows))
    if p is None:
        raise ValueError("left basis is singular")
    return p


# ------------------------------------------------------ inverse monodromy


def antipode_transfer(spec, a, u):
    """S_{a,1}(u), the antisymmetric transfer of the inverse twisted
    monodromy: T_{n-a,1}(u + (n-1)h) divided by the quantum determinant
    value at the same point.  Raises when that value vanishes."""
    n = spec.n
    if not 0 <= a <= n:
        raise ValueError("antisymmetric degree out of range")
    u = as_grat(u)
    pt = u + spec.hbar * grat(n - 1)
    den = exact_det(spec.twist)
    for jj in range(1, n + 1):
        den = den * spec.nu(jj)(pt - spec.hbar * grat(n - jj))
    if not den:
        raise ZeroDivisionError("quantum determinant vanishes at the "
                                "shifted point")
    tw = monodromy(spec, twisted=True)
    return transfer_antisym(tw, n - a)(pt) * (ONE / den)
