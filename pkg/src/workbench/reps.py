"""Representations of gl(n) used as site (and auxiliary) spaces.

Every representation is exposed through a `Rep` object holding exact
matrices for the generators E_ij (1-indexed).  Finite-dimensional kinds
(defining, wedge, sym, young, integral diffop2) are exact irreps;
infinite-dimensional kinds (generic diffop2/diffop3, noncompact-sym) are
truncated to a charge cap.  For truncated reps the matrix of a charge-
raising generator silently drops image components beyond the cap, so
callers must budget enough headroom for the operator words they apply.
"""

import itertools

from gmpy2 import mpq

from .scalars import GRat, ZERO, ONE, as_grat, grat
from .linalg import Mat, exact_solve, young_symmetrizer, young_boxes
from . import kern


def _as_int(x):
    """GRat -> python int when it is one, else None."""
    g = as_grat(x)
    if g is NotImplemented or g.im or g.re.denominator != 1:
        return None
    return int(g.re.numerator)


class RepSpec:
    """Description of a gl(n) representation.

    kind: defining | wedge | sym | young | diffop2 | diffop3 | noncompact-sym
    params: wedge {a}; sym {S}; young {lam}; diffop2 {lam: [l1,l2], cap?};
            diffop3 {lam: [l1,l2,l3], cap}; noncompact-sym {s, Nmax}.
    """

    def __init__(self, n, kind, params=None):
        self.n = int(n)
        self.kind = kind
        self.params = dict(params or {})

    @classmethod
    def from_json(cls, n, obj):
        if isinstance(obj, str):
            return cls(n, obj)
        return cls(n, obj["kind"], obj.get("params", {}))

    def key(self):
        return (self.n, self.kind, tuple(sorted(
            (k, str(v)) for k, v in self.params.items())))

    def __repr__(self):
        return "RepSpec(%d, %r, %r)" % (self.n, self.kind, self.params)


class Rep:
    """A concrete representation: basis labels + generator matrices."""

    def __init__(self, n, kind, labels, weights, action, charges=None,
                 truncated=False, cap=None):
        self.n = n
        self.kind = kind
        self.labels = list(labels)
        self.index = {lab: i for i, lab in enumerate(self.labels)}
        self.dim = len(self.labels)
        self.weights = [as_grat(w) for w in weights]  # highest weight
        self._action = action  # action(i, j, label) -> {label: coeff}
        self.charges = charges  # per-basis-vector SoV charge (or None)
        self.truncated = truncated
        self.cap = cap
        self._cache = {}

    def E(self, i, j):
        """Matrix of E_ij (1-indexed) in the stored basis."""
        key = (i, j)
        if key not in self._cache:
            m = Mat.zeros(self.dim, self.dim)
            for col, lab in enumerate(self.labels):
                for out, coeff in self._action(i, j, lab).items():
                    row = self.index.get(out)
                    if row is None:
                        if not self.truncated:
                            raise AssertionError(
                                "image escaped basis in exact rep")
                        continue
                    m[row, col] = coeff
            self._cache[key] = m
        return self._cache[key]

    def apply(self, i, j, vec):
        """Apply E_ij to a {label: coeff} dict without truncation checks."""
        out = {}
        for lab, c in vec.items():
            if not c:
                continue
            for lab2, a in self._action(i, j, lab).items():
                v = out.get(lab2, ZERO) + c * a
                if v:
                    out[lab2] = v
                elif lab2 in out:
                    del out[lab2]
        return out

    def highest_index(self):
        """Index of the highest-weight basis vector (monomial kinds)."""
        return 0

    def highest_vector(self):
        v = getattr(self, "_hw", None)
        if v is not None:
            return v
        return self._unit(0)

    def lowest_vector(self):
        v = getattr(self, "_lw", None)
        if v is not None:
            return v
        if self.truncated:
            raise ValueError("truncated module has no lowest-weight state")
        return self._unit(self.dim - 1)

    def _unit(self, i):
        m = Mat.zeros(self.dim, 1)
        m[i, 0] = ONE
        return m


# ------------------------------------------------------------------ kinds


def _defining(n):
    labels = list(range(1, n + 1))

    def act(i, j, lab):
        return {i: ONE} if lab == j else {}

    return Rep(n, "defining", labels, [ONE] + [ZERO] * (n - 1), act)


def _wedge(n, a):
    if not 1 <= a <= n:
        raise ValueError("wedge degree out of range")
    labels = list(itertools.combinations(range(1, n + 1), a))

    def act(i, j, lab):
        if j not in lab:
            return {}
        if i == j:
            return {lab: ONE}
        if i in lab:
            return {}
        pos = lab.index(j)
        rest = lab[:pos] + lab[pos + 1:]
        ins = sum(1 for x in rest if x < i)
        sign = ONE if (pos - ins) % 2 == 0 else -ONE
        out = tuple(sorted(rest + (i,)))
        return {out: sign}

    w = [ONE] * a + [ZERO] * (n - a)
    return Rep(n, "wedge", labels, w, act)


def _sym(n, S):
    labels = sorted((m for m in itertools.product(range(S + 1), repeat=n)
                     if sum(m) == S), reverse=True)

    def act(i, j, lab):
        if not lab[j - 1]:
            return {}
        out = list(lab)
        out[j - 1] -= 1
        out[i - 1] += 1
        return {tuple(out): grat(lab[j - 1])}

    w = [grat(S)] + [ZERO] * (n - 1)
    return Rep(n, "sym", labels, w, act)


def _young(lam, n):
    """Irrep of shape lam cut out of the tensor power by its symmetrizer."""
    lam = [int(x) for x in lam]
    k = sum(lam)
    proj = young_symmetrizer(lam, n)
    work = list(proj.d)
    pivcols, _, _ = kern.row_reduce(work, proj.nr, proj.nc)
    d = len(pivcols)
    emb = Mat.zeros(proj.nr, d)
    for c, j in enumerate(pivcols):
        for r in range(proj.nr):
            emb[r, c] = proj[r, j]
    gram = emb.transpose() @ emb
    mats = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            big = Mat.zeros(proj.nr, d)
            # E_ij acting diagonally on the tensor factors of emb's columns
            for col in range(d):
                for r in range(proj.nr):
                    v = emb[r, col]
                    if not v:
                        continue
                    # digits of r in base n give the tensor slot indices
                    rr = r
                    digs = []
                    for _ in range(k):
                        digs.append(rr % n)
                        rr //= n
                    digs.reverse()
                    for slot in range(k):
                        if digs[slot] == j - 1:
                            nd = list(digs)
                            nd[slot] = i - 1
                            idx = 0
                            for dd in nd:
                                idx = idx * n + dd
                            big[idx, col] = big[idx, col] + v
            mats[(i, j)] = exact_solve(gram, emb.transpose() @ big)
    labels = list(range(d))

    def act(i, j, lab):
        m = mats[(i, j)]
        return {r: m[r, lab] for r in range(d) if m[r, lab]}

    w = [grat(x) for x in lam] + [ZERO] * (n - len(lam))
    rep = Rep(n, "young", labels, w, act)
    rep.embed = emb

    def coords_of_filling(rows):
        idx = 0
        for r in rows:
            idx = idx * n + r
        big = Mat.zeros(proj.nr, 1)
        for rr in range(proj.nr):
            big[rr, 0] = proj[rr, idx]
        v = exact_solve(gram, emb.transpose() @ big)
        if v.is_zero():
            raise AssertionError("extremal filling projects to zero")
        return v

    boxes = young_boxes(lam)
    rep._hw = coords_of_filling([r for (r, c) in boxes])
    rep._lw = coords_of_filling([n - 1 - r for (r, c) in boxes])
    for key, m in mats.items():
        rep._cache[key] = m
    return rep


def _diffop2(l1, l2, cap=None):
    """gl(2) on C[x]: E11 = l1 - x dx, E22 = l2 + x dx, E12 = dx,
    E21 = (l1 - l2) x - x^2 dx.  Exact finite irrep when l1 - l2 is a
    non-negative integer (default cap), truncated module otherwise."""
    l1, l2 = as_grat(l1), as_grat(l2)
    gap = _as_int(l1 - l2)
    exact = gap is not None and gap >= 0
    if cap is None:
        if not exact:
            raise ValueError("non-integral weights need an explicit cap")
        cap = gap
    labels = list(range(cap + 1))

    def act(i, j, k):
        kk = grat(k)
        if (i, j) == (1, 1):
            return {k: l1 - kk}
        if (i, j) == (2, 2):
            return {k: l2 + kk}
        if (i, j) == (1, 2):
            return {k - 1: kk} if k else {}
        c = l1 - l2 - kk
        return {k + 1: c} if c else {}

    return Rep(2, "diffop2", labels, [l1, l2], act,
               charges=labels, truncated=not (exact and cap == gap), cap=cap)


def diffop_action(lambdas, i, j, mono):
    """One term of the gl(3) realisation on C[x,y,z] applied to a monomial.

    mono = (a, b, c) for x^a y^b z^c; returns {monomial: coeff}.
    """
    l1, l2, l3 = (as_grat(x) for x in lambdas)
    a, b, c = mono
    out = {}

    def add(da, db, dc, coeff):
        m = (a + da, b + db, c + dc)
        if min(m) < 0 or not coeff:
            return
        out[m] = out.get(m, ZERO) + coeff

    ga, gb, gc = grat(a), grat(b), grat(c)
    if (i, j) == (1, 1):
        add(0, 0, 0, l1 - ga - gb)
    elif (i, j) == (2, 2):
        add(0, 0, 0, l2 + ga - gc)
    elif (i, j) == (3, 3):
        add(0, 0, 0, l3 + gb + gc)
    elif (i, j) == (1, 2):
        add(-1, 0, 0, ga)
    elif (i, j) == (1, 3):
        add(0, -1, 0, gb)
    elif (i, j) == (2, 3):
        add(1, -1, 0, gb)
        add(0, 0, -1, -gc)
    elif (i, j) == (2, 1):
        # (l1-l2) x - x^2 dx - xy dy + (y + xz) dz
        add(1, 0, 0, l1 - l2 - ga - gb + gc)
        add(0, 1, -1, gc)
    elif (i, j) == (3, 1):
        # y (l1-l3) + xz (l2-l3) - yx dx - y^2 dy - z (y + xz) dz
        add(0, 1, 0, l1 - l3 - ga - gb - gc)
        add(1, 0, 1, l2 - l3 - gc)
    elif (i, j) == (3, 2):
        # -z (l2-l3) + y dx + z^2 dz
        add(0, 0, 1, l3 - l2 + gc)
        add(-1, 1, 0, ga)
    else:
        raise ValueError("bad generator indices")
    return {m: v for m, v in out.items() if v}


def _diffop3(lambdas, cap):
    """gl(3) on C[x,y,z] truncated at charge a + 2b + c <= cap."""
    lambdas = [as_grat(x) for x in lambdas]
    labels = sorted((a, b, c)
                    for a in range(cap + 1)
                    for b in range(cap // 2 + 1)
                    for c in range(cap + 1)
                    if a + 2 * b + c <= cap)
    labels.sort(key=lambda m: (m[0] + 2 * m[1] + m[2], m))

    def act(i, j, mono):
        return diffop_action(lambdas, i, j, mono)

    charges = [a + 2 * b + c for a, b, c in labels]
    return Rep(3, "diffop3", labels, lambdas, act,
               charges=charges, truncated=True, cap=cap)


def _noncompact_sym(n, s, nmax):
    """Highest weight (-s, s, ..., s) realised on C[x_1..x_{n-1}],
    the one-row ("symmetric-power-like") class; charge(x_k) = k,
    truncated at total charge nmax."""
    s = as_grat(s)

    def charge(m):
        return sum((k + 1) * e for k, e in enumerate(m))

    labels = [m for m in itertools.product(range(nmax + 1), repeat=n - 1)
              if charge(m) <= nmax]
    labels.sort(key=lambda m: (charge(m), m))
    two_s = s + s

    def act(i, j, m):
        deg = grat(sum(m))
        if i == 1 and j == 1:
            return {m: -s - deg}
        if i == j:
            return {m: s + grat(m[i - 2])}
        if i == 1:  # E_1j = d_{x_{j-1}}
            e = m[j - 2]
            if not e:
                return {}
            out = list(m)
            out[j - 2] -= 1
            return {tuple(out): grat(e)}
        if j == 1:  # E_j1 = -2s x_{j-1} - x_{j-1} sum_k x_k d_k
            out = list(m)
            out[i - 2] += 1
            return {tuple(out): -two_s - deg}
        # E_ij = x_{i-1} d_{x_{j-1}},  i, j >= 2
        e = m[j - 2]
        if not e:
            return {}
        out = list(m)
        out[j - 2] -= 1
        out[i - 2] += 1
        return {tuple(out): grat(e)}

    weights = [-s] + [s] * (n - 1)
    charges = [charge(m) for m in labels]
    return Rep(n, "noncompact-sym", labels, weights, act,
               charges=charges, truncated=True, cap=nmax)


def rep_matrices(spec):
    """Build the Rep described by a RepSpec."""
    n, kind, p = spec.n, spec.kind, spec.params
    if kind == "defining":
        return _defining(n)
    if kind == "wedge":
        return _wedge(n, int(p["a"]))
    if kind == "sym":
        return _sym(n, int(p["S"]))
    if kind == "young":
        return _young(p["lam"], n)
    if kind == "diffop2":
        if n != 2:
            raise ValueError("diffop2 is a gl(2) realisation")
        l1, l2 = p["lam"]
        return _diffop2(l1, l2, p.get("cap"))
    if kind == "diffop3":
        if n != 3:
            raise ValueError("diffop3 is a gl(3) realisation")
        return _diffop3(p["lam"], int(p["cap"]))
    if kind == "noncompact-sym":
        return _noncompact_sym(n, p["s"], int(p["Nmax"]))
    raise ValueError("unknown representation kind %r" % kind)


# --------------------------------------------------- Gelfand-Tsetlin data


def gt_patterns(weights, compact=True, cap=None):
    """Gelfand-Tsetlin patterns below the given top row.

    Returns tuples of rows (top row first, lengths n .. 1).  Compact:
    integral interlacing patterns of a dominant-integral top row.
    Non-compact (n <= 3): integer-descent branching; enumeration is
    capped at SoV charge `cap`.
    """
    weights = [as_grat(w) for w in weights]
    n = len(weights)
    if compact:
        gaps = [_as_int(weights[j] - weights[j + 1]) for j in range(n - 1)]
        if any(g is None or g < 0 for g in gaps):
            raise ValueError("compact patterns need dominant integral weight")

        def descend(row):
            if len(row) == 1:
                yield (tuple(row),)
                return
            m = len(row) - 1
            ranges = []
            for j in range(m):
                lo = row[j + 1]
                hi = row[j]
                span = _as_int(hi - lo)
                ranges.append([lo + grat(t) for t in range(span + 1)])
            for nxt in itertools.product(*ranges):
                for rest in descend(list(nxt)):
                    yield (tuple(row),) + rest
        return list(descend(weights))

    if cap is None:
        raise ValueError("non-compact enumeration requires a charge cap")
    if n == 2:
        out = []
        for m in range(cap + 1):
            out.append((tuple(weights), (weights[0] - grat(m),)))
        return out
    if n == 3:
        out = []
        for m1 in range(cap // 2 + 1):
            for m2 in range(cap + 1):
                for m3 in range(cap + 1):
                    if 2 * m1 + m2 + m3 > cap:
                        continue
                    l21 = weights[0] - grat(m1)
                    l22 = weights[1] - grat(m3)
                    l11 = l21 - grat(m2)
                    out.append((tuple(weights), (l21, l22), (l11,)))
        return out
    raise ValueError("non-compact patterns implemented for n <= 3")


def gt_charge(pattern):
    """SoV charge of a gl(2)/gl(3) pattern (monomial grading of its
    eigenfunction: deg_x + 2 deg_y + deg_z)."""
    n = len(pattern[0])
    if n == 2:
        return _as_int(pattern[0][0] - pattern[1][0])
    if n == 3:
        (l1, l2, _), (l21, l22), (l11,) = pattern
        return _as_int(2 * (l1 - l21) + (l21 - l11) + (l2 - l22))
    raise ValueError("charge defined for n <= 3")


def _poch(q, k):
    """Rising factorial q (q+1) ... (q+k-1)."""
    acc = ONE
    for t in range(k):
        acc = acc * (q + grat(t))
    return acc


def hyp2f1_terminating(a, b, c, max_terms):
    """Coefficient list of 2F1(a,b;c;z), terminating because a or b is a
    non-positive integer.  Rising Pochhammers: the terminating series is
    sum_n (-1)^n C(m,n) (b)_n/(c)_n z^n for a = -m, which is what the GT
    eigenfunctions require (checked against the eigen-system)."""
    a, b, c = as_grat(a), as_grat(b), as_grat(c)
    stop = None
    for q in (a, b):
        qi = _as_int(q)
        if qi is not None and qi <= 0:
            stop = -qi if stop is None else min(stop, -qi)
    if stop is None:
        raise ValueError("series does not terminate")
    coeffs = []
    fact = 1
    for k in range(min(stop, max_terms) + 1):
        den = _poch(c, k)
        if not den:
            raise ValueError("2F1 parameter c hits a pole before termination")
        if k:
            fact *= k
        coeffs.append(_poch(a, k) * _poch(b, k) / (den * grat(fact)))
    return coeffs


def gt_eigenfunction_gl3(pattern):
    """Joint GT eigenfunction in C[x,y,z] for a gl(3) pattern, as a
    monomial dict {(a,b,c): coeff}.  The eigenfunction is
    x^(l21-l11) y^(l1-l21) z^(l2-l22) * 2F1 evaluated at -y/(xz)."""
    (l1, l2, _l3), (l21, l22), (l11,) = [tuple(map(as_grat, r))
                                         for r in pattern]
    p = _as_int(l21 - l11)
    q = _as_int(l1 - l21)
    r = _as_int(l2 - l22)
    if None in (p, q, r) or min(p, q, r) < 0:
        raise ValueError("pattern violates polynomial branching rules")
    coeffs = hyp2f1_terminating(l11 - l21, l22 - l2, l22 - l21,
                                min(p, r))
    poly = {}
    for k, ck in enumerate(coeffs):
        c = ck if k % 2 == 0 else -ck
        poly[(p - k, q + k, r - k)] = c
    return poly


def sov_charge_basis(n, charge):
    """Monomials in n-1 variables with sum_k k*m_k equal to `charge`."""
    out = [m for m in itertools.product(range(charge + 1), repeat=n - 1)
           if sum((k + 1) * e for k, e in enumerate(m)) == charge]
    out.sort()
    return out
