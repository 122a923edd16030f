"""Tests for site representations and Gelfand-Tsetlin data."""

import itertools
from math import comb

import pytest

from workbench.scalars import GRat, ZERO, ONE, grat, as_grat
from workbench.linalg import Mat, weyl_dim
from workbench.reps import (RepSpec, rep_matrices, gt_patterns, gt_charge,
                            gt_eigenfunction_gl3, diffop_action,
                            hyp2f1_terminating, sov_charge_basis)


def _vec_eq(a, b):
    keys = set(a) | set(b)
    return all(a.get(k, ZERO) == b.get(k, ZERO) for k in keys)


def _check_gl_relations_via_apply(rep, samples):
    """[E_ij, E_kl] = d_jk E_il - d_li E_kj applied to chosen basis labels.

    Uses the un-truncated dict action, so it is exact even for capped
    modules.
    """
    n = rep.n
    idx = range(1, n + 1)
    for (i, j), (k, l) in itertools.product(
            itertools.product(idx, idx), repeat=2):
        for lab in samples:
            v = {lab: ONE}
            lhs = rep.apply(i, j, rep.apply(k, l, v))
            rhs = rep.apply(k, l, rep.apply(i, j, v))
            com = {m: lhs.get(m, ZERO) - rhs.get(m, ZERO)
                   for m in set(lhs) | set(rhs)}
            want = {}
            if j == k:
                for m, c in rep.apply(i, l, v).items():
                    want[m] = want.get(m, ZERO) + c
            if l == i:
                for m, c in rep.apply(k, j, v).items():
                    want[m] = want.get(m, ZERO) - c
            assert _vec_eq(com, want), (rep.kind, (i, j), (k, l), lab)


def _check_gl_relations_matrix(rep):
    n = rep.n
    for i, j, k, l in itertools.product(range(1, n + 1), repeat=4):
        com = rep.E(i, j) @ rep.E(k, l) - rep.E(k, l) @ rep.E(i, j)
        want = Mat.zeros(rep.dim)
        if j == k:
            want = want + rep.E(i, l)
        if l == i:
            want = want - rep.E(k, j)
        assert com == want, (rep.kind, (i, j), (k, l))


def test_defining_and_wedge():
    for n in (2, 3, 4):
        rep = rep_matrices(RepSpec(n, "defining"))
        assert rep.dim == n
        _check_gl_relations_matrix(rep)
    for n, a in [(3, 2), (4, 2), (4, 3)]:
        rep = rep_matrices(RepSpec(n, "wedge", {"a": a}))
        assert rep.dim == comb(n, a)
        _check_gl_relations_matrix(rep)
        # top exterior power of gl(3) is one-dimensional with weight (1,1,1)
    det3 = rep_matrices(RepSpec(3, "wedge", {"a": 3}))
    assert det3.dim == 1
    for j in (1, 2, 3):
        assert det3.E(j, j)[0, 0] == ONE


def test_sym_powers():
    for n, S in [(2, 3), (3, 2)]:
        rep = rep_matrices(RepSpec(n, "sym", {"S": S}))
        assert rep.dim == comb(n + S - 1, S)
        _check_gl_relations_matrix(rep)
        hv = rep.highest_vector()
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                assert (rep.E(i, j) @ hv).is_zero()
            assert rep.E(i, i) @ hv == hv * rep.weights[i - 1]


def test_young_irreps():
    cases = [((2,), 3), ((1, 1), 3), ((2, 1), 3), ((2, 2), 3), ((2, 1), 2)]
    for lam, n in cases:
        rep = rep_matrices(RepSpec(n, "young", {"lam": list(lam)}))
        assert rep.dim == weyl_dim(lam, n)
        _check_gl_relations_matrix(rep)
        hv, lv = rep.highest_vector(), rep.lowest_vector()
        for i in range(1, n + 1):
            assert rep.E(i, i) @ hv == hv * rep.weights[i - 1]
            assert rep.E(i, i) @ lv == lv * rep.weights[n - i]
            for j in range(i + 1, n + 1):
                assert (rep.E(i, j) @ hv).is_zero()
                assert (rep.E(j, i) @ lv).is_zero()


def test_diffop2_matches_sym_on_integral_weight():
    S = 3
    dif = rep_matrices(RepSpec(2, "diffop2", {"lam": [grat(S), ZERO]}))
    sym = rep_matrices(RepSpec(2, "sym", {"S": S}))
    assert dif.dim == sym.dim == S + 1
    _check_gl_relations_matrix(dif)
    for i, j in itertools.product((1, 2), repeat=2):
        a, b = dif.E(i, j), sym.E(i, j)
        assert a.trace() == b.trace()
        assert (a @ a).trace() == (b @ b).trace()


def test_diffop2_generic_weight_needs_cap():
    with pytest.raises(ValueError):
        rep_matrices(RepSpec(2, "diffop2", {"lam": [grat("1/2"), ZERO]}))
    rep = rep_matrices(RepSpec(2, "diffop2",
                               {"lam": [grat("-3/2"), grat("3/2")],
                                "cap": 6}))
    assert rep.dim == 7 and rep.truncated
    _check_gl_relations_via_apply(rep, [0, 1, 3])


def test_noncompact_sym_relations_and_grading():
    s = grat("3/2")
    for n, nmax in [(2, 6), (3, 6), (4, 5)]:
        rep = rep_matrices(RepSpec(n, "noncompact-sym",
                                   {"s": s, "Nmax": nmax}))
        samples = rep.labels[:5] + rep.labels[-2:]
        _check_gl_relations_via_apply(rep, samples)
        assert rep.weights == [-s] + [s] * (n - 1)
        # charge grading: E_ij shifts the charge by exactly i - j
        for i, j in itertools.product(range(1, n + 1), repeat=2):
            for lab in samples:
                c0 = sum((k + 1) * e for k, e in enumerate(lab))
                for out in rep.apply(i, j, {lab: ONE}):
                    c1 = sum((k + 1) * e for k, e in enumerate(out))
                    assert c1 - c0 == i - j


def test_noncompact_truncation_consistency():
    s = grat("7/4")
    small = rep_matrices(RepSpec(3, "noncompact-sym", {"s": s, "Nmax": 4}))
    big = rep_matrices(RepSpec(3, "noncompact-sym", {"s": s, "Nmax": 8}))
    assert small.labels == [lab for lab in big.labels
                            if sum((k + 1) * e for k, e in enumerate(lab))
                            <= 4]
    for i, j in [(2, 1), (1, 2), (3, 2), (2, 3), (1, 1)]:
        a = small.E(i, j)
        b = big.E(i, j)
        for r, lr in enumerate(small.labels):
            for c, lc in enumerate(small.labels):
                assert a[r, c] == b[big.index[lr], big.index[lc]]


def test_gt_pattern_counts_compact():
    assert len(gt_patterns([ONE, ZERO, ZERO])) == 3
    assert len(gt_patterns([grat(2), ZERO, ZERO])) == 6
    assert len(gt_patterns([grat(2), ONE, ZERO])) == 8
    assert len(gt_patterns([grat(2), grat(2), ZERO])) == 6
    assert len(gt_patterns([grat(4), ZERO])) == 5
    assert len(gt_patterns([ONE, ZERO, ZERO, ZERO])) == 4
    for lam in [(2, 1, 0), (3, 1, 0), (2, 2, 0)]:
        pats = gt_patterns([grat(x) for x in lam])
        assert len(pats) == weyl_dim([x for x in lam if x], 3)


def test_gt_pattern_counts_noncompact():
    s = grat("3/2")
    pats2 = gt_patterns([-s, s], compact=False, cap=5)
    assert len(pats2) == 6
    assert [gt_charge(p) for p in pats2] == list(range(6))
    pats3 = gt_patterns([-s, s, s], compact=False, cap=4)
    by_charge = {}
    for p in pats3:
        by_charge[gt_charge(p)] = by_charge.get(gt_charge(p), 0) + 1
    # #{(m1,m2,m3) >= 0 : 2 m1 + m2 + m3 = N}
    for N in range(5):
        want = sum(N - 2 * m1 + 1 for m1 in range(N // 2 + 1))
        assert by_charge[N] == want


def test_sov_charge_basis_counts():
    for N in range(8):
        basis = sov_charge_basis(3, N)
        assert len(basis) == N // 2 + 1
        assert all(a + 2 * b == N for a, b in basis)
    assert sov_charge_basis(2, 5) == [(5,)]


def test_hyp2f1_terminating_binomial_form():
    # 2F1(-m, b; c; z) = sum_n (-1)^n C(m,n) (b)_n / (c)_n z^n
    b, c = grat("5/2"), grat("-7/3")
    m = 4
    coeffs = hyp2f1_terminating(grat(-m), b, c, 10)
    assert len(coeffs) == m + 1

    def rising(q, n):
        acc = ONE
        for t in range(n):
            acc = acc * (q + grat(t))
        return acc

    for nn, got in enumerate(coeffs):
        want = rising(grat(-m), nn) * rising(b, nn) \
            / (rising(c, nn) * grat(_fact(nn)))
        assert got == want
        alt = grat((-1) ** nn * comb(m, nn)) * rising(b, nn) / rising(c, nn)
        assert got == alt


def _fact(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def _gt_eigen_checks(pattern):
    lam = list(pattern[0])
    h = gt_eigenfunction_gl3(pattern)
    assert h, "eigenfunction must not vanish"
    l21, l22 = pattern[1]
    l11 = pattern[2][0]

    def act(i, j, poly):
        out = {}
        for mono, coeff in poly.items():
            for m2, c2 in diffop_action(lam, i, j, mono).items():
                out[m2] = out.get(m2, ZERO) + coeff * c2
        return {m: c for m, c in out.items() if c}

    def scale(poly, c):
        return {m: v * c for m, v in poly.items()} if c else {}

    assert _vec_eq(act(1, 1, h), scale(h, l11))
    e11 = act(1, 1, h)
    e22 = act(2, 2, h)
    tot = {m: e11.get(m, ZERO) + e22.get(m, ZERO) for m in set(e11) | set(e22)}
    assert _vec_eq(tot, scale(h, l21 + l22))
    quad = act(1, 1, act(2, 2, h))
    mixed = act(1, 2, act(2, 1, h))
    lhs = {m: quad.get(m, ZERO) - mixed.get(m, ZERO) + e11.get(m, ZERO)
           for m in set(quad) | set(mixed) | set(e11)}
    assert _vec_eq(lhs, scale(h, l22 * (l21 + ONE)))


def test_gt_eigenfunctions_compact():
    for lam in [(1, 0, 0), (2, 1, 0), (2, 2, 0)]:
        for pat in gt_patterns([grat(x) for x in lam]):
            _gt_eigen_checks(pat)


def test_gt_eigenfunctions_noncompact():
    # generic-denominator spin keeps the 2F1 parameters off their poles
    s = grat("7/4")
    pats = gt_patterns([-s, s, s], compact=False, cap=5)
    for pat in pats:
        _gt_eigen_checks(pat)


def test_gt_eigenfunction_reduced_patterns_are_monomials():
    # with l22 = l2 the hypergeometric series collapses and the
    # eigenfunction is a single monomial x^(l21-l11) y^(l1-l21)
    s = grat("7/4")
    for pat in gt_patterns([-s, s, s], compact=False, cap=5):
        (l1, l2, _), (l21, l22), (l11,) = pat
        if l22 != l2:
            continue
        h = gt_eigenfunction_gl3(pat)
        assert len(h) == 1
        (mono, coeff), = h.items()
        assert coeff == ONE
        assert mono == (int(as_grat(l21 - l11).re),
                        int(as_grat(l1 - l21).re), 0)


def test_full_gl3_diffops_satisfy_relations():
    lam = [grat("-3/2"), grat("1/3"), grat("5/7")]
    samples = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (2, 1, 1)]

    class Wrapper:
        n = 3
        kind = "diffop3-raw"

        @staticmethod
        def apply(i, j, vec):
            out = {}
            for mono, c in vec.items():
                for m2, c2 in diffop_action(lam, i, j, mono).items():
                    v = out.get(m2, ZERO) + c * c2
                    if v:
                        out[m2] = v
                    elif m2 in out:
                        del out[m2]
            return out

    _check_gl_relations_via_apply(Wrapper, samples)
