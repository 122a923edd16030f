# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernels: dense object matrix multiply and Bareiss elimination.

Entries stay Python objects (exact Gaussian rationals, mp numbers, or
polynomials); the speedup comes from removing interpreter dispatch on the
inner loops, not from unboxing.
"""


def matmul(list a, list b, Py_ssize_t n, Py_ssize_t k, Py_ssize_t m):
    """(n x k) @ (k x m) -> flat n x m list."""
    cdef list out = [None] * (n * m)
    cdef Py_ssize_t i, j, l, arow, orow
    cdef object acc, x, y, p
    for i in range(n):
        arow = i * k
        orow = i * m
        for j in range(m):
            acc = None
            for l in range(k):
                x = a[arow + l]
                if not x:
                    continue
                y = b[l * m + j]
                if not y:
                    continue
                p = x * y
                acc = p if acc is None else acc + p
            out[orow + j] = acc
    return out


def row_reduce(list a, Py_ssize_t nrows, Py_ssize_t ncols):
    """In-place fraction-free (Bareiss) elimination with row pivoting.

    Returns (pivot_columns, sign, prev); see the pure-Python twin for the
    contract.
    """
    cdef Py_ssize_t r = 0, c, i, j, p, pr, pp, irow, rrow, idx
    cdef int sign = 1
    cdef object prev = None
    cdef object piv, aic, t, tmp
    cdef list pivots = []
    for c in range(ncols):
        if r >= nrows:
            break
        p = -1
        for i in range(r, nrows):
            if a[i * ncols + c]:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            pr = p * ncols
            pp = r * ncols
            for j in range(ncols):
                tmp = a[pp + j]
                a[pp + j] = a[pr + j]
                a[pr + j] = tmp
            sign = -sign
        piv = a[r * ncols + c]
        for i in range(r + 1, nrows):
            aic = a[i * ncols + c]
            irow = i * ncols
            rrow = r * ncols
            if aic:
                for j in range(c + 1, ncols):
                    t = piv * a[irow + j] - aic * a[rrow + j]
                    a[irow + j] = t if prev is None else t / prev
            else:
                # still rescale: keeps the fraction-free invariant so the
                # final pivot is the determinant
                for j in range(c + 1, ncols):
                    t = a[irow + j]
                    if t:
                        t = piv * t
                        a[irow + j] = t if prev is None else t / prev
            a[irow + c] = None
        prev = piv
        pivots.append(c)
        r += 1
    for idx in range(nrows * ncols):
        if a[idx] is None:
            a[idx] = 0
    return pivots, sign, prev
