"""Pure-Python kernels: dense object matrix multiply and Bareiss elimination.

Mirror of the compiled extension `workbench._kern`; used when the extension
is unavailable.  Entries are opaque Python objects supporting +, -, *, /,
bool.  Matrices are flat row-major lists.
"""


def matmul(a, b, n, k, m):
    """(n x k) @ (k x m) -> flat n x m list."""
    out = [None] * (n * m)
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


def row_reduce(a, nrows, ncols):
    """In-place fraction-free (Bareiss) elimination with row pivoting.

    Returns (pivot_columns, sign, prev) where `prev` is the final pivot
    value: for a square full-rank matrix the determinant is sign * prev.
    `a` is left in row-echelon form (entries below pivots cleared).
    """
    sign = 1
    prev = None
    r = 0
    pivots = []
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
            pr, pp = p * ncols, r * ncols
            for j in range(ncols):
                a[pp + j], a[pr + j] = a[pr + j], a[pp + j]
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
    n2 = nrows * ncols
    for idx in range(n2):
        if a[idx] is None:
            a[idx] = 0
    return pivots, sign, prev
