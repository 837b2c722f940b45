"""Pure-Python reference implementation of the hot integer kernels.

All matrices are tuples of tuples of Python ints.  Rational intermediates
only ever carry denominators coprime to p, so every valuation seen here is
the valuation of an integer numerator.  The compiled backend implements the
same algorithms; results are required to be identical.
"""

from fractions import Fraction
from math import gcd

BACKEND_NAME = "pure"


def vp_int(n, p):
    """Valuation of a nonzero integer at p."""
    if n == 0:
        raise ValueError("vp_int(0) is undefined")
    if n < 0:
        n = -n
    if p == 2:
        return (n & -n).bit_length() - 1
    v = 0
    p4 = p * p * p * p
    while n % p4 == 0:
        n //= p4
        v += 4
    while n % p == 0:
        n //= p
        v += 1
    return v


def mat_mul_int(a, b):
    """Product of two square integer matrices (tuples of tuples)."""
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )


def mat_vec_int(a, v):
    n = len(a)
    return tuple(sum(a[i][k] * v[k] for k in range(n)) for i in range(n))


def adj_det_int(a):
    """Adjugate and determinant of a 2x2 or 3x3 integer matrix."""
    n = len(a)
    if n == 2:
        det = a[0][0] * a[1][1] - a[0][1] * a[1][0]
        adj = ((a[1][1], -a[0][1]), (-a[1][0], a[0][0]))
        return adj, det
    if n == 3:
        (a00, a01, a02), (a10, a11, a12), (a20, a21, a22) = a
        c00 = a11 * a22 - a12 * a21
        c01 = a12 * a20 - a10 * a22
        c02 = a10 * a21 - a11 * a20
        c10 = a02 * a21 - a01 * a22
        c11 = a00 * a22 - a02 * a20
        c12 = a01 * a20 - a00 * a21
        c20 = a01 * a12 - a02 * a11
        c21 = a02 * a10 - a00 * a12
        c22 = a00 * a11 - a01 * a10
        det = a00 * c00 + a01 * c01 + a02 * c02
        adj = ((c00, c10, c20), (c01, c11, c21), (c02, c12, c22))
        return adj, det
    raise ValueError("adj_det_int supports sizes 2 and 3 only")


def charpoly3_int(a):
    """(trace, second symmetric function, det) of a 3x3 integer matrix."""
    (a00, a01, a02), (a10, a11, a12), (a20, a21, a22) = a
    tr = a00 + a11 + a22
    s2 = (
        (a11 * a22 - a12 * a21)
        + (a00 * a22 - a02 * a20)
        + (a00 * a11 - a01 * a10)
    )
    det = (
        a00 * (a11 * a22 - a12 * a21)
        - a01 * (a10 * a22 - a12 * a20)
        + a02 * (a10 * a21 - a11 * a20)
    )
    return tr, s2, det


def minor_val_profile(a, p):
    """Minimum valuations of (entries, 2x2 minors, det) of an integer matrix.

    For a 3x3 invertible matrix returns (m1, m2, m3); for 2x2 returns
    (m1, m2) with m2 the valuation of the determinant.
    """
    n = len(a)
    m1 = None
    for row in a:
        for e in row:
            if e != 0:
                v = vp_int(e, p)
                if m1 is None or v < m1:
                    m1 = v
    if m1 is None:
        raise ValueError("zero matrix has no valuation profile")
    if n == 2:
        det = a[0][0] * a[1][1] - a[0][1] * a[1][0]
        if det == 0:
            raise ValueError("singular matrix")
        return m1, vp_int(det, p)
    adj, det = adj_det_int(a)
    if det == 0:
        raise ValueError("singular matrix")
    m2 = None
    for row in adj:
        for e in row:
            if e != 0:
                v = vp_int(e, p)
                if m2 is None or v < m2:
                    m2 = v
    return m1, m2, vp_int(det, p)


def _canonical_residue(x, pa):
    """Canonical integer representative of x in Z_(p)/p^a, x a Fraction."""
    if pa == 1:
        return 0
    num = x.numerator % pa
    den = x.denominator % pa
    if den == 1:
        return num
    return (num * pow(den, -1, pa)) % pa


def hnf_int(rows, p):
    """Canonical lattice normal form of an integer matrix over Z_(p).

    Columns generate the lattice.  Accepts n x m with m >= n and full row
    rank; returns (rows, den) where rows is the canonical n x n upper
    triangular matrix (diagonal entries are p-powers, entries above a
    diagonal p^a reduced into [0, p^a)) and den is the p-power making the
    minimal diagonal valuation zero.  Two generating matrices of the same
    lattice class (up to GL(Z_(p)) column action and global p-power
    scaling) produce identical output.
    """
    n = len(rows)
    m = len(rows[0])
    work = [[Fraction(e) for e in row] for row in rows]
    pcol = m - 1
    diag_exp = [0] * n
    for i in range(n - 1, -1, -1):
        best = -1
        bestv = 0
        for j in range(pcol + 1):
            x = work[i][j]
            if x != 0:
                v = vp_int(x.numerator, p)
                if best < 0 or v < bestv:
                    best, bestv = j, v
        if best < 0:
            raise ValueError("matrix does not have full row rank over Z_(p)")
        if best != pcol:
            for r in range(n):
                work[r][best], work[r][pcol] = work[r][pcol], work[r][best]
        piv = p ** bestv
        unit = Fraction(piv) / work[i][pcol]
        for r in range(i + 1):
            work[r][pcol] *= unit
        diag_exp[i] = bestv
        for j in range(pcol):
            x = work[i][j]
            if x != 0:
                q = x / piv
                for r in range(i + 1):
                    work[r][j] -= q * work[r][pcol]
                work[i][j] = Fraction(0)
        pcol -= 1
    off = m - n
    for j in range(off):
        for r in range(n):
            if work[r][j] != 0:
                raise ValueError("matrix does not have full row rank over Z_(p)")
    # reduce above-diagonal entries: process columns left to right, rows
    # bottom-up inside each column so later updates land on unreduced slots
    for j in range(1, n):
        cj = off + j
        for i in range(j - 1, -1, -1):
            pa = p ** diag_exp[i]
            r = _canonical_residue(work[i][cj], pa)
            q = (work[i][cj] - r) / pa
            if q != 0:
                ci = off + i
                for k in range(i + 1):
                    work[k][cj] -= q * work[k][ci]
            work[i][cj] = Fraction(r)
    for i in range(n):
        for j in range(n):
            if work[i][off + j].denominator != 1:
                raise AssertionError("canonical form must be integral")
    out = tuple(
        tuple(int(work[i][off + j]) for j in range(n)) for i in range(n)
    )
    s = min(diag_exp)
    return out, p ** s


def smith_transform_int(rows, p):
    """Smith decomposition data over Z_(p) for an invertible integer matrix.

    Returns (u_rows, u_den, exps): exps are the elementary divisor
    valuations in ascending order and U = u_rows / u_den is a matrix in
    GL_n(Z_(p)) such that rows = U . diag(p^exps) . V for some V in
    GL_n(Z_(p)).  The columns of U are a divisor-adapted basis, column k
    matching exps[k].
    """
    n = len(rows)
    work = [[Fraction(e) for e in row] for row in rows]
    u = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    exps = []
    for s in range(n):
        bi = bj = -1
        bestv = 0
        for i in range(s, n):
            for j in range(s, n):
                x = work[i][j]
                if x != 0:
                    v = vp_int(x.numerator, p)
                    if bi < 0 or v < bestv:
                        bi, bj, bestv = i, j, v
        if bi < 0:
            raise ValueError("singular matrix in smith_transform_int")
        if bi != s:
            work[s], work[bi] = work[bi], work[s]
            for r in range(n):
                u[r][s], u[r][bi] = u[r][bi], u[r][s]
        if bj != s:
            for r in range(n):
                work[r][s], work[r][bj] = work[r][bj], work[r][s]
        piv = p ** bestv
        unit = Fraction(piv) / work[s][s]
        for c in range(s, n):
            work[s][c] *= unit
        inv_unit = 1 / unit
        for r in range(n):
            u[r][s] *= inv_unit
        for i in range(s + 1, n):
            x = work[i][s]
            if x != 0:
                q = x / piv
                for c in range(s, n):
                    work[i][c] -= q * work[s][c]
                for r in range(n):
                    u[r][s] += q * u[r][i]
        for j in range(s + 1, n):
            x = work[s][j]
            if x != 0:
                q = x / piv
                for r in range(s, n):
                    work[r][j] -= q * work[r][s]
        exps.append(bestv)
    den = 1
    for row in u:
        for x in row:
            den = den * x.denominator // gcd(den, x.denominator)
    u_rows = tuple(
        tuple(int(x * den) for x in row) for row in u
    )
    return u_rows, den, tuple(exps)
