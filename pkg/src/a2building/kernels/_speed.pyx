# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of the pure kernels.

Same exact algorithms over arbitrary-precision ints; rationals are carried
as (numerator, denominator) pairs in parallel lists instead of Fraction
objects.  Every function must return bit-identical results to the pure
backend.
"""

from math import gcd

BACKEND_NAME = "speed"


def vp_int(n, p):
    """Valuation of a nonzero integer at p."""
    cdef int v
    if n == 0:
        raise ValueError("vp_int(0) is undefined")
    if n < 0:
        n = -n
    if p == 2:
        return ((n & -n)).bit_length() - 1
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
    cdef Py_ssize_t n = len(a)
    cdef Py_ssize_t i, j, k
    out = []
    for i in range(n):
        ai = a[i]
        row = []
        for j in range(n):
            acc = 0
            for k in range(n):
                acc += ai[k] * b[k][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_vec_int(a, v):
    cdef Py_ssize_t n = len(a)
    cdef Py_ssize_t i, k
    out = []
    for i in range(n):
        acc = 0
        for k in range(n):
            acc += a[i][k] * v[k]
        out.append(acc)
    return tuple(out)


def adj_det_int(a):
    cdef Py_ssize_t n = len(a)
    if n == 2:
        det = a[0][0] * a[1][1] - a[0][1] * a[1][0]
        return ((a[1][1], -a[0][1]), (-a[1][0], a[0][0])), det
    if n != 3:
        raise ValueError("adj_det_int supports sizes 2 and 3 only")
    a00 = a[0][0]; a01 = a[0][1]; a02 = a[0][2]
    a10 = a[1][0]; a11 = a[1][1]; a12 = a[1][2]
    a20 = a[2][0]; a21 = a[2][1]; a22 = a[2][2]
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
    return ((c00, c10, c20), (c01, c11, c21), (c02, c12, c22)), det


def charpoly3_int(a):
    a00 = a[0][0]; a01 = a[0][1]; a02 = a[0][2]
    a10 = a[1][0]; a11 = a[1][1]; a12 = a[1][2]
    a20 = a[2][0]; a21 = a[2][1]; a22 = a[2][2]
    tr = a00 + a11 + a22
    s2 = (a11 * a22 - a12 * a21) + (a00 * a22 - a02 * a20) + (a00 * a11 - a01 * a10)
    det = (
        a00 * (a11 * a22 - a12 * a21)
        - a01 * (a10 * a22 - a12 * a20)
        + a02 * (a10 * a21 - a11 * a20)
    )
    return tr, s2, det


def minor_val_profile(a, p):
    cdef Py_ssize_t n = len(a)
    cdef int have = 0
    m1 = 0
    for row in a:
        for e in row:
            if e != 0:
                v = vp_int(e, p)
                if (not have) or v < m1:
                    m1 = v
                    have = 1
    if not have:
        raise ValueError("zero matrix has no valuation profile")
    if n == 2:
        det = a[0][0] * a[1][1] - a[0][1] * a[1][0]
        if det == 0:
            raise ValueError("singular matrix")
        return m1, vp_int(det, p)
    adj, det = adj_det_int(a)
    if det == 0:
        raise ValueError("singular matrix")
    have = 0
    m2 = 0
    for row in adj:
        for e in row:
            if e != 0:
                v = vp_int(e, p)
                if (not have) or v < m2:
                    m2 = v
                    have = 1
    return m1, m2, vp_int(det, p)


cdef inline object _vp_pair(object num, object den, object p):
    return vp_int(num, p) - vp_int(den, p)


cdef inline tuple _q_reduce(object num, object den):
    if num == 0:
        return 0, 1
    g = gcd(num if num >= 0 else -num, den)
    if g > 1:
        return num // g, den // g
    return num, den


cdef inline object _residue_pair(object num, object den, object p, object pa):
    """Canonical representative of (num/den) mod p^a, valuation >= 0."""
    if pa == 1:
        return 0
    k = 0
    d = den
    while d % p == 0:
        d //= p
        k += 1
    if k:
        num = num // (p ** k)
    nm = num % pa
    dm = d % pa
    if dm == 1:
        return nm
    return (nm * pow(dm, -1, pa)) % pa


def hnf_int(rows, p):
    """Canonical lattice normal form; mirrors the pure backend exactly."""
    cdef Py_ssize_t n = len(rows)
    cdef Py_ssize_t m = len(rows[0])
    cdef Py_ssize_t i, j, r, k, pcol, best, off, ci, cj
    num = [[e for e in row] for row in rows]
    den = [[1] * m for _ in range(n)]
    diag_exp = [0] * n
    pcol = m - 1
    for i in range(n - 1, -1, -1):
        best = -1
        bestv = 0
        for j in range(pcol + 1):
            if num[i][j] != 0:
                v = vp_int(num[i][j], p) - vp_int(den[i][j], p)
                if best < 0 or v < bestv:
                    best = j
                    bestv = v
        if best < 0:
            raise ValueError("matrix does not have full row rank over Z_(p)")
        if best != pcol:
            for r in range(n):
                num[r][best], num[r][pcol] = num[r][pcol], num[r][best]
                den[r][best], den[r][pcol] = den[r][pcol], den[r][best]
        piv = p ** bestv
        # scale the pivot column by piv / entry
        un = piv * den[i][pcol]
        ud = num[i][pcol]
        if ud < 0:
            un, ud = -un, -ud
        un, ud = _q_reduce(un, ud)
        for r in range(i + 1):
            nn = num[r][pcol] * un
            dd = den[r][pcol] * ud
            nn, dd = _q_reduce(nn, dd)
            num[r][pcol] = nn
            den[r][pcol] = dd
        diag_exp[i] = bestv
        for j in range(pcol):
            if num[i][j] != 0:
                qn = num[i][j]
                qd = den[i][j] * piv
                qn, qd = _q_reduce(qn, qd)
                for r in range(i + 1):
                    nn = num[r][j] * qd * den[r][pcol] - qn * num[r][pcol] * den[r][j]
                    dd = den[r][j] * qd * den[r][pcol]
                    nn, dd = _q_reduce(nn, dd)
                    num[r][j] = nn
                    den[r][j] = dd
                num[i][j] = 0
                den[i][j] = 1
        pcol -= 1
    off = m - n
    for j in range(off):
        for r in range(n):
            if num[r][j] != 0:
                raise ValueError("matrix does not have full row rank over Z_(p)")
    for j in range(1, n):
        cj = off + j
        for i in range(j - 1, -1, -1):
            pa = p ** diag_exp[i]
            rres = _residue_pair(num[i][cj], den[i][cj], p, pa)
            # q = (entry - rres) / p^a
            qn = num[i][cj] - rres * den[i][cj]
            qd = den[i][cj] * pa
            qn, qd = _q_reduce(qn, qd)
            if qn != 0:
                ci = off + i
                for k in range(i + 1):
                    nn = num[k][cj] * qd * den[k][ci] - qn * num[k][ci] * den[k][cj]
                    dd = den[k][cj] * qd * den[k][ci]
                    nn, dd = _q_reduce(nn, dd)
                    num[k][cj] = nn
                    den[k][cj] = dd
            num[i][cj] = rres
            den[i][cj] = 1
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            if den[i][off + j] != 1:
                raise AssertionError("canonical form must be integral")
            row.append(num[i][off + j])
        out.append(tuple(row))
    s = min(diag_exp)
    return tuple(out), p ** s


def smith_transform_int(rows, p):
    """Smith decomposition data over Z_(p); mirrors the pure backend."""
    cdef Py_ssize_t n = len(rows)
    cdef Py_ssize_t s, i, j, r, c, bi, bj
    num = [[e for e in row] for row in rows]
    den = [[1] * n for _ in range(n)]
    unum = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    uden = [[1] * n for _ in range(n)]
    exps = []
    for s in range(n):
        bi = -1
        bj = -1
        bestv = 0
        for i in range(s, n):
            for j in range(s, n):
                if num[i][j] != 0:
                    v = vp_int(num[i][j], p) - vp_int(den[i][j], p)
                    if bi < 0 or v < bestv:
                        bi = i
                        bj = j
                        bestv = v
        if bi < 0:
            raise ValueError("singular matrix in smith_transform_int")
        if bi != s:
            num[s], num[bi] = num[bi], num[s]
            den[s], den[bi] = den[bi], den[s]
            for r in range(n):
                unum[r][s], unum[r][bi] = unum[r][bi], unum[r][s]
                uden[r][s], uden[r][bi] = uden[r][bi], uden[r][s]
        if bj != s:
            for r in range(n):
                num[r][s], num[r][bj] = num[r][bj], num[r][s]
                den[r][s], den[r][bj] = den[r][bj], den[r][s]
        piv = p ** bestv
        # scale row s by piv / pivot entry
        un = piv * den[s][s]
        ud = num[s][s]
        if ud < 0:
            un, ud = -un, -ud
        un, ud = _q_reduce(un, ud)
        for c in range(s, n):
            nn = num[s][c] * un
            dd = den[s][c] * ud
            nn, dd = _q_reduce(nn, dd)
            num[s][c] = nn
            den[s][c] = dd
        # U column s scaled by the inverse unit
        for r in range(n):
            nn = unum[r][s] * ud
            dd = uden[r][s] * un
            if dd < 0:
                nn, dd = -nn, -dd
            nn, dd = _q_reduce(nn, dd)
            unum[r][s] = nn
            uden[r][s] = dd
        for i in range(s + 1, n):
            if num[i][s] != 0:
                qn = num[i][s]
                qd = den[i][s] * piv
                qn, qd = _q_reduce(qn, qd)
                for c in range(s, n):
                    nn = num[i][c] * qd * den[s][c] - qn * num[s][c] * den[i][c]
                    dd = den[i][c] * qd * den[s][c]
                    nn, dd = _q_reduce(nn, dd)
                    num[i][c] = nn
                    den[i][c] = dd
                for r in range(n):
                    nn = unum[r][s] * qd * uden[r][i] + qn * unum[r][i] * uden[r][s]
                    dd = uden[r][s] * qd * uden[r][i]
                    nn, dd = _q_reduce(nn, dd)
                    unum[r][s] = nn
                    uden[r][s] = dd
        for j in range(s + 1, n):
            if num[s][j] != 0:
                qn = num[s][j]
                qd = den[s][j] * piv
                qn, qd = _q_reduce(qn, qd)
                for r in range(s, n):
                    nn = num[r][j] * qd * den[r][s] - qn * num[r][s] * den[r][j]
                    dd = den[r][j] * qd * den[r][s]
                    nn, dd = _q_reduce(nn, dd)
                    num[r][j] = nn
                    den[r][j] = dd
        exps.append(bestv)
    dall = 1
    for r in range(n):
        for c in range(n):
            g = gcd(dall, uden[r][c])
            dall = dall * (uden[r][c] // g)
    u_rows = []
    for r in range(n):
        row = []
        for c in range(n):
            row.append(unum[r][c] * (dall // uden[r][c]))
        u_rows.append(tuple(row))
    return tuple(u_rows), dall, tuple(exps)
