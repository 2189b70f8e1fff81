"""Numba JIT kernels for the survey hot loops.

Importing this module requires numba.  Every kernel here has a
pure-numpy twin in `fastpath`; the driver guarantees all integer work
fits in int64 before either backend is invoked.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

_JIT = dict(cache=True, nogil=True)


@njit(**_JIT)
def _isqrt(x):
    if x < 2:
        return x
    r = int(math.sqrt(float(x)))
    while r * r > x:
        r -= 1
    while (r + 1) * (r + 1) <= x:
        r += 1
    return r


@njit(**_JIT)
def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@njit(**_JIT)
def _xgcd(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        return -old_r, -old_s, -old_t
    return old_r, old_s, old_t


@njit(**_JIT)
def _count_coords_n2(max_norm_sq):
    r = _isqrt(max_norm_sq)
    count = 0
    for x0 in range(0, r + 1):
        rem0 = max_norm_sq - x0 * x0
        r1 = _isqrt(rem0)
        lo1 = 0 if x0 == 0 else -r1
        for x1 in range(lo1, r1 + 1):
            rem1 = rem0 - x1 * x1
            r2 = _isqrt(rem1)
            lo2 = 1 if (x0 == 0 and x1 == 0) else -r2
            for x2 in range(lo2, r2 + 1):
                if _gcd(_gcd(abs(x0), abs(x1)), abs(x2)) == 1:
                    count += 1
    return count


@njit(**_JIT)
def _fill_coords_n2(max_norm_sq, coords, ns):
    r = _isqrt(max_norm_sq)
    count = 0
    for x0 in range(0, r + 1):
        rem0 = max_norm_sq - x0 * x0
        r1 = _isqrt(rem0)
        lo1 = 0 if x0 == 0 else -r1
        for x1 in range(lo1, r1 + 1):
            rem1 = rem0 - x1 * x1
            r2 = _isqrt(rem1)
            lo2 = 1 if (x0 == 0 and x1 == 0) else -r2
            for x2 in range(lo2, r2 + 1):
                if _gcd(_gcd(abs(x0), abs(x1)), abs(x2)) == 1:
                    coords[count, 0] = x0
                    coords[count, 1] = x1
                    coords[count, 2] = x2
                    ns[count] = x0 * x0 + x1 * x1 + x2 * x2
                    count += 1
    return count


def enumerate_coords_n2(max_norm_sq):
    """Canonical primitive vectors of P^2 with norm_sq <= bound (unsorted)."""
    count = _count_coords_n2(max_norm_sq)
    coords = np.empty((count, 3), dtype=np.int64)
    ns = np.empty(count, dtype=np.int64)
    _fill_coords_n2(max_norm_sq, coords, ns)
    return coords, ns


@njit(**_JIT)
def point_form_min_n2(coords, ns):
    """Minimum of the integer tangent form F = ns^2 * Gram, plus the exact
    determinant identity check det(F) == ns, for each point of P^2."""
    n_pts = coords.shape[0]
    fmin = np.empty(n_pts, dtype=np.int64)
    det_ok = np.empty(n_pts, dtype=np.bool_)
    for idx in range(n_pts):
        v0 = coords[idx, 0]
        v1 = coords[idx, 1]
        v2 = coords[idx, 2]
        nsv = ns[idx]
        if v0 == 0 and v1 == 0:
            b10, b11, b12 = 1, 0, 0
            b20, b21, b22 = 0, 1, 0
        else:
            g, s, t = _xgcd(v0, v1)
            b10, b11, b12 = -t, s, 0
            _, u, w = _xgcd(g, v2)
            b20 = -w * (v0 // g)
            b21 = -w * (v1 // g)
            b22 = u
        p1 = b10 * v0 + b11 * v1 + b12 * v2
        p2 = b20 * v0 + b21 * v1 + b22 * v2
        a = (b10 * b10 + b11 * b11 + b12 * b12) * nsv - p1 * p1
        b = (b10 * b20 + b11 * b21 + b12 * b22) * nsv - p1 * p2
        c = (b20 * b20 + b21 * b21 + b22 * b22) * nsv - p2 * p2
        # Lagrange-Gauss reduction of the positive form [[a, b], [b, c]]
        while True:
            t2 = (2 * b + a) // (2 * a)
            if t2 != 0:
                c += t2 * t2 * a - 2 * t2 * b
                b -= t2 * a
            if c < a:
                a, c = c, a
            else:
                break
        fmin[idx] = a
        det_ok[idx] = (a * c - b * b) == nsv
    return fmin, det_ok


@njit(**_JIT)
def pair_scan(coords, ns, mu_min, log_h, bal_cap, prod_limits,
              c_num_sq, c_den_sq, primes, n_dim, i_start, i_end):
    """One chunk of the unordered-pair survey scan.

    Points are sorted by norm_sq ascending; shells are indexed by the
    first entry of prod_limits admitting ns_i * ns_j.  bal_cap[i] is the
    largest partner norm the balance cut allows for point i (computed
    exactly by the caller), so membership needs only int64 comparisons;
    floats only feed statistics.
    """
    dim = coords.shape[1]
    nb = prod_limits.size
    npr = primes.size
    total = np.zeros(nb, dtype=np.int64)
    in_s = np.zeros(nb, dtype=np.int64)
    balanced = np.zeros(nb, dtype=np.int64)
    bal_w1 = np.zeros(nb, dtype=np.int64)
    bal_w1_far = np.zeros(nb, dtype=np.int64)
    congr = np.zeros((npr, nb), dtype=np.int64)
    sum_free = np.zeros(nb, dtype=np.float64)
    min_free = np.full(nb, np.inf, dtype=np.float64)
    min_i = np.full(nb, -1, dtype=np.int64)
    min_j = np.full(nb, -1, dtype=np.int64)
    max_bud = np.full(nb, -np.inf, dtype=np.float64)
    max_c = np.full(nb, -np.inf, dtype=np.float64)
    n_pts = ns.size
    m_last = prod_limits[nb - 1]
    nf = float(n_dim)
    for i in range(i_start, i_end):
        nsi = ns[i]
        if nsi * nsi > m_last:
            break
        j_cap = m_last // nsi
        for j in range(i + 1, n_pts):
            nsj = ns[j]
            if nsj > j_cap:
                break
            nsprod = nsi * nsj
            t = 0
            while prod_limits[t] < nsprod:
                t += 1
            total[t] += 1
            dot = 0
            for d in range(dim):
                dot += coords[i, d] * coords[j, d]
            distnum = nsprod - dot * dot
            g = 0
            for r in range(dim):
                for s in range(r + 1, dim):
                    mm = coords[i, r] * coords[j, s] - coords[i, s] * coords[j, r]
                    if mm < 0:
                        mm = -mm
                    g = _gcd(g, mm)
            for pi in range(npr):
                if g % primes[pi] == 0:
                    congr[pi, t] += 1
            if nsj > bal_cap[i] or nsi > bal_cap[j]:
                continue
            balanced[t] += 1
            if g == 1:
                bal_w1[t] += 1
                if distnum * c_num_sq > nsprod * c_den_sq:
                    bal_w1_far[t] += 1
            if g * g * nsprod * c_den_sq >= c_num_sq * distnum:
                continue
            in_s[t] += 1
            mm2 = mu_min[i] if mu_min[i] < mu_min[j] else mu_min[j]
            if mm2 < 0.0:
                mm2 = 0.0
            lsum = log_h[i] + log_h[j]
            f = 2.0 * nf * mm2 / lsum
            sum_free[t] += f
            if f < min_free[t]:
                min_free[t] = f
                min_i[t] = i
                min_j[t] = j
            cval = g * math.sqrt(float(nsprod) / float(distnum))
            if cval > max_c[t]:
                max_c[t] = cval
            bud = nf * math.log(cval) / lsum
            if bud > max_bud[t]:
                max_bud[t] = bud
    return (total, in_s, balanced, bal_w1, bal_w1_far, congr, sum_free,
            min_free, min_i, min_j, max_bud, max_c)


@njit(**_JIT)
def count_congruent(coords, prime):
    """Unordered pairs congruent mod a prime among all points given."""
    n_pts = coords.shape[0]
    dim = coords.shape[1]
    congruent = 0
    for i in range(n_pts):
        for j in range(i + 1, n_pts):
            same = True
            for r in range(dim):
                if not same:
                    break
                for s in range(r + 1, dim):
                    mm = (coords[i, r] * coords[j, s]
                          - coords[i, s] * coords[j, r]) % prime
                    if mm != 0:
                        same = False
                        break
            if same:
                congruent += 1
    return n_pts * (n_pts - 1) // 2, congruent
