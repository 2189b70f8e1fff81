"""Array kernels for point enumeration and the pair survey, with backend
selection.

Two interchangeable implementations exist for every kernel: numba JIT
(default when numba imports) and pure numpy, selected with
FREELAT_BACKEND=numba|numpy.  Integer aggregates are identical across
backends; float sums may differ in the last bits because the summation
order differs.  Within one backend, results are bit-stable and
independent of thread count (chunks are reduced in index order).
"""

from __future__ import annotations

import math
import os

import numpy as np

from .errors import ValidationError

_NUMBA_MODULE = None
_NUMBA_FAILED = False


def _numba_kernels():
    global _NUMBA_MODULE, _NUMBA_FAILED
    if _NUMBA_MODULE is None and not _NUMBA_FAILED:
        try:
            from . import fastpath_numba as mod

            _NUMBA_MODULE = mod
        except ImportError:
            _NUMBA_FAILED = True
    return _NUMBA_MODULE


def backend_name():
    """Active kernel backend: "numba" unless unavailable or overridden."""
    choice = os.environ.get("FREELAT_BACKEND", "").strip().lower()
    if choice == "numpy":
        return "numpy"
    if choice == "numba":
        if _numba_kernels() is None:
            raise ValidationError("FREELAT_BACKEND=numba but numba is unavailable")
        return "numba"
    if choice not in ("", "auto"):
        raise ValidationError(f"unknown FREELAT_BACKEND: {choice!r}")
    return "numba" if _numba_kernels() is not None else "numpy"


def _canonical_sort(coords, ns):
    keys = tuple(coords[:, d] for d in reversed(range(coords.shape[1]))) + (ns,)
    order = np.lexsort(keys)
    return np.ascontiguousarray(coords[order]), np.ascontiguousarray(ns[order])


def enumerate_coords(n, max_norm_sq):
    """Canonical primitive points of P^n with norm_sq <= bound, as int64
    arrays sorted by (norm_sq, coords)."""
    if n < 1 or max_norm_sq < 1:
        raise ValidationError("need n >= 1 and max_norm_sq >= 1")
    if backend_name() == "numba" and n == 2:
        coords, ns = _numba_kernels().enumerate_coords_n2(max_norm_sq)
    else:
        coords, ns = _enumerate_coords_numpy(n, max_norm_sq)
    return _canonical_sort(coords, ns)


def _enumerate_coords_numpy(n, max_norm_sq):
    r = math.isqrt(max_norm_sq)
    axis = np.arange(-r, r + 1, dtype=np.int64)
    chunks = []
    for x0 in range(0, r + 1):
        rem = max_norm_sq - x0 * x0
        if n == 1:
            tail = axis.reshape(-1, 1)
        else:
            grids = np.meshgrid(*([axis] * n), indexing="ij")
            tail = np.stack([g.ravel() for g in grids], axis=1)
        rows = np.concatenate(
            [np.full((tail.shape[0], 1), x0, dtype=np.int64), tail], axis=1
        )
        ns = (rows * rows).sum(axis=1)
        keep = (ns >= 1) & (ns <= max_norm_sq)
        rows = rows[keep]
        ns = ns[keep]
        first_idx = np.argmax(rows != 0, axis=1)
        lead = rows[np.arange(len(rows)), first_idx]
        keep = lead > 0
        rows = rows[keep]
        ns = ns[keep]
        g = np.abs(rows[:, 0])
        for d in range(1, n + 1):
            g = np.gcd(g, np.abs(rows[:, d]))
        keep = g == 1
        chunks.append((rows[keep], ns[keep]))
    coords = np.concatenate([c for c, _ in chunks], axis=0)
    ns = np.concatenate([s for _, s in chunks])
    return coords, ns


def point_form_min_n2(coords, ns):
    """Per-point minimum of the integer tangent form and the determinant
    identity flag, for points of P^2."""
    if backend_name() == "numba":
        return _numba_kernels().point_form_min_n2(coords, ns)
    return _point_form_min_n2_py(coords, ns)


def _point_form_min_n2_py(coords, ns):
    from .intmath import xgcd

    n_pts = coords.shape[0]
    fmin = np.empty(n_pts, dtype=np.int64)
    det_ok = np.empty(n_pts, dtype=np.bool_)
    for idx in range(n_pts):
        v0, v1, v2 = (int(coords[idx, 0]), int(coords[idx, 1]), int(coords[idx, 2]))
        nsv = int(ns[idx])
        if v0 == 0 and v1 == 0:
            row1 = (1, 0, 0)
            row2 = (0, 1, 0)
        else:
            g, s, t = xgcd(v0, v1)
            row1 = (-t, s, 0)
            _, u, w = xgcd(g, v2)
            row2 = (-w * (v0 // g), -w * (v1 // g), u)
        p1 = row1[0] * v0 + row1[1] * v1 + row1[2] * v2
        p2 = row2[0] * v0 + row2[1] * v1 + row2[2] * v2
        a = sum(x * x for x in row1) * nsv - p1 * p1
        b = sum(x * y for x, y in zip(row1, row2)) * nsv - p1 * p2
        c = sum(x * x for x in row2) * nsv - p2 * p2
        while True:
            t2 = (2 * b + a) // (2 * a)
            if t2:
                c += t2 * t2 * a - 2 * t2 * b
                b -= t2 * a
            if c < a:
                a, c = c, a
            else:
                break
        fmin[idx] = a
        det_ok[idx] = (a * c - b * b) == nsv
    return fmin, det_ok


def scan_guard_bits(ns_max, prod_max, c_num, c_den):
    """Verify every int64 quantity in the pair scan stays below 2^62.

    Raises ValidationError when the requested parameters would overflow;
    callers should then lower the bounds (or use rational parameters with
    smaller numerators).
    """
    limit = 1 << 62
    w_max = 2 * ns_max  # |2x2 minor| <= 2 * max|coord|^2 <= 2 * ns_max
    checks = {
        "shell key": prod_max,
        "c comparison": max(
            w_max * w_max * prod_max * c_den * c_den,
            c_num * c_num * prod_max,
        ),
    }
    for name, value in checks.items():
        if value >= limit:
            raise ValidationError(
                f"survey parameters overflow int64 at the {name}; "
                "reduce the height bound or simplify C/delta"
            )


def pair_scan(coords, ns, mu_min, log_h, bal_cap, prod_limits,
              c_num_sq, c_den_sq, primes, n_dim, i_start, i_end):
    if backend_name() == "numba":
        return _numba_kernels().pair_scan(
            coords, ns, mu_min, log_h, bal_cap, prod_limits,
            np.int64(c_num_sq), np.int64(c_den_sq), primes, n_dim,
            i_start, i_end,
        )
    return _pair_scan_numpy(
        coords, ns, mu_min, log_h, bal_cap, prod_limits,
        c_num_sq, c_den_sq, primes, n_dim, i_start, i_end,
    )


def _pair_scan_numpy(coords, ns, mu_min, log_h, bal_cap, prod_limits,
                     c_num_sq, c_den_sq, primes, n_dim, i_start, i_end):
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
    min_free = np.full(nb, np.inf)
    min_i = np.full(nb, -1, dtype=np.int64)
    min_j = np.full(nb, -1, dtype=np.int64)
    max_bud = np.full(nb, -np.inf)
    max_c = np.full(nb, -np.inf)
    n_pts = ns.size
    m_last = int(prod_limits[-1])
    nf = float(n_dim)
    for i in range(i_start, i_end):
        nsi = int(ns[i])
        if nsi * nsi > m_last:
            break
        j_hi = int(np.searchsorted(ns, m_last // nsi, side="right"))
        if j_hi <= i + 1:
            continue
        js = slice(i + 1, j_hi)
        nsj = ns[js]
        nsprod = nsi * nsj
        buckets = np.searchsorted(prod_limits, nsprod, side="left")
        np.add.at(total, buckets, 1)
        ci = coords[i]
        block = coords[js]
        dots = block @ ci
        distnum = nsprod - dots * dots
        g = np.zeros(len(nsj), dtype=np.int64)
        for r in range(dim):
            for s in range(r + 1, dim):
                g = np.gcd(g, np.abs(ci[r] * block[:, s] - ci[s] * block[:, r]))
        for pi in range(npr):
            hit = g % primes[pi] == 0
            np.add.at(congr[pi], buckets[hit], 1)
        bal = (nsj <= bal_cap[i]) & (nsi <= bal_cap[js])
        np.add.at(balanced, buckets[bal], 1)
        w1 = bal & (g == 1)
        np.add.at(bal_w1, buckets[w1], 1)
        far = distnum * c_num_sq > nsprod * c_den_sq
        np.add.at(bal_w1_far, buckets[w1 & far], 1)
        member = bal & (g * g * nsprod * c_den_sq < c_num_sq * distnum)
        if not member.any():
            continue
        rows = np.nonzero(member)[0]
        b_s = buckets[rows]
        np.add.at(in_s, b_s, 1)
        mm2 = np.maximum(np.minimum(mu_min[i], mu_min[js][rows]), 0.0)
        lsum = log_h[i] + log_h[js][rows]
        f = 2.0 * nf * mm2 / lsum
        np.add.at(sum_free, b_s, f)
        before = min_free.copy()
        np.minimum.at(min_free, b_s, f)
        for t in np.nonzero(min_free < before)[0]:
            k = rows[np.nonzero((b_s == t) & (f == min_free[t]))[0][0]]
            min_i[t] = i
            min_j[t] = i + 1 + k
        cval = g[rows] * np.sqrt(nsprod[rows] / distnum[rows])
        np.maximum.at(max_c, b_s, cval)
        bud = nf * np.log(cval) / lsum
        np.maximum.at(max_bud, b_s, bud)
    return (total, in_s, balanced, bal_w1, bal_w1_far, congr, sum_free,
            min_free, min_i, min_j, max_bud, max_c)


def count_congruent(coords, prime):
    """(total unordered pairs, pairs congruent mod prime) over a point set."""
    if backend_name() == "numba":
        return _numba_kernels().count_congruent(coords, prime)
    n_pts = coords.shape[0]
    dim = coords.shape[1]
    congruent = 0
    for i in range(n_pts - 1):
        ci = coords[i]
        block = coords[i + 1 :]
        same = np.ones(block.shape[0], dtype=bool)
        for r in range(dim):
            for s in range(r + 1, dim):
                same &= (ci[r] * block[:, s] - ci[s] * block[:, r]) % prime == 0
        congruent += int(same.sum())
    return n_pts * (n_pts - 1) // 2, congruent
