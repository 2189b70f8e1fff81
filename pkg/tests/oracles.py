"""Independent brute-force oracles for the test suite.

Nothing here shares search machinery with the package: short vectors come
from an exact box scan, minimal covolumes from a saturated-sublattice
subset scan (with sympy Smith forms spot-checking the index formula),
congruence moduli from direct equality tests in P^n(Z/m), and the survey
reference from the exact pair operations applied pair by pair.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations

import numpy as np
import sympy
from sympy.matrices.normalforms import invariant_factors

from freelat.exactlinalg import frac_inverse
from freelat.intmath import introot
from freelat.lattice import hermite_pow
from freelat.pairs import in_s, make_pair
from freelat.projective import enumerate_points, pair_freeness


def box_short_vectors(gram, bound_sq):
    """All +-pair representatives with v^T G v <= bound, by box scan.

    Uses |x_i|^2 <= bound * (G^-1)_ii (valid for any positive-definite G)
    and keeps candidates by an exact rational norm comparison; the
    quadratic form is evaluated in exact integers after clearing
    denominators.
    """
    bound = Fraction(bound_sq)
    m = len(gram)
    inv = frac_inverse(gram)
    radii = []
    for i in range(m):
        limit = bound * inv[i][i]
        radii.append(introot(limit.numerator // limit.denominator, 2))
    den = 1
    for row in gram:
        for e in row:
            den = den * e.denominator // math.gcd(den, e.denominator)
    g_int = np.array(
        [[int(e * den) for e in row] for row in gram], dtype=np.int64
    )
    scaled = bound * den  # compare v^T (den G) v <= scaled exactly
    # overflow guard for the int64 evaluation below
    worst = int(np.abs(g_int).max()) * (sum(r + 1 for r in radii)) ** 2
    assert worst < 1 << 62, "box scan would overflow int64"
    axes = [np.arange(-r, r + 1, dtype=np.int64) for r in radii]
    grids = np.meshgrid(*axes, indexing="ij")
    cells = np.stack([g.ravel() for g in grids], axis=1)
    q = ((cells @ g_int) * cells).sum(axis=1)
    keep = (q * scaled.denominator <= scaled.numerator) & (cells != 0).any(axis=1)
    cells = cells[keep]
    q = q[keep]
    first = np.argmax(cells != 0, axis=1)
    lead = cells[np.arange(len(cells)), first]
    cells = np.where((lead < 0)[:, None], -cells, cells)
    dedup = {}
    for row, qv in zip(cells, q):
        dedup[tuple(int(x) for x in row)] = Fraction(int(qv), den)
    return sorted(dedup.items(), key=lambda item: (item[1], item[0]))


def _saturation_index_smith(rows):
    divisors = invariant_factors(sympy.Matrix(rows))
    idx = 1
    for d in divisors:
        if d != 0:
            idx *= int(abs(d))
    return idx


def _det_small(rows):
    k = len(rows)
    if k == 1:
        return rows[0][0]
    if k == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    if k == 3:
        a, b, c = rows[0]
        d, e, f = rows[1]
        g, h, i = rows[2]
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    total = 0
    sign = 1
    for col in range(k):
        minor = [[row[c] for c in range(k) if c != col] for row in rows[1:]]
        total += sign * rows[0][col] * _det_small(minor)
        sign = -sign
    return total


def _minor_gcd(rows, k):
    cols = len(rows[0])
    g = 0
    for sel in combinations(range(cols), k):
        sub = [[row[c] for c in sel] for row in rows]
        g = math.gcd(g, abs(_det_small(sub)))
    return g


def _gram_det(vectors, gram):
    rows = []
    for v in vectors:
        gv = [sum(gram[a][b] * v[b] for b in range(len(v))) for a in range(len(v))]
        rows.append([sum(Fraction(w[a]) * gv[a] for a in range(len(w))) for w in vectors])
    return _det_small_frac(rows)


def _det_small_frac(rows):
    return _det_small(rows)


def _greedy_minima_and_incumbent(vectors, gram, k):
    """Successive minima + incumbent det from greedy independent picks."""
    chosen = []
    norms = []
    for v, ns in vectors:
        mat = sympy.Matrix(chosen + [list(v)])
        if mat.rank() > len(chosen):
            chosen.append(list(v))
            norms.append(ns)
            if len(chosen) == k:
                break
    assert len(chosen) == k, "enumeration radius missed k independent vectors"
    idx = _saturation_index_smith(chosen)
    return norms, _gram_det(chosen, gram) / (idx * idx)


def oracle_covolumes_sq(gram, smith_samples=4):
    """Exhaustive minimal squared covolumes q(0..m) over saturated
    sublattices.

    Scans every k-subset of lattice vectors inside a radius that its own
    incumbent certifies exhaustive (Minkowski: any better sublattice is
    spanned by vectors of squared norm <= gamma^k q / prod of the k-1
    smallest squared minima).  A sample of subsets is cross-checked
    against sympy Smith normal forms.
    """
    m = len(gram)
    out = [None] * (m + 1)
    out[0] = Fraction(1)
    out[m] = _det_small_frac([[Fraction(x) for x in row] for row in gram])
    if m == 1:
        return out
    max_diag = max(gram[i][i] for i in range(m))
    radius = max_diag  # the basis vectors give m independents already
    vectors = box_short_vectors(gram, radius)
    needs = {}
    incumbents = {}
    for k in range(1, m):
        mins, q_inc = _greedy_minima_and_incumbent(vectors, gram, k)
        need = hermite_pow(k) * q_inc
        for lam in mins[: k - 1]:
            need /= lam
        needs[k] = need
        incumbents[k] = q_inc
    top = max(needs.values())
    if top > radius:
        vectors = box_short_vectors(gram, top)
    for k in range(1, m):
        best = incumbents[k]
        pool = [v for v in vectors if v[1] <= needs[k]]
        checked = 0
        for subset in combinations(range(len(pool)), k):
            vs = [list(pool[i][0]) for i in subset]
            idx = _minor_gcd(vs, k)
            if idx == 0:
                continue  # dependent set
            d = _gram_det(vs, gram)
            if checked < smith_samples:
                assert idx == _saturation_index_smith(vs)
                checked += 1
            cand = d / (idx * idx)
            if cand < best:
                best = cand
        out[k] = best
    return out


def oracle_min_covolume_sq(gram, k):
    return oracle_covolumes_sq(gram)[k]


def oracle_slopes(gram, covolumes):
    """Float upper concave hull of (k, -1/2 log q(k)) and its slopes."""
    m = len(covolumes) - 1
    ys = [-0.5 * (math.log(q.numerator) - math.log(q.denominator))
          for q in covolumes]
    hull = [0]
    for k in range(1, m + 1):
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            lhs = (ys[b] - ys[a]) * (k - b)
            rhs = (ys[k] - ys[b]) * (b - a)
            if lhs <= rhs + 1e-12:
                hull.pop()
            else:
                break
        hull.append(k)
    slopes = []
    for a, b in zip(hull, hull[1:]):
        s = (ys[b] - ys[a]) / (b - a)
        slopes.extend([s] * (b - a))
    return slopes


def brute_equal_mod(p1, p2, modulus):
    """Equality in P^n(Z/m) by scanning scalar multipliers directly."""
    a = [c % modulus for c in p1.coords]
    b = [c % modulus for c in p2.coords]
    for u in range(1, modulus):
        if math.gcd(u, modulus) != 1:
            continue
        if all((u * x - y) % modulus == 0 for x, y in zip(b, a)):
            return True
    return False


def equal_mod_prime_power(p1, p2, prime, exponent):
    """Equality in P^n(Z/p^e) via the unit coordinate of the second point."""
    m = prime ** exponent
    a = [c % m for c in p1.coords]
    b = [c % m for c in p2.coords]
    pivot = next((i for i, x in enumerate(b) if x % prime != 0), None)
    assert pivot is not None, "primitive vector has a unit coordinate mod p"
    if a[pivot] % prime == 0:
        return False
    u = a[pivot] * pow(b[pivot], -1, m) % m
    return all((u * x - y) % m == 0 for x, y in zip(b, a))


def oracle_congruence_table(p1, p2, w_max):
    """For every modulus 2..w_max: is p1 == p2 in P^n(Z/m)?  Assembled by
    CRT from prime-power equalities."""
    pp = {}
    for prime in range(2, w_max + 1):
        if any(prime % q == 0 for q in range(2, math.isqrt(prime) + 1)):
            continue
        e = 1
        while prime ** e <= w_max:
            pp[(prime, e)] = equal_mod_prime_power(p1, p2, prime, e)
            e += 1
    table = {}
    for m in range(2, w_max + 1):
        rest = m
        good = True
        prime = 2
        while rest > 1:
            if prime * prime > rest:
                prime = rest
            if rest % prime == 0:
                e = 0
                while rest % prime == 0:
                    rest //= prime
                    e += 1
                if not pp[(prime, e)]:
                    good = False
                    break
            else:
                prime += 1
        table[m] = good
    return table


def reference_survey(n, bounds, c_bound, delta):
    """Tiny exact survey using only the pair-level operations."""
    m_last = introot(bounds[-1] ** 2 - 1, n + 1)
    points = [p for p in enumerate_points(n, m_last // 2) if p.norm_sq >= 2]
    pair_stats = []
    for i, p1 in enumerate(points):
        for p2 in points[i + 1 :]:
            key = p1.norm_sq * p2.norm_sq
            if key ** (n + 1) >= bounds[-1] ** 2:
                continue
            pair = make_pair(p1, p2)
            member = in_s(pair, c_bound, delta)
            free = pair_freeness(p1, p2).direct if member else None
            pair_stats.append((key, member, free))
    rows = []
    for b in bounds:
        sel = [s for s in pair_stats if s[0] ** (n + 1) < b * b]
        members = [s for s in sel if s[1]]
        rows.append(
            {
                "B": b,
                "pairs_total": len(sel),
                "pairs_in_S": len(members),
                "min": min((s[2] for s in members), default=None),
                "mean": (sum(s[2] for s in members) / len(members))
                if members
                else None,
            }
        )
    return rows
