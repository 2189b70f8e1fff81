"""Euclidean integer lattices, exact short-vector enumeration, and slope
profiles.

A lattice is described by an exact rational Gram matrix.  All covolume
comparisons (hull tie-breaks, search certificates) are decided in exact
rational arithmetic; logarithms appear only at the boundary, as 128-bit
floats, when a profile is materialized.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp

from .errors import ResourceLimitError, ValidationError
from .exactlinalg import (
    frac_det,
    frac_inverse,
    gram_matrix,
    inner,
    int_minor_gcd,
    ldl_decompose,
    rank_of_int_rows,
    unimodular_completion,
)
from .intmath import introot_ceil, vec_gcd

_MP = mp.clone()
_MP.prec = 128

_DEFAULT_VECTOR_CAP = 5_000_000

# Exact k-th powers of the Hermite constants gamma_k for k <= 8, then
# Hermite's inequality gamma_k <= (4/3)^((k-1)/2) as a rational upper bound.
_HERMITE_POW = {
    1: Fraction(1),
    2: Fraction(4, 3),
    3: Fraction(2),
    4: Fraction(4),
    5: Fraction(8),
    6: Fraction(64, 3),
    7: Fraction(64),
    8: Fraction(256),
}


def hermite_pow(k):
    """Rational upper bound for gamma_k ** k (exact for k <= 8)."""
    if k in _HERMITE_POW:
        return _HERMITE_POW[k]
    return Fraction(4, 3) ** (k * (k - 1) // 2)


def vector_cap():
    raw = os.environ.get("FREELAT_MAX_VECTORS")
    if raw is None:
        return _DEFAULT_VECTOR_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ValidationError(f"FREELAT_MAX_VECTORS must be an integer: {raw!r}") from exc
    if cap <= 0:
        raise ValidationError("FREELAT_MAX_VECTORS must be positive")
    return cap


def _as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return Fraction(int(x[0]), int(x[1]))
    if isinstance(x, float):
        return Fraction(x)
    return Fraction(x)


@dataclass(frozen=True)
class GramLattice:
    """Rank-m integer lattice given by an exact rational Gram matrix."""

    rank: int
    gram: tuple

    def __post_init__(self):
        if self.rank < 1:
            raise ValidationError("rank must be positive")
        if len(self.gram) != self.rank or any(len(r) != self.rank for r in self.gram):
            raise ValidationError("gram matrix must be rank x rank")
        for i in range(self.rank):
            for j in range(i + 1, self.rank):
                if self.gram[i][j] != self.gram[j][i]:
                    raise ValidationError("gram matrix must be symmetric")
        ldl_decompose(self.gram)  # raises unless positive definite

    @classmethod
    def from_rows(cls, rows):
        gram = tuple(tuple(_as_fraction(x) for x in row) for row in rows)
        return cls(rank=len(gram), gram=gram)

    @classmethod
    def identity(cls, rank):
        return cls.from_rows(
            [[1 if i == j else 0 for j in range(rank)] for i in range(rank)]
        )

    def det(self):
        return frac_det(self.gram)

    def scale(self, t_sq):
        """Gram matrix scaled by the positive rational t^2."""
        t_sq = Fraction(t_sq)
        if t_sq <= 0:
            raise ValidationError("scale factor must be positive")
        return GramLattice.from_rows(
            [[e * t_sq for e in row] for row in self.gram]
        )

    def to_json(self):
        flat = [[e.numerator, e.denominator] for row in self.gram for e in row]
        return {"rank": self.rank, "gram": flat}

    @classmethod
    def from_json(cls, obj):
        rank = int(obj["rank"])
        raw = obj["gram"]
        if len(raw) == rank and raw and isinstance(raw[0], (list, tuple)) \
                and len(raw[0]) == rank and isinstance(raw[0][0], (list, tuple)):
            rows = raw  # nested rows of [num, den]
        else:
            if len(raw) != rank * rank:
                raise ValidationError("gram entry list has wrong length")
            rows = [raw[i * rank : (i + 1) * rank] for i in range(rank)]
        return cls.from_rows(rows)


def direct_sum(lat1, lat2):
    """Orthogonal sum: block-diagonal Gram, ranks add, determinants multiply."""
    m1, m2 = lat1.rank, lat2.rank
    zero = Fraction(0)
    rows = []
    for i in range(m1):
        rows.append(tuple(lat1.gram[i]) + (zero,) * m2)
    for i in range(m2):
        rows.append((zero,) * m1 + tuple(lat2.gram[i]))
    return GramLattice(rank=m1 + m2, gram=tuple(rows))


def enumerate_short_vectors(lattice, bound_sq, *, max_vectors=None):
    """All lattice vectors with v^T G v <= bound_sq, one per +-pair.

    Representatives are sign-normalized (first nonzero coordinate
    positive) and returned as (coords, norm_sq) sorted by (norm_sq,
    coords).  Complete by construction: the Fincke-Pohst bounds at every
    level are rational inequalities decided exactly.
    """
    bound = Fraction(bound_sq)
    if bound <= 0:
        raise ValidationError("enumeration bound must be positive")
    cap = max_vectors if max_vectors is not None else vector_cap()
    m = lattice.rank
    diag, upper = ldl_decompose(lattice.gram)
    found = []
    coeff = [0] * m

    def descend(level, budget, tail_zero):
        if level < 0:
            if not tail_zero:
                v = tuple(coeff)
                if next(x for x in v if x) < 0:
                    v = tuple(-x for x in v)
                found.append((v, bound - budget))
                if len(found) > cap:
                    raise ResourceLimitError(
                        "short-vector enumeration exceeded its cap; "
                        "shrink the bound or raise FREELAT_MAX_VECTORS",
                        count=len(found),
                        cap=cap,
                    )
            return
        center = sum(
            (upper[level][j] * coeff[j] for j in range(level + 1, m)),
            Fraction(0),
        )
        t = budget / diag[level]
        lo = -_floor_center_plus_sqrt(center, t)
        hi = _floor_center_plus_sqrt(-center, t)
        if tail_zero and lo < 0:
            lo = 0
        for x in range(lo, hi + 1):
            coeff[level] = x
            used = diag[level] * (x + center) ** 2
            descend(level - 1, budget - used, tail_zero and x == 0)
        coeff[level] = 0

    descend(m - 1, bound, True)
    found.sort(key=lambda item: (item[1], item[0]))
    return found


def _floor_center_plus_sqrt(c, t):
    """floor(c + sqrt(t)) for Fractions c and t >= 0, exact.

    A float gives the initial guess; the answer is fixed up with exact
    rational comparisons, so float rounding never changes the result.
    """
    guess = int(math.floor(float(c) + math.sqrt(float(t))))

    def ok(x):
        d = x - c
        return d <= 0 or d * d <= t

    while ok(guess + 1):
        guess += 1
    while not ok(guess):
        guess -= 1
    return guess


def successive_minima_sq(lattice, count=None):
    """First `count` successive minima (squared) with attaining vectors.

    Doubles the enumeration radius until `count` linearly independent
    vectors appear; greedy selection in norm order then realizes the
    minima exactly.
    """
    m = lattice.rank
    count = m if count is None else count
    if not 1 <= count <= m:
        raise ValidationError("count must be in 1..rank")
    radius = min(lattice.gram[i][i] for i in range(m))
    while True:
        vectors = enumerate_short_vectors(lattice, radius)
        chosen = []
        norms = []
        for v, nsq in vectors:
            if rank_of_int_rows(chosen + [list(v)]) > len(chosen):
                chosen.append(list(v))
                norms.append(nsq)
                if len(chosen) == count:
                    return norms, [tuple(c) for c in chosen]
        radius *= 2


def min_covolume_sq(lattice, k):
    """Minimum of det Gram(L') over rank-k sublattices L' of the lattice.

    It is enough to search saturated sublattices (saturating only shrinks
    the covolume), and every candidate is certified optimal with exact
    rational Hermite-style bounds before the search stops.
    """
    if not 0 <= k <= lattice.rank:
        raise ValidationError("k must be in 0..rank")
    return _min_cov(lattice.gram, k)


def _min_cov(gram, k):
    m = len(gram)
    if k == 0:
        return Fraction(1)
    if k == m:
        return frac_det(gram)
    # scaling covariance: q(k) of s*gram is s^k * q(k), so clear all
    # denominators once and keep the search in integer Gram matrices
    scale = 1
    for row in gram:
        for e in row:
            scale = scale * e.denominator // math.gcd(scale, e.denominator)
    if scale > 1:
        scaled = tuple(tuple(e * scale for e in row) for row in gram)
        return _min_cov(scaled, k) / Fraction(scale) ** k
    lat = GramLattice(rank=m, gram=gram)
    if k == 1:
        norms, _ = successive_minima_sq(lat, 1)
        return norms[0]
    if k == m - 1:
        # Saturated corank-1 sublattices are kernels of primitive dual
        # vectors w, with det = det(L) * |w|^2 in the dual metric.
        det = frac_det(gram)
        dual = GramLattice.from_rows(frac_inverse(gram))
        norms, _ = successive_minima_sq(dual, 1)
        return det * norms[0]
    return _interior_min_cov(lat, k)


def _interior_min_cov(lat, k):
    """Search 2 <= k <= rank-2 by recursing on projections across a short
    primitive vector; iterative deepening is unnecessary because the
    initial incumbent already certifies the enumeration radius."""
    gram = lat.gram
    norms, vecs = successive_minima_sq(lat, k)
    q_star = _saturated_span_det(vecs, gram)
    gamma = hermite_pow(k)
    radius = _rational_upper_root(gamma * q_star, k)
    candidates = enumerate_short_vectors(lat, radius)
    for v, nsq in candidates:
        if nsq ** k > gamma * q_star:
            break  # sorted ascending; by Minkowski no better sublattice
            # can avoid all remaining vectors
        if vec_gcd(v) != 1:
            continue  # the span only depends on the primitive part
        sub = _min_cov(_projected_gram(gram, v, nsq), k - 1)
        cand = nsq * sub
        if cand < q_star:
            q_star = cand
    return q_star


def _saturated_span_det(vectors, gram):
    """det Gram of the saturation of the span of k independent vectors."""
    g = gram_matrix(vectors, gram)
    d = frac_det(g)
    index = int_minor_gcd([list(v) for v in vectors], len(vectors))
    return d / (index * index)


def _projected_gram(gram, v, nsq):
    """Gram matrix of the lattice projected onto the complement of v."""
    rows = unimodular_completion(v)[1:]
    pairings = [inner(gram, w, v) for w in rows]
    out = []
    for i, wi in enumerate(rows):
        out.append(
            tuple(
                inner(gram, wi, rows[j]) - pairings[i] * pairings[j] / nsq
                for j in range(len(rows))
            )
        )
    return tuple(out)


def _rational_upper_root(x, k):
    """A Fraction r with r**k >= x, close to x**(1/k)."""
    num = introot_ceil(x.numerator * x.denominator ** (k - 1), k)
    return Fraction(num, x.denominator)


@dataclass(frozen=True)
class SlopeProfile:
    """Minimal squared covolumes q(k), their concave hull, and the slopes.

    `covol_sq[k]` is exact; `hull` and `slopes` are 128-bit reals with
    hull[i] = the concave envelope of the points (k, -1/2 log q(k)).
    """

    rank: int
    covol_sq: tuple
    vertices: tuple
    hull: tuple
    slopes: tuple

    @property
    def is_semistable(self):
        return self.vertices == (0, self.rank)

    @property
    def min_slope(self):
        return self.slopes[-1]

    @property
    def slope_sum(self):
        return self.hull[-1]

    def to_json(self):
        return {
            "rank": self.rank,
            "covol_sq": [[q.numerator, q.denominator] for q in self.covol_sq],
            "vertices": list(self.vertices),
            "hull": [float(h) for h in self.hull],
            "slopes": [float(s) for s in self.slopes],
            "semistable": self.is_semistable,
        }


def slope_profile(lattice):
    """Slopes of the canonical concave polygon of the lattice.

    Chord comparisons between hull candidates reduce to exact integer
    power products of the rational q(k), so ties are never decided in
    floating point.
    """
    m = lattice.rank
    qs = [_min_cov(lattice.gram, k) for k in range(m + 1)]
    verts = [0]
    for k in range(1, m + 1):
        while len(verts) >= 2 and not _strictly_above(verts[-2], verts[-1], k, qs):
            verts.pop()
        verts.append(k)

    logs = [_neg_half_log(q) for q in qs]
    hull = []
    slopes = []
    seg = 0
    for i in range(m + 1):
        while verts[seg + 1] < i:
            seg += 1
        k1, k2 = verts[seg], verts[seg + 1]
        if i == k1:
            hull.append(logs[k1])
        elif i == k2:
            hull.append(logs[k2])
        else:
            hull.append(((k2 - i) * logs[k1] + (i - k1) * logs[k2]) / (k2 - k1))
        if i > 0:
            slopes.append(hull[i] - hull[i - 1])
    return SlopeProfile(
        rank=m,
        covol_sq=tuple(qs),
        vertices=tuple(verts),
        hull=tuple(hull),
        slopes=tuple(slopes),
    )


def _strictly_above(a, b, c, qs):
    """Is the point at index b strictly above the chord from a to c?

    -1/2 log q(b) > interpolation  <=>  q_b^(c-a) < q_a^(c-b) * q_c^(b-a).
    """
    return qs[b] ** (c - a) < qs[a] ** (c - b) * qs[c] ** (b - a)


def _neg_half_log(q):
    return -(_MP.log(_MP.mpf(q.numerator)) - _MP.log(_MP.mpf(q.denominator))) / 2


def freeness_from_profile(profile, log_height):
    """max(min slope, 0) / (log_height / rank), with the height-1 convention.

    Height-1 inputs (log_height == 0) return 1 by convention.  When
    log_height equals the slope sum, the value is capped at 1 so rounding
    in the final division can never push it past the theoretical bound.
    """
    if log_height < 0:
        raise ValidationError("log height must be nonnegative")
    if log_height == 0:
        return 1.0
    value = float(max(profile.min_slope, 0) * profile.rank / _MP.mpf(log_height))
    if value > 1.0:
        total = float(profile.slope_sum)
        if abs(total - log_height) <= 1e-9 * max(1.0, abs(log_height)):
            return 1.0
    return value


def merge_slopes(profile1, profile2):
    """Descending merge of two slope multisets (the direct-sum profile)."""
    merged = sorted(list(profile1.slopes) + list(profile2.slopes), reverse=True)
    return tuple(merged)
