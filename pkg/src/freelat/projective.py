"""Rational points on P^n and P^n x P^n: canonical primitive coordinates,
anticanonical heights, tangent lattices, and freeness.

The ambient metric is the Euclidean one on Z^(n+1); with that choice the
tangent lattice of a point with primitive coordinates v satisfies
det(gram) * |v|^(2(n+1)) = 1 exactly, which pins the log height to the
slope sum by construction rather than up to a bounded error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DegenerateHeightError, DimensionMismatchError, ValidationError
from .exactlinalg import unimodular_completion
from .intmath import vec_gcd
from .lattice import (
    GramLattice,
    direct_sum,
    freeness_from_profile,
    slope_profile,
)


@dataclass(frozen=True, order=True)
class ProjectivePoint:
    """Point of P^n(Q) as a primitive integer vector with canonical sign."""

    coords: tuple
    norm_sq: int

    @property
    def n(self):
        return len(self.coords) - 1

    def __str__(self):
        return ":".join(str(c) for c in self.coords)


def normalize(raw):
    """Canonical representative: divide by the gcd, make the first nonzero
    coordinate positive, record the squared norm."""
    coords = tuple(int(x) for x in raw)
    g = vec_gcd(coords)
    if g == 0:
        raise ValidationError("the zero vector does not define a point")
    coords = tuple(c // g for c in coords)
    lead = next(c for c in coords if c)
    if lead < 0:
        coords = tuple(-c for c in coords)
    return ProjectivePoint(coords=coords, norm_sq=sum(c * c for c in coords))


def parse_point(text):
    """Parse the "x0:x1:...:xn" wire format."""
    try:
        raw = [int(part) for part in text.split(":")]
    except ValueError as exc:
        raise ValidationError(f"bad point syntax: {text!r}") from exc
    if len(raw) < 2:
        raise ValidationError("a projective point needs at least two coordinates")
    return normalize(raw)


def anticanonical_log_height(point):
    """(n+1)/2 * log |v|^2, in nats; zero exactly for unit vectors."""
    return 0.5 * (point.n + 1) * math.log(point.norm_sq)


@dataclass(frozen=True)
class TangentLatticeResult:
    lattice: GramLattice
    log_height: float


def tangent_lattice(point):
    """Tangent lattice at the point, rank n, with the quotient metric.

    Basis: a unimodular completion of v spans Z^(n+1)/Zv; entries are the
    inner products of the projections onto the orthogonal complement of v,
    scaled by 1/|v|^2.  det(gram) = |v|^(-2(n+1)) exactly.
    """
    v = point.coords
    ns = Fraction(point.norm_sq)
    basis = unimodular_completion(v)[1:]
    pairings = [sum(b[i] * v[i] for i in range(len(v))) for b in basis]
    rows = []
    for i, bi in enumerate(basis):
        rows.append(
            tuple(
                (
                    Fraction(sum(bi[d] * basis[j][d] for d in range(len(v))))
                    - Fraction(pairings[i] * pairings[j]) / ns
                )
                / ns
                for j in range(len(basis))
            )
        )
    lat = GramLattice(rank=point.n, gram=tuple(rows))
    return TangentLatticeResult(lattice=lat, log_height=anticanonical_log_height(point))


def freeness(point):
    """Slope-balance invariant in [0, 1]; 1 by convention at height 1."""
    result = tangent_lattice(point)
    if result.log_height == 0.0:
        return 1.0
    profile = slope_profile(result.lattice)
    if profile.is_semistable:
        return 1.0
    return freeness_from_profile(profile, result.log_height)


def pair_tangent(p1, p2):
    """Tangent lattice of (p1, p2) on P^n x P^n: orthogonal sum of the
    factors; log heights add."""
    if p1.n != p2.n:
        raise DimensionMismatchError("points live in different dimensions")
    t1 = tangent_lattice(p1)
    t2 = tangent_lattice(p2)
    return TangentLatticeResult(
        lattice=direct_sum(t1.lattice, t2.lattice),
        log_height=t1.log_height + t2.log_height,
    )


@dataclass(frozen=True)
class PairFreeness:
    """Freeness of a point pair, computed two ways.

    `direct` runs the slope engine on the rank-2n orthogonal sum and is
    authoritative; `formula` evaluates
    2n * min(l1*logH1/n, l2*logH2/n) / (logH1 + logH2).
    The two must agree to ~1e-8 on valid inputs.
    """

    direct: float
    formula: float

    @property
    def value(self):
        return self.direct


def pair_freeness(p1, p2):
    if p1.n != p2.n:
        raise DimensionMismatchError("points live in different dimensions")
    n = p1.n
    h1 = anticanonical_log_height(p1)
    h2 = anticanonical_log_height(p2)
    if h1 + h2 == 0.0:
        raise DegenerateHeightError("both points have height 1")
    joint = pair_tangent(p1, p2)
    profile = slope_profile(joint.lattice)
    if profile.is_semistable:
        direct = 1.0
    else:
        direct = freeness_from_profile(profile, joint.log_height)
    l1 = freeness(p1)
    l2 = freeness(p2)
    formula = 2.0 * n * min(l1 * h1 / n, l2 * h2 / n) / (h1 + h2)
    return PairFreeness(direct=direct, formula=formula)


def enumerate_points(n, max_norm_sq):
    """Every point of P^n(Q) with |v|^2 <= max_norm_sq, exactly once, in
    (norm_sq, coords) order.

    Materializes the list before yielding; intended for desk-scale bounds
    (the array kernels in `fastpath` cover large surveys).
    """
    if max_norm_sq < 1:
        raise ValidationError("max_norm_sq must be >= 1")
    if n < 1:
        raise ValidationError("ambient dimension must be >= 1")
    points = []
    coords = [0] * (n + 1)

    def fill(idx, remaining, leading_zero):
        if idx == n:
            lo = 1 if leading_zero else -math.isqrt(remaining)
            for x in range(lo, math.isqrt(remaining) + 1):
                coords[idx] = x
                ns = max_norm_sq - remaining + x * x
                if vec_gcd(coords) == 1:
                    points.append((ns, tuple(coords)))
            coords[idx] = 0
            return
        start = 0 if leading_zero else -math.isqrt(remaining)
        for x in range(start, math.isqrt(remaining) + 1):
            coords[idx] = x
            fill(idx + 1, remaining - x * x, leading_zero and x == 0)
        coords[idx] = 0

    fill(0, max_norm_sq, True)
    points.sort()
    for ns, c in points:
        yield ProjectivePoint(coords=c, norm_sq=ns)
