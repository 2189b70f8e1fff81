"""Unordered pairs of distinct projective points: congruence modulus W,
chordal distance, the ratio c = W/d, and membership in the survey family.

W is the gcd of the 2x2 minors of the stacked coordinate matrix; because
the coordinate vectors are primitive, some coordinate is a unit modulo
every prime power, so equality in P^n(Z/W) is the same as all minors
vanishing mod W.  The test suite pins this reduction against a
brute-force scalar scan before anything downstream relies on it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DimensionMismatchError, ValidationError
from .intmath import compare_pow


def congruence_modulus(p1, p2):
    """Largest W with p1 == p2 in P^n(Z/W): gcd of the 2x2 minors."""
    if p1.n != p2.n:
        raise DimensionMismatchError("points live in different dimensions")
    if p1.coords == p2.coords:
        raise ValidationError("congruence modulus needs distinct points")
    a, b = p1.coords, p2.coords
    g = 0
    for r in range(len(a)):
        for s in range(r + 1, len(a)):
            g = math.gcd(g, a[r] * b[s] - a[s] * b[r])
            if g == 1:
                return 1
    return g


def chordal_distance_sq(p1, p2):
    """sin^2 of the angle between the lines: 1 - (v1.v2)^2/(|v1|^2 |v2|^2)."""
    if p1.n != p2.n:
        raise DimensionMismatchError("points live in different dimensions")
    dot = sum(x * y for x, y in zip(p1.coords, p2.coords))
    return 1 - Fraction(dot * dot, p1.norm_sq * p2.norm_sq)


@dataclass(frozen=True)
class PointPair:
    """Unordered pair of distinct points (stored with x1 <= x2 lexic.)."""

    x1: object
    x2: object
    w: int
    dist_sq: Fraction
    c: float
    log_h1: float
    log_h2: float

    @property
    def c_sq_exact(self):
        return Fraction(self.w * self.w) / self.dist_sq


def make_pair(p1, p2):
    """Assemble a PointPair with c = W / sqrt(dist_sq)."""
    from .projective import anticanonical_log_height

    if p1.coords == p2.coords:
        raise ValidationError("a pair needs two distinct points")
    if p1.coords > p2.coords:
        p1, p2 = p2, p1
    w = congruence_modulus(p1, p2)
    dist_sq = chordal_distance_sq(p1, p2)
    c = w / math.sqrt(dist_sq)
    return PointPair(
        x1=p1,
        x2=p2,
        w=w,
        dist_sq=dist_sq,
        c=c,
        log_h1=anticanonical_log_height(p1),
        log_h2=anticanonical_log_height(p2),
    )


def _as_parameter_fraction(value, name):
    if isinstance(value, str):
        try:
            return Fraction(value)
        except ValueError as exc:
            raise ValidationError(f"bad {name}: {value!r}") from exc
    try:
        return Fraction(value)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"bad {name}: {value!r}") from exc


def in_s(pair, c_bound, delta):
    """Membership in the survey family: distinct points, c < C, and both
    log heights strictly above delta * (their sum).

    C and delta may be given as Fraction, int, str (decimal), or float;
    all three conditions are decided exactly in rational arithmetic.
    """
    c_bound = _as_parameter_fraction(c_bound, "C")
    delta = _as_parameter_fraction(delta, "delta")
    if not 0 < delta < Fraction(1, 2):
        raise ValidationError("delta must satisfy 0 < delta < 1/2")
    if c_bound <= 1:
        raise ValidationError("C must exceed 1 (the maximal chordal distance)")
    # c < C  <=>  W^2 * den(d^2) * den(C)^2 < num(C)^2 * num(d^2)
    dsq = pair.dist_sq
    lhs = pair.w * pair.w * dsq.denominator * c_bound.denominator ** 2
    rhs = c_bound.numerator ** 2 * dsq.numerator
    if lhs >= rhs:
        return False
    # balance: (1-delta) logH_i > delta logH_j both ways, i.e.
    # ns_i^(b-a) > ns_j^a with delta = a/b, decided on exact powers.
    a, b = delta.numerator, delta.denominator
    ns1, ns2 = pair.x1.norm_sq, pair.x2.norm_sq
    if compare_pow(ns1, b - a, ns2, a) <= 0:
        return False
    if compare_pow(ns2, b - a, ns1, a) <= 0:
        return False
    return True


def second_height(pair):
    """The exceptional-divisor height of the pair, i.e. c itself."""
    return pair.c


PAIR_CSV_HEADER = "x1,x2,W,dist_sq_num,dist_sq_den,c,logH1,logH2,in_S"


def pair_csv_row(pair, c_bound, delta):
    member = in_s(pair, c_bound, delta)
    return ",".join(
        [
            str(pair.x1),
            str(pair.x2),
            str(pair.w),
            str(pair.dist_sq.numerator),
            str(pair.dist_sq.denominator),
            repr(pair.c),
            repr(pair.log_h1),
            repr(pair.log_h2),
            "true" if member else "false",
        ]
    )
