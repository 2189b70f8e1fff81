"""Exact integer and rational helpers used throughout the package.

Everything here is pure and deterministic; none of it touches floats
except as search seeds that are always verified exactly afterwards.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

_SMALL_PRIME_CACHE = {}


def primes_upto(n):
    """Ascending numpy int64 array of primes <= n (cached sieve)."""
    if n < 2:
        return np.empty(0, dtype=np.int64)
    cached = _SMALL_PRIME_CACHE.get(n)
    if cached is not None:
        return cached
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    primes = np.nonzero(sieve)[0].astype(np.int64)
    if len(_SMALL_PRIME_CACHE) < 8:
        _SMALL_PRIME_CACHE[n] = primes
    return primes


def xgcd(a, b):
    """Return (g, s, t) with g = gcd(a, b) = s*a + t*b and g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        return -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def introot(x, k):
    """floor(x ** (1/k)) for integers x >= 0, k >= 1, computed exactly."""
    if x < 0:
        raise ValueError("negative radicand")
    if k < 1:
        raise ValueError("root order must be >= 1")
    if x in (0, 1) or k == 1:
        return x
    if k == 2:
        return math.isqrt(x)
    # Newton iteration from a power-of-two overestimate.
    r = 1 << -(-x.bit_length() // k)
    while True:
        nxt = ((k - 1) * r + x // r ** (k - 1)) // k
        if nxt >= r:
            break
        r = nxt
    while r ** k > x:
        r -= 1
    return r


def introot_ceil(x, k):
    """Smallest integer r >= 0 with r**k >= x."""
    r = introot(x, k)
    return r if r ** k == x else r + 1


def vec_gcd(coords):
    g = 0
    for c in coords:
        g = math.gcd(g, c)
    return g


def factorize(m, trial_bound=1_000_000):
    """Factor a positive integer by trial division over a sieve.

    Returns a dict prime -> exponent.  Raises if a cofactor survives the
    sieve and is not itself certifiably prime (cofactor >= trial_bound**2).
    """
    if m <= 0:
        raise ValueError("can only factor positive integers")
    out = {}
    for p in primes_upto(min(trial_bound, math.isqrt(m) + 1)):
        p = int(p)
        if p * p > m:
            break
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
    if m > 1:
        if m >= trial_bound * trial_bound:
            raise ValueError(f"cofactor {m} too large for trial division")
        out[m] = out.get(m, 0) + 1
    return out


# Exact bigint comparison is used below this many bits; past it we fall
# back to interval arithmetic plus a structural equality test.
_POW_BIT_LIMIT = 1 << 22


def compare_pow(a, p, b, q):
    """Sign of a**p - b**q for positive rationals a, b and ints p, q >= 0.

    Exact for any inputs small enough for direct bigint powers; for the
    huge exponents that arise from float-derived parameters it combines a
    factorization-based equality test with escalating-precision logs.
    """
    a = Fraction(a)
    b = Fraction(b)
    if a <= 0 or b <= 0:
        raise ValueError("compare_pow needs positive bases")
    if p < 0 or q < 0:
        raise ValueError("compare_pow needs nonnegative exponents")
    # a^p vs b^q  <=>  an^p * bd^q  vs  bn^q * ad^p
    lhs_bits = p * a.numerator.bit_length() + q * b.denominator.bit_length()
    rhs_bits = q * b.numerator.bit_length() + p * a.denominator.bit_length()
    if max(lhs_bits, rhs_bits) <= _POW_BIT_LIMIT:
        lhs = a.numerator ** p * b.denominator ** q
        rhs = b.numerator ** q * a.denominator ** p
        return (lhs > rhs) - (lhs < rhs)
    if _pow_equal_structurally(a, p, b, q):
        return 0
    import mpmath

    prec = 128
    while prec <= 1 << 14:
        ctx = mpmath.mp.clone()
        ctx.prec = prec
        diff = p * _frac_log(ctx, a) - q * _frac_log(ctx, b)
        # Conservative error bound for the two log evaluations.
        err = ctx.mpf(2) ** (-(prec - 8)) * (p + q + 1) * 64
        if abs(diff) > err:
            return 1 if diff > 0 else -1
        prec *= 2
    raise ValueError("compare_pow could not separate nearly-equal powers")


def _frac_log(ctx, x):
    return ctx.log(ctx.mpf(x.numerator)) - ctx.log(ctx.mpf(x.denominator))


def _pow_equal_structurally(a, p, b, q):
    """Decide a**p == b**q via prime valuations, when factoring is feasible."""
    try:
        vals = {}
        for m, sign in ((a.numerator, 1), (a.denominator, -1)):
            if m != 1:
                for prime, e in factorize(m).items():
                    vals[prime] = vals.get(prime, 0) + sign * e * p
        for m, sign in ((b.numerator, -1), (b.denominator, 1)):
            if m != 1:
                for prime, e in factorize(m).items():
                    vals[prime] = vals.get(prime, 0) + sign * e * q
    except ValueError:
        return False
    return all(v == 0 for v in vals.values())
