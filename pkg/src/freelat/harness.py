"""Desk-scale survey of congruent-close point pairs.

The survey enumerates unordered pairs of distinct points of P^n with
product height below each bound B (both factor heights > 1), classifies
membership in the bounded-c balanced family, and aggregates per-shell
statistics deterministically: pairs are partitioned by the outer point
index into fixed-size chunks, each chunk is scanned by one kernel call,
and chunk results are reduced in index order, so the report bytes do not
depend on the worker count.
"""

from __future__ import annotations

import json
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import fastpath
from .errors import ResourceLimitError, ValidationError
from .intmath import introot, primes_upto
from .lattice import slope_profile, vector_cap
from .pairs import _as_parameter_fraction
from .projective import ProjectivePoint, tangent_lattice

SURVEY_PRIMES = (2, 3, 5, 7)

_CHUNK = 1024  # outer-index chunk size; fixed so thread count never
               # changes the reduction structure


class InsufficientSampleWarning(UserWarning):
    pass


@dataclass(frozen=True)
class SurveyConfig:
    """Parameters of one survey run.

    `c_bound` and `delta` are exact rationals (pass strings like "0.4"
    to keep decimal inputs exact); `bounds` is the ascending list of
    height bounds B.
    """

    n: int
    c_bound: Fraction
    delta: Fraction
    bounds: tuple
    metric_note: str = "chordal"
    thread_hint: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise ValidationError("survey dimension must be >= 2")
        if not 0 < self.delta < Fraction(1, 2):
            raise ValidationError("delta must satisfy 0 < delta < 1/2")
        if self.c_bound <= 1:
            raise ValidationError("C must exceed 1")
        if not self.bounds:
            raise ValidationError("at least one height bound is required")
        if any(b < 2 for b in self.bounds):
            raise ValidationError("height bounds must be >= 2")
        if list(self.bounds) != sorted(set(self.bounds)):
            raise ValidationError("height bounds must be strictly increasing")
        if self.metric_note != "chordal":
            raise ValidationError("only the chordal metric is implemented")
        if self.thread_hint < 0:
            raise ValidationError("thread_hint must be >= 0")

    @classmethod
    def make(cls, n, c_bound, delta, bounds, metric_note="chordal", thread_hint=0):
        return cls(
            n=int(n),
            c_bound=_as_parameter_fraction(c_bound, "C"),
            delta=_as_parameter_fraction(delta, "delta"),
            bounds=tuple(int(b) for b in bounds),
            metric_note=metric_note,
            thread_hint=int(thread_hint),
        )

    @classmethod
    def from_json(cls, obj):
        return cls.make(
            n=obj["n"],
            c_bound=obj["C"],
            delta=obj["delta"],
            bounds=obj["bounds"],
            metric_note=obj.get("metricNote", "chordal"),
            thread_hint=obj.get("threadHint", 0),
        )

    def to_json(self):
        return {
            "n": self.n,
            "C": str(self.c_bound),
            "delta": str(self.delta),
            "bounds": list(self.bounds),
            "metricNote": self.metric_note,
            "threadHint": self.thread_hint,
        }

    @property
    def floor(self):
        """The balanced-family freeness floor 2*delta*n/(n+1)."""
        return float(2 * self.delta * self.n / (self.n + 1))


@dataclass(frozen=True)
class CountRecord:
    """One row of the dyadic survey (cumulative below height bound b).

    `max_correction_budget` is taken over the dyadic shell ending at b
    (so it decays as b grows); everything else is cumulative.
    """

    b: int
    pairs_total: int
    pairs_in_s: int
    ratio: float
    min_pair_freeness: object
    mean_pair_freeness: object
    congruent_density_by_prime: dict
    max_correction_budget: object
    max_second_height: object
    min_pair: object
    balanced_pairs: int
    balanced_w1_pairs: int
    balanced_w1_far_pairs: int


def dyadic_bounds(b_min, b_max):
    """Powers of two in [b_min, b_max]."""
    if b_min < 2 or b_max < b_min:
        raise ValidationError("need 2 <= b_min <= b_max")
    out = []
    b = 1 << max(1, (b_min - 1).bit_length())
    while b <= b_max:
        out.append(b)
        b *= 2
    if not out:
        raise ValidationError("no dyadic bound in range")
    return tuple(out)


def _balance_caps(ns, delta, ns_max):
    """Largest partner norm each point may be balanced with.

    log H_i > delta (log H_i + log H_j) with delta = a/b is exactly
    ns_j ** a < ns_i ** (b - a); the cap is computed in exact bigint
    arithmetic per distinct norm and clipped to ns_max so the kernels
    never touch an oversized integer.
    """
    a, b = delta.numerator, delta.denominator
    caps = {}
    out = np.empty(len(ns), dtype=np.int64)
    for idx, value in enumerate(ns):
        value = int(value)
        cap = caps.get(value)
        if cap is None:
            cap = min(introot(value ** (b - a) - 1, a), ns_max)
            caps[value] = cap
        out[idx] = cap
    return out


def _point_stats(coords, ns, n):
    """Per-point (min slope, log height) arrays for the survey kernels."""
    ns_f = ns.astype(np.float64)
    log_h = 0.5 * (n + 1) * np.log(ns_f)
    if n == 2:
        fmin, det_ok = fastpath.point_form_min_n2(coords, ns)
        if not det_ok.all():
            raise AssertionError("tangent determinant identity failed")  # pragma: no cover
        # fmin^2 <= 4/3 * ns for a reduced form, so the square cannot overflow
        semistable = fmin * fmin >= ns
        mu = np.where(
            semistable,
            0.75 * np.log(ns_f),
            0.5 * np.log(ns_f * fmin.astype(np.float64)),
        )
        return mu, log_h
    # generic dimension: exact slope engine per point (desk-scale only)
    mu = np.empty(len(ns), dtype=np.float64)
    for idx in range(len(ns)):
        point = ProjectivePoint(
            coords=tuple(int(x) for x in coords[idx]), norm_sq=int(ns[idx])
        )
        profile = slope_profile(tangent_lattice(point).lattice)
        mu[idx] = float(profile.min_slope)
    return mu, log_h


def run_survey(config, threads=None):
    """Survey all bounds of the config; deterministic for any thread count."""
    n = config.n
    m_limits = [introot(b * b - 1, n + 1) for b in config.bounds]
    ns_max = m_limits[-1] // 2
    c = config.c_bound
    if ns_max >= 2:
        fastpath.scan_guard_bits(ns_max, m_limits[-1], c.numerator, c.denominator)
        coords, ns = fastpath.enumerate_coords(n, ns_max)
        keep = ns >= 2
        coords = np.ascontiguousarray(coords[keep])
        ns = np.ascontiguousarray(ns[keep])
    else:
        coords = np.empty((0, n + 1), dtype=np.int64)
        ns = np.empty(0, dtype=np.int64)
    cap = vector_cap()
    if len(ns) > cap:
        raise ResourceLimitError(
            f"survey needs {len(ns)} points, above the FREELAT_MAX_VECTORS cap",
            count=len(ns),
            cap=cap,
        )
    if len(ns):
        mu, log_h = _point_stats(coords, ns, n)
        bal_cap = _balance_caps(ns, config.delta, ns_max)
    else:
        mu = log_h = np.empty(0, dtype=np.float64)
        bal_cap = np.empty(0, dtype=np.int64)
    prod_limits = np.array(m_limits, dtype=np.int64)
    primes = np.array(SURVEY_PRIMES, dtype=np.int64)
    if threads is None:
        threads = config.thread_hint or (os.cpu_count() or 1)
    threads = max(1, int(threads))

    chunks = [(s, min(s + _CHUNK, len(ns))) for s in range(0, len(ns), _CHUNK)]

    def scan(chunk):
        lo, hi = chunk
        return fastpath.pair_scan(
            coords, ns, mu, log_h, bal_cap, prod_limits,
            c.numerator ** 2, c.denominator ** 2, primes, n, lo, hi,
        )

    nb = len(prod_limits)
    npr = len(primes)
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

    if chunks:
        if threads == 1:
            results = map(scan, chunks)
        else:
            pool = ThreadPoolExecutor(max_workers=threads)
            results = pool.map(scan, chunks)
        # reduce in chunk order: float sums are order-fixed, ties in the
        # argmin go to the earliest chunk
        for res in results:
            total += res[0]
            in_s += res[1]
            balanced += res[2]
            bal_w1 += res[3]
            bal_w1_far += res[4]
            congr += res[5]
            sum_free += res[6]
            improved = res[7] < min_free
            min_free = np.where(improved, res[7], min_free)
            min_i = np.where(improved, res[8], min_i)
            min_j = np.where(improved, res[9], min_j)
            max_bud = np.maximum(max_bud, res[10])
            max_c = np.maximum(max_c, res[11])
        if threads != 1:
            pool.shutdown()

    records = []
    cum_total = 0
    cum_in_s = 0
    cum_sum = 0.0
    cum_congr = np.zeros(npr, dtype=np.int64)
    cum_bal = 0
    cum_w1 = 0
    cum_far = 0
    best = math.inf
    best_pair = None
    best_c = -math.inf
    for t, bound in enumerate(config.bounds):
        cum_total += int(total[t])
        cum_in_s += int(in_s[t])
        cum_sum += float(sum_free[t])
        cum_congr += congr[:, t]
        cum_bal += int(balanced[t])
        cum_w1 += int(bal_w1[t])
        cum_far += int(bal_w1_far[t])
        if min_free[t] < best:
            best = float(min_free[t])
            best_pair = (
                ":".join(str(int(x)) for x in coords[min_i[t]]),
                ":".join(str(int(x)) for x in coords[min_j[t]]),
            )
        if max_c[t] > best_c:
            best_c = float(max_c[t])
        densities = {
            int(p): (int(cum_congr[pi]) / cum_total if cum_total else 0.0)
            for pi, p in enumerate(SURVEY_PRIMES)
        }
        records.append(
            CountRecord(
                b=bound,
                pairs_total=cum_total,
                pairs_in_s=cum_in_s,
                ratio=cum_in_s / (bound * math.log(bound)),
                min_pair_freeness=(best if cum_in_s else None),
                mean_pair_freeness=(cum_sum / cum_in_s if cum_in_s else None),
                congruent_density_by_prime=densities,
                max_correction_budget=(
                    float(max_bud[t]) if int(in_s[t]) else None
                ),
                max_second_height=(best_c if cum_in_s else None),
                min_pair=(best_pair if cum_in_s else None),
                balanced_pairs=cum_bal,
                balanced_w1_pairs=cum_w1,
                balanced_w1_far_pairs=cum_far,
            )
        )
    return records


@dataclass(frozen=True)
class EulerProduct:
    value: float
    tail_bound: float
    n: int
    cutoff: int


def euler_product(n, tail_cutoff):
    """Partial product of (1 - (p-1)/(p^(n+1)-1)) over p <= cutoff.

    The omitted factors satisfy (p-1)/(p^(n+1)-1) < p^-n, so the
    neglected sum is below the midpoint integral bound
    (cutoff+1/2)^(1-n)/(n-1); convergence needs n >= 2.
    """
    if n < 2:
        raise ValidationError("the product only converges for n >= 2")
    if tail_cutoff < 2:
        raise ValidationError("cutoff must be >= 2")
    value = 1.0
    for p in primes_upto(tail_cutoff):
        p = int(p)
        value *= 1.0 - (p - 1) / (p ** (n + 1) - 1)
    tail = (tail_cutoff + 0.5) ** (1 - n) / (n - 1)
    return EulerProduct(value=value, tail_bound=tail, n=n, cutoff=tail_cutoff)


@dataclass(frozen=True)
class DensityEstimate:
    prime: int
    fraction: float
    pair_count: int
    congruent_count: int
    expected: float


def congruence_density(n, p, sample_bound):
    """Fraction of point pairs congruent mod p, over all pairs of points
    with norm_sq <= sample_bound; expected (p-1)/(p^(n+1)-1)."""
    p = int(p)
    if p < 2 or any(p % q == 0 for q in range(2, math.isqrt(p) + 1)):
        raise ValidationError(f"{p} is not prime")
    coords, _ = fastpath.enumerate_coords(n, sample_bound)
    total, congruent = fastpath.count_congruent(coords, p)
    if total < 10_000:
        warnings.warn(
            f"only {total} pairs at sample bound {sample_bound}; "
            "estimates below 10^4 pairs are noisy",
            InsufficientSampleWarning,
            stacklevel=2,
        )
    expected = (p - 1) / (p ** (n + 1) - 1)
    return DensityEstimate(
        prime=p,
        fraction=congruent / total if total else 0.0,
        pair_count=total,
        congruent_count=congruent,
        expected=expected,
    )


@dataclass(frozen=True)
class FloorReport:
    floor: float
    slack: float
    rows: tuple
    violations: tuple

    @property
    def ok(self):
        return not self.violations


def freeness_floor_check(records, config, slack=0.1):
    """Check every surveyed family member against the freeness floor
    2*delta*n/(n+1) - slack, and report the per-bound correction budgets
    (n*log c / log pair height, which shrinks as B grows)."""
    floor = config.floor
    rows = []
    violations = []
    for rec in records:
        if rec.min_pair_freeness is None:
            continue
        margin = rec.min_pair_freeness - floor
        rows.append(
            {
                "B": rec.b,
                "min_pair_freeness": rec.min_pair_freeness,
                "margin": margin,
                "observed_slack": max(0.0, -margin),
                "max_correction_budget": rec.max_correction_budget,
            }
        )
        if rec.min_pair_freeness < floor - slack:
            violations.append({"B": rec.b, "pair": rec.min_pair,
                               "freeness": rec.min_pair_freeness})
    return FloorReport(
        floor=floor, slack=slack, rows=tuple(rows), violations=tuple(violations)
    )


REPORT_COLUMNS = (
    "B", "n", "C", "delta", "pairs_total", "pairs_in_S", "ratio_BlogB",
    "min_pair_freeness", "mean_pair_freeness", "floor_2dn_over_n1",
    "euler_product_ref", "max_correction_budget",
    "density_p2", "density_p3", "density_p5", "density_p7",
)

_EULER_REF_CUTOFF = 10_000


def report_rows(records, config):
    """Report rows shared by the CSV and JSON writers."""
    euler_ref = euler_product(config.n, _EULER_REF_CUTOFF).value
    rows = []
    for rec in records:
        row = {
            "B": rec.b,
            "n": config.n,
            "C": float(config.c_bound),
            "delta": float(config.delta),
            "pairs_total": rec.pairs_total,
            "pairs_in_S": rec.pairs_in_s,
            "ratio_BlogB": rec.ratio,
            "min_pair_freeness": rec.min_pair_freeness,
            "mean_pair_freeness": rec.mean_pair_freeness,
            "floor_2dn_over_n1": config.floor,
            "euler_product_ref": euler_ref,
            "max_correction_budget": rec.max_correction_budget,
        }
        for p in SURVEY_PRIMES:
            row[f"density_p{p}"] = rec.congruent_density_by_prime[p]
        rows.append(row)
    return rows


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit_report(records, config, fmt, path):
    """Write the survey report; byte-stable for identical inputs."""
    if not records:
        raise ValidationError("no records to report")
    rows = report_rows(records, config)
    if fmt == "csv":
        lines = [",".join(REPORT_COLUMNS)]
        lines.extend(
            ",".join(_cell(row[col]) for col in REPORT_COLUMNS) for row in rows
        )
        payload = "\n".join(lines) + "\n"
    elif fmt == "json":
        payload = json.dumps(rows, indent=2) + "\n"
    else:
        raise ValidationError(f"unknown report format: {fmt!r}")
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(payload)
    return path
