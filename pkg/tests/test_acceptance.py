"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line.  Tolerances are pinned here and nowhere else.

Run with `pytest tests/test_acceptance.py -v -s` to see the summary lines.
"""

import math
import random
import time

import numpy as np

import freelat.fastpath as fastpath
from conftest import random_pd_gram
from freelat.harness import (
    SurveyConfig,
    congruence_density,
    dyadic_bounds,
    emit_report,
    euler_product,
    run_survey,
)
from freelat.lattice import min_covolume_sq, slope_profile
from freelat.pairs import congruence_modulus
from freelat.projective import ProjectivePoint, freeness, normalize, pair_freeness
from oracles import oracle_congruence_table, oracle_covolumes_sq


def _report(name, ok, detail=""):
    print(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


def test_acceptance_slope_engine_correctness():
    """200 random lattices of rank <= 4, Gram entries in [-10, 10]:
    minimal covolumes match the exhaustive saturated-sublattice oracle
    exactly; profiles are concave with the slope-sum identity at 1e-10
    relative.  Budget: 5 minutes."""
    rng = random.Random(20260809)
    start = time.time()
    mismatches = 0
    for i in range(200):
        rank = 2 + i % 3
        lat = random_pd_gram(rank, rng)
        prof = slope_profile(lat)
        oracle = oracle_covolumes_sq(lat.gram)
        for k in range(rank + 1):
            if min_covolume_sq(lat, k) != oracle[k]:
                mismatches += 1
        slopes = [float(s) for s in prof.slopes]
        assert all(a >= b - 1e-12 for a, b in zip(slopes, slopes[1:]))
        total = sum(slopes)
        target = -0.5 * math.log(float(lat.det()))
        assert abs(total - target) <= 1e-10 * max(1.0, abs(target))
    elapsed = time.time() - start
    _report(
        "slope engine correctness",
        mismatches == 0 and elapsed < 300,
        f"200 lattices, {mismatches} oracle mismatches, {elapsed:.1f}s",
    )


def _p2_point_data():
    coords, ns = fastpath.enumerate_coords(2, 10_000)
    fmin, det_ok = fastpath.point_form_min_n2(coords, ns)
    return coords, ns, fmin, det_ok


def test_acceptance_tangent_lattice_identity():
    """Every point of P^2 with norm_sq <= 10^4: det(gram) * ns^3 = 1
    exactly and 0 <= l(x) <= 1.  Budget: 2 minutes."""
    start = time.time()
    coords, ns, fmin, det_ok = _p2_point_data()
    # det(F) == ns for the integer form F = ns^2 * gram is exactly
    # det(gram) * ns^3 == 1
    identity_ok = bool(det_ok.all())
    mask = ns > 1
    lns = np.log(ns[mask].astype(np.float64))
    lf = np.log(fmin[mask].astype(np.float64))
    lvals = np.where(fmin[mask] * fmin[mask] >= ns[mask], 1.0,
                     (2.0 / 3.0) * (1.0 + lf / lns))
    bounds_ok = bool((lvals >= 0.0).all() and (lvals <= 1.0).all())
    # spot-check the array path against the exact rational engine
    rng = random.Random(7)
    sample = rng.sample(range(len(ns)), 250)
    for idx in sample:
        point = ProjectivePoint(
            coords=tuple(int(c) for c in coords[idx]), norm_sq=int(ns[idx])
        )
        exact = freeness(point)
        fast = 1.0 if ns[idx] == 1 else float(
            1.0 if fmin[idx] * fmin[idx] >= ns[idx]
            else (2.0 / 3.0) * (1.0 + math.log(fmin[idx]) / math.log(ns[idx]))
        )
        assert abs(exact - fast) < 1e-12
    elapsed = time.time() - start
    _report(
        "tangent-lattice identity",
        identity_ok and bounds_ok and elapsed < 120,
        f"{len(ns)} points, identity exact: {identity_ok}, "
        f"l in [0,1]: {bounds_ok}, {elapsed:.1f}s",
    )


def test_acceptance_freeness_floor_on_p2():
    """Minimum freeness over P^2 with norm_sq <= 10^4 is >= 2/3 - 0.05."""
    _, ns, fmin, _ = _p2_point_data()
    mask = ns > 1
    lns = np.log(ns[mask].astype(np.float64))
    lf = np.log(fmin[mask].astype(np.float64))
    lvals = np.where(fmin[mask] * fmin[mask] >= ns[mask], 1.0,
                     (2.0 / 3.0) * (1.0 + lf / lns))
    lo = float(lvals.min())
    _report(
        "freeness floor on P^2",
        lo >= 2 / 3 - 0.05,
        f"min freeness {lo:.6f} vs floor {2/3 - 0.05:.6f}",
    )


def test_acceptance_product_formula_cross_check():
    """10^3 random pairs: direct slope freeness of the orthogonal sum
    agrees with the displayed product formula to 1e-8."""
    rng = random.Random(424242)
    worst = 0.0
    done = 0
    while done < 1000:
        v1 = [rng.randint(-15, 15) for _ in range(3)]
        v2 = [rng.randint(-15, 15) for _ in range(3)]
        if not any(v1) or not any(v2):
            continue
        p1, p2 = normalize(v1), normalize(v2)
        if p1.coords == p2.coords or (p1.norm_sq == 1 and p2.norm_sq == 1):
            continue
        pf = pair_freeness(p1, p2)
        worst = max(worst, abs(pf.direct - pf.formula))
        done += 1
    _report(
        "product formula cross-check",
        worst < 1e-8,
        f"1000 pairs, max |direct - formula| = {worst:.2e}",
    )


def test_acceptance_congruence_modulus_oracle():
    """10^4 random pairs with coordinates in [-50, 50]: the minor-gcd W
    agrees with brute-force equality in P^2(Z/W) for every W <= 1000."""
    rng = random.Random(31337)
    mismatches = 0
    done = 0
    while done < 10_000:
        v1 = [rng.randint(-50, 50) for _ in range(3)]
        v2 = [rng.randint(-50, 50) for _ in range(3)]
        if not any(v1) or not any(v2):
            continue
        p1, p2 = normalize(v1), normalize(v2)
        if p1.coords == p2.coords:
            continue
        w = congruence_modulus(p1, p2)
        table = oracle_congruence_table(p1, p2, 1000)
        for modulus, equal in table.items():
            if equal != (w % modulus == 0):
                mismatches += 1
        done += 1
    _report(
        "congruence modulus oracle",
        mismatches == 0,
        f"10^4 pairs x 999 moduli, {mismatches} mismatches",
    )


def test_acceptance_euler_product_and_sieve_density():
    """Partial product over p <= 10^6 reproduces the frozen reference to
    6 digits with tail bound < 1e-6; congruent-pair densities at
    p in {2,3,5} match (p-1)/(p^3-1) within 20% on >= 10^4 pairs."""
    result = euler_product(2, 1_000_000)
    euler_ok = result.tail_bound < 1e-6 and abs(result.value - 0.730763) < 5e-7
    density_ok = True
    details = [f"product={result.value:.7f} tail={result.tail_bound:.2e}"]
    for p in (2, 3, 5):
        est = congruence_density(2, p, 40)
        rel = abs(est.fraction - est.expected) / est.expected
        density_ok = density_ok and est.pair_count >= 10_000 and rel < 0.2
        details.append(f"p={p}: rel err {rel:.3f} on {est.pair_count} pairs")
    _report(
        "euler product and sieve density",
        euler_ok and density_ok,
        "; ".join(details),
    )


def test_acceptance_theorem_reproduction():
    """n=2, C=3, delta=0.4, dyadic B in [2^10, 2^17]: (a) family nonempty
    past 2^12, (b) count/(B log B) within +-50% of its value at the top
    bound, (c) every family pair's freeness >= 2*delta*n/(n+1) - 0.1,
    (d) every family pair's second height < C.  Budget: 30 minutes."""
    start = time.time()
    config = SurveyConfig.make(2, "3", "0.4", dyadic_bounds(1 << 10, 1 << 17))
    records = run_survey(config)
    elapsed = time.time() - start
    tail = [r for r in records if r.b > (1 << 12)]
    nonempty = all(r.pairs_in_s > 0 for r in tail)
    anchor = records[-1].ratio
    band = all(0.5 * anchor <= r.ratio <= 1.5 * anchor for r in tail)
    floor = 2 * 0.4 * 2 / 3 - 0.1
    floor_ok = all(
        r.min_pair_freeness is not None and r.min_pair_freeness >= floor
        for r in records
    )
    height_ok = all(
        r.max_second_height is not None and r.max_second_height < 3.0
        for r in records
    )
    detail = (
        f"{records[-1].pairs_total} pairs at 2^17, in_S={records[-1].pairs_in_s}, "
        f"ratios {[round(r.ratio / anchor, 3) for r in records]}, "
        f"min freeness {min(r.min_pair_freeness for r in records):.4f} vs {floor:.4f}, "
        f"max c {max(r.max_second_height for r in records):.4f}, {elapsed:.0f}s"
    )
    _report(
        "theorem reproduction",
        nonempty and band and floor_ok and height_ok and elapsed < 1800,
        detail,
    )


def test_acceptance_survey_determinism(tmp_path):
    """Identical surveys with 1 and 8 worker threads emit byte-identical
    reports."""
    config = SurveyConfig.make(2, "3", "0.4", dyadic_bounds(1 << 10, 1 << 14))
    paths = []
    for threads in (1, 8):
        records = run_survey(config, threads=threads)
        path = tmp_path / f"report_t{threads}.csv"
        emit_report(records, config, "csv", path)
        jpath = tmp_path / f"report_t{threads}.json"
        emit_report(records, config, "json", jpath)
        paths.append((path.read_bytes(), jpath.read_bytes()))
    _report(
        "survey determinism",
        paths[0] == paths[1],
        f"csv {len(paths[0][0])} bytes, json {len(paths[0][1])} bytes, identical",
    )
