"""Acceptance criteria, one test per criterion.

Each test records a line that is printed in the "acceptance criteria" section
of the pytest summary.
"""

import random
import time
from fractions import Fraction
from itertools import combinations, product
from math import gcd

from conftest import axes_rods, random_slope, stratified_rods

from torusrods.farey import (
    INFINITY,
    Moebius2,
    Slope,
    apply_moebius,
    farey_distance,
    farey_distances_oracle,
)
from torusrods.homeo import DirectionFamily, brute_force_orbit_search, equivalent, equivalent_k1
from torusrods.lattice import Rod, rods_disjoint, rods_disjoint_oracle, validate_stratified
from torusrods.unimodular import cross, det3, IntMatrix3, is_primitive, vector_gcd
from torusrods.volume import (
    drill_plan,
    flow_orbit_bounds,
    stratified_bounds,
    three_rod_orthogonal_bounds,
    v8_constant,
    v8_crosscheck,
)

TWO_V8 = 7.327725


def _slopes_up_to(n):
    out = [INFINITY]
    for q in range(1, n + 1):
        for p in range(-n, n + 1):
            if gcd(p, q) == 1:
                out.append(Slope(p, q))
    return out


def test_farey_oracle_equivalence(acceptance):
    record, _ = acceptance
    start = time.perf_counter()
    slopes = _slopes_up_to(12)
    mismatches = []
    for x in slopes:
        oracle = farey_distances_oracle(x, slopes)
        for y in slopes:
            if farey_distance(x, y) != oracle[y]:
                mismatches.append((x, y))
    elapsed = time.perf_counter() - start
    record("Farey oracle equivalence",
           f"{len(slopes) ** 2} pairs, {len(mismatches)} mismatches, {elapsed:.1f}s")
    assert not mismatches
    assert elapsed < 300


def _random_unimodular_2(rng, bound):
    while True:
        a, b, c, d = (rng.randint(-bound, bound) for _ in range(4))
        if abs(a * d - b * c) == 1:
            return Moebius2(a, b, c, d)


def test_farey_group_invariance(acceptance):
    record, _ = acceptance
    rng = random.Random(20240601)
    bad = 0
    for _ in range(1000):
        x, y = random_slope(rng, 10), random_slope(rng, 10)
        m = _random_unimodular_2(rng, 10)
        if farey_distance(apply_moebius(m, x), apply_moebius(m, y)) != farey_distance(x, y):
            bad += 1
    record("Farey group invariance", f"1000 cases, {bad} failures")
    assert bad == 0


def test_v8_crosscheck(acceptance):
    record, _ = acceptance
    start = time.perf_counter()
    diff = v8_crosscheck(12)
    text = str(v8_constant(12))
    elapsed = time.perf_counter() - start
    print(f"v8 = {text}")
    record("v8 cross-check", f"v8 = {text}, |8L(pi/4) - 4G| = {float(diff):.2e}, {elapsed:.3f}s")
    assert diff < 1e-12
    assert text == "3.663862376709"
    assert elapsed < 1.0


def test_sharpness_anchor(acceptance):
    record, _ = acceptance
    bounds = stratified_bounds(validate_stratified(axes_rods()))
    record("Sharpness anchor",
           f"upper = {bounds.upper_octahedra} octahedra = {bounds.upper_numeric}")
    assert bounds.upper_octahedra == 2
    assert abs(float(bounds.upper_numeric) - TWO_V8) <= 1e-5


def _random_stratified(rng):
    m = rng.randint(2, 5)  # horizontal rods; n = m + 1 <= 6
    slopes = [random_slope(rng, 8)]
    while len(slopes) < m:
        s = random_slope(rng, 8)
        if s != slopes[-1]:
            slopes.append(s)
    if m > 2 and slopes[-1] == slopes[0]:
        return _random_stratified(rng)
    heights = sorted(rng.sample(range(1, 24), m))
    vertical = Rod((Fraction(rng.randint(0, 5), 6), Fraction(rng.randint(0, 5), 6), 0), (0, 0, 1))
    rods = stratified_rods(slopes, [Fraction(h, 24) for h in heights], vertical)
    rng.shuffle(rods)
    return validate_stratified(rods)


def test_stratified_bounds_shape(acceptance):
    record, _ = acceptance
    rng = random.Random(7)
    bad = []
    sums = []
    for _ in range(200):
        cfg = _random_stratified(rng)
        b = stratified_bounds(cfg)
        plan = drill_plan(cfg)
        sums.append(b.farey_sum)
        if not (b.upper_octahedra == b.farey_sum
                and b.lower_coeff == Fraction(b.farey_sum, 2)
                and plan.octahedra == b.farey_sum):
            bad.append(cfg)
    record("Stratified bounds shape", f"200 configs, S in [{min(sums)}, {max(sums)}], {len(bad)} failures")
    assert not bad


def _small_vectors():
    reps = {}
    for v in product((-1, 0, 1, 2), repeat=3):
        if any(v) and is_primitive(v):
            first = next(a for a in v if a)
            key = v if first > 0 else tuple(-a for a in v)
            reps.setdefault(key, v)
    return sorted(reps.values())


def _families(k):
    vecs = _small_vectors()
    out = []
    for fam in combinations(vecs, k):
        try:
            out.append(DirectionFamily(fam))
        except Exception:
            continue  # dependent directions
    return out


def _invariant(f):
    if f.k == 3:
        return abs(det3(IntMatrix3.from_columns(*f.vectors)))
    if f.k == 2:
        return vector_gcd(cross(*f.vectors))
    return 1


def _homeo_cases(k, cap, rng):
    fams = _families(k)
    n = len(fams)
    if n * n <= cap:
        return [(v, w) for v in fams for w in fams]
    # half arbitrary pairs, half pairs with equal coarse invariant
    by_inv = {}
    for f in fams:
        by_inv.setdefault(_invariant(f), []).append(f)
    seen = set()
    cases = []
    while len(cases) < cap // 2:
        pair = (rng.randrange(n), rng.randrange(n))
        if pair not in seen:
            seen.add(pair)
            cases.append((fams[pair[0]], fams[pair[1]]))
    groups = [g for g in by_inv.values() if len(g) > 1]
    keys = set((v, w) for v, w in cases)
    while len(cases) < cap:
        g = rng.choice(groups)
        pair = (rng.choice(g), rng.choice(g))
        if pair not in keys:
            keys.add(pair)
            cases.append(pair)
    return cases


def test_homeo_vs_brute_force(acceptance):
    record, _ = acceptance
    rng = random.Random(3)
    start = time.perf_counter()
    problems = []
    stats = []
    for k in (1, 2, 3):
        cases = _homeo_cases(k, 500, rng)
        positives = 0
        for v, w in cases:
            wit = equivalent(v, w)
            if wit is not None:
                positives += 1
                if not wit.verify(v, w):
                    problems.append(("witness fails", v, w))
            found = brute_force_orbit_search(v, w, 3)
            if found is not None and wit is None:
                problems.append(("oracle witness missed", v, w))
        stats.append(f"k={k}: {len(cases)} cases, {positives} equivalent")
    elapsed = time.perf_counter() - start
    record("Homeo classifier vs brute force",
           "; ".join(stats) + f"; {len(problems)} problems, {elapsed:.0f}s")
    assert not problems
    assert elapsed < 600


def test_k1_totality(acceptance):
    record, _ = acceptance
    rng = random.Random(11)
    vecs = []
    while len(vecs) < 100:
        v = tuple(rng.randint(-50, 50) for _ in range(3))
        if any(v) and is_primitive(v):
            vecs.append(v)
    failures = 0
    for a in vecs:
        for b in vecs:
            v, w = DirectionFamily((a,)), DirectionFamily((b,))
            if not equivalent_k1(v, w).verify(v, w):
                failures += 1
    record("k=1 totality", f"{len(vecs) ** 2} ordered pairs, {failures} failures")
    assert failures == 0


def _random_rod(rng):
    base = [Fraction(rng.randint(0, 3), rng.randint(1, 4)) for _ in range(3)]
    while True:
        d = tuple(rng.randint(-2, 2) for _ in range(3))
        if any(d) and is_primitive(d):
            return Rod(base, d)


def test_disjointness_oracle(acceptance):
    record, _ = acceptance
    rng = random.Random(5)
    bad, meeting = 0, 0
    for i in range(1000):
        r1 = _random_rod(rng)
        # every fourth case shares the direction, to exercise the parallel branch
        r2 = _random_rod(rng)
        if i % 4 == 0:
            r2 = Rod(r2.base, r1.direction)
        fast = rods_disjoint(r1, r2)
        meeting += not fast
        if fast != rods_disjoint_oracle(r1, r2):
            bad += 1
    record("Disjointness oracle", f"1000 cases, {meeting} meeting, {bad} disagreements")
    assert bad == 0


def test_special_case_consistency(acceptance):
    record, _ = acceptance
    order, flow = flow_orbit_bounds({Slope(1, 1), Slope(0, 1), Slope(1, 0)})
    bounds, norm = three_rod_orthogonal_bounds(axes_rods())
    record("Corollary consistency",
           f"order {' '.join(map(str, order))}, S={flow.farey_sum}; "
           f"axes d={bounds.farey_sum}, upper {bounds.upper_numeric}")
    assert order == [Slope(1, 0), Slope(0, 1), Slope(1, 1)]
    assert flow.farey_sum == 3
    assert bounds.farey_sum == 1
    assert bounds.upper_octahedra == 2
    assert abs(float(bounds.upper_numeric) - TWO_V8) <= 1e-5
