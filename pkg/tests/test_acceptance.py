"""Exit criteria. Each test carries its criterion number; the terminal summary prints PASS/FAIL per criterion."""
import math
import random
import time
from fractions import Fraction as F

import mpmath
import pytest

from ab_expand.core import EventuallyPeriodicWord, cylinder, validate_params
from ab_expand.dimension import (
    NO_ZERO,
    OSC,
    ESTIMATE,
    SIMILARITY,
    DigitSet,
    box_count_dimension,
    detect_exact_overlaps,
    hausdorff_formula,
    is_commensurable,
    similarity_dimension,
)
from ab_expand.dynamics import greedy_expand, invariant_density_histogram, overlap_hit_stats
from ab_expand.multiplicity import (
    check_unique,
    enumerate_prefixes,
    prepend_zeros,
    thm42_language,
    verify_language_bounds,
)

Q = 10**6 + 3
P23 = validate_params(2, 3)


def _mp_bisect(a, b, k, lo=0, hi=2, iters=200):
    # independent of the library solver: 50-digit mpmath bisection
    with mpmath.workdps(50):
        f = lambda s: mpmath.mpf(1) / mpmath.mpf(a) ** s + (k - 1) / mpmath.mpf(b) ** s - 1
        lo, hi = mpmath.mpf(lo), mpmath.mpf(hi)
        for _ in range(iters):
            mid = (lo + hi) / 2
            if f(mid) > 0:
                lo = mid
            else:
                hi = mid
        return float((lo + hi) / 2)


@pytest.mark.criterion(1, "greedy round trip: x in cylinder(greedy_expand(x, 50)) for 1000 rationals, < 5 s")
def test_c1_greedy_round_trip():
    rng = random.Random(20240601)
    xs = [F(rng.randrange(1, Q), Q) for _ in range(1000)]
    t0 = time.perf_counter()
    for x in xs:
        cyl = cylinder(P23, greedy_expand(P23, x, 50))
        assert x in cyl
        assert cyl.width <= F(1, 2**50)
    assert time.perf_counter() - t0 < 5.0


@pytest.mark.criterion(2, "(0,1,2)^inf unique with value 5/17; 40 levels of single prefixes; 20 zero-prefixed unique points")
def test_c2_unique_point():
    w = EventuallyPeriodicWord((), (0, 1, 2))
    v = check_unique(P23, w)
    assert v.unique and v.value == F(5, 17)
    pc = enumerate_prefixes(P23, F(5, 17), 40)
    assert all(c == 1 for c in pc.counts)
    values = set()
    for m in range(1, 21):
        vm = check_unique(P23, prepend_zeros(w, m))
        assert vm.unique
        assert vm.value == F(5, 17) / 2**m
        values.add(vm.value)
    assert len(values) == 20


@pytest.mark.criterion(3, "(0,2)^inf not unique, witness 2/5; enumerator shows two first digits")
def test_c3_zero_a_family_guard():
    v = check_unique(P23, EventuallyPeriodicWord((), (0, 2)))
    assert not v.unique
    assert v.witness_value == F(2, 5)
    pc = enumerate_prefixes(P23, F(2, 5), 10)
    assert pc.counts[1] == 2


@pytest.mark.criterion(4, "(3,5) block language: l=2, r=1, extremes 17/105 < 1/5 and 43/105 > 1/3, all words unique, < 10 s")
def test_c4_language_3_5():
    p = validate_params(3, 5)
    info = thm42_language(p)
    assert (info.l, info.r) == (2, 1)
    assert info.countable_condition and info.uncountable_condition
    t0 = time.perf_counter()
    rep = verify_language_bounds(p, 20)
    assert time.perf_counter() - t0 < 10.0
    assert rep.max_start_zero == F(17, 105) and rep.max_start_zero < F(1, 5)
    assert rep.min_start_l == F(43, 105) and rep.min_start_l > F(1, 3)
    assert rep.max_below_inv_b and rep.min_above_inv_a
    assert rep.checked > 0 and rep.all_unique


@pytest.mark.criterion(5, "counts(1/2; n) = n+1 for n <= 60; >= 95% of 500 random rationals reach 16 expansions at depth 60")
def test_c5_multiplicity_growth():
    pc = enumerate_prefixes(P23, F(1, 2), 60)
    assert pc.counts == tuple(n + 1 for n in range(61))
    rng = random.Random(7)
    good = 0
    for _ in range(500):
        c = enumerate_prefixes(P23, F(rng.randrange(1, Q), Q), 60).counts
        assert all(c[i] <= c[i + 1] for i in range(60))
        good += c[60] >= 16
    assert good >= 0.95 * 500


@pytest.mark.criterion(6, "orbit statistics: hit fraction >= 0.999; 10-bin density strictly positive, < 10 s")
def test_c6_orbit_statistics():
    t0 = time.perf_counter()
    st = overlap_hit_stats(P23, samples=10_000, steps=100, seed=42, denom=Q)
    h = invariant_density_histogram(P23, bins=10, samples=1000, steps=500, seed=42, denom=Q)
    assert time.perf_counter() - t0 < 10.0
    assert st.hit_fraction >= F(999, 1000)
    assert len(h.masses) == 10 and all(m > 0 for m in h.masses)
    assert sum(h.masses) == 1


@pytest.mark.criterion(7, "similarity solver: golden-ratio closed form within 1e-9; (2,3,{0,1}) matches bisection oracle within 1e-9")
def test_c7_similarity_solver():
    p24 = validate_params(2, 4)
    s = similarity_dimension(p24, DigitSet.of(p24, (0, 1)))
    assert abs(s - math.log2((1 + math.sqrt(5)) / 2)) < 1e-9
    s = similarity_dimension(P23, DigitSet.of(P23, (0, 1)))
    assert abs(s - _mp_bisect(2, 3, 2)) < 1e-9
    assert abs(s - 0.788) < 1e-3


@pytest.mark.criterion(8, "dimension case split on the four reference instances")
def test_c8_case_split():
    r = hausdorff_formula(P23, DigitSet.of(P23, (1, 2)))
    assert r.case == NO_ZERO and abs(r.value - math.log(2) / math.log(3)) < 1e-12
    assert hausdorff_formula(P23, DigitSet.of(P23, (0, 1))).case == SIMILARITY
    p24 = validate_params(2, 4)
    assert hausdorff_formula(p24, DigitSet.of(p24, (0, 2))).case == OSC
    r = hausdorff_formula(p24, DigitSet.of(p24, (0, 1)))
    assert r.case == ESTIMATE and r.is_estimate


@pytest.mark.criterion(9, "box counting: (2,3,{0,1}) within 0.05 of s with r^2 > 0.99; full alphabet within 0.02 of 1; < 60 s")
def test_c9_box_counting():
    s = similarity_dimension(P23, DigitSet.of(P23, (0, 1)))
    t0 = time.perf_counter()
    r = box_count_dimension(P23, DigitSet.of(P23, (0, 1)), depth=14, scales=range(6, 13))
    full = box_count_dimension(P23, DigitSet.of(P23, (0, 1, 2)), depth=14, scales=range(6, 13))
    assert time.perf_counter() - t0 < 60.0
    assert abs(r.value - s) < 0.05 and r.regression.r2 > 0.99
    assert abs(full.value - 1) < 0.02


@pytest.mark.criterion(10, "commensurability (2,4)->(2,1), (4,8)->(3,2), (2,3)->none; overlap ((0,2),(1,0)) at (2,4); none at (2,3) full alphabet depth <= 10")
def test_c10_commensurability_and_known_overlap():
    assert is_commensurable(2, 4) == (2, 1)
    assert is_commensurable(4, 8) == (3, 2)
    assert is_commensurable(2, 3) is None
    p24 = validate_params(2, 4)
    pairs = detect_exact_overlaps(p24, DigitSet.of(p24, (0, 1, 2)), 2)
    assert ((0, 2), (1, 0)) in [(q.left, q.right) for q in pairs]


@pytest.mark.criterion(10, "commensurability (2,4)->(2,1), (4,8)->(3,2), (2,3)->none; overlap ((0,2),(1,0)) at (2,4); none at (2,3) full alphabet depth <= 10")
@pytest.mark.parametrize("depth", range(1, 11))
def test_c10_no_overlaps_incommensurable(depth):
    pairs = detect_exact_overlaps(P23, DigitSet.of(P23, (0, 1, 2)), depth)
    assert pairs == []
