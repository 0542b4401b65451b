"""Dimension of restricted-digit sets ``pi(D^N)``.

The similarity dimension solves ``(1/a)^s + (|D|-1)(1/b)^s = 1``. The case
split in :func:`hausdorff_formula` decides when ``min(s, 1)`` is the actual
Hausdorff dimension; otherwise only a box-counting estimate is returned.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .core import AffineMap, CapExceeded, DigitWord, IDENTITY, Params, check_digit, default_cap

NO_ZERO = "no-zero-formula"
SIMILARITY = "similarity-min-s-1"
OSC = "osc-min-s-1"
ESTIMATE = "undetermined-estimate-only"
SINGLE_POINT = "single-point"
FULL_INTERVAL = "full-interval"
BOX_COUNT = "box-count-estimate"

DEFAULT_SCALES = tuple(range(6, 13))


@dataclass(frozen=True)
class DigitSet:
    digits: tuple[int, ...]

    @classmethod
    def of(cls, p: Params, digits: Iterable[int]) -> DigitSet:
        ds = tuple(sorted({check_digit(p, j) for j in digits}))
        if not ds:
            raise ValueError("digit set must be nonempty")
        return cls(ds)

    def __len__(self) -> int:
        return len(self.digits)

    def __iter__(self):
        return iter(self.digits)

    @property
    def has_zero(self) -> bool:
        return 0 in self.digits

    @property
    def nonzero(self) -> tuple[int, ...]:
        return tuple(j for j in self.digits if j)


@dataclass(frozen=True)
class Regression:
    slope: float
    intercept: float
    r2: float
    points: tuple[tuple[int, int], ...]  # (scale exponent e, occupied boxes at 2^-e)


@dataclass(frozen=True)
class DimensionResult:
    case: str
    value: float
    s: Optional[float] = None
    residual: Optional[float] = None
    regression: Optional[Regression] = None

    @property
    def is_estimate(self) -> bool:
        return self.case in (ESTIMATE, BOX_COUNT)


def solve_moran(ratios: Sequence[float], tol: float = 1e-12, max_iter: int = 200) -> tuple[float, float]:
    """Root of ``sum(r**s) = 1`` on [0, 2] by bisection. Returns ``(s, residual)``."""
    if tol <= 0:
        raise ValueError("tol must be positive")

    def f(s):
        return math.fsum(r**s for r in ratios) - 1.0

    lo, hi = 0.0, 2.0
    if f(lo) <= 0 or f(hi) >= 0:
        raise ValueError("root not bracketed in [0, 2]")
    mid = 0.5 * (lo + hi)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol and abs(fm) < tol:
            break
    return mid, f(mid)


def _ratios(p: Params, D: DigitSet) -> list[float]:
    return [1.0 / p.a if j == 0 else 1.0 / p.b for j in D]


def similarity_dimension(p: Params, D: DigitSet, tol: float = 1e-12) -> float:
    if len(D) < 2 or not D.has_zero:
        raise ValueError("similarity_dimension needs 0 in D and |D| >= 2")
    return solve_moran(_ratios(p, D), tol)[0]


def _factor(n: int) -> dict[int, int]:
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_commensurable(a: int, b: int) -> Optional[tuple[int, int]]:
    """Least ``(m, n)`` with ``a**m == b**n``, or None when ``log b / log a`` is irrational."""
    if a < 2 or b < 2:
        raise ValueError("a, b >= 2 required")
    fa, fb = _factor(a), _factor(b)
    if fa.keys() != fb.keys():
        return None
    p0 = min(fa)
    g = math.gcd(fa[p0], fb[p0])
    m, n = fb[p0] // g, fa[p0] // g
    if all(m * fa[q] == n * fb[q] for q in fa):
        return m, n
    return None


def hausdorff_formula(p: Params, D: DigitSet, tol: float = 1e-12, depth: Optional[int] = None,
                      scales: Optional[Sequence[int]] = None) -> DimensionResult:
    """Dimension of ``pi(D^N)`` by the case split on 0 in D, commensurability and digit gaps."""
    if len(D) == 1:
        return DimensionResult(SINGLE_POINT, 0.0)
    if len(D) == p.b:
        return DimensionResult(FULL_INTERVAL, 1.0)
    if not D.has_zero:
        return DimensionResult(NO_ZERO, math.log(len(D)) / math.log(p.b))
    s, res = solve_moran(_ratios(p, D), tol)
    if is_commensurable(p.a, p.b) is None:
        # Incommensurable bases still allow equal compositions of equal
        # length, e.g. T_0 T_a = T_1 T_0 whenever {0, 1, a} is in D.
        if not detect_exact_overlaps(p, D, overlap_probe_depth(D)):
            return DimensionResult(SIMILARITY, min(s, 1.0), s, res)
    # min(D \ {0}) >= b/a separates the branch images
    if p.a * min(D.nonzero) >= p.b:
        return DimensionResult(OSC, min(s, 1.0), s, res)
    est = box_count_dimension(p, D, depth if depth is not None else default_depth(p, scales),
                              scales or DEFAULT_SCALES)
    return DimensionResult(ESTIMATE, est.value, s, res, est.regression)


def overlap_probe_depth(D: DigitSet, budget: int = 20_000, max_depth: int = 10) -> int:
    n, total = 1, len(D)
    while n < max_depth and total + len(D) ** (n + 1) <= budget:
        n += 1
        total += len(D) ** n
    return n


def default_depth(p: Params, scales: Optional[Sequence[int]] = None) -> int:
    """Depth at which every cylinder is narrower than the finest box, plus one level."""
    e = max(scales or DEFAULT_SCALES)
    return math.floor(e * math.log(2) / math.log(p.a)) + 2


def attractor_cover(p: Params, D: DigitSet, depth: int,
                    cap: Optional[int] = None) -> tuple[list[tuple[int, int]], int]:
    """Union of all depth-``depth`` cylinders over ``D`` as merged closed intervals.

    Returns ``(intervals, L)`` with endpoints as integers over the common
    denominator ``L = (ab)^depth``.
    """
    cap = default_cap() if cap is None else cap
    a, b = p.a, p.b
    L = 1
    ivs = [(0, 1)]
    for _ in range(depth):
        imgs = []
        for j in D:
            if j == 0:
                imgs.extend((b * lo, b * hi) for lo, hi in ivs)
            else:
                off = j * L
                imgs.extend((a * (lo + off), a * (hi + off)) for lo, hi in ivs)
        L *= a * b
        imgs.sort()
        merged = [imgs[0]]
        for lo, hi in imgs[1:]:
            if lo <= merged[-1][1]:
                if hi > merged[-1][1]:
                    merged[-1] = (merged[-1][0], hi)
            else:
                merged.append((lo, hi))
        if len(merged) > cap:
            raise CapExceeded(f"more than {cap} cover intervals")
        ivs = merged
    return ivs, L


def count_boxes(ivs: Sequence[tuple[int, int]], L: int, e: int) -> int:
    """Number of boxes ``[k/2^e, (k+1)/2^e)`` (last one closed) meeting the intervals."""
    n = 1 << e
    last = -1
    total = 0
    for lo, hi in ivs:
        k0 = max(lo * n // L, last + 1)
        k1 = min(hi * n // L, n - 1)
        if k1 >= k0:
            total += k1 - k0 + 1
            last = k1
    return total


def box_count_dimension(p: Params, D: DigitSet, depth: int,
                        scales: Sequence[int] = DEFAULT_SCALES, cap: Optional[int] = None) -> DimensionResult:
    """Slope of log N(2^-e) against e log 2 over the depth-``depth`` cylinder cover."""
    scales = sorted(set(scales))
    if len(scales) < 2:
        raise ValueError("need at least two scales for a regression")
    widest = Fraction(1, p.a if D.has_zero else p.b) ** depth
    if widest >= Fraction(1, 2 ** scales[-1]):
        warnings.warn(f"depth {depth} leaves cylinders wider than the finest box 2^-{scales[-1]}",
                      stacklevel=2)
    ivs, L = attractor_cover(p, D, depth, cap)
    pts = tuple((e, count_boxes(ivs, L, e)) for e in scales)
    x = np.array([e * math.log(2) for e, _ in pts])
    y = np.log(np.array([n for _, n in pts], dtype=float))
    slope, intercept = np.polyfit(x, y, 1)
    ss_res = float(np.sum((y - (slope * x + intercept)) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    reg = Regression(float(slope), float(intercept), r2, pts)
    return DimensionResult(BOX_COUNT, float(slope), regression=reg)


@dataclass(frozen=True)
class OverlapPair:
    left: DigitWord
    right: DigitWord


def detect_exact_overlaps(p: Params, D: DigitSet, depth: int,
                          cap: Optional[int] = None) -> list[OverlapPair]:
    """Minimal pairs of distinct words over ``D`` (length <= depth) inducing the same affine map.

    A pair is minimal when no proper prefixes of the two words already
    induce equal maps; this discards common prefixes, common suffixes and
    concatenations of shorter collisions.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    cap = default_cap() if cap is None else cap
    total = sum(len(D) ** n for n in range(1, depth + 1))
    if total > cap:
        raise CapExceeded(f"{total} words exceed cap {cap}")
    # each distinct map gets an integer id; hashing Fractions repeatedly is slow
    maps: dict[DigitWord, AffineMap] = {(): IDENTITY}
    ids: dict[DigitWord, int] = {}
    key_ids: dict[tuple[Fraction, Fraction], int] = {}
    groups: list[list[DigitWord]] = []
    level = [()]
    singles = {j: p.digit_map(j) for j in D}
    for _ in range(depth):
        nxt = []
        for w in level:
            m = maps[w]
            for j in D:
                u = w + (j,)
                mu = m.then(singles[j])
                maps[u] = mu
                k = key_ids.setdefault((mu.ratio, mu.translation), len(groups))
                if k == len(groups):
                    groups.append([])
                groups[k].append(u)
                ids[u] = k
                nxt.append(u)
        level = nxt

    def prefix_ids(w):
        return {ids[w[:i]] for i in range(1, len(w))}

    out = []
    for words in groups:
        if len(words) < 2:
            continue
        pre = [prefix_ids(u) for u in words]
        for i, u in enumerate(words):
            for k in range(i + 1, len(words)):
                if pre[i].isdisjoint(pre[k]):
                    left, right = sorted((u, words[k]))
                    out.append(OverlapPair(left, right))
    out.sort(key=lambda q: (len(q.left) + len(q.right), q.left, q.right))
    return out
