"""Greedy map G, greedy digits, and sampled orbit statistics."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import DigitWord, Params, as_rational

DEFAULT_DENOM = 10**6 + 3


def _unit(x) -> Fraction:
    x = as_rational(x)
    if not 0 <= x <= 1:
        raise ValueError("x must lie in [0,1]")
    return x


def greedy_step(p: Params, x) -> tuple[int, Fraction]:
    """Return the greedy digit of ``x`` and ``G(x)``.

    The digit is ``floor(b*x)`` clamped to ``b-1`` so that ``x = 1`` keeps
    a legal digit; then ``G(1) = b - (b-1) = 1`` falls out of the same formula.
    """
    x = _unit(x)
    g = min(int(p.b * x), p.b - 1)
    if g == 0:
        return 0, p.a * x
    return g, p.b * x - g


def greedy_expand(p: Params, x, n: int) -> DigitWord:
    if n < 1:
        raise ValueError("n must be >= 1")
    x = _unit(x)
    out = []
    for _ in range(n):
        g, x = greedy_step(p, x)
        out.append(g)
    return tuple(out)


def orbit(p: Params, x, n: int) -> list[Fraction]:
    if n < 0:
        raise ValueError("n must be >= 0")
    pts = [_unit(x)]
    for _ in range(n):
        pts.append(greedy_step(p, pts[-1])[1])
    return pts


# Vectorised G on numerators k of k/q. Denominators never change, so int64
# is exact as long as b*q fits.
def _g_numerators(p: Params, k: np.ndarray, q: int) -> np.ndarray:
    g = np.minimum(p.b * k // q, p.b - 1)
    return np.where(g == 0, p.a * k, p.b * k - g * q)


def _sample_numerators(samples: int, seed: int, denom: int) -> np.ndarray:
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if denom < 2:
        raise ValueError("denom must be >= 2")
    rng = np.random.default_rng(seed)
    return rng.integers(1, denom, size=samples, dtype=np.int64)


def _check_int64(p: Params, denom: int):
    if p.b * denom >= 2**62:
        raise ValueError("denom too large for exact int64 orbits")


@dataclass(frozen=True)
class OrbitStats:
    samples: int
    steps: int
    hits: int
    first_hit_histogram: dict[int, int]

    @property
    def hit_fraction(self) -> Fraction:
        return Fraction(self.hits, self.samples)


def overlap_hit_stats(p: Params, samples: int = 10_000, steps: int = 100,
                      seed: int = 0, denom: int = DEFAULT_DENOM) -> OrbitStats:
    """Fraction of sampled points ``k/denom`` whose orbit enters the open overlap ``(1/b, 1/a)``.

    Step 0 is the point itself; the histogram maps first-hit step to count.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    _check_int64(p, denom)
    k = _sample_numerators(samples, seed, denom)
    first = np.full(samples, -1, dtype=np.int64)
    for step in range(steps + 1):
        inside = (p.b * k > denom) & (p.a * k < denom) & (first < 0)
        first[inside] = step
        if step < steps:
            k = _g_numerators(p, k, denom)
    hit_steps, counts = np.unique(first[first >= 0], return_counts=True)
    hist = {int(s): int(c) for s, c in zip(hit_steps, counts)}
    return OrbitStats(samples, steps, int((first >= 0).sum()), hist)


@dataclass(frozen=True)
class DensityHistogram:
    bins: int
    counts: tuple[int, ...]

    @property
    def masses(self) -> tuple[Fraction, ...]:
        total = sum(self.counts)
        return tuple(Fraction(c, total) for c in self.counts)

    def edges(self) -> list[tuple[Fraction, Fraction]]:
        return [(Fraction(i, self.bins), Fraction(i + 1, self.bins)) for i in range(self.bins)]


def invariant_density_histogram(p: Params, bins: int = 10, samples: int = 1000, steps: int = 500,
                                seed: int = 0, denom: int = DEFAULT_DENOM,
                                burn_in: float = 0.1) -> DensityHistogram:
    """Birkhoff-average histogram of sampled orbits on ``bins`` equal cells of [0,1]."""
    if bins < 2:
        raise ValueError("bins must be >= 2")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if not 0 <= burn_in < 1:
        raise ValueError("burn_in must lie in [0,1)")
    _check_int64(p, denom)
    k = _sample_numerators(samples, seed, denom)
    skip = int(steps * burn_in)
    counts = np.zeros(bins, dtype=np.int64)
    for step in range(steps):
        if step >= skip:
            # x = 1 belongs to the last cell
            cell = np.minimum(bins * k // denom, bins - 1)
            counts += np.bincount(cell, minlength=bins)
        k = _g_numerators(p, k, denom)
    return DensityHistogram(bins, tuple(int(c) for c in counts))
