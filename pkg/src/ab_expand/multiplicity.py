"""Counting expansions, the shift criterion for uniqueness, and unique-expansion families."""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

from .core import (
    CapExceeded,
    DigitWord,
    EnumerationOverflow,
    EventuallyPeriodicWord,
    Params,
    as_rational,
    default_cap,
    pi_periodic,
    shift_values,
)


class GoodRegion:
    """``[0, 1/b) u (1/a, 1]`` minus the points ``j/b``, ``2 <= j < b``.

    A tail value outside this set admits two first digits.
    """

    def __init__(self, p: Params):
        self.params = p

    def __contains__(self, x) -> bool:
        p = self.params
        x = as_rational(x)
        if not 0 <= x <= 1:
            return False
        if x < p.inv_b:
            return True
        if x <= p.inv_a:
            return False
        return (x * p.b).denominator != 1 or x == 1


def viable_digits(p: Params, x) -> frozenset[int]:
    """Digits ``j`` with ``x`` in the closed branch image ``T_j([0,1])``."""
    x = as_rational(x)
    if not 0 <= x <= 1:
        raise ValueError("x must lie in [0,1]")
    return frozenset(_viable(p, x.numerator, x.denominator))


def _viable(p: Params, y: int, q: int) -> list[int]:
    # y/q in [0,1]; integer-only tests
    out = [0] if p.a * y <= q else []
    by = p.b * y
    hi = min(by // q, p.b - 1)
    for j in (hi - 1, hi):
        if j >= 1 and j * q <= by <= (j + 1) * q:
            out.append(j)
    return out


def _preimage(p: Params, j: int, y: int, q: int) -> int:
    return p.a * y if j == 0 else p.b * y - j * q


@dataclass(frozen=True)
class PrefixCount:
    x: Fraction
    depth: int
    counts: tuple[int, ...]
    words: Optional[tuple[DigitWord, ...]] = None


def enumerate_prefixes(p: Params, x, depth: int, cap: Optional[int] = None,
                       keep_words: bool = False) -> PrefixCount:
    """Count depth-n words whose cylinder contains ``x`` for n = 0..depth.

    Without ``keep_words`` nodes carrying the same tail value are merged and
    counted with multiplicity, so ``cap`` bounds the number of distinct
    states held. With ``keep_words`` the tree is expanded literally and
    ``cap`` bounds the number of tree nodes.
    """
    x = as_rational(x)
    if not 0 <= x <= 1:
        raise ValueError("x must lie in [0,1]")
    if depth < 0:
        raise ValueError("depth must be >= 0")
    cap = default_cap() if cap is None else cap
    q = x.denominator
    counts = [1]
    used = 1

    if keep_words:
        level = [((), x.numerator)]
        for n in range(depth):
            nxt = []
            for w, y in level:
                for j in _viable(p, y, q):
                    nxt.append((w + (j,), _preimage(p, j, y, q)))
            used += len(nxt)
            if used > cap:
                raise EnumerationOverflow(
                    f"enumeration overflow at depth {n + 1} (cap {cap})", partial=tuple(counts))
            level = nxt
            counts.append(len(level))
        words = tuple(sorted(w for w, _ in level))
        return PrefixCount(x, depth, tuple(counts), words)

    states = {x.numerator: 1}
    for n in range(depth):
        nxt: dict[int, int] = {}
        for y, mult in states.items():
            for j in _viable(p, y, q):
                z = _preimage(p, j, y, q)
                nxt[z] = nxt.get(z, 0) + mult
        used += len(nxt)
        if used > cap:
            raise EnumerationOverflow(
                f"enumeration overflow at depth {n + 1} (cap {cap})", partial=tuple(counts))
        states = nxt
        counts.append(sum(states.values()))
    return PrefixCount(x, depth, tuple(counts))


@dataclass(frozen=True)
class UniquenessVerdict:
    unique: bool
    value: Fraction
    witness_shift: Optional[int] = None
    witness_value: Optional[Fraction] = None


def check_unique(p: Params, w: EventuallyPeriodicWord) -> UniquenessVerdict:
    """Decide whether ``pi(w)`` has exactly one expansion.

    Every distinct shift of ``w`` is evaluated exactly; the first one falling
    outside the good region is returned as the witness.
    """
    vals = shift_values(p, w)
    good = GoodRegion(p)
    for k, v in enumerate(vals):
        if v not in good:
            return UniquenessVerdict(False, vals[0], k, v)
    return UniquenessVerdict(True, vals[0])


def lyndon_words(k: int, n: int) -> Iterator[DigitWord]:
    """Lyndon words over ``0..k-1`` of length ``1..n`` in lexicographic order (Duval)."""
    w = [-1]
    while w:
        w[-1] += 1
        yield tuple(w)
        m = len(w)
        while len(w) < n:
            w.append(w[len(w) - m])
        while w and w[-1] == k - 1:
            w.pop()


def search_unique_periodic(p: Params, max_period: int,
                           cap: Optional[int] = None) -> list[tuple[EventuallyPeriodicWord, Fraction]]:
    """All purely periodic unique expansions with primitive period length <= ``max_period``.

    Each orbit is reported once, by its lexicographically least rotation.
    """
    if max_period < 1:
        raise ValueError("max_period must be >= 1")
    cap = default_cap() if cap is None else cap
    found = []
    for i, per in enumerate(lyndon_words(p.b, max_period)):
        if i >= cap:
            raise CapExceeded(f"more than {cap} periodic words", partial=found)
        w = EventuallyPeriodicWord((), per)
        v = check_unique(p, w)
        if v.unique:
            found.append((w, v.value))
    found.sort(key=lambda t: (t[1], len(t[0].period), t[0].period))
    return found


def prepend_zeros(w: EventuallyPeriodicWord, m: int) -> EventuallyPeriodicWord:
    return EventuallyPeriodicWord((0,) * m + w.preperiod, w.period)


@dataclass(frozen=True)
class LanguageInfo:
    """Block language ``U = V u 0V u lV`` with ``V = {0l, l0}^N`` and ``b = l*a - r``."""

    params: Params
    l: int
    r: int
    countable_condition: bool
    uncountable_condition: bool

    @property
    def blocks(self) -> tuple[DigitWord, DigitWord]:
        return (0, self.l), (self.l, 0)

    def words(self, n: int) -> Iterator[DigitWord]:
        """Distinct length-``n`` prefixes of words in ``U``, sorted."""
        if n < 0:
            raise ValueError("n must be >= 0")
        nb = n // 2 + 1
        out = set()
        for head in ((), (0,), (self.l,)):
            for seq in itertools.product(self.blocks, repeat=nb):
                digits = head + sum(seq, ())
                out.add(digits[:n])
        yield from sorted(out)


def thm42_language(p: Params) -> LanguageInfo:
    l = -(-p.b // p.a)
    r = l * p.a - p.b
    return LanguageInfo(p, l, r, p.b < p.a**2, p.b < p.a**2 - 2 - r)


def canonical(w: EventuallyPeriodicWord) -> EventuallyPeriodicWord:
    """Primitive period and shortest preperiod describing the same sequence."""
    per = w.period
    m = len(per)
    for d in range(1, m + 1):
        if m % d == 0 and per[:d] * (m // d) == per:
            per = per[:d]
            break
    pre = w.preperiod
    while pre and pre[-1] == per[-1]:
        pre = pre[:-1]
        per = per[-1:] + per[:-1]
    return EventuallyPeriodicWord(pre, per)


def language_periodic_words(info: LanguageInfo, depth: int) -> list[EventuallyPeriodicWord]:
    """Eventually periodic words of ``U`` whose preperiod plus period has at most ``depth`` digits."""
    a_blk, b_blk = info.blocks
    seen = set()
    out = []
    for per in lyndon_words(2, depth // 2):
        per_digits = sum((info.blocks[i] for i in per), ())
        for head in ((), (0,), (info.l,)):
            room = (depth - len(head) - len(per_digits)) // 2
            for k in range(room + 1):
                for pre in itertools.product((a_blk, b_blk), repeat=k):
                    w = canonical(EventuallyPeriodicWord(head + sum(pre, ()), per_digits))
                    if w not in seen:
                        seen.add(w)
                        out.append(w)
    return out


@dataclass
class LanguageReport:
    info: LanguageInfo
    depth: int
    max_start_zero: Fraction
    min_start_l: Fraction
    max_below_inv_b: bool
    min_above_inv_a: bool
    checked: int
    failures: list[tuple[EventuallyPeriodicWord, UniquenessVerdict]] = field(default_factory=list)

    @property
    def all_unique(self) -> bool:
        return not self.failures


def verify_language_bounds(p: Params, depth: int = 20, cap: Optional[int] = None) -> LanguageReport:
    """Check the extremal values of ``U`` against the good region and test its periodic members.

    The extremal words are ``0,l,(l,0)^inf`` (largest starting with 0) and
    ``l,0,(0,l)^inf`` (smallest starting with l).
    """
    info = thm42_language(p)
    if not info.uncountable_condition:
        warnings.warn(f"b < a^2 - 2 - r fails for (a, b) = ({p.a}, {p.b}); bounds may not hold",
                      stacklevel=2)
    if depth < 2:
        raise ValueError("depth must be >= 2")
    cap = default_cap() if cap is None else cap
    l = info.l
    hi0 = pi_periodic(p, EventuallyPeriodicWord((0, l), (l, 0)))
    lo_l = pi_periodic(p, EventuallyPeriodicWord((l, 0), (0, l)))
    words = language_periodic_words(info, depth)
    if len(words) > cap:
        raise CapExceeded(f"{len(words)} language words exceed cap {cap}")
    failures = []
    for w in words:
        v = check_unique(p, w)
        if not v.unique:
            failures.append((w, v))
    return LanguageReport(info, depth, hi0, lo_l, hi0 < p.inv_b, lo_l > p.inv_a, len(words), failures)
