"""Exact arithmetic for a,b-expansions.

Digit 0 acts as ``x -> x/a`` and digit ``j >= 1`` as ``x -> (x + j)/b``.
Everything here works on :class:`fractions.Fraction`; no floats.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

DigitWord = tuple[int, ...]


def as_rational(x) -> Fraction:
    """Coerce ``x`` to a Fraction. Accepts ints, Fractions and "p/q" strings."""
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse rational {x!r}") from exc
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def issubset(self, other: Interval) -> bool:
        return other.lo <= self.lo and self.hi <= other.hi


@dataclass(frozen=True)
class Params:
    """Base pair ``1 < a < b``. Build through :func:`validate_params`."""

    a: int
    b: int

    def __post_init__(self):
        for name in ("a", "b"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                raise TypeError(f"{name} must be an integer, got {v!r}")
        if self.a <= 1:
            raise ValueError("a > 1 required")
        if self.b <= self.a:
            raise ValueError("a < b required")

    @property
    def inv_a(self) -> Fraction:
        return Fraction(1, self.a)

    @property
    def inv_b(self) -> Fraction:
        return Fraction(1, self.b)

    @property
    def alphabet(self) -> range:
        return range(self.b)

    @property
    def overlap(self) -> Interval:
        """Closed overlap ``[1/b, 1/a]`` of the branches for digits 0 and 1."""
        return Interval(self.inv_b, self.inv_a)

    @property
    def boundary_points(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(j, self.b) for j in range(2, self.b))

    def digit_map(self, j: int) -> AffineMap:
        check_digit(self, j)
        if j == 0:
            return AffineMap(self.inv_a, Fraction(0))
        return AffineMap(self.inv_b, Fraction(j, self.b))


def validate_params(a, b) -> Params:
    return Params(a, b)


def check_digit(p: Params, j) -> int:
    if isinstance(j, bool) or not isinstance(j, int):
        raise TypeError(f"digit must be an integer, got {j!r}")
    if not 0 <= j < p.b:
        raise ValueError(f"digit {j} outside alphabet 0..{p.b - 1}")
    return j


def check_word(p: Params, w: Iterable[int]) -> DigitWord:
    return tuple(check_digit(p, j) for j in w)


@dataclass(frozen=True)
class AffineMap:
    """``x -> ratio * x + translation``."""

    ratio: Fraction
    translation: Fraction

    def __call__(self, x) -> Fraction:
        return self.ratio * x + self.translation

    def then(self, inner: AffineMap) -> AffineMap:
        """Return ``self o inner``."""
        return AffineMap(self.ratio * inner.ratio, self.ratio * inner.translation + self.translation)

    def inverse(self, y) -> Fraction:
        return (y - self.translation) / self.ratio

    def fixed_point(self) -> Fraction:
        if self.ratio >= 1:
            raise ValueError("fixed point requires a strict contraction")
        return self.translation / (1 - self.ratio)

    @property
    def image(self) -> Interval:
        return Interval(self.translation, self.translation + self.ratio)


IDENTITY = AffineMap(Fraction(1), Fraction(0))


def compose_word(p: Params, w: Sequence[int]) -> AffineMap:
    """Exact ``T_{w1} o ... o T_{wn}``; the empty word gives the identity."""
    m = IDENTITY
    for j in w:
        m = m.then(p.digit_map(j))
    return m


def cylinder(p: Params, w: Sequence[int]) -> Interval:
    return compose_word(p, w).image


def pi_prefix(p: Params, w: Sequence[int]) -> Fraction:
    """Value of ``w`` followed by zeros, i.e. the truncated series."""
    return compose_word(p, w).translation


@dataclass(frozen=True)
class EventuallyPeriodicWord:
    """``preperiod`` followed by ``period`` repeated forever."""

    preperiod: DigitWord
    period: DigitWord

    def __post_init__(self):
        object.__setattr__(self, "preperiod", tuple(self.preperiod))
        object.__setattr__(self, "period", tuple(self.period))
        if not self.period:
            raise ValueError("period must be nonempty")

    @classmethod
    def parse(cls, text: str) -> EventuallyPeriodicWord:
        """Parse ``"pre|per"`` with comma separated digits, e.g. ``"|0,1,2"``."""
        if "|" not in text:
            raise ValueError(f"expected 'pre|per', got {text!r}")
        pre, per = text.split("|", 1)

        def digits(s):
            s = s.strip()
            return tuple(int(t) for t in s.split(",")) if s else ()

        try:
            return cls(digits(pre), digits(per))
        except ValueError as exc:
            raise ValueError(f"bad periodic word {text!r}: {exc}") from exc

    def __str__(self) -> str:
        return ",".join(map(str, self.preperiod)) + "|" + ",".join(map(str, self.period))

    def __len__(self) -> int:
        return len(self.preperiod) + len(self.period)

    def digit(self, i: int) -> int:
        """Digit at 0-based position ``i``."""
        n = len(self.preperiod)
        if i < n:
            return self.preperiod[i]
        return self.period[(i - n) % len(self.period)]

    def prefix(self, n: int) -> DigitWord:
        return tuple(self.digit(i) for i in range(n))

    def shift(self, k: int = 1) -> EventuallyPeriodicWord:
        n = len(self.preperiod)
        if k <= n:
            return EventuallyPeriodicWord(self.preperiod[k:], self.period)
        r = (k - n) % len(self.period)
        return EventuallyPeriodicWord((), self.period[r:] + self.period[:r])


def pi_periodic(p: Params, w: EventuallyPeriodicWord) -> Fraction:
    check_word(p, w.preperiod)
    check_word(p, w.period)
    y = compose_word(p, w.period).fixed_point()
    return compose_word(p, w.preperiod)(y)


def shift_values(p: Params, w: EventuallyPeriodicWord) -> list[Fraction]:
    """``pi(sigma^k w)`` for ``k = 0 .. len(w) - 1``, computed backwards from the period's fixed point."""
    check_word(p, w.preperiod)
    check_word(p, w.period)
    per = w.period
    m = len(per)
    cyc = [Fraction(0)] * m
    cyc[0] = compose_word(p, per).fixed_point()
    for i in range(m - 1, 0, -1):
        # pi(rotation i) = T_{per[i]}(pi(rotation i+1))
        cyc[i] = p.digit_map(per[i])(cyc[(i + 1) % m])
    pre = []
    y = cyc[0]
    for j in reversed(w.preperiod):
        y = p.digit_map(j)(y)
        pre.append(y)
    pre.reverse()
    return pre + cyc


class CapExceeded(RuntimeError):
    """A combinatorial resource cap was hit. ``partial`` holds whatever was computed."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class EnumerationOverflow(CapExceeded):
    pass


def default_cap() -> int:
    import os

    raw = os.environ.get("AB_EXPAND_MAX_NODES")
    return int(raw) if raw else 10**6
