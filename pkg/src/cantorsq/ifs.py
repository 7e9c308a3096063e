"""Middle-1/alpha Cantor sets as an iterated function system.

For a parameter alpha > 1 put r = (1 - 1/alpha)/2 and contract the unit
interval by the two affine maps

    left(x)  = r*x,
    right(x) = r*x + (1 - r),

which keep the middle open 1/alpha-fraction out.  Applying all words of
length n to [0, 1] yields the level-n set: 2^n closed basic intervals of
length r^n whose left endpoints we enumerate exactly.  The attractor is
the decreasing intersection of the level sets; alpha = 3 gives the
classical middle-thirds set.

Digit convention: words are strings over {1, 2}, digit 1 = left map,
digit 2 = right map.  The left endpoint of the basic interval addressed
by a word sigma is

    value(sigma) = ((1 - r)/r) * sum_k (sigma_k - 1) * r^k.

Points of the attractor are addressed by a finite prefix word plus an
infinite constant tail: tail "L" (all-left) pins the left endpoint of the
prefix's basic interval, tail "R" (all-right) its right endpoint.  Both
endpoints of every basic interval belong to the attractor.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .errors import CapExceeded
from .numerics import Interval, IntervalUnion, Rational, RationalLike, rat

#: Refuse to enumerate a level with more than this many basic intervals.
DEFAULT_LEVEL_CAP = 1 << 20

ALL_LEFT = "L"
ALL_RIGHT = "R"

_DIGITS = frozenset("12")


def check_word(word: str) -> str:
    """Validate a digit word over {1, 2} and return it unchanged."""
    if not isinstance(word, str):
        raise TypeError("word must be a string of digits over {1, 2}")
    if not _DIGITS.issuperset(word):
        raise ValueError("word %r has digits outside {1, 2}" % (word,))
    return word


@dataclass(frozen=True)
class CantorParams:
    """Validated parameter pair (alpha, ratio) with ratio = (1 - 1/alpha)/2."""

    alpha: Rational
    ratio: Rational

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", rat(self.alpha))
        object.__setattr__(self, "ratio", rat(self.ratio))
        if self.alpha <= 1:
            raise ValueError("alpha must exceed 1, got %s" % (self.alpha,))
        if self.ratio != (1 - 1 / self.alpha) / 2:
            raise ValueError(
                "inconsistent parameters: ratio %s does not match alpha %s"
                % (self.ratio, self.alpha)
            )

    @property
    def thick(self) -> bool:
        """True when alpha >= 3, i.e. ratio >= 1/3."""
        return self.alpha >= 3

    @property
    def gap_fraction(self) -> Rational:
        """Relative length 1/alpha of the gap removed from each interval."""
        return 1 / self.alpha


def make_params(alpha: RationalLike) -> CantorParams:
    """Build parameters from alpha > 1."""
    a = rat(alpha)
    if a <= 1:
        raise ValueError("alpha must exceed 1, got %s" % (a,))
    return CantorParams(a, (1 - 1 / a) / 2)


def params_from_ratio(ratio: RationalLike) -> CantorParams:
    """Build parameters from the contraction ratio, 0 < ratio < 1/2."""
    r = rat(ratio)
    if not 0 < r < Fraction(1, 2):
        raise ValueError("ratio must lie in (0, 1/2), got %s" % (r,))
    return CantorParams(1 / (1 - 2 * r), r)


def word_left_endpoint(params: CantorParams, word: str) -> Rational:
    """Left endpoint of the basic interval addressed by ``word``.

    Evaluates the word right to left: starting from 0, digit 1 applies the
    left map and digit 2 the right map, which reproduces
    ((1 - r)/r) * sum_k (sigma_k - 1) r^k without building powers.
    """
    check_word(word)
    r = params.ratio
    offset = 1 - r
    x = Fraction(0)
    for digit in reversed(word):
        x = r * x + (offset if digit == "2" else 0)
    return x


@lru_cache(maxsize=64)
def _level_ints(params: CantorParams, level: int) -> tuple:
    """Level-``level`` left endpoints scaled by q**level, as sorted ints.

    With ratio = p/q in lowest terms every level-n left endpoint times q^n
    is an integer; the recurrence a -> (a*q, a*q + (q-p)*p^k) mirrors the
    two children of each basic interval and preserves sorted order.
    """
    p = params.ratio.numerator
    q = params.ratio.denominator
    vals = [0]
    for k in range(level):
        step = (q - p) * p**k
        vals = [a * q + child for a in vals for child in (0, step)]
    return tuple(vals)


def level_left_endpoints(
    params: CantorParams, level: int, cap: Optional[int] = None
) -> tuple:
    """All 2**level left endpoints of the level set, sorted ascending."""
    if level < 0:
        raise ValueError("level must be nonnegative")
    cap = DEFAULT_LEVEL_CAP if cap is None else cap
    if 1 << level > cap:
        raise CapExceeded(
            "level %d has %d basic intervals, above the cap %d"
            % (level, 1 << level, cap)
        )
    den = params.ratio.denominator ** level
    return tuple(Fraction(a, den) for a in _level_ints(params, level))


def level_set(
    params: CantorParams, level: int, cap: Optional[int] = None
) -> IntervalUnion:
    """The level set: the union of all 2**level basic intervals."""
    if level < 0:
        raise ValueError("level must be nonnegative")
    cap = DEFAULT_LEVEL_CAP if cap is None else cap
    if 1 << level > cap:
        raise CapExceeded(
            "level %d has %d basic intervals, above the cap %d"
            % (level, 1 << level, cap)
        )
    den = params.ratio.denominator ** level
    width = params.ratio.numerator ** level
    return IntervalUnion(
        Interval(Fraction(a, den), Fraction(a + width, den))
        for a in _level_ints(params, level)
    )


@dataclass(frozen=True)
class BasicInterval:
    """A level-``level`` basic interval identified by its left endpoint."""

    left: Rational
    level: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "left", rat(self.left))
        if self.level < 0:
            raise ValueError("level must be nonnegative")

    def interval(self, params: CantorParams) -> Interval:
        return Interval(self.left, self.left + params.ratio**self.level)

    def children(self, params: CantorParams) -> tuple:
        """The two level+1 basic intervals obtained by one subdivision.

        The left child keeps the left endpoint; the right child starts at
        left + (1 - r) * r^level.  The open gap between them has length
        r^level / alpha.
        """
        r = params.ratio
        lo = BasicInterval(self.left, self.level + 1)
        hi = BasicInterval(self.left + (1 - r) * r**self.level, self.level + 1)
        return lo, hi


def children(params: CantorParams, basic: BasicInterval) -> tuple:
    return basic.children(params)


@dataclass(frozen=True)
class CantorPoint:
    """An attractor point: finite prefix word plus constant infinite tail."""

    prefix: str
    tail: str

    def __post_init__(self) -> None:
        check_word(self.prefix)
        if self.tail not in (ALL_LEFT, ALL_RIGHT):
            raise ValueError("tail must be %r or %r" % (ALL_LEFT, ALL_RIGHT))

    def value(self, params: CantorParams) -> Rational:
        """Exact coordinate: the all-left tail pins the left endpoint of
        the prefix interval, the all-right tail its right endpoint."""
        base = word_left_endpoint(params, self.prefix)
        if self.tail == ALL_RIGHT:
            return base + params.ratio ** len(self.prefix)
        return base

    def with_scaling_prefix(self, count: int) -> "CantorPoint":
        """Prepend ``count`` left-map digits, scaling the value by r**count."""
        if count < 0:
            raise ValueError("count must be nonnegative")
        return CantorPoint("1" * count + self.prefix, self.tail)

    def to_json(self) -> dict:
        return {"prefix": self.prefix, "tail": self.tail}

    @classmethod
    def from_json(cls, data: dict) -> "CantorPoint":
        return cls(data["prefix"], data["tail"])


def point_value(params: CantorParams, point: CantorPoint) -> Rational:
    return point.value(params)


def word_from_left_endpoint(
    params: CantorParams, value: RationalLike, level: int
) -> Optional[str]:
    """Greedy digit extraction: recover the level-``level`` word whose basic
    interval starts at ``value``, or None if there is no such word.

    At each step the level-1 split decides the digit: left-child endpoints
    live in [0, r), right-child endpoints in [1 - r, 1), and r < 1 - r,
    so the threshold 1 - r separates them exactly.
    """
    if level < 0:
        raise ValueError("level must be nonnegative")
    r = params.ratio
    offset = 1 - r
    x = rat(value)
    if x < 0 or x >= 1:
        return None
    digits = []
    for _ in range(level):
        if x >= offset:
            digits.append("2")
            x = (x - offset) / r
        else:
            digits.append("1")
            x = x / r
        if x < 0 or x >= 1:
            return None
    return "".join(digits) if x == 0 else None
