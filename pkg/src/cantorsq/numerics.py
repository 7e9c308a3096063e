"""Exact rational scalars, closed intervals, and normalized interval unions.

Everything downstream (level sets, set images, decomposition certificates)
reduces to arithmetic on finite unions of closed intervals with rational
endpoints, so this module stays small and exact: no floating point enters
any computation.  The only concession to human eyes is
:func:`decimal_preview`, which rounds a rational to a fixed number of
significant digits for display.

``fractions.Fraction`` already provides the exact scalar we need
(lowest terms, positive denominator, arbitrary precision, exact field
arithmetic and total order), so it is used directly as the ``Rational``
type rather than wrapped.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

Rational = Fraction

RationalLike = Union[Fraction, int, str]


def rat(value: RationalLike) -> Rational:
    """Coerce ``value`` to an exact Rational.

    Accepts Fractions, ints, and strings of the forms ``"p/q"``, ``"n"``,
    or a terminating decimal such as ``"0.25"`` (parsed exactly).  Floats
    are rejected: they carry binary rounding error and have no place here.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError(
            "refusing float %r: pass an int, Fraction, or exact string" % (value,)
        )
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError("not an exact rational: %r" % (value,)) from exc
    raise TypeError("cannot interpret %r as a rational" % (value,))


def decimal_preview(value: RationalLike, digits: int = 30) -> str:
    """Round ``value`` to ``digits`` significant digits, for display only."""
    q = rat(value)
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(q.numerator) / Decimal(q.denominator))


@dataclass(frozen=True)
class Interval:
    """A closed interval [lo, hi] with rational endpoints, lo <= hi."""

    lo: Rational
    hi: Rational

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", rat(self.lo))
        object.__setattr__(self, "hi", rat(self.hi))
        if self.lo > self.hi:
            raise ValueError("empty interval: lo=%s > hi=%s" % (self.lo, self.hi))

    def __repr__(self) -> str:
        return "Interval(%s, %s)" % (self.lo, self.hi)

    def length(self) -> Rational:
        return self.hi - self.lo

    def contains_value(self, x: RationalLike) -> bool:
        x = rat(x)
        return self.lo <= x <= self.hi

    def contains(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def intersects(self, other: "Interval") -> bool:
        # Closed intervals: touching at a single point counts.
        return self.lo <= other.hi and other.lo <= self.hi

    def scaled(self, factor: RationalLike) -> "Interval":
        t = rat(factor)
        if t >= 0:
            return Interval(self.lo * t, self.hi * t)
        return Interval(self.hi * t, self.lo * t)

    def translated(self, offset: RationalLike) -> "Interval":
        d = rat(offset)
        return Interval(self.lo + d, self.hi + d)

    def to_json(self) -> list:
        return [str(self.lo), str(self.hi)]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "Interval":
        if len(data) != 2:
            raise ValueError("interval JSON must be a [lo, hi] pair")
        return cls(rat(data[0]), rat(data[1]))


def _normalized(intervals: Iterable[Interval]) -> tuple:
    parts: list = []
    for iv in sorted(intervals, key=lambda iv: (iv.lo, iv.hi)):
        if parts and iv.lo <= parts[-1].hi:
            # Overlapping or touching: closed intervals merge.
            if iv.hi > parts[-1].hi:
                parts[-1] = Interval(parts[-1].lo, iv.hi)
        else:
            parts.append(iv)
    return tuple(parts)


@dataclass(frozen=True, init=False)
class IntervalUnion:
    """A finite union of closed intervals, kept in normal form.

    Normal form: parts sorted by left endpoint and pairwise separated by
    strict gaps.  Overlapping or touching inputs are merged on
    construction, so two unions describe the same point set iff they
    compare equal.
    """

    parts: tuple

    def __init__(self, intervals: Iterable[Interval] = ()) -> None:
        parts = _normalized(intervals)
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "_los", tuple(p.lo for p in parts))

    @property
    def is_empty(self) -> bool:
        return not self.parts

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __repr__(self) -> str:
        if not self.parts:
            return "IntervalUnion()"
        body = " | ".join("[%s, %s]" % (p.lo, p.hi) for p in self.parts)
        return "IntervalUnion(%s)" % body

    def _part_at(self, x: Rational):
        idx = bisect_right(self._los, x) - 1
        if idx < 0:
            return None
        return self.parts[idx]

    def contains(self, target: Interval) -> bool:
        """Whole-interval membership: target inside a single part.

        Parts are separated by strict gaps, so a connected target either
        fits inside one part or is not contained at all.
        """
        part = self._part_at(target.lo)
        return part is not None and target.hi <= part.hi

    def contains_value(self, x: RationalLike) -> bool:
        x = rat(x)
        part = self._part_at(x)
        return part is not None and x <= part.hi

    def contains_union(self, other: "IntervalUnion") -> bool:
        return all(self.contains(p) for p in other.parts)

    def scale(self, factor: RationalLike) -> "IntervalUnion":
        """Pointwise scaling {t*x : x in self}; t = 0 collapses to {0}."""
        t = rat(factor)
        if self.is_empty:
            return IntervalUnion()
        if t == 0:
            return IntervalUnion([Interval(0, 0)])
        return IntervalUnion(p.scaled(t) for p in self.parts)

    def minkowski_sum(self, other: "IntervalUnion") -> "IntervalUnion":
        """{x + y : x in self, y in other}, exact."""
        return IntervalUnion(
            Interval(a.lo + b.lo, a.hi + b.hi)
            for a in self.parts
            for b in other.parts
        )

    def measure(self) -> Rational:
        """Total length (Lebesgue measure) of the union."""
        return sum((p.length() for p in self.parts), Fraction(0))

    def hull(self):
        if self.is_empty:
            return None
        return Interval(self.parts[0].lo, self.parts[-1].hi)

    def to_json(self) -> list:
        return [p.to_json() for p in self.parts]

    @classmethod
    def from_json(cls, data: Iterable[Sequence[str]]) -> "IntervalUnion":
        return cls(Interval.from_json(item) for item in data)


def box_sum_of_squares_image(box: Sequence[Interval]) -> Interval:
    """Exact image of a box under (x_1, ..., x_k) -> sum of squares.

    Requires 1 <= k <= 4 and every interval inside [0, inf).  On such a
    box the map is coordinatewise monotone, so the image is the closed
    interval between the all-lo and all-hi corners.
    """
    if not 1 <= len(box) <= 4:
        raise ValueError("box must have 1 to 4 coordinates, got %d" % len(box))
    for iv in box:
        if iv.lo < 0:
            raise ValueError("sum-of-squares box must be nonnegative, got %r" % (iv,))
    lo = sum((iv.lo * iv.lo for iv in box), Fraction(0))
    hi = sum((iv.hi * iv.hi for iv in box), Fraction(0))
    return Interval(lo, hi)


@dataclass(frozen=True)
class OpenInterval:
    """The closure of an interval plus strictness flags for each endpoint.

    Used to report open gaps exactly: the point set is (lo, hi) when both
    flags are set, with the closed variants available by clearing them.
    """

    lo: Rational
    hi: Rational
    lo_strict: bool = True
    hi_strict: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", rat(self.lo))
        object.__setattr__(self, "hi", rat(self.hi))

    @property
    def is_empty(self) -> bool:
        if self.lo_strict or self.hi_strict:
            return self.lo >= self.hi
        return self.lo > self.hi

    def to_json(self) -> dict:
        return {
            "lo": str(self.lo),
            "hi": str(self.hi),
            "lo_strict": self.lo_strict,
            "hi_strict": self.hi_strict,
        }
