"""Subdivision lemmas for triple boxes under the sum of three squares.

A triple box at level n is a product I_u x I_v x I_w of three level-n
basic intervals, named by its left endpoints (u, v, w).  Its image under
g(x, y, z) = x^2 + y^2 + z^2 is the single interval

    [t, t + 2*(u+v+w)*r^n + 3*r^(2n)],      t = u^2 + v^2 + w^2.

Subdividing each coordinate gives 8 child boxes indexed by bits
(i, j, l), bit 1 = right child.  Two exact conditions drive everything,
both requiring the thick regime ratio >= 1/3:

  * tiling condition (cond_overlap): max(u, v, w) > 0 and
        4*(1-r)*max <= 2*(u+v+w) + (1+2r)*r^n.
    Then the 8 child images chain with no gap and tile the parent image
    exactly.

  * descent condition (cond_invariant):
        2*(1-r)*max + (1-2r)*r^n <= u + v + w.
    Strictly stronger than the tiling condition, and inherited by every
    child box, so any target in the parent image can be followed down an
    infinite chain of child boxes; the box image width contracts by
    roughly r per step.  This is what turns the tiling lemma into points
    of the attractor realizing a prescribed sum of three squares.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Tuple

from .errors import InternalInconsistencyError, ThinRegimeError
from .ifs import CantorParams, word_from_left_endpoint
from .numerics import Interval, IntervalUnion, Rational, box_sum_of_squares_image, rat

ChildIndex = Tuple[int, int, int]

#: All 8 child indices in lexicographic order.
CHILD_INDICES: tuple = tuple(itertools.product((0, 1), repeat=3))

#: Adjacent (hi of first, lo of second) pairs whose overlap margins chain
#: the 8 child images into the parent image, in proof order: the right
#: half-slabs first, then the left ones.  The final join between the two
#: groups is covered by the tiling condition itself.
_CHAIN_PAIRS: tuple = (
    ((1, 0, 0), (1, 0, 1)),
    ((1, 0, 1), (1, 1, 0)),
    ((1, 1, 0), (1, 1, 1)),
    ((0, 0, 0), (0, 0, 1)),
    ((0, 0, 1), (0, 1, 0)),
    ((0, 1, 0), (0, 1, 1)),
)


def _require_thick(params: CantorParams) -> None:
    if not params.thick:
        raise ThinRegimeError(
            "subdivision conditions need ratio >= 1/3, got %s (alpha %s)"
            % (params.ratio, params.alpha)
        )


@dataclass(frozen=True)
class TripleBox:
    """Product of three level-``level`` basic intervals, by left endpoint."""

    lefts: tuple
    level: int

    def __post_init__(self) -> None:
        if len(self.lefts) != 3:
            raise ValueError("a triple box needs exactly 3 left endpoints")
        object.__setattr__(self, "lefts", tuple(rat(x) for x in self.lefts))
        if self.level < 0:
            raise ValueError("level must be nonnegative")
        if any(x < 0 for x in self.lefts):
            raise ValueError("left endpoints must be nonnegative")

    def coordinate_sum(self) -> Rational:
        return sum(self.lefts, Fraction(0))

    def coordinate_max(self) -> Rational:
        return max(self.lefts)

    def intervals(self, params: CantorParams) -> tuple:
        width = params.ratio**self.level
        return tuple(Interval(x, x + width) for x in self.lefts)

    def image(self, params: CantorParams) -> Interval:
        """Exact image under the sum of three squares."""
        return box_sum_of_squares_image(self.intervals(params))


def triple_box(params: CantorParams, lefts, level: int) -> TripleBox:
    """Validated constructor: every coordinate must be a genuine level-n
    left endpoint, checked by reconstructing its digit word."""
    box = TripleBox(tuple(lefts), level)
    for x in box.lefts:
        if word_from_left_endpoint(params, x, level) is None:
            raise ValueError(
                "%s is not a level-%d left endpoint for ratio %s"
                % (x, level, params.ratio)
            )
    return box


def overlap_condition_margin(params: CantorParams, box: TripleBox) -> Rational:
    """4*(1-r)*max - 2*sum - (1+2r)*r^n; nonpositive means the tiling
    inequality holds."""
    r = params.ratio
    return (
        4 * (1 - r) * box.coordinate_max()
        - 2 * box.coordinate_sum()
        - (1 + 2 * r) * r**box.level
    )


def invariant_condition_margin(params: CantorParams, box: TripleBox) -> Rational:
    """2*(1-r)*max + (1-2r)*r^n - sum; nonpositive means the descent
    condition holds."""
    r = params.ratio
    return (
        2 * (1 - r) * box.coordinate_max()
        + (1 - 2 * r) * r**box.level
        - box.coordinate_sum()
    )


def cond_overlap(params: CantorParams, box: TripleBox) -> bool:
    """Tiling condition: the 8 child images chain without gaps."""
    _require_thick(params)
    if box.coordinate_max() <= 0:
        return False
    return overlap_condition_margin(params, box) <= 0


def cond_invariant(params: CantorParams, box: TripleBox) -> bool:
    """Descent condition; implies the tiling condition and is inherited
    by all 8 child boxes."""
    _require_thick(params)
    return invariant_condition_margin(params, box) <= 0


def child_box(params: CantorParams, box: TripleBox, index: ChildIndex) -> TripleBox:
    """The child box selected by bits (i, j, l), bit 1 = right child."""
    r = params.ratio
    step = (1 - r) * r**box.level
    lefts = tuple(
        x + step if bit else x for x, bit in zip(box.lefts, index)
    )
    return TripleBox(lefts, box.level + 1)


def child_box_images(
    params: CantorParams, box: TripleBox
) -> Dict[ChildIndex, Interval]:
    """Exact images of all 8 child boxes, keyed by index in lex order."""
    return {
        index: child_box(params, box, index).image(params)
        for index in CHILD_INDICES
    }


def verify_overlap_lemma(params: CantorParams, box: TripleBox) -> bool:
    """Check, exactly, that the 8 child images tile the parent image.

    Requires the tiling condition; the check itself is a brute-force union
    of the 8 child images compared against the parent interval.
    """
    if not cond_overlap(params, box):
        raise ValueError("tiling condition does not hold for %r" % (box,))
    union = IntervalUnion(child_box_images(params, box).values())
    return union == IntervalUnion([box.image(params)])


def refine_step(params: CantorParams, box: TripleBox, target) -> ChildIndex:
    """Pick the child box whose image contains ``target``.

    Requires the descent condition and target inside the parent image.
    The choice is canonical: coordinates are viewed in stable descending
    order (the largest endpoint first), children are scanned in
    lexicographic index order in that orientation, and the first hit is
    mapped back to the caller's coordinate order.  The returned child
    satisfies the descent condition again, so refinement never stalls.
    """
    target = rat(target)
    if not cond_invariant(params, box):
        raise ValueError("descent condition does not hold for %r" % (box,))
    parent = box.image(params)
    if not parent.contains_value(target):
        raise ValueError("target %s outside parent image %r" % (target, parent))
    order = sorted(range(3), key=lambda c: (-box.lefts[c], c))
    sorted_box = TripleBox(tuple(box.lefts[c] for c in order), box.level)
    for index in CHILD_INDICES:
        img = child_box(params, sorted_box, index).image(params)
        if img.lo <= target <= img.hi:
            out = [0, 0, 0]
            for sorted_pos, original in enumerate(order):
                out[original] = index[sorted_pos]
            return tuple(out)
    raise InternalInconsistencyError(
        "no child image contains %s although the tiling condition holds" % (target,)
    )


def base_boxes(params: CantorParams) -> tuple:
    """The three seed boxes of the decomposition, with their exact images.

    In listed order (r = contraction ratio):

      1. level 1, lefts (0, 1-r, 1-r):        image [2*(1-r)^2, 2 + r^2]
      2. level 1, lefts (1-r, 1-r, 1-r):      image [3*(1-r)^2, 3]
      3. level 2, lefts (r-r^2, r-r^2, 1-r):  image [a, b] with
         a = 2r^4 - 4r^3 + 3r^2 - 2r + 1,  b = r^4 - 2r^3 + 5r^2 - 2r + 1.

    The first two chain into [2*(1-r)^2, 3]; the third supplies the lower
    band that the fourth-coordinate scan needs.  Every seed satisfies the
    descent condition throughout the thick regime; violation would mean a
    bug, not bad input.
    """
    _require_thick(params)
    r = params.ratio
    boxes = (
        triple_box(params, (Fraction(0), 1 - r, 1 - r), 1),
        triple_box(params, (1 - r, 1 - r, 1 - r), 1),
        triple_box(params, (r - r * r, r - r * r, 1 - r), 2),
    )
    out = []
    for box in boxes:
        if not cond_invariant(params, box):
            raise InternalInconsistencyError(
                "seed box %r fails the descent condition at ratio %s" % (box, r)
            )
        out.append((box, box.image(params)))
    return tuple(out)


def base_box_condition_margins(params: CantorParams) -> tuple:
    """Descent-condition margins of the three seed boxes (all negative).

    Closed forms in r: -r, -1, and -2r^3 + 5r^2 - 5r + 1; the polynomial
    identities are pinned down in the test suite.
    """
    return tuple(
        invariant_condition_margin(params, box) for box, _ in base_boxes(params)
    )


@dataclass(frozen=True)
class OverlapMargins:
    """Exact overlap amounts that chain the 8 child images together.

    ``chain`` holds the six adjacent-pair margins (strictly positive for
    any box with coordinate_max > 0 in the thick regime); ``join`` is the
    margin splicing the two groups of four, nonnegative exactly when the
    tiling condition holds.
    """

    chain: tuple
    join: Rational


def overlap_chain_margins(params: CantorParams, box: TripleBox) -> OverlapMargins:
    """Compute the margins in the canonical descending orientation."""
    _require_thick(params)
    order = sorted(range(3), key=lambda c: (-box.lefts[c], c))
    sorted_box = TripleBox(tuple(box.lefts[c] for c in order), box.level)
    images = child_box_images(params, sorted_box)
    chain = tuple(
        images[first].hi - images[second].lo for first, second in _CHAIN_PAIRS
    )
    join = images[(0, 1, 1)].hi - images[(1, 0, 0)].lo
    return OverlapMargins(chain, join)
