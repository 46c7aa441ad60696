"""Fixed-block layouts driving the lower bound for the recurrence dimension.

Block centers grow geometrically; each recurrence condition freezes a block
of symbols around its center (and, when blocks overlap, a mirrored block on
the negative side). Free positions are what remains, and their density at
checkpoint radii gives the local dimension of the natural measure.

Idealized mode keeps real-valued positions as exact Fractions so checkpoint
identities hold with no tolerance; Rounded mode uses integer positions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence, Union

from .shift import Sft, count_admissible

Number = Union[Fraction, int]

ALPHA_KINK = 3 - 2 * math.sqrt(2)  # dimension reaches 1, optimal cover switches
ALPHA_SECOND_KINK = 2 - math.sqrt(3)  # second derivative jumps
ALPHA_ZERO = 1.0 / 3.0  # dimension hits zero


class RegimeViolation(ValueError):
    def __init__(self, condition: str, k: int):
        super().__init__(f"condition {condition} fails at k={k}")
        self.condition = condition
        self.k = k


class OutOfWindow(ValueError):
    """Requested radius exceeds the layout's working window."""


class Mode(Enum):
    IDEALIZED = "idealized"
    ROUNDED = "rounded"


class RegimeTag(Enum):
    NO_OVERLAP = "no-overlap"
    OVERLAP_DISJOINT_LEFT = "overlap-disjoint-left"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class Regime:
    tag: RegimeTag
    conditions: dict[str, bool]


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def classify_regime(alpha, theta) -> Regime:
    """Evaluate the block-interaction inequalities with exact rational arithmetic.

    The geometric growth condition admits theta equal to 1/alpha, where the
    free digits on the positive side degenerate to nothing but the layout is
    still well formed.
    """
    a, t = _frac(alpha), _frac(theta)
    if a < 0 or t <= 0:
        raise ValueError("need alpha >= 0 and theta > 0")
    conds = {
        "1'": t > 1 and (a == 0 or a * t <= 1),
        "2'": 1 + a * t < t - a * t * t,
        "3'": 1 + a * t > t - a * t * t,
        "4'": t * (1 - a) > 1,
        "7'": t * (1 - 2 * a) > 1,
    }
    if conds["1'"] and conds["2'"]:
        tag = RegimeTag.NO_OVERLAP
    elif conds["1'"] and conds["3'"] and conds["4'"] and conds["7'"]:
        tag = RegimeTag.OVERLAP_DISJOINT_LEFT
    else:
        tag = RegimeTag.DEGENERATE
    return Regime(tag, conds)


@dataclass(frozen=True)
class LayoutParams:
    alpha: Fraction
    theta: Fraction
    n1: Fraction
    K: int
    mode: Mode = Mode.IDEALIZED

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", _frac(self.alpha))
        object.__setattr__(self, "theta", _frac(self.theta))
        object.__setattr__(self, "n1", _frac(self.n1))
        if self.K < 2:
            raise ValueError("need at least two blocks")
        if not self.theta > 1:
            raise ValueError("theta must exceed 1")
        if self.alpha > 0 and self.alpha * self.theta > 1:
            raise ValueError("theta must not exceed 1/alpha")


Interval = tuple[Number, Number]


@dataclass
class BlockLayout:
    centers: list[Number]  # n_1 .. n_{K+2} (last two extrapolated)
    right_blocks: list[Interval]
    left_blocks: list[Interval]
    free_intervals: list[Interval]
    window: Interval
    mode: Mode
    K: int

    def block_union(self) -> list[Interval]:
        return _interval_union(self.right_blocks + self.left_blocks)


def _interval_union(intervals: Sequence[Interval]) -> list[Interval]:
    merged: list[list[Number]] = []
    for lo, hi in sorted(intervals):
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return [(lo, hi) for lo, hi in merged]


def _complement(window: Interval, blocks: Sequence[Interval], mode: Mode) -> list[Interval]:
    lo, hi = window
    free: list[Interval] = []
    cursor = lo
    for b_lo, b_hi in _interval_union(blocks):
        if b_hi < lo or b_lo > hi:
            continue
        b_lo, b_hi = max(b_lo, lo), min(b_hi, hi)
        if mode is Mode.ROUNDED:
            if cursor <= b_lo - 1:
                free.append((cursor, b_lo - 1))
            cursor = max(cursor, b_hi + 1)
        else:
            if cursor < b_lo:
                free.append((cursor, b_lo))
            cursor = max(cursor, b_hi)
    if mode is Mode.ROUNDED:
        if cursor <= hi:
            free.append((cursor, hi))
    elif cursor < hi:
        free.append((cursor, hi))
    return free


def build_layout(p: LayoutParams) -> BlockLayout:
    """Blocks, left blocks, and free intervals for geometric centers."""
    regime = classify_regime(p.alpha, p.theta)
    if regime.tag is RegimeTag.DEGENERATE:
        failed = next(name for name in ("1'", "2'", "3'", "4'", "7'") if not regime.conditions[name])
        raise RegimeViolation(failed, 0)

    exact_centers = [p.n1 * p.theta ** k for k in range(p.K + 2)]
    a = p.alpha
    if p.mode is Mode.IDEALIZED:
        centers: list[Number] = exact_centers
        half = [a * c for c in centers]
    else:
        centers = [math.floor(c) for c in exact_centers]
        half = [math.ceil(a * c) for c in centers]

    right = [(centers[k] - half[k + 1], centers[k] + half[k + 1]) for k in range(p.K)]

    left: list[Interval] = []
    if regime.tag is RegimeTag.OVERLAP_DISJOINT_LEFT:
        # consecutive right blocks must overlap with the next center outside
        for k in range(p.K - 1):
            if right[k][1] < right[k + 1][0]:
                raise RegimeViolation("3'", k + 1)
            if centers[k + 1] <= right[k][1]:
                raise RegimeViolation("4'", k + 1)
        left = [
            (-half[k + 2], centers[k] - centers[k + 1] + half[k + 1])
            for k in range(p.K)
        ]
        for k in range(p.K - 1):
            if left[k + 1][1] >= left[k][0]:
                raise RegimeViolation("7'", k + 1)
    else:
        for k in range(p.K - 1):
            if right[k][1] >= right[k + 1][0]:
                raise RegimeViolation("2'", k + 1)

    window = (-half[p.K], centers[p.K - 1] + half[p.K])
    free = _complement(window, right + left, p.mode)
    return BlockLayout(centers, right, left, free, window, p.mode, p.K)


def free_count(L: BlockLayout, m: Number) -> Number:
    """Free length (Idealized) or free position count (Rounded) on [-m, m]."""
    if m > L.window[1] or (L.left_blocks and -m < L.window[0]):
        raise OutOfWindow(f"radius {m} outside window {L.window}")
    blocked = L.block_union()
    if L.mode is Mode.ROUNDED:
        total = 2 * int(m) + 1
        for lo, hi in blocked:
            lo, hi = max(lo, -int(m)), min(hi, int(m))
            if lo <= hi:
                total -= hi - lo + 1
        return total
    m = _frac(m)
    total = 2 * m
    for lo, hi in blocked:
        lo, hi = max(lo, -m), min(hi, m)
        if lo < hi:
            total -= hi - lo
    return total


def checkpoint_no_overlap(p: LayoutParams, k: int) -> tuple[Fraction, Fraction]:
    """Exact (radius, free length) at the k-th block's right end.

    Closed form: all blocks up to k are fully inside, nothing else is, so
    the free length is 2m minus the summed block lengths.
    """
    n = [p.n1 * p.theta ** i for i in range(k + 2)]
    m = n[k - 1] + p.alpha * n[k]
    fc = 2 * m - sum(2 * p.alpha * n[i + 1] for i in range(k))
    return m, fc


def checkpoint_overlap(p: LayoutParams, k: int) -> tuple[Fraction, Fraction]:
    """Exact (radius, free length) at the k-th mirrored block's far end.

    The positive side contributes only the stub before the first block;
    on the negative side the first k mirrored blocks are subtracted.
    """
    n = [p.n1 * p.theta ** i for i in range(k + 3)]
    m = p.alpha * n[k + 1]
    stub = n[0] - p.alpha * n[1]
    blocked_left = sum(n[i] + (p.alpha - 1) * n[i + 1] + p.alpha * n[i + 2] for i in range(k))
    return m, m + stub - blocked_left


def local_dimension_limit(alpha: float, theta: float, regime: Regime) -> float:
    """Limit of free length over radius at the checkpoint scales."""
    a, t = float(alpha), float(theta)
    if regime.tag is RegimeTag.NO_OVERLAP:
        return 2 - 2 * a * t * t / ((1 + a * t) * (t - 1))
    if regime.tag is RegimeTag.OVERLAP_DISJOINT_LEFT:
        return ((1 - 2 * a) * t - 1) / (a * t * (t - 1))
    raise ValueError("no local dimension in the degenerate regime")


def optimal_theta_lower(alpha: float) -> tuple[float, float]:
    """Best geometric growth rate and the dimension lower bound it yields.

    Piecewise in alpha: below the first kink the non-overlapping layout with
    theta = 2/(1-alpha) wins; between the kinks the overlapping layout peaks
    at an interior theta; beyond the second kink the supremum sits at the
    endpoint theta = 1/alpha. Returns (nan, 0) once the dimension vanishes.
    """
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    if alpha >= ALPHA_ZERO:
        return (math.nan, 0.0)
    if alpha <= ALPHA_KINK:
        return (2 / (1 - alpha), 2 * (1 - alpha) ** 2 / (1 + alpha) ** 2)
    if alpha <= ALPHA_SECOND_KINK:
        r = math.sqrt(2 * alpha)
        return (1 / (1 - r), (1 - r) ** 2 / alpha)
    return (1 / alpha, (1 - 3 * alpha) / (1 - alpha))


@dataclass
class CardinalityFamily:
    layout: BlockLayout
    witness_count: int
    delta: int
    gap_lengths: list[int]


def left_gap_lengths(layout: BlockLayout) -> list[int]:
    """Free positions between consecutive mirrored blocks (Rounded layouts)."""
    gaps = []
    blocks = sorted(layout.left_blocks)
    for (lo1, hi1), (lo2, hi2) in zip(blocks, blocks[1:]):
        gaps.append(lo2 - hi1 - 1)
    return gaps


def cardinality_family(delta: int, n1: int, K: int, S: Sft) -> CardinalityFamily:
    """Layout with tripling centers whose mirrored-block gaps all have
    delta - 1 free positions, plus the count of admissible gap fillings."""
    if delta < 1 or n1 < 1:
        raise ValueError("need delta >= 1 and n1 >= 1")
    centers = [n1]
    for _ in range(K + 1):
        centers.append(3 * (centers[-1] + delta))
    half = [centers[k] + delta for k in range(K + 1)]  # = centers[k+1] / 3
    right = [(-delta, 2 * centers[k] + delta) for k in range(K)]
    left = [(-delta - centers[k + 1], -2 * delta - centers[k]) for k in range(K)]
    window = (-delta - centers[K], 2 * centers[K - 1] + delta)
    free = _complement(window, right + left, Mode.ROUNDED)
    layout = BlockLayout(centers, right, left, free, window, Mode.ROUNDED, K)
    gaps = left_gap_lengths(layout)
    fillings = 1
    for g in gaps:
        if g > 0:
            fillings *= count_admissible(S, g)
    return CardinalityFamily(layout, fillings, delta, gaps)
