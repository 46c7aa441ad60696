"""Closed-form dimension profiles and the covering-exponent analytics.

The dimension of the uniform recurrence set is piecewise in alpha with
branch points at 3 - 2*sqrt(2) (where the value reaches 1 and the optimal
cover switches sides) and 2 - sqrt(3) (where the second derivative jumps);
it vanishes from alpha = 1/3 on. The cover analytics expose the critical
exponents whose suprema over the growth rate reproduce those branches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .layout import ALPHA_KINK, ALPHA_SECOND_KINK, ALPHA_ZERO


class EmptyRange(ValueError):
    """The admissible growth-rate interval is empty (alpha > 1/3)."""


def dim_uniform(alpha: float) -> float:
    """Hausdorff dimension of the uniform recurrence set, four branches."""
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    if alpha <= ALPHA_KINK:
        return 2 * (1 - alpha) ** 2 / (1 + alpha) ** 2
    if alpha <= ALPHA_SECOND_KINK:
        return (1 - math.sqrt(2 * alpha)) ** 2 / alpha
    if alpha <= ALPHA_ZERO:
        return (1 - 3 * alpha) / (1 - alpha)
    return 0.0


def dim_asymptotic(alpha: float) -> float:
    """Dimension of the infinitely-often recurrence set: 2/(a+1), then 1/a."""
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    if alpha <= 1:
        return 2 / (alpha + 1)
    return 1 / alpha


def s0_right(alpha: float, theta: float) -> float:
    """Critical exponent of the cover built along the positive-side blocks."""
    if theta == 1:
        return math.inf
    return 2 * ((1 - alpha) * theta - 1) / ((1 + alpha * theta) * (theta - 1))


def s0_left(alpha: float, theta: float) -> float:
    """Critical exponent of the cover built along the mirrored blocks."""
    if theta == 1:
        return math.inf
    return ((1 - 2 * alpha) * theta - 1) / (alpha * theta * (theta - 1))


class CoverSide(Enum):
    RIGHT = "right"
    LEFT = "left"


def theta_range(alpha: float) -> tuple[float, float]:
    """Growth rates compatible with dimension-carrying recurrence structure."""
    if alpha <= 0 or alpha > ALPHA_ZERO + 1e-15:
        raise EmptyRange(f"no admissible theta range for alpha={alpha}")
    return (1 / (1 - 2 * alpha), 1 / alpha)


def _golden_section_max(f, lo: float, hi: float, tol: float = 1e-12) -> float:
    inv_phi = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
    return (a + b) / 2


def sup_over_theta(which: CoverSide, alpha: float) -> tuple[float, float]:
    """Maximize the chosen critical exponent over the admissible growth rates.

    A coarse grid brackets the maximum, golden-section search refines it to
    1e-10 in theta; endpoint values are compared in case the maximum sits on
    the boundary of the range.
    """
    lo, hi = theta_range(alpha)
    if hi <= lo:
        theta = lo
        f = s0_right if which is CoverSide.RIGHT else s0_left
        return (theta, f(alpha, theta))
    f = (
        (lambda t: s0_right(alpha, t))
        if which is CoverSide.RIGHT
        else (lambda t: s0_left(alpha, t))
    )
    grid = 400
    best_i = max(range(grid + 1), key=lambda i: f(lo + (hi - lo) * i / grid))
    a = lo + (hi - lo) * max(best_i - 1, 0) / grid
    b = lo + (hi - lo) * min(best_i + 1, grid) / grid
    theta = _golden_section_max(f, a, b, tol=1e-10)
    candidates = [(f(t), t) for t in (theta, lo, hi)]
    value, theta = max(candidates)
    return (theta, value)


def upper_bound_dim(alpha: float) -> float:
    """Best of the two covers: min over sides of the maximal exponent."""
    right = sup_over_theta(CoverSide.RIGHT, alpha)[1]
    left = sup_over_theta(CoverSide.LEFT, alpha)[1]
    return min(right, left)


@dataclass(frozen=True)
class CoverParams:
    """Bookkeeping constants of the covering argument.

    epsilon = 0 is the limit in which the budgets reproduce the critical
    exponents; c1..c4 default to 1 so the budgets are concrete numbers.
    """

    alpha: float
    theta_j: float
    epsilon: float = 0.0
    c1: float = 1.0
    c2: float = 1.0
    c3: float = 1.0
    c4: float = 1.0

    def __post_init__(self) -> None:
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")


@dataclass(frozen=True)
class CoverBudget:
    P: float
    Q: float
    log_cylinder_count_right: float
    log_cylinder_count_left: float


def cover_budget(p: CoverParams, n: int, lam: float) -> CoverBudget:
    """Free-digit budgets P(n), Q(n) and the resulting log cylinder counts."""
    if n < 2:
        raise ValueError("n must be >= 2")
    a, t, e = p.alpha, p.theta_j, p.epsilon
    P = 1 + 2 * (1 + a * t + 2 * e) * n - 2 * (a - e) * (t + t / (t - 1) - p.c3 * e) * n
    Q = 1 + (1 - 2 * a - 2 * a / (t + 2 * e - 1) + p.c4 * e) * n
    log_n = math.log(n)
    overhead = math.log(p.c2 * log_n) + p.c2 * log_n * log_n
    return CoverBudget(
        P=P,
        Q=Q,
        log_cylinder_count_right=overhead + P * math.log(lam),
        log_cylinder_count_left=overhead + Q * math.log(lam),
    )


@dataclass
class Kink:
    alpha: float
    order: int  # 1 = slope jump, 2 = curvature jump
    jump: float
    noise: float


@dataclass
class DimensionProfile:
    alpha_grid: list[float]
    values: list[float]
    thresholds: tuple[float, float, float] = (ALPHA_KINK, ALPHA_SECOND_KINK, ALPHA_ZERO)
    kinks: list[Kink] = field(default_factory=list)
    first_derivative: list[float] = field(default_factory=list)
    second_derivative: list[float] = field(default_factory=list)


def _one_sided_d1(f, x: float, h: float, side: int) -> float:
    # second-order one-sided difference
    return side * (3 * f(x) - 4 * f(x - side * h) + f(x - 2 * side * h)) / (2 * h)


def _one_sided_d2(f, x: float, h: float, side: int) -> float:
    return (2 * f(x) - 5 * f(x - side * h) + 4 * f(x - 2 * side * h) - f(x - 3 * side * h)) / h**2


def derivative_jump(f, x: float, h: float, order: int) -> tuple[float, float]:
    """(one-sided derivative jump at x, discretization noise estimate)."""
    probe = _one_sided_d1 if order == 1 else _one_sided_d2
    left = probe(f, x, h, -1)
    right = probe(f, x, h, +1)
    noise = max(
        abs(probe(f, x, h, -1) - probe(f, x, h / 2, -1)),
        abs(probe(f, x, h, +1) - probe(f, x, h / 2, +1)),
    )
    return right - left, noise


def transition_report(grid_step: float = 1e-4, h: float = 1e-5) -> DimensionProfile:
    """Derivative diagnostics of the dimension profile over (0, 1/3).

    Detects the slope jump at the first threshold and the curvature jump
    (with continuous slope) at the second.
    """
    if grid_step > 1e-3:
        raise ValueError("grid_step must be <= 1e-3")
    n_points = int(round(ALPHA_ZERO / grid_step))
    grid = [i * grid_step for i in range(1, n_points)]
    values = [dim_uniform(a) for a in grid]
    first = []
    second = []
    for a in grid:
        first.append((dim_uniform(a + h) - dim_uniform(a - h)) / (2 * h))
        second.append((dim_uniform(a + h) - 2 * dim_uniform(a) + dim_uniform(a - h)) / h**2)

    kinks = []
    for threshold in (ALPHA_KINK, ALPHA_SECOND_KINK):
        d1_jump, d1_noise = derivative_jump(dim_uniform, threshold, h, 1)
        d2_jump, d2_noise = derivative_jump(dim_uniform, threshold, h, 2)
        if abs(d1_jump) > 10 * max(d1_noise, 1e-12):
            kinks.append(Kink(threshold, 1, d1_jump, d1_noise))
        elif abs(d2_jump) > 10 * max(d2_noise, 1e-12):
            kinks.append(Kink(threshold, 2, d2_jump, d2_noise))
    profile = DimensionProfile(grid, values)
    profile.kinks = kinks
    profile.first_derivative = first
    profile.second_derivative = second
    return profile
