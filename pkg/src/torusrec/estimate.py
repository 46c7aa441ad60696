"""Desk-scale counting of windows compatible with finite-depth recurrence.

The count of admissible windows that keep satisfying the recurrence
predicate through depth N_max plays the role of a covering number at
diameter lam^-m; its log-slope against m is an empirical covering exponent.

Counting is exact: recurrence constraints only touch a bounded core of
positions, so the core is enumerated directly and the unconstrained tails
contribute transfer-matrix extension counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .shift import Sft, agreement_radius_needed

MAX_DEPTH = 8  # witness depth cap: enumeration cost grows fast beyond this


class WindowTooSmall(ValueError):
    """Window radius cannot hold all positions referenced by the witnesses."""


class BudgetExceeded(ValueError):
    """Brute-force enumeration would exceed the configured budget."""


class DegenerateFit(ValueError):
    """Slope fit needs at least two distinct radii."""


@dataclass(frozen=True)
class ConstraintSpec:
    """Recurrence constraints at depth [M, N_max] for a given alpha.

    For each N some witness shift n <= N must satisfy x_{n+i} = x_i for all
    |i| <= ceil(alpha*N); `equality_blocks` spells that disjunction out as
    (N, radius, candidate shifts).
    """

    alpha: float
    M: int
    N_max: int
    lam: float
    equality_blocks: tuple[tuple[int, int, tuple[int, ...]], ...] = field(init=False)

    def __post_init__(self) -> None:
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")
        if not 1 <= self.M <= self.N_max:
            raise ValueError("need 1 <= M <= N_max")
        if self.N_max > MAX_DEPTH:
            raise ValueError(f"N_max capped at {MAX_DEPTH}")
        if not self.lam > 1:
            raise ValueError("lam must exceed 1")
        blocks = tuple(
            (N, agreement_radius_needed(self.alpha, N), tuple(range(1, N + 1)))
            for N in range(self.M, self.N_max + 1)
            if self.alpha * N > 0
        )
        object.__setattr__(self, "equality_blocks", blocks)

    @property
    def max_radius(self) -> int:
        return max((r for _, r, _ in self.equality_blocks), default=0)

    def min_window(self) -> int:
        """Smallest window radius with every witness position on data."""
        return self.N_max + self.max_radius


def _core_span(c: ConstraintSpec) -> tuple[int, int]:
    r = c.max_radius
    return (-r, c.N_max + r)


def _core_satisfies(core: list[int], lo: int, c: ConstraintSpec) -> bool:
    for N, radius, witnesses in c.equality_blocks:
        for n in witnesses:
            if all(core[n + i - lo] == core[i - lo] for i in range(-radius, radius + 1)):
                break
        else:
            return False
    return True


def _extension_counts(S: Sft, steps: int, incoming: bool) -> list[int]:
    """Exact big-integer path counts of length `steps` ending (or starting) at
    each symbol."""
    counts = [1] * S.alphabet_size
    for _ in range(steps):
        if incoming:
            counts = [
                sum(counts[a] for a in range(S.alphabet_size) if S.allowed(a, b))
                for b in range(S.alphabet_size)
            ]
        else:
            counts = [
                sum(counts[b] for b in range(S.alphabet_size) if S.allowed(a, b))
                for a in range(S.alphabet_size)
            ]
    return counts


def count_constrained_windows(S: Sft, c: ConstraintSpec, m: int) -> int:
    """Exact number of admissible windows on [-m, m] satisfying the spec.

    Only the core [-r, N_max + r] is touched by the constraints, so the core
    is enumerated admissibly and each surviving core is weighted by the
    number of admissible left/right extensions out to radius m.
    """
    if m < c.min_window():
        raise WindowTooSmall(f"need m >= {c.min_window()}, got {m}")
    lo, hi = _core_span(c)
    span = hi - lo + 1
    left = _extension_counts(S, m - (-lo), incoming=True)
    right = _extension_counts(S, m - hi, incoming=False)

    total = 0
    core = [0] * span
    d = S.alphabet_size

    def extend(pos: int) -> None:
        nonlocal total
        if pos == span:
            if _core_satisfies(core, lo, c):
                total += left[core[0]] * right[core[-1]]
            return
        for sym in range(d):
            if pos > 0 and not S.allowed(core[pos - 1], sym):
                continue
            core[pos] = sym
            extend(pos + 1)

    extend(0)
    return total


def brute_force_oracle(S: Sft, c: ConstraintSpec, m: int, budget: int = 10**8) -> int:
    """Exhaustive count: every admissible window checked against the
    recurrence predicate (vectorized but semantically identical to running
    the per-window check on each one)."""
    d = S.alphabet_size
    width = 2 * m + 1
    total = d**width
    if total > budget:
        raise BudgetExceeded(f"{d}^{width} = {total} exceeds budget {budget}")

    gamma = np.array(S.gamma.entries, dtype=bool)
    full_shift = bool(gamma.all())
    count = 0
    chunk = 1 << 21
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        digits = np.empty((len(idx), width), dtype=np.uint8)
        rest = idx
        for j in range(width - 1, -1, -1):
            rest, digit = np.divmod(rest, d)
            digits[:, j] = digit
        if not full_shift:
            ok = np.ones(len(idx), dtype=bool)
            for j in range(width - 1):
                ok &= gamma[digits[:, j], digits[:, j + 1]]
            digits = digits[ok]
        holds = np.ones(len(digits), dtype=bool)
        # incremental agreement per shift: columns compared once per radius
        agree = {n: np.ones(len(digits), dtype=bool) for n in range(1, min(c.N_max, m) + 1)}
        done_radius = {n: -1 for n in agree}
        for N, radius, witnesses in c.equality_blocks:
            witnessed = np.zeros(len(digits), dtype=bool)
            for n in witnesses:
                if n > m:
                    continue  # no data for this shift; cannot confirm
                reach = min(radius, m - n)
                for r in range(done_radius[n] + 1, reach + 1):
                    for i in {r, -r}:
                        agree[n] &= digits[:, n + i + m] == digits[:, i + m]
                done_radius[n] = max(done_radius[n], reach)
                witnessed |= agree[n]
            holds &= witnessed
        count += int(np.count_nonzero(holds))
    return count


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[max(ri, rj)] = min(ri, rj)

    def class_count(self) -> int:
        return sum(1 for i, p in enumerate(self.parent) if self.find(i) == i)


def count_with_equalities(S: Sft, pairs: list[tuple[int, int]], m: int) -> int:
    """Admissible labelings of [-m, m] under explicit equality constraints.

    Positions tied by the pairs collapse into union-find classes; for the
    full shift the count is d^(number of classes), otherwise the window is
    enumerated with class consistency enforced.
    """
    width = 2 * m + 1
    uf = _UnionFind(width)
    for i, j in pairs:
        if not (-m <= i <= m and -m <= j <= m):
            raise WindowTooSmall(f"constraint position outside [-{m}, {m}]")
        uf.union(i + m, j + m)
    if all(all(S.gamma.entries[a][b] for b in range(S.alphabet_size)) for a in range(S.alphabet_size)):
        return S.alphabet_size ** uf.class_count()

    assignment: dict[int, int] = {}
    symbols = [0] * width
    d = S.alphabet_size

    def extend(pos: int) -> int:
        if pos == width:
            return 1
        root = uf.find(pos)
        pinned = assignment.get(root)
        choices = range(d) if pinned is None else (pinned,)
        total = 0
        for sym in choices:
            if pos > 0 and not S.allowed(symbols[pos - 1], sym):
                continue
            assignment[root] = sym
            symbols[pos] = sym
            total += extend(pos + 1)
            if pinned is None:
                del assignment[root]
        return total

    return extend(0)


@dataclass(frozen=True)
class CountCurve:
    radii: tuple[int, ...]
    counts: tuple[int, ...]
    slope: float
    residual: float
    clamped: bool = False


def fit_dimension(points: list[tuple[int, int]], lam: float) -> CountCurve:
    """Least-squares covering exponent: log(count) against m * log(lam).

    Transient small radii bias the slope, so only the largest half of the
    radii enter the fit. The slope is clamped into [0, 2] with a flag.
    """
    if len(points) < 3:
        raise ValueError("need at least 3 data points")
    if any(count <= 0 for _, count in points):
        raise ValueError("counts must be positive")
    radii = [m for m, _ in points]
    if len(set(radii)) < 2:
        raise DegenerateFit("all radii are equal")
    pts = sorted(points)
    tail = pts[len(pts) // 2 :] if len(set(m for m, _ in pts[len(pts) // 2 :])) >= 2 else pts
    x = np.array([m * math.log(lam) for m, _ in tail])
    y = np.array([math.log(count) for _, count in tail])
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    clamped = False
    if slope < 0 or slope > 2:
        slope = min(2.0, max(0.0, slope))
        clamped = True
    return CountCurve(tuple(m for m, _ in points), tuple(c for _, c in points), float(slope), residual, clamped)
