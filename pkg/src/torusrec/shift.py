"""Two-sided subshifts of finite type: windows, metric, counting, recurrence.

A window is a finite block of a bi-infinite sequence. Because windows only
approximate points, the metric is interval-valued and the recurrence
predicate distinguishes definite answers from data that ran out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Sequence

from .partition import TransitionMatrix


class DomainMismatch(ValueError):
    """Windows passed to the metric must both contain position 0."""


@dataclass(frozen=True)
class SymbolicWindow:
    """Symbols of a sequence on the index range [lo, hi]."""

    lo: int
    symbols: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.symbols:
            raise ValueError("window must contain at least one symbol")

    @property
    def hi(self) -> int:
        return self.lo + len(self.symbols) - 1

    def __len__(self) -> int:
        return len(self.symbols)

    def __getitem__(self, position: int) -> int:
        if not self.lo <= position <= self.hi:
            raise IndexError(f"position {position} outside [{self.lo}, {self.hi}]")
        return self.symbols[position - self.lo]

    def contains(self, position: int) -> bool:
        return self.lo <= position <= self.hi

    @classmethod
    def symmetric(cls, symbols: Sequence[int]) -> "SymbolicWindow":
        if len(symbols) % 2 == 0:
            raise ValueError("symmetric window needs odd length")
        return cls(-(len(symbols) // 2), tuple(symbols))

    @classmethod
    def constant(cls, symbol: int, radius: int) -> "SymbolicWindow":
        return cls(-radius, (symbol,) * (2 * radius + 1))

    def serialize(self) -> str:
        return " ".join([str(self.lo), str(self.hi)] + [str(s) for s in self.symbols])

    @classmethod
    def deserialize(cls, text: str) -> "SymbolicWindow":
        parts = [int(tok) for tok in text.split()]
        lo, hi, symbols = parts[0], parts[1], parts[2:]
        if len(symbols) != hi - lo + 1:
            raise ValueError("symbol count does not match index range")
        return cls(lo, tuple(symbols))


@dataclass(frozen=True)
class Cylinder:
    """Set of sequences agreeing with the defining window."""

    window: SymbolicWindow

    @property
    def is_symmetric(self) -> bool:
        return self.window.lo == -self.window.hi


@dataclass(frozen=True)
class Sft:
    """Subshift of finite type with a metric base lambda > 1."""

    alphabet_size: int
    gamma: TransitionMatrix
    lam: float

    def __post_init__(self) -> None:
        if self.alphabet_size < 1:
            raise ValueError("alphabet needs at least one letter")
        if self.gamma.dimension != self.alphabet_size:
            raise ValueError("transition matrix dimension must match alphabet size")
        if not self.lam > 1:
            raise ValueError("metric base must exceed 1")

    @classmethod
    def full(cls, d: int, lam: float = 2.0) -> "Sft":
        return cls(d, TransitionMatrix.full(d), lam)

    @classmethod
    def golden_mean(cls, lam: float | None = None) -> "Sft":
        return cls(2, TransitionMatrix.golden_mean(), lam or (1 + math.sqrt(5)) / 2)

    def allowed(self, a: int, b: int) -> bool:
        return bool(self.gamma.entries[a][b])

    def is_admissible(self, symbols: Sequence[int]) -> bool:
        if any(not 0 <= s < self.alphabet_size for s in symbols):
            return False
        return all(self.allowed(a, b) for a, b in zip(symbols, symbols[1:]))

    def window(self, lo: int, symbols: Sequence[int]) -> SymbolicWindow:
        if not self.is_admissible(symbols):
            raise ValueError(f"word {tuple(symbols)} is not admissible")
        return SymbolicWindow(lo, tuple(symbols))

    def words(self, n: int) -> Iterator[tuple[int, ...]]:
        """All admissible words of length n, lexicographic."""
        if n == 0:
            yield ()
            return
        stack: list[tuple[int, ...]] = [(a,) for a in range(self.alphabet_size - 1, -1, -1)]
        while stack:
            word = stack.pop()
            if len(word) == n:
                yield word
                continue
            for b in range(self.alphabet_size - 1, -1, -1):
                if self.allowed(word[-1], b):
                    stack.append(word + (b,))


def shift_window(w: SymbolicWindow, n: int) -> SymbolicWindow:
    """Window of the n-fold shifted sequence: position i now reads old i + n."""
    return SymbolicWindow(w.lo - n, w.symbols)


def symbolic_metric(w1: SymbolicWindow, w2: SymbolicWindow, lam: float) -> tuple[float, float]:
    """Distance bounds (lower, upper) between any completions of two windows.

    If a disagreement is visible at radius j, the distance is exactly
    lam^-(j-1) (capped at 1 when the windows differ at position 0). If the
    windows agree on their whole common symmetric radius m, the data only
    supports the interval (0, lam^-m).
    """
    if not (w1.contains(0) and w2.contains(0)):
        raise DomainMismatch("both windows must contain position 0")
    common = min(-w1.lo, w1.hi, -w2.lo, w2.hi)
    for radius in range(common + 1):
        for pos in {radius, -radius}:
            if w1[pos] != w2[pos]:
                if radius == 0:
                    return (1.0, 1.0)
                d = lam ** (-(radius - 1))
                return (d, d)
    return (0.0, lam ** (-common))


def count_admissible(S: Sft, n: int) -> int:
    """Exact number of admissible words of length n (vector-matrix recursion)."""
    if n < 1:
        raise ValueError("word length must be >= 1")
    counts = [1] * S.alphabet_size
    for _ in range(n - 1):
        counts = [
            sum(counts[b] for b in range(S.alphabet_size) if S.allowed(a, b))
            for a in range(S.alphabet_size)
        ]
    return sum(counts)


def entropy_estimate(S: Sft, n: int) -> float:
    """log(#words of length n) / n; decreases to the entropy as n grows."""
    return math.log(count_admissible(S, n)) / n


def entropy_convergence(S: Sft, ns: Sequence[int], reference: float) -> list[tuple[int, float, float]]:
    """Rows (n, estimate, estimate - reference) for convergence reporting."""
    return [(n, entropy_estimate(S, n), entropy_estimate(S, n) - reference) for n in ns]


class RecurrenceStatus(Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class RecurrenceResult:
    status: RecurrenceStatus
    n_value: int | None = None  # first refuted / undetermined N

    @property
    def holds(self) -> bool:
        return self.status is RecurrenceStatus.HOLDS


def agreement_radius_needed(alpha: float, big_n: int) -> int:
    """Integer agreement radius equivalent to distance <= lam^(-alpha*N)."""
    return math.ceil(alpha * big_n)


def _witness_confirmed(w: SymbolicWindow, n: int, radius: int) -> bool | None:
    """Does shifting by n witness agreement to `radius`? None = no data.

    Full agreement across all common positions counts as a witness: on the
    available data the shifted window is indistinguishable from the original.
    """
    if n > w.hi:
        return None
    shifted = shift_window(w, n)
    common = min(-shifted.lo, shifted.hi, -w.lo, w.hi)
    for r in range(min(radius, common) + 1):
        for pos in {r, -r}:
            if shifted[pos] != w[pos]:
                return False
    return True


def uniform_recurrence_check(
    w: SymbolicWindow, alpha: float, M: int, N_max: int, lam: float
) -> RecurrenceResult:
    """Finite-data version of the uniform recurrence predicate.

    For every N in [M, N_max] some shift n <= N must bring the window within
    lam^(-alpha*N) of itself. Each N is witnessed, refuted (every candidate
    shift disproved by visible disagreement), or undetermined (candidate
    shifts run off the window data).
    """
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    if not 1 <= M <= N_max:
        raise ValueError("need 1 <= M <= N_max")
    if not w.contains(0):
        raise DomainMismatch("window must contain position 0")
    first_undetermined: int | None = None
    for N in range(M, N_max + 1):
        if alpha * N == 0:
            continue  # threshold 1 admits every distance
        radius = agreement_radius_needed(alpha, N)
        witnessed = False
        data_gap = False
        for n in range(1, N + 1):
            verdict = _witness_confirmed(w, n, radius)
            if verdict:
                witnessed = True
                break
            if verdict is None:
                data_gap = True
        if witnessed:
            continue
        if data_gap:
            if first_undetermined is None:
                first_undetermined = N
            continue
        return RecurrenceResult(RecurrenceStatus.FAILS, N)
    if first_undetermined is not None:
        return RecurrenceResult(RecurrenceStatus.UNDETERMINED, first_undetermined)
    return RecurrenceResult(RecurrenceStatus.HOLDS)
