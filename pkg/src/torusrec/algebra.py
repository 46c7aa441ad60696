"""Exact arithmetic in real quadratic fields and hyperbolic 2x2 torus maps.

Everything here is exact: field elements are pairs of rationals, matrix
entries are integers, and sign decisions never go through floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Union

Rational = Fraction
RationalLike = Union[int, Fraction]


class NotHyperbolic(ValueError):
    """The matrix has an eigenvalue on the unit circle."""


def _is_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


@dataclass(frozen=True)
class QuadContext:
    """Defining data of the field Q(lam) with lam^2 = trace*lam - det.

    `branch` selects which root of x^2 - trace*x + det the symbol lam
    denotes: +1 for (trace + sqrt(disc))/2, -1 for (trace - sqrt(disc))/2.
    The discriminant must be positive and non-square so that lam is a
    genuine quadratic irrational and representations p + q*lam are unique.
    """

    trace: int
    det: int
    branch: int = 1

    def __post_init__(self) -> None:
        if self.branch not in (1, -1):
            raise ValueError("branch must be +1 or -1")
        if self.discriminant <= 0:
            raise ValueError("context needs two distinct real roots")
        if _is_square(self.discriminant):
            raise ValueError("root is rational; quadratic context required")

    @property
    def discriminant(self) -> int:
        return self.trace * self.trace - 4 * self.det

    @property
    def root(self) -> float:
        return (self.trace + self.branch * math.sqrt(self.discriminant)) / 2.0


@total_ordering
class QuadNum:
    """Element p + q*lam of a real quadratic field, with exact ordering."""

    __slots__ = ("p", "q", "ctx")

    def __init__(self, p: RationalLike, q: RationalLike, ctx: QuadContext) -> None:
        object.__setattr__(self, "p", Fraction(p))
        object.__setattr__(self, "q", Fraction(q))
        object.__setattr__(self, "ctx", ctx)

    def __setattr__(self, name, value):  # immutable
        raise AttributeError("QuadNum is immutable")

    def __repr__(self) -> str:
        return f"QuadNum({self.p}, {self.q}; t={self.ctx.trace}, s={self.ctx.det})"

    def _coerce(self, other) -> "QuadNum":
        if isinstance(other, QuadNum):
            if other.ctx != self.ctx:
                raise ValueError("mixed quadratic contexts")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadNum(other, 0, self.ctx)
        return NotImplemented

    def __add__(self, other) -> "QuadNum":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadNum(self.p + o.p, self.q + o.q, self.ctx)

    __radd__ = __add__

    def __neg__(self) -> "QuadNum":
        return QuadNum(-self.p, -self.q, self.ctx)

    def __sub__(self, other) -> "QuadNum":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other) -> "QuadNum":
        return (-self) + other

    def __mul__(self, other) -> "QuadNum":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        # lam^2 reduces via lam^2 = t*lam - s
        t, s = self.ctx.trace, self.ctx.det
        p = self.p * o.p - s * self.q * o.q
        q = self.p * o.q + self.q * o.p + t * self.q * o.q
        return QuadNum(p, q, self.ctx)

    __rmul__ = __mul__

    def inverse(self) -> "QuadNum":
        t, s = self.ctx.trace, self.ctx.det
        norm = self.p * self.p + self.p * self.q * t + s * self.q * self.q
        if norm == 0:
            raise ZeroDivisionError("inverse of zero")
        return QuadNum((self.p + self.q * t) / norm, -self.q / norm, self.ctx)

    def __truediv__(self, other) -> "QuadNum":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __pow__(self, n: int) -> "QuadNum":
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inverse()
        result = QuadNum(1, 0, self.ctx)
        for _ in range(abs(n)):
            result = result * base
        return result

    def __rtruediv__(self, other) -> "QuadNum":
        return self.inverse() * other

    def conjugate(self) -> "QuadNum":
        """Image under the nontrivial field automorphism (lam -> t - lam)."""
        return QuadNum(self.p + self.q * self.ctx.trace, -self.q, self.ctx)

    def sign(self) -> int:
        return quad_sign(self)

    def is_zero(self) -> bool:
        return self.p == 0 and self.q == 0

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.p == other and self.q == 0
        if isinstance(other, QuadNum):
            return self.ctx == other.ctx and self.p == other.p and self.q == other.q
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.p, self.q, self.ctx))

    def __lt__(self, other) -> bool:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return (self - o).sign() < 0

    def __float__(self) -> float:
        return float(self.p) + float(self.q) * self.ctx.root

    def __abs__(self) -> "QuadNum":
        return self if self.sign() >= 0 else -self


def quad_sign(v: QuadNum) -> int:
    """Exact sign of p + q*lam under the real embedding picked by the context.

    A floating evaluation decides the sign whenever its magnitude clears a
    conservative error bound; the remaining near-zero cases fall back to
    exact rational arithmetic (comparing a^2 against b^2 * D after writing
    the value as a + b*sqrt(D)).
    """
    fp, fq = float(v.p), float(v.q)
    root = abs(v.ctx.root)
    approx = fp + fq * v.ctx.root
    if abs(approx) > (abs(fp) + abs(fq) * root) * 1e-12:
        return 1 if approx > 0 else -1
    t, d = v.ctx.trace, v.ctx.discriminant
    a = v.p + v.q * Fraction(t, 2)
    b = Fraction(v.ctx.branch) * v.q / 2
    if b == 0:
        return 0 if a == 0 else (1 if a > 0 else -1)
    if a == 0:
        return 1 if b > 0 else -1
    sa = 1 if a > 0 else -1
    sb = 1 if b > 0 else -1
    if sa == sb:
        return sa
    # opposite signs: |a| vs |b| sqrt(D) decided by squaring
    lhs = a * a
    rhs = b * b * d
    if lhs == rhs:
        return 0
    return sa if lhs > rhs else sb


@dataclass(frozen=True)
class ToralAutomorphism:
    """Integer 2x2 matrix with |det| = 1 acting on the torus by x -> Ax mod 1."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        if abs(self.det) != 1:
            raise ValueError("matrix must have determinant +1 or -1")

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> int:
        return self.a + self.d

    @property
    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def is_hyperbolic(self) -> bool:
        if self.det == 1:
            return abs(self.trace) > 2
        return self.trace != 0

    def __matmul__(self, other: "ToralAutomorphism") -> "ToralAutomorphism":
        return ToralAutomorphism(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def squared(self) -> "ToralAutomorphism":
        return self @ self

    def normalized(self) -> "ToralAutomorphism":
        """Matrix with det 1 and positive eigenvalues representing the same dynamics.

        Returns self when already in that form, otherwise the square, which
        always has det 1 and trace > 2 for hyperbolic input.
        """
        if not self.is_hyperbolic():
            raise NotHyperbolic(f"{self.entries} has an eigenvalue of modulus 1")
        if self.det == 1 and self.trace > 2:
            return self
        return self.squared()

    def inverse(self) -> "ToralAutomorphism":
        s = self.det
        return ToralAutomorphism(s * self.d, -s * self.b, -s * self.c, s * self.a)

    def apply(self, x: Fraction, y: Fraction) -> tuple[Fraction, Fraction]:
        return (self.a * x + self.b * y, self.c * x + self.d * y)


@dataclass(frozen=True)
class TorusPoint:
    """Point of the 2-torus with coordinates reduced into [0, 1).

    Exact when both coordinates are Fractions; float coordinates are allowed
    for fast scans and reduce mod 1 the same way.
    """

    x: Union[Fraction, float]
    y: Union[Fraction, float]

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", self.x % 1)
        object.__setattr__(self, "y", self.y % 1)

    @classmethod
    def exact(cls, x: RationalLike, y: RationalLike) -> "TorusPoint":
        return cls(Fraction(x), Fraction(y))

    def is_exact(self) -> bool:
        return isinstance(self.x, Fraction) and isinstance(self.y, Fraction)


@dataclass(frozen=True)
class Spectrum:
    """Spectral data of a hyperbolic matrix, exact in Q(lam)."""

    lam: QuadNum
    lam_float: float
    lam_inv: QuadNum
    unstable_dir: tuple[QuadNum, QuadNum]
    stable_dir: tuple[QuadNum, QuadNum]

    @property
    def ctx(self) -> QuadContext:
        return self.lam.ctx


def spectrum(A: ToralAutomorphism) -> Spectrum:
    """Dominant eigenvalue and eigendirections of a hyperbolic matrix.

    lam is the root of x^2 - trace*x + det with modulus > 1; the
    eigendirections (lam - d, c) and (conj(lam) - d, c) satisfy the
    eigenvalue equations exactly in the field.
    """
    if not A.is_hyperbolic():
        raise NotHyperbolic(f"{A.entries} has an eigenvalue of modulus 1")
    # branch +1 gives the larger root; that root has modulus > 1 unless the
    # trace is negative, in which case the smaller root dominates
    branch = 1 if A.trace > 0 else -1
    ctx = QuadContext(A.trace, A.det, branch)
    lam = QuadNum(0, 1, ctx)
    lam_inv = lam.conjugate()  # other root; |lam * other| = |det| = 1
    unstable = (lam - A.d, QuadNum(A.c, 0, ctx))
    stable = (lam_inv - A.d, QuadNum(A.c, 0, ctx))
    return Spectrum(lam, float(lam), lam_inv, unstable, stable)


def iterate_point(A: ToralAutomorphism, x: TorusPoint, n: int = 1) -> TorusPoint:
    """Apply the torus map n times (n >= 0), exactly for rational points."""
    if n < 0:
        raise ValueError("n must be >= 0")
    px, py = x.x, x.y
    for _ in range(n):
        px, py = A.apply(px, py)
        px %= 1
        py %= 1
    return TorusPoint(px, py)


def torus_distance(x: TorusPoint, y: TorusPoint) -> float:
    """Euclidean distance on the torus: min over the 9 integer translates."""
    dx = float(x.x) - float(y.x)
    dy = float(x.y) - float(y.y)
    best = math.inf
    for mx in (-1.0, 0.0, 1.0):
        for my in (-1.0, 0.0, 1.0):
            best = min(best, math.hypot(dx + mx, dy + my))
    return best
