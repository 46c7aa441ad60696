"""Markov partitions of the 2-torus, transition matrices, geometric constants.

Partition elements are parallelograms with sides parallel to the
eigendirections of the automorphism. All geometry (intersection,
containment, areas) is carried in eigencoordinates with exact field
arithmetic, so the Markov checks involve no tolerances at all.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .algebra import QuadContext, QuadNum, Spectrum, ToralAutomorphism, spectrum


class MalformedPartition(ValueError):
    """Partition data violates a structural requirement."""


class NonConvergence(RuntimeError):
    """Power iteration failed to stabilize within the iteration cap."""


class UnknownCatalogEntry(KeyError):
    """Requested catalog name is not shipped."""


def _qn_floor(v: QuadNum) -> int:
    f = math.floor(float(v))
    while v < f:
        f -= 1
    while v >= f + 1:
        f += 1
    return f


def _qn_ceil(v: QuadNum) -> int:
    return -_qn_floor(-v)


@dataclass(frozen=True)
class Parallelogram:
    """Parallelogram spanned by the eigendirections.

    `origin` is an ambient plane point; `u_extent` and `s_extent` are the
    (positive) coefficients along the frame vectors of the owning
    partition's eigenbasis, so the region is
    origin + [0, u_extent]*w_u + [0, s_extent]*w_s.
    """

    origin: tuple[QuadNum, QuadNum]
    u_extent: QuadNum
    s_extent: QuadNum

    def __post_init__(self) -> None:
        if self.u_extent.sign() <= 0 or self.s_extent.sign() <= 0:
            raise MalformedPartition("parallelogram extents must be positive")


class Frame:
    """Eigenbasis of a hyperbolic matrix with exact coordinate conversion."""

    def __init__(self, spec: Spectrum):
        self.spec = spec
        self.ctx: QuadContext = spec.ctx
        self.w_u = spec.unstable_dir
        self.w_s = spec.stable_dir
        self.det = self.w_u[0] * self.w_s[1] - self.w_u[1] * self.w_s[0]
        if self.det.is_zero():
            raise MalformedPartition("degenerate eigenbasis")
        self._inv_det = self.det.inverse()
        self.f_wu = (float(self.w_u[0]), float(self.w_u[1]))
        self.f_ws = (float(self.w_s[0]), float(self.w_s[1]))
        self.scale_u = math.hypot(*self.f_wu)
        self.scale_s = math.hypot(*self.f_ws)
        self.sin_angle = abs(float(self.det)) / (self.scale_u * self.scale_s)
        self.area_factor = abs(self.det)  # ambient area per unit (u, s) area

    def num(self, value) -> QuadNum:
        if isinstance(value, QuadNum):
            return value
        return QuadNum(Fraction(value), 0, self.ctx)

    def coords(self, point: tuple[QuadNum, QuadNum]) -> tuple[QuadNum, QuadNum]:
        x, y = point
        u = (x * self.w_s[1] - y * self.w_s[0]) * self._inv_det
        s = (self.w_u[0] * y - self.w_u[1] * x) * self._inv_det
        return u, s

    def ambient(self, u: QuadNum, s: QuadNum) -> tuple[QuadNum, QuadNum]:
        return (
            u * self.w_u[0] + s * self.w_s[0],
            u * self.w_u[1] + s * self.w_s[1],
        )

    def lattice_coords(self, m: int, n: int) -> tuple[QuadNum, QuadNum]:
        return self.coords((self.num(m), self.num(n)))

    def euclid_sides(self, par: Parallelogram) -> tuple[float, float]:
        return (
            float(par.u_extent) * self.scale_u,
            float(par.s_extent) * self.scale_s,
        )

    def diameter(self, par: Parallelogram) -> float:
        """Length of the longer diagonal in ambient coordinates."""
        du, ds = float(par.u_extent), float(par.s_extent)
        ax = du * float(self.w_u[0]) + ds * float(self.w_s[0])
        ay = du * float(self.w_u[1]) + ds * float(self.w_s[1])
        bx = du * float(self.w_u[0]) - ds * float(self.w_s[0])
        by = du * float(self.w_u[1]) - ds * float(self.w_s[1])
        return max(math.hypot(ax, ay), math.hypot(bx, by))


@dataclass(frozen=True)
class _Box:
    """Parallelogram in frame coordinates: [u0, u0+du] x [s0, s0+ds]."""

    u0: QuadNum
    s0: QuadNum
    du: QuadNum
    ds: QuadNum

    @property
    def u1(self) -> QuadNum:
        return self.u0 + self.du

    @property
    def s1(self) -> QuadNum:
        return self.s0 + self.ds

    def translated(self, tu: QuadNum, ts: QuadNum) -> "_Box":
        return _Box(self.u0 + tu, self.s0 + ts, self.du, self.ds)

    def interior_intersects(self, other: "_Box") -> bool:
        return (
            self.u0 < other.u1
            and other.u0 < self.u1
            and self.s0 < other.s1
            and other.s0 < self.s1
        )


def _box_of(frame: Frame, par: Parallelogram) -> _Box:
    u0, s0 = frame.coords(par.origin)
    return _Box(u0, s0, par.u_extent, par.s_extent)


def _apply_matrix(A: ToralAutomorphism, pt: tuple[QuadNum, QuadNum]):
    x, y = pt
    return (x * A.a + y * A.b, x * A.c + y * A.d)


def _image_box(frame: Frame, par: Parallelogram, A: ToralAutomorphism, lam_u: QuadNum, lam_s: QuadNum) -> _Box:
    """Frame box of A(par), where A scales the frame directions by lam_u, lam_s."""
    u0, s0 = frame.coords(_apply_matrix(A, par.origin))
    du = lam_u * par.u_extent
    ds = lam_s * par.s_extent
    if du.sign() < 0:
        u0, du = u0 + du, -du
    if ds.sign() < 0:
        s0, ds = s0 + ds, -ds
    return _Box(u0, s0, du, ds)


def _translate_candidates(frame: Frame, fixed: _Box, moving: _Box):
    """Integer translates (m, n) for which moving+(m,n) could meet fixed.

    Bounding boxes are computed exactly in ambient coordinates, so the
    returned range provably covers every intersecting translate.
    """
    def ambient_bbox(box: _Box):
        corners = [
            frame.ambient(box.u0, box.s0),
            frame.ambient(box.u1, box.s0),
            frame.ambient(box.u0, box.s1),
            frame.ambient(box.u1, box.s1),
        ]
        xs = [c[0] for c in corners]
        ys = [c[1] for c in corners]
        return min(xs), max(xs), min(ys), max(ys)

    fx0, fx1, fy0, fy1 = ambient_bbox(fixed)
    mx0, mx1, my0, my1 = ambient_bbox(moving)
    for m in range(_qn_ceil(fx0 - mx1), _qn_floor(fx1 - mx0) + 1):
        for n in range(_qn_ceil(fy0 - my1), _qn_floor(fy1 - my0) + 1):
            yield m, n


@dataclass
class MarkovPartition:
    elements: list[Parallelogram]
    automorphism: ToralAutomorphism

    def __post_init__(self) -> None:
        if not self.elements:
            raise MalformedPartition("partition needs at least one element")
        self._frame = Frame(spectrum(self.automorphism))

    @property
    def frame(self) -> Frame:
        return self._frame

    @property
    def size(self) -> int:
        return len(self.elements)

    def total_area(self) -> QuadNum:
        total = self._frame.num(0)
        for el in self.elements:
            total = total + el.u_extent * el.s_extent
        return total * self._frame.area_factor

    def to_json(self) -> str:
        def quad(v: QuadNum):
            return [v.p.numerator, v.p.denominator, v.q.numerator, v.q.denominator]

        A = self.automorphism
        return json.dumps(
            {
                "matrix": [A.a, A.b, A.c, A.d],
                "elements": [
                    {
                        "origin": [quad(el.origin[0]), quad(el.origin[1])],
                        "u_extent": quad(el.u_extent),
                        "s_extent": quad(el.s_extent),
                    }
                    for el in self.elements
                ],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "MarkovPartition":
        data = json.loads(text)
        A = ToralAutomorphism(*data["matrix"])
        ctx = spectrum(A).ctx

        def quad(rec) -> QuadNum:
            pn, pd, qn, qd = rec
            return QuadNum(Fraction(pn, pd), Fraction(qn, qd), ctx)

        elements = [
            Parallelogram(
                (quad(rec["origin"][0]), quad(rec["origin"][1])),
                quad(rec["u_extent"]),
                quad(rec["s_extent"]),
            )
            for rec in data["elements"]
        ]
        return cls(elements, A)


@dataclass
class ValidationReport:
    cover_ok: bool
    disjoint_ok: bool
    markov_ok: bool
    area: float
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.cover_ok and self.disjoint_ok and self.markov_ok


def _eigen_scales(A: ToralAutomorphism, frame: Frame) -> tuple[QuadNum, QuadNum]:
    """Scaling of the frame directions under A: (lam, other root)."""
    return frame.spec.lam, frame.spec.lam_inv


def validate_partition(P: MarkovPartition) -> ValidationReport:
    """Exact cover / disjointness / Markov-property check.

    The Markov property is verified per intersecting translate: the image
    of an element must span the full unstable extent of every element it
    meets and stay inside that element's stable extent.
    """
    frame = P.frame
    boxes = [_box_of(frame, el) for el in P.elements]
    failures: list[str] = []

    area = P.total_area()
    cover_ok = area == 1

    disjoint_ok = True
    for i in range(P.size):
        for j in range(i, P.size):
            for m, n in _translate_candidates(frame, boxes[i], boxes[j]):
                if i == j and m == 0 and n == 0:
                    continue
                tu, ts = frame.lattice_coords(m, n)
                if boxes[j].translated(tu, ts).interior_intersects(boxes[i]):
                    disjoint_ok = False
                    failures.append(f"interiors of elements {i} and {j} overlap at translate ({m},{n})")

    markov_ok = True
    lam_u, lam_s = _eigen_scales(P.automorphism, frame)
    for i in range(P.size):
        image = _image_box(frame, P.elements[i], P.automorphism, lam_u, lam_s)
        for j in range(P.size):
            target = boxes[j]
            for m, n in _translate_candidates(frame, target, image):
                tu, ts = frame.lattice_coords(m, n)
                piece = image.translated(tu, ts)
                if not piece.interior_intersects(target):
                    continue
                full_u = piece.u0 <= target.u0 and target.u1 <= piece.u1
                inside_s = target.s0 <= piece.s0 and piece.s1 <= target.s1
                if not (full_u and inside_s):
                    markov_ok = False
                    failures.append(
                        f"image of element {i} meets element {j} at translate ({m},{n}) "
                        "without full unstable crossing and stable containment"
                    )
    if not cover_ok:
        failures.append(f"areas sum to {float(area)!r}, expected 1")
    return ValidationReport(cover_ok, disjoint_ok, markov_ok, float(area), failures)


@dataclass(frozen=True)
class TransitionMatrix:
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        d = len(self.entries)
        for row in self.entries:
            if len(row) != d:
                raise ValueError("transition matrix must be square")
            if any(v not in (0, 1) for v in row):
                raise ValueError("transition matrix entries must be 0 or 1")

    @property
    def dimension(self) -> int:
        return len(self.entries)

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=float)

    def zero_rows(self) -> list[int]:
        return [i for i, row in enumerate(self.entries) if not any(row)]

    def zero_columns(self) -> list[int]:
        d = self.dimension
        return [j for j in range(d) if not any(self.entries[i][j] for i in range(d))]

    def is_irreducible(self) -> bool:
        """Strong connectivity of the transition digraph (reported, not assumed)."""
        d = self.dimension

        def reach(start: int, forward: bool) -> set[int]:
            seen = {start}
            stack = [start]
            while stack:
                v = stack.pop()
                for w in range(d):
                    edge = self.entries[v][w] if forward else self.entries[w][v]
                    if edge and w not in seen:
                        seen.add(w)
                        stack.append(w)
            return seen

        return all(len(reach(v, True)) == d and len(reach(v, False)) == d for v in range(d))

    @classmethod
    def full(cls, d: int) -> "TransitionMatrix":
        return cls(tuple(tuple(1 for _ in range(d)) for _ in range(d)))

    @classmethod
    def golden_mean(cls) -> "TransitionMatrix":
        return cls(((1, 1), (1, 0)))


def transition_matrix(P: MarkovPartition, check: bool = True) -> TransitionMatrix:
    """0/1 matrix with entry (i, j) = 1 iff int P_i meets T^{-1}(int P_j) mod 1."""
    if check:
        report = validate_partition(P)
        if not report.ok:
            raise MalformedPartition("; ".join(report.failures) or "invalid partition")
    frame = P.frame
    boxes = [_box_of(frame, el) for el in P.elements]
    lam_u, lam_s = _eigen_scales(P.automorphism, frame)
    rows = []
    for i in range(P.size):
        image = _image_box(frame, P.elements[i], P.automorphism, lam_u, lam_s)
        row = []
        for j in range(P.size):
            hit = 0
            for m, n in _translate_candidates(frame, boxes[j], image):
                tu, ts = frame.lattice_coords(m, n)
                if image.translated(tu, ts).interior_intersects(boxes[j]):
                    hit = 1
                    break
            row.append(hit)
        rows.append(tuple(row))
    return TransitionMatrix(tuple(rows))


def _charpoly_radius(G: TransitionMatrix) -> float:
    """Largest root modulus of the characteristic polynomial (d <= 4 only)."""
    arr = np.array(G.entries, dtype=np.int64)
    d = arr.shape[0]
    # Faddeev-LeVerrier with integer arithmetic
    coeffs = [1]
    M = np.zeros_like(arr)
    I = np.eye(d, dtype=np.int64)
    for k in range(1, d + 1):
        M = arr @ M + coeffs[-1] * I
        c = -(arr @ M).trace() // k
        coeffs.append(int(c))
    roots = np.roots(np.array(coeffs, dtype=float))
    return float(max(abs(roots)))


def spectral_radius(G: TransitionMatrix, rel_tol: float = 1e-12, max_iter: int = 200_000) -> float:
    """Dominant eigenvalue modulus via power iteration on G + I.

    The +I shift makes the iteration converge for periodic (bipartite-like)
    matrices; the radius of G is recovered by subtracting 1.
    """
    arr = G.as_array()
    d = G.dimension
    if not arr.any():
        raise ValueError("matrix must be nonzero")
    shifted = arr + np.eye(d)
    v = np.ones(d)
    estimate = 0.0
    stable = 0
    for _ in range(max_iter):
        w = shifted @ v
        norm = float(np.linalg.norm(w))
        v = w / norm
        new = float(v @ (shifted @ v))
        if abs(new - estimate) <= rel_tol * max(1.0, abs(new)):
            stable += 1
            if stable >= 4:
                radius = new - 1.0
                if d <= 4:
                    ref = _charpoly_radius(G)
                    if abs(radius - ref) > 1e-9 * max(1.0, ref):
                        raise NonConvergence(
                            f"power iteration ({radius}) disagrees with characteristic polynomial ({ref})"
                        )
                return radius
        else:
            stable = 0
        estimate = new
    blocks = "irreducible" if G.is_irreducible() else "reducible"
    raise NonConvergence(
        f"no convergence after {max_iter} iterations (last estimate {estimate - 1.0}, {blocks} matrix)"
    )


@dataclass(frozen=True)
class GeometryConstants:
    c_min: float
    c_max: float
    b_min: float
    h_min: float
    k0: int
    L: float


def covering_count_bound(h_min: float) -> int:
    """Cylinders of one level needed to cover a comparable ball: (ceil(2/h)+1)^2."""
    return (math.ceil(2.0 / h_min) + 1) ** 2


def diagonal_length(side_u: float, side_s: float, sin_angle: float = 1.0) -> float:
    """Longer diagonal of a parallelogram from its side lengths."""
    cos_angle = math.sqrt(max(0.0, 1.0 - sin_angle * sin_angle))
    return math.sqrt(side_u**2 + side_s**2 + 2.0 * side_u * side_s * cos_angle)


def geometry_constants(P: MarkovPartition) -> GeometryConstants:
    """Diameter, side and height extrema used by the covering comparisons."""
    frame = P.frame
    diameters = []
    sides = []
    heights = []
    for el in P.elements:
        lu, ls = frame.euclid_sides(el)
        diameters.append(frame.diameter(el))
        sides.extend((lu, ls))
        heights.extend((lu * frame.sin_angle, ls * frame.sin_angle))
    h_min = min(heights)
    return GeometryConstants(
        c_min=min(diameters),
        c_max=max(diameters),
        b_min=min(sides),
        h_min=h_min,
        k0=covering_count_bound(h_min),
        L=max(diameters),
    )


def _cat_partition() -> MarkovPartition:
    """Five-element partition for [[2,1],[1,1]] with matching spectral radius.

    Built from the classical two-box tiling in expanding/contracting
    coordinates, refined one step so that each image crosses each element
    at most once and the transition matrix is 0/1.
    """
    A = ToralAutomorphism(2, 1, 1, 1)
    ctx = spectrum(A).ctx

    def num(p, q) -> QuadNum:
        return QuadNum(Fraction(p), Fraction(q), ctx)

    fifth = Fraction(1, 5)

    def element(zeta0_p, zeta0_q, wide_u: bool, tall_s: bool) -> Parallelogram:
        # origin from the expanding coordinate zeta0 (contracting coord 0):
        # x = zeta0*(2*lam-3)/5, y = zeta0*(4-lam)/5
        z = num(zeta0_p, zeta0_q)
        x = z * num(-3 * fifth, 2 * fifth)
        y = z * num(4 * fifth, -fifth)
        u = num(-7 * fifth, 3 * fifth) if wide_u else num(11 * fifth, -4 * fifth)
        s = num(fifth, fifth) if tall_s else num(-3 * fifth, 2 * fifth)
        return Parallelogram((x, y), u, s)

    elements = [
        element(0, 0, True, True),     # [0, 1/phi) x [0, 1)
        element(-2, 1, True, True),    # [1/phi, 2/phi) x [0, 1)
        element(-4, 2, False, True),   # [2/phi, phi) x [0, 1)
        element(-1, 0, True, False),   # [-1, -1/phi^2) x [0, 1/phi)
        element(-3, 1, False, False),  # [-1/phi^2, 0) x [0, 1/phi)
    ]
    return MarkovPartition(elements, A)


def catalog(name: str) -> tuple[ToralAutomorphism, MarkovPartition]:
    """Shipped automorphism/partition pairs, validated and spectrally matched."""
    if name == "cat":
        P = _cat_partition()
        return P.automorphism, P
    if name == "fibonacci-squared":
        A = ToralAutomorphism(1, 1, 1, 0).squared()
        P = _cat_partition()
        return A, P
    raise UnknownCatalogEntry(name)


CATALOG_NAMES = ("cat", "fibonacci-squared")
