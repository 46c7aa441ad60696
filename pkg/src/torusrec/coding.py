"""Geometry of symbolic cylinders: the bridge between shift space and torus.

A window pins down a parallelogram on the torus (future symbols shrink the
unstable extent, past symbols the stable extent). These regions drive the
diameter-comparability and Lipschitz checks that justify computing
dimensions symbolically.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .algebra import QuadNum, ToralAutomorphism, TorusPoint
from .partition import (
    Frame,
    MalformedPartition,
    MarkovPartition,
    Parallelogram,
    TransitionMatrix,
    _box_of,
    _Box,
    _image_box,
    _translate_candidates,
    geometry_constants,
    transition_matrix,
)
from .shift import Sft, SymbolicWindow, shift_window


class InadmissibleWindow(ValueError):
    """The window's symbols produce an empty intersection."""


class BoundaryHit(ValueError):
    """An iterate landed on a partition boundary, making the coding ambiguous."""

    def __init__(self, j: int):
        super().__init__(f"iterate {j} lies on a partition boundary")
        self.j = j


@dataclass(frozen=True)
class GeometricCylinder:
    window: SymbolicWindow
    region: Parallelogram
    diameter: float


def _step(frame: Frame, current: _Box, element_box: _Box, A: ToralAutomorphism, lam_u: QuadNum, lam_s: QuadNum) -> _Box:
    """One forward step: image of `current` intersected with the unique
    lattice translate of `element_box` it meets."""
    par = Parallelogram(frame.ambient(current.u0, current.s0), current.du, current.ds)
    image = _image_box(frame, par, A, lam_u, lam_s)
    hits = []
    for m, n in _translate_candidates(frame, image, element_box):
        tu, ts = frame.lattice_coords(m, n)
        candidate = element_box.translated(tu, ts)
        if candidate.interior_intersects(image):
            hits.append(candidate)
    if not hits:
        raise InadmissibleWindow("empty intersection while following the window")
    if len(hits) > 1:
        raise MalformedPartition("image crosses an element more than once; refine the partition")
    target = hits[0]
    u0 = max(image.u0, target.u0)
    s0 = max(image.s0, target.s0)
    u1 = min(image.u1, target.u1)
    s1 = min(image.s1, target.s1)
    return _Box(u0, s0, u1 - u0, s1 - s0)


def cylinder_region(P: MarkovPartition, w: SymbolicWindow) -> GeometricCylinder:
    """Exact parallelogram of torus points whose itinerary matches the window."""
    frame = P.frame
    A = P.automorphism
    lam, lam_conj = frame.spec.lam, frame.spec.lam_inv
    det = A.det
    # inverse map scales: A^-1 w_u = (lam_conj * det) w_u, A^-1 w_s = (lam * det) w_s
    A_inv = A.inverse()
    inv_u = lam_conj * det
    inv_s = lam * det
    boxes = [_box_of(frame, el) for el in P.elements]

    base = boxes[w[0]]

    # future chain fixes the unstable interval
    chain = base
    for k in range(1, w.hi + 1):
        chain = _step(frame, chain, boxes[w[k]], A, lam, lam_conj)
    shrink = (lam_conj * det) ** w.hi  # = lam^-hi up to det sign
    u0 = chain.u0 * shrink
    u1 = chain.u1 * shrink
    if u1 < u0:
        u0, u1 = u1, u0

    # past chain fixes the stable interval
    chain = base
    for k in range(1, -w.lo + 1):
        chain = _step(frame, chain, boxes[w[-k]], A_inv, inv_u, inv_s)
    grow = lam_conj ** (-w.lo)
    s0 = chain.s0 * grow
    s1 = chain.s1 * grow
    if s1 < s0:
        s0, s1 = s1, s0

    region_box = _Box(u0, s0, u1 - u0, s1 - s0)
    if region_box.du.sign() <= 0 or region_box.ds.sign() <= 0:
        raise InadmissibleWindow("window determines an empty region")
    region = Parallelogram(frame.ambient(region_box.u0, region_box.s0), region_box.du, region_box.ds)
    return GeometricCylinder(w, region, frame.diameter(region))


def itinerary(P: MarkovPartition, x: TorusPoint, m: int) -> SymbolicWindow:
    """Window on [-m, m] recording which element each iterate lands in.

    Raises BoundaryHit when an iterate sits on an element boundary; callers
    needing totality should nudge the point by a small exact rational offset
    (for the shipped cat partition, (1/1000, 0) moves the fixed point at the
    origin into an element interior for small m).
    """
    if not x.is_exact():
        raise ValueError("itinerary needs an exact rational point")
    frame = P.frame
    A = P.automorphism
    boxes = [_box_of(frame, el) for el in P.elements]
    bboxes = []
    for box in boxes:
        corners = [
            frame.ambient(box.u0, box.s0),
            frame.ambient(box.u1, box.s0),
            frame.ambient(box.u0, box.s1),
            frame.ambient(box.u1, box.s1),
        ]
        xs = [float(c[0]) for c in corners]
        ys = [float(c[1]) for c in corners]
        bboxes.append((min(xs), max(xs), min(ys), max(ys)))

    def locate(px, py) -> int:
        interior = []
        closure = []
        fx, fy = float(px), float(py)
        for idx, box in enumerate(boxes):
            x0, x1, y0, y1 = bboxes[idx]
            for mm in range(math.floor(fx - x1) - 1, math.ceil(fx - x0) + 2):
                for nn in range(math.floor(fy - y1) - 1, math.ceil(fy - y0) + 2):
                    pu, ps = frame.coords((frame.num(px - mm), frame.num(py - nn)))
                    if box.u0 < pu < box.u1 and box.s0 < ps < box.s1:
                        interior.append(idx)
                    elif box.u0 <= pu <= box.u1 and box.s0 <= ps <= box.s1:
                        closure.append(idx)
        if len(interior) == 1:
            return interior[0]
        if interior:
            raise MalformedPartition("point interior to several elements")
        if closure:
            raise BoundaryHit(0)
        raise MalformedPartition("point not covered by the partition")

    symbols = []
    # walk the orbit from -m to m
    A_inv = A.inverse()
    px, py = x.x, x.y
    for _ in range(m):
        px, py = A_inv.apply(px, py)
        px, py = px % 1, py % 1
    for j in range(-m, m + 1):
        try:
            symbols.append(locate(px, py))
        except BoundaryHit:
            raise BoundaryHit(j) from None
        px, py = A.apply(px, py)
        px, py = px % 1, py % 1
    return SymbolicWindow(-m, tuple(symbols))


def _region_sup_distance(frame: Frame, a: Parallelogram, b: Parallelogram) -> float:
    """Largest distance between points of two parallelograms (corner pairs)."""

    def corners(par: Parallelogram):
        ox, oy = float(par.origin[0]), float(par.origin[1])
        du, ds = float(par.u_extent), float(par.s_extent)
        wux, wuy = float(frame.w_u[0]), float(frame.w_u[1])
        wsx, wsy = float(frame.w_s[0]), float(frame.w_s[1])
        return [
            (ox + cu * du * wux + cs * ds * wsx, oy + cu * du * wuy + cs * ds * wsy)
            for cu in (0.0, 1.0)
            for cs in (0.0, 1.0)
        ]

    return max(
        math.hypot(ax - bx, ay - by)
        for ax, ay in corners(a)
        for bx, by in corners(b)
    )


@dataclass
class RatioRow:
    m: int
    samples: int
    min_ratio: float
    max_ratio: float
    violations: int


@dataclass
class DiameterRatioReport:
    rows: list[RatioRow]
    lipschitz_worst: float
    lipschitz_violations: int
    c_min: float
    c_max: float

    @property
    def diameter_violations(self) -> int:
        return sum(r.violations for r in self.rows)

    @property
    def ok(self) -> bool:
        return self.diameter_violations == 0 and self.lipschitz_violations == 0


def _random_symmetric_window(rng: random.Random, gamma: TransitionMatrix, m: int) -> SymbolicWindow:
    d = gamma.dimension
    successors = [[b for b in range(d) if gamma.entries[a][b]] for a in range(d)]
    predecessors = [[a for a in range(d) if gamma.entries[a][b]] for b in range(d)]
    symbols = [rng.randrange(d)]
    for _ in range(m):
        symbols.append(rng.choice(successors[symbols[-1]]))
    left = []
    cur = symbols[0]
    for _ in range(m):
        prev = rng.choice(predecessors[cur])
        left.append(prev)
        cur = prev
    return SymbolicWindow(-m, tuple(reversed(left)) + tuple(symbols))


def diameter_ratio_check(
    P: MarkovPartition,
    samples: int = 1000,
    m_max: int = 20,
    seed: int = 0,
) -> DiameterRatioReport:
    """Sampled verification of the two covering lemmas.

    Cylinder diameters must sit in [c_min, c_max] * lam^-m, and pairs of
    windows at known symbolic distance must map to regions no farther apart
    than c_max times that distance.
    """
    frame = P.frame
    gamma = transition_matrix(P, check=False)
    gc = geometry_constants(P)
    lam = frame.spec.lam_float
    rng = random.Random(seed)
    per_m = max(1, samples // max(1, m_max))

    rows = []
    lip_worst = 0.0
    lip_violations = 0
    for m in range(0, m_max + 1):
        lo_ratio, hi_ratio = math.inf, -math.inf
        violations = 0
        count = 1 if m == 0 else per_m
        for _ in range(count):
            w = _random_symmetric_window(rng, gamma, m)
            cyl = cylinder_region(P, w)
            ratio = cyl.diameter * lam**m
            lo_ratio = min(lo_ratio, ratio)
            hi_ratio = max(hi_ratio, ratio)
            if not (gc.c_min - 1e-9 <= ratio <= gc.c_max + 1e-9):
                violations += 1
            if m >= 1:
                # sibling window differing exactly at radius m
                d = gamma.dimension
                alternatives = [
                    b
                    for b in range(d)
                    if b != w[m] and gamma.entries[w[m - 1]][b]
                ]
                if alternatives:
                    sibling = SymbolicWindow(w.lo, w.symbols[:-1] + (rng.choice(alternatives),))
                    dist = lam ** (-(m - 1))
                    sup = _region_sup_distance(
                        frame, cylinder_region(P, w).region, cylinder_region(P, sibling).region
                    )
                    lip_ratio = sup / (gc.L * dist)
                    lip_worst = max(lip_worst, lip_ratio)
                    if lip_ratio > 1.0 + 1e-9:
                        lip_violations += 1
        rows.append(RatioRow(m, count, lo_ratio, hi_ratio, violations))
    return DiameterRatioReport(rows, lip_worst, lip_violations, gc.c_min, gc.c_max)
