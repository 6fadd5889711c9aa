"""Word-level Kleinian geometry: tangency points, quasilines, limit sets.

Everything here works on the numeric matrix of a Farey word at a fixed
parameter value: the tangency point of its isometric disks with their unit
translates (a parabolic fixed point), the segment joining the paired disk
boundary points, the invariant quasiline swept out by the two-generator
group, the strip bounding it, and the combined fundamental domain of the
corollary construction.  Orbits enumerate reduced words breadth-first with
last-letter exclusion.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .mobius import (Circle, CircleOrLine, InfinityFixed, Line, Mobius,
                     apply_to_circle, farey_mobius, isometric_disks)
from .words import Slope

PFP_TOL = 1e-10


class DegenerateC(ValueError):
    """|c(mu)| below threshold: the word nearly fixes infinity."""


def _checked_word(slope: Slope, mu: complex) -> Mobius:
    h = farey_mobius(slope, mu)
    if abs(h.c) < 1e-14:
        raise DegenerateC(f"c({mu}) ~ 0 for slope {slope}")
    return h


def tangency_parabolic_point(slope: Slope, mu: complex) -> complex:
    """The point (1 - d)/c where the translated isometric disks touch.

    It is a parabolic fixed point: the word sends it to itself plus one,
    which is verified numerically before returning.
    """
    h = _checked_word(slope, mu)
    z0 = (1.0 - h.d) / h.c
    err = abs(h(z0) - (z0 + 1.0))
    if err > PFP_TOL * max(1.0, abs(z0)):
        raise ArithmeticError(
            f"tangency identity residual {err:.2e} for slope {slope} at mu={mu}")
    return z0


def ell_segment(slope: Slope, mu: complex) -> tuple[complex, complex]:
    """Endpoints -(1 + d)/c and (a + 1)/c, identified by the word."""
    h = _checked_word(slope, mu)
    e1 = -(1.0 + h.d) / h.c
    e2 = (h.a + 1.0) / h.c
    err = abs(h(e1) - e2)
    if err > PFP_TOL * max(1.0, abs(e2)):
        raise ArithmeticError(
            f"segment endpoints not identified (residual {err:.2e})")
    return e1, e2


def strip_bounds(slope: Slope, mu: complex) -> tuple[float, float]:
    """Smallest horizontal strip containing both isometric disks.

    This is the quasiline bound: the invariant line lies between the disk
    tangents Im(a/c) -+ 1/|c| and Im(-d/c) +- 1/|c|, whichever pair brackets.
    """
    h = _checked_word(slope, mu)
    r = 1.0 / abs(h.c)
    y1 = (h.a / h.c).imag
    y2 = (-h.d / h.c).imag
    return (min(y1, y2) - r, max(y1, y2) + r)


def quasiline_width_probe(slope: Slope, mu: complex) -> float:
    """Separation of the word's fixed points in the imaginary direction.

    Reported (not asserted) as the conjectured sharp quasiline strip width;
    it collapses to zero as the trace approaches -2.
    """
    h = _checked_word(slope, mu)
    tr = h.trace
    disc = cmath.sqrt(tr * tr - 4.0)
    return abs((disc / h.c).imag)


def _reduced_words(gens: list[tuple[str, Mobius]], max_len: int):
    """Breadth-first reduced words; yields (name, matrix) per word."""
    inverse_of = {"f": "F", "F": "f", "h": "H", "H": "h"}
    level = [("", Mobius.identity())]
    yield level[0]
    for _ in range(max_len):
        nxt = []
        for name, m in level:
            last = name[-1] if name else ""
            for gname, g in gens:
                if last and inverse_of[gname] == last:
                    continue
                nxt.append((name + gname, m @ g))
        yield from nxt
        level = nxt


def quasiline_orbit(slope: Slope, mu: complex, max_word_len: int = 5,
                    segment_samples: int = 16,
                    dedup_resolution: float = 1e-4) -> list[complex]:
    """Points of the invariant quasiline: orbit of the joining segment.

    Images of the segment under all reduced words in the translation f and
    the word h up to the length bound, deduplicated to the given resolution.
    """
    h = _checked_word(slope, mu)
    e1, e2 = ell_segment(slope, mu)
    base = [e1 + (e2 - e1) * k / segment_samples for k in range(segment_samples + 1)]
    f = Mobius.translation(1.0)
    gens = [("f", f), ("F", f.inverse()), ("h", h), ("H", h.inverse())]
    seen = set()
    out: list[complex] = []
    for _, m in _reduced_words(gens, max_word_len):
        for z in base:
            w = m(z)
            if w is None or not (math.isfinite(w.real) and math.isfinite(w.imag)):
                continue
            key = (round(w.real / dedup_resolution), round(w.imag / dedup_resolution))
            if key not in seen:
                seen.add(key)
                out.append(w)
    return out


@dataclass
class LimitSetSample:
    """Points and circles accumulated along a limit-set orbit."""

    points: list[complex] = field(default_factory=list)
    circles: list[CircleOrLine] = field(default_factory=list)
    words_used: int = 0

    def to_csv_rows(self) -> list[tuple]:
        rows: list[tuple] = [("type", "cx", "cy", "r")]
        for z in self.points:
            rows.append(("point", z.real, z.imag, 0.0))
        for obj in self.circles:
            if isinstance(obj, Circle):
                rows.append(("circle", obj.center.real, obj.center.imag, obj.radius))
            else:
                rows.append(("line", obj.point.real, obj.point.imag,
                             math.atan2(obj.direction.imag, obj.direction.real)))
        return rows

    def to_json(self) -> dict:
        return {
            "points": [[z.real, z.imag] for z in self.points],
            "circles": [
                {"type": "circle", "center": [c.center.real, c.center.imag],
                 "radius": c.radius} if isinstance(c, Circle) else
                {"type": "line", "point": [c.point.real, c.point.imag],
                 "direction": [c.direction.real, c.direction.imag]}
                for c in self.circles
            ],
            "words_used": self.words_used,
        }


def limit_set_points(mu: complex, depth: int, seed: str = "fixed-points",
                     slope: Slope | None = None,
                     include_involution: bool = False,
                     dedup_resolution: float = 1e-6) -> LimitSetSample:
    """Orbit of seed objects under reduced words in the two generators.

    Seeds: 'fixed-points' tracks the parabolic fixed points 0 and infinity;
    'isometric-circles' tracks the isometric circles of the second
    generator (and of the slope word, when a slope is given); 'peripheral'
    tracks the line through the fixed points of the slope word, the
    degenerate position of the invariant quasiline.  The involution
    z -> 1/(mu z) optionally overlays its images of every seed.
    """
    if mu == 0:
        raise ValueError("mu must be nonzero")
    f = Mobius.translation(1.0)
    g = Mobius.parabolic_y(mu)
    gens = [("f", f), ("F", f.inverse()), ("h", g), ("H", g.inverse())]

    seed_points: list[complex] = []
    seed_circles: list[CircleOrLine] = []
    if seed == "fixed-points":
        seed_points = [0j]
    elif seed == "isometric-circles":
        disks = isometric_disks(g)
        seed_circles = [disks.d1, disks.d2]
        if slope is not None:
            wdisks = isometric_disks(farey_mobius(slope, mu))
            seed_circles += [wdisks.d1, wdisks.d2]
    elif seed == "peripheral":
        if slope is None:
            raise ValueError("peripheral seed needs a slope")
        h = _checked_word(slope, mu)
        tr = h.trace
        disc = cmath.sqrt(tr * tr - 4.0)
        fp1 = (h.a - h.d + disc) / (2.0 * h.c)
        fp2 = (h.a - h.d - disc) / (2.0 * h.c)
        if abs(fp1 - fp2) < 1e-9:
            # parabolic word (cusp): the quasiline degenerates to the common
            # tangent of the two isometric disks at the merged fixed point
            disks = isometric_disks(h)
            normal = disks.d1.center - disks.d2.center
            seed_circles = [Line(fp1, 1j * normal / abs(normal))]
        else:
            seed_circles = [Line(fp1, (fp2 - fp1) / abs(fp2 - fp1))]
    else:
        raise ValueError(f"unknown seed {seed!r}")
    if include_involution:
        phi = Mobius.involution(mu)
        seed_points = seed_points + [phi(z) for z in seed_points if phi(z) is not None]
        seed_circles = seed_circles + [apply_to_circle(phi, c) for c in seed_circles]

    sample = LimitSetSample()
    seen_pts = set()
    seen_circles = set()

    def add_point(z: complex | None):
        if z is None or not (math.isfinite(z.real) and math.isfinite(z.imag)):
            return
        key = (round(z.real / dedup_resolution), round(z.imag / dedup_resolution))
        if key not in seen_pts:
            seen_pts.add(key)
            sample.points.append(z)

    def add_circle(obj: CircleOrLine):
        if isinstance(obj, Circle):
            key = ("c", round(obj.center.real / dedup_resolution),
                   round(obj.center.imag / dedup_resolution),
                   round(obj.radius / dedup_resolution))
        else:
            key = ("l", round(obj.point.real / dedup_resolution),
                   round(obj.point.imag / dedup_resolution),
                   round(cmath.phase(obj.direction) % math.pi, 9))
        if key not in seen_circles:
            seen_circles.add(key)
            sample.circles.append(obj)

    for _, m in _reduced_words(gens, depth):
        sample.words_used += 1
        for z in seed_points:
            add_point(m(z))
        if seed == "fixed-points":
            add_point(m(None))  # orbit of infinity
        for obj in seed_circles:
            add_circle(apply_to_circle(m, obj))
    return sample


@dataclass(frozen=True)
class FundamentalDomain:
    """The combined domain: strip and isometric disks minus their translates."""

    slope: Slope
    mu: complex
    strip_x0: float
    strip_x1: float
    d1: Circle
    d2: Circle
    d1_shifted: Circle  # d1 - 1
    d2_shifted: Circle  # d2 + 1
    tangency_point: complex
    tangency_residual: float

    def contains(self, z: complex) -> bool:
        in_strip = self.strip_x0 <= z.real <= self.strip_x1
        in_core = in_strip or self.d1.contains(z) or self.d2.contains(z)
        return in_core and not (self.d1_shifted.contains(z)
                                or self.d2_shifted.contains(z))


def fundamental_domain(slope: Slope, mu: complex) -> FundamentalDomain:
    """Strip of width one through the disks, minus the shifted disks.

    The tangency of the left-shifted first disk with the second disk is the
    trace identity in geometric form and is verified numerically.
    """
    h = _checked_word(slope, mu)
    disks = isometric_disks(h)
    center = ((h.a - h.d) / h.c).real / 2.0
    d1s = Circle(disks.d1.center - 1.0, disks.d1.radius)
    d2s = Circle(disks.d2.center + 1.0, disks.d2.radius)
    gap = abs(d1s.center - disks.d2.center) - (d1s.radius + disks.d2.radius)
    z0 = (1.0 - h.d) / h.c
    return FundamentalDomain(
        slope=slope, mu=mu,
        strip_x0=center - 0.5, strip_x1=center + 0.5,
        d1=disks.d1, d2=disks.d2, d1_shifted=d1s, d2_shifted=d2s,
        tangency_point=z0, tangency_residual=abs(gap))
