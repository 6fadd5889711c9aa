"""Numeric Moebius maps, circles, isometric disks and holonomy.

Matrices are kept in SL(2, C): constructors renormalize the determinant to
one.  Circles and lines are distinct variants so that the vertical lines
fixed by z -> z + 1 and the half-plane boundaries stay exact under the
group action rather than degenerating to huge circles.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .polynomials import trace_polys
from .words import FareyWord, Slope

DET_TOL = 1e-12


class InfinityFixed(ValueError):
    """c = 0: the map fixes infinity and has no isometric circles."""


class CommutingGenerators(ValueError):
    """Coinciding parabolic fixed points; the pair generates no Gamma_nu."""


@dataclass(frozen=True)
class Mobius:
    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if abs(det) < 1e-30:
            raise ValueError("singular matrix")
        if abs(det - 1.0) > DET_TOL:
            s = cmath.sqrt(det)
            object.__setattr__(self, "a", self.a / s)
            object.__setattr__(self, "b", self.b / s)
            object.__setattr__(self, "c", self.c / s)
            object.__setattr__(self, "d", self.d / s)

    @staticmethod
    def identity() -> "Mobius":
        return Mobius(1, 0, 0, 1)

    @staticmethod
    def translation(t: complex = 1.0) -> "Mobius":
        return Mobius(1, t, 0, 1)

    @staticmethod
    def parabolic_y(mu: complex) -> "Mobius":
        """z -> z / (mu z + 1), the second generator of the family."""
        return Mobius(1, 0, mu, 1)

    @staticmethod
    def involution(mu: complex) -> "Mobius":
        """z -> 1 / (mu z), swapping the two generator conjugacy classes."""
        return Mobius(0, 1, mu, 0)

    @property
    def trace(self) -> complex:
        return self.a + self.d

    def inverse(self) -> "Mobius":
        return Mobius(self.d, -self.b, -self.c, self.a)

    def __matmul__(self, other: "Mobius") -> "Mobius":
        return Mobius(self.a * other.a + self.b * other.c,
                      self.a * other.b + self.b * other.d,
                      self.c * other.a + self.d * other.c,
                      self.c * other.b + self.d * other.d)

    def __call__(self, z: complex | None) -> complex | None:
        """Apply to a point; None stands for infinity."""
        if z is None:
            return None if self.c == 0 else self.a / self.c
        den = self.c * z + self.d
        if abs(den) < 1e-300:
            return None
        return (self.a * z + self.b) / den

    def fixed_point_parabolic(self) -> complex | None:
        """Fixed point of a parabolic element (None = infinity)."""
        if abs(self.c) < 1e-14:
            return None
        return (self.a - self.d) / (2.0 * self.c)


@dataclass(frozen=True)
class Circle:
    center: complex
    radius: float

    def point_at(self, angle: float) -> complex:
        return self.center + self.radius * cmath.exp(1j * angle)

    def contains(self, z: complex) -> bool:
        return abs(z - self.center) <= self.radius


@dataclass(frozen=True)
class Line:
    point: complex
    direction: complex  # unit modulus

    def point_at(self, s: float) -> complex:
        return self.point + s * self.direction


CircleOrLine = Circle | Line


def _circle_through(z1: complex, z2: complex, z3: complex,
                    collinear_tol: float = 1e-9) -> CircleOrLine:
    """Circumcircle of three points, or the line when they are collinear."""
    d = 2.0 * ((z1.real * (z2.imag - z3.imag)) + (z2.real * (z3.imag - z1.imag))
               + (z3.real * (z1.imag - z2.imag)))
    scale = max(abs(z1 - z2), abs(z2 - z3), abs(z3 - z1))
    if abs(d) <= collinear_tol * scale * scale:
        direction = (z2 - z1) / abs(z2 - z1)
        return Line(z1, direction)
    a1, a2, a3 = abs(z1) ** 2, abs(z2) ** 2, abs(z3) ** 2
    ux = (a1 * (z2.imag - z3.imag) + a2 * (z3.imag - z1.imag) + a3 * (z1.imag - z2.imag)) / d
    uy = (a1 * (z3.real - z2.real) + a2 * (z1.real - z3.real) + a3 * (z2.real - z1.real)) / d
    center = complex(ux, uy)
    return Circle(center, abs(z1 - center))


def apply_to_circle(m: Mobius, obj: CircleOrLine) -> CircleOrLine:
    """Image of a circle or line under a Moebius map."""
    if isinstance(obj, Circle):
        if abs(m.c) < 1e-14:
            center = m(obj.center)
            return Circle(center, abs(m.a / m.d) * obj.radius)
        pole = -m.d / m.c
        if abs(pole - obj.center) <= 1e-14 * max(1.0, obj.radius):
            # pole at the center: image is the circle around m(infinity)
            return Circle(m.a / m.c, 1.0 / (abs(m.c) ** 2 * obj.radius))
        off = abs(pole - obj.center) - obj.radius
        if abs(off) <= 1e-12 * max(1.0, obj.radius):
            # passes through the pole: image is a line through two points
            base = cmath.phase(pole - obj.center)
            p1 = m(obj.point_at(base + math.pi / 2))
            p2 = m(obj.point_at(base + math.pi))
            return Line(p1, (p2 - p1) / abs(p2 - p1))
        # the point inversive-symmetric to the pole maps to the image center
        zc = obj.center + obj.radius ** 2 / (pole - obj.center).conjugate()
        center = m(zc)
        edge = m(obj.point_at(cmath.phase(pole - obj.center) + math.pi))
        return Circle(center, abs(edge - center))
    # line
    if abs(m.c) < 1e-14:
        p1, p2 = m(obj.point_at(0.0)), m(obj.point_at(1.0))
        return Line(p1, (p2 - p1) / abs(p2 - p1))
    pole = -m.d / m.c
    s = ((pole - obj.point) / obj.direction).real
    dist = abs(pole - obj.point_at(s))
    if dist <= 1e-12 * max(1.0, abs(pole)):
        p1 = m(obj.point_at(s + 1.0))
        p2 = m(obj.point_at(s - 1.0))
        return Line(p1, (p2 - p1) / abs(p2 - p1))
    return _circle_through(m(obj.point_at(s)),
                           m(obj.point_at(s + max(1.0, 2.0 * dist))),
                           m(obj.point_at(s - max(1.0, 2.0 * dist))))


def classify_element(m: Mobius, tol: float = 1e-9) -> str:
    """'identity', 'parabolic', 'elliptic' or 'loxodromic' from tr^2 - 4."""
    if abs(m.b) <= tol and abs(m.c) <= tol and abs(m.a - m.d) <= tol:
        return "identity"
    beta = m.trace * m.trace - 4.0
    if abs(beta) <= tol:
        return "parabolic"
    if abs(beta.imag) <= tol and -4.0 < beta.real < 0.0:
        return "elliptic"
    return "loxodromic"


@dataclass(frozen=True)
class IsometricDisks:
    d1: Circle  # |z - a/c| <= 1/|c|
    d2: Circle  # |z + d/c| <= 1/|c|
    disjoint: bool  # |a + d| >= 2


def isometric_disks(m: Mobius) -> IsometricDisks:
    """The paired isometric disks of a map not fixing infinity."""
    if abs(m.c) < 1e-14:
        raise InfinityFixed("isometric disks undefined for c = 0")
    r = 1.0 / abs(m.c)
    return IsometricDisks(Circle(m.a / m.c, r), Circle(-m.d / m.c, r),
                          abs(m.trace) >= 2.0)


@dataclass(frozen=True)
class HolonomyData:
    t: float       # trace = -2 + i t
    tau: float     # translation length, >= 0
    theta: float   # holonomy angle


def holonomy(t: float) -> HolonomyData:
    """Translation length and holonomy of an element of trace -2 + i t.

    Both come from asinh((i/2) sqrt(t (4i + t))); the square-root branch is
    fixed by tau >= 0, which also pins theta -> -pi for large t.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    if t == 0:
        return HolonomyData(0.0, 0.0, 0.0)
    u = 0.5j * cmath.sqrt(t * (4j + t))
    if u.real < 0:
        u = -u
    z = cmath.asinh(u)
    return HolonomyData(t, 2.0 * z.real, 2.0 * z.imag)


def mobius_from_word(word: FareyWord, mu: complex) -> Mobius:
    """Numeric matrix of a word: substitute the generators and multiply."""
    x = Mobius.translation(1.0)
    y = Mobius.parabolic_y(mu)
    xi, yi = x.inverse(), y.inverse()
    table = {("x", 1): x, ("x", -1): xi, ("y", 1): y, ("y", -1): yi}
    m = Mobius.identity()
    for letter in word.letters:
        m = m @ table[(letter.base, letter.sign)]
    return m


def farey_mobius(slope: Slope, mu: complex) -> Mobius:
    """h_{p/q}(mu), evaluated from the exact matrix entries."""
    from .polynomials import farey_matrix
    from .words import farey_word

    m = farey_matrix(farey_word(slope))
    return Mobius(m.a.eval(mu), m.b.eval(mu), m.c.eval(mu), m.d.eval(mu))


def normalize_two_parabolics(A: Mobius, B: Mobius,
                             tol: float = 1e-9) -> tuple[complex, Mobius]:
    """Conjugate a two-parabolic pair to the standard (X, Y_nu) form.

    Returns (nu, h) with h A h^-1 = z + 1 and h B h^-1 = z / (nu z + 1);
    nu equals tr(AB) - 2 for the trace-+2 representatives.
    """
    def normalize_sign(m: Mobius) -> Mobius:
        if (m.trace).real < 0:
            return Mobius(-m.a, -m.b, -m.c, -m.d)
        return m

    A = normalize_sign(A)
    B = normalize_sign(B)
    for m, name in ((A, "A"), (B, "B")):
        beta = m.trace * m.trace - 4.0
        if abs(beta) > tol:
            raise ValueError(f"{name} is not parabolic (tr^2 - 4 = {beta:.3g})")
        if classify_element(m, tol) == "identity":
            raise ValueError(f"{name} is the identity")
    za = A.fixed_point_parabolic()
    zb = B.fixed_point_parabolic()
    if za is None and zb is None:
        raise CommutingGenerators("both generators fix infinity")
    if za is not None and zb is not None and abs(za - zb) < tol:
        raise CommutingGenerators("coinciding parabolic fixed points")
    # M0: za -> infinity, zb -> 0
    if za is None:
        m0 = Mobius(1, -zb, 0, 1)
    elif zb is None:
        m0 = Mobius(0, 1, 1, -za)
    else:
        m0 = Mobius(1, -zb, 1, -za)
    a1 = m0 @ A @ m0.inverse()
    a1 = normalize_sign(a1)
    beta = a1.b / a1.a  # a1 is z -> z + beta
    if abs(beta) < tol:
        raise CommutingGenerators("degenerate translation length")
    s = 1.0 / cmath.sqrt(beta)
    conj = Mobius(s, 0, 0, 1.0 / s) @ m0
    b1 = normalize_sign(conj @ B @ conj.inverse())
    nu = b1.c / b1.a
    return nu, conj
