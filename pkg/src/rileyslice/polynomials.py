"""Exact integer polynomial arithmetic and Farey trace polynomials.

Coefficients are arbitrary-precision Python ints, ascending by degree, with
no trailing zeros (zero polynomial = empty coefficient tuple).  Substituting
the generator matrices

    X = [[1, 1], [0, 1]],   Y = [[1, 0], [mu, 1]]

into a Farey word gives a 2x2 unimodular matrix of such polynomials; its
trace P has degree q, and Q = P - 2 coincides with the lower-left entry
(the Fricke identity, checked exactly here).  Numeric evaluation uses a
compensated Horner scheme, with an mpmath fallback once coefficients leave
the exactly-representable double range.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterable

import mpmath

from .words import FareyWord, Letter, Slope, farey_word

# Largest coefficient magnitude evaluated in plain doubles; beyond this the
# int -> float downcast itself loses bits and evaluation switches to mpmath.
_EXACT_DOUBLE_LIMIT = 1 << 52

_SPLITTER = 134217729.0  # 2**27 + 1, Veltkamp splitting constant


class EvalOverflow(ArithmeticError):
    """Intermediate evaluation magnitude left the representable range."""


# ---------------------------------------------------------------------------
# error-free float transformations (real), lifted componentwise to complex

def _two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _two_prod(a: float, b: float) -> tuple[float, float]:
    p = a * b
    ca = _SPLITTER * a
    ah = ca - (ca - a)
    al = a - ah
    cb = _SPLITTER * b
    bh = cb - (cb - b)
    bl = b - bh
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _two_sum_c(a: complex, b: complex) -> tuple[complex, complex]:
    sr, er = _two_sum(a.real, b.real)
    si, ei = _two_sum(a.imag, b.imag)
    return complex(sr, si), complex(er, ei)


def _two_prod_c(a: complex, b: complex) -> tuple[complex, complex]:
    p1, e1 = _two_prod(a.real, b.real)
    p2, e2 = _two_prod(a.imag, b.imag)
    p3, e3 = _two_prod(a.real, b.imag)
    p4, e4 = _two_prod(a.imag, b.real)
    rr, er = _two_sum(p1, -p2)
    ri, ei = _two_sum(p3, p4)
    return complex(rr, ri), complex(er + e1 - e2, ei + e3 + e4)


@dataclass(frozen=True)
class IntPoly:
    """Integer-coefficient polynomial, coefficients ascending by degree."""

    coeffs: tuple[int, ...]

    @staticmethod
    def of(coeffs: Iterable[int]) -> "IntPoly":
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        return IntPoly(tuple(int(c) for c in cs))

    @staticmethod
    def zero() -> "IntPoly":
        return IntPoly(())

    @staticmethod
    def const(c: int) -> "IntPoly":
        return IntPoly.of([c])

    @staticmethod
    def x() -> "IntPoly":
        return IntPoly((0, 1))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    @property
    def lead(self) -> int:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __add__(self, other: "IntPoly") -> "IntPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPoly.of(self.coeff(k) + other.coeff(k) for k in range(n))

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPoly.of(self.coeff(k) - other.coeff(k) for k in range(n))

    def __neg__(self) -> "IntPoly":
        return IntPoly(tuple(-c for c in self.coeffs))

    def __mul__(self, other: "IntPoly") -> "IntPoly":
        if self.is_zero or other.is_zero:
            return IntPoly.zero()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, ci in enumerate(self.coeffs):
            if ci:
                for j, cj in enumerate(other.coeffs):
                    out[i + j] += ci * cj
        return IntPoly(tuple(out))

    def scale(self, k: int) -> "IntPoly":
        if k == 0:
            return IntPoly.zero()
        return IntPoly(tuple(k * c for c in self.coeffs))

    def shift_up(self, m: int = 1) -> "IntPoly":
        """Multiply by x**m."""
        if self.is_zero:
            return self
        return IntPoly((0,) * m + self.coeffs)

    def shift_down(self, m: int) -> "IntPoly":
        """Exact division by x**m."""
        if any(self.coeff(k) for k in range(m)):
            raise ValueError("not divisible by x**m")
        return IntPoly(self.coeffs[m:])

    def derivative(self) -> "IntPoly":
        return IntPoly.of(k * c for k, c in enumerate(self.coeffs) if k >= 1)

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g

    def primitive(self) -> "IntPoly":
        """Primitive part with positive leading coefficient."""
        if self.is_zero:
            return self
        g = self.content()
        if self.lead < 0:
            g = -g
        return IntPoly(tuple(c // g for c in self.coeffs))

    def root_multiplicity_at_zero(self) -> int:
        m = 0
        while m < len(self.coeffs) and self.coeffs[m] == 0:
            m += 1
        return m

    # -- numeric evaluation -------------------------------------------------

    def eval(self, z: complex) -> complex:
        """Compensated-Horner value at z; exact-path fallback on big coefficients."""
        if self.is_zero:
            return 0j
        if max(abs(c) for c in self.coeffs) > _EXACT_DOUBLE_LIMIT:
            return self._eval_mp(z)
        try:
            return self._eval_compensated(z)
        except EvalOverflow:
            return self._eval_mp(z)

    def eval_with_derivative(self, z: complex) -> tuple[complex, complex]:
        return self.eval(z), self.derivative().eval(z)

    def _eval_compensated(self, z: complex) -> complex:
        z = complex(z)
        cs = self.coeffs
        r = complex(cs[-1])
        e = 0j
        for k in range(len(cs) - 2, -1, -1):
            p, ep = _two_prod_c(r, z)
            r, es = _two_sum_c(p, complex(cs[k]))
            e = e * z + (ep + es)
        out = r + e
        if out != out or abs(out.real) == float("inf") or abs(out.imag) == float("inf"):
            raise EvalOverflow(f"evaluation overflow at z={z!r}")
        return out

    def _eval_mp(self, z: complex) -> complex:
        prec = mpmath.mp.prec
        try:
            mpmath.mp.prec = max(prec, self.degree + max(abs(c) for c in self.coeffs).bit_length() + 64)
            zz = mpmath.mpc(z)
            acc = mpmath.mpc(0)
            for c in reversed(self.coeffs):
                acc = acc * zz + c
            return complex(acc)
        finally:
            mpmath.mp.prec = prec

    def eval_fast(self, z: complex) -> complex:
        """Plain double Horner, for hot loops where 1e-13 accuracy suffices."""
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    # -- serialization --------------------------------------------------------

    def to_json(self) -> list[str]:
        """Decimal coefficient strings, ascending degree."""
        return [str(c) for c in self.coeffs]

    @staticmethod
    def from_json(data: Iterable[str]) -> "IntPoly":
        return IntPoly.of(int(s) for s in data)

    def __str__(self):
        if self.is_zero:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                terms.append(str(c))
            else:
                head = "" if c == 1 else "-" if c == -1 else str(c) + "*"
                terms.append(f"{head}mu" + (f"^{k}" if k > 1 else ""))
        return " + ".join(terms).replace("+ -", "- ")


def divexact(num: IntPoly, den: IntPoly) -> IntPoly:
    """Exact polynomial division; raises ValueError on a nonzero remainder."""
    if den.is_zero:
        raise ZeroDivisionError("division by zero polynomial")
    rem = list(num.coeffs)
    dn = den.coeffs
    out = [0] * max(len(rem) - len(dn) + 1, 0)
    for k in range(len(rem) - len(dn), -1, -1):
        head = rem[k + len(dn) - 1]
        if head % dn[-1]:
            raise ValueError("non-exact polynomial division")
        q = head // dn[-1]
        out[k] = q
        if q:
            for j, d in enumerate(dn):
                rem[k + j] -= q * d
    if any(rem):
        raise ValueError("non-exact polynomial division")
    return IntPoly.of(out)


def poly_gcd(a: IntPoly, b: IntPoly) -> IntPoly:
    """Primitive gcd over the integers (positive leading coefficient)."""
    fa = [Fraction(c) for c in a.coeffs]
    fb = [Fraction(c) for c in b.coeffs]

    def trim(v):
        while v and v[-1] == 0:
            v.pop()
        return v

    fa, fb = trim(fa), trim(fb)
    while fb:
        # remainder of fa / fb
        r = fa[:]
        for k in range(len(r) - len(fb), -1, -1):
            q = r[k + len(fb) - 1] / fb[-1]
            if q:
                for j, d in enumerate(fb):
                    r[k + j] -= q * d
        fa, fb = fb, trim(r[: len(fb) - 1])
    if not fa:
        return IntPoly.zero()
    den = 1
    for c in fa:
        den = den * c.denominator // gcd(den, c.denominator)
    return IntPoly.of(int(c * den) for c in fa).primitive()


# ---------------------------------------------------------------------------
# 2x2 matrices of polynomials

@dataclass(frozen=True)
class PolyMatrix2:
    """2x2 matrix with IntPoly entries; group elements here have det = 1."""

    a: IntPoly
    b: IntPoly
    c: IntPoly
    d: IntPoly

    @staticmethod
    def identity() -> "PolyMatrix2":
        one, zero = IntPoly.const(1), IntPoly.zero()
        return PolyMatrix2(one, zero, zero, one)

    def det(self) -> IntPoly:
        return self.a * self.d - self.b * self.c

    def trace(self) -> IntPoly:
        return self.a + self.d

    def __matmul__(self, other: "PolyMatrix2") -> "PolyMatrix2":
        return PolyMatrix2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    # Right-multiplication by a generator letter touches only two entries and
    # costs O(degree): X shifts columns, Y adds a mu-shifted column.
    def apply_letter(self, letter: Letter) -> "PolyMatrix2":
        a, b, c, d = self.a, self.b, self.c, self.d
        if letter.base == "x":
            if letter.sign == 1:
                return PolyMatrix2(a, a + b, c, c + d)
            return PolyMatrix2(a, b - a, c, d - c)
        if letter.sign == 1:
            return PolyMatrix2(a + b.shift_up(), b, c + d.shift_up(), d)
        return PolyMatrix2(a - b.shift_up(), b, c - d.shift_up(), d)


@dataclass(frozen=True)
class FareyPolyPair:
    """Trace polynomial P of a Farey word and its shift Q = P - 2."""

    slope: Slope
    P: IntPoly
    Q: IntPoly


def generator_matrices() -> tuple[PolyMatrix2, PolyMatrix2]:
    """The parabolic generators X and Y (lower-left entry of Y is mu)."""
    one, zero, mu = IntPoly.const(1), IntPoly.zero(), IntPoly.x()
    return PolyMatrix2(one, one, zero, one), PolyMatrix2(one, zero, mu, one)


def word_matrix(letters: Iterable[Letter]) -> PolyMatrix2:
    """Exact matrix of an arbitrary letter sequence under x -> X, y -> Y."""
    m = PolyMatrix2.identity()
    for letter in letters:
        m = m.apply_letter(letter)
    return m


def farey_matrix(word: FareyWord) -> PolyMatrix2:
    return word_matrix(word.letters)


@lru_cache(maxsize=None)
def _trace_polys_cached(p: int, q: int) -> FareyPolyPair:
    slope = Slope(p, q)
    m = farey_matrix(farey_word(slope))
    P = m.trace()
    return FareyPolyPair(slope, P, P - IntPoly.const(2))


def trace_polys(slope: Slope) -> FareyPolyPair:
    """P = tr W(mu) (degree q) and Q = P - 2; exact, cached per slope."""
    return _trace_polys_cached(slope.p, slope.q)


def fricke_check(slope: Slope) -> bool:
    """Exact identity Q = a + d - 2 = c (lower-left matrix entry)."""
    m = farey_matrix(farey_word(slope))
    return m.trace() - IntPoly.const(2) == m.c


def superattractor_check(slope: Slope) -> bool:
    """Q'(0) = 0 exactly when q is even."""
    qpoly = trace_polys(slope).Q
    return (qpoly.coeff(1) == 0) == (slope.q % 2 == 0)


@dataclass(frozen=True)
class ConjectureReport:
    """Result of matching Q against the squared-factor shape.

    For odd q the candidate shape is sign * z * u(z)**2 with u(0) = 1; for
    even q = 2**n * r (r odd) it is z**(2*floor((n+1)/2)) * v(z)**2.  The
    report never asserts the shape; `matches` is informational.
    """

    slope: Slope
    q_parity: str
    matches: bool
    z_power: int
    expected_z_power: int
    sign: int
    core: IntPoly
    note: str = ""


def _try_square_root(r: IntPoly) -> IntPoly | None:
    """u with u**2 = r, via the squarefree part; None if r is not a square."""
    if r.is_zero or r.degree % 2 or r.lead < 0:
        return None
    if r.degree == 0:
        k = isqrt(r.coeffs[0])
        return IntPoly.const(k) if k * k == r.coeffs[0] else None
    u0 = divexact(r, poly_gcd(r, r.derivative())).primitive()
    t, rem = divmod(r.lead, u0.lead ** 2)
    if rem or t <= 0:
        return None
    k = isqrt(t)
    if k * k != t:
        return None
    u = u0.scale(k)
    return u if u * u == r else None


def factor_shape(slope: Slope) -> ConjectureReport:
    """Squarefree-decomposition check of Q against the conjectured shape."""
    q = slope.q
    Q = trace_polys(slope).Q
    m = Q.root_multiplicity_at_zero()
    if q % 2:
        expected_m = 1
        parity = "odd"
    else:
        n, r = 0, q
        while r % 2 == 0:
            n, r = n + 1, r // 2
        expected_m = 2 * ((n + 1) // 2)
        parity = "even"
    body = Q.shift_down(m)
    sign = 1 if body.coeffs[0] > 0 else -1
    root = _try_square_root(body.scale(sign))
    if root is None:
        return ConjectureReport(slope, parity, False, m, expected_m, sign,
                                IntPoly.zero(), "body is not sign * square")
    if parity == "odd":
        if root.coeff(0) == -1:
            root = -root
        ok = m == expected_m and root.coeff(0) == 1
        note = "" if ok else "z-power or u(0) != 1 off conjecture"
    else:
        if sign != 1:
            return ConjectureReport(slope, parity, False, m, expected_m, sign,
                                    root, "negative sign in even-q shape")
        if root.lead < 0:
            root = -root
        ok = m == expected_m
        note = "" if ok else "z-power off conjecture"
    return ConjectureReport(slope, parity, ok, m, expected_m, sign, root, note)
