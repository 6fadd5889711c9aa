"""Complex root finding for the trace polynomials.

`solve_level` finds all roots of poly - w by Aberth-Ehrlich simultaneous
iteration with a deterministic start (points on the Cauchy-bound circle,
phases offset by the golden angle), merges multiple-root clusters, then
polishes with multiplicity-aware Newton steps.  Residuals above tolerance
trigger one high-precision polish pass in mpmath before giving up.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import mpmath

from .polynomials import IntPoly, divexact, poly_gcd, trace_polys
from .words import Slope

_GOLDEN_ANGLE = 2.0 * math.pi * (1.0 - 1.0 / ((1.0 + math.sqrt(5.0)) / 2.0))
_CLUSTER_EPS = 1e-7


class NonConvergence(RuntimeError):
    """Simultaneous iteration failed to settle within the iteration budget."""


@dataclass
class RootSet:
    """All roots of poly - w, with per-root residuals |poly(root) - w|."""

    source: str
    level: complex
    roots: list[complex]
    residuals: list[float]
    multiplicities: list[int] = field(default_factory=list)

    @property
    def count(self) -> int:
        return sum(self.multiplicities) if self.multiplicities else len(self.roots)

    def to_json(self) -> dict:
        return {
            "source": self.source,
            "level": [self.level.real, self.level.imag],
            "roots": [[z.real, z.imag] for z in self.roots],
            "residuals": self.residuals,
            "multiplicities": self.multiplicities,
        }

    def to_csv_rows(self) -> list[tuple[float, float]]:
        return [(z.real, z.imag) for z in self.roots]


@dataclass(frozen=True)
class CuspPoint:
    """Endpoint of the upper pleating ray: P(mu) = -2, Im(mu) >= 0."""

    slope: Slope
    mu: complex
    residual: float

    def to_json(self) -> dict:
        return {
            "slope": str(self.slope),
            "mu": [self.mu.real, self.mu.imag],
            "residual": self.residual,
        }


def _horner_pair(coeffs: list[complex], z: complex) -> tuple[complex, complex]:
    """Value and derivative in one Horner pass (coefficients descending)."""
    v = coeffs[0]
    d = 0j
    for c in coeffs[1:]:
        d = d * z + v
        v = v * z + c
    return v, d


def _aberth(coeffs_desc: list[complex], max_iter: int = 400) -> list[complex]:
    n = len(coeffs_desc) - 1
    lead = coeffs_desc[0]
    # Cauchy bound, but never far beyond the Fujiwara root bound: a level
    # shift with a huge constant term would otherwise start the iteration
    # so far out that Horner overflows
    cauchy = 1.0 + max(abs(c / lead) for c in coeffs_desc[1:]) if n else 1.0
    fujiwara = 2.0 * max(abs(coeffs_desc[k] / lead) ** (1.0 / k)
                         for k in range(1, n + 1))
    radius = min(cauchy, 2.0 * fujiwara)
    zs = [
        radius * cmath.exp(1j * (2.0 * math.pi * k / n + _GOLDEN_ANGLE))
        for k in range(n)
    ]
    abs_desc = [abs(c) for c in coeffs_desc]
    moved = math.inf
    for _ in range(max_iter):
        moved = 0.0
        for k in range(n):
            z = zs[k]
            v, d = _horner_pair(coeffs_desc, z)
            # backward-error floor: below this, doubles cannot tell v from 0
            az = abs(z)
            errb = abs_desc[0]
            for a in abs_desc[1:]:
                errb = errb * az + a
            if abs(v) <= 4e-16 * (2 * n + 1) * errb:
                continue
            newton = v / d if d != 0 else v
            s = 0j
            for j in range(n):
                if j != k:
                    dz = z - zs[j]
                    if dz != 0:
                        s += 1.0 / dz
            denom = 1.0 - newton * s
            step = newton / denom if denom != 0 else newton
            zs[k] = z - step
            moved = max(moved, abs(step) / max(1.0, abs(z)))
        if moved < 1e-14:
            return zs
    if moved < 1e-10:
        return zs
    raise NonConvergence(f"Aberth iteration stalled (last move {moved:.2e})")


def _merge_clusters(zs: list[complex]) -> list[tuple[complex, int]]:
    """Union points closer than the cluster tolerance; report (mean, size)."""
    items = [(z, 1) for z in zs]
    changed = True
    while changed and len(items) > 1:
        changed = False
        for i in range(len(items)):
            for j in range(i + 1, len(items)):
                zi, mi = items[i]
                zj, mj = items[j]
                if abs(zi - zj) < _CLUSTER_EPS:
                    merged = ((zi * mi + zj * mj) / (mi + mj), mi + mj)
                    items = [it for k, it in enumerate(items) if k not in (i, j)]
                    items.append(merged)
                    changed = True
                    break
            if changed:
                break
    items.sort(key=lambda t: (round(t[0].real, 9), round(t[0].imag, 9)))
    return items


def squarefree_decomposition(p: IntPoly) -> list[tuple[IntPoly, int]]:
    """Yun's algorithm: primitive squarefree factors with their multiplicities.

    Returns [(f_i, m_i)] with the roots of p being exactly the roots of the
    f_i, each with multiplicity m_i; constants are dropped.
    """
    a = p.primitive()
    if a.degree < 1:
        return []
    g = poly_gcd(a, a.derivative())
    if g.degree < 1:
        return [(a, 1)]
    out = []
    c = divexact(a, g)
    d = divexact(a.derivative(), g) - c.derivative()
    i = 1
    while c.degree > 0:
        f = poly_gcd(c, d)
        if f.degree > 0:
            out.append((f, i))
        c = divexact(c, f)
        d = divexact(d, f) - c.derivative()
        i += 1
    return out


def _polish(coeffs_desc: list[complex], z: complex, mult: int) -> complex:
    """Multiplicity-m Newton; quadratic near an m-fold root."""
    for _ in range(60):
        v, d = _horner_pair(coeffs_desc, z)
        if d == 0 or v == 0:
            return z
        step = mult * v / d
        z -= step
        if abs(step) < 1e-16 * max(1.0, abs(z)):
            return z
    return z


def _polish_mp(coeffs_int: list, w: complex, z: complex, mult: int) -> complex:
    with mpmath.workdps(50):
        zz = mpmath.mpc(z)
        ww = mpmath.mpc(w)
        for _ in range(80):
            v = mpmath.mpc(0)
            d = mpmath.mpc(0)
            for c in coeffs_int:
                d = d * zz + v
                v = v * zz + c
            v -= ww
            if v == 0 or d == 0:
                break
            step = mult * v / d
            zz -= step
            if abs(step) < mpmath.mpf(10) ** -40 * max(1, abs(zz)):
                break
        return complex(zz)


def _roots_of_squarefree(f: IntPoly) -> list[complex]:
    coeffs_desc = [complex(c) for c in reversed(f.coeffs)]
    if f.degree == 1:
        raw = [-coeffs_desc[1] / coeffs_desc[0]]
    else:
        raw = _aberth(coeffs_desc)
    return [_polish(coeffs_desc, z, 1) for z in raw]


def solve_level(poly: IntPoly, w: complex = 0j, tol: float = 1e-10,
                source: str = "") -> RootSet:
    """All complex roots of poly - w, deterministic, residual-checked.

    Integer levels w keep the shifted polynomial in Z[x]; there the
    multiplicity structure comes from an exact squarefree decomposition and
    only squarefree (simple-root) factors reach the numeric solver.  At
    non-integer levels multiple roots are non-generic and nearby
    approximations merge at the fixed cluster tolerance instead.
    """
    if poly.degree < 1:
        raise ValueError("solve_level needs degree >= 1")
    w = complex(w)
    exact_shift = w.imag == 0.0 and float(w.real).is_integer()

    found: list[tuple[complex, int, IntPoly]] = []
    if exact_shift:
        shifted = poly - IntPoly.const(int(w.real))
        total = 0
        for f, mult in squarefree_decomposition(shifted):
            for z in _roots_of_squarefree(f):
                found.append((z, mult, f))
                total += mult
        if total != poly.degree:  # content surprise; fall back to generic path
            found = []
    if not found:
        coeffs_desc = [complex(c) for c in reversed(poly.coeffs)]
        coeffs_desc[-1] -= w
        if poly.degree == 1:
            raw = [-coeffs_desc[1] / coeffs_desc[0]]
        else:
            raw = _aberth(coeffs_desc)
        raw = [_polish(coeffs_desc, z, 1) for z in raw]
        found = [(z, m, poly) for z, m in _merge_clusters(raw)]

    found.sort(key=lambda t: (round(t[0].real, 9), round(t[0].imag, 9)))
    roots: list[complex] = []
    residuals: list[float] = []
    mults: list[int] = []
    coeffs_int_desc = list(reversed(poly.coeffs))
    for z, m, host in found:
        res = abs(poly.eval(z) - w)
        if res > tol:
            if host is poly:
                z = _polish_mp(coeffs_int_desc, w, z, m)
            else:
                z = _polish_mp(list(reversed(host.coeffs)), 0j, z, 1)
            res = abs(poly.eval(z) - w)
        roots.append(z)
        residuals.append(res)
        mults.append(m)
    return RootSet(source=source, level=w, roots=roots,
                   residuals=residuals, multiplicities=mults)


def cusp_point(slope: Slope) -> CuspPoint:
    """Endpoint of the traced upper pleating ray (root of P + 2 it lands on)."""
    from .rays import trace_ray

    ray = trace_ray(slope)
    return ray.cusp


def ray_extension_spectrum(slope: Slope, r_max: int, include_case1: bool = False,
                           tol: float = 1e-10) -> list[dict]:
    """Allowed Farey traces -2*cos(2*pi/r) on the ray extension, with mu roots.

    For each r in 3..r_max returns the trace level and all mu with
    P(mu) = level.  With include_case1, the complementary positive levels
    2 + 4*cos(pi/r)**2 are reported as well.
    """
    if r_max < 3:
        raise ValueError("r_max must be >= 3")
    pair = trace_polys(slope)
    out = []
    for r in range(3, r_max + 1):
        level = -2.0 * math.cos(2.0 * math.pi / r)
        rs = solve_level(pair.P, level, tol=tol,
                         source=f"P_{slope} = -2cos(2pi/{r})")
        entry = {"r": r, "trace": level, "mus": rs}
        if include_case1:
            entry["case1_trace"] = 2.0 + 4.0 * math.cos(math.pi / r) ** 2
        out.append(entry)
    return out
