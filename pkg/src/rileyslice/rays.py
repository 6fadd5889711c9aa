"""Pleating rays: branch continuation of the trace polynomials.

The upper ray of slope p/q is the branch of P^{-1}((-inf, -2]) with
asymptotic direction pi*(q-p)/q; its endpoint (P = -2) is the cusp point.
Tracing runs a linear-in-w predictor with a Newton corrector and adaptive
step halving.  The half-plane membership test continues the same branch
along a w-plane path held inside {Re w < -2}, detouring around critical
values of P, and certifies a point when the continuation lands on it.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache

from .polynomials import trace_polys
from .roots import CuspPoint, _horner_pair, solve_level
from .words import Slope

BOUNDARY_MARGIN = 1e-9       # open-condition margin on Re P < -2
CRITICAL_DETOUR_RADIUS = 1e-3
LANDING_TOL = 1e-8
MIN_STEP = 1e-12


class ContinuationStalled(RuntimeError):
    """Adaptive step underflow while tracking a branch."""


class ContinuationFailed(RuntimeError):
    """No path perturbation reached the target level."""


class CuspMismatch(RuntimeError):
    """Ray endpoint failed the P = -2 residual test."""


class BoundaryIndeterminate(RuntimeError):
    """Re P(mu) is within margin of -2; the open test cannot decide."""


class RayDirectionError(RuntimeError):
    """Leading-coefficient sign breaks the canonical direction rule."""


@dataclass(frozen=True)
class AsymptoticDirections:
    """The q admissible ray directions at infinity, canonical one marked."""

    slope: Slope
    angles: tuple[float, ...]
    canonical: float


@dataclass
class Ray:
    """Discretized upper pleating ray: samples (t, mu) with P(mu) = t."""

    slope: Slope
    branch: str
    samples: list[tuple[float, complex]]
    cusp: CuspPoint

    def to_csv_rows(self) -> list[tuple[float, float, float]]:
        return [(t, z.real, z.imag) for t, z in self.samples]

    def mu_at(self, t: float) -> complex:
        for tt, z in self.samples:
            if abs(tt - t) < 1e-12:
                return z
        raise KeyError(f"no sample at t={t}")


@dataclass
class NeighbourhoodResult:
    """Outcome of the certified half-plane test for one slope."""

    slope: Slope
    mu: complex
    inside: bool
    continuation_path: list[complex] = field(default_factory=list)
    landing: complex | None = None
    branch: str = "upper"
    value: complex = 0j  # P(mu)

    def to_json(self) -> dict:
        return {
            "slope": str(self.slope),
            "mu": [self.mu.real, self.mu.imag],
            "inside": self.inside,
            "branch": self.branch,
            "value": [self.value.real, self.value.imag],
            "landing": None if self.landing is None
            else [self.landing.real, self.landing.imag],
            "continuation_path": [[w.real, w.imag] for w in self.continuation_path],
        }


# ---------------------------------------------------------------------------
# per-slope numeric data

@dataclass(frozen=True)
class _SlopeNumerics:
    slope: Slope
    p_desc: tuple[complex, ...]    # P coefficients, descending
    abs_desc: tuple[float, ...]    # |coefficients|, for evaluation noise bounds
    lead: int                      # leading coefficient of Q (and P)
    critical_values: tuple[complex, ...]


@lru_cache(maxsize=None)
def _numerics(p: int, q: int) -> _SlopeNumerics:
    slope = Slope(p, q)
    pair = trace_polys(slope)
    p_desc = tuple(complex(c) for c in reversed(pair.P.coeffs))
    abs_desc = tuple(abs(c) for c in p_desc)
    if q == 1:
        crit = ()
    else:
        crit_points = solve_level(pair.P.derivative(), 0).roots
        crit = tuple(pair.P.eval(z) for z in crit_points)
    return _SlopeNumerics(slope, p_desc, abs_desc, pair.Q.lead, crit)


def _eval_noise(num: _SlopeNumerics, z: complex) -> float:
    """Double-Horner evaluation noise floor of P at z (cancellation bound)."""
    az = abs(z)
    acc = num.abs_desc[0]
    for a in num.abs_desc[1:]:
        acc = acc * az + a
    return 4.4e-16 * acc


def _eval_pd(num: _SlopeNumerics, z: complex) -> tuple[complex, complex]:
    v = num.p_desc[0]
    d = 0j
    for c in num.p_desc[1:]:
        d = d * z + v
        v = v * z + c
    return v, d


def asymptotic_directions(slope: Slope) -> AsymptoticDirections:
    """Solutions of lead(Q) e^{i q theta} < 0 in (-pi, pi]; canonical marked."""
    num = _numerics(slope.p, slope.q)
    q = slope.q
    base = math.pi - (0.0 if num.lead > 0 else math.pi)
    angles = []
    for k in range(q):
        theta = (base + 2.0 * math.pi * k) / q
        theta = math.remainder(theta, 2.0 * math.pi)
        if theta <= -math.pi:
            theta += 2.0 * math.pi
        angles.append(theta)
    angles.sort()
    canonical = math.pi * (q - slope.p) / q
    if min(abs(math.remainder(canonical - a, 2.0 * math.pi)) for a in angles) > 1e-9:
        raise RayDirectionError(
            f"canonical direction pi(q-p)/q inadmissible for {slope} "
            f"(lead = {num.lead}); sign pattern off the desk-scale rule")
    return AsymptoticDirections(slope, tuple(angles), canonical)


# ---------------------------------------------------------------------------
# branch continuation

def _newton_to_level(num: _SlopeNumerics, z: complex, w: complex,
                     guard: float = math.inf) -> complex | None:
    """Newton-correct z onto P(z) = w; None when diverging or out of guard.

    Acceptance is noise-aware: heavy cancellation makes plain Horner unable
    to resolve residuals below its error bound, so convergence is declared
    at that floor.  Callers that need tighter residuals re-polish with
    compensated evaluation afterwards.
    """
    z0 = z
    tol = max(4e-11 * (1.0 + abs(w)), 2.0 * _eval_noise(num, z))
    for _ in range(40):
        v, d = _eval_pd(num, z)
        if abs(v - w) <= tol:
            return z
        if d == 0:
            return None
        z -= (v - w) / d
        if abs(z - z0) > guard:
            return None
    v, _ = _eval_pd(num, z)
    if abs(v - w) <= 8.0 * tol:
        return z
    return None


def _continue_segment(num: _SlopeNumerics, z: complex, w_from: complex,
                      w_to: complex) -> complex:
    """Track the branch along [w_from, w_to]; adaptive halving on failure."""
    w = w_from
    remaining = w_to - w_from
    frac = 1.0
    while abs(w - w_to) > 0:
        dw = (w_to - w) * frac
        if abs(dw) < MIN_STEP * max(1.0, abs(remaining)):
            raise ContinuationStalled(
                f"step underflow near w={w:.6g} for slope {num.slope}")
        _, d = _eval_pd(num, z)
        predictor = z + dw / d if d != 0 else z
        # corrector may wander at most ~10x the predicted local step
        guard = 10.0 * (abs(dw / d) if d != 0 else abs(dw)) + 1e-12
        corrected = _newton_to_level(num, predictor, w + dw, guard)
        if corrected is None:
            frac *= 0.5
            continue
        z = corrected
        w = w + dw
        frac = min(1.0, frac * 2.0)
    return z


def _detour_waypoints(num: _SlopeNumerics, w_from: complex,
                      w_to: complex) -> list[complex]:
    """Segment waypoints with small arcs around nearby critical values."""
    seg = w_to - w_from
    length = abs(seg)
    if length == 0:
        return [w_from]
    r = CRITICAL_DETOUR_RADIUS
    events = []
    for cv in num.critical_values:
        s = ((cv - w_from).real * seg.real + (cv - w_from).imag * seg.imag) / (length * length)
        if s <= 0.0 or s >= 1.0:
            continue
        foot = w_from + s * seg
        if abs(cv - foot) >= r:
            continue
        if abs(cv - w_from) < 2 * r or abs(cv - w_to) < 2 * r:
            continue  # target or base sits next to the branch point
        events.append((s, cv))
    events.sort(key=lambda e: e[0])
    pts = [w_from]
    for s, cv in events:
        half = math.sqrt(max(r * r - abs(cv - (w_from + s * seg)) ** 2, 0.0))
        ds = half / length
        w_in = w_from + max(s - 2 * ds - r / length, 0.0) * seg
        w_out = w_from + min(s + 2 * ds + r / length, 1.0) * seg
        a_in = cmath.phase(w_in - cv)
        a_out = cmath.phase(w_out - cv)
        # two arc choices; walk the side whose midpoint has the smaller Re
        d_ccw = (a_out - a_in) % (2.0 * math.pi)
        mid_ccw = cv + 1.5 * r * cmath.exp(1j * (a_in + d_ccw / 2.0))
        mid_cw = cv + 1.5 * r * cmath.exp(1j * (a_in - (2.0 * math.pi - d_ccw) / 2.0))
        if mid_ccw.real <= mid_cw.real:
            sweep, steps = d_ccw, max(3, int(d_ccw / 0.4) + 1)
        else:
            sweep, steps = -(2.0 * math.pi - d_ccw), max(3, int((2.0 * math.pi - d_ccw) / 0.4) + 1)
        pts.append(w_in)
        for k in range(1, steps):
            pts.append(cv + 1.5 * r * cmath.exp(1j * (a_in + sweep * k / steps)))
        pts.append(w_out)
    pts.append(w_to)
    return pts


def _split_leg(w_a: complex, w_b: complex, out: list[complex], depth: int = 0) -> None:
    """Waypoints after w_a along [w_a, w_b], spaced relative to |w + 2|."""
    h = 0.4 * max(min(abs(w_a + 2.0), abs(w_b + 2.0)), 0.05)
    if abs(w_b - w_a) <= h or depth > 48:
        out.append(w_b)
        return
    mid = 0.5 * (w_a + w_b)
    _split_leg(w_a, mid, out, depth + 1)
    _split_leg(mid, w_b, out, depth + 1)


def _continue_path(num: _SlopeNumerics, z: complex, waypoints: list[complex]) -> complex:
    for w_a, w_b in zip(waypoints, waypoints[1:]):
        subs: list[complex] = []
        _split_leg(w_a, w_b, subs)
        w_prev = w_a
        for w_next in subs:
            z = _continue_segment(num, z, w_prev, w_next)
            w_prev = w_next
    return z


def _polish_compensated(num: _SlopeNumerics, pair, z: complex, w: complex) -> complex:
    """Drive |P(z) - w| to compensated-evaluation accuracy."""
    for _ in range(6):
        v = pair.P.eval(z) - w
        if abs(v) <= 1e-13 * (1.0 + abs(w)):
            break
        _, d = _eval_pd(num, z)
        if d == 0:
            break
        z -= v / d
    return z


# ---------------------------------------------------------------------------
# ray tracing

def _seed_at(num: _SlopeNumerics, t0: float) -> complex | None:
    """Root of P = t0 in the canonical angular sector, or None if ambiguous."""
    slope = num.slope
    q = slope.q
    theta = math.pi * (q - slope.p) / q
    rs = solve_level(trace_polys(slope).P, t0)
    scored = sorted(
        ((abs(math.remainder(cmath.phase(r) - theta, 2.0 * math.pi)), r)
         for r in rs.roots
         if math.isfinite(r.real) and math.isfinite(r.imag)),
        key=lambda item: (item[0], item[1].real, item[1].imag))
    if len(scored) < rs.count or not scored:
        return None
    sector = 2.0 * math.pi / q
    if scored[0][0] > 0.45 * sector:
        return None
    if len(scored) > 1 and scored[1][0] < scored[0][0] + 0.15 * sector:
        return None
    return scored[0][1]


@lru_cache(maxsize=None)
def _deep_anchor(p: int, q: int) -> tuple[float, complex]:
    """A level t0 and branch point mu0 deep enough for sector seeding.

    The root shifts of P = t0 away from the asymptotic directions scale with
    the Fujiwara bound of P, so the anchor radius starts at a few times that
    bound and deepens geometrically until exactly one root sits in the
    canonical sector.
    """
    num = _numerics(p, q)
    asymptotic_directions(Slope(p, q))  # direction sanity, raises on failure
    coeffs = trace_polys(Slope(p, q)).P.coeffs
    lead = abs(coeffs[-1])
    fuji = max(abs(coeffs[k] / lead) ** (1.0 / (q - k)) for k in range(q))
    r_target = min(max(8.0, 4.0 * fuji), 10.0 ** (60.0 / q))
    t0 = -2.0 - lead * r_target ** q
    for _ in range(8):
        z = _seed_at(num, t0)
        if z is not None:
            return t0, z
        if abs(t0) > 1e90:
            break
        t0 = -2.0 - 16.0 * (abs(t0) - 2.0)
    raise ContinuationStalled(f"no trustworthy deep seed for slope {p}/{q}")


def trace_ray(slope: Slope, t_start: float = -50.0, steps: int = 200) -> Ray:
    """Trace the upper ray from t_start up to the cusp at P = -2."""
    if t_start > -4.0:
        raise ValueError("t_start must be <= -4")
    if steps < 2:
        raise ValueError("steps must be >= 2")
    num = _numerics(slope.p, slope.q)
    t0, z0 = _deep_anchor(slope.p, slope.q)
    ts = [t_start + (-2.0 - t_start) * k / steps for k in range(steps + 1)]
    ts[-1] = -2.0
    samples: list[tuple[float, complex]] = []
    if t_start < t0:
        z0 = _continue_path(num, z0, [complex(t0), complex(t_start)])
        t0 = t_start
    z = _continue_path(num, z0, [complex(t0), complex(ts[0])])
    pair = trace_polys(slope)
    prev_t = ts[0]
    for t in ts:
        if t != prev_t:
            z = _continue_path(num, z, [complex(prev_t), complex(t)])
        z = _polish_compensated(num, pair, z, complex(t))
        samples.append((t, z))
        prev_t = t
    cusp_mu = samples[-1][1]
    residual = abs(pair.P.eval(cusp_mu) + 2.0)
    if residual > 1e-10:
        raise CuspMismatch(f"cusp residual {residual:.2e} for slope {slope}")
    if cusp_mu.imag < 0.0:
        cusp_mu = cusp_mu.conjugate()
    cusp = CuspPoint(slope, cusp_mu, residual)
    return Ray(slope=slope, branch="upper", samples=samples, cusp=cusp)


@lru_cache(maxsize=None)
def _base_ray(p: int, q: int) -> Ray:
    return trace_ray(Slope(p, q))


def _base_point(num: _SlopeNumerics) -> tuple[complex, complex]:
    """(w0, mu0) on the traced ray, used as continuation base."""
    ray = _base_ray(num.slope.p, num.slope.q)
    t, z = ray.samples[0]
    return complex(t), z


# ---------------------------------------------------------------------------
# certified neighbourhood membership

def in_neighbourhood(slope: Slope, mu: complex,
                     landing_tol: float = LANDING_TOL) -> NeighbourhoodResult:
    """Certify mu inside the half-plane preimage component of the ray.

    True iff Re P(mu) < -2 and the ray branch, continued along a w-plane
    path inside that half-plane, lands on mu (or, for the conjugate lower
    component, on conj(mu)).
    """
    mu = complex(mu)
    num = _numerics(slope.p, slope.q)
    pair = trace_polys(slope)
    w = pair.P.eval(mu)
    if abs(w.real + 2.0) < BOUNDARY_MARGIN:
        raise BoundaryIndeterminate(
            f"Re P(mu) within {BOUNDARY_MARGIN} of -2 for slope {slope}")
    result = NeighbourhoodResult(slope=slope, mu=mu, inside=False, value=w)
    if w.real > -2.0:
        return result
    w0, z0 = _base_point(num)
    candidates = [("upper", mu, w)]
    if abs(mu.imag) > 0.0:
        candidates.append(("lower", mu.conjugate(), w.conjugate()))
    stalled = 0
    for branch, target, w_target in candidates:
        waypoints = _detour_waypoints(num, w0, w_target)
        try:
            landing = _continue_path(num, z0, waypoints)
        except ContinuationStalled:
            stalled += 1
            continue
        if abs(landing - target) <= landing_tol * (1.0 + abs(target)):
            inside_landing = landing if branch == "upper" else landing.conjugate()
            return NeighbourhoodResult(slope=slope, mu=mu, inside=True,
                                       continuation_path=waypoints,
                                       landing=inside_landing, branch=branch,
                                       value=w)
    if stalled == len(candidates):
        raise ContinuationFailed(
            f"all continuation paths stalled for slope {slope} at mu={mu:.6g}")
    return result


def trace_level_curve(slope: Slope, curve, steps: int = 200) -> list[complex]:
    """Preimage polyline of a w-plane path under the canonical ray branch.

    `curve` is a callable on [0, 1] or a sequence of complex waypoints.  The
    branch is seeded on the traced ray and continued to curve start first.
    """
    num = _numerics(slope.p, slope.q)
    if callable(curve):
        ws = [complex(curve(k / steps)) for k in range(steps + 1)]
    else:
        ws = [complex(w) for w in curve]
        if not ws:
            raise ValueError("empty curve")
    w0, z0 = _base_point(num)
    z = _continue_path(num, z0, _detour_waypoints(num, w0, ws[0]))
    out = [z]
    for w_a, w_b in zip(ws, ws[1:]):
        if w_a == w_b:
            out.append(z)
            continue
        z = _continue_path(num, z, _detour_waypoints(num, w_a, w_b))
        out.append(z)
    return out
