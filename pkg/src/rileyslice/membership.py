"""Membership certificates: interior, exterior, or unknown at a budget.

The classifier cascades provable tests:

  1. outside the convex hull of D(0,2) and +-4  ->  interior (exact);
  2. certified half-plane neighbourhood of a pleating ray  ->  interior;
  3. trace bound  eps <= |Q(mu)| <= 1 - eps  ->  not in the closure;
  4. bounded/cyclic orbit under some Q, or a Q-composition chain reaching
     an exterior witness  ->  not in the slice;
  5. otherwise Unknown, with the budget spent recorded.

Certificates carry machine-checkable witness data and a grade: Exact for
pure real geometry, Numerical for residual-backed results, Evidence for
bounded-orbit heuristics without a detected cycle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np

from .polynomials import trace_polys
from .rays import BoundaryIndeterminate, ContinuationFailed, in_neighbourhood
from .words import Slope, enumerate_slopes

EPS_MARGIN = 1e-9
CYCLE_TOL = 1e-12
CERT_VERSION = "1"

_SQRT3 = math.sqrt(3.0)


class InvalidInput(ValueError):
    """mu = 0 or non-finite mu."""


class Verdict(str, Enum):
    INTERIOR_BY_HULL = "InteriorByHull"
    INTERIOR_BY_NEIGHBOURHOOD = "InteriorByNeighbourhood"
    NOT_IN_CLOSURE = "NotInClosure"
    NOT_IN_SLICE = "NotInSlice"
    UNKNOWN = "Unknown"


class Grade(str, Enum):
    EXACT = "Exact"
    NUMERICAL = "Numerical"
    EVIDENCE = "Evidence"


@dataclass
class Certificate:
    verdict: Verdict
    grade: Grade
    witness: dict
    budget_used: dict = field(default_factory=dict)

    @property
    def interior(self) -> bool:
        return self.verdict in (Verdict.INTERIOR_BY_HULL,
                                Verdict.INTERIOR_BY_NEIGHBOURHOOD)

    @property
    def exterior(self) -> bool:
        return self.verdict in (Verdict.NOT_IN_CLOSURE, Verdict.NOT_IN_SLICE)

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "grade": self.grade.value,
            "witness": self.witness,
            "budget_used": self.budget_used,
            "version": CERT_VERSION,
        }


@dataclass(frozen=True)
class Budget:
    max_q: int = 12
    depth: int = 3
    max_iter: int = 500
    chain_node_cap: int = 400


# ---------------------------------------------------------------------------
# Lyndon--Ullman hull: D(0,2) together with the tangent triangles to +-4

def _dist_to_segment(z: complex, a: complex, b: complex) -> float:
    ab = b - a
    t = ((z - a).real * ab.real + (z - a).imag * ab.imag) / abs(ab) ** 2
    t = min(1.0, max(0.0, t))
    return abs(z - (a + t * ab))


def _dist_to_triangle(z: complex, v0: complex, v1: complex, v2: complex) -> float:
    """0 inside (boundary counts as inside), else distance to the edges."""
    verts = (v0, v1, v2)
    inside = True
    for i in range(3):
        a, b = verts[i], verts[(i + 1) % 3]
        cross = (b - a).real * (z - a).imag - (b - a).imag * (z - a).real
        if cross < 0.0:
            inside = False
            break
    if inside:
        return 0.0
    return min(_dist_to_segment(z, verts[i], verts[(i + 1) % 3]) for i in range(3))


def hull_margin(mu: complex) -> float:
    """Distance from mu to the hull K; 0 when mu is in K (boundary included)."""
    d_disk = max(abs(mu) - 2.0, 0.0)
    d_right = _dist_to_triangle(mu, 4.0 + 0j, complex(1.0, _SQRT3), complex(1.0, -_SQRT3))
    d_left = _dist_to_triangle(mu, complex(-1.0, _SQRT3), -4.0 + 0j, complex(-1.0, -_SQRT3))
    return min(d_disk, d_right, d_left)


def lu_hull_test(mu: complex) -> bool:
    """True iff mu lies outside the hull K by the open-condition margin."""
    return hull_margin(mu) >= EPS_MARGIN


# ---------------------------------------------------------------------------
# per-slope cached data for the dynamical tests

@lru_cache(maxsize=None)
def _dyn_data(p: int, q: int):
    pair = trace_polys(Slope(p, q))
    coeffs_desc = tuple(complex(c) for c in reversed(pair.Q.coeffs))
    tail = sum(abs(c) for c in pair.Q.coeffs[:-1])
    escape = max(1.0, (2.0 + tail) / abs(pair.Q.lead))
    return pair, coeffs_desc, escape


def _q_fast(coeffs_desc, z: complex) -> complex:
    acc = 0j
    for c in coeffs_desc:
        acc = acc * z + c
    return acc


# ---------------------------------------------------------------------------
# individual tests

def shimizu_test(mu: complex, slope: Slope, eps: float = EPS_MARGIN) -> Certificate | None:
    """NotInClosure when eps <= |Q(mu)| <= 1 - eps (discreteness bound)."""
    if not 0.0 < eps < 0.5:
        raise ValueError("eps must be in (0, 0.5)")
    v = trace_polys(slope).Q.eval(mu)
    if eps <= abs(v) <= 1.0 - eps:
        return Certificate(
            Verdict.NOT_IN_CLOSURE, Grade.NUMERICAL,
            {"test": "trace-bound", "slope": str(slope),
             "value": [v.real, v.imag], "abs_value": abs(v)})
    return None


def julia_trap_test(mu: complex, slope: Slope, max_iter: int = 500,
                    escape_radius: float | None = None) -> Certificate | None:
    """NotInSlice when the forward Q-orbit of mu cycles or stays bounded.

    A revisit within 1e-12 of an earlier iterate is a numerically detected
    cycle (grade Numerical); a full bounded orbit without one is only
    Evidence.  Escaping orbits prove nothing and return None.
    """
    if slope.q < 2:
        raise ValueError("julia trap needs deg Q >= 2 (q >= 2)")
    _, coeffs_desc, escape = _dyn_data(slope.p, slope.q)
    radius = escape if escape_radius is None else escape_radius
    orbit = [complex(mu)]
    z = complex(mu)
    if abs(z) > radius:
        return None
    for _ in range(max_iter):
        z = _q_fast(coeffs_desc, z)
        for j, prev in enumerate(orbit):
            if abs(z - prev) < CYCLE_TOL:
                return Certificate(
                    Verdict.NOT_IN_SLICE, Grade.NUMERICAL,
                    {"test": "julia-trap", "kind": "cycle", "slope": str(slope),
                     "cycle_entry": j, "cycle_length": len(orbit) - j,
                     "orbit_prefix": [[o.real, o.imag] for o in orbit[:min(len(orbit), 12)]]})
        if abs(z) > radius:
            return None
        orbit.append(z)
    return Certificate(
        Verdict.NOT_IN_SLICE, Grade.EVIDENCE,
        {"test": "julia-trap", "kind": "bounded-orbit", "slope": str(slope),
         "iterations": max_iter, "escape_radius": radius})


def forward_chain_test(mu: complex, slopes: list[Slope], depth: int,
                       max_iter: int = 500,
                       node_cap: int = 400) -> Certificate | None:
    """NotInSlice via a composition of Q-maps reaching an exterior witness.

    Searches images Q_{s_k} o ... o Q_{s_1}(mu) up to the given depth for a
    NotInClosure witness or a cycle-grade orbit trap; forward invariance of
    the slice transports the non-membership back to mu.  Images that leave
    the hull K are provably interior and prune their branch.
    """
    if depth < 1:
        return None
    frontier: list[tuple[complex, tuple[str, ...]]] = [(complex(mu), ())]
    seen = {(round(mu.real, 9), round(mu.imag, 9))}
    nodes = 0
    for _ in range(depth):
        next_frontier: list[tuple[complex, tuple[str, ...]]] = []
        for z, chain in frontier:
            for s in slopes:
                nodes += 1
                if nodes > node_cap:
                    return None
                img = trace_polys(s).Q.eval(z)
                if hull_margin(img) > 0.0:
                    continue  # image certainly interior: branch cannot witness
                new_chain = chain + (str(s),)
                inner = None
                for s2 in slopes:
                    inner = shimizu_test(img, s2)
                    if inner is not None:
                        break
                if inner is None:
                    for s2 in slopes:
                        if s2.q < 2:
                            continue
                        cand = julia_trap_test(img, s2, max_iter=max_iter)
                        if cand is not None and cand.witness.get("kind") == "cycle":
                            inner = cand
                            break
                if inner is not None:
                    return Certificate(
                        Verdict.NOT_IN_SLICE, Grade.NUMERICAL,
                        {"test": "forward-chain", "chain": list(new_chain),
                         "image": [img.real, img.imag],
                         "terminal": inner.witness})
                key = (round(img.real, 9), round(img.imag, 9))
                if key not in seen:
                    seen.add(key)
                    next_frontier.append((img, new_chain))
        frontier = next_frontier
        if not frontier:
            break
    return None


# ---------------------------------------------------------------------------
# the cascade

def _check_mu(mu: complex) -> complex:
    mu = complex(mu)
    if mu == 0:
        raise InvalidInput("mu = 0 is outside the parameter family")
    if not (math.isfinite(mu.real) and math.isfinite(mu.imag)):
        raise InvalidInput("mu must be finite")
    return mu


def _ordered_slopes(mu: complex, max_q: int) -> list[tuple[Slope, complex]]:
    """Slopes with Q(mu), ordered by |P(mu) + 2| = |Q(mu) + 4| ascending."""
    rows = []
    for s in enumerate_slopes(max_q):
        v = trace_polys(s).Q.eval(mu)
        rows.append((s, v))
    rows.sort(key=lambda r: (abs(r[1] + 4.0), r[0].q, r[0].p))
    return rows


# the row values only steer the search order and candidate selection; the
# tests re-evaluate at full accuracy before issuing any certificate
_CANDIDATE_SLACK = 1e-4


def _interior_certificate(mu: complex, rows, used: dict) -> Certificate | None:
    margin = hull_margin(mu)
    used["hull_tests"] = used.get("hull_tests", 0) + 1
    if margin >= EPS_MARGIN:
        return Certificate(Verdict.INTERIOR_BY_HULL, Grade.EXACT,
                           {"test": "hull-exterior", "margin": margin})
    for s, v in rows:
        re_p = v.real + 4.0  # Re(P(mu)) + 2
        if re_p > _CANDIDATE_SLACK:
            continue
        used["continuations"] = used.get("continuations", 0) + 1
        try:
            res = in_neighbourhood(s, mu)
        except BoundaryIndeterminate:
            used.setdefault("boundary_indeterminate", []).append(str(s))
            continue
        except ContinuationFailed:
            used.setdefault("continuation_failed", []).append(str(s))
            continue
        if res.inside:
            return Certificate(Verdict.INTERIOR_BY_NEIGHBOURHOOD, Grade.NUMERICAL,
                               {"test": "ray-neighbourhood", "slope": str(s),
                                "neighbourhood": res.to_json()})
    return None


def _exterior_certificate(mu: complex, rows, budget: Budget,
                          used: dict) -> Certificate | None:
    for s, v in rows:
        if EPS_MARGIN / 2 <= abs(v) <= 1.0 - EPS_MARGIN + _CANDIDATE_SLACK:
            used["shimizu_tests"] = used.get("shimizu_tests", 0) + 1
            cert = shimizu_test(mu, s)
            if cert is not None:
                return cert
    for s, _ in rows:
        if s.q < 2:
            continue
        used["julia_traps"] = used.get("julia_traps", 0) + 1
        cert = julia_trap_test(mu, s, max_iter=budget.max_iter)
        if cert is not None:
            return cert
    slopes = [s for s, _ in sorted(rows, key=lambda r: (r[0].q, r[0].p))]
    used["chain_searches"] = used.get("chain_searches", 0) + 1
    return forward_chain_test(mu, slopes, budget.depth,
                              max_iter=budget.max_iter,
                              node_cap=budget.chain_node_cap)


def classify(mu: complex, budget: Budget = Budget()) -> Certificate:
    """Cascade of certificates; deterministic given the budget."""
    mu = _check_mu(mu)
    used: dict = {}
    rows = _ordered_slopes(mu, budget.max_q)
    used["slopes_examined"] = len(rows)
    cert = _interior_certificate(mu, rows, used)
    if cert is None:
        cert = _exterior_certificate(mu, rows, budget, used)
    if cert is None:
        cert = Certificate(Verdict.UNKNOWN, Grade.EVIDENCE,
                           {"test": "budget-exhausted"})
    cert.budget_used = used
    return cert


@dataclass
class GridPointResult:
    mu: complex
    interior: Certificate | None
    exterior: Certificate | None

    @property
    def contradiction(self) -> bool:
        return self.interior is not None and self.exterior is not None

    @property
    def verdict(self) -> Verdict:
        if self.interior is not None:
            return self.interior.verdict
        if self.exterior is not None:
            return self.exterior.verdict
        return Verdict.UNKNOWN


def soundness_certificates(mu: complex, budget: Budget = Budget()) -> GridPointResult:
    """Probe both certificate families independently (soundness checking)."""
    mu = _check_mu(mu)
    rows = _ordered_slopes(mu, budget.max_q)
    used: dict = {}
    return GridPointResult(mu,
                           _interior_certificate(mu, rows, used),
                           _exterior_certificate(mu, rows, budget, used))


def scan_grid(window: tuple[float, float, float, float], nx: int, ny: int,
              budget: Budget = Budget(), progress=None) -> list[GridPointResult]:
    """Soundness scan over an nx-by-ny grid; results ordered row-major.

    Both certificate families are probed for every point.  A vectorized
    pass over all slope polynomials supplies the search order and the
    candidate sets; every certificate still comes from the per-point tests
    at full accuracy.  Grid points at mu = 0 carry no certificates.
    """
    x0, x1, y0, y1 = window
    xs = np.linspace(x0, x1, nx)
    ys = np.linspace(y0, y1, ny)
    grid = xs[None, :] + 1j * ys[:, None]   # shape (ny, nx)
    slopes = enumerate_slopes(budget.max_q)
    flat = grid.ravel()
    values = np.empty((len(slopes), flat.size), dtype=np.complex128)
    for i, s in enumerate(slopes):
        cs = [float(c) for c in reversed(trace_polys(s).Q.coeffs)]
        values[i] = np.polyval(cs, flat)
    order = np.argsort(np.abs(values + 4.0), axis=0, kind="stable")

    out: list[GridPointResult] = []
    for k, mu in enumerate(flat):
        mu = complex(mu)
        if mu == 0:
            out.append(GridPointResult(mu, None, None))
            continue
        used: dict = {}
        rows = [(slopes[i], complex(values[i, k])) for i in order[:, k]]
        interior = _interior_certificate(mu, rows, used)
        exterior = _exterior_certificate(mu, rows, budget, used)
        out.append(GridPointResult(mu, interior, exterior))
        if progress is not None and (k + 1) % 2000 == 0:
            progress(k + 1, flat.size)
    return out
