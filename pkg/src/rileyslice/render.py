"""Deterministic raster rendering (binary PPM) with sidecar geometry.

Every job renders pixel-exactly the same way on every run: fixed iteration
orders, no randomness, no time dependence.  The raster is a plain P6 file;
the raw geometry behind each drawing lands in sidecar CSV rows so plots can
be rebuilt with external tools.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .kleinian import fundamental_domain, limit_set_points
from .membership import hull_margin
from .mobius import Circle, Line
from .polynomials import trace_polys
from .rays import trace_level_curve, trace_ray
from .roots import solve_level
from .words import Slope, enumerate_slopes

MAX_RESOLUTION = 8192


@dataclass(frozen=True)
class RenderJob:
    kind: str
    window: tuple[float, float, float, float]  # x0, x1, y0, y1
    resolution: tuple[int, int]                # width, height
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        x0, x1, y0, y1 = self.window
        w, h = self.resolution
        if not (x0 < x1 and y0 < y1):
            raise ValueError("window must satisfy x0 < x1 and y0 < y1")
        if not (0 < w <= MAX_RESOLUTION and 0 < h <= MAX_RESOLUTION):
            raise ValueError(f"resolution must be within {MAX_RESOLUTION}")


class Raster:
    """RGB byte raster, row-major, top row first."""

    def __init__(self, width: int, height: int, background=(0, 0, 0)):
        self.width = width
        self.height = height
        self.pixels = bytearray(bytes(background) * (width * height))

    def put(self, ix: int, iy: int, rgb: tuple[int, int, int]):
        if 0 <= ix < self.width and 0 <= iy < self.height:
            k = 3 * (iy * self.width + ix)
            self.pixels[k:k + 3] = bytes(rgb)

    def to_ppm(self) -> bytes:
        header = f"P6\n{self.width} {self.height}\n255\n".encode()
        return header + bytes(self.pixels)


class _Frame:
    """Window-to-pixel transform (y up in the plane, down in the raster)."""

    def __init__(self, job: RenderJob):
        self.x0, self.x1, self.y0, self.y1 = job.window
        self.w, self.h = job.resolution

    def pixel(self, z: complex) -> tuple[int, int]:
        fx = (z.real - self.x0) / (self.x1 - self.x0)
        fy = (z.imag - self.y0) / (self.y1 - self.y0)
        return int(fx * (self.w - 1) + 0.5), int((1.0 - fy) * (self.h - 1) + 0.5)

    def scale(self) -> float:
        return max((self.x1 - self.x0) / self.w, (self.y1 - self.y0) / self.h)


def _splat(raster: Raster, frame: _Frame, z: complex, rgb, size: int = 1):
    ix, iy = frame.pixel(z)
    for dy in range(-size, size + 1):
        for dx in range(-size, size + 1):
            raster.put(ix + dx, iy + dy, rgb)


def _stroke(raster: Raster, frame: _Frame, pts: list[complex], rgb):
    step = frame.scale() * 0.75
    for a, b in zip(pts, pts[1:]):
        n = max(1, int(abs(b - a) / step))
        for k in range(n + 1):
            _splat(raster, frame, a + (b - a) * k / n, rgb, 0)


def _stroke_circle(raster: Raster, frame: _Frame, obj, rgb):
    if isinstance(obj, Circle):
        n = max(12, int(2 * math.pi * obj.radius / (frame.scale() * 0.75)))
        n = min(n, 4096)
        pts = [obj.point_at(2 * math.pi * k / n) for k in range(n + 1)]
    else:
        half = 2.0 * max(abs(frame.x1 - frame.x0), abs(frame.y1 - frame.y0))
        pts = [obj.point_at(-half), obj.point_at(half)]
    _stroke(raster, frame, pts, rgb)


def _palette(i: int) -> tuple[int, int, int]:
    base = [(255, 196, 0), (0, 200, 255), (255, 80, 120), (120, 255, 120),
            (200, 120, 255), (255, 255, 255), (255, 140, 40), (80, 220, 180)]
    return base[i % len(base)]


def _thread_count() -> int:
    try:
        return max(1, int(os.environ.get("RILEY_THREADS", "1")))
    except ValueError:
        return 1


def _parse_complex(text: str) -> complex:
    re, im = (float(t) for t in str(text).split(","))
    return complex(re, im)


def render(job: RenderJob) -> tuple[Raster, list[tuple], dict]:
    """Render a job; returns (raster, sidecar CSV rows, report).

    The first sidecar row is the column header.  Failed primitives are
    skipped and counted in the report.
    """
    frame = _Frame(job)
    raster = Raster(*job.resolution)
    params = dict(job.params)
    rows: list[tuple] = []
    report = {"kind": job.kind, "skipped": 0, "primitives": 0}
    handler = {
        "rootset": _render_rootset,
        "cusps": _render_cusps,
        "rays": _render_rays,
        "neighbourhoods": _render_neighbourhoods,
        "julia": _render_julia,
        "limitset": _render_limitset,
        "isocircles": _render_isocircles,
    }.get(job.kind)
    if handler is None:
        raise ValueError(f"unknown render kind {job.kind!r}")
    handler(raster, frame, params, rows, report)
    return raster, rows, report


def _render_rootset(raster, frame, params, rows, report):
    max_q = int(params.get("max_q", 10))
    level = _parse_complex(params.get("level", "0,0"))
    rows.append(("slope", "re", "im", "residual"))
    for i, s in enumerate(enumerate_slopes(max_q)):
        pair = trace_polys(s)
        try:
            rs = solve_level(pair.Q, level)
        except Exception:
            report["skipped"] += 1
            continue
        rgb = _palette(s.q)
        for z, res in zip(rs.roots, rs.residuals):
            rows.append((str(s), z.real, z.imag, res))
            _splat(raster, frame, z, rgb, 1)
            report["primitives"] += 1


def _render_cusps(raster, frame, params, rows, report):
    max_q = int(params.get("max_q", 8))
    rows.append(("slope", "re", "im", "residual"))
    from .roots import cusp_point

    for s in enumerate_slopes(max_q):
        try:
            c = cusp_point(s)
        except Exception:
            report["skipped"] += 1
            continue
        rows.append((str(s), c.mu.real, c.mu.imag, c.residual))
        _splat(raster, frame, c.mu, _palette(s.q), 1)
        _splat(raster, frame, c.mu.conjugate(), _palette(s.q), 1)
        _splat(raster, frame, -c.mu, _palette(s.q), 1)
        _splat(raster, frame, -c.mu.conjugate(), _palette(s.q), 1)
        report["primitives"] += 1


def _render_rays(raster, frame, params, rows, report):
    max_q = int(params.get("max_q", 8))
    t_start = float(params.get("t_start", -50.0))
    steps = int(params.get("steps", 200))
    rows.append(("slope", "t", "re", "im"))
    for s in enumerate_slopes(max_q):
        try:
            ray = trace_ray(s, t_start, steps)
        except Exception:
            report["skipped"] += 1
            continue
        pts = [z for _, z in ray.samples]
        for t, z in ray.samples:
            rows.append((str(s), t, z.real, z.imag))
        rgb = _palette(s.q)
        for branch in (pts, [z.conjugate() for z in pts],
                       [-z for z in pts], [-z.conjugate() for z in pts]):
            _stroke(raster, frame, branch, rgb)
        report["primitives"] += 1


def _render_neighbourhoods(raster, frame, params, rows, report):
    max_q = int(params.get("max_q", 5))
    s_max = float(params.get("s_max", 30.0))
    steps = int(params.get("steps", 240))
    sector = str(params.get("sector", "0")) not in ("0", "", "false")
    rows.append(("slope", "curve", "k", "re", "im"))
    for s in enumerate_slopes(max_q):
        curves = [("boundary", lambda u: complex(-2.0, s_max * u))]
        if sector:
            curves.append(("sector", lambda u: -4.0 + 40.0 * u *
                           complex(math.cos(5 * math.pi / 6), math.sin(5 * math.pi / 6))))
        for name, curve in curves:
            try:
                pts = trace_level_curve(s, curve, steps)
            except Exception:
                report["skipped"] += 1
                continue
            for k, z in enumerate(pts):
                rows.append((str(s), name, k, z.real, z.imag))
            rgb = _palette(s.q)
            for branch in (pts, [z.conjugate() for z in pts],
                           [-z for z in pts], [-z.conjugate() for z in pts]):
                _stroke(raster, frame, branch, rgb)
            report["primitives"] += 1


def _render_julia(raster, frame, params, rows, report):
    slope = Slope.parse(params.get("slope", "1/2"))
    max_iter = int(params.get("max_iter", 192))
    pair = trace_polys(slope)
    coeffs_desc = [complex(c) for c in reversed(pair.Q.coeffs)]
    tail = sum(abs(c) for c in pair.Q.coeffs[:-1])
    escape = max(4.0, (2.0 + tail) / abs(pair.Q.lead))
    rows.append(("param", "value"))
    rows.append(("slope", str(slope)))
    rows.append(("max_iter", max_iter))
    rows.append(("escape_radius", escape))

    def shade_row(iy: int) -> bytes:
        out = bytearray()
        y = frame.y1 - (frame.y1 - frame.y0) * iy / (frame.h - 1)
        for ix in range(frame.w):
            x = frame.x0 + (frame.x1 - frame.x0) * ix / (frame.w - 1)
            z = complex(x, y)
            n = 0
            while n < max_iter and abs(z) <= escape:
                acc = 0j
                for c in coeffs_desc:
                    acc = acc * z + c
                z = acc
                n += 1
            if n >= max_iter:
                out += bytes((255, 255, 255))  # filled: bounded orbit
            else:
                g = int(255.0 * (n / max_iter) ** 0.5)
                out += bytes((0, g // 2, g))
        return bytes(out)

    workers = _thread_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            shaded = list(pool.map(shade_row, range(frame.h)))
    else:
        shaded = [shade_row(iy) for iy in range(frame.h)]
    for iy, row in enumerate(shaded):
        k = 3 * iy * frame.w
        raster.pixels[k:k + len(row)] = row
    report["primitives"] += frame.w * frame.h


def _render_limitset(raster, frame, params, rows, report):
    mu = _parse_complex(params.get("mu", "0,2"))
    depth = int(params.get("depth", 6))
    seed = params.get("seed", "isometric-circles")
    slope = Slope.parse(params["slope"]) if "slope" in params else None
    involution = str(params.get("involution", "0")) not in ("0", "", "false")
    sample = limit_set_points(mu, depth, seed=seed, slope=slope,
                              include_involution=involution)
    rows.append(("type", "cx", "cy", "r"))
    for z in sample.points:
        rows.append(("point", z.real, z.imag, 0.0))
        _splat(raster, frame, z, (255, 255, 255), 0)
        report["primitives"] += 1
    for obj in sample.circles:
        if isinstance(obj, Circle):
            rows.append(("circle", obj.center.real, obj.center.imag, obj.radius))
        else:
            rows.append(("line", obj.point.real, obj.point.imag,
                         math.atan2(obj.direction.imag, obj.direction.real)))
        _stroke_circle(raster, frame, obj, (0, 200, 255))
        report["primitives"] += 1


def _render_isocircles(raster, frame, params, rows, report):
    slope = Slope.parse(params.get("slope", "3/4"))
    mu = _parse_complex(params["mu"]) if "mu" in params else None
    if mu is None:
        # default: the on-ray point with trace -2 + i t
        t = float(params.get("t", 1.0))
        from .rays import _numerics, _base_point, _continue_path, _detour_waypoints
        num = _numerics(slope.p, slope.q)
        w0, z0 = _base_point(num)
        mu = _continue_path(num, z0, _detour_waypoints(num, w0, complex(-2.0, t)))
    fd = fundamental_domain(slope, mu)
    rows.append(("type", "cx", "cy", "r"))
    translates = int(params.get("translates", 2))
    for n in range(-translates, translates + 1):
        shade = (120, 120, 120) if n else (255, 196, 0)
        for c in (fd.d1, fd.d2):
            cc = Circle(c.center + n, c.radius)
            rows.append(("circle", cc.center.real, cc.center.imag, cc.radius))
            _stroke_circle(raster, frame, cc, shade)
            report["primitives"] += 1
    for c in (fd.d1_shifted, fd.d2_shifted):
        rows.append(("circle_shifted", c.center.real, c.center.imag, c.radius))
        _stroke_circle(raster, frame, c, (255, 80, 120))
        report["primitives"] += 1
    for x in (fd.strip_x0, fd.strip_x1):
        rows.append(("line", x, 0.0, math.pi / 2))
        _stroke_circle(raster, frame, Line(complex(x, 0.0), 1j), (0, 200, 255))
        report["primitives"] += 1
    rows.append(("tangency", fd.tangency_point.real, fd.tangency_point.imag,
                 fd.tangency_residual))
    _splat(raster, frame, fd.tangency_point, (255, 255, 255), 2)
