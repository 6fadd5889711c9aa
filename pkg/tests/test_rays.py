import cmath
import math

import pytest

from rileyslice.polynomials import trace_polys
from rileyslice.rays import (BoundaryIndeterminate, asymptotic_directions,
                             in_neighbourhood, trace_level_curve, trace_ray)
from rileyslice.words import Slope, enumerate_slopes

TABLE_CUSPS = {
    (1, 2): 2j,
    (4, 7): 0.427505 + 1.57557j,
    (3, 5): 0.773301 + 1.46771j,
    (5, 8): 1.05642 + 1.30324j,
    (2, 3): 1.5 + (math.sqrt(7) / 2) * 1j,
    (5, 7): 1.85181 + 0.911292j,
    (3, 4): 2.27202 + 0.786151j,
    (4, 5): 2.75577 + 0.474477j,
    (1, 1): 4 + 0j,
}


def test_asymptotic_directions():
    d = asymptotic_directions(Slope(1, 2))
    assert sorted(d.angles) == pytest.approx([-math.pi / 2, math.pi / 2])
    assert d.canonical == pytest.approx(math.pi / 2)
    d = asymptotic_directions(Slope(1, 1))
    assert d.angles == (0.0,) and d.canonical == 0.0
    d = asymptotic_directions(Slope(2, 3))
    assert d.canonical == pytest.approx(math.pi / 3)
    assert len(d.angles) == 3


def test_ray_oracle_slope_half():
    ray = trace_ray(Slope(1, 2), -50.0, 150)
    for t, mu in ray.samples:
        assert abs(mu - 1j * math.sqrt(2.0 - t)) <= 1e-9
    assert abs(ray.cusp.mu - 2j) <= 1e-10


def test_ray_structure_invariants():
    for pq in [(1, 2), (2, 3), (3, 4), (3, 5)]:
        ray = trace_ray(Slope(*pq), -20.0, 40)
        pair = trace_polys(ray.slope)
        ts = [t for t, _ in ray.samples]
        assert ts == sorted(ts) and ts[-1] == -2.0
        for t, mu in ray.samples:
            assert abs(pair.P.eval(mu) - t) <= 1e-9
            assert mu.imag >= -1e-12
        assert abs(ray.cusp.mu - complex(TABLE_CUSPS[pq])) < 1e-4


def test_trace_ray_validation():
    with pytest.raises(ValueError):
        trace_ray(Slope(1, 2), -3.0)
    with pytest.raises(ValueError):
        trace_ray(Slope(1, 2), -10.0, 1)


def test_in_neighbourhood_examples():
    res = in_neighbourhood(Slope(1, 2), 3j)
    assert res.inside and abs(res.landing - 3j) < 1e-8
    assert res.value == pytest.approx(-7.0)
    assert in_neighbourhood(Slope(1, 2), 3.0).inside is False
    # explicit hyperbola component: Re(mu^2) < -4, upper sheet
    res = in_neighbourhood(Slope(1, 2), 0.1 + 2.5j)
    assert res.inside
    res = in_neighbourhood(Slope(1, 2), -3j)
    assert res.inside and res.branch == "lower"
    payload = res.to_json()
    assert payload["inside"] and payload["continuation_path"]


def test_in_neighbourhood_boundary():
    # P_{1/1} = 2 - mu: Re P = -2 exactly at Re mu = 4
    with pytest.raises(BoundaryIndeterminate):
        in_neighbourhood(Slope(1, 1), 4.0 + 1.0j)


def test_own_ray_self_consistency():
    for s in [Slope(1, 2), Slope(2, 3), Slope(3, 4), Slope(3, 5), Slope(5, 8)]:
        ray = trace_ray(s, -15.0, 10)
        for t, mu in ray.samples:
            if t >= -2.0 - 1e-6:  # the cusp itself is a boundary point
                continue
            assert in_neighbourhood(s, mu).inside, (s, t)


def test_certified_points_respect_trace_bound():
    # no certified-inside point may violate |Q| >= 1 at any other slope
    probes = [3j, 0.1 + 2.5j, 1j * math.sqrt(8.0)]
    for mu in probes:
        assert in_neighbourhood(Slope(1, 2), mu).inside
        for s in enumerate_slopes(12):
            v = abs(trace_polys(s).Q.eval(mu))
            assert not (1e-9 < v < 1.0 - 1e-9), (mu, s, v)


def test_level_curves():
    pts = trace_level_curve(Slope(1, 2), lambda s: complex(-2.0, 10.0 * s), 60)
    assert all(abs((z * z).real + 4.0) < 1e-9 for z in pts[1:])
    assert all(z.imag > 0 for z in pts)
    pts = trace_level_curve(Slope(1, 1), lambda s: complex(-2.0, 10.0 * s), 60)
    for k, z in enumerate(pts):
        assert abs(z - (4.0 - 1j * (10.0 * k / 60))) < 1e-9
    base = trace_ray(Slope(1, 2)).samples[0]
    degenerate = trace_level_curve(Slope(1, 2), [complex(base[0], 0.0)])
    assert len(degenerate) == 1
    assert abs(degenerate[0] - base[1]) < 1e-9
