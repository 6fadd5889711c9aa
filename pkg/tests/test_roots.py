import math

import pytest

from rileyslice.membership import Budget, classify
from rileyslice.polynomials import IntPoly, trace_polys
from rileyslice.roots import (cusp_point, ray_extension_spectrum, solve_level,
                              squarefree_decomposition)
from rileyslice.words import Slope, enumerate_slopes


def test_solve_level_factored_examples():
    rs = solve_level(trace_polys(Slope(3, 4)).Q, 0)
    found = sorted(zip(rs.roots, rs.multiplicities), key=lambda t: t[0].real)
    assert [m for _, m in found] == [2, 2]
    assert abs(found[0][0]) < 1e-12 and abs(found[1][0] - 2) < 1e-12

    rs = solve_level(trace_polys(Slope(1, 2)).Q, -4)
    assert sorted(round(z.imag, 9) for z in rs.roots) == [-2.0, 2.0]

    rs = solve_level(trace_polys(Slope(2, 3)).Q, -4)
    target = complex(1.5, math.sqrt(7) / 2)
    assert min(abs(z - target) for z in rs.roots) < 1e-12


def test_solve_level_determinism():
    q = trace_polys(Slope(4, 7)).Q
    a = solve_level(q, -1.25 + 0.5j)
    b = solve_level(q, -1.25 + 0.5j)
    assert a.roots == b.roots and a.residuals == b.residuals


def test_solve_level_validation():
    with pytest.raises(ValueError):
        solve_level(IntPoly.const(3), 0)


def test_residuals_and_vieta():
    for s in enumerate_slopes(15):
        q = trace_polys(s).Q
        rs = solve_level(q, 0)
        assert rs.count == q.degree
        assert max(rs.residuals) <= 1e-10
        total = sum(z * m for z, m in zip(rs.roots, rs.multiplicities))
        assert abs(total - (-q.coeff(q.degree - 1) / q.lead)) < 1e-8


def test_squarefree_decomposition():
    # (x - 1)^2 * x^3
    p = IntPoly.of([0, 0, 0, 1, -2, 1])
    decomp = dict()
    for f, m in squarefree_decomposition(p):
        decomp[m] = f
    assert decomp[2].coeffs in ((-1, 1), (1, -1))
    assert decomp[3].coeffs == (0, 1)


def test_cusp_examples():
    assert abs(cusp_point(Slope(1, 2)).mu - 2j) < 1e-10
    assert abs(cusp_point(Slope(1, 1)).mu - 4) < 1e-10
    c = cusp_point(Slope(4, 5))
    assert abs(c.mu - complex(2.75577, 0.474477)) < 1e-4
    assert c.mu.imag >= 0
    assert c.residual <= 1e-10


def test_spectrum_levels():
    entries = ray_extension_spectrum(Slope(1, 1), 4, include_case1=True)
    assert entries[0]["r"] == 3
    assert entries[0]["trace"] == pytest.approx(1.0)
    assert entries[1]["trace"] == pytest.approx(0.0)
    # P_{1/1} = 2 - mu = 1  =>  mu = 1
    assert abs(entries[0]["mus"].roots[0] - 1.0) < 1e-12
    assert entries[0]["case1_trace"] == pytest.approx(2 + 4 * math.cos(math.pi / 3) ** 2)
    with pytest.raises(ValueError):
        ray_extension_spectrum(Slope(1, 1), 2)


def test_roots_never_classify_interior():
    budget = Budget(max_q=6, depth=2, max_iter=200)
    for s in enumerate_slopes(8):
        rs = solve_level(trace_polys(s).Q, 0)
        for z in rs.roots:
            if z == 0:
                continue  # mu = 0 is outside the family
            cert = classify(z, budget)
            assert not cert.interior, (s, z, cert.verdict)
