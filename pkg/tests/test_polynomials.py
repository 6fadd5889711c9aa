import math

import pytest

from rileyslice.polynomials import (IntPoly, divexact, factor_shape, farey_matrix,
                                    fricke_check, generator_matrices, poly_gcd,
                                    superattractor_check, trace_polys, word_matrix)
from rileyslice.words import Letter, Slope, enumerate_slopes, farey_word

# Q coefficients (ascending) for the nine golden rows
TABLE_Q = {
    (1, 2): [0, 0, 1],
    (4, 7): [0, 1, -4, 6, -6, 5, -2, 1],
    (3, 5): [0, -1, 2, -3, 2, -1],
    (5, 8): [0, 0, 0, 0, 4, -8, 8, -4, 1],
    (2, 3): [0, 1, -2, 1],
    (5, 7): [0, -1, -4, 2, 10, -13, 6, -1],
    (3, 4): [0, 0, 4, -4, 1],
    (4, 5): [0, 1, -6, 11, -6, 1],
    (1, 1): [0, -1],
}


def test_generator_matrices():
    x, y = generator_matrices()
    assert x.b == IntPoly.const(1)
    assert y.c == IntPoly.x()
    assert x.det() == IntPoly.const(1)
    assert y.det() == IntPoly.const(1)


def test_intpoly_basics():
    p = IntPoly.of([1, 2, 0, 0])
    assert p.degree == 1 and p.coeffs == (1, 2)
    assert (p * IntPoly.of([0, 1])).coeffs == (0, 1, 2)
    assert IntPoly.zero().is_zero
    assert IntPoly.of([2, 4]).primitive().coeffs == (1, 2)
    assert IntPoly.of([-2, -4]).primitive().coeffs == (1, 2)
    assert divexact(IntPoly.of([0, 0, 1]), IntPoly.of([0, 1])).coeffs == (0, 1)
    with pytest.raises(ValueError):
        divexact(IntPoly.of([1, 1]), IntPoly.of([2]))
    assert poly_gcd(IntPoly.of([0, 0, 1]), IntPoly.of([0, 2])).coeffs == (0, 1)
    assert IntPoly.from_json(["-3", "0", "12"]).to_json() == ["-3", "0", "12"]


def test_farey_matrix_1_1():
    m = farey_matrix(farey_word(Slope(1, 1)))
    assert m.a == IntPoly.of([1, -1])
    assert m.b == IntPoly.const(1)
    assert m.c == IntPoly.of([0, -1])
    assert m.d == IntPoly.const(1)


def test_word_matrix_at_zero_limit():
    # constant terms of the matrix: X itself for odd q, identity for even q
    for s in enumerate_slopes(9):
        m = farey_matrix(farey_word(s))
        const = (m.a.coeff(0), m.b.coeff(0), m.c.coeff(0), m.d.coeff(0))
        if s.q % 2:
            assert const == (1, 1, 0, 1), s
        else:
            assert const == (1, 0, 0, 1), s


@pytest.mark.parametrize("pq,coeffs", sorted(TABLE_Q.items()))
def test_golden_trace_polys(pq, coeffs):
    pair = trace_polys(Slope(*pq))
    assert pair.Q == IntPoly.of(coeffs)
    assert pair.P == IntPoly.of(coeffs) + IntPoly.const(2)
    assert pair.P.degree == pq[1]


def test_fricke_and_unimodularity_spot():
    for s in enumerate_slopes(20):
        assert fricke_check(s)
    for s in [Slope(1, 97), Slope(31, 99), Slope(49, 100), Slope(99, 100)]:
        m = farey_matrix(farey_word(s))
        assert m.det() == IntPoly.const(1)
        assert m.trace() - IntPoly.const(2) == m.c


def test_x_inverse_word_trace_is_two():
    for s in enumerate_slopes(20):
        letters = (Letter("x", -1),) + farey_word(s).letters
        assert word_matrix(letters).trace() == IntPoly.const(2)


def test_p_q_values_at_zero():
    for s in enumerate_slopes(20):
        pair = trace_polys(s)
        assert pair.P.coeff(0) == 2
        assert pair.Q.coeff(0) == 0
        assert abs(pair.Q.lead) == 1  # desk-scale observation


def test_eval_examples():
    assert trace_polys(Slope(1, 2)).Q.eval(2j) == pytest.approx(-4)
    mu0 = complex(0.5, math.sqrt(3) / 2)
    assert abs(trace_polys(Slope(3, 5)).Q.eval(mu0)) <= 1e-14
    assert IntPoly.zero().eval(3 + 4j) == 0


def test_eval_with_derivative():
    q = trace_polys(Slope(2, 3)).Q  # z(z-1)^2
    v, d = q.eval_with_derivative(2.0 + 0j)
    assert v == pytest.approx(2.0)       # 2*1
    assert d == pytest.approx(5.0)       # (z-1)^2 + 2z(z-1) at 2

def test_eval_large_coefficients_matches_mpmath():
    import mpmath
    pair = trace_polys(Slope(1, 42))
    assert max(abs(c) for c in pair.Q.coeffs) > 2 ** 52  # exercises exact path
    z = 1.7 - 0.3j
    with mpmath.workdps(60):
        expect = complex(mpmath.polyval([mpmath.mpf(c) for c in reversed(pair.Q.coeffs)],
                                        mpmath.mpc(z)))
    got = pair.Q.eval(z)
    assert abs(got - expect) <= 1e-9 * max(1.0, abs(expect))


def test_superattractor_examples():
    assert trace_polys(Slope(1, 2)).Q.coeff(1) == 0
    assert trace_polys(Slope(1, 1)).Q.coeff(1) == -1
    assert trace_polys(Slope(3, 4)).Q.coeff(1) == 0
    for s in enumerate_slopes(20):
        assert superattractor_check(s)


def test_factor_shape_examples():
    rep = factor_shape(Slope(3, 5))
    assert rep.matches and rep.sign == -1 and rep.core == IntPoly.of([1, -1, 1])
    rep = factor_shape(Slope(3, 4))
    assert rep.matches and rep.z_power == 2
    assert rep.core == IntPoly.of([-2, 1])  # mu - 2
    rep = factor_shape(Slope(1, 2))
    assert rep.matches and rep.z_power == 2 and rep.core == IntPoly.const(1)
    rep = factor_shape(Slope(5, 8))
    assert rep.matches and rep.z_power == 4 and rep.core == IntPoly.of([2, -2, 1])


def test_factor_shape_exact_reconstruction():
    # the square decomposition itself is exact for every slope; the
    # conjectured z-power is informational and genuinely fails at 1/8
    for s in enumerate_slopes(12):
        rep = factor_shape(s)
        assert not rep.core.is_zero, s
        rebuilt = (rep.core * rep.core).scale(rep.sign).shift_up(rep.z_power)
        assert rebuilt == trace_polys(s).Q, s
        if s.q % 2:
            assert rep.matches and rep.z_power == 1 and rep.core.coeff(0) == 1
    counter = factor_shape(Slope(1, 8))
    assert not counter.matches
    assert counter.z_power == 2 and counter.expected_z_power == 4
    assert counter.note
