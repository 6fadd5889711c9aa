import cmath
import json
import math

import pytest

from rileyslice.membership import (Budget, Grade, InvalidInput, Verdict, classify,
                                   forward_chain_test, hull_margin, julia_trap_test,
                                   lu_hull_test, scan_grid, shimizu_test,
                                   soundness_certificates)
from rileyslice.rays import in_neighbourhood
from rileyslice.words import Slope, enumerate_slopes

FAST = Budget(max_q=6, depth=2, max_iter=300)


def test_hull_examples():
    assert lu_hull_test(5) is True
    assert lu_hull_test(0.5) is False
    # tangency point of the hull boundary: on K, so not outside
    assert lu_hull_test(complex(1, math.sqrt(3))) is False
    assert hull_margin(complex(1, math.sqrt(3))) == 0.0
    assert hull_margin(3.9 + 0j) == 0.0          # inside the right triangle
    assert hull_margin(4.5 + 0j) == pytest.approx(0.5)
    assert hull_margin(0j) == 0.0


def test_shimizu_examples():
    cert = shimizu_test(0.5, Slope(1, 2))
    assert cert is not None and cert.verdict == Verdict.NOT_IN_CLOSURE
    assert cert.witness["abs_value"] == pytest.approx(0.25)
    assert shimizu_test(2j, Slope(1, 2)) is None          # |Q| = 4
    mu0 = complex(0.5, math.sqrt(3) / 2)
    assert shimizu_test(mu0, Slope(3, 5)) is None         # Q = 0, excluded case
    with pytest.raises(ValueError):
        shimizu_test(0.5, Slope(1, 2), eps=0.7)


def test_julia_trap_examples():
    cert = julia_trap_test(1j, Slope(1, 2))
    assert cert is not None and cert.witness["kind"] == "cycle"
    assert cert.grade == Grade.NUMERICAL
    assert julia_trap_test(3j, Slope(1, 2)) is None       # escapes
    cert = julia_trap_test(0j, Slope(1, 2))
    assert cert is not None and cert.witness["kind"] == "cycle"  # 0 fixed
    with pytest.raises(ValueError):
        julia_trap_test(1j, Slope(1, 1))                  # needs q >= 2


def test_forward_chain_examples():
    mu = cmath.sqrt(0.5)
    cert = forward_chain_test(mu, [Slope(1, 2)], 3)
    assert cert is not None and cert.witness["chain"] == ["1/2"]
    assert cert.witness["terminal"]["slope"] == "1/2"
    assert forward_chain_test(mu, [Slope(1, 2)], 0) is None
    assert forward_chain_test(5.0 + 0j, enumerate_slopes(3), 3) is None


def test_classify_examples():
    assert classify(5, FAST).verdict == Verdict.INTERIOR_BY_HULL
    cert = classify(0.5, FAST)
    assert cert.verdict == Verdict.NOT_IN_CLOSURE
    cert = classify(1j, FAST)
    assert cert.verdict == Verdict.NOT_IN_SLICE
    assert cert.witness["kind"] == "cycle"
    # 3i is outside the hull, so the cascade certifies it there; the ray
    # neighbourhood certificate for slope 1/2 exists independently
    cert = classify(3j, FAST)
    assert cert.interior
    assert in_neighbourhood(Slope(1, 2), 3j).inside


def test_classify_validation():
    with pytest.raises(InvalidInput):
        classify(0)
    with pytest.raises(InvalidInput):
        classify(complex(math.inf, 0))


def test_classify_symmetry():
    for mu in [3j, 0.5, 1j, 5, 2.0 + 2.0j, -1.5 + 0.5j]:
        verdicts = {classify(complex(mu), FAST).verdict,
                    classify(complex(mu).conjugate(), FAST).verdict,
                    classify(-complex(mu), FAST).verdict}
        assert len(verdicts) == 1, (mu, verdicts)


def test_classify_deterministic():
    a = classify(0.3 + 0.9j, FAST).to_json()
    b = classify(0.3 + 0.9j, FAST).to_json()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_certificate_json_schema():
    payload = classify(5, FAST).to_json()
    assert set(payload) == {"verdict", "grade", "witness", "budget_used", "version"}
    assert payload["version"] == "1"
    json.dumps(payload)  # serializable


def test_cusp_points_not_interior():
    for mu in [2j, complex(1.5, math.sqrt(7) / 2), 4 + 0j,
               complex(2.27202, 0.786151)]:
        cert = classify(mu, FAST)
        assert not cert.interior, (mu, cert.verdict)


def test_soundness_small_grid():
    results = scan_grid((-2.2, 2.2, -2.2, 2.2), 12, 12, FAST)
    assert len(results) == 144
    assert not any(r.contradiction for r in results)
    # something must be decided on this window
    assert any(r.interior is not None for r in results)
    assert any(r.exterior is not None for r in results)


def test_soundness_certificates_single_point():
    res = soundness_certificates(0.5, FAST)
    assert res.exterior is not None and res.interior is None
    res = soundness_certificates(5.0, FAST)
    assert res.interior is not None and res.exterior is None
