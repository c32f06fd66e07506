import math
import time

import numpy as np
import pytest

from fourbody_efimov.constants import (
    GAMMA,
    residual_s,
    residual_s0,
    solve_s0,
    solve_s_alpha,
    universal_constants,
)
from fourbody_efimov.errors import ConvergenceError, ValidationError


def _scan_oracle(lo, hi, step=1e-5):
    # brute-force sign scan with linear interpolation, independent of the solver
    s = np.arange(lo, hi, step)
    r = math.sqrt(3) * s * np.cos(np.pi * s / 2) - 8 * np.sin(np.pi * s / 6)
    idx = np.nonzero(np.sign(r[1:]) * np.sign(r[:-1]) < 0)[0]
    return [s[i] - r[i] * step / (r[i + 1] - r[i]) for i in idx]


def test_residual_examples():
    assert abs(residual_s(4.465)) < 0.05
    assert residual_s(0.0) == 0.0
    assert residual_s0(0.0) == 0.0


def test_s_equals_four_is_exact_spurious_root():
    assert abs(residual_s(4.0)) < 1e-13
    assert math.sqrt(3) * 4 * math.cos(2 * math.pi) == pytest.approx(8 * math.sin(2 * math.pi / 3))
    roots = [solve_s_alpha(a) for a in range(1, 6)]
    assert all(abs(r - 4.0) > 1e-3 for r in roots)


def test_first_continuum_constants():
    assert solve_s_alpha(1) == pytest.approx(4.465, abs=0.005)
    assert solve_s_alpha(2) == pytest.approx(6.818, abs=0.005)


def test_third_constant_matches_scan_oracle():
    oracle = _scan_oracle(8.0, 10.0)
    assert len(oracle) == 1
    assert solve_s_alpha(3) == pytest.approx(oracle[0], abs=1e-6)


def test_roots_are_roots_and_change_sign():
    for a in range(1, 6):
        s = solve_s_alpha(a)
        assert abs(residual_s(s)) < 1e-9
        assert residual_s(s - 1e-6) * residual_s(s + 1e-6) < 0


def test_roots_ordered_and_match_oracle():
    roots = [solve_s_alpha(a) for a in range(1, 6)]
    assert roots == sorted(roots)
    oracle = [r for r in _scan_oracle(0.01, 13.5) if abs(r - 4) > 1e-3]
    np.testing.assert_allclose(roots, oracle[:5], atol=1e-6)


def test_s0():
    s0 = solve_s0()
    assert s0 == pytest.approx(1.0062, abs=5e-4)
    assert abs(residual_s0(s0)) < 1e-12
    assert s0 > 0.5  # trivial root at zero excluded


def test_universal_ratios():
    c = universal_constants()
    assert c.efimov_ratio == pytest.approx(math.exp(-2 * math.pi / c.s0), rel=1e-14)
    assert 1 / c.efimov_ratio == pytest.approx(515, rel=0.01)
    assert c.length_ratio == pytest.approx(22.7, abs=0.01)
    assert c.length_ratio**2 * c.efimov_ratio == pytest.approx(1.0)


def test_gamma_close_to_gamma_function_phase():
    import mpmath

    phase = -float(mpmath.arg(mpmath.gamma(1 + 1j * solve_s0())))
    assert GAMMA == pytest.approx(phase, abs=1e-4)


def test_validation():
    with pytest.raises(ValidationError):
        solve_s_alpha(0)
    with pytest.raises(ValidationError):
        solve_s_alpha(1, tol=0)
    with pytest.raises(ConvergenceError):
        solve_s_alpha(30, s_max=10)


def test_fast():
    t0 = time.perf_counter()
    solve_s0()
    [solve_s_alpha(a, tol=1e-11) for a in (1, 2)]
    assert time.perf_counter() - t0 < 1.0


def test_as_dict_roundtrip():
    d = universal_constants().as_dict()
    assert set(d) >= {"s0", "gamma", "s_alpha"}
    assert len(d["s_alpha"]) == 5
