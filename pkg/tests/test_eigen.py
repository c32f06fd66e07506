import math

import numpy as np
import pytest

from fourbody_efimov.constants import universal_constants
from fourbody_efimov.eigen import (
    HALF_PI,
    AccuracyWarning,
    EigenProblem,
    _solve_grid,
    eigenvalues_closed_form,
    eigenvalues_numeric,
    make_problem,
    node_count,
    overlap,
    solve_channel,
    u_closed_form,
)
from fourbody_efimov.errors import NumericalError, ValidationError
from fourbody_efimov.system import AtomTrimer, Continuum, hard_core_radius

C = universal_constants()


def test_u_vanishes_at_half_pi():
    assert u_closed_form(AtomTrimer(1), 3.0, HALF_PI, C.s0) == 0
    assert u_closed_form(Continuum(1), 3.0, HALF_PI, C.s(1)) == 0


def test_continuum_function_is_real():
    for a in (0.1, 0.6, 1.2):
        u = u_closed_form(Continuum(1), 5.3, a, C.s(1))
        assert abs(u.imag) <= 1e-12 * max(1.0, abs(u.real))


def test_trimer_function_has_global_phase():
    x1, x2 = 0.3, 1.1
    for lam in (4.2, 2.0j):
        u1 = u_closed_form(AtomTrimer(1), lam, x1, C.s0)
        u2 = u_closed_form(AtomTrimer(1), lam, x2, C.s0)
        assert u1.real * u2.imag == pytest.approx(u2.real * u1.imag, abs=1e-12)


def test_u_solves_the_ode():
    # second difference of the closed form against the potential term
    lam, s = 3.7, C.s0
    strength = -(s * s + 0.25)
    a, h = 0.7, 1e-4
    u = [u_closed_form(AtomTrimer(1), lam, a + k * h, s) for k in (-1, 0, 1)]
    upp = (u[0] - 2 * u[1] + u[2]) / h**2
    assert abs(-upp + strength / math.sin(a) ** 2 * u[1] - lam**2 * u[1]) < 1e-5 * abs(u[1])


def test_problem_validation(unit, params):
    p = make_problem(AtomTrimer(2), 500.0, unit, params)
    assert p.strength == pytest.approx(-(C.s0**2 + 0.25))
    assert p.level == 2 and p.is_trimer
    with pytest.raises(ValidationError):
        EigenProblem(AtomTrimer(1), 100.0, 0.1, 3.0, C.s0)
    with pytest.raises(ValidationError):
        EigenProblem(Continuum(1), 100.0, 2.0, 3.0, C.s(1))


CASES = [
    (AtomTrimer(1), 30.0, 1),
    (AtomTrimer(1), 300.0, 3),
    (Continuum(1), 50.0, 2),
    (Continuum(2), 1e4, 2),
]


@pytest.mark.parametrize("channel,R4,count", CASES)
def test_closed_form_matches_numeric(unit, params, channel, R4, count):
    prob = make_problem(channel, R4, unit, params)
    cf = eigenvalues_closed_form(prob, count)
    num = eigenvalues_numeric(prob, count).lambda_sq
    np.testing.assert_allclose(num, cf, rtol=1e-6, atol=1e-6)


def test_continuum_asymptote_closed_form(unit, params):
    prob = make_problem(Continuum(1), 1e5, unit, params)
    lam = math.sqrt(eigenvalues_closed_form(prob, 1)[0])
    assert lam == pytest.approx(C.s(1) + 1.5, abs=1e-2)
    assert lam == pytest.approx(5.965, abs=1e-2)


def test_continuum_asymptote_numeric(unit, params):
    sol = solve_channel(Continuum(2), 1e6, unit, params, count=2)
    lam = np.sqrt(sol.lambda_sq)
    assert lam[0] == pytest.approx(C.s(2) + 1.5, abs=0.01)
    assert lam[1] == pytest.approx(C.s(2) + 3.5, abs=0.01)


def test_domain_monotonicity(unit, params):
    ev = [eigenvalues_closed_form(make_problem(Continuum(1), R4, unit, params), 2) for R4 in (50, 200, 2000)]
    assert np.all(ev[0] > ev[1]) and np.all(ev[1] > ev[2])


def test_richardson_ratio_second_order(unit, params):
    prob = make_problem(AtomTrimer(1), 200.0, unit, params)
    n = 1000
    w = [_solve_grid(prob, 2, m, vectors=False)[3] for m in (n, 2 * n + 1, 4 * n + 3)]
    ratio = (w[0] - w[1]) / (w[1] - w[2])
    np.testing.assert_allclose(ratio, 4.0, rtol=0.05)


def test_eigenfunctions_normalized_and_ordered(unit, params):
    sol = solve_channel(AtomTrimer(1), 500.0, unit, params, count=3)
    for i in range(3):
        assert overlap(sol, i, i) == pytest.approx(1.0, abs=1e-4)
        assert node_count(sol.eigenfunctions[i]) == i
    assert abs(overlap(sol, 0, 1)) < 1e-4
    assert np.all(np.diff(sol.lambda_sq) > 0)
    assert sol.eigenfunctions[:, 0].tolist() == [0, 0, 0]
    assert sol.eigenfunctions[:, -1].tolist() == [0, 0, 0]


def test_trimer_U_ratio_flattens(unit, params):
    sol = solve_channel(AtomTrimer(1), 1e6 * params.R0, unit, params, count=4)
    U = sol.U(unit.mu4)
    assert np.all(U < 0)
    for n in (1, 2):
        assert U[n + 1] / U[n] == pytest.approx(C.efimov_ratio, rel=0.05)


def test_ceiling_refusal(unit, params):
    core = hard_core_radius(unit, params)
    prob = make_problem(AtomTrimer(1), 1.05 * core, unit, params)
    with pytest.raises(NumericalError, match="eigenvalues_numeric"):
        eigenvalues_closed_form(prob, 1, ceiling=2.0)


def test_strict_accuracy(unit, params):
    prob = make_problem(AtomTrimer(1), 300.0, unit, params)
    with pytest.raises(NumericalError):
        eigenvalues_numeric(prob, 2, rtol=1e-14, strict=True)
    with pytest.warns(AccuracyWarning):
        eigenvalues_numeric(prob, 2, rtol=1e-14)


def test_count_validation(unit, params):
    prob = make_problem(AtomTrimer(1), 300.0, unit, params)
    with pytest.raises(ValidationError):
        eigenvalues_numeric(prob, 0)
    with pytest.raises(ValidationError):
        eigenvalues_closed_form(prob, 0)
