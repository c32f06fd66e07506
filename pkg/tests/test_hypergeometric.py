import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fourbody_efimov.errors import DomainError, ValidationError
from fourbody_efimov.hypergeometric import gauss_2f1, hyp2f1_series


def raw_series(a, b, c, z, terms=4000):
    a, b, c, z = (mpmath.mpc(x) for x in (a, b, c, z))
    total, term = mpmath.mpc(1), mpmath.mpc(1)
    with mpmath.workdps(40):
        for k in range(terms):
            term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z
            total += term
            if abs(term) < mpmath.mpf(10) ** -35:
                break
    return complex(total)


def test_z_zero():
    assert gauss_2f1(0.3 + 1j, 2.0, 1.5, 0.0) == 1.0


def test_log_closed_form():
    assert gauss_2f1(1, 1, 2, 0.5).real == pytest.approx(2 * math.log(2), rel=1e-13)
    assert raw_series(1, 1, 2, 0.5).real == pytest.approx(2 * math.log(2), rel=1e-13)


def test_trimer_parameters_against_series_oracle():
    a = 0.75 + 0.503j
    expected = raw_series(a, a, 1.5, 0.3)
    got = gauss_2f1(a, a, 1.5, 0.3)
    assert abs(got - expected) < 1e-12 * abs(expected)


@settings(max_examples=60, deadline=None)
@given(
    st.floats(-6, 6),
    st.floats(-3, 3),
    st.floats(-6, 6),
    st.floats(0.0, 0.995),
)
def test_matches_mpmath(re_l, im_s, re_l2, z):
    # parameter shape used by the channel functions: c = 3/2, a + b = 3/2 + i s
    a = 0.75 + 0.5j * im_s - 0.5 * re_l
    b = 0.75 + 0.5j * im_s + 0.5 * re_l
    if abs(im_s) < 1e-6:  # c - a - b integer on the real axis
        return
    ref = complex(mpmath.hyp2f1(a, b, 1.5, z))
    got = gauss_2f1(a, b, 1.5, z)
    assert abs(got - ref) <= 1e-9 * max(1.0, abs(ref))


def test_series_and_connection_agree_at_switch():
    a, b = 0.75 + 0.4j - 2.1, 0.75 + 0.4j + 2.1
    ref = complex(mpmath.hyp2f1(a, b, 1.5, 0.5))
    assert abs(hyp2f1_series(a, b, 1.5, 0.5) - ref) < 1e-12 * abs(ref)
    assert abs(gauss_2f1(a, b, 1.5, 0.5000001) - complex(mpmath.hyp2f1(a, b, 1.5, 0.5000001))) < 1e-11


def test_domain():
    with pytest.raises(DomainError):
        gauss_2f1(1, 1, 2, 1.0)
    with pytest.raises(DomainError):
        gauss_2f1(1, 1, 2, -0.1)
    with pytest.raises(ValidationError):
        gauss_2f1(1, 1, 2, 0.9)  # c - a - b = 0
