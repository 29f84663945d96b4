import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alhimcf.warped import (
    S_MIN_HYPERBOLIC,
    AmbientModel,
    DomainError,
    lam,
    lam_ddot,
    lam_dot,
    r_from_s,
    rho,
    s_from_r,
)

s_any = st.floats(min_value=-5.0, max_value=8.0)
s_hyp = st.floats(min_value=S_MIN_HYPERBOLIC, max_value=8.0)


def test_lambda_values():
    assert lam(0.0, 0) == 1.0
    assert lam(math.log(2.0), -1) == pytest.approx(1.0, abs=1e-15)


@given(s_any)
def test_identities_flat(s):
    l, ld = lam(s, 0), lam_dot(s, 0)
    assert abs(ld**2 - l**2) <= 1e-12 * l**2
    assert lam_ddot(s, 0) == pytest.approx(l, rel=1e-14)


@given(s_hyp)
def test_identities_hyperbolic(s):
    l, ld = lam(s, -1), lam_dot(s, -1)
    assert abs(ld**2 - l**2 + 1.0) <= 1e-12 * max(1.0, l**2)
    assert lam_ddot(s, -1) == pytest.approx(l, rel=1e-14)


def test_lambda_domain():
    with pytest.raises(DomainError):
        lam(0.5, -1)
    with pytest.raises(DomainError):
        lam(1.0, 1)


def test_rho_values():
    assert rho(1.0, -1) == 0.0
    assert rho(2.0, -1) == pytest.approx(math.sqrt(3.0), rel=1e-15)
    assert rho(math.e, 0) == pytest.approx(math.e)
    assert abs(lam_dot(1.0, 0) - math.e) < 1e-12
    with pytest.raises(DomainError):
        rho(0.5, -1)


def test_s_from_r_values():
    assert s_from_r(1.0, -1) == pytest.approx(math.log(2.0), abs=1e-15)
    assert s_from_r(2.0, -1) == pytest.approx(math.log(4 + 2 * math.sqrt(3)), rel=1e-14)
    with pytest.raises(DomainError):
        s_from_r(0.9, -1)
    with pytest.raises(DomainError):
        s_from_r(0.0, 0)


def test_round_trip_random():
    rng = np.random.default_rng(3)
    for eps, lo in ((0, 1e-3), (-1, 1.0)):
        r = rng.uniform(lo, 50.0, 100)
        s = s_from_r(r, eps)
        assert np.max(np.abs(lam(s, eps) - r) / r) < 1e-12
        assert np.max(np.abs(r_from_s(s, eps) - r) / r) < 1e-12


@settings(max_examples=50)
@given(st.floats(min_value=1.0, max_value=1e4))
def test_rho_is_lambda_dot(r):
    s = s_from_r(r, -1)
    assert rho(r, -1) == pytest.approx(lam_dot(s, -1), rel=1e-10, abs=1e-7)


def test_ambient_defaults():
    assert AmbientModel(3, 0).theta == pytest.approx((2 * math.pi) ** 2)
    assert AmbientModel(4, 0).theta == pytest.approx((2 * math.pi) ** 3)
    assert AmbientModel(3, -1, genus=3).theta == pytest.approx(8 * math.pi)
    assert AmbientModel(3, 0, genus=1).theta == pytest.approx(4 * math.pi)
    a = AmbientModel(4, -1, theta=2.5)
    assert a.c_n == pytest.approx(1.0 / (2 * 3 * 2.5))


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(n=2, epsilon=0),
        dict(n=3, epsilon=1),
        dict(n=3, epsilon=-1),
        dict(n=3, epsilon=0, theta=-1.0),
        dict(n=4, epsilon=-1, genus=2),
        dict(n=3, epsilon=0, genus=2),
        dict(n=3, epsilon=-1, genus=0),
    ],
)
def test_ambient_rejects(kwargs):
    with pytest.raises(ValueError):
        AmbientModel(**kwargs)
