import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tdlandau.errors import DomainError, SingularityError
from tdlandau.measure import (
    bg_weight,
    bg_weight_asymptotic,
    density_moment,
    identity_resolution_residual,
    m0_density_closed,
    mellin_moment_target,
    moment_residual,
    pacs_weight,
    pacs_weight_density,
    weight_function,
)
from tdlandau.states import log_fm

# x^{-m} G^{40}_{24}(x | -, (m, m+l); (0, 0, l, l), -) with mpmath at 40 digits
DENSITY_REF = [
    ((1.5, 0, 0.5), 0.52015823636812708),
    ((1.5, 1, 0.5), 0.51059564323128104),
    ((2.5, 3, 2.0), 3.1962152263792188e-5),
    ((0.5, 2, 10.0), 6.1209776822075188e-8),
    ((1.5, 1, 0.01), 203.42393819645831),
]
OMEGA_REF = [
    ((0.5, 0.3), 0.3707279847846685),
    ((1.5, 2.0), 0.074645590930148815),
    ((2.0, 8.0), 0.019749409871782938),
]


@pytest.mark.parametrize("args,ref", DENSITY_REF)
def test_density_reference(args, ref):
    val, err = pacs_weight_density(*args, return_error=True)
    assert val == pytest.approx(ref, rel=1e-10)
    assert err < 1e-9 * abs(ref) + 1e-15


@pytest.mark.parametrize("args,ref", OMEGA_REF)
def test_bessel_weight_reference(args, ref):
    assert bg_weight(*args) == pytest.approx(ref, rel=1e-13)


def test_m0_density_routes_agree():
    for ell in (0.0, 0.5, 2.0):
        for x in (0.01, 0.7, 5.0, 40.0):
            assert pacs_weight_density(ell, 0, x) == pytest.approx(m0_density_closed(ell, x), rel=1e-11)


@pytest.mark.parametrize("ell", [0.5, 1.0, 1.5, 2.0])
def test_weight_asymptotic_expansion(ell):
    for r in (20.0, 40.0, 100.0):
        assert bg_weight(ell, r) == pytest.approx(bg_weight_asymptotic(ell, r), rel=1e-6)


def test_k_only_asymptotic_form_carries_a_spurious_first_order_term():
    # exact at ell = 1/2, otherwise off by (ell^2/2 - 1/8)/r to leading order
    assert bg_weight(0.5, 20.0) == pytest.approx(bg_weight_asymptotic(0.5, 20.0, "k_only"), rel=1e-12)
    for ell in (1.5, 2.0):
        for r in (20.0, 100.0):
            ratio = bg_weight_asymptotic(ell, r, "k_only") / bg_weight(ell, r) - 1
            assert ratio == pytest.approx((ell * ell / 2 - 0.125) / r, rel=0.02)


def test_weight_function_dispatch():
    w0 = weight_function(1.5)
    assert w0(0.8) == pytest.approx(math.pi * bg_weight(1.5, 0.8))
    assert weight_function(1.5, 0, "mellin_inversion")(0.8) == pytest.approx(w0(0.8), rel=1e-11)
    with pytest.raises(DomainError):
        weight_function(1.5, 2, "bessel_product")


@pytest.mark.parametrize("ell,m", [(0.5, 0), (1.5, 1), (2.5, 3)])
def test_moments(ell, m):
    for s in range(m + 1, m + 5):
        assert moment_residual(ell, m, s) < 1e-9
    # a non-integer moment as well
    assert density_moment(ell, m, m + 2.5) == pytest.approx(mellin_moment_target(ell, m, m + 2.5), rel=1e-9)


def test_moment_target_is_fm():
    assert mellin_moment_target(1.5, 2, 5.0) == pytest.approx(math.exp(log_fm(1.5, 2, 2)), rel=1e-14)
    with pytest.raises(SingularityError):
        mellin_moment_target(1.5, 2, 1.0)
    with pytest.raises(DomainError):
        mellin_moment_target(1.5, 2, 1.3)


@pytest.mark.parametrize("ell,m", [(1.0, 0), (1.5, 1), (2.5, 2)])
def test_identity_resolution(ell, m):
    for n in (0, 3, 8):
        assert identity_resolution_residual(ell, m, n) < 1e-8


@settings(max_examples=25, deadline=None)
@given(ell=st.sampled_from([0.5, 1.0, 1.5, 2.5, 3.7]), m=st.integers(0, 3), logx=st.floats(-8.0, 4.0))
def test_density_positive(ell, m, logx):
    assert pacs_weight_density(ell, m, math.exp(logx)) > 0


def test_small_x_behaviour():
    # g_m(x) ~ x^{-m} ln(1/x) as x -> 0 for m >= 1
    a = pacs_weight_density(1.5, 1, 1e-4) * 1e-4
    b = pacs_weight_density(1.5, 1, 1e-5) * 1e-5
    assert b / a == pytest.approx(math.log(1e5) / math.log(1e4), rel=0.05)


def test_pacs_weight_is_positive_and_vectorized():
    xs = np.array([0.1, 1.0, 4.0])
    np.testing.assert_allclose(pacs_weight_density(1.5, 2, xs), [pacs_weight_density(1.5, 2, x) for x in xs])
    assert all(pacs_weight(2.5, m, 1.2) > 0 for m in range(4))
    with pytest.raises(DomainError):
        pacs_weight_density(1.5, 1, -1.0)
    with pytest.raises(DomainError):
        bg_weight(1.0, 0.0)
