import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tdlandau.errors import ConvergenceError, DomainError, SeriesCapError
from tdlandau.specfun import (
    bessel_i,
    bessel_i_scaled,
    bessel_j_complex,
    bessel_j_series,
    bessel_k,
    bessel_k_many,
    hypergeometric_pfq,
    laguerre,
    laguerre_table,
    log_bessel_i,
    log_gamma,
    power_series,
)

# reference values computed with mpmath at 40 digits
LAGUERRE_REF = [
    ((5, 0.5, 1.3), -0.73148066666666661),
    ((20, 1.5, 7.0), -6.3797904332980422),
    ((50, 2.0, 30.0), -461059.5001253888),
    ((3, 0.0, -2.5), 20.479166666666667),
]
BESSEL_I_REF = [
    ((0.5, 0.1), 0.25273398460013198),
    ((1.5, 3.0), 3.0994834567256358),
    ((2.5, 30.0), 703124015519.20325),
    ((0.0, 50.0), 2.9325537838493363e20),
    ((7.25, 12.0), 2071.1803784521686),
]
BESSEL_K_REF = [
    ((0.5, 1.0), complex(0.46106850444789456, 0.0)),
    ((2 + 0.6j, 0.7), complex(1.9590125578321427, 2.6894741920129436)),
    ((-3 - 1.2j, 2.0), complex(0.13038566027876887, 0.51169754018617946)),
    ((2j, 0.3), complex(-0.054725606166307684, 0.0)),
    ((6 + 1j, 5.0), complex(0.04270339632305743, 0.062442563728165674)),
]
BESSEL_J_REF = [
    ((0.5, 1 + 2j), complex(1.9866134730419218, 0.0013808728354314965)),
    ((2.5, -3 + 0.5j), complex(0.070278253529669979, 0.43437573865694113)),
    ((0.0, 4 - 4j), complex(-8.3843291630440359, -4.0282126251040307)),
]


@pytest.mark.parametrize("args,ref", LAGUERRE_REF)
def test_laguerre_reference(args, ref):
    assert laguerre(*args) == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("args,ref", BESSEL_I_REF)
def test_bessel_i_reference(args, ref):
    assert bessel_i(*args) == pytest.approx(ref, rel=1e-13)


@pytest.mark.parametrize("args,ref", BESSEL_K_REF)
def test_bessel_k_complex_order_reference(args, ref):
    val = bessel_k(*args)
    assert abs(val - ref) <= 1e-13 * abs(ref)


@pytest.mark.parametrize("args,ref", BESSEL_J_REF)
def test_bessel_j_complex_argument_reference(args, ref):
    val = bessel_j_complex(*args)
    assert abs(val - ref) <= 1e-13 * abs(ref)


def test_hypergeometric_reference():
    ref = complex(2.0914605369491042, 0.71708949428770764)
    res = hypergeometric_pfq([1.5, 2], [0.5, 3.25, 4], 2 + 1j)
    assert abs(res.value - ref) < 1e-14 * abs(ref)
    assert res.terms_used >= 1 and not res.capped


def test_power_series_exp():
    res = power_series(1.0, lambda k: 2.5 / (k + 1))
    assert res.value.real == pytest.approx(math.exp(2.5), rel=1e-15)
    assert res.tail_bound <= 1e-15 * abs(res.value)


def test_power_series_cap_flagged():
    res = power_series(1.0, lambda k: 1.0, max_terms=50)
    assert res.capped and res.terms_used == 50


def test_hypergeometric_rejects_divergent():
    with pytest.raises(DomainError):
        hypergeometric_pfq([1, 1, 1], [1], 0.5)


def test_laguerre_low_orders():
    u = np.linspace(-3, 9, 13)
    tab = laguerre_table(2, 1.5, u)
    np.testing.assert_allclose(tab[1], 2.5 - u)
    np.testing.assert_allclose(tab[2], (u * u - 2 * 3.5 * u + 3.5 * 2.5) / 2, rtol=1e-14, atol=1e-14)


def test_laguerre_domain():
    with pytest.raises(DomainError):
        laguerre(-1, 0.5, 1.0)
    with pytest.raises(DomainError):
        laguerre(2, -1.5, 1.0)


def test_log_gamma_matches_math():
    assert log_gamma(7.5) == pytest.approx(math.lgamma(7.5))
    with pytest.raises(DomainError):
        log_gamma(0.0)


def test_large_argument_scaled_and_overflow():
    # e^{-x} I_nu(x) stays finite where I_nu itself overflows
    val = bessel_i_scaled(1.0, 1000.0)
    assert val == pytest.approx(float(mp.besseli(1, 1000) * mp.exp(-1000)), rel=1e-13)
    with pytest.raises(OverflowError):
        bessel_i(1.0, 1000.0)
    assert log_bessel_i(1.0, 1000.0) == pytest.approx(float(mp.log(mp.besseli(1, 1000))), rel=1e-15)


def test_bessel_k_scaled_and_domain():
    assert bessel_k(1.5, 40.0, scaled=True).real == pytest.approx(float(mp.besselk(1.5, 40) * mp.exp(40)), rel=1e-13)
    with pytest.raises(DomainError):
        bessel_k(1.0, 0.0)
    with pytest.raises(DomainError):
        bessel_k_many([complex("nan")], 1.0)


def test_bessel_k_many_error_estimate():
    nus = np.arange(-4, 5) + 0.8j
    vals, errs = bessel_k_many(nus, 1.7)
    for nu, v, e in zip(nus, vals, errs):
        ref = complex(mp.besselk(complex(nu), 1.7))
        assert abs(v - ref) <= 1e-13 * abs(ref)
        assert e <= 1e-12 * abs(ref) + 1e-300


def test_bessel_k_nonconvergence_reported():
    with pytest.raises(ConvergenceError):
        bessel_k_many([0.5], 1.0, max_halvings=1)


def test_bessel_k_complex_argument():
    ref = complex(mp.besselk(1.3 + 0.4j, 0.9 - 0.3j))
    assert abs(bessel_k(1.3 + 0.4j, 0.9 - 0.3j) - ref) < 1e-13 * abs(ref)


def test_bessel_j_radius_cap():
    assert bessel_j_series(1.0, 100.0).capped
    with pytest.raises(SeriesCapError):
        bessel_j_complex(1.0, 100.0)


# ---------------------------------------------------------------- properties

@settings(max_examples=40, deadline=None)
@given(nu=st.floats(0.0, 6.0), x=st.floats(0.05, 60.0))
def test_bessel_i_recurrence(nu, x):
    # I_{nu-1} - I_{nu+1} = (2 nu / x) I_nu, with nu >= 1 shifted to keep orders >= 0
    nu = nu + 1.0
    lhs = math.exp(log_bessel_i(nu - 1, x) - log_bessel_i(nu, x)) - math.exp(log_bessel_i(nu + 1, x) - log_bessel_i(nu, x))
    assert lhs == pytest.approx(2 * nu / x, rel=1e-12)


@settings(max_examples=30, deadline=None)
@given(a=st.floats(-5.0, 5.0), b=st.floats(-3.0, 3.0), x=st.floats(0.1, 10.0))
def test_bessel_k_order_symmetry(a, b, x):
    # K_{-nu} = K_nu and conj(K_nu) = K_{conj nu} for real x
    nu = complex(a, b)
    vals, _ = bessel_k_many([nu, -nu, nu.conjugate()], x, scaled=True)
    scale = max(abs(vals[0]), 1e-300)
    assert abs(vals[0] - vals[1]) <= 1e-13 * scale
    assert abs(vals[0].conjugate() - vals[2]) <= 1e-13 * scale


@settings(max_examples=30, deadline=None)
@given(n=st.integers(0, 40), alpha=st.floats(0.0, 5.0), u=st.floats(0.0, 20.0))
def test_laguerre_derivative_identity(n, alpha, u):
    # u d/du L_n^a = n L_n^a - (n + a) L_{n-1}^a, checked against the table
    if n == 0:
        return
    tab = laguerre_table(n, alpha, np.array([u]))
    h = 1e-5 * max(1.0, u)
    d = (laguerre(n, alpha, u + h) - laguerre(n, alpha, u - h)) / (2 * h)
    rhs = n * tab[n, 0] - (n + alpha) * tab[n - 1, 0]
    scale = max(1.0, np.max(np.abs(tab)) * (n + alpha + 1))
    assert abs(u * d - rhs) <= 1e-6 * scale
