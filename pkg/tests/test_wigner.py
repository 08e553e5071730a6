import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tdlandau.dynamics import Frame, static_frame
from tdlandau.errors import DomainError
from tdlandau.states import StateSpec
from tdlandau.wigner import (
    line_wavefunction,
    marginal_p,
    monomial_coefficients,
    wigner_direct,
    wigner_grid,
    wigner_series,
    wigner_term_tensor,
)

FRAME = static_frame()


@pytest.mark.parametrize("spec", [StateSpec(cmath.exp(0.7j), 0.5), StateSpec(0.6 - 0.8j, 1.5, 2)])
@pytest.mark.parametrize("y,p", [(-1.5, 0.0), (0.0, 0.6), (1.2, -0.9)])
def test_series_matches_direct_transform(spec, y, p):
    s = wigner_series(spec, FRAME, y, p)
    d = wigner_direct(spec, FRAME, y, p)
    assert s == pytest.approx(d, rel=1e-9, abs=1e-14)


def test_vacuum_like_state_single_term():
    # z = 0, m = 0: one level, Psi(y) = N xi^{l/2} e^{-xi/2}
    spec = StateSpec(0.0, 1.0)
    A, cv = monomial_coefficients(spec, FRAME)
    assert A.size == 1 and cv.n_max == 0
    assert wigner_series(spec, FRAME, 0.3, 0.4) == pytest.approx(wigner_direct(spec, FRAME, 0.3, 0.4), rel=1e-10)


@settings(max_examples=20, deadline=None)
@given(r=st.floats(0.0, 2.0), ph=st.floats(-math.pi, math.pi), ell=st.sampled_from([0.0, 0.5, 1.5, 2.5]),
       m=st.integers(0, 3), y=st.floats(-3.0, 3.0), p=st.floats(-2.0, 2.0))
def test_imaginary_residue_is_rounding(r, ph, ell, m, y, p):
    spec = StateSpec(r * cmath.exp(1j * ph), ell, m)
    re, im = wigner_series(spec, FRAME, y, p, return_imag=True)
    psi0 = abs(line_wavefunction(spec, FRAME)(np.array([y]))[0]) ** 2
    assert abs(im) <= 1e-10 * max(abs(re), psi0, 1e-3)


def test_momentum_reflection_with_real_label():
    # real coefficients give W(y, p) = W(y, -p)
    spec = StateSpec(1.3, 1.5, 1)
    assert wigner_series(spec, FRAME, 0.4, 0.7) == pytest.approx(wigner_series(spec, FRAME, 0.4, -0.7), rel=1e-12)


def test_complex_label_breaks_reflection_and_fixes_sign():
    # the sign of the imaginary order shift matters once z is complex
    spec = StateSpec(cmath.exp(0.7j), 0.5)
    plus = wigner_series(spec, FRAME, 0.3, 0.6)
    minus = wigner_series(spec, FRAME, 0.3, -0.6)
    direct = wigner_direct(spec, FRAME, 0.3, 0.6)
    assert plus == pytest.approx(direct, rel=1e-10)
    assert abs(minus - direct) > 1e-4 * abs(direct)


def test_marginal_is_line_density():
    spec = StateSpec(0.8 + 0.3j, 1.5, 1)
    y = 0.2
    psi = line_wavefunction(spec, FRAME)(np.array([y]))[0]
    assert marginal_p(spec, FRAME, y) == pytest.approx(abs(psi) ** 2, rel=1e-6)


def test_term_tensor_sums_to_series():
    spec = StateSpec(0.9 + 0.4j, 1.5, 2)
    T = wigner_term_tensor(spec, FRAME, 0.3, 0.5, form="photon_added")
    assert T.sum().real == pytest.approx(wigner_series(spec, FRAME, 0.3, 0.5), rel=1e-10)
    shifted = wigner_term_tensor(spec, FRAME, 0.3, 0.5, form="photon_added", xi_power=spec.ell - 2 * spec.m)
    assert abs(shifted.sum().real - T.sum().real) > 1e-3 * abs(T.sum().real)


def test_photon_added_terms_reduce_to_plain_terms():
    spec = StateSpec(0.9 + 0.4j, 1.5, 0)
    plain = wigner_term_tensor(spec, FRAME, -0.4, 0.8, form="plain")
    added = wigner_term_tensor(spec, FRAME, -0.4, 0.8, form="photon_added")
    np.testing.assert_allclose(added, plain, rtol=1e-12, atol=1e-18)
    with pytest.raises(DomainError):
        wigner_term_tensor(StateSpec(1.0, 1.5, 1), FRAME, 0.0, 0.0, form="plain")


def test_cross_function_is_hermitian():
    a = StateSpec(0.7 + 0.2j, 1.0, 1)
    b = StateSpec(-0.3 + 0.9j, 1.0, 0)
    ab = wigner_series(a, FRAME, 0.1, 0.4, spec_other=b)
    ba = wigner_series(b, FRAME, 0.1, 0.4, spec_other=a)
    assert abs(ab - ba.conjugate()) < 1e-13
    assert abs(ab - wigner_direct(a, FRAME, 0.1, 0.4, spec_other=b)) < 1e-9 * abs(ab)
    with pytest.raises(DomainError):
        wigner_series(a, FRAME, 0.0, 0.0, spec_other=StateSpec(1.0, 2.0))


def test_moving_envelope_needs_opt_in():
    moving = Frame(rho=1.0, rho_dot=0.3)
    spec = StateSpec(0.5, 1.0)
    with pytest.raises(DomainError):
        wigner_series(spec, moving, 0.0, 0.0)
    with pytest.raises(DomainError):
        wigner_direct(spec, moving, 0.0, 0.0)
    val = wigner_series(spec, moving, 0.0, 0.2, experimental=True)
    assert math.isfinite(val)


def test_grid_threads_deterministic(monkeypatch):
    spec = StateSpec(0.6 + 0.5j, 0.5, 1)
    ys, ps = np.linspace(-1, 1, 4), np.linspace(-0.5, 0.5, 3)
    monkeypatch.setenv("TDLANDAU_THREADS", "1")
    a = wigner_grid(spec, FRAME, ys, ps)
    monkeypatch.setenv("TDLANDAU_THREADS", "4")
    b = wigner_grid(spec, FRAME, ys, ps)
    assert np.array_equal(a.values, b.values)
    assert a.values.shape == (4, 3)
    assert a.imag_residue < 1e-8
