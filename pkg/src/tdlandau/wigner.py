r"""Wigner functions of coherent and photon-added coherent states.

The transform acts on the logarithmic line coordinate ``y``: the basis
variable is :math:`X = e^{-y}` (so a physical radius ``r`` sits at
:math:`y = -\ln(\kappa r^2/\rho^2)`) and

.. math::
    W(y, p) = \frac{1}{2\pi}\int e^{-ipv}\,\Psi^*(y - v/2)\,\Psi(y + v/2)\,dv,
    \qquad \Psi(y) = \psi(X = e^{-y}).

Expanding every Laguerre polynomial in powers of ``X`` collapses the
transform into a finite double sum of Bessel functions of imaginary-shifted
order:

.. math::
    W = \frac{2}{\pi}\,\xi^{\ell}\sum_{k,k'} \bar a_{k'} a_k\,
        K_{k-k'+2ip}(\xi),\qquad \xi = e^{-y},

with :math:`a_k = \xi^k (-1)^k/k! \sum_{N\ge k} C_N \binom{N+\ell}{N-k}`.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.special import gammaln

from .errors import DomainError
from .specfun import bessel_k_many
from .states import StateSpec, basis_functions, build_coefficients

IMAG_TOL = 1e-8


@dataclass(frozen=True)
class WignerGrid:
    y_samples: np.ndarray
    p_samples: np.ndarray
    values: np.ndarray          # shape (len(y), len(p))
    spec: StateSpec
    time: float
    n_max: int
    tail_bound: float
    imag_residue: float


def _log_binom(a, b):
    # log C(a, b) for real a >= b >= 0
    return gammaln(a + 1) - gammaln(b + 1) - gammaln(a - b + 1)


def level_amplitudes(spec, frame, n_max=None):
    """C_N for the occupied levels N = n + m, so psi(X) = sum_N C_N X^{l/2} e^{-varpi X/2} L_N(X).

    Returns ``(levels, amplitudes, coefficient_vector)``.
    """
    cv = build_coefficients(spec, n_max)
    levels = cv.levels
    ell = spec.ell
    log_norm = 0.5 * (gammaln(levels + 1.0) - gammaln(levels + ell + 1.0))
    amp = cv.coeffs * frame.basis_prefactor(levels, ell) * np.exp(log_norm + 1j * frame.gammas(levels, ell))
    return levels, amp, cv


def monomial_coefficients(spec, frame, n_max=None):
    """A_k with psi(X) = X^{l/2} e^{-varpi X/2} sum_k A_k X^k (finite sum)."""
    levels, amp, cv = level_amplitudes(spec, frame, n_max)
    ell = spec.ell
    top = int(levels[-1])
    k = np.arange(top + 1)
    A = np.zeros(top + 1, dtype=complex)
    for N, c in zip(levels, amp):
        kk = k[: N + 1]
        coef = np.exp(_log_binom(N + ell, N - kk) - gammaln(kk + 1.0)) * np.where(kk % 2 == 0, 1.0, -1.0)
        A[: N + 1] += c * coef
    return A, cv


def line_wavefunction(spec, frame, n_max=None):
    """Callable Psi(y) = psi(X = e^{-y}) built once from the coefficients."""
    cv = build_coefficients(spec, n_max)

    def psi(y):
        y = np.asarray(y, dtype=float)
        X = np.exp(-y)
        basis = basis_functions(frame, spec.ell, cv.levels, X)
        return np.tensordot(cv.coeffs, basis, axes=1)

    return psi


def _correlations(a, b_conj):
    # S_j = sum_{k - k' = j} conj(b_{k'}) a_k for j = -(K-1) .. K-1
    return np.convolve(a, b_conj[::-1])


def _check_frame(frame, experimental):
    if not frame.is_static and not experimental:
        raise DomainError("rho_dot != 0 gives a complex varpi; pass experimental=True to use "
                          "the unverified complex-varpi formula")


def wigner_series(spec, frame, y, p, n_max=None, experimental=False, return_imag=False,
                  spec_other=None):
    """Wigner function from the finite Bessel-K double sum.

    ``spec_other`` (same ``ell``) gives the two-label cross function built
    from ``Psi_other^*`` and ``Psi``; it is not real in general.

    With a moving envelope (complex varpi) and ``experimental=True`` the
    variable becomes :math:`\\xi = e^{-\\varpi y}` and the kernel
    :math:`K_{k-k'+2ip/\\varpi}(\\varpi\\xi)` with prefactor
    :math:`2/(\\pi\\varpi)`; this form is not checked against the direct
    transform.
    """
    _check_frame(frame, experimental)
    A, _ = monomial_coefficients(spec, frame, n_max)
    B = A if spec_other is None else monomial_coefficients(spec_other, frame, n_max)[0]
    if spec_other is not None and spec_other.ell != spec.ell:
        raise DomainError("cross Wigner function needs equal ell")
    varpi = frame.varpi
    static = frame.is_static
    xi = math.exp(-float(y)) if static else np.exp(-varpi * float(y))
    ka = np.arange(A.size)
    kb = np.arange(B.size)
    a = A * xi ** ka
    b_conj = np.conj(B) * xi ** kb if not static else np.conj(B * xi ** kb)
    S = _correlations(a, b_conj)
    j = np.arange(-(B.size - 1), A.size)
    if static:
        orders = j + 2j * float(p)
        K, _ = bessel_k_many(orders, xi)
        val = 2.0 / math.pi * xi ** spec.ell * np.dot(S, K)
    else:
        orders = j + 2j * float(p) / varpi
        K, _ = bessel_k_many(orders, varpi * xi)
        val = 2.0 / (math.pi * varpi) * xi ** spec.ell * np.dot(S, K)
    if spec_other is not None:
        return complex(val)
    if return_imag:
        return float(val.real), float(val.imag)
    return float(val.real)


def wigner_direct(spec, frame, y, p, n_max=None, x_max=None, spec_other=None):
    """Wigner function by adaptive quadrature of the defining transform.

    The integrand decays doubly exponentially once ``e^{-y + |v|/2}``
    exceeds ``x_max``, which fixes the integration range.
    """
    _check_frame(frame, False)
    psi = line_wavefunction(spec, frame, n_max)
    phi = psi if spec_other is None else line_wavefunction(spec_other, frame, n_max)
    cv = build_coefficients(spec, n_max)
    top = cv.n_max + spec.m
    x_max = x_max or (4.0 * top + 2.0 * spec.ell + 80.0)
    half = max(1.0, float(y) + math.log(x_max))
    v_max = 2.0 * half
    y = float(y)
    p = float(p)

    def prod(v):
        return np.conj(phi(np.array([y - v / 2]))[0]) * psi(np.array([y + v / 2]))[0]

    def re(v):
        return (np.exp(-1j * p * v) * prod(v)).real

    def im(v):
        return (np.exp(-1j * p * v) * prod(v)).imag

    opts = dict(limit=500, epsabs=1e-15, epsrel=1e-12)
    r, _ = quad(re, -v_max, v_max, **opts)
    if spec_other is None:
        return r / (2 * math.pi)
    i, _ = quad(im, -v_max, v_max, **opts)
    return complex(r, i) / (2 * math.pi)


def _threads():
    try:
        return max(1, int(os.environ.get("TDLANDAU_THREADS", "1")))
    except ValueError:
        return 1


def wigner_grid(spec, frame, ys, ps, n_max=None, experimental=False, time=0.0):
    """Wigner series on a (y, p) grid; rows follow ``ys``, columns ``ps``."""
    ys = np.asarray(ys, dtype=float)
    ps = np.asarray(ps, dtype=float)
    cv = build_coefficients(spec, n_max)
    jobs = [(yv, pv) for yv in ys for pv in ps]

    def one(job):
        return wigner_series(spec, frame, job[0], job[1], cv.n_max, experimental, return_imag=True)

    workers = _threads()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            res = list(pool.map(one, jobs))
    else:
        res = [one(j) for j in jobs]
    vals = np.array([r for r, _ in res]).reshape(ys.size, ps.size)
    imag = np.array([i for _, i in res]).reshape(ys.size, ps.size)
    scale = max(np.max(np.abs(vals)), 1e-300)
    return WignerGrid(ys, ps, vals, spec, time, cv.n_max, cv.tail_mass,
                      float(np.max(np.abs(imag)) / scale))


def wigner_term_tensor(spec, frame, y, p, form="plain", xi_power=None):
    r"""Individual terms T[n, n', k, k'] of the level-resolved quadruple sum.

    ``form="plain"`` uses the coherent-state weights
    :math:`|z|^\ell/I_\ell \cdot z^n \bar z^{n'}/(\Gamma(n+\ell+1)\Gamma(n'+\ell+1))`;
    ``form="photon_added"`` uses
    :math:`\mathcal{M}_m^2 z^n \bar z^{n'} \varphi` with
    :math:`\varphi = (n+m)!(n'+m)!/(\Gamma(n+\ell+1)\Gamma(n'+\ell+1) n! n'!)`.
    The power of :math:`\xi` defaults to ``ell``; summing all terms gives the
    Wigner function. Only static frames are supported.
    """
    _check_frame(frame, False)
    if form not in ("plain", "photon_added"):
        raise DomainError(f"unknown form {form!r}")
    ell, m = spec.ell, spec.m
    if form == "plain" and m != 0:
        raise DomainError("the plain form describes m = 0 only")
    cv = build_coefficients(spec)
    n = np.arange(cv.n_max + 1)
    N = n + m
    xi = math.exp(-float(y))
    z = spec.z
    if form == "plain":
        from .states import bg_norm
        log_w = -gammaln(n + ell + 1.0)
        norm2 = bg_norm(z, ell) ** 2
    else:
        log_w = gammaln(N + 1.0) - gammaln(n + ell + 1.0) - gammaln(n + 1.0)
        norm2 = cv.norm_constant ** 2
    zpow = np.array([z ** int(k) for k in n], dtype=complex)
    pref = frame.basis_prefactor(N, ell) * np.exp(1j * frame.gammas(N, ell))
    w = zpow * np.exp(log_w) * pref
    kmax = int(N[-1])
    k = np.arange(kmax + 1)
    # Laguerre monomial coefficients: coeff[N_idx, k]
    coeff = np.zeros((n.size, kmax + 1))
    for i, L in enumerate(N):
        kk = k[: L + 1]
        coeff[i, : L + 1] = np.exp(_log_binom(L + ell, L - kk) - gammaln(kk + 1.0)) * (-xi) ** kk
    orders = np.arange(-kmax, kmax + 1) + 2j * float(p)
    K, _ = bessel_k_many(orders, xi)
    Kmat = K[(k[:, None] - k[None, :]) + kmax]            # K[k, k']
    power = ell if xi_power is None else xi_power
    front = 2.0 / math.pi * norm2 * xi ** power
    # T[n, n', k, k'] = front * w_n conj(w_n') coeff[n,k] coeff[n',k'] K[k,k']
    return front * np.einsum("a,b,ak,bl,kl->abkl", w, np.conj(w), coeff, coeff, Kmat)


def marginal_p(spec, frame, y, p_max=40.0, n_max=None):
    """Integral of the series Wigner function over p, for the marginal check."""
    val, _ = quad(lambda p: wigner_series(spec, frame, y, p, n_max), -p_max, p_max,
                  limit=400, epsabs=1e-13, epsrel=1e-10)
    return val
