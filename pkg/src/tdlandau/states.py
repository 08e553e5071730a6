r"""Barut-Girardello-type coherent states and their photon-added versions.

A state is labelled by ``(z, ell, m)``. Its number-basis expansion is

.. math::
    |z, m\rangle = \mathcal{M}_m \sum_{n\ge 0} \frac{z^n}{\sqrt{F_m(\ell, n)}}\,|n+m\rangle,
    \qquad
    F_m(\ell,n) = \frac{\Gamma(n+\ell+1)^2\,\Gamma(n+1)^2}{\Gamma(n+m+\ell+1)\,\Gamma(n+m+1)},

and ``m = 0`` gives the plain coherent state. All Gamma ratios are handled
as logarithms.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp

from .algebra import ladder_matrix
from .errors import DomainError, LabelMismatchError, SeriesCapError
from .specfun import (
    SERIES_MAX_TERMS,
    bessel_j_complex,
    hypergeometric_pfq,
    laguerre_table,
    log_bessel_i,
    power_series,
)

# relative size of the last kept term of the normalization series
TAIL_RTOL = 1e-30


@dataclass(frozen=True)
class StateSpec:
    z: complex
    ell: float
    m: int = 0

    def __post_init__(self):
        z = complex(self.z)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise DomainError("z must be finite")
        if not self.ell >= 0:
            raise DomainError(f"ell must be >= 0, got {self.ell}")
        if int(self.m) != self.m or self.m < 0:
            raise DomainError(f"m must be a non-negative integer, got {self.m}")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "ell", float(self.ell))
        object.__setattr__(self, "m", int(self.m))

    @property
    def r(self):
        return abs(self.z)


def log_fm(ell, n, m):
    """log F_m(ell, n); ``n`` may be an integer array."""
    n = np.asarray(n, dtype=float)
    out = (2 * gammaln(n + ell + 1) + 2 * gammaln(n + 1)
           - gammaln(n + m + ell + 1) - gammaln(n + m + 1))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class FmFactor:
    ell: float
    n: int
    m: int
    log_value: float

    @property
    def value(self):
        return math.exp(self.log_value)


def fm_factor(ell, n, m):
    if n < 0 or m < 0:
        raise DomainError("n and m must be non-negative")
    return FmFactor(float(ell), int(n), int(m), log_fm(ell, n, m))


def _log_terms(ell, m, r, n_max):
    n = np.arange(n_max + 1)
    if r == 0:
        out = np.full(n_max + 1, -np.inf)
        out[0] = -log_fm(ell, 0, m)
        return out
    return 2 * n * math.log(r) - log_fm(ell, n, m)


def auto_n_max(ell, m, r, rtol=TAIL_RTOL, cap=SERIES_MAX_TERMS):
    """Smallest N past the peak of |z|^{2n}/F_m whose term is <= rtol * partial sum."""
    if r == 0:
        return 0
    log_r2 = 2 * math.log(r)
    log_rtol = math.log(rtol)
    logsum = -math.inf
    prev = -math.inf
    for n in range(cap):
        t = n * log_r2 - log_fm(ell, n, m)
        logsum = np.logaddexp(logsum, t)
        if t < prev and t - logsum <= log_rtol:
            return n
        prev = t
    raise SeriesCapError(f"normalization series for |z|={r}, ell={ell}, m={m} exceeds {cap} terms")


def _log_norm_sum(ell, m, r, n_max=None):
    """(log of the normalization series, relative tail estimate, n_max)."""
    if n_max is None:
        n_max = auto_n_max(ell, m, r)
    lt = _log_terms(ell, m, r, n_max)
    total = logsumexp(lt)
    if n_max == 0 or r == 0:
        return total, 0.0, n_max
    # term ratios decrease past the peak, so the tail is below a geometric series
    ratio = math.exp(lt[-1] - lt[-2])
    tail = math.exp(lt[-1] - total) * ratio / (1 - ratio) if ratio < 1 else math.inf
    return total, tail, n_max


def pacs_norm(z, ell, m):
    """Normalization constant [sum_n |z|^{2n}/F_m(ell, n)]^{-1/2}."""
    log_sum, _, _ = _log_norm_sum(ell, m, abs(complex(z)))
    return math.exp(-0.5 * log_sum)


def bg_norm(z, ell):
    """Normalization sqrt(|z|^ell / I_ell(2|z|)) of the plain coherent state."""
    r = abs(complex(z))
    if ell < 0:
        raise DomainError(f"ell must be >= 0, got {ell}")
    if r == 0:
        return math.sqrt(math.gamma(ell + 1))
    return math.exp(0.5 * (ell * math.log(r) - log_bessel_i(ell, 2 * r)))


@dataclass(frozen=True)
class CoefficientVector:
    """Truncated expansion; ``coeffs[n]`` multiplies the basis level ``n + m``."""

    spec: StateSpec
    n_max: int
    coeffs: np.ndarray
    norm_constant: float
    tail_mass: float

    @property
    def levels(self):
        return np.arange(self.n_max + 1) + self.spec.m

    def full(self, dim=None):
        """Coefficients on levels ``0 .. dim-1`` (zeros below ``m``)."""
        dim = self.n_max + self.spec.m + 1 if dim is None else dim
        out = np.zeros(dim, dtype=complex)
        k = min(dim - self.spec.m, self.n_max + 1)
        if k > 0:
            out[self.spec.m:self.spec.m + k] = self.coeffs[:k]
        return out


def build_coefficients(spec, n_max=None, tol=1e-14):
    """Normalized number-basis coefficients of the state ``spec``.

    ``n_max`` is extended automatically when it leaves a tail heavier
    than ``tol``.
    """
    ell, m, r = spec.ell, spec.m, spec.r
    auto = auto_n_max(ell, m, r)
    log_total, _, _ = _log_norm_sum(ell, m, r, auto)
    if n_max is None:
        n_max = auto
    lt = _log_terms(ell, m, r, n_max)
    kept = logsumexp(lt)
    tail = max(0.0, -math.expm1(kept - log_total)) if n_max < auto else 0.0
    if n_max < auto and tail > tol:
        n_max = auto
        lt = _log_terms(ell, m, r, n_max)
        tail = 0.0
    if n_max >= auto:
        _, tail_est, _ = _log_norm_sum(ell, m, r, n_max)
        tail = tail_est
    mags = np.exp(0.5 * (lt - log_total))
    phase = np.exp(1j * np.arange(n_max + 1) * cmath.phase(spec.z)) if r > 0 else np.ones(n_max + 1)
    return CoefficientVector(spec, int(n_max), mags * phase, math.exp(-0.5 * log_total), float(tail))


def lowering_eigenvalue_residual(cv):
    """Norm of (K- - z) c over the truncated interior.

    Exactly zero only for ``m = 0`` states; photon-added states are not
    eigenvectors of the lowering generator.
    """
    dim = cv.n_max + cv.spec.m + 1
    if dim < 2:
        return 0.0
    c = cv.full(dim)
    km = ladder_matrix("lower", cv.spec.ell, dim)
    diff = km.apply(c) - cv.spec.z * c
    return float(np.linalg.norm(diff[:-1]))


def _check_pair(s1, s2):
    if s1.ell != s2.ell:
        raise LabelMismatchError(f"overlap needs equal ell, got {s1.ell} and {s2.ell}")


def overlap(spec1, spec2):
    """Inner product <spec1|spec2> from the coefficient vectors."""
    _check_pair(spec1, spec2)
    a = build_coefficients(spec1)
    b = build_coefficients(spec2)
    dim = max(a.n_max + spec1.m, b.n_max + spec2.m) + 1
    return complex(np.vdot(a.full(dim), b.full(dim)))


def overlap_hypergeometric(spec1, spec2):
    r"""Inner product <z' m'| z m> through the 2F3 series, for any m, m'.

    With ``m >= m'`` the sum is
    :math:`\mathcal{M}\mathcal{M}'(\bar z')^{m-m'} c_0\,{}_2F_3(m+1, m+\ell+1;
    m-m'+1, m-m'+\ell+1, \ell+1; \bar z' z)`. The case ``m < m'`` follows
    from conjugate symmetry.
    """
    _check_pair(spec1, spec2)
    if spec2.m < spec1.m:
        return overlap_hypergeometric(spec2, spec1).conjugate()
    ell = spec1.ell
    m, mp = spec2.m, spec1.m
    d = m - mp
    zp_bar = spec1.z.conjugate()
    log_c0 = (math.lgamma(m + 1) + math.lgamma(m + ell + 1) - math.lgamma(d + 1)
              - math.lgamma(d + ell + 1) - math.lgamma(ell + 1))
    series = hypergeometric_pfq([m + 1, m + ell + 1], [d + 1, d + ell + 1, ell + 1], zp_bar * spec2.z)
    if series.capped:
        raise SeriesCapError("2F3 overlap series hit the term cap")
    pref = pacs_norm(spec1.z, ell, mp) * pacs_norm(spec2.z, ell, m) * math.exp(log_c0)
    return complex(pref * zp_bar ** d * series.value)


def bessel_overlap_closed(z1, z2, ell):
    """Literal closed form I_ell(2 sqrt(z1* z2)) / sqrt(I_ell(2|z1|) I_ell(2|z2|)).

    The square root and the power inside I_ell use principal branches.
    """
    w = cmath.sqrt(complex(z1).conjugate() * complex(z2))
    if w == 0:
        num = 1.0 if ell == 0 else 0.0
    else:
        s = hypergeometric_pfq([], [ell + 1], w * w)
        num = cmath.exp(ell * cmath.log(w) - math.lgamma(ell + 1)) * s.value
    den = math.exp(0.5 * (log_bessel_i(ell, 2 * abs(z1)) + log_bessel_i(ell, 2 * abs(z2))))
    return complex(num / den)


def label_continuity_gap(spec, spec_other):
    """Squared distance || |spec> - |spec_other> ||^2 between normalized states."""
    _check_pair(spec, spec_other)
    a = build_coefficients(spec)
    b = build_coefficients(spec_other)
    dim = max(a.n_max + spec.m, b.n_max + spec_other.m) + 1
    diff = a.full(dim) - b.full(dim)
    return float(np.vdot(diff, diff).real)


def label_continuity_formula(spec, spec_other):
    """2 [1 - Re <spec_other|spec>]."""
    return 2.0 * (1.0 - overlap(spec_other, spec).real)


def basis_functions(frame, ell, levels, u, signed=True):
    r"""Number-basis functions psi_k(u) for each ``k`` in ``levels``.

    Includes N_k (with the (-1)^k sign unless ``signed`` is False), the
    factor sqrt(k!/Gamma(k+ell+1)) u^{ell/2} e^{-varpi u/2} L_k^ell(u) and
    the phase e^{i gamma_k}. Returns shape ``(len(levels),) + u.shape``.
    """
    levels = np.asarray(levels, dtype=int)
    u = np.asarray(u, dtype=float)
    if np.any(u < 0):
        raise DomainError("u must be >= 0")
    k_top = int(levels.max()) if levels.size else 0
    lag = laguerre_table(k_top, ell, u)[levels]
    log_c = 0.5 * (gammaln(levels + 1.0) - gammaln(levels + ell + 1.0))
    pref = frame.basis_prefactor(levels, ell) if signed else (
        math.sqrt(frame.kappa / (math.pi * frame.rho ** 2)) * np.exp(1j * ell * frame.theta)
        * np.ones(levels.shape))
    pref = pref * np.exp(log_c + 1j * frame.gammas(levels, ell))
    envelope = u ** (ell / 2) * np.exp(-frame.varpi * u / 2)
    shape = (-1,) + (1,) * u.ndim
    return pref.reshape(shape) * lag * envelope


def state_wavefunction(spec, frame, u, n_max=None):
    """Series wavefunction sum_n c_n psi_{n+m}(u) of the state ``spec``."""
    cv = build_coefficients(spec, n_max)
    u = np.asarray(u, dtype=float)
    basis = basis_functions(frame, spec.ell, cv.levels, u)
    return np.tensordot(cv.coeffs, basis, axes=1)


def bg_wavefunction(spec, frame, u, n_max=None):
    """Series wavefunction of a plain (m = 0) coherent state."""
    if spec.m != 0:
        raise DomainError("bg_wavefunction needs m = 0; use pacs_wavefunction")
    return state_wavefunction(spec, frame, u, n_max)


def pacs_wavefunction(spec, frame, u, n_max=None):
    """Series wavefunction of a photon-added state (any m >= 0)."""
    return state_wavefunction(spec, frame, u, n_max)


def bg_wavefunction_closed(spec, frame, u, alternating=True):
    r"""Bessel-J closed form of the plain coherent-state wavefunction.

    Summing :math:`\sum_n w^n L_n^\ell(u)/\Gamma(n+\ell+1)` with the Laguerre
    generating function gives

    .. math::
        \psi = e^{i\gamma_0}\sqrt{\kappa/(\pi\rho^2)}\,e^{i\ell\theta}\,
        \frac{(w/|w|)^{-\ell/2} e^{w - \varpi u/2} J_\ell(2\sqrt{uw})}{\sqrt{I_\ell(2|z|)}},

    where the phase's linear n-dependence and, when ``alternating``, the
    (-1)^n of the basis prefactor are folded into :math:`w`. With
    ``alternating=False`` the sign is left out, which reproduces the formula
    with ``w = z`` at a static frame.
    """
    if spec.m != 0:
        raise DomainError("closed form exists only for m = 0")
    ell = spec.ell
    u = np.asarray(u, dtype=float)
    if spec.r == 0:
        return bg_wavefunction(spec, frame, u)
    step = frame.gammas(1, ell) - frame.gammas(0, ell)
    w = spec.z * cmath.exp(1j * step)
    if alternating:
        w = -w
    pref = (math.sqrt(frame.kappa / (math.pi * frame.rho ** 2)) * cmath.exp(1j * ell * frame.theta)
            * cmath.exp(1j * frame.gammas(0, ell)) * math.exp(-0.5 * log_bessel_i(ell, 2 * spec.r))
            * cmath.exp(-0.5 * ell * 1j * cmath.phase(w)))
    flat = u.ravel()
    vals = np.empty(flat.shape, dtype=complex)
    for i, x in enumerate(flat):
        vals[i] = bessel_j_complex(ell, 2 * cmath.sqrt(x * w)) if x > 0 else (1.0 if ell == 0 else 0.0)
    vals = vals.reshape(u.shape)
    return pref * np.exp(w - frame.varpi * u / 2) * vals


def radial_norm(spec, frame, n_max=None, u_max=None):
    """Integral of |psi|^2 over the plane (r dr dtheta), by quadrature in u."""
    from scipy.integrate import quad

    cv = build_coefficients(spec, n_max)
    top = cv.n_max + spec.m
    u_max = u_max or (4 * top + 2 * spec.ell + 60)

    def dens(x):
        return abs(state_wavefunction(spec, frame, np.array([x]), cv.n_max)[0]) ** 2

    val, _ = quad(dens, 0, u_max, limit=400, epsabs=1e-14, epsrel=1e-12)
    return val * math.pi * frame.rho ** 2 / frame.kappa


def differential_lowering(func, u, n, ell, varpi, h=1e-4):
    """Apply (-u d/du + ell/2 + n - varpi u/2) to ``func`` at ``u``.

    The derivative is a fourth-order central difference with step ``h``.
    """
    u = np.asarray(u, dtype=float)
    d = (func(u - 2 * h) - 8 * func(u - h) + 8 * func(u + h) - func(u + 2 * h)) / (12 * h)
    return -u * d + (ell / 2 + n - varpi * u / 2) * func(u)


def photon_added_support(cv):
    """Largest |coefficient| on levels below m (zero by construction)."""
    full = cv.full()
    return float(np.max(np.abs(full[: cv.spec.m]))) if cv.spec.m else 0.0


def power_series_norm(z, ell, m, terms=200):
    """Plain summation of the normalization series (reference route)."""
    r2 = abs(complex(z)) ** 2

    def ratio(n):
        # F_m(n) / F_m(n+1) = (n+m+l+1)(n+m+1) / ((n+l+1)^2 (n+1)^2)
        return r2 * (n + m + ell + 1) * (n + m + 1) / ((n + ell + 1) ** 2 * (n + 1) ** 2)

    res = power_series(math.exp(-log_fm(ell, 0, m)), ratio, max_terms=terms)
    return res.value.real ** -0.5
