r"""Weight functions for the resolution of the identity.

Plain states use :math:`\omega_\ell(r) = (2/\pi) K_\ell(2r) I_\ell(2r)`.
Photon-added states need a density :math:`g_m` on :math:`(0,\infty)` whose
Mellin transform is

.. math::
    \Phi(s) = \frac{\Gamma(s+\ell-m)^2\,\Gamma(s-m)^2}{\Gamma(s+\ell)\,\Gamma(s)},

and the weight is :math:`W_m(r) = r^{2m} g_m(r^2) / \mathcal{M}_m(r)^2`.
:math:`g_m` is recovered by inverting the Mellin transform along a vertical
line :math:`\mathrm{Re}\,s = c > m`.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad
from scipy.special import gammaln, loggamma

from .errors import ConvergenceError, DomainError, SingularityError
from .specfun import bessel_i_scaled, bessel_k, log_bessel_i
from .states import log_fm, pacs_norm

# how far below its peak |Phi| must fall before the contour is cut
CONTOUR_DROP = 40.0


def log_mellin_target(ell, m, s):
    """log Phi(s) for real s > m."""
    if s <= m:
        if float(s - m).is_integer() or float(s + ell - m).is_integer():
            raise SingularityError(f"Phi has a pole at s={s} (ell={ell}, m={m})")
        raise DomainError(f"need s > m, got s={s}, m={m}")
    return float(2 * gammaln(s + ell - m) + 2 * gammaln(s - m) - gammaln(s + ell) - gammaln(s))


def mellin_moment_target(ell, m, s):
    """Phi(s) = F_m(ell, s - m - 1), the required Mellin transform of g_m."""
    return math.exp(log_mellin_target(ell, m, s))


def _log_phi_complex(ell, m, s):
    return 2 * loggamma(s + ell - m) + 2 * loggamma(s - m) - loggamma(s + ell) - loggamma(s)


def _contour_abscissa(m, x):
    # saddle of x^{-s} Phi(s) sits near s = sqrt(x); never closer than 0.75 to the poles
    return m + max(0.75, round(4 * math.sqrt(x)) / 4)


def _contour_step(d, log_x):
    # trapezoid error ~ exp(-2 pi d / h + d |ln x|); aim for e^{-40}
    h = min(0.1, 2 * math.pi * d / (CONTOUR_DROP + d * abs(log_x)))
    return 0.1 / 2 ** math.ceil(math.log2(0.1 / h))


@dataclass(frozen=True)
class _Contour:
    c: float
    tau: np.ndarray
    weights: np.ndarray
    phi: np.ndarray          # Phi(c + i tau) / Phi(c)
    log_phi_c: float
    tail: float              # |Phi| at the cut, relative to Phi(c)


@lru_cache(maxsize=512)
def _contour(ell, m, c, h):
    log_peak = float(_log_phi_complex(ell, m, complex(c, 0.0)).real)
    # walk out until |Phi| has dropped CONTOUR_DROP below its value on the axis
    T = 1.0
    while float(_log_phi_complex(ell, m, complex(c, T)).real) > log_peak - CONTOUR_DROP:
        T *= 1.25
        if T > 1e4:
            raise ConvergenceError("Mellin integrand does not decay along the contour")
    n = int(math.ceil(T / h))
    tau = np.arange(n + 1) * h
    w = np.full(n + 1, h)
    w[0] = 0.5 * h
    logs = _log_phi_complex(ell, m, c + 1j * tau)
    phi = np.exp(logs - log_peak)
    tail = float(abs(phi[-1]))
    return _Contour(c, tau, w, phi, log_peak, tail)


def pacs_weight_density(ell, m, x, return_error=False):
    r"""Density g_m(x) by numerical inverse Mellin transform.

    .. math::
        g(x) = \frac{x^{-c}}{\pi}\int_0^\infty
        \mathrm{Re}\left[x^{-i\tau}\,\Phi(c+i\tau)\right]d\tau

    evaluated with the trapezoid rule. ``x`` may be an array. With
    ``return_error`` an estimate of the contour truncation and
    discretization error is returned alongside.
    """
    if ell < 0 or m < 0:
        raise DomainError("need ell >= 0 and m >= 0")
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xs <= 0):
        raise DomainError("x must be positive")
    out = np.empty(xs.shape)
    err = np.empty(xs.shape)
    for idx, xv in np.ndenumerate(xs):
        lx = math.log(xv)
        c = _contour_abscissa(m, xv)
        h = _contour_step(c - m, lx)
        ct = _contour(float(ell), int(m), c, h)
        osc = np.cos(ct.tau * lx) * ct.phi.real + np.sin(ct.tau * lx) * ct.phi.imag
        scale = math.exp(-c * lx + ct.log_phi_c) / math.pi
        s = float(osc @ ct.weights)
        out[idx] = scale * s
        # truncation: tail ~ |Phi(T)|/pi-decay length; rounding: eps * sum |integrand|
        err[idx] = scale * (ct.tail + 1e-16 * float(np.abs(ct.phi) @ ct.weights) + math.exp(-CONTOUR_DROP))
    if np.ndim(x) == 0:
        out, err = float(out[0]), float(err[0])
    return (out, err) if return_error else out


def m0_density_closed(ell, x):
    """Closed form 2 x^{ell/2} K_ell(2 sqrt x) of the m = 0 density."""
    t = 2 * math.sqrt(x)
    return 2 * x ** (ell / 2) * bessel_k(ell, t).real


def bg_weight(ell, r):
    """Weight (2/pi) K_ell(2r) I_ell(2r) of the plain coherent states."""
    if not r > 0:
        raise DomainError(f"r must be positive, got {r}")
    x = 2.0 * r
    return 2.0 / math.pi * bessel_k(ell, x, scaled=True).real * bessel_i_scaled(ell, x)


def bg_weight_asymptotic(ell, r, form="expansion"):
    """Large-r approximations of the plain-state weight.

    ``form="expansion"`` is the product expansion of K_l I_l at 2r,
    (1 - (4 l^2 - 1) / (32 r^2)) / (2 pi r); the 1/r corrections of the two
    Bessel factors cancel. ``form="k_only"`` is the variant
    (1 + (l^2/2 - 1/8)/r) / (2 pi r), which keeps only the K correction and
    is accurate only when that coefficient vanishes (l = 1/2).
    """
    if form == "expansion":
        return (1.0 - (4 * ell * ell - 1) / (32 * r * r)) / (2 * math.pi * r)
    if form == "k_only":
        return (1.0 + (ell * ell / 2 - 0.125) / r) / (2 * math.pi * r)
    raise DomainError(f"unknown form {form!r}")


def pacs_weight(ell, m, r):
    """W_m(r) = r^{2m} g_m(r^2) / M_m(r)^2, for m >= 0."""
    g = pacs_weight_density(ell, m, r * r)
    return r ** (2 * m) * g / pacs_norm(r, ell, m) ** 2


@dataclass(frozen=True)
class WeightFunction:
    ell: float
    m: int
    method: str

    def __call__(self, r):
        if self.method == "bessel_product":
            return math.pi * bg_weight(self.ell, r)
        return pacs_weight(self.ell, self.m, r)


def weight_function(ell, m=0, method=None):
    """Weight W_m as a callable of r (note W_0 = pi * omega)."""
    if method is None:
        method = "bessel_product" if m == 0 else "mellin_inversion"
    if method not in ("bessel_product", "mellin_inversion"):
        raise DomainError(f"unknown method {method!r}")
    if method == "bessel_product" and m != 0:
        raise DomainError("the Bessel product weight exists only for m = 0")
    return WeightFunction(float(ell), int(m), method)


def _density_upper(ell, m, s):
    # g decays like exp(-2 sqrt x) x^{(l+...)/2}; stop once x^s g is far below its peak
    x = max(4.0, (s + ell) ** 2)
    while 2 * math.sqrt(x) - (s + ell + m + 1) * math.log(x) < 60:
        x *= 1.5
    return x


def density_moment(ell, m, s, h=0.05):
    """Integral of x^{s-1} g_m(x) over (0, inf) by the trapezoid rule in ln x."""
    if s <= m:
        raise DomainError("moments exist only for s > m")
    y_hi = math.log(_density_upper(ell, m, s))
    # near 0, g_m(x) ~ x^{-m} ln x, so x^s g decays like x^{s-m} only
    y_lo = -50.0 / (s - m)
    n = int(math.ceil((y_hi - y_lo) / h))
    y = np.linspace(y_lo, y_hi, n + 1)
    step = y[1] - y[0]
    vals = np.exp(s * y) * pacs_weight_density(ell, m, np.exp(y))
    return float(step * (vals.sum() - 0.5 * (vals[0] + vals[-1])))


def moment_residual(ell, m, s):
    """Relative mismatch of the s-th moment of g_m against Phi(s)."""
    return abs(density_moment(ell, m, s) / mellin_moment_target(ell, m, s) - 1.0)


def _radial_integral(f, peak, width):
    lo = max(0.0, peak - 40 * width)
    hi = peak + 60 * width
    pts = [p for p in (peak,) if lo < p < hi]
    val, err = quad(f, lo, hi, points=pts or None, limit=400, epsabs=0.0, epsrel=1e-12)
    return val, err


def identity_resolution_residual(ell, m, n):
    r"""|2 \int r^{1+2n} W_m M_m^2 dr / F_m(ell, n) - 1| by radial quadrature.

    For ``m = 0`` the Bessel product weight is used, otherwise the
    Mellin-inverted density. Off-diagonal elements vanish by the angular
    integral and are not computed.
    """
    if n < 0:
        raise DomainError("n must be >= 0")
    log_f = log_fm(ell, n, m)
    if m == 0:
        def f(r):
            if r == 0:
                return 0.0
            # W M^2 = pi * omega * r^l / I_l(2r), folded into logs to dodge overflow
            lw = math.log(math.pi * bg_weight(ell, r)) + ell * math.log(r) - log_bessel_i(ell, 2 * r)
            return 2 * math.exp((1 + 2 * n) * math.log(r) + lw - log_f)
    else:
        def f(r):
            if r == 0:
                return 0.0
            g = pacs_weight_density(ell, m, r * r)
            return 2 * math.exp((1 + 2 * n + 2 * m) * math.log(r) - log_f) * g
    # the integrand behaves like r^{1+2n+2m+l} e^{-2r}
    peak = max(0.5, (1 + 2 * n + 2 * m + ell) / 2)
    width = max(0.5, math.sqrt(peak) / 2)
    val, _ = _radial_integral(f, peak, width)
    return abs(val - 1.0)
