r"""Special-function kernel.

Generalized Laguerre polynomials, log-gamma, modified Bessel functions
:math:`I_\nu` (real order) and :math:`K_\nu` (complex order), the ordinary
Bessel function :math:`J_\alpha` at complex argument, and a generic
hypergeometric power-series evaluator with truncation control.

Everything here is a pure function of its arguments.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import ConvergenceError, DomainError, SeriesCapError

SERIES_RTOL = 1e-15
SERIES_CONSECUTIVE = 3
SERIES_MAX_TERMS = 10_000

# log of the largest finite double
_LOG_DBL_MAX = 709.78


@dataclass(frozen=True)
class SeriesResult:
    """Outcome of a truncated power series.

    Attributes
    ----------
    value : complex
        Partial sum at the stopping point.
    terms_used : int
        Number of terms added (at least 1).
    tail_bound : float
        Magnitude of the last term added.
    capped : bool
        True when the hard term cap was hit before the tolerance was met.
    max_term : float
        Largest term magnitude seen; ``max_term / abs(value)`` measures
        cancellation.
    """

    value: complex
    terms_used: int
    tail_bound: float
    capped: bool = False
    max_term: float = 0.0


def power_series(first, ratio, rtol=SERIES_RTOL, max_terms=SERIES_MAX_TERMS,
                 consecutive=SERIES_CONSECUTIVE):
    """Sum ``t_0 + t_1 + ...`` where ``t_{k+1} = t_k * ratio(k)``.

    Stops once ``|t_k| <= rtol * |partial sum|`` holds for ``consecutive``
    terms in a row, or at ``max_terms`` (the result is then flagged capped).
    """
    term = complex(first)
    if term == 0:
        return SeriesResult(0j, 1, 0.0)
    total = term
    quiet = 0
    biggest = abs(term)
    for k in range(max_terms - 1):
        term = term * ratio(k)
        total += term
        mag = abs(term)
        biggest = max(biggest, mag)
        if mag <= rtol * abs(total):
            quiet += 1
            if quiet >= consecutive:
                return SeriesResult(total, k + 2, mag, False, biggest)
        else:
            quiet = 0
    return SeriesResult(total, max_terms, abs(term), True, biggest)


def hypergeometric_pfq(a, b, x, **kwargs):
    r"""Generalized hypergeometric series :math:`{}_pF_q(a; b; x)`.

    Only meant for the entire case ``p <= q``.
    """
    a = [complex(v) for v in a]
    b = [complex(v) for v in b]
    if len(a) > len(b):
        raise DomainError("only p <= q (entire) series are supported")
    x = complex(x)

    def ratio(k):
        num = x
        for v in a:
            num *= v + k
        den = k + 1.0
        for v in b:
            den *= v + k
        return num / den

    return power_series(1.0, ratio, **kwargs)


def log_gamma(x):
    """Natural log of the gamma function for ``x > 0`` (scalar or array)."""
    if np.ndim(x) == 0:
        x = float(x)
        if not x > 0:
            raise DomainError(f"log_gamma needs x > 0, got {x}")
        return math.lgamma(x)
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError("log_gamma needs x > 0")
    return gammaln(x)


def laguerre(n, alpha, u):
    r"""Generalized Laguerre polynomial :math:`L_n^\alpha(u)`.

    Upward three-term recurrence
    ``(k+1) L_{k+1} = (2k + alpha + 1 - u) L_k - (k + alpha) L_{k-1}``.
    """
    if n < 0 or int(n) != n:
        raise DomainError(f"n must be a non-negative integer, got {n}")
    if not alpha > -1:
        raise DomainError(f"alpha must exceed -1, got {alpha}")
    return laguerre_table(int(n), alpha, u)[-1]


def laguerre_table(n_max, alpha, u):
    """All of ``L_0 .. L_{n_max}`` at ``u``; shape ``(n_max + 1,) + u.shape``."""
    if not alpha > -1:
        raise DomainError(f"alpha must exceed -1, got {alpha}")
    u = np.asarray(u, dtype=complex if np.iscomplexobj(u) else float)
    out = np.empty((n_max + 1,) + u.shape, dtype=u.dtype)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = alpha + 1.0 - u
    for k in range(1, n_max):
        out[k + 1] = ((2 * k + alpha + 1.0 - u) * out[k] - (k + alpha) * out[k - 1]) / (k + 1)
    return out


def _log_bessel_i_series(nu, x):
    q = 0.25 * x * x
    res = power_series(1.0, lambda k: q / ((k + 1.0) * (k + nu + 1.0)))
    if res.capped:
        raise SeriesCapError(f"I_{nu}({x}) series did not converge")
    return nu * math.log(0.5 * x) - math.lgamma(nu + 1.0) + math.log(res.value.real)


def _log_bessel_i_asymptotic(nu, x):
    """Hankel expansion; returns None when it cannot reach full precision."""
    mu = 4.0 * nu * nu
    total = 1.0
    term = 1.0
    for k in range(1, 60):
        new = -term * (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        if abs(new) > abs(term):
            return None
        term = new
        total += term
        if abs(term) < 1e-17 * abs(total):
            return x - 0.5 * math.log(2.0 * math.pi * x) + math.log(total)
    return None


def log_bessel_i(nu, x):
    r"""Natural log of :math:`I_\nu(x)` for ``nu >= 0``, ``x > 0``."""
    nu = float(nu)
    x = float(x)
    if nu < 0 or x < 0:
        raise DomainError("log_bessel_i needs nu >= 0 and x >= 0")
    if x == 0.0:
        return 0.0 if nu == 0.0 else -math.inf
    if x >= 25.0:
        val = _log_bessel_i_asymptotic(nu, x)
        if val is not None:
            return val
    return _log_bessel_i_series(nu, x)


def bessel_i(nu, x):
    r"""Modified Bessel function of the first kind :math:`I_\nu(x)`.

    Ascending series for moderate ``x``, Hankel asymptotic expansion for
    large ``x``. Raises ``OverflowError`` when the value exceeds the double
    range.
    """
    lv = log_bessel_i(nu, x)
    if lv > _LOG_DBL_MAX:
        raise OverflowError(f"I_{nu}({x}) overflows double precision")
    return math.exp(lv)


def bessel_i_scaled(nu, x):
    r""":math:`e^{-x} I_\nu(x)`, finite for all ``x >= 0``."""
    return math.exp(log_bessel_i(nu, x) - float(x))


def _k_exponent_shift(a, x):
    # max over t of a*t - x*(cosh t - 1), attained at sinh t = a / x
    t_star = np.arcsinh(a / x)
    return t_star, a * t_star - x * (np.cosh(t_star) - 1.0)


def bessel_k_many(nus, x, scaled=False, rtol=1e-15, max_halvings=14):
    r"""Vector of :math:`K_\nu(x)` for many (complex) orders at one ``x``.

    Uses :math:`K_\nu(x) = \int_0^\infty e^{-x\cosh t}\cosh(\nu t)\,dt` with
    the trapezoid rule on ``[0, T]``; the step is halved until successive
    estimates agree to ``rtol`` relative to :math:`\int |f|`. ``T`` is chosen
    so that the integrand bound has dropped by ``e^{-46}`` below its peak.
    ``x`` is normally real and positive; a complex ``x`` with positive real
    part is accepted too (the integral still converges there).

    Returns
    -------
    values : ndarray of complex
    errors : ndarray of float
        Absolute error estimates (difference of the last two refinements).
    """
    xc = complex(x)
    xr = xc.real
    if not xr > 0:
        raise DomainError(f"K_nu(x) needs Re x > 0, got {x}")
    nus = np.atleast_1d(np.asarray(nus, dtype=complex))
    if not np.all(np.isfinite(nus)):
        raise DomainError("orders must be finite")
    a = np.abs(nus.real)
    t_star, shift = _k_exponent_shift(a, xr)
    a_max = a.max()
    # truncation point for the widest integrand
    T = float(np.max(t_star)) + 1.0
    ts_max, sh_max = _k_exponent_shift(a_max, xr)
    while a_max * T - xr * (math.cosh(T) - 1.0) > sh_max - 46.0:
        T += 0.5
    n_panels = 16
    prev = None
    for _ in range(max_halvings):
        t = np.linspace(0.0, T, n_panels + 1)
        h = T / n_panels
        w = np.full(t.shape, h)
        w[0] = 0.5 * h
        w[-1] = 0.5 * h
        decay = -xc * (np.cosh(t) - 1.0)
        nt = np.outer(nus, t)
        expo = decay[None, :] - shift[:, None]
        f = 0.5 * (np.exp(nt + expo) + np.exp(-nt + expo))
        cur = f @ w
        scale = np.abs(f) @ w
        if prev is not None:
            err = np.abs(cur - prev)
            if np.all(err <= rtol * scale):
                break
        prev = cur
        n_panels *= 2
    else:
        raise ConvergenceError(f"K quadrature did not converge at x={x}")
    log_scale = shift if scaled else shift - xr
    big = np.max(log_scale)
    if big > _LOG_DBL_MAX:
        raise OverflowError(f"K_nu({x}) overflows double precision")
    factor = np.exp(log_scale)
    if xc.imag != 0.0 and not scaled:
        factor = factor * np.exp(-1j * xc.imag)
    return cur * factor, err * np.abs(factor)


def bessel_k(nu, x, scaled=False):
    r"""Modified Bessel function of the second kind :math:`K_\nu(x)`.

    ``nu`` may be complex; ``x`` is real and positive (or complex with
    positive real part). The result is returned as a complex number, real up
    to rounding when ``x`` is real and ``nu`` is real or purely imaginary. With ``scaled=True`` returns :math:`e^x K_\nu(x)`.
    """
    vals, _ = bessel_k_many([nu], x, scaled=scaled)
    return complex(vals[0])


def bessel_j_series(alpha, w, radius=60.0):
    r"""Ascending series of :math:`J_\alpha(w)` for complex ``w``.

    Uses the principal branch of :math:`(w/2)^\alpha`. The series result is
    flagged capped when ``|w| > radius``, where cancellation would swamp the
    double-precision sum.
    """
    alpha = float(alpha)
    if alpha < 0:
        raise DomainError(f"alpha must be >= 0, got {alpha}")
    w = complex(w)
    if w == 0:
        return SeriesResult(1.0 + 0j if alpha == 0 else 0j, 1, 0.0)
    if abs(w) > radius:
        return SeriesResult(complex("nan"), 1, math.inf, True, math.inf)
    half = 0.5 * w
    first = np.exp(alpha * np.log(half) - math.lgamma(alpha + 1.0))
    q = -half * half
    return power_series(first, lambda k: q / ((k + 1.0) * (k + alpha + 1.0)))


def bessel_j_complex(alpha, w, radius=60.0):
    r""":math:`J_\alpha(w)` at complex ``w``; raises when the series is capped."""
    res = bessel_j_series(alpha, w, radius=radius)
    if res.capped:
        raise SeriesCapError(f"J_{alpha}({w}) beyond series radius {radius}")
    return res.value
