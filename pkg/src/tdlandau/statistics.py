"""Photon statistics of coherent and photon-added coherent states.

Every quantity comes from the photon-number distribution, summed directly
in log space. Bessel-function closed forms for ``m = 0`` are provided as
independent routes for cross-checking.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp

from .errors import UndefinedPointError
from .specfun import log_bessel_i
from .states import StateSpec, _log_norm_sum, _log_terms, auto_n_max

# below this mean photon number g2 and Q are reported as undefined
MEAN_FLOOR = 1e-8


@dataclass(frozen=True)
class Pnd:
    """Photon-number distribution; ``probabilities[n]`` sits at level ``n + offset``."""

    probabilities: np.ndarray
    offset: int
    tail_mass: float = 0.0

    @property
    def levels(self):
        return np.arange(self.probabilities.size) + self.offset

    @property
    def peak(self):
        return int(self.levels[np.argmax(self.probabilities)])


@dataclass(frozen=True)
class PhotonStatistics:
    mean_n: float
    mean_n2: float
    g2: float
    q_mandel: float
    truncation_error: float


def _as_spec(spec):
    return spec if isinstance(spec, StateSpec) else StateSpec(*spec)


def _log_probs(spec, n_max=None):
    ell, m, r = spec.ell, spec.m, spec.r
    full = auto_n_max(ell, m, r)
    log_total, tail, _ = _log_norm_sum(ell, m, r, full)
    n_max = full if n_max is None else n_max
    lt = _log_terms(ell, m, r, n_max)
    if n_max < full:
        tail = max(tail, -math.expm1(logsumexp(lt) - log_total))
    return lt - log_total, tail


def pnd(spec, n_max=None):
    """Probabilities M^2 |z|^{2n} / F_m(ell, n) attached to levels n + m."""
    spec = _as_spec(spec)
    lp, tail = _log_probs(spec, n_max)
    return Pnd(np.exp(lp), spec.m, tail)


def _factorial_moments(spec):
    """(<N>, <N(N-1)>, tail estimate) from the distribution."""
    p = pnd(spec)
    k = p.levels.astype(float)
    mean = float(np.sum(k * p.probabilities))
    fact2 = float(np.sum(k * (k - 1) * p.probabilities))
    # tail terms sit beyond n_max; weight them by the largest level squared
    err = p.tail_mass * (k[-1] + 2) ** 2
    return mean, fact2, err


def mean_photon_number(spec):
    """(<N>, <N^2>) counting the absolute level n + m."""
    spec = _as_spec(spec)
    mean, fact2, _ = _factorial_moments(spec)
    return mean, fact2 + mean


def g2(spec):
    """Intensity correlation (<N^2> - <N>) / <N>^2."""
    spec = _as_spec(spec)
    mean, fact2, _ = _factorial_moments(spec)
    if abs(mean) < MEAN_FLOOR:
        raise UndefinedPointError(f"<N> = {mean:.3e} is zero within tolerance; g2 undefined")
    return fact2 / mean ** 2


def mandel_q(spec):
    """Mandel parameter <N> (g2 - 1); zero for the exact vacuum."""
    spec = _as_spec(spec)
    if spec.m == 0 and spec.r == 0:
        return 0.0
    mean, fact2, _ = _factorial_moments(spec)
    if abs(mean) < MEAN_FLOOR:
        raise UndefinedPointError(f"<N> = {mean:.3e} is zero within tolerance; Q undefined")
    return mean * (fact2 / mean ** 2 - 1.0)


def photon_statistics(spec):
    spec = _as_spec(spec)
    mean, fact2, err = _factorial_moments(spec)
    if abs(mean) < MEAN_FLOOR:
        raise UndefinedPointError(f"<N> = {mean:.3e} is zero within tolerance")
    g = fact2 / mean ** 2
    return PhotonStatistics(mean, fact2 + mean, g, mean * (g - 1.0), err)


def meijer_g_moment(i, spec):
    r"""Series value of the i-th G-function moment, i in {0, 1, 2}.

    Defined as :math:`(-1)^i \sum_n n^{\underline{i}}\,|z|^{2n}/F_m(\ell, n)`
    (falling factorial). Then

    * ``G(0)`` is the inverse squared normalization constant,
    * ``<N> = m - G(1)/G(0)``,
    * ``<N^2> = m^2 - (2m + 1) G(1)/G(0) + G(2)/G(0)``,

    and for ``m = 0`` they reduce to ``|z|^{-l} I_l``, ``-|z|^{1-l} I_{l+1}``
    and ``|z|^{2-l} I_{l+2}`` at argument ``2|z|``.
    """
    if i not in (0, 1, 2):
        raise ValueError("i must be 0, 1 or 2")
    spec = _as_spec(spec)
    ell, m, r = spec.ell, spec.m, spec.r
    full = auto_n_max(ell, m, r)
    lt = _log_terms(ell, m, r, full)
    n = np.arange(full + 1, dtype=float)
    weight = np.ones_like(n)
    for j in range(i):
        weight = weight * (n - j)
    mask = weight > 0
    if not np.any(mask):
        return 0.0
    return (-1) ** i * math.exp(logsumexp(lt[mask] + np.log(weight[mask])))


def meijer_moment_closed(i, z, ell):
    """m = 0 Bessel reductions of ``meijer_g_moment``."""
    r = abs(complex(z))
    return (-1) ** i * math.exp((i - ell) * math.log(r) + log_bessel_i(ell + i, 2 * r))


def bessel_statistics(z, ell):
    """m = 0 closed forms: (<N>, <N^2>, g2, Q) through ratios of I_nu(2|z|)."""
    r = abs(complex(z))
    x = 2 * r
    l0, l1, l2 = (log_bessel_i(ell + k, x) for k in range(3))
    r1 = math.exp(l1 - l0)
    r2 = math.exp(l2 - l0)
    mean = r * r1
    mean2 = r * r1 + r * r * r2
    g = math.exp(l2 + l0 - 2 * l1)
    q = r * (math.exp(l2 - l1) - math.exp(l1 - l0))
    return mean, mean2, g, q


def small_z_pnd(n, ell, r):
    """Leading small-|z| form |z|^{2n} Gamma(l+1) / (n! Gamma(n+l+1))."""
    return math.exp(2 * n * math.log(r) + math.lgamma(ell + 1) - gammaln(n + 1) - gammaln(n + ell + 1))


def standard_sign_mean(spec):
    """m - <n>_excitation, i.e. the mean obtained if G(1) enters with a + sign.

    This is the quantity that can vanish at a finite |z|; the physical
    mean photon number ``m + <n>`` never does for m >= 1.
    """
    spec = _as_spec(spec)
    mean, _, _ = _factorial_moments(spec)
    return spec.m - (mean - spec.m)


def find_sign_change(func, lo, hi, n=200):
    """First bracketed root of ``func`` on a uniform grid in [lo, hi], or None."""
    from scipy.optimize import brentq

    xs = np.linspace(lo, hi, n)
    vals = np.array([func(x) for x in xs])
    idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    if idx.size == 0:
        return None
    i = int(idx[0])
    return brentq(func, xs[i], xs[i + 1], xtol=1e-12)
