r"""Time-dependent Landau problem: envelope, phases, number-basis wavefunctions.

The Lewis-Riesenfeld construction rests on the auxiliary (Ermakov-Pinney)
envelope :math:`\rho(t)`, the solution of

.. math::
    \ddot\rho + \frac{\dot M}{M}\dot\rho + \Omega^2\rho = \frac{\kappa^2}{M^2\rho^3},
    \qquad \Omega = \sqrt{\omega^2 + \omega_c^2/4},\quad \omega_c = qB/M.

Units have :math:`\hbar = 1`.
"""

import configparser
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import quad, solve_ivp

from .errors import ConfigError, DomainError, SingularityError, StiffnessError
from .specfun import laguerre_table

RHO_FLOOR = 1e-12


@dataclass(frozen=True)
class ModelProfile:
    """Physical time-dependent parameters of the model.

    ``mass``, ``omega`` and ``efield`` are callables of time. ``mass_rate``
    (dM/dt) is optional; without it a central difference is used.
    ``breakpoints`` lists times where the callables are not smooth, so
    quadratures can split there.
    """

    mass: Callable[[float], float]
    omega: Callable[[float], float]
    efield: Callable[[float], float]
    charge: float = 1.0
    bfield: float = 0.0
    kappa: float = 1.0
    mass_rate: Callable[[float], float] | None = None
    breakpoints: tuple = ()
    name: str = "custom"

    def __post_init__(self):
        if not self.kappa > 0:
            raise DomainError(f"kappa must be positive, got {self.kappa}")

    def cyclotron(self, t):
        return self.charge * self.bfield / self.mass(t)

    def big_omega(self, t):
        """General oscillation frequency sqrt(omega^2 + omega_c^2 / 4)."""
        return math.sqrt(self.omega(t) ** 2 + 0.25 * self.cyclotron(t) ** 2)

    def mass_dot(self, t):
        if self.mass_rate is not None:
            return self.mass_rate(t)
        h = 1e-5 * max(1.0, abs(t))
        return (self.mass(t + h) - self.mass(t - h)) / (2 * h)

    def stationary_rho(self, t=0.0):
        """Fixed point sqrt(kappa / (M Omega)) of the envelope equation at frozen t."""
        return math.sqrt(self.kappa / (self.mass(t) * self.big_omega(t)))


def constant_profile(mass=1.0, omega=1.0, efield=0.0, charge=1.0, bfield=0.0, kappa=1.0):
    return ModelProfile(
        mass=lambda t: mass, omega=lambda t: omega, efield=lambda t: efield,
        charge=charge, bfield=bfield, kappa=kappa, mass_rate=lambda t: 0.0,
        name="constant",
    )


def caldirola_kanai_profile(mass0=1.0, gamma=0.1, omega=1.0, efield=0.0, charge=1.0,
                            bfield=0.0, kappa=1.0):
    """Exponentially growing mass M0 * exp(gamma * t)."""
    return ModelProfile(
        mass=lambda t: mass0 * math.exp(gamma * t),
        omega=lambda t: omega,
        efield=lambda t: efield,
        charge=charge, bfield=bfield, kappa=kappa,
        mass_rate=lambda t: gamma * mass0 * math.exp(gamma * t),
        name="caldirola_kanai",
    )


def modulated_omega_profile(mass=1.0, omega0=1.0, depth=0.1, rate=0.7, efield=0.0,
                            charge=1.0, bfield=0.0, kappa=1.0):
    """Sinusoidally modulated frequency omega0 * (1 + depth * sin(rate * t))."""
    if not abs(depth) < 1:
        raise DomainError("modulation depth must satisfy |depth| < 1")
    return ModelProfile(
        mass=lambda t: mass,
        omega=lambda t: omega0 * (1.0 + depth * math.sin(rate * t)),
        efield=lambda t: efield,
        charge=charge, bfield=bfield, kappa=kappa, mass_rate=lambda t: 0.0,
        name="modulated_omega",
    )


PROFILES = {
    "constant": constant_profile,
    "caldirola_kanai": caldirola_kanai_profile,
    "modulated_omega": modulated_omega_profile,
}


def parse_key_values(text, source="<config>"):
    """Parse ``key = value`` lines into a dict of strings.

    Blank lines and ``#``/``;`` comments are ignored. Errors carry the
    1-based line number of the offending line.
    """
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#",))
    parser.optionxform = str
    try:
        parser.read_string("[root]\n" + text, source=source)
    except configparser.DuplicateOptionError as exc:
        raise ConfigError(f"duplicate key '{exc.option}'", line=exc.lineno - 1, field=exc.option) from None
    except configparser.ParsingError as exc:
        lineno, line = exc.errors[0]
        raise ConfigError(f"cannot parse {line.strip()!r}", line=lineno - 1) from None
    except configparser.MissingSectionHeaderError:  # pragma: no cover - header is injected
        raise ConfigError("malformed configuration") from None
    lines = {}
    for i, raw in enumerate(text.splitlines(), start=1):
        key = raw.split("=", 1)[0].split(":", 1)[0].strip()
        if key and key not in lines:
            lines[key] = i
    return dict(parser["root"]), lines


def profile_from_config(text):
    """Build a bundled profile from key-value text.

    The ``kind`` key selects the profile (see ``PROFILES``); every other key
    is a numeric keyword argument of that profile's factory.
    """
    values, lines = parse_key_values(text)
    kind = values.pop("kind", "constant")
    if kind not in PROFILES:
        raise ConfigError(f"unknown profile kind '{kind}'", line=lines.get("kind"), field="kind")
    factory = PROFILES[kind]
    allowed = factory.__code__.co_varnames[: factory.__code__.co_argcount]
    kwargs = {}
    for key, raw in values.items():
        if key not in allowed:
            raise ConfigError(f"not a parameter of profile '{kind}'", line=lines.get(key), field=key)
        try:
            kwargs[key] = float(raw)
        except ValueError:
            raise ConfigError(f"expected a number, got {raw!r}", line=lines.get(key), field=key) from None
    try:
        return factory(**kwargs)
    except DomainError as exc:
        raise ConfigError(str(exc)) from None


def load_profile(path):
    with open(path, encoding="utf-8") as fh:
        return profile_from_config(fh.read())


def _ermakov_rhs(profile):
    k2 = profile.kappa ** 2

    def rhs(t, y):
        rho, rho_dot = y
        m = profile.mass(t)
        om = profile.big_omega(t)
        acc = -profile.mass_dot(t) / m * rho_dot - om * om * rho + k2 / (m * m * rho ** 3)
        return [rho_dot, acc]

    return rhs


def _derivative(f, t, h, lo, hi):
    # fourth-order stencils, shifted one-sided near the ends of [lo, hi]
    if t - 2 * h >= lo and t + 2 * h <= hi:
        return (f(t - 2 * h) - 8 * f(t - h) + 8 * f(t + h) - f(t + 2 * h)) / (12 * h)
    if t + 4 * h <= hi:
        return (-25 * f(t) + 48 * f(t + h) - 36 * f(t + 2 * h) + 16 * f(t + 3 * h) - 3 * f(t + 4 * h)) / (12 * h)
    return (25 * f(t) - 48 * f(t - h) + 36 * f(t - 2 * h) - 16 * f(t - 3 * h) + 3 * f(t - 4 * h)) / (12 * h)


@dataclass(frozen=True)
class EnvelopeSolution:
    """Envelope trajectory on a time grid plus cumulative phase integrals.

    ``integrals[:, i]`` holds, from ``grid[0]`` to ``grid[i]``, the three
    integrals of 1/(M rho^2), omega_c and E^2/(M omega).
    """

    grid: np.ndarray
    rho: np.ndarray
    rho_dot: np.ndarray
    residual: np.ndarray
    profile: ModelProfile = field(repr=False)
    integrals: np.ndarray = field(repr=False)
    _dense: object = field(repr=False, compare=False)

    def state(self, t):
        """(rho, rho_dot) at any time inside the grid span."""
        self._check(t)
        y = self._dense(t)
        return float(y[0]), float(y[1])

    def _check(self, t):
        if not self.grid[0] - 1e-12 <= t <= self.grid[-1] + 1e-12:
            raise DomainError(f"t={t} outside the envelope window [{self.grid[0]}, {self.grid[-1]}]")

    def _integrands(self):
        p = self.profile

        def inv_m_rho2(t):
            rho = self._dense(t)[0]
            return 1.0 / (p.mass(t) * rho * rho)

        def field_term(t):
            return p.efield(t) ** 2 / (p.mass(t) * p.omega(t))

        return inv_m_rho2, p.cyclotron, field_term

    def phase_integrals(self, t):
        """The three phase integrals from ``grid[0]`` to ``t``."""
        self._check(t)
        i = int(np.searchsorted(self.grid, t, side="right")) - 1
        i = min(max(i, 0), len(self.grid) - 1)
        base = self.integrals[:, i].copy()
        t0 = float(self.grid[i])
        if t != t0:
            for j, f in enumerate(self._integrands()):
                base[j] += _quad(f, t0, t, self.profile.breakpoints)
        return base


def _quad(f, a, b, breakpoints=()):
    lo, hi = min(a, b), max(a, b)
    pts = [p for p in breakpoints if lo < p < hi] or None
    val, _ = quad(f, a, b, points=pts, epsabs=1e-14, epsrel=1e-13, limit=200)
    return val


def solve_ermakov(profile, rho0, rho_dot0, grid, rtol=1e-12, atol=1e-14):
    """Integrate the envelope equation over ``grid`` (ascending times).

    Uses an adaptive 8th-order Runge-Kutta scheme with dense output. The
    residual at each grid point is measured by differentiating the dense
    rho_dot interpolant and substituting into the equation.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2 or np.any(np.diff(grid) <= 0):
        raise DomainError("grid must be a strictly ascending 1-D array with >= 2 points")
    if not rho0 > 0:
        raise DomainError(f"rho0 must be positive, got {rho0}")

    def hit_floor(t, y):
        return y[0] - RHO_FLOOR

    hit_floor.terminal = True
    hit_floor.direction = -1
    sol = solve_ivp(
        _ermakov_rhs(profile), (grid[0], grid[-1]), [rho0, rho_dot0], method="DOP853",
        dense_output=True, rtol=rtol, atol=atol, events=hit_floor,
    )
    if sol.status == 1:
        raise SingularityError(f"rho fell below {RHO_FLOOR} at t={sol.t_events[0][0]}")
    if sol.status != 0:
        raise StiffnessError(sol.message)
    dense = sol.sol
    y = dense(grid)
    rho, rho_dot = y[0], y[1]
    if np.any(rho <= 0):
        raise SingularityError("rho became non-positive")

    lo, hi = grid[0], grid[-1]
    h = 1e-3 * min(1.0, hi - lo)
    k2 = profile.kappa ** 2
    residual = np.empty_like(grid)
    for i, t in enumerate(grid):
        rho_ddot = _derivative(lambda s: dense(s)[1], t, h, lo, hi)
        m = profile.mass(t)
        om = profile.big_omega(t)
        residual[i] = abs(rho_ddot + profile.mass_dot(t) / m * rho_dot[i]
                          + om * om * rho[i] - k2 / (m * m * rho[i] ** 3))

    env = EnvelopeSolution(grid, rho, rho_dot, residual, profile,
                           np.zeros((3, grid.size)), dense)
    cum = np.zeros((3, grid.size))
    fs = env._integrands()
    for i in range(1, grid.size):
        for j, f in enumerate(fs):
            cum[j, i] = cum[j, i - 1] + _quad(f, grid[i - 1], grid[i], profile.breakpoints)
    object.__setattr__(env, "integrals", cum)
    return env


@dataclass(frozen=True)
class PhaseValue:
    n: int
    ell: float
    gamma: float


def _gamma_from_integrals(profile, integrals, n, ell):
    i_inv, i_cyc, i_field = integrals
    return (-0.5 * profile.kappa * (2 * n + ell + 1) * i_inv - 0.5 * ell * i_cyc
            + 0.5 * profile.charge ** 2 * i_field)


def phase(profile, envelope, n, ell, t):
    """Lewis-Riesenfeld phase gamma_n^ell(t), accumulated from ``grid[0]``."""
    if n < 0 or ell < 0:
        raise DomainError("phase needs n >= 0 and ell >= 0")
    g = _gamma_from_integrals(profile, envelope.phase_integrals(t), n, ell)
    return PhaseValue(int(n), float(ell), float(g))


def invariant_eigenvalue(n, ell, kappa=1.0):
    """Eigenvalue kappa (2n + ell + 1) of the invariant."""
    if n < 0 or ell < 0:
        raise DomainError("need n >= 0 and ell >= 0")
    return kappa * (2 * n + ell + 1)


def hamiltonian_expectation(profile, envelope, n, ell, t):
    """Expectation value of H(t) in the n-th invariant eigenstate."""
    rho, rho_dot = envelope.state(t)
    m = profile.mass(t)
    k = profile.kappa
    om = profile.big_omega(t)
    w = profile.omega(t)
    e = profile.efield(t)
    bracket = m * rho_dot ** 2 + k * k / (m * rho * rho) + m * om * om * rho * rho
    return (bracket * (2 * n + ell + 1) / (2 * k) - 0.5 * ell * profile.cyclotron(t)
            - profile.charge ** 2 * e * e / (2 * m * w))


def _radial_factor(n, ell, kappa, rho, rho_dot, mass, r):
    r = np.asarray(r, dtype=float)
    u = kappa * r * r / (rho * rho)
    log_norm = 0.5 * ((1 + ell) * math.log(kappa) - math.log(math.pi)
                      + math.lgamma(n + 1) - math.lgamma(n + ell + 1)) - (1 + ell) * math.log(rho)
    gauss = np.exp((1j * mass * rho_dot / rho - kappa / (rho * rho)) * r * r / 2)
    lag = laguerre_table(n, ell, u)[n]
    return (-1) ** n * math.exp(log_norm) * r ** ell * gauss * lag


def invariant_eigenfunction(profile, envelope, n, ell, r, theta, t):
    """Eigenfunction of the invariant I(t) in polar coordinates (no phase)."""
    rho, rho_dot = envelope.state(t)
    rad = _radial_factor(n, ell, profile.kappa, rho, rho_dot, profile.mass(t), r)
    return rad * np.exp(1j * ell * np.asarray(theta))


def number_wavefunction(profile, envelope, n, ell, r, theta, t):
    """Solution psi_n^ell(r, theta, t) of the Schroedinger equation."""
    g = phase(profile, envelope, n, ell, t).gamma
    return invariant_eigenfunction(profile, envelope, n, ell, r, theta, t) * np.exp(1j * g)


@dataclass(frozen=True)
class Frame:
    """Snapshot of the envelope at one instant, as seen by the state modules.

    The wavefunction variable is ``u = kappa r^2 / rho^2``. The three phase
    integrals fix gamma_n^ell; all zero means every phase is 1.
    """

    rho: float = 1.0
    rho_dot: float = 0.0
    mass: float = 1.0
    kappa: float = 1.0
    theta: float = 0.0
    charge: float = 1.0
    integrals: tuple = (0.0, 0.0, 0.0)

    @property
    def varpi(self):
        return complex(1.0, -self.mass * self.rho * self.rho_dot / self.kappa)

    @property
    def is_static(self):
        return self.rho_dot == 0.0

    def gammas(self, levels, ell):
        """gamma_k^ell for an array of levels k."""
        i_inv, i_cyc, i_field = self.integrals
        levels = np.asarray(levels, dtype=float)
        return (-0.5 * self.kappa * (2 * levels + ell + 1) * i_inv - 0.5 * ell * i_cyc
                + 0.5 * self.charge ** 2 * i_field)

    def basis_prefactor(self, levels, ell):
        """N_k = (-1)^k sqrt(kappa / (pi rho^2)) e^{i ell theta} for each level k."""
        levels = np.asarray(levels)
        sign = np.where(levels % 2 == 0, 1.0, -1.0)
        return sign * math.sqrt(self.kappa / (math.pi * self.rho ** 2)) * np.exp(1j * ell * self.theta)

    def u_from_r(self, r):
        return self.kappa * np.asarray(r, dtype=float) ** 2 / self.rho ** 2


def frame_at(profile, envelope, t, theta=0.0):
    rho, rho_dot = envelope.state(t)
    return Frame(rho=rho, rho_dot=rho_dot, mass=profile.mass(t), kappa=profile.kappa,
                 theta=theta, charge=profile.charge,
                 integrals=tuple(float(v) for v in envelope.phase_integrals(t)))


def static_frame(kappa=1.0, mass=1.0, big_omega=1.0, theta=0.0):
    """Frame at the stationary envelope with all phases zero."""
    return Frame(rho=math.sqrt(kappa / (mass * big_omega)), rho_dot=0.0, mass=mass,
                 kappa=kappa, theta=theta)
