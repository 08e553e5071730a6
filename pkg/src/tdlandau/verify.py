"""Numerical verification suite.

Each ``check_*`` function runs one property at an explicit tolerance and
returns a :class:`CheckResult`. ``run_suite`` strings them together for the
``verify`` subcommand and the acceptance tests.
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .algebra import check_algebra
from .dynamics import constant_profile, solve_ermakov, static_frame
from .measure import bg_weight, identity_resolution_residual, moment_residual, pacs_weight, pacs_weight_density
from .states import StateSpec, bg_norm, build_coefficients, lowering_eigenvalue_residual, pacs_norm
from .statistics import (
    find_sign_change,
    g2,
    mandel_q,
    mean_photon_number,
    meijer_g_moment,
    meijer_moment_closed,
    pnd,
    standard_sign_mean,
)
from .wigner import wigner_direct, wigner_series

ELLS = (0.5, 1.0, 1.5, 2.0)


@dataclass
class CheckResult:
    key: str
    title: str
    passed: bool
    measured: float
    tolerance: float
    detail: str = ""
    report_only: bool = False
    seconds: float = 0.0
    extra: dict = field(default_factory=dict)

    def line(self):
        status = "REPORT" if self.report_only else ("PASS" if self.passed else "FAIL")
        return (f"[{status}] {self.key} {self.title}: measured={self.measured:.3e} "
                f"tol={self.tolerance:.1e} ({self.seconds:.2f}s) {self.detail}").rstrip()


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@_timed
def check_small_z_g2(tol=1e-4, r=1e-3, ells=ELLS):
    """g2 tends to (l+1)/(l+2) as |z| -> 0."""
    errs = [abs(g2(StateSpec(r, ell)) - (ell + 1) / (ell + 2)) for ell in ells]
    worst = max(errs)
    return CheckResult("c1", "small-|z| g2 limit", worst <= tol, worst, tol)


@_timed
def check_large_z_g2(tol=5e-3, r=50.0, ells=ELLS):
    """g2 tends to 1 for large |z| (approach is like 1 - 1/(2|z|))."""
    errs = [abs(g2(StateSpec(r, ell)) - 1.0) for ell in ells]
    worst = max(errs)
    return CheckResult("c2", "large-|z| g2 limit", worst <= tol, worst, tol,
                       detail=f"1/(2|z|) = {1 / (2 * r):.3e}")


@_timed
def check_small_z_q(tol=1e-4, r=0.1, ells=ELLS):
    """Q ~ -|z|^2 / ((l+1)(l+2)) for small |z|."""
    errs = [abs(mandel_q(StateSpec(r, ell)) + r * r / ((ell + 1) * (ell + 2))) for ell in ells]
    worst = max(errs)
    return CheckResult("c3", "small-|z| Mandel Q", worst <= tol, worst, tol)


@_timed
def check_subpoissonian(ells=ELLS, lo=0.05, hi=10.0, points=100):
    """Q < 0 and g2 < 1 for plain states on the (l, |z|) sweep."""
    worst_g = -math.inf
    worst_q = -math.inf
    for ell in ells:
        for r in np.linspace(lo, hi, points):
            s = StateSpec(r, ell)
            worst_g = max(worst_g, g2(s))
            worst_q = max(worst_q, mandel_q(s))
    ok = worst_g < 1.0 and worst_q < 0.0
    return CheckResult("c4", "sub-Poissonian sweep (m=0)", ok, max(worst_g - 1.0, worst_q), 0.0,
                       detail=f"max g2={worst_g:.6f} max Q={worst_q:.6f}")


@_timed
def check_identity_m0(tol=1e-6, ells=ELLS, n_top=10):
    """Diagonal resolution-of-identity residual with the Bessel product weight."""
    worst = max(identity_resolution_residual(ell, 0, n) for ell in ells for n in range(n_top + 1))
    return CheckResult("c5", "resolution of identity, m=0", worst <= tol, worst, tol)


@_timed
def check_identity_pacs(moment_tol=1e-6, identity_tol=1e-4, cases=((1.5, 1), (2.5, 3)), n_top=6):
    """Mellin-inverted density: moments s = m+1..m+6 and diagonal residuals n <= n_top."""
    worst_mom = 0.0
    worst_id = 0.0
    for ell, m in cases:
        worst_mom = max(worst_mom, max(moment_residual(ell, m, s) for s in range(m + 1, m + 7)))
        worst_id = max(worst_id, max(identity_resolution_residual(ell, m, n) for n in range(n_top + 1)))
    ok = worst_mom <= moment_tol and worst_id <= identity_tol
    return CheckResult("c6", "resolution of identity, photon-added", ok, max(worst_mom, worst_id),
                       identity_tol, detail=f"moments={worst_mom:.2e} (tol {moment_tol:.0e}) "
                                            f"identity={worst_id:.2e}")


@_timed
def check_meijer_reductions(tol=1e-10, ells=ELLS, lo=0.1, hi=10.0, points=40):
    """m = 0 G-moments against |z|^{i-l} I_{l+i}(2|z|) (with sign (-1)^i)."""
    worst = 0.0
    for ell in ells:
        for r in np.linspace(lo, hi, points):
            s = StateSpec(r, ell)
            for i in range(3):
                a = meijer_g_moment(i, s)
                b = meijer_moment_closed(i, r, ell)
                worst = max(worst, abs(a / b - 1.0))
    return CheckResult("c7", "G-moment Bessel reductions", worst <= tol, worst, tol)


@_timed
def check_norm_reduction(tol=1e-12, ells=(0.0, 0.5, 1.0, 1.5, 2.0, 2.5), radii=(0.0, 0.1, 0.5, 1, 2, 4, 8, 15)):
    worst = 0.0
    for ell in ells:
        for r in radii:
            worst = max(worst, abs(pacs_norm(r, ell, 0) / bg_norm(r, ell) - 1.0))
    return CheckResult("c8", "photon-added norm at m=0", worst <= tol, worst, tol)


@_timed
def check_algebra_suite(tol=1e-12, dim=200, ells=(0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0)):
    """Commutators and Casimir on the interior, in extended precision.

    The float64 error (about one ulp of the O(dim^2) entries) is reported
    in the detail field.
    """
    worst = 0.0
    worst64 = 0.0
    for ell in ells:
        rep = check_algebra(ell, dim, np.longdouble)
        worst = max(worst, rep.comm_minus_plus, rep.comm_zero_plus, rep.comm_zero_minus, rep.casimir)
        rep64 = check_algebra(ell, dim, float)
        worst64 = max(worst64, rep64.comm_minus_plus, rep64.comm_zero_plus,
                      rep64.comm_zero_minus, rep64.casimir)
    return CheckResult("c9", "su(1,1) commutators and Casimir", worst <= tol, worst, tol,
                       detail=f"long double; float64 gives {worst64:.1e} (relative "
                              f"{worst64 / (dim * dim):.1e})")


@_timed
def check_eigenvalue(tol=1e-10, ells=(0.0, 0.5, 1.0, 1.5, 2.0, 2.5), radii=(0.0, 0.3, 1.0, 2.5, 5.0, 10.0),
                     phases=(0.0, 0.9, 2.5)):
    worst = 0.0
    for ell in ells:
        for r in radii:
            for ph in phases:
                cv = build_coefficients(StateSpec(r * complex(math.cos(ph), math.sin(ph)), ell))
                worst = max(worst, lowering_eigenvalue_residual(cv))
    return CheckResult("c10", "lowering eigenvalue residual", worst <= tol, worst, tol)


@_timed
def check_ermakov(stationary_tol=1e-9, pinney_tol=1e-7, t_end=100.0):
    """Stationary envelope preserved; oscillating envelope against the Pinney closed form."""
    prof = constant_profile(mass=1.3, omega=0.9, bfield=0.7, charge=1.0, kappa=1.1)
    grid = np.linspace(0.0, t_end, 2001)
    rs = prof.stationary_rho()
    env = solve_ermakov(prof, rs, 0.0, grid)
    stat = float(np.max(np.abs(env.rho - rs)))
    rho0, rd0 = 0.6 * rs, 0.25
    env = solve_ermakov(prof, rho0, rd0, grid)
    M = prof.mass(0.0)
    om = prof.big_omega(0.0)
    C = rho0 * rd0 / om
    A = (prof.kappa ** 2 / (M * M * om * om) + C * C + rho0 ** 4) / (2 * rho0 ** 2)
    B = rho0 ** 2 - A
    exact = np.sqrt(A + B * np.cos(2 * om * grid) + C * np.sin(2 * om * grid))
    pin = float(np.max(np.abs(env.rho - exact)))
    ok = stat <= stationary_tol and pin <= pinney_tol
    return CheckResult("c11", "Ermakov-Pinney solver", ok, max(stat, pin), pinney_tol,
                       detail=f"stationary={stat:.2e} pinney={pin:.2e} max residual={env.residual.max():.1e}")


@_timed
def check_wigner(tol=1e-5, imag_tol=1e-8, cases=((0.5, 0, 1.0), (1.5, 2, 1.0)), floor=1e-6,
                 ys=np.linspace(-2.0, 2.0, 5), ps=np.linspace(-1.0, 1.0, 5), phase=0.7):
    """Series against direct transform on a 5x5 (y, p) probe grid at a static frame."""
    frame = static_frame()
    worst = 0.0
    worst_imag = 0.0
    for ell, m, r in cases:
        spec = StateSpec(r * complex(math.cos(phase), math.sin(phase)), ell, m)
        vals = []
        for y in ys:
            for p in ps:
                s, im = wigner_series(spec, frame, y, p, return_imag=True)
                d = wigner_direct(spec, frame, y, p)
                vals.append(abs(s))
                if abs(d) > floor:
                    worst = max(worst, abs(s - d) / abs(d))
                worst_imag = max(worst_imag, abs(im))
        worst_imag = worst_imag / max(vals)
    ok = worst <= tol and worst_imag <= imag_tol
    return CheckResult("c12", "Wigner series vs direct transform", ok, worst, tol,
                       detail=f"imag residue={worst_imag:.1e}")


def _weight_claims():
    rs = np.linspace(0.05, 5.0, 100)
    curves = {ell: np.array([bg_weight(ell, r) for r in rs]) for ell in ELLS}
    positive = all(np.all(c > 0) for c in curves.values())
    decreasing = all(np.all(np.diff(c) < 0) for c in curves.values())
    ordered = all(np.all(curves[a] > curves[b]) for a, b in zip(ELLS, ELLS[1:]))
    return positive, decreasing, ordered


def _pnd_shift():
    peaks = [pnd(StateSpec(math.sqrt(z2), 1.5)).peak for z2 in (6.0, 9.0)]
    heights = [pnd(StateSpec(math.sqrt(z2), 1.5)).probabilities.max() for z2 in (6.0, 9.0)]
    return peaks[1] > peaks[0] and heights[1] < heights[0], peaks


def _photon_added_ordering(ell=2.5, ms=(0, 1, 2, 3), radii=np.linspace(6.0, 10.0, 9)):
    g_dec = True
    q_dec = True
    for r in radii:
        gs = [g2(StateSpec(r, ell, m)) for m in ms]
        qs = [mandel_q(StateSpec(r, ell, m)) for m in ms]
        g_dec &= all(b < a for a, b in zip(gs, gs[1:]))
        q_dec &= all(b < a for a, b in zip(qs, qs[1:]))
    return g_dec, q_dec


@_timed
def check_figures():
    """Qualitative figure claims: weight (f1), PND shift (f2), g2/Q ordering in m (f10/f11)."""
    positive, decreasing, ordered = _weight_claims()
    shift, peaks = _pnd_shift()
    g_dec, q_dec = _photon_added_ordering()
    flags = {"f1_positive": positive, "f1_decreasing_in_r": decreasing, "f1_decreasing_in_ell": ordered,
             "f2_peak_shift": shift, "f10_g2_decreasing_in_m": g_dec, "f11_q_decreasing_in_m": q_dec}
    failed = [k for k, v in flags.items() if not v]
    detail = "all claims hold" if not failed else "failed: " + ", ".join(failed)
    return CheckResult("c13", "figure reproduction (qualitative)", not failed, float(len(failed)), 0.0,
                       detail=detail + f"; f2 peaks {peaks}", extra=flags)


@_timed
def check_mean_vanishing(ell=1.5, ms=(1, 2, 3), lo=0.01, hi=10.0):
    """Look for a finite |z0| with <N> = 0 for photon-added states (report only).

    The direct series gives <N> >= m > 0. If the first G-moment entered
    with the opposite sign, the mean would read m - <n>, which does vanish;
    its root is reported as the likely origin of the claim.
    """
    found = []
    for m in ms:
        root = find_sign_change(lambda r, m=m: mean_photon_number(StateSpec(r, ell, m))[0], lo, hi)
        found.append(root)
    min_mean = min(mean_photon_number(StateSpec(r, ell, m))[0] for m in ms for r in np.linspace(lo, hi, 50))
    alt = {m: find_sign_change(lambda r, m=m: standard_sign_mean(StateSpec(r, ell, m)), lo, hi) for m in ms}
    reproduced = any(r is not None for r in found)
    alt_txt = ", ".join(f"m={m}: {'none' if v is None else f'{v:.4f}'}" for m, v in alt.items())
    detail = ("reproduced" if reproduced else f"not reproduced: min <N> = {min_mean:.3f} > 0") + \
        f"; zero of m - <n> at |z0| ({alt_txt})"
    return CheckResult("c14", "<N> vanishing at finite |z0|", True, min_mean, 0.0, detail=detail,
                       report_only=True, extra={"roots": found, "alternative_roots": alt})


@_timed
def check_weight_claims(ell=2.5, ms=(0, 1, 2, 3), radii=np.linspace(0.2, 8.0, 40)):
    """Photon-added weights: ordering in m, approach to the m=0 curve, positivity off the half-integers."""
    curves = {m: np.array([pacs_weight(ell, m, float(r)) for r in radii]) for m in ms}
    increasing = all(np.all(curves[b] > curves[a]) for a, b in zip(ms, ms[1:]))
    gap = float(np.max([abs(curves[m][-1] / curves[0][-1] - 1) for m in ms]))
    odd = min(pacs_weight_density(e, m, float(x)) for e in (0.3, 0.7, 1.3) for m in (0, 2)
              for x in np.geomspace(1e-4, 60, 15))
    detail = (f"W increasing in m: {'yes' if increasing else 'no'}; "
              f"max |W_m/W_0 - 1| at r={radii[-1]:.1f}: {gap:.3f}; min density at l in {{0.3, 0.7, 1.3}}: {odd:.2e}")
    return CheckResult("r6", "photon-added weight claims", True, gap, 0.0, detail=detail, report_only=True,
                       extra={"increasing_in_m": increasing, "gap": gap, "positive_off_grid": odd > 0})


FULL = (check_small_z_g2, check_large_z_g2, check_small_z_q, check_subpoissonian, check_identity_m0,
        check_identity_pacs, check_meijer_reductions, check_norm_reduction, check_algebra_suite,
        check_eigenvalue, check_ermakov, check_wigner, check_figures, check_mean_vanishing,
        check_weight_claims)


def _quick(fn):
    # lighter parameter sets for --quick; tolerances unchanged
    if fn is check_subpoissonian:
        return lambda: fn(points=25)
    if fn is check_identity_m0:
        return lambda: fn(n_top=4)
    if fn is check_identity_pacs:
        return lambda: fn(cases=((1.5, 1),), n_top=3)
    if fn is check_wigner:
        return lambda: fn(cases=((0.5, 0, 1.0),), ys=np.linspace(-2.0, 2.0, 3), ps=np.linspace(-1.0, 1.0, 3))
    return fn


def run_suite(quick=False):
    """Run every check (lighter grids with ``quick``, tolerances unchanged)."""
    results = []
    for fn in FULL:
        call = _quick(fn) if quick else fn
        results.append(call())
    return results


def suite_passed(results):
    return all(r.passed for r in results if not r.report_only)
