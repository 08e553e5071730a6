"""Acceptance gate: one test per criterion, each at its stated tolerance and time limit.

Every test prints (and records for the terminal summary) a single
pass/fail line. Checks whose claim does not hold numerically are left to
fail; nothing here is loosened to make them pass.
"""

import pytest

from conftest import ACCEPTANCE_LINES
from tdlandau import verify

# (check, time limit in seconds); tolerances are the check defaults
CRITERIA = [
    ("c01_small_z_g2", verify.check_small_z_g2, 1.0),
    ("c02_large_z_g2", verify.check_large_z_g2, 1.0),
    ("c03_small_z_mandel_q", verify.check_small_z_q, 1.0),
    ("c04_subpoissonian_sweep", verify.check_subpoissonian, 5.0),
    ("c05_identity_plain", verify.check_identity_m0, 30.0),
    ("c06_identity_photon_added", verify.check_identity_pacs, 300.0),
    ("c07_g_moment_reductions", verify.check_meijer_reductions, 1.0),
    ("c08_norm_reduction", verify.check_norm_reduction, 1.0),
    ("c09_algebra", verify.check_algebra_suite, 1.0),
    ("c10_lowering_eigenvalue", verify.check_eigenvalue, 1.0),
    ("c11_ermakov", verify.check_ermakov, 5.0),
    ("c12_wigner_oracle", verify.check_wigner, 120.0),
    ("c13_figure_claims", verify.check_figures, 60.0),
]


def _record(res, limit):
    timed = res.seconds < limit
    ok = res.passed and timed
    line = (f"{'PASS' if ok else 'FAIL'} {res.key:>4} {res.title}: measured {res.measured:.3e}, "
            f"tol {res.tolerance:.1e}, {res.seconds:.2f}s (limit {limit:g}s). {res.detail}")
    print(line)
    ACCEPTANCE_LINES.append(line)
    return timed


@pytest.mark.parametrize("name,check,limit", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_criterion(name, check, limit):
    res = check()
    timed = _record(res, limit)
    assert res.passed, res.line()
    assert timed, f"{res.key} took {res.seconds:.2f}s, limit {limit}s"


def test_c14_mean_vanishing_report():
    # report-only: the outcome is printed, never asserted
    res = verify.check_mean_vanishing()
    line = f"REPORT  c14 {res.title}: {res.detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert res.report_only
