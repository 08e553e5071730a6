"""Truncated matrix realization of the su(1,1) generators on the number basis.

Each generator is stored as a single band (diagonal, sub- or super-diagonal).
Products of generators are exact except in the last row and column, so every
identity is checked on the interior block ``[:dim-1, :dim-1]``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

KINDS = ("raise", "lower", "diag")


@dataclass(frozen=True)
class LadderMatrix:
    """One su(1,1) generator truncated to levels ``0 .. dim-1``.

    ``band`` has length ``dim - 1`` for the ladder generators and ``dim``
    for the diagonal one. For ``lower`` the entry ``band[n-1]`` is the
    matrix element ``(n-1, n)``; ``raise`` is its transpose.
    """

    kind: str
    ell: float
    dim: int
    band: np.ndarray

    def dense(self):
        d = np.zeros((self.dim, self.dim), dtype=self.band.dtype)
        if self.kind == "diag":
            np.fill_diagonal(d, self.band)
        elif self.kind == "lower":
            d[np.arange(self.dim - 1), np.arange(1, self.dim)] = self.band
        else:
            d[np.arange(1, self.dim), np.arange(self.dim - 1)] = self.band
        return d

    def apply(self, vec):
        """Matrix-vector product without forming the dense matrix."""
        vec = np.asarray(vec)
        if vec.shape[0] != self.dim:
            raise DomainError(f"vector length {vec.shape[0]} != dim {self.dim}")
        out = np.zeros(vec.shape, dtype=np.result_type(vec, self.band))
        if self.kind == "diag":
            out[:] = self.band * vec
        elif self.kind == "lower":
            out[:-1] = self.band * vec[1:]
        else:
            out[1:] = self.band * vec[:-1]
        return out


def ladder_matrix(kind, ell, dim, dtype=float):
    """Build K+, K- or K0 for Bargmann-type index ``ell`` on ``dim`` levels.

    ``dtype`` may be ``np.longdouble`` when the identities are to be checked
    below double-precision rounding of the O(dim^2) entries.
    """
    if kind not in KINDS:
        raise DomainError(f"kind must be one of {KINDS}, got {kind!r}")
    if dim < 2:
        raise DomainError(f"dim must be >= 2, got {dim}")
    if ell < 0:
        raise DomainError(f"ell must be >= 0, got {ell}")
    ell_t = np.asarray(ell, dtype=dtype)
    if kind == "diag":
        n = np.arange(dim, dtype=dtype)
        band = (2 * n + ell_t + 1) / 2
    else:
        n = np.arange(1, dim, dtype=dtype)
        band = np.sqrt(n * (n + ell_t))
    return LadderMatrix(kind, float(ell), int(dim), band)


def casimir_value(ell):
    """Eigenvalue (ell + 1)(ell - 1)/4 of the Casimir operator."""
    if ell < 0:
        raise DomainError(f"ell must be >= 0, got {ell}")
    return (ell + 1.0) * (ell - 1.0) / 4.0


def log_raise_power_coefficient(n, ell, m):
    if n < 0 or m < 0:
        raise DomainError("n and m must be non-negative")
    return 0.5 * (math.lgamma(n + m + 1) + math.lgamma(n + ell + m + 1)
                  - math.lgamma(n + 1) - math.lgamma(n + ell + 1))


def raise_power_coefficient(n, ell, m):
    """Coefficient c with (K+)^m |n> = c |n + m>, from log-gamma ratios."""
    return math.exp(log_raise_power_coefficient(n, ell, m))


@dataclass(frozen=True)
class AlgebraReport:
    """Maximum elementwise errors of the su(1,1) identities on the interior."""

    dim: int
    ell: float
    comm_minus_plus: float
    comm_zero_plus: float
    comm_zero_minus: float
    casimir: float
    casimir_commutes: float
    number_products: float

    @property
    def worst(self):
        return max(self.comm_minus_plus, self.comm_zero_plus, self.comm_zero_minus,
                   self.casimir, self.casimir_commutes, self.number_products)


def _bands(mat):
    # {offset: diagonal}, offset k meaning entries (i, i + k)
    off = {"diag": 0, "lower": 1, "raise": -1}[mat.kind]
    return {off: mat.band}


def _band_len(dim, k):
    return dim - abs(k)


def _mul(a, b, dim):
    out = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = ka + kb
            if abs(k) >= dim:
                continue
            # rows i with i, i + ka, i + ka + kb all inside [0, dim)
            lo = max(0, -ka, -k)
            hi = min(dim, dim - ka, dim - k)
            if hi <= lo:
                continue
            rows = np.arange(lo, hi)
            ia = rows - max(0, -ka)
            ib = rows + ka - max(0, -kb)
            prod = np.zeros(_band_len(dim, k), dtype=np.result_type(va, vb))
            prod[rows - max(0, -k)] = va[ia] * vb[ib]
            out[k] = out.get(k, 0) + prod
    return out


def _lin(*terms):
    # linear combination of band dicts: terms are (coef, bands)
    out = {}
    for c, m in terms:
        for k, v in m.items():
            out[k] = out.get(k, 0) + c * v
    return out


def _interior_err(m, dim, cut=1):
    """Max |entry| over the block of rows and columns ``< dim - cut``."""
    worst = 0.0
    n = dim - cut
    for k, v in m.items():
        if abs(k) >= n:
            continue
        lo = max(0, -k)
        rows = np.arange(lo, min(n, n - k))
        vals = np.asarray(v)[rows - lo]
        if vals.size:
            worst = max(worst, float(np.max(np.abs(vals))))
    return worst


def check_algebra(ell, dim, dtype=float):
    """Evaluate every commutation and Casimir identity on the truncated interior.

    Products are formed band by band, so the cost is linear in ``dim``.
    """
    kp = _bands(ladder_matrix("raise", ell, dim, dtype))
    km = _bands(ladder_matrix("lower", ell, dim, dtype))
    k0 = _bands(ladder_matrix("diag", ell, dim, dtype))
    one = {0: np.ones(dim, dtype=dtype)}
    c = np.asarray(casimir_value(ell), dtype=dtype)

    def comm(a, b):
        return _lin((1, _mul(a, b, dim)), (-1, _mul(b, a, dim)))

    pm = _mul(kp, km, dim)
    mp = _mul(km, kp, dim)
    casimir_mat = _lin((1, _mul(k0, k0, dim)), (-0.5, pm), (-0.5, mp))
    n = np.arange(dim, dtype=dtype)
    ell_t = np.asarray(ell, dtype=dtype)
    prod = max(_interior_err({0: pm[0] - n * (n + ell_t)}, dim),
               _interior_err({0: mp[0] - (n + 1) * (n + ell_t + 1)}, dim))
    # the Casimir commutes with K+- only away from the last two slots
    c_comm = max(_interior_err(comm(casimir_mat, kp), dim, 2),
                 _interior_err(comm(casimir_mat, km), dim, 2))
    return AlgebraReport(
        dim=dim, ell=float(ell),
        comm_minus_plus=_interior_err(_lin((1, comm(km, kp)), (-2, k0)), dim),
        comm_zero_plus=_interior_err(_lin((1, comm(k0, kp)), (-1, kp)), dim),
        comm_zero_minus=_interior_err(_lin((1, comm(k0, km)), (1, km)), dim),
        casimir=_interior_err(_lin((1, casimir_mat), (-c, one)), dim),
        casimir_commutes=c_comm,
        number_products=prod,
    )


def check_algebra_dense(ell, dim, dtype=float):
    """Same identities through dense matrix products (slow reference)."""
    kp = ladder_matrix("raise", ell, dim, dtype).dense()
    km = ladder_matrix("lower", ell, dim, dtype).dense()
    k0 = ladder_matrix("diag", ell, dim, dtype).dense()
    s = slice(0, dim - 1)

    def err(a):
        return float(np.max(np.abs(a[s, s])))

    cas = k0 @ k0 - (kp @ km + km @ kp) / 2
    return {
        "comm_minus_plus": err(km @ kp - kp @ km - 2 * k0),
        "comm_zero_plus": err(k0 @ kp - kp @ k0 - kp),
        "comm_zero_minus": err(k0 @ km - km @ k0 + km),
        "casimir": err(cas - np.eye(dim, dtype=dtype) * np.asarray(casimir_value(ell), dtype=dtype)),
    }
