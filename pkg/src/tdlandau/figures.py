"""Tabular datasets behind the weight, PND and statistics plots.

Each builder returns a :class:`Table`; nothing is plotted here.
"""

import math
from dataclasses import dataclass

import numpy as np

from .measure import bg_weight, pacs_weight
from .states import StateSpec
from .statistics import g2, mandel_q, mean_photon_number, pnd

ELLS = (0.5, 1.0, 1.5, 2.0)


@dataclass(frozen=True)
class Table:
    name: str
    columns: tuple
    rows: list

    def column(self, key):
        i = self.columns.index(key)
        return np.array([row[i] for row in self.rows])


def weight_curves(ells=ELLS, radii=None):
    """f1: plain-state weight omega_l(r)."""
    radii = np.linspace(0.05, 5.0, 100) if radii is None else radii
    rows = [(ell, float(r), bg_weight(ell, float(r))) for ell in ells for r in radii]
    return Table("f1", ("ell", "r", "weight"), rows)


def pnd_table(name, cases, n_top=40):
    """PND rows (ell, m, |z|^2, N, P) for each (ell, m, |z|^2) case."""
    rows = []
    for ell, m, z2 in cases:
        d = pnd(StateSpec(math.sqrt(z2), ell, m))
        for lvl, pr in zip(d.levels, d.probabilities):
            if lvl - m > n_top:
                break
            rows.append((ell, m, z2, int(lvl), float(pr)))
    return Table(name, ("ell", "m", "z2", "n", "probability"), rows)


def statistics_table(name, cases, radii):
    """(ell, m, |z|, <N>, g2, Q) over a radius grid."""
    rows = []
    for ell, m in cases:
        for r in radii:
            s = StateSpec(float(r), ell, m)
            mean, _ = mean_photon_number(s)
            rows.append((ell, m, float(r), mean, g2(s), mandel_q(s)))
    return Table(name, ("ell", "m", "r", "mean_n", "g2", "q"), rows)


def pacs_weight_curves(name, cases, radii=None):
    radii = np.linspace(0.1, 5.0, 50) if radii is None else radii
    rows = [(ell, m, float(r), pacs_weight(ell, m, float(r))) for ell, m in cases for r in radii]
    return Table(name, ("ell", "m", "r", "weight"), rows)


def _stat_slice(table, key):
    t = table
    cols = [t.columns.index(c) for c in ("ell", "m", "r", key)]
    return Table(t.name, ("ell", "m", "r", key), [tuple(row[i] for i in cols) for row in t.rows])


def build(name, points=60):
    """Build one named dataset (f1 .. f11, or mean_n for the <N> curves)."""
    radii = np.linspace(0.05, 10.0, points)
    if name == "f1":
        return weight_curves()
    if name == "f2":
        return pnd_table("f2", [(1.5, 0, 6.0), (1.5, 0, 9.0)])
    if name == "f3":
        return pnd_table("f3", [(3.5, 0, 9.0), (5.0, 0, 9.0)])
    if name in ("f4", "f5"):
        t = statistics_table(name, [(ell, 0) for ell in ELLS], radii)
        return _stat_slice(t, "g2" if name == "f4" else "q")
    if name == "f6":
        return pacs_weight_curves("f6", [(ell, 3) for ell in (1.5, 2.5, 3.5)])
    if name == "f7":
        return pacs_weight_curves("f7", [(2.5, m) for m in (0, 1, 2, 3)])
    if name == "f8":
        return pnd_table("f8", [(3.5, 2, 4.0), (3.5, 2, 9.0)])
    if name == "f9":
        return pnd_table("f9", [(4.5, 1, 81.0), (4.5, 7, 81.0)], n_top=60)
    if name in ("f10", "f11"):
        t = statistics_table(name, [(2.5, m) for m in range(4)], radii)
        return _stat_slice(t, "g2" if name == "f10" else "q")
    if name == "mean_n":
        t = statistics_table(name, [(1.5, m) for m in (1, 2, 3)], radii)
        return _stat_slice(t, "mean_n")
    raise KeyError(f"unknown dataset {name!r}")


NAMES = ("f1", "f2", "f3", "f4", "f5", "f6", "f7", "f8", "f9", "f10", "f11", "mean_n")
