"""One-call pipeline: homology, sigma_# adaptation, periods and the lattice."""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, Tolerances
from .curve import CurveDescriptor
from .jacobian import Lattice, lattice_from_periods
from .periods import PeriodData, period_matrix
from .topology import (
    HomologyBasis,
    SigmaHomologyAction,
    adapt_basis_to_sigma,
    canonical_homology_basis,
    sigma_homology_matrix,
)


@dataclass(frozen=True, eq=False)
class Analysis:
    curve: CurveDescriptor
    raw_basis: HomologyBasis
    raw_action: SigmaHomologyAction
    basis: HomologyBasis
    action: SigmaHomologyAction
    change: np.ndarray
    periods: PeriodData
    lattice: Lattice
    tol: Tolerances
    seed: int

    def homology_json(self) -> dict:
        def im(m):
            return [[int(v) for v in row] for row in m]

        return {
            "intersection": im(self.basis.intersection),
            "sigma_raw": im(self.raw_action.matrix),
            "sigma_adapted": im(self.action.matrix),
            "change_of_basis": im(self.change),
        }


@functools.lru_cache(maxsize=32)
def analyze(curve: CurveDescriptor, tol: Tolerances = DEFAULT, seed: int = 0) -> Analysis:
    """Run the full pipeline for ``curve``; results are cached per (curve, tol, seed)."""
    raw = canonical_homology_basis(curve, tol, seed)
    raw_action = sigma_homology_matrix(curve, raw, tol, seed)
    basis, action, change = adapt_basis_to_sigma(raw, raw_action)
    periods = period_matrix(curve, basis, tol)
    return Analysis(
        curve, raw, raw_action, basis, action, change, periods, lattice_from_periods(periods), tol, seed
    )
