"""Dense eigensolvers for the exactly-symmetric matrices the test produces.

Matrices here are small (a few hundred rows at desk scale), so the full
symmetric solve is cheap; the largest eigenvalue is simply the top of the
spectrum.  LAPACK's symmetric drivers are deterministic for a fixed input,
which the reproducibility contract of the package relies on.
"""

from __future__ import annotations

import numpy as np


def _checked(S) -> np.ndarray:
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {S.shape}")
    if S.shape[0] < 1:
        raise ValueError("matrix order must be at least 1")
    if not np.all(np.isfinite(S)):
        raise ValueError("matrix has non-finite entries")
    if not np.array_equal(S, S.T):
        raise ValueError("matrix is not exactly symmetric")
    return S


def largest_eigenvalue(S) -> float:
    """Largest eigenvalue of an exactly-symmetric real matrix."""
    return float(np.linalg.eigvalsh(_checked(S))[-1])


def all_eigenvalues(S) -> np.ndarray:
    """Full spectrum of an exactly-symmetric real matrix, sorted descending."""
    return np.linalg.eigvalsh(_checked(S))[::-1].copy()
