"""Physicality and two-mode separability diagnostics."""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .gaussian import (
    STRUCTURAL_TOL,
    VACUUM_VARIANCE,
    GaussianState,
    min_symplectic_eigenvalue,
    reduce,
    symplectic_spectrum,
)

# momentum flip on the second mode
PARTIAL_TRANSPOSE = np.diag([1.0, 1.0, 1.0, -1.0])


def symplectic_eigenvalues(cov) -> np.ndarray:
    """Absolute eigenvalues of ``i Omega cov``, one per mode, ascending.

    Raises:
        ValueError: if ``cov`` is not symmetric positive definite.
    """
    cov = np.asarray(cov, dtype=float)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] % 2:
        raise ValueError(f"expected a square matrix of even size, got shape {cov.shape}")
    if not np.allclose(cov, cov.T, rtol=0.0, atol=STRUCTURAL_TOL):
        raise ValueError("covariance matrix is not symmetric")
    try:
        return symplectic_spectrum(cov)
    except np.linalg.LinAlgError as exc:
        raise ValueError("covariance matrix is not positive definite") from exc


def is_physical(state: GaussianState) -> bool:
    return min_symplectic_eigenvalue(state.cov) >= VACUUM_VARIANCE - STRUCTURAL_TOL


def partial_transpose_min_eigenvalue(state: GaussianState, transposed_mode: int = 1) -> float:
    """Smallest symplectic eigenvalue of the partially transposed covariance."""
    if state.n_modes != 2:
        raise ValueError(f"partial transposition test needs 2 modes, got {state.n_modes}")
    flip = PARTIAL_TRANSPOSE if transposed_mode == 1 else np.diag([1.0, -1.0, 1.0, 1.0])
    return min_symplectic_eigenvalue(flip @ state.cov @ flip)


def ppt_separable(state: GaussianState, transposed_mode: int = 1) -> bool:
    """Simon criterion: a two-mode Gaussian state is separable iff its
    partial transpose is a physical covariance matrix."""
    return partial_transpose_min_eigenvalue(state, transposed_mode) >= VACUUM_VARIANCE - STRUCTURAL_TOL


def pairwise_report(state: GaussianState) -> list[tuple[tuple[int, int], bool]]:
    """PPT verdict for every pair of modes, in lexicographic pair order."""
    if state.n_modes < 2:
        raise ValueError("pairwise report needs at least two modes")
    return [
        ((i, j), ppt_separable(reduce(state, [i, j])))
        for i, j in combinations(range(state.n_modes), 2)
    ]


def all_pairs_separable(state: GaussianState) -> bool:
    if state.n_modes < 2:
        return True
    return all(sep for _, sep in pairwise_report(state))
