"""Multimode Gaussian states in phase space.

Conventions used throughout the package:

* quadratures ``x = (a + a^dag)/2`` and ``p = (a - a^dag)/(2i)``, so the vacuum
  has variance 1/4 in each quadrature and ``<x> + i<p> = <a>``;
* interleaved ordering ``(x0, p0, x1, p1, ...)``;
* symplectic form ``Omega`` block diagonal with blocks ``[[0, 1], [-1, 0]]``;
* a covariance matrix is physical iff all its symplectic eigenvalues are
  at least 1/4.

States, operations and channels are immutable values. Every function here
returns a new object.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

VACUUM_VARIANCE = 0.25
STRUCTURAL_TOL = 1e-9


class UnphysicalStateError(ValueError):
    """Raised when a covariance matrix violates the uncertainty principle."""


@lru_cache(maxsize=64)
def omega(n: int) -> np.ndarray:
    """Symplectic form on ``n`` modes in interleaved ordering (read-only)."""
    om = np.zeros((2 * n, 2 * n))
    i = np.arange(n)
    om[2 * i, 2 * i + 1] = 1.0
    om[2 * i + 1, 2 * i] = -1.0
    om.setflags(write=False)
    return om


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def symplectic_spectrum(cov: np.ndarray) -> np.ndarray:
    """Symplectic eigenvalues of ``cov``, ascending, one per mode.

    The eigenvalues of ``(Omega cov)^2`` are ``-nu_k^2``, each twice. With
    ``cov = L L^T`` the same spectrum is carried by the symmetric matrix
    ``L^T Omega cov Omega^T L``, which is what gets diagonalised.

    Raises ``numpy.linalg.LinAlgError`` if ``cov`` is not positive definite.
    """
    cov = np.asarray(cov, dtype=float)
    cov = 0.5 * (cov + cov.T)
    n = cov.shape[0] // 2
    om = omega(n)
    chol = np.linalg.cholesky(cov)
    sym = chol.T @ om @ cov @ om.T @ chol
    w = np.linalg.eigvalsh(0.5 * (sym + sym.T))
    w = np.sqrt(np.clip(w, 0.0, None))
    # doubly degenerate: keep one of each pair
    return np.sort(w)[::2]


def min_symplectic_eigenvalue(cov: np.ndarray) -> float:
    """Smallest symplectic eigenvalue, or ``-inf`` if ``cov`` is not positive definite."""
    try:
        return float(symplectic_spectrum(cov)[0])
    except np.linalg.LinAlgError:
        return -np.inf


@dataclass(frozen=True, eq=False)
class GaussianState:
    """First and second moments of an ``n``-mode Gaussian state.

    Args:
        mean: quadrature means, length ``2 n``.
        cov: symmetric ``2n x 2n`` covariance matrix.
        validate: check symmetry and physicality on construction.
    """

    mean: np.ndarray
    cov: np.ndarray
    validate: bool = True

    def __post_init__(self):
        mean = _frozen(self.mean).reshape(-1)
        cov = _frozen(self.cov)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)
        if mean.size == 0 or mean.size % 2:
            raise ValueError(f"mean must have positive even length, got {mean.size}")
        if cov.shape != (mean.size, mean.size):
            raise ValueError(f"cov shape {cov.shape} does not match mean length {mean.size}")
        if not self.validate:
            return
        if not np.allclose(cov, cov.T, rtol=0.0, atol=STRUCTURAL_TOL):
            raise ValueError("covariance matrix is not symmetric")
        nu = min_symplectic_eigenvalue(cov)
        if nu < VACUUM_VARIANCE - STRUCTURAL_TOL:
            raise UnphysicalStateError(f"minimum symplectic eigenvalue {nu!r} is below 1/4")

    @property
    def n_modes(self) -> int:
        return self.mean.size // 2

    def __repr__(self):
        return f"GaussianState(n_modes={self.n_modes})"


@dataclass(frozen=True, eq=False)
class SymplecticOp:
    """Gaussian unitary acting as ``r -> matrix @ r + shift``."""

    matrix: np.ndarray
    shift: Optional[np.ndarray] = None

    def __post_init__(self):
        s = _frozen(self.matrix)
        dim = s.shape[0]
        if s.ndim != 2 or s.shape != (dim, dim) or dim % 2:
            raise ValueError(f"symplectic matrix must be square of even size, got {s.shape}")
        shift = np.zeros(dim) if self.shift is None else self.shift
        shift = _frozen(shift).reshape(-1)
        if shift.size != dim:
            raise ValueError("shift length does not match matrix size")
        om = omega(dim // 2)
        if not np.allclose(s.T @ om @ s, om, rtol=0.0, atol=STRUCTURAL_TOL):
            raise ValueError("matrix is not symplectic")
        object.__setattr__(self, "matrix", s)
        object.__setattr__(self, "shift", shift)

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0] // 2


@dataclass(frozen=True, eq=False)
class GaussianChannel:
    """Gaussian channel ``mean -> X mean + shift``, ``cov -> X cov X^T + Y``."""

    X: np.ndarray
    Y: np.ndarray
    shift: Optional[np.ndarray] = None

    def __post_init__(self):
        X = _frozen(np.atleast_2d(self.X))
        Y = _frozen(np.atleast_2d(self.Y))
        n_out, n_in = X.shape
        if n_out % 2 or n_in % 2:
            raise ValueError(f"X must have even dimensions, got {X.shape}")
        if Y.shape != (n_out, n_out):
            raise ValueError(f"Y shape {Y.shape} does not match X output size {n_out}")
        if not np.allclose(Y, Y.T, rtol=0.0, atol=STRUCTURAL_TOL):
            raise ValueError("Y is not symmetric")
        shift = np.zeros(n_out) if self.shift is None else self.shift
        shift = _frozen(shift).reshape(-1)
        if shift.size != n_out:
            raise ValueError("shift length does not match channel output size")
        # complete positivity: Y + (i/4)(Omega_out - X Omega_in X^T) >= 0
        herm = Y + 0.25j * (omega(n_out // 2) - X @ omega(n_in // 2) @ X.T)
        if np.linalg.eigvalsh(herm)[0] < -STRUCTURAL_TOL:
            raise ValueError("channel is not completely positive")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)
        object.__setattr__(self, "shift", shift)

    @property
    def n_in(self) -> int:
        return self.X.shape[1] // 2

    @property
    def n_out(self) -> int:
        return self.X.shape[0] // 2


@dataclass(frozen=True, eq=False)
class HeterodyneOutcome:
    """Result of heterodyning one mode.

    ``conditioned`` is ``None`` when the measured mode was the only one.
    """

    value: complex
    conditioned: Optional[GaussianState]


def _check_mode(s: GaussianState, mode: int) -> int:
    if not isinstance(mode, (int, np.integer)) or not 0 <= mode < s.n_modes:
        raise IndexError(f"mode {mode!r} out of range for a {s.n_modes}-mode state")
    return int(mode)


def _quad_index(modes: Sequence[int]) -> np.ndarray:
    return np.ravel([[2 * m, 2 * m + 1] for m in modes]).astype(int)


def vacuum(n: int) -> GaussianState:
    if n < 1:
        raise ValueError("a state needs at least one mode")
    return GaussianState(np.zeros(2 * n), VACUUM_VARIANCE * np.eye(2 * n))


def displaced_thermal(nbar: float, alpha: complex = 0.0) -> GaussianState:
    """Single-mode thermal state with ``nbar`` photons displaced by ``alpha``."""
    if nbar < 0:
        raise ValueError(f"thermal photon number must be non-negative, got {nbar}")
    alpha = complex(alpha)
    return GaussianState([alpha.real, alpha.imag], (2 * nbar + 1) / 4 * np.eye(2))


def coherent(alpha: complex) -> GaussianState:
    return displaced_thermal(0.0, alpha)


def tensor(a: GaussianState, b: GaussianState) -> GaussianState:
    return tensor_all([a, b])


def tensor_all(states: Sequence[GaussianState]) -> GaussianState:
    """Product state, factors in the given order."""
    if not states:
        raise ValueError("need at least one state")
    dim = sum(s.mean.size for s in states)
    cov = np.zeros((dim, dim))
    start = 0
    for s in states:
        stop = start + s.mean.size
        cov[start:stop, start:stop] = s.cov
        start = stop
    return GaussianState(np.concatenate([s.mean for s in states]), cov)


def _embed(matrix: np.ndarray, modes: Optional[Sequence[int]], n: int):
    """Lift an operator on ``modes`` to the full ``n``-mode space."""
    if modes is None:
        return matrix, None
    modes = list(modes)
    if len(set(modes)) != len(modes) or any(not 0 <= m < n for m in modes):
        raise IndexError(f"invalid mode list {modes} for {n} modes")
    idx = _quad_index(modes)
    if matrix.shape[0] != idx.size:
        raise ValueError(f"operator acts on {matrix.shape[0] // 2} modes, got {len(modes)}")
    full = np.eye(2 * n)
    full[np.ix_(idx, idx)] = matrix
    return full, idx


def apply_symplectic(
    s: GaussianState, op: SymplecticOp, modes: Optional[Sequence[int]] = None
) -> GaussianState:
    """Apply ``op``, optionally restricted to the listed ``modes`` of ``s``."""
    S, idx = _embed(op.matrix, modes, s.n_modes)
    if S.shape[0] != s.mean.size:
        raise ValueError(f"operator acts on {op.n_modes} modes, state has {s.n_modes}")
    shift = op.shift
    if idx is not None:
        shift = np.zeros(s.mean.size)
        shift[idx] = op.shift
    return GaussianState(S @ s.mean + shift, S @ s.cov @ S.T)


def apply_channel(
    s: GaussianState, ch: GaussianChannel, modes: Optional[Sequence[int]] = None
) -> GaussianState:
    """Apply ``ch``; with ``modes`` the channel must preserve the mode count."""
    if modes is None:
        if ch.X.shape[1] != s.mean.size:
            raise ValueError(f"channel takes {ch.n_in} modes, state has {s.n_modes}")
        return GaussianState(ch.X @ s.mean + ch.shift, ch.X @ s.cov @ ch.X.T + ch.Y)
    if ch.n_in != ch.n_out:
        raise ValueError("a channel applied to a subset of modes must preserve mode count")
    X, idx = _embed(ch.X, modes, s.n_modes)
    Y = np.zeros_like(X)
    Y[np.ix_(idx, idx)] = ch.Y
    shift = np.zeros(s.mean.size)
    shift[idx] = ch.shift
    return GaussianState(X @ s.mean + shift, X @ s.cov @ X.T + Y)


def reduce(s: GaussianState, modes: Sequence[int]) -> GaussianState:
    """Partial trace: keep ``modes`` in the given order."""
    modes = list(modes)
    if not modes:
        raise ValueError("must keep at least one mode")
    if len(set(modes)) != len(modes):
        raise ValueError(f"duplicate mode index in {modes}")
    for m in modes:
        _check_mode(s, m)
    idx = _quad_index(modes)
    return GaussianState(s.mean[idx], s.cov[np.ix_(idx, idx)])


def displace(s: GaussianState, mode: int, beta: complex) -> GaussianState:
    mode = _check_mode(s, mode)
    beta = complex(beta)
    mean = s.mean.copy()
    mean[2 * mode] += beta.real
    mean[2 * mode + 1] += beta.imag
    return GaussianState(mean, s.cov)


def heterodyne_gain(s: GaussianState, mode: int):
    """Linear conditioning data for heterodyning ``mode``.

    Returns ``(rest, outcome_cov, gain, cond_cov)`` where ``rest`` lists the
    unmeasured modes, ``outcome_cov = sigma_B + I/4`` is the Q-function
    covariance, and conditioning on outcome vector ``g`` gives mean
    ``mean_A + gain @ (g - mean_B)`` with covariance ``cond_cov``.
    """
    mode = _check_mode(s, mode)
    rest = [m for m in range(s.n_modes) if m != mode]
    b = _quad_index([mode])
    outcome_cov = s.cov[np.ix_(b, b)] + VACUUM_VARIANCE * np.eye(2)
    if np.linalg.eigvalsh(outcome_cov)[0] <= 0:
        raise UnphysicalStateError("heterodyne outcome covariance is not positive definite")
    if not rest:
        return rest, outcome_cov, None, None
    a = _quad_index(rest)
    cross = s.cov[np.ix_(a, b)]
    gain = np.linalg.solve(outcome_cov, cross.T).T
    cond_cov = s.cov[np.ix_(a, a)] - gain @ cross.T
    return rest, outcome_cov, gain, 0.5 * (cond_cov + cond_cov.T)


def heterodyne_samples(s: GaussianState, mode: int, size: int, rng):
    """Vectorised heterodyne draws on ``mode``.

    Returns ``(values, cond_means, cond_cov)``: complex outcomes of shape
    ``(size,)``, the conditional means of the other modes, one row per draw
    (``None`` for a single-mode state), and their common conditional
    covariance.
    """
    rng = np.random.default_rng(rng)
    rest, outcome_cov, gain, cond_cov = heterodyne_gain(s, mode)
    b = _quad_index([mode])
    g = s.mean[b] + rng.standard_normal((size, 2)) @ np.linalg.cholesky(outcome_cov).T
    values = g[:, 0] + 1j * g[:, 1]
    if not rest:
        return values, None, None
    a = _quad_index(rest)
    cond_means = s.mean[a] + (g - s.mean[b]) @ gain.T
    return values, cond_means, cond_cov


def heterodyne_sample(s: GaussianState, mode: int, rng) -> HeterodyneOutcome:
    """Draw one heterodyne outcome on ``mode`` and condition the other modes.

    ``rng`` is a ``numpy.random.Generator`` or anything accepted by
    ``numpy.random.default_rng``.
    """
    values, cond_means, cond_cov = heterodyne_samples(s, mode, 1, rng)
    if cond_means is None:
        return HeterodyneOutcome(complex(values[0]), None)
    return HeterodyneOutcome(complex(values[0]), GaussianState(cond_means[0], cond_cov))


def noise_sum(s: GaussianState, mode: int) -> float:
    """``Var(x) + Var(p)`` of ``mode``."""
    mode = _check_mode(s, mode)
    return float(s.cov[2 * mode, 2 * mode] + s.cov[2 * mode + 1, 2 * mode + 1])


def mean_photon(s: GaussianState, mode: int) -> float:
    """``<a^dag a>`` of ``mode``."""
    mode = _check_mode(s, mode)
    x, p = s.mean[2 * mode], s.mean[2 * mode + 1]
    return noise_sum(s, mode) - 0.5 + float(x * x + p * p)


def thermal_photon(s: GaussianState, mode: int) -> float:
    """Photon number left after removing the displacement of ``mode``."""
    return noise_sum(s, mode) - 0.5


def mode_amplitude(s: GaussianState, mode: int) -> complex:
    mode = _check_mode(s, mode)
    return complex(s.mean[2 * mode], s.mean[2 * mode + 1])
