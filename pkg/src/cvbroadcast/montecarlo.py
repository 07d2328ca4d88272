"""Trajectory sampling of the measurement-based circuit elements.

Randomness is counter based: trajectories are grouped in fixed-size blocks
and block ``b`` draws from a Philox generator keyed by ``(seed, b)``. Block
boundaries do not depend on how many workers run, so serial and threaded
runs give bit-identical samples, which are concatenated in block order.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .gaussian import (
    VACUUM_VARIANCE,
    GaussianState,
    apply_symplectic,
    heterodyne_gain,
    tensor,
    vacuum,
)
from .networks import PHASE_CONJUGATION, beamsplitter, feedforward_amplifier_elements

DEFAULT_SEED = 20061017
BLOCK_SIZE = 8192
MIN_TRAJECTORIES = 1000


def block_generator(seed: int, block: int) -> np.random.Generator:
    """Counter-based stream for trajectory block ``block``."""
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must fit in 64 unsigned bits, got {seed}")
    return np.random.Generator(np.random.Philox(key=[block, seed]))


def derive_seed(seed: int, *path: int) -> int:
    """Independent 64-bit seed for a sub-task, e.g. one sweep grid point."""
    return int(np.random.SeedSequence([seed, *path]).generate_state(1, np.uint64)[0])


def _sqrtm_psd(a: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(0.5 * (a + a.T))
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.T


def sample_blocks(
    draw: Callable[[np.random.Generator, int], np.ndarray],
    n_samples: int,
    seed: int,
    workers: int = 1,
) -> np.ndarray:
    """Run ``draw(rng, size)`` over all blocks and stack the rows in block order."""
    sizes = [BLOCK_SIZE] * (n_samples // BLOCK_SIZE)
    if n_samples % BLOCK_SIZE:
        sizes.append(n_samples % BLOCK_SIZE)

    def run(block):
        return draw(block_generator(seed, block), sizes[block])

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, range(len(sizes))))
    else:
        parts = [run(b) for b in range(len(sizes))]
    return np.concatenate(parts, axis=0)


@dataclass(frozen=True, eq=False)
class EmpiricalMoments:
    """Sample moments with asymptotic Gaussian standard errors.

    ``std_errors`` belongs to ``mean_hat``; ``cov_std_errors`` to ``cov_hat``.
    """

    n_samples: int
    mean_hat: np.ndarray
    cov_hat: np.ndarray
    std_errors: np.ndarray
    cov_std_errors: np.ndarray

    @classmethod
    def from_samples(cls, samples: np.ndarray) -> "EmpiricalMoments":
        samples = np.asarray(samples, dtype=float)
        n = samples.shape[0]
        if n < 2:
            raise ValueError("need at least two samples")
        mean = samples.mean(axis=0)
        cov = np.cov(samples, rowvar=False, ddof=1)
        cov = 0.5 * (cov + cov.T)
        return cls._with_errors(n, mean, cov)

    @classmethod
    def from_state(cls, state: GaussianState, n_samples: int) -> "EmpiricalMoments":
        """Exact moments of ``state`` dressed as an ``n_samples`` estimate."""
        return cls._with_errors(n_samples, state.mean.copy(), state.cov.copy())

    @classmethod
    def _with_errors(cls, n, mean, cov):
        var = np.diag(cov)
        se_mean = np.sqrt(var / n)
        se_cov = np.sqrt((np.outer(var, var) + cov**2) / (n - 1))
        return cls(n, mean, cov, se_mean, se_cov)

    def to_state(self) -> GaussianState:
        return GaussianState(self.mean_hat, self.cov_hat)


@dataclass(frozen=True, eq=False)
class ComparisonReport:
    z_mean: np.ndarray
    z_cov: np.ndarray
    sigma_level: float

    @property
    def max_abs_z(self) -> float:
        iu = np.triu_indices(self.z_cov.shape[0])
        return float(max(np.max(np.abs(self.z_mean)), np.max(np.abs(self.z_cov[iu]))))

    @property
    def passed(self) -> bool:
        return self.max_abs_z <= self.sigma_level


def _zscore(diff, se):
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(se > 0, diff / np.where(se > 0, se, 1.0), np.where(diff == 0, 0.0, np.inf))
    return z


def moments_compare(
    emp: EmpiricalMoments, analytic: GaussianState, sigma_level: float = 4.0
) -> ComparisonReport:
    """Per-entry z-scores of the empirical moments against ``analytic``."""
    if emp.mean_hat.shape != analytic.mean.shape:
        raise ValueError(
            f"dimension mismatch: empirical {emp.mean_hat.shape}, analytic {analytic.mean.shape}"
        )
    return ComparisonReport(
        _zscore(emp.mean_hat - analytic.mean, emp.std_errors),
        _zscore(emp.cov_hat - analytic.cov, emp.cov_std_errors),
        sigma_level,
    )


def _check_single_mode(state: GaussianState):
    if state.n_modes != 1:
        raise ValueError(f"expected a single-mode input, got {state.n_modes} modes")


def feedforward_amplifier_samples(
    G: float, state: GaussianState, n_samples: int, seed: int = DEFAULT_SEED, workers: int = 1
) -> np.ndarray:
    """Output quadrature samples of the beamsplitter + heterodyne + feed-forward amplifier.

    Per trajectory the input (port 1) is mixed with vacuum (port 0) at
    transmissivity ``1/sqrt(G)``, the reflected port is heterodyned with
    outcome ``g``, the transmitted mode is displaced by ``k g`` with
    ``k = sqrt(G - 1)``, and one quadrature pair is drawn from the Wigner
    function of the resulting conditional state.
    """
    _check_single_mode(state)
    if n_samples < MIN_TRAJECTORIES:
        raise ValueError(f"need at least {MIN_TRAJECTORIES} trajectories, got {n_samples}")
    tau, k = feedforward_amplifier_elements(G)
    # signal on port 1: the reflected port then carries +sqrt(1 - tau^2) of it
    joint = apply_symplectic(tensor(vacuum(1), state), beamsplitter(tau))
    _, outcome_cov, gain, cond_cov = heterodyne_gain(joint, 0)
    mean_meas, mean_kept = joint.mean[:2], joint.mean[2:]
    outcome_root = np.linalg.cholesky(outcome_cov)
    cond_root = _sqrtm_psd(cond_cov)

    def draw(rng, size):
        g = mean_meas + rng.standard_normal((size, 2)) @ outcome_root.T
        kept = mean_kept + (g - mean_meas) @ gain.T + k * g
        return kept + rng.standard_normal((size, 2)) @ cond_root.T

    return sample_blocks(draw, n_samples, seed, workers)


def feedforward_amplifier_run(
    G: float, state: GaussianState, n_samples: int, seed: int = DEFAULT_SEED, workers: int = 1
) -> EmpiricalMoments:
    return EmpiricalMoments.from_samples(
        feedforward_amplifier_samples(G, state, n_samples, seed, workers)
    )


def measure_prepare_samples(
    lam: float, state: GaussianState, n_samples: int, seed: int = DEFAULT_SEED, workers: int = 1
) -> np.ndarray:
    """Heterodyne ``state``, prepare coherent ``lam * conj(outcome)``, sample its Wigner function."""
    _check_single_mode(state)
    if lam < 0:
        raise ValueError(f"scaling must be non-negative, got {lam}")
    if n_samples < 2:
        raise ValueError("need at least two trajectories")
    _, outcome_cov, _, _ = heterodyne_gain(state, 0)
    outcome_root = np.linalg.cholesky(outcome_cov)
    conj = lam * PHASE_CONJUGATION
    vac_std = np.sqrt(VACUUM_VARIANCE)

    def draw(rng, size):
        g = state.mean + rng.standard_normal((size, 2)) @ outcome_root.T
        return g @ conj.T + vac_std * rng.standard_normal((size, 2))

    return sample_blocks(draw, n_samples, seed, workers)


def measure_prepare_run(
    lam: float, state: GaussianState, n_samples: int, seed: int = DEFAULT_SEED, workers: int = 1
) -> EmpiricalMoments:
    return EmpiricalMoments.from_samples(
        measure_prepare_samples(lam, state, n_samples, seed, workers)
    )
