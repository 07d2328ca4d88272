"""Circuit elements: interferometers, squeezers and single-mode channels.

Beamsplitter convention (modes 0 and 1)::

    out0 =  tau * in0 + sqrt(1 - tau^2) * in1
    out1 = -sqrt(1 - tau^2) * in0 + tau * in1

so the minus sign sits on the second output port.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .gaussian import STRUCTURAL_TOL, GaussianChannel, SymplecticOp

PHASE_CONJUGATION = np.diag([1.0, -1.0])
PHASE_CONJUGATION.setflags(write=False)


def passive_symplectic(u: np.ndarray) -> np.ndarray:
    """Real interleaved image of a unitary acting on annihilation operators.

    Each entry ``u`` becomes the block ``[[Re u, -Im u], [Im u, Re u]]``.
    """
    u = np.asarray(u, dtype=complex)
    return np.kron(u.real, np.eye(2)) + np.kron(u.imag, np.array([[0.0, -1.0], [1.0, 0.0]]))


def beamsplitter(tau: float) -> SymplecticOp:
    """Two-mode beamsplitter with amplitude transmissivity ``tau``."""
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"transmissivity must lie in [0, 1], got {tau}")
    r = math.sqrt(1.0 - tau * tau)
    return SymplecticOp(passive_symplectic(np.array([[tau, r], [-r, tau]])))


def fourier_unitary(n: int) -> np.ndarray:
    """``V[k, l] = exp(2 pi i k l / n) / sqrt(n)``."""
    k = np.arange(n)
    return np.exp(2j * np.pi * np.outer(k, k) / n) / math.sqrt(n)


@lru_cache(maxsize=None)
def fourier_multisplitter(n: int) -> SymplecticOp:
    """Discrete-Fourier interferometer on ``n`` modes.

    Row 0 is uniform, so mode 0 receives the symmetric combination of the
    inputs.
    """
    if n < 1:
        raise ValueError("multisplitter needs at least one mode")
    return SymplecticOp(passive_symplectic(fourier_unitary(n)))


def concentrator(n: int) -> SymplecticOp:
    """Maps ``n`` equal amplitudes ``alpha`` to ``sqrt(n) alpha`` on mode 0."""
    return fourier_multisplitter(n)


@lru_cache(maxsize=None)
def distributor(m: int) -> SymplecticOp:
    """Adjoint of the multisplitter: spreads mode 0 evenly over ``m`` modes."""
    if m < 1:
        raise ValueError("distributor needs at least one mode")
    return SymplecticOp(passive_symplectic(fourier_unitary(m).conj().T))


def two_mode_squeezer(mu: float, nu: float) -> SymplecticOp:
    """Bogoliubov map ``a -> mu a - nu b^dag``, ``b -> mu b - nu a^dag``.

    Requires ``mu^2 - nu^2 = 1``. Mode 0 is ``a``, mode 1 is ``b``.
    """
    if mu < 1.0 or nu < 0.0 or abs(mu * mu - nu * nu - 1.0) > STRUCTURAL_TOL:
        raise ValueError(f"need mu >= 1, nu >= 0 and mu^2 - nu^2 = 1; got mu={mu}, nu={nu}")
    s = np.array(
        [
            [mu, 0.0, -nu, 0.0],
            [0.0, mu, 0.0, nu],
            [-nu, 0.0, mu, 0.0],
            [0.0, nu, 0.0, mu],
        ]
    )
    return SymplecticOp(s)


def amplifier_channel(G: float) -> GaussianChannel:
    """Quantum-limited phase-insensitive amplifier with power gain ``G >= 1``."""
    if G < 1.0:
        raise ValueError(f"amplifier gain must be >= 1, got {G}")
    return GaussianChannel(math.sqrt(G) * np.eye(2), (G - 1.0) / 4 * np.eye(2))


def attenuator_channel(G: float) -> GaussianChannel:
    """Pure-loss channel with power transmission ``G`` in [0, 1]."""
    if not 0.0 <= G <= 1.0:
        raise ValueError(f"attenuator gain must lie in [0, 1], got {G}")
    return GaussianChannel(math.sqrt(G) * np.eye(2), (1.0 - G) / 4 * np.eye(2))


def measure_prepare_channel(lam: float) -> GaussianChannel:
    """Heterodyne, then prepare the coherent state ``lam * conj(outcome)``.

    Averaged over outcomes this is ``X = lam Z`` with ``Z = diag(1, -1)`` and
    ``Y = (lam^2 + 1)/4 I``.
    """
    if lam < 0.0:
        raise ValueError(f"scaling must be non-negative, got {lam}")
    return GaussianChannel(lam * PHASE_CONJUGATION, (lam * lam + 1.0) / 4 * np.eye(2))


def amplifier_squeezing(G: float) -> tuple[float, float]:
    """``(mu, nu) = (sqrt(G), sqrt(G - 1))``."""
    if G < 1.0:
        raise ValueError(f"amplifier gain must be >= 1, got {G}")
    return math.sqrt(G), math.sqrt(G - 1.0)


def feedforward_amplifier_elements(G: float) -> tuple[float, float]:
    """Beamsplitter transmissivity and feed-forward gain emulating an amplifier.

    Returns ``(tau, k) = (1/mu, nu)``.
    """
    mu, nu = amplifier_squeezing(G)
    return 1.0 / mu, nu
