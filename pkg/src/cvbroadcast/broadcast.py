"""Optimal broadcasting, purification and phase-conjugate broadcasting.

Each pipeline takes ``N`` copies of a displaced thermal state, concentrates
the signal into one mode with the Fourier multisplitter, discards the other
``N - 1`` modes, applies a single-mode channel, and spreads the result over
``M`` modes with ``M - 1`` vacua:

=========  ==================================  ==========================
kind       middle channel                      thermal photons per output
=========  ==================================  ==========================
broadcast  amplifier, gain ``M/N``             ``(M n + M - N) / (M N)``
purify     attenuator, gain ``M/N``            ``n / N``
conjugate  measure-and-prepare, ``sqrt(M/N)``  ``(n + 1) / N``
=========  ==================================  ==========================
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .gaussian import (
    GaussianChannel,
    GaussianState,
    apply_channel,
    apply_symplectic,
    displaced_thermal,
    noise_sum,
    reduce,
    tensor,
    tensor_all,
    vacuum,
)
from .montecarlo import DEFAULT_SEED, moments_compare, measure_prepare_run
from .networks import (
    amplifier_channel,
    attenuator_channel,
    concentrator,
    distributor,
    measure_prepare_channel,
)

KINDS = ("broadcast", "purify", "conjugate")
SATURATION_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class PipelineReport:
    """Inputs, intermediates and output of one pipeline run.

    ``concentrated`` is mode 0 right after concentration, ``nbar_prime`` the
    thermal photon number of that mode after the middle channel, and
    ``noise_sums`` the per-output-mode ``Var(x) + Var(p)``.
    """

    kind: str
    N: int
    M: int
    nbar_in: float
    alpha: complex
    concentrated: GaussianState
    nbar_prime: float
    output: GaussianState
    noise_sums: tuple
    bound: float
    mc_z_max: Optional[float] = None

    @property
    def nbar_out_per_mode(self) -> float:
        return float(np.mean(self.noise_sums)) - 0.5

    @property
    def saturated(self) -> bool:
        return check_saturation(self)

    @property
    def mean_per_mode(self) -> complex:
        return complex(self.output.mean[0], self.output.mean[1])


def _check_kind(kind: str, N: int, M: int):
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")
    if N < 1 or M < 1:
        raise ValueError(f"N and M must be positive, got N={N}, M={M}")
    if kind == "broadcast" and M <= N:
        raise ValueError(f"broadcasting needs M > N, got N={N}, M={M}")
    if kind == "purify" and M > N:
        raise ValueError(f"purification needs M <= N, got N={N}, M={M}")


def predicted_local_photon(kind: str, N: int, M: int, nbar: float) -> float:
    """Closed-form thermal photon number of each output mode."""
    _check_kind(kind, N, M)
    if nbar < 0:
        raise ValueError(f"nbar must be non-negative, got {nbar}")
    if kind == "broadcast":
        return (M * nbar + M - N) / (M * N)
    if kind == "purify":
        return nbar / N
    return (nbar + 1) / N


def superbroadcast_threshold(N: int, M) -> float:
    """Smallest input photon number for which ``N -> M`` broadcasting lowers local noise.

    ``M`` may be ``math.inf`` for the large-``M`` limit ``1/(N - 1)``.
    """
    if N < 2:
        raise ValueError(f"threshold is defined for N >= 2, got N={N}")
    if M == math.inf:
        return 1.0 / (N - 1)
    if M <= N:
        raise ValueError(f"need M > N, got N={N}, M={M}")
    return (M - N) / (M * (N - 1))


def noise_bound(kind: str, N: int, M, gamma: float) -> float:
    """Minimal per-output ``Var(x) + Var(p)`` for inputs with noise sum ``gamma``."""
    if gamma < 0.5:
        raise ValueError(f"input noise sum must be at least 1/2, got {gamma}")
    if kind == "broadcast":
        if M != math.inf:
            _check_kind(kind, N, M)
        return 0.5 + (gamma - 0.5) / N + 1.0 / N - 1.0 / M
    _check_kind(kind, N, M)
    if kind == "purify":
        return 0.5 + (gamma - 0.5) / N
    return 0.5 + (gamma + 0.5) / N


def check_saturation(report: PipelineReport) -> bool:
    """True iff every output mode reaches the optimal noise bound."""
    sums = np.asarray(report.noise_sums)
    return bool(np.all(np.abs(sums - report.bound) <= SATURATION_RTOL * abs(report.bound)))


def _inputs(N: int, nbar: float, alpha: complex) -> GaussianState:
    return tensor_all([displaced_thermal(nbar, alpha)] * N)


def _concentrate(N: int, nbar: float, alpha: complex) -> GaussianState:
    return reduce(apply_symplectic(_inputs(N, nbar, alpha), concentrator(N)), [0])


def _distribute(mode: GaussianState, M: int) -> GaussianState:
    if M > 1:
        mode = tensor(mode, vacuum(M - 1))
    return apply_symplectic(mode, distributor(M))


def _report(kind, N, M, nbar, alpha, concentrated, middle, mc_z_max=None) -> PipelineReport:
    output = _distribute(middle, M)
    return PipelineReport(
        kind=kind,
        N=N,
        M=M,
        nbar_in=float(nbar),
        alpha=complex(alpha),
        concentrated=concentrated,
        nbar_prime=noise_sum(middle, 0) - 0.5,
        output=output,
        noise_sums=tuple(noise_sum(output, i) for i in range(M)),
        bound=noise_bound(kind, N, M, nbar + 0.5),
        mc_z_max=mc_z_max,
    )


def _run(kind, N, M, nbar, alpha, channel: GaussianChannel) -> PipelineReport:
    conc = _concentrate(N, nbar, alpha)
    return _report(kind, N, M, nbar, alpha, conc, apply_channel(conc, channel))


def broadcast_pipeline(
    N: int, M: int, nbar: float, alpha: complex = 0.0, *, gain: Optional[float] = None
) -> PipelineReport:
    """Optimal ``N -> M`` broadcasting of displaced thermal states.

    ``gain`` overrides the amplifier gain ``M/N``; anything else is
    suboptimal and only useful as a control.
    """
    _check_kind("broadcast", N, M)
    G = M / N if gain is None else gain
    return _run("broadcast", N, M, nbar, alpha, amplifier_channel(G))


def purify_pipeline(N: int, M: int, nbar: float, alpha: complex = 0.0) -> PipelineReport:
    """Optimal ``N -> M`` purification, ``M <= N``."""
    _check_kind("purify", N, M)
    return _run("purify", N, M, nbar, alpha, attenuator_channel(M / N))


def conjugate_pipeline(
    N: int,
    M: int,
    nbar: float,
    alpha: complex = 0.0,
    *,
    samples: Optional[int] = None,
    seed: int = DEFAULT_SEED,
) -> PipelineReport:
    """Optimal phase-conjugate broadcasting.

    With ``samples`` the measure-and-prepare stage is sampled trajectory by
    trajectory and its empirical moments are distributed instead of the
    analytic ones; ``mc_z_max`` then records the largest z-score of that
    stage against the analytic channel.
    """
    _check_kind("conjugate", N, M)
    lam = math.sqrt(M / N)
    conc = _concentrate(N, nbar, alpha)
    middle = apply_channel(conc, measure_prepare_channel(lam))
    if samples is None:
        return _report("conjugate", N, M, nbar, alpha, conc, middle)
    emp = measure_prepare_run(lam, conc, samples, seed)
    z = moments_compare(emp, middle).max_abs_z
    return _report("conjugate", N, M, nbar, alpha, conc, emp.to_state(), mc_z_max=z)


def run_pipeline(kind: str, N: int, M: int, nbar: float, alpha: complex = 0.0) -> PipelineReport:
    if kind == "broadcast":
        return broadcast_pipeline(N, M, nbar, alpha)
    if kind == "purify":
        return purify_pipeline(N, M, nbar, alpha)
    if kind == "conjugate":
        return conjugate_pipeline(N, M, nbar, alpha)
    raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")
