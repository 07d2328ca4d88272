"""Gaussian phase-space simulation of optimal superbroadcasting, purification
and phase-conjugate broadcasting of displaced thermal states."""

from .analysis import (
    all_pairs_separable,
    is_physical,
    pairwise_report,
    ppt_separable,
    symplectic_eigenvalues,
)
from .broadcast import (
    PipelineReport,
    broadcast_pipeline,
    check_saturation,
    conjugate_pipeline,
    noise_bound,
    predicted_local_photon,
    purify_pipeline,
    superbroadcast_threshold,
)
from .gaussian import (
    GaussianChannel,
    GaussianState,
    HeterodyneOutcome,
    SymplecticOp,
    UnphysicalStateError,
    apply_channel,
    apply_symplectic,
    coherent,
    displace,
    displaced_thermal,
    heterodyne_sample,
    mean_photon,
    noise_sum,
    reduce,
    tensor,
    vacuum,
)
from .montecarlo import (
    EmpiricalMoments,
    feedforward_amplifier_run,
    measure_prepare_run,
    moments_compare,
)
from .networks import (
    amplifier_channel,
    attenuator_channel,
    beamsplitter,
    concentrator,
    distributor,
    feedforward_amplifier_elements,
    fourier_multisplitter,
    measure_prepare_channel,
    two_mode_squeezer,
)

__version__ = "0.1.0"
