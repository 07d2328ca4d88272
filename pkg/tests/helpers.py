import numpy as np

from cvbroadcast.gaussian import GaussianState, SymplecticOp, apply_symplectic
from cvbroadcast.networks import passive_symplectic


def random_symplectic(rng, n, max_squeeze=0.5):
    """Random passive interferometer after random single-mode squeezing."""
    q, _ = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    r = rng.uniform(-max_squeeze, max_squeeze, size=n)
    squeeze = np.diag(np.ravel([[np.exp(-v), np.exp(v)] for v in r]))
    return passive_symplectic(q) @ squeeze


def random_state(rng, n, max_photons=3.0):
    """Random physical state: displaced thermal modes, then a random symplectic."""
    nbar = rng.uniform(0, max_photons, size=n)
    s = GaussianState(rng.normal(size=2 * n), np.diag(np.repeat((2 * nbar + 1) / 4, 2)))
    return apply_symplectic(s, SymplecticOp(random_symplectic(rng, n)))
