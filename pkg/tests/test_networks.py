import math

import numpy as np
import pytest

from cvbroadcast.gaussian import (
    GaussianState,
    apply_channel,
    apply_symplectic,
    coherent,
    displaced_thermal,
    mean_photon,
    omega,
    reduce,
    tensor,
    tensor_all,
    vacuum,
)
from cvbroadcast.analysis import symplectic_eigenvalues
from cvbroadcast.networks import (
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
from helpers import random_state


def assert_symplectic(S):
    n = S.shape[0] // 2
    np.testing.assert_allclose(S.T @ omega(n) @ S, omega(n), atol=1e-9)


def test_beamsplitter():
    np.testing.assert_array_equal(beamsplitter(1.0).matrix, np.eye(4))
    S = beamsplitter(0.3).matrix
    np.testing.assert_allclose(S.T @ S, np.eye(4), atol=1e-15)
    assert_symplectic(S)
    out = apply_symplectic(tensor(coherent(1 + 2j), vacuum(1)), beamsplitter(1 / math.sqrt(2)))
    r = 1 / math.sqrt(2)
    # minus sign on the second output port
    np.testing.assert_allclose(out.mean, [r, 2 * r, -r, -2 * r], atol=1e-15)
    np.testing.assert_allclose(out.cov, 0.25 * np.eye(4), atol=1e-15)


@pytest.mark.parametrize("tau", [-0.1, 1.1])
def test_beamsplitter_rejects_bad_tau(tau):
    with pytest.raises(ValueError):
        beamsplitter(tau)


def test_fourier_multisplitter():
    np.testing.assert_allclose(fourier_multisplitter(1).matrix, np.eye(2))
    for n in (2, 3, 4, 7):
        assert_symplectic(fourier_multisplitter(n).matrix)
    out = apply_symplectic(tensor(coherent(0.5 - 1j), coherent(0.5 - 1j)), fourier_multisplitter(2))
    np.testing.assert_allclose(out.mean, [math.sqrt(2) * 0.5, -math.sqrt(2), 0, 0], atol=1e-15)
    with pytest.raises(ValueError):
        fourier_multisplitter(0)


def test_concentrator_on_thermal_pair():
    s = tensor_all([displaced_thermal(1, 1)] * 2)
    out = apply_symplectic(s, concentrator(2))
    mode0 = reduce(out, [0])
    np.testing.assert_allclose(mode0.mean, [math.sqrt(2), 0], atol=1e-15)
    np.testing.assert_allclose(mode0.cov, 0.75 * np.eye(2), atol=1e-15)
    np.testing.assert_allclose(reduce(out, [1]).mean, [0, 0], atol=1e-15)


def test_distributor():
    alpha = 0.4 + 0.9j
    s = tensor(coherent(math.sqrt(3) * alpha), vacuum(2))
    out = apply_symplectic(s, distributor(3))
    for m in range(3):
        np.testing.assert_allclose(out.mean[2 * m:2 * m + 2], [alpha.real, alpha.imag], atol=1e-15)
    # pure coherent copies with no cross covariance
    np.testing.assert_allclose(out.cov, 0.25 * np.eye(6), atol=1e-15)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_distributor_inverts_concentrator(n):
    np.testing.assert_allclose(
        distributor(n).matrix @ concentrator(n).matrix, np.eye(2 * n), atol=1e-14
    )


def test_two_mode_squeezer():
    np.testing.assert_array_equal(two_mode_squeezer(1.0, 0.0).matrix, np.eye(4))
    op = two_mode_squeezer(math.sqrt(3), math.sqrt(2))
    assert_symplectic(op.matrix)
    out = apply_symplectic(vacuum(2), op)
    assert mean_photon(out, 0) == pytest.approx(2.0, abs=1e-14)
    assert mean_photon(out, 1) == pytest.approx(2.0, abs=1e-14)
    np.testing.assert_allclose(symplectic_eigenvalues(out.cov), [0.25, 0.25], atol=1e-12)
    with pytest.raises(ValueError):
        two_mode_squeezer(2.0, 1.0)


def _amplifier_oracle(state, G):
    mu, nu = math.sqrt(G), math.sqrt(G - 1)
    return reduce(apply_symplectic(tensor(state, vacuum(1)), two_mode_squeezer(mu, nu)), [0])


def _attenuator_oracle(state, G):
    return reduce(apply_symplectic(tensor(state, vacuum(1)), beamsplitter(math.sqrt(G))), [0])


INPUTS = [vacuum(1), coherent(1 - 0.5j), displaced_thermal(1), displaced_thermal(3.2, -2j)]


@pytest.mark.parametrize("G", [1.0, 1.5, 2.0, 3.0, 7.25])
@pytest.mark.parametrize("state", INPUTS)
def test_amplifier_matches_traced_squeezer(G, state):
    direct = apply_channel(state, amplifier_channel(G))
    oracle = _amplifier_oracle(state, G)
    np.testing.assert_allclose(direct.mean, oracle.mean, rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(direct.cov, oracle.cov, rtol=1e-12, atol=1e-12)


def test_amplifier_examples():
    assert apply_channel(vacuum(1), amplifier_channel(2)).cov[0, 0] == pytest.approx(0.75)
    s = apply_channel(displaced_thermal(1), amplifier_channel(1.5))
    np.testing.assert_allclose(s.cov, 1.25 * np.eye(2), rtol=1e-15)
    np.testing.assert_array_equal(amplifier_channel(1).X, np.eye(2))
    np.testing.assert_array_equal(amplifier_channel(1).Y, np.zeros((2, 2)))
    with pytest.raises(ValueError):
        amplifier_channel(0.9)


@pytest.mark.parametrize("G", [0.0, 0.25, 0.5, 2 / 3, 1.0])
@pytest.mark.parametrize("state", INPUTS)
def test_attenuator_matches_beamsplitter(G, state):
    direct = apply_channel(state, attenuator_channel(G))
    oracle = _attenuator_oracle(state, G)
    np.testing.assert_allclose(direct.mean, oracle.mean, rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(direct.cov, oracle.cov, rtol=1e-12, atol=1e-12)


def test_attenuator_examples():
    s = apply_channel(displaced_thermal(1), attenuator_channel(0.5))
    np.testing.assert_allclose(s.cov, 0.5 * np.eye(2), rtol=1e-15)
    assert mean_photon(s, 0) == pytest.approx(0.5)
    dark = apply_channel(displaced_thermal(4, 3 + 1j), attenuator_channel(0))
    np.testing.assert_array_equal(dark.mean, [0, 0])
    np.testing.assert_array_equal(dark.cov, 0.25 * np.eye(2))
    for G in (-0.1, 1.1):
        with pytest.raises(ValueError):
            attenuator_channel(G)


def test_measure_prepare_channel_analytic():
    s = apply_channel(coherent(1 + 2j), measure_prepare_channel(1.0))
    np.testing.assert_allclose(s.mean, [1, -2])
    np.testing.assert_allclose(s.cov, 0.75 * np.eye(2))
    N, M, nbar = 2, 3, 1.0
    lam = math.sqrt(M / N)
    out = apply_channel(displaced_thermal(nbar), measure_prepare_channel(lam))
    assert out.cov[0, 0] * 2 - 0.5 == pytest.approx(M / N * (nbar + 1))
    # on the boundary of complete positivity, but accepted
    measure_prepare_channel(0.0)
    with pytest.raises(ValueError):
        measure_prepare_channel(-1.0)


@pytest.mark.parametrize("lam", [0.0, 1.0, math.sqrt(1.5), 2.0])
def test_measure_prepare_channel_matches_trajectories(lam):
    """Oracle: heterodyne by sampling the Q-function, then add coherent-state
    vacuum noise around lam * conj(outcome)."""
    rng = np.random.default_rng(31)
    state = displaced_thermal(1.0, 0.5 + 1j)
    n = 100_000
    g = rng.multivariate_normal(state.mean, state.cov + 0.25 * np.eye(2), size=n)
    out = lam * g * [1, -1] + rng.normal(scale=0.5, size=(n, 2))
    expected = apply_channel(state, measure_prepare_channel(lam))
    se = np.sqrt(np.diag(expected.cov) / n)
    assert np.all(np.abs(out.mean(axis=0) - expected.mean) <= 4 * se)
    var = np.diag(expected.cov)
    se_cov = np.sqrt((np.outer(var, var) + expected.cov**2) / (n - 1))
    assert np.all(np.abs(np.cov(out, rowvar=False) - expected.cov) <= 4 * se_cov)


@pytest.mark.parametrize(
    "G, tau, k",
    [
        (1.0, 1.0, 0.0),
        (2.0, 1 / math.sqrt(2), 1.0),
        (1.5, math.sqrt(2 / 3), math.sqrt(0.5)),
    ],
)
def test_feedforward_elements(G, tau, k):
    t, kk = feedforward_amplifier_elements(G)
    assert t == pytest.approx(tau, rel=1e-15)
    assert kk == pytest.approx(k, rel=1e-15)


def test_feedforward_elements_solve_amplifier_conditions():
    # transmitted amplitude tau + k sqrt(1 - tau^2) = mu and residual
    # vacuum weight k tau - sqrt(1 - tau^2) = 0
    for G in (1.0, 1.3, 2.0, 5.0):
        tau, k = feedforward_amplifier_elements(G)
        r = math.sqrt(1 - tau * tau)
        assert tau + k * r == pytest.approx(math.sqrt(G), rel=1e-14)
        assert k * k + (k * tau - r) ** 2 == pytest.approx(G - 1, abs=1e-14)
    with pytest.raises(ValueError):
        feedforward_amplifier_elements(0.5)


def test_channels_preserve_physicality():
    rng = np.random.default_rng(3)
    for _ in range(20):
        s = random_state(rng, 1)
        for ch in (
            amplifier_channel(rng.uniform(1, 5)),
            attenuator_channel(rng.uniform(0, 1)),
            measure_prepare_channel(rng.uniform(0, 3)),
        ):
            out = apply_channel(s, ch)
            assert isinstance(out, GaussianState)
            assert symplectic_eigenvalues(out.cov)[0] >= 0.25 - 1e-9
