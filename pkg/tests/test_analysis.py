import math

import numpy as np
import pytest

from cvbroadcast.analysis import (
    is_physical,
    pairwise_report,
    partial_transpose_min_eigenvalue,
    ppt_separable,
    symplectic_eigenvalues,
)
from cvbroadcast.broadcast import broadcast_pipeline
from cvbroadcast.gaussian import (
    GaussianState,
    apply_symplectic,
    displaced_thermal,
    reduce,
    tensor,
    tensor_all,
    vacuum,
)
from cvbroadcast.networks import distributor, two_mode_squeezer


def test_symplectic_eigenvalues_simple():
    np.testing.assert_allclose(symplectic_eigenvalues(vacuum(3).cov), [0.25] * 3)
    np.testing.assert_allclose(symplectic_eigenvalues(displaced_thermal(2).cov), [1.25])
    s = tensor(displaced_thermal(3), displaced_thermal(0.5))
    np.testing.assert_allclose(symplectic_eigenvalues(s.cov), [0.5, 1.75])


@pytest.mark.parametrize("nu2", [0.5, 2.0, 10.0])
def test_tmsv_is_pure(nu2):
    s = apply_symplectic(vacuum(2), two_mode_squeezer(math.sqrt(1 + nu2), math.sqrt(nu2)))
    np.testing.assert_allclose(symplectic_eigenvalues(s.cov), [0.25, 0.25], atol=1e-12)


def test_symplectic_eigenvalues_brute_force():
    """Cross-check against the moduli of the complex eigenvalues of i Omega sigma."""
    from helpers import random_state
    from cvbroadcast.gaussian import omega

    rng = np.random.default_rng(12)
    for n in (1, 2, 4):
        s = random_state(rng, n)
        w = np.abs(np.linalg.eigvals(1j * omega(n) @ s.cov))
        np.testing.assert_allclose(symplectic_eigenvalues(s.cov), np.sort(w)[::2], rtol=1e-10)


def test_symplectic_eigenvalues_rejects_bad_input():
    with pytest.raises(ValueError):
        symplectic_eigenvalues([[1.0, 0.2], [0.0, 1.0]])
    with pytest.raises(ValueError):
        symplectic_eigenvalues(-np.eye(2))


def test_is_physical():
    assert is_physical(vacuum(1))
    assert not is_physical(GaussianState([0, 0], np.eye(2) / 8, validate=False))
    assert not is_physical(GaussianState([0, 0], np.diag([1.0, 0.01]), validate=False))


def test_ppt_product_is_separable():
    assert ppt_separable(tensor(displaced_thermal(1, 2j), displaced_thermal(0.3)))
    assert ppt_separable(vacuum(2))


def test_ppt_tmsv_is_entangled(tmsv):
    assert not ppt_separable(tmsv)
    # nu_- = (mu - nu)^2 / 4 for a two-mode squeezed vacuum
    expected = (math.sqrt(3) - math.sqrt(2)) ** 2 / 4
    assert partial_transpose_min_eigenvalue(tmsv) == pytest.approx(expected, rel=1e-12)
    assert partial_transpose_min_eigenvalue(tmsv, transposed_mode=0) == pytest.approx(
        expected, rel=1e-12
    )


def test_ppt_symmetric_in_transposed_mode(tmsv):
    for s in (tmsv, vacuum(2), reduce(broadcast_pipeline(2, 3, 1).output, [0, 2])):
        assert ppt_separable(s, 0) == ppt_separable(s, 1)


def test_ppt_needs_two_modes():
    with pytest.raises(ValueError):
        ppt_separable(vacuum(3))


def test_broadcast_output_pairs_separable():
    report = pairwise_report(broadcast_pipeline(2, 3, 1, 1).output)
    assert [pair for pair, _ in report] == [(0, 1), (0, 2), (1, 2)]
    assert all(sep for _, sep in report)


def test_product_pairs_separable():
    s = tensor_all([displaced_thermal(k / 2) for k in range(4)])
    assert all(sep for _, sep in pairwise_report(s))


def test_distributing_half_of_tmsv_leaves_entanglement(tmsv):
    spread = apply_symplectic(tensor(tmsv, vacuum(2)), distributor(3), modes=[1, 2, 3])
    verdicts = dict(pairwise_report(spread))
    assert not all(verdicts.values())
    # the untouched mode stays entangled with each diluted copy
    assert not verdicts[(0, 1)]


def test_pairwise_report_needs_two_modes():
    with pytest.raises(ValueError):
        pairwise_report(vacuum(1))
