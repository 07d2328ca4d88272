import sys

import numpy as np
import pytest

from cvbroadcast.gaussian import apply_symplectic, vacuum
from cvbroadcast.networks import two_mode_squeezer


@pytest.fixture
def tmsv():
    """Two-mode squeezed vacuum with mu^2 = 3, nu^2 = 2."""
    return apply_symplectic(vacuum(2), two_mode_squeezer(np.sqrt(3.0), np.sqrt(2.0)))


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(results, key=lambda k: int(k.split()[0][1:])):
        ok, detail = results[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {key}: {detail}")
