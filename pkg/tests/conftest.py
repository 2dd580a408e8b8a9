import sys
import warnings

import numpy as np
import pytest

from probe_resonance.errors import StrongCouplingWarning


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(autouse=True)
def _quiet_strong_coupling():
    # alpha = 0 runs use c = 1 = omega on purpose
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", StrongCouplingWarning)
        yield


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, detail = results[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} | {detail}")
