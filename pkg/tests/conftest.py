import os

import numpy as np
import pytest
from scipy.integrate import quad

from shrinkselect.basis import trig
from shrinkselect.observation import test_signal

FULL_SCALE = os.environ.get("SHRINKSELECT_FULL_SCALE") == "1"

# (criterion, verdict, detail) lines collected by the acceptance module
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    lines = list(ACCEPTANCE_LINES)
    if not FULL_SCALE:
        lines.append("criterion 7: SKIP | full-scale run; set SHRINKSELECT_FULL_SCALE=1")
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)


def pytest_collection_modifyitems(config, items):
    if FULL_SCALE:
        return
    skip = pytest.mark.skip(reason="set SHRINKSELECT_FULL_SCALE=1 to run")
    for item in items:
        if "fullscale" in item.keywords:
            item.add_marker(skip)


def exact_coefficient(j: int) -> float:
    """Fourier coefficient of the benchmark signal by adaptive quadrature."""
    val, _ = quad(lambda t: test_signal(t) * float(trig(j, t)), 0.0, 1.0, limit=400)
    return val


@pytest.fixture(scope="session")
def exact_theta():
    """True coefficients of the benchmark signal for j = 1..60."""
    return np.array([exact_coefficient(j) for j in range(1, 61)])


@pytest.fixture(scope="session")
def signal_norm_sq():
    val, _ = quad(lambda t: test_signal(t) ** 2, 0.0, 1.0, limit=400)
    return val
