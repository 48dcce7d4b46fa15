import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=60, deadline=None, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_ACCEPTANCE: dict[str, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(label): one acceptance criterion")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    label = dict(report.user_properties).get("acceptance")
    if label is not None:
        _ACCEPTANCE[label] = "PASS" if report.outcome == "passed" else "FAIL"


@pytest.fixture(autouse=True)
def _acceptance_label(request):
    marker = request.node.get_closest_marker("acceptance")
    if marker is not None:
        request.node.user_properties.append(("acceptance", marker.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[0])):
        terminalreporter.write_line(f"{_ACCEPTANCE[label]}  {label}")


def disk_pairs(n, seed, rmax=1.0):
    """``n`` pairs of points uniform on the disk of radius ``rmax``, by square rejection."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < 2 * n:
        z = complex(*(2.0 * rng.random(2) - 1.0))
        if abs(z) < 1.0:
            out.append(rmax * z)
    return np.array(out[0::2]), np.array(out[1::2])


@pytest.fixture
def pairs():
    return disk_pairs


@pytest.fixture
def example_points():
    return 0.7, 0.1 + 0.3j, 0.3 + 0.5j


HALF_PI = math.pi / 2
