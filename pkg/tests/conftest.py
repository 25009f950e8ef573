import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def central_fd(f, x, h=1e-4):
    """Gradient and Hessian of a vector-valued f at x by central differences."""
    x = np.asarray(x, dtype=float)
    m = len(x)
    f0 = np.asarray(f(x), dtype=float)
    grad = np.zeros(f0.shape + (m,))
    hess = np.zeros(f0.shape + (m, m))
    E = np.eye(m) * h
    for i in range(m):
        grad[..., i] = (f(x + E[i]) - f(x - E[i])) / (2 * h)
        for j in range(m):
            hess[..., i, j] = (f(x + E[i] + E[j]) - f(x + E[i] - E[j])
                               - f(x - E[i] + E[j]) + f(x - E[i] - E[j])) / (4 * h * h)
    return grad, hess


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
