import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "ci",
    deadline=None,
    derandomize=True,
    max_examples=50,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def gl_integral(fn, a: float, b: float, order: int = 200) -> float:
    """Gauss-Legendre integral of a vectorised function on [a, b]."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    x = (nodes + 1.0) * (b - a) / 2.0 + a
    return float((b - a) / 2.0 * weights @ fn(x))
