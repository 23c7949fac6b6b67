import hypothesis
import numpy as np
import pytest

from lngm import ConstraintKind, ProblemInstance

hypothesis.settings.register_profile(
    "ci", deadline=None, max_examples=50,
    suppress_health_check=[hypothesis.HealthCheck.too_slow])
hypothesis.settings.load_profile("ci")


def random_symmetric(rng, n, scale=1.0):
    M = rng.standard_normal((n, n)) * scale
    return 0.5 * (M + M.T)


def random_definite_instance(rng, n, sign=+1, kind=ConstraintKind.EQUALITY,
                             homogeneous=False):
    """Instance whose pencil is definite by construction: A0 = sign*P - mu1*A1
    with P symmetric positive definite, so A0 + mu1*A1 = sign*P."""
    G = rng.standard_normal((n, n))
    P = G @ G.T + 0.5 * np.eye(n)
    A1 = random_symmetric(rng, n)
    mu1 = rng.uniform(-2.0, 2.0)
    A0 = sign * P - mu1 * A1
    if homogeneous:
        b0 = np.zeros(n)
        b1 = np.zeros(n)
    else:
        b0 = rng.standard_normal(n)
        b1 = rng.standard_normal(n)
    c1 = rng.uniform(-5.0, 5.0)
    return ProblemInstance(A0, b0, A1, b1, c1, kind)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
