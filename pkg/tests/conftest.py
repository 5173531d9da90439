import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from dolrm.env import EnvironmentSpec

settings.register_profile(
    "ci",
    derandomize=True,
    max_examples=100,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")

TWO_TYPE_ARMS = (((3.0, 1.0),), ((3.0, 2.0), (1.0, 1.0)))


def two_type_env(p0: float = 0.8, sigma: float = 1.0) -> EnvironmentSpec:
    return EnvironmentSpec((p0, 1.0 - p0), TWO_TYPE_ARMS, sigma)


def seven_type_env(sigma: float = 1.0) -> EnvironmentSpec:
    return EnvironmentSpec(
        (0.3, 0.1, 0.2, 0.1, 0.05, 0.1, 0.15),
        (
            ((3.0, 1.0),),
            ((3.0, 2.0), (1.0, 1.0)),
            ((2.0, 1.0),),
            ((2.5, 1.5),),
            ((2.0, 1.0), (1.0, 1.0)),
            ((3.0, 2.0), (1.5, 1.5)),
            ((2.5, 1.0),),
        ),
        sigma,
    )


class StubRng:
    """Deterministic stand-in for a Generator, fed from queued values.

    random() pops one float; standard_normal(n) pops n floats and returns
    them as an array. Running out of queued values fails the test.
    """

    def __init__(self, uniforms=(), normals=()):
        self._uniforms = list(uniforms)
        self._normals = list(normals)

    def random(self):
        assert self._uniforms, "stub rng ran out of uniform draws"
        return self._uniforms.pop(0)

    def standard_normal(self, n=None):
        if n is None:
            assert self._normals, "stub rng ran out of normal draws"
            return self._normals.pop(0)
        assert len(self._normals) >= n, "stub rng ran out of normal draws"
        out = np.array(self._normals[:n])
        del self._normals[:n]
        return out


@pytest.fixture
def p08():
    return two_type_env()


@pytest.fixture
def p08_noiseless():
    return two_type_env(sigma=0.0)
