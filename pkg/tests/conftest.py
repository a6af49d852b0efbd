import pytest

from cstates import compute_weights, make_builtin


@pytest.fixture(scope="session")
def hydrogen():
    return make_builtin("hydrogen_like", 1.0)


@pytest.fixture(scope="session")
def harmonic():
    return make_builtin("harmonic", 1.0)


@pytest.fixture(scope="session")
def w_hydrogen(hydrogen):
    return compute_weights(hydrogen, 40_000)


@pytest.fixture(scope="session")
def w_harmonic(harmonic):
    return compute_weights(harmonic, 2_000)
