import pytest


def make_grid(lo=-5.0, hi=5.0, n=201):
    # k/(n-1) first so symmetric ranges hit 0 and the endpoints exactly
    return tuple(lo + (hi - lo) * (k / (n - 1)) for k in range(n))


@pytest.fixture(scope="session")
def grid():
    return make_grid()
