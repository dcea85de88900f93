import pathlib

import pytest

from detmethod import Ideal, parse_polynomial

DATA = pathlib.Path(__file__).parent / "data"


def make_ideal(texts, num_vars):
    return Ideal([parse_polynomial(t, num_vars) for t in texts], num_vars)


@pytest.fixture
def parabola():
    return make_ideal(["x1 - x0^2"], 2)


@pytest.fixture
def circle():
    return make_ideal(["x0^2 + x1^2 - 1"], 2)


@pytest.fixture
def line():
    return make_ideal(["x1 - x0"], 2)


@pytest.fixture
def conic():
    return make_ideal(["x0*x2 - x1^2"], 3)


@pytest.fixture
def twisted_cubic():
    return make_ideal(
        ["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"], 4
    )


@pytest.fixture
def twisted_cubic_affine():
    return make_ideal(["x1 - x0^2", "x2 - x0^3"], 3)


@pytest.fixture
def single_point():
    return make_ideal(["x0 - 2", "x1 - 3"], 2)


@pytest.fixture
def empty_variety():
    return make_ideal(["x0^2 + 1"], 2)
