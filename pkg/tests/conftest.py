import numpy as np
import pytest

from sphmean.geometry import Ball, Box
from sphmean.quadrature import sphere_rule


@pytest.fixture(scope="session")
def rule2():
    return sphere_rule(2, 64, "circle-trapezoid")


@pytest.fixture(scope="session")
def rule3():
    return sphere_rule(3, 16, "product-gauss")


@pytest.fixture
def ball2():
    return Ball(np.zeros(2), 1.0)


@pytest.fixture
def ball3():
    return Ball(np.zeros(3), 1.0)


@pytest.fixture
def box2():
    return Box([-1, -1], [1, 1])
