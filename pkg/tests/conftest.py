import numpy as np
import pytest

from opticomb import (
    FinFunBackend,
    IdempotentFreeBackend,
    MatrixBackend,
    ObjectWord,
    PointedFreeBackend,
    UnitaryBackend,
)

TOL = 1e-9


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def cbe():
    """Complex matrices on x (dim 2) and y (dim 3)."""
    return MatrixBackend({"x": 2, "y": 3}, semiring="complex", tolerance=TOL)


@pytest.fixture
def bbe():
    """Boolean matrices on a single two-point object."""
    return MatrixBackend({"b": 2}, semiring="bool")


@pytest.fixture
def qbe():
    """Rational matrices on x (dim 2)."""
    return MatrixBackend({"x": 2, "y": 2}, semiring="rational")


@pytest.fixture
def ffb():
    return FinFunBackend({"s": 2, "t": 3})


@pytest.fixture
def idem():
    return IdempotentFreeBackend()


@pytest.fixture
def pointed():
    return PointedFreeBackend()


@pytest.fixture
def ube():
    return UnitaryBackend({"q": 2})


def rand_mat(backend, rng, dom, cod):
    """A dense complex matrix value with the given boundary."""
    from opticomb import Mat

    shape = (backend.dim(cod), backend.dim(dom))
    arr = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    return Mat(dom, cod, arr)


def word(*names):
    return ObjectWord.of(*names) if names else ObjectWord.unit()
