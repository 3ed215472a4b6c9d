import pytest

from tubelat.algebra import build_c4, derive_path_basis
from tubelat.exceptional import enumerate_exceptional
from tubelat.lattice import K0Lattice


@pytest.fixture(scope="session")
def spec():
    return build_c4(2)


@pytest.fixture(scope="session")
def basis(spec):
    return derive_path_basis(spec)


@pytest.fixture(scope="session")
def lattice(spec):
    return K0Lattice.for_spec(spec)


@pytest.fixture(scope="session")
def exceptional_set(lattice):
    return enumerate_exceptional(lattice)


def unit(n, i):
    return tuple(1 if j == i else 0 for j in range(n))
