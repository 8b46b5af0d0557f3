import pytest

from nilnet.group import (
    abelian_spec,
    filiform4_spec,
    heisenberg_spec,
    integral_law,
    synthesize_law,
)


@pytest.fixture(scope="session")
def heis_law():
    return synthesize_law(heisenberg_spec())


@pytest.fixture(scope="session")
def heis_int():
    return integral_law(heisenberg_spec())


@pytest.fixture(scope="session")
def fili_law():
    return synthesize_law(filiform4_spec())


@pytest.fixture(scope="session")
def abel3_law():
    return synthesize_law(abelian_spec(3))


@pytest.fixture(scope="session")
def abel2_law():
    return synthesize_law(abelian_spec(2))
