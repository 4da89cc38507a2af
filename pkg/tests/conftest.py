import pytest

from fibgrid.grid import HEPTA, PENTA, build_ball


@pytest.fixture(scope="session")
def penta4():
    return build_ball(PENTA, 4)


@pytest.fixture(scope="session")
def penta5():
    return build_ball(PENTA, 5)


@pytest.fixture(scope="session")
def penta6():
    return build_ball(PENTA, 6)


@pytest.fixture(scope="session")
def penta8():
    return build_ball(PENTA, 8)


@pytest.fixture(scope="session")
def hepta4():
    return build_ball(HEPTA, 4)


@pytest.fixture(scope="session")
def hepta5():
    return build_ball(HEPTA, 5)


@pytest.fixture(scope="session")
def hepta7():
    return build_ball(HEPTA, 7)
