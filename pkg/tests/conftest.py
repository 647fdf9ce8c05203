import pytest

from gramwalk import fixtures as fx


@pytest.fixture
def toy3():
    return fx.toy3()


@pytest.fixture
def toy2x2():
    return fx.toy2x2()


@pytest.fixture
def fig10_net():
    return fx.fig10()


@pytest.fixture
def coaut():
    return fx.coaut()


@pytest.fixture
def coaut_prime():
    return fx.coaut_prime()


@pytest.fixture
def psi_empty():
    return fx.psi_empty()
