import pytest

from cwf_lab import fixtures
from cwf_lab.fincat import chain, terminal_category, walking_arrow
from cwf_lab.presheaf import terminal_presheaf


@pytest.fixture
def c1():
    return terminal_category()


@pytest.fixture
def c2():
    return walking_arrow()


@pytest.fixture
def chain2():
    return chain(2)


@pytest.fixture
def top1(c1):
    return terminal_presheaf(c1)


@pytest.fixture
def top2(c2):
    return terminal_presheaf(c2)


@pytest.fixture
def g2():
    return fixtures.gamma2()


@pytest.fixture
def a2(g2):
    return fixtures.a2(g2)


@pytest.fixture
def a2p(g2):
    return fixtures.a2_weakened(g2)


@pytest.fixture
def sigma2(g2):
    return fixtures.sigma2(g2)


@pytest.fixture(scope="session")
def unit_base():
    return fixtures.unit_cwf()


@pytest.fixture(scope="session")
def unit_base_pi():
    return fixtures.unit_cwf_with_pi()


@pytest.fixture(scope="session")
def renaming_base():
    return fixtures.renaming_cwf()
