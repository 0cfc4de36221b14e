import random

import pytest
from hypothesis import HealthCheck, settings

from superw.chibra import AffinePVA
from superw.liesuper import AlgebraSpec, Family

settings.register_profile(
    "default",
    max_examples=100,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def gl21():
    return AlgebraSpec(Family.GL_PLUS, 1)


@pytest.fixture(scope="session")
def pva_gl21(gl21):
    return AffinePVA(gl21)


@pytest.fixture(scope="session")
def pva_osp32():
    return AffinePVA(AlgebraSpec(Family.OSP_ODD_PLUS, 1))


@pytest.fixture
def rng():
    return random.Random(12345)


ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
