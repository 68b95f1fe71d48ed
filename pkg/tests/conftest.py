import numpy as np
import pytest
from hypothesis import settings

from radwave import make_grid

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture
def grid16():
    return make_grid(16, -10.0, 10.0)


@pytest.fixture
def grid256():
    return make_grid(256, -16.0, 16.0)


def l2(grid, a, b):
    return float(np.sqrt(grid.integrate(np.abs(a - b) ** 2)))


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    verdicts = getattr(mod, "VERDICTS", None)
    if not verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(verdicts):
        terminalreporter.write_line(verdicts[key])
