import numpy as np
import pytest

from infodetect.model_core import MarketParams


@pytest.fixture
def unit_params():
    return MarketParams(rho=0.5, beta=1.0, sigma_z=1.0, sigma_u=1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance") or __import__("sys").modules.get("tests.test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.RESULTS, key=lambda s: int(s.split("acceptance ")[1].split(":")[0])):
            terminalreporter.write_line(line)
