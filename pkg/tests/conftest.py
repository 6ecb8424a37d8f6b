import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=25)
settings.load_profile("default")


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run long checks")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="long-running; use --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def exact_0_200():
    """gamma_0..gamma_200 at 20 certified digits, computed once per session."""
    from stieltjes import PrecisionContext, gamma_exact_many

    return {r.n: r for r in gamma_exact_many(range(201), ctx=PrecisionContext(20))}
