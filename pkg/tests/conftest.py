import numpy as np
import pytest
from hypothesis import settings

from intension import _pykernels, kernels

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")

KERNEL_NAMES = ("count_models", "accept_mask", "reject_counts", "rejection_sets",
                "exhaustive_weakest", "greedy_weaken")


@pytest.fixture(params=["native", "python"])
def backend(request, monkeypatch):
    """Run a test against the selected backend and against the reference kernels."""
    if request.param == "python":
        for name in KERNEL_NAMES:
            monkeypatch.setattr(kernels, name, getattr(_pykernels, name))
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
