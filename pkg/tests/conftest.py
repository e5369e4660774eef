import numpy as np
import pytest

from almostcommute.generate import haar_unitary, random_hermitian

_CRITERIA_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_CRITERIA_KEY] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_CRITERIA_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture
def criterion(request):
    """Record one pass/fail line per acceptance criterion for the terminal summary."""
    lines = request.config.stash[_CRITERIA_KEY]

    def record(label, passed, detail=""):
        lines.append(f"{'PASS' if passed else 'FAIL'} {label}: {detail}")
        assert passed, f"{label}: {detail}"

    return record


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def random_pair(rng):
    def make(n):
        return random_hermitian(n, rng), random_hermitian(n, rng)

    return make


@pytest.fixture
def unitary(rng):
    return lambda n: haar_unitary(n, rng)
