import numpy as np
import pytest

from densecoding.states import named_state, product_state, stream_rng


@pytest.fixture
def bell():
    return named_state("bell", (2, 2))


@pytest.fixture
def ghz3():
    return named_state("ghz", (2, 2, 2))


@pytest.fixture
def w3():
    return named_state("w", (2, 2, 2))


@pytest.fixture
def bell_pure():
    return named_state("bell_times_pure", (2, 2, 2))


@pytest.fixture
def rng():
    return stream_rng(20240611)


def random_hermitian(rng, n):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (g + g.conj().T) / 2


_ACCEPTANCE_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE_KEY] = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line: call with (number, passed, message)."""
    lines = request.config.stash[_ACCEPTANCE_KEY]

    def record(number, passed, message):
        lines.append((number, bool(passed), message))
        print(f"[criterion {number}] {'PASS' if passed else 'FAIL'}: {message}")

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, message in sorted(lines, key=lambda x: x[0]):
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {message}")
