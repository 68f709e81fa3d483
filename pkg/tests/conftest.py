import random

import pytest

from belitskii.linalg import Matrix, as_scalar

ACCEPTANCE_KEY = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[ACCEPTANCE_KEY] = {}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(ACCEPTANCE_KEY, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(results):
        terminalreporter.write_line(results[k])


@pytest.fixture
def record_criterion(request):
    """Store a one-line PASS/FAIL verdict for the terminal summary and echo it."""
    store = request.config.stash[ACCEPTANCE_KEY]

    def record(number: int, ok: bool, detail: str) -> bool:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        store[number] = line
        print(line)
        return ok

    return record


@pytest.fixture
def rng():
    return random.Random(20240611)


def mat(rows, cols=None):
    return Matrix.from_rows([[as_scalar(x) for x in r] for r in rows], cols=cols)
