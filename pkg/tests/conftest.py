import numpy as np
import pytest

from momentkit import central_extension, su2_spin, torus_diag, weyl_truncated

ACCEPTANCE_KEY = pytest.StashKey[list]()

ZOO = {
    "su2:1": lambda: su2_spin(1),
    "su2:2": lambda: su2_spin(2),
    "torus:3": lambda: torus_diag([1, 1, 1]),
    "weyl:12": lambda: weyl_truncated(12),
}


def philox(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


@pytest.fixture
def rng():
    return philox(20240607)


@pytest.fixture(params=list(ZOO))
def zoo_ext(request):
    return central_extension(ZOO[request.param]())


@pytest.fixture
def spin_half():
    return central_extension(su2_spin(1))


@pytest.fixture
def acceptance_log(request):
    return request.config.stash.setdefault(ACCEPTANCE_KEY, [])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":")) if s.split()[1][0].isdigit() else 99):
            terminalreporter.write_line(line)
