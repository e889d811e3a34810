import numpy as np
import pytest
from hypothesis import settings

from quasilorentz import pointsets as ps
from quasilorentz._accel import NUMBA_AVAILABLE

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

BACKENDS = ["numba", "numpy"] if NUMBA_AVAILABLE else ["numpy"]

ALL_FIELDS = [
    ps.Fibonacci(),
    ps.Chain(2.5),
    ps.Chain(1.2),
    ps.matched_periodic(),
    ps.Periodic(1.0),
    ps.matched_poisson(seed=11),
    ps.Poisson(3.0, seed=4, cell_size=0.37),
]


def field_id(f):
    return f"{type(f).__name__}-{'-'.join(str(v) for v in f.describe().values())}"


@pytest.fixture(params=ALL_FIELDS, ids=field_id)
def any_field(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES = []


def record_criterion(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} -- {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
