import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from rigx.gfmat import FieldMatrix

settings.register_profile("rigx", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("rigx")

ACCEPTANCE_LINES: list[str] = []


@st.composite
def field_matrices(draw, m=(1, 4), n=(1, 3), p=2):
    rows = draw(st.integers(*m))
    cols = draw(st.integers(*n))
    flat = draw(st.lists(st.integers(0, p - 1), min_size=rows * cols, max_size=rows * cols))
    return FieldMatrix(np.array(flat, dtype=np.int64).reshape(rows, cols), p)


@pytest.fixture
def example3x2():
    """Rows (1,0), (0,1), (1,1) over GF(2)."""
    return FieldMatrix.from_rows([(1, 0), (0, 1), (1, 1)], 2)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
