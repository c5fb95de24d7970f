import numpy as np
import pytest
from hypothesis import strategies as st

from schwarzcrit.series import PowerSeries


def random_series(rng, order, scale=1.0, normalized=False, decay=0.0):
    k = np.arange(order + 1)
    c = (rng.normal(size=order + 1) + 1j * rng.normal(size=order + 1)) * scale / (1.0 + k) ** decay
    if normalized:
        c[0], c[1] = 0.0, 1.0
    return PowerSeries(c)


def random_normalized(rng, degree, bound=0.1, order=64):
    """``z + sum a_k z^k`` with ``|a_k| <= bound / k^2``, padded to ``order``."""
    c = np.zeros(order + 1, dtype=complex)
    c[1] = 1.0
    k = np.arange(2, degree + 1)
    c[2 : degree + 1] = rng.uniform(0, 1, k.size) * bound / k**2 * np.exp(2j * np.pi * rng.uniform(size=k.size))
    return PowerSeries(c)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


finite = st.floats(min_value=-2.0, max_value=2.0, allow_nan=False, allow_infinity=False)
complexes = st.builds(complex, finite, finite)


@st.composite
def series_strategy(draw, min_order=1, max_order=32):
    order = draw(st.integers(min_value=min_order, max_value=max_order))
    coeffs = draw(st.lists(complexes, min_size=order + 1, max_size=order + 1))
    return PowerSeries(coeffs)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for key in sorted(lines):
            terminalreporter.write_line(lines[key])
