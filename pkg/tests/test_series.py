import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schwarzcrit.errors import DomainError, NearZeroConstantTerm
from schwarzcrit.series import (
    PowerSeries,
    dilate,
    series_add,
    series_derive,
    series_div,
    series_eval,
    series_mul,
)

from .conftest import complexes, series_strategy


def coeffs(*c):
    return np.array(c, dtype=complex)


class TestArithmetic:
    def test_add(self):
        assert np.allclose(series_add(PowerSeries([0, 1, 0]), PowerSeries([0, 0, 1])).coeffs, coeffs(0, 1, 1))
        assert np.allclose(series_add(PowerSeries([1, 2]), PowerSeries([3, 4])).coeffs, coeffs(4, 6))

    def test_add_zero_is_identity(self, rng):
        f = PowerSeries(rng.normal(size=10))
        assert series_add(f, PowerSeries.zero(9)) == f

    def test_add_truncates_to_shorter(self):
        s = series_add(PowerSeries([1, 1, 1, 1]), PowerSeries([1, 1]))
        assert s.order == 1

    def test_mul(self):
        assert np.allclose(series_mul(PowerSeries([1, 1, 0]), PowerSeries([1, -1, 0])).coeffs, coeffs(1, 0, -1))
        assert np.allclose(series_mul(PowerSeries([0, 1, 0]), PowerSeries([0, 1, 0])).coeffs, coeffs(0, 0, 1))

    def test_mul_by_one(self, rng):
        f = PowerSeries(rng.normal(size=8) + 1j * rng.normal(size=8))
        assert series_mul(f, PowerSeries.constant(1.0, 7)) == f

    def test_geometric_series(self):
        q = series_div(PowerSeries.constant(1.0, 10), PowerSeries([1, -1]).padded(10))
        assert np.allclose(q.coeffs, np.ones(11))

    def test_div_self(self, rng):
        f = PowerSeries(np.r_[1.0, rng.normal(size=12)])
        q = series_div(f, f)
        assert np.allclose(q.coeffs, np.r_[1.0, np.zeros(12)], atol=1e-12)

    def test_div_multiply_back(self):
        # (z - z^2) / (1 - z) = z; oracle: multiply the quotient back
        a = PowerSeries([0, 1, -1]).padded(12)
        b = PowerSeries([1, -1]).padded(12)
        q = series_div(a, b)
        assert np.allclose(series_mul(q, b).coeffs, a.coeffs, atol=1e-14)
        assert np.allclose(q.coeffs, PowerSeries.identity(12).coeffs, atol=1e-14)

    def test_div_floor(self):
        with pytest.raises(NearZeroConstantTerm):
            series_div(PowerSeries([1, 1]), PowerSeries([1e-15, 1]))

    def test_operators(self):
        a = PowerSeries([1, 2, 3])
        assert (a + 1) == PowerSeries([2, 2, 3])
        assert (1 - a) == PowerSeries([0, -2, -3])
        assert (2 * a) == PowerSeries([2, 4, 6])
        assert np.allclose((a / a).coeffs, [1, 0, 0])


class TestCalculus:
    def test_derive(self):
        assert np.allclose(series_derive(PowerSeries([0, 0, 1])).coeffs, coeffs(0, 2))
        assert np.allclose(series_derive(PowerSeries([5.0])).coeffs, coeffs(0))
        assert np.allclose(series_derive(PowerSeries([0, 1, 0, 3])).coeffs, coeffs(1, 0, 9))

    def test_eval(self):
        assert series_eval(PowerSeries([1, 1, 1]), 0) == 1
        assert series_eval(PowerSeries([0, 1]), 0.5j) == 0.5j

    def test_eval_geometric(self):
        geo = PowerSeries(np.ones(65))
        assert abs(series_eval(geo, 0.5) - 2.0) < 1e-12

    def test_eval_array(self):
        z = np.array([0.1, 0.2j, -0.3])
        f = PowerSeries([1, 2, 3])
        assert np.allclose(series_eval(f, z), 1 + 2 * z + 3 * z**2)

    def test_immutable(self):
        f = PowerSeries([1, 2])
        with pytest.raises(ValueError):
            f.coeffs[0] = 3

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            PowerSeries([1, np.nan])


class TestDilate:
    @pytest.mark.parametrize(
        "c, t, expected",
        [
            ([0, 1, 1], 1.0, [0, 1, 1]),
            ([0, 1, 1], 0.5, [0, 1, 0.5]),
            ([0, 1, 1, 1], 0.1, [0, 1, 0.1, 0.01]),
        ],
    )
    def test_formula(self, c, t, expected):
        assert np.allclose(dilate(PowerSeries(c), t).coeffs, expected)

    @pytest.mark.parametrize("t", [0.0, -0.5, 1.5])
    def test_domain(self, t):
        with pytest.raises(DomainError):
            dilate(PowerSeries([0, 1]), t)

    def test_matches_definition(self, rng):
        f = PowerSeries(np.r_[0, 1, rng.normal(size=6) * 0.2])
        z, t = 0.3 + 0.4j, 0.7
        assert abs(series_eval(dilate(f, t), z) - series_eval(f, t * z) / t) < 1e-14


def close(a, b, tol):
    n = min(a.order, b.order) + 1
    scale = max(1.0, np.max(np.abs(a.coeffs[:n])), np.max(np.abs(b.coeffs[:n])))
    return np.allclose(a.coeffs[:n], b.coeffs[:n], atol=tol * scale, rtol=0)


@settings(max_examples=60, deadline=None)
@given(series_strategy(), series_strategy(), series_strategy())
def test_ring_axioms(a, b, c):
    assert close((a + b) + c, a + (b + c), 1e-12)
    assert close(a * b, b * a, 1e-12)
    assert close(a * (b + c), a * b + a * c, 1e-12)


@settings(max_examples=60, deadline=None)
@given(series_strategy(max_order=24), st.floats(min_value=0.5, max_value=2.0), series_strategy(max_order=24))
def test_div_then_mul_round_trip(a, b0, tail):
    b = PowerSeries(np.r_[b0, 0.3 * tail.coeffs[1:]])
    q = series_div(a, b)
    assert close(q * b, a, 1e-10)


@settings(max_examples=60, deadline=None)
@given(series_strategy(min_order=2, max_order=16), complexes)
def test_derivative_matches_central_difference(a, z):
    z = 0.5 * z / max(1.0, abs(z) / 0.5) if abs(z) > 0.5 else z
    h = 1e-6
    fd = (series_eval(a, z + h) - series_eval(a, z - h)) / (2 * h)
    exact = series_eval(series_derive(a), z)
    scale = max(1.0, float(np.sum(np.abs(a.coeffs))))
    assert abs(fd - exact) <= 1e-6 * scale
