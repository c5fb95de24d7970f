import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from schwarzcrit.errors import DomainError, NearZeroDenominator
from schwarzcrit.functions import NEHARI_TWO_DELTA, moebius, nehari, polynomial
from schwarzcrit.schwarzian import schwarzian_at, schwarzian_series, sup_schwarzian
from schwarzcrit.series import PowerSeries, dilate

from .conftest import random_normalized


def sympy_schwarzian(coeffs, z0):
    """Independent oracle: symbolic differentiation of a polynomial."""
    z = sp.symbols("z")
    f = sum(sp.nsimplify(c) * z**k for k, c in enumerate(coeffs))
    d1, d2, d3 = (sp.diff(f, z, n) for n in (1, 2, 3))
    s = d3 / d1 - sp.Rational(3, 2) * (d2 / d1) ** 2
    return complex(s.subs(z, sp.nsimplify(z0)).evalf(30))


class TestSeries:
    def test_moebius_is_zero(self):
        s = schwarzian_series(moebius(0.3))
        assert np.max(np.abs(s.coeffs)) < 1e-12

    def test_nehari_is_constant(self):
        s = schwarzian_series(nehari())
        assert abs(s[0] - NEHARI_TWO_DELTA) < 1e-12
        assert np.max(np.abs(s.coeffs[1:])) < 1e-10

    def test_quadratic_closed_form(self):
        a = 0.1
        s = schwarzian_series(polynomial([0, 1, a]))
        # -6 a^2 / (1 + 2 a z)^2 = -6 a^2 sum (k+1) (-2a z)^k
        k = np.arange(s.order + 1)
        expected = -6 * a**2 * (k + 1) * (-2 * a) ** k
        assert np.allclose(s.coeffs, expected, atol=1e-14)
        assert abs(s[0] + 0.06) < 1e-15

    def test_order(self):
        assert schwarzian_series(polynomial([0, 1], order=20)).order == 17

    def test_too_short(self):
        with pytest.raises(DomainError):
            schwarzian_series(PowerSeries([0, 1, 0.1]))


class TestPointwise:
    def test_moebius(self):
        assert abs(schwarzian_at(moebius(0.3), 0.5)) < 1e-12

    def test_nehari(self):
        assert abs(schwarzian_at(nehari(), 0.3 + 0.4j) - NEHARI_TWO_DELTA) < 1e-10

    def test_quadratic_origin(self):
        assert abs(schwarzian_at(polynomial([0, 1, 0.1]), 0) + 0.06) < 1e-15

    @pytest.mark.parametrize("z0", [0.0, 0.25, -0.4 + 0.3j, 0.6j, 0.85 - 0.1j])
    def test_matches_symbolic_oracle(self, z0):
        coeffs = [0, 1, 0.1, -0.05, 0.02j, 0.01]
        assert abs(schwarzian_at(polynomial(coeffs), z0) - sympy_schwarzian(coeffs, z0)) < 1e-12

    def test_series_and_pointwise_agree(self, rng):
        f = random_normalized(rng, 8, bound=0.3)
        z = 0.6 * np.exp(1j * np.linspace(0, 2 * np.pi, 17))
        s = schwarzian_series(f)
        assert np.allclose(s(z), schwarzian_at(f, z), atol=1e-10)

    def test_vanishing_derivative(self):
        with pytest.raises(NearZeroDenominator):
            schwarzian_at(polynomial([0, 1, 1]), -0.5)


class TestSup:
    def test_moebius(self):
        est = sup_schwarzian(moebius(0.3, order=256))
        assert est.two_delta <= 1e-12

    def test_nehari(self):
        est = sup_schwarzian(nehari())
        assert abs(est.two_delta - NEHARI_TWO_DELTA) < 1e-9
        assert not est.unbounded_growth

    def test_quadratic(self):
        est = sup_schwarzian(polynomial([0, 1, 0.1], order=128))
        assert abs(est.two_delta - 0.06 / (1 - 0.2 * 0.999) ** 2) < 1e-6
        assert abs(est.argmax + 0.999) < 1e-6

    def test_invariants(self, rng):
        f = random_normalized(rng, 8, bound=0.3)
        est = sup_schwarzian(f, radius_cap=0.95)
        assert abs(est.two_delta - abs(schwarzian_at(f, est.argmax))) < 1e-12
        assert abs(est.argmax) <= 0.95 + 1e-15
        assert est.delta == est.two_delta / 2

    def test_refinement_beats_grid(self, rng):
        f = random_normalized(rng, 8, bound=0.3)
        theta = 2 * np.pi * np.arange(1024) / 1024
        grid_max = np.max(np.abs(schwarzian_at(f, 0.999 * np.exp(1j * theta))))
        assert sup_schwarzian(f).two_delta >= grid_max

    def test_deterministic(self, rng):
        f = random_normalized(rng, 8, bound=0.3)
        assert sup_schwarzian(f) == sup_schwarzian(f)

    def test_truncation_warning(self):
        # Koebe-type Moebius map truncated short: S series tail does not decay
        est = sup_schwarzian(moebius(-1.0, order=32), radius_cap=0.99)
        assert est.unbounded_growth
        assert any("TruncationWarning" in d for d in est.diagnostics)

    @pytest.mark.parametrize("cap", [0.0, 1.0, 1.2])
    def test_radius_domain(self, cap):
        with pytest.raises(DomainError):
            sup_schwarzian(nehari(), radius_cap=cap)

    @pytest.mark.parametrize("fixture", ["quadratic", "cubic", "nehari"])
    def test_monotone_radius(self, fixture):
        f = {
            "quadratic": polynomial([0, 1, 0.1]),
            "cubic": polynomial([0, 1, 0.1, 0.05j]),
            "nehari": nehari(),
        }[fixture]
        values = [sup_schwarzian(f, radius_cap=r).two_delta for r in (0.3, 0.6, 0.9, 0.999)]
        assert all(a <= b + 1e-12 for a, b in zip(values, values[1:]))


def moebius_of(f, a, b, c, d):
    return (a * f + b) / (c * f + d)


@settings(max_examples=40, deadline=None)
@given(
    st.integers(0, 2**32 - 1),
    st.complex_numbers(min_magnitude=0.2, max_magnitude=2, allow_nan=False, allow_infinity=False),
    st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False),
    st.complex_numbers(max_magnitude=0.5, allow_nan=False, allow_infinity=False),
)
def test_moebius_invariance(seed, a, b, c):
    f = random_normalized(np.random.default_rng(seed), 10, bound=0.3, order=32)
    d = 1.0
    if abs(a * d - b * c) < 1e-3:
        return
    g = moebius_of(f, a, b, c, d)
    assert np.allclose(schwarzian_series(g).coeffs, schwarzian_series(f).coeffs, atol=1e-8, rtol=0)


@settings(max_examples=40, deadline=None)
@given(st.complex_numbers(max_magnitude=0.9, allow_nan=False, allow_infinity=False),
       st.complex_numbers(min_magnitude=0.5, max_magnitude=2, allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False))
def test_zero_characterization(c, a, b):
    # (a z + b) / (c z + 1) is a Moebius map of z whenever a != b c
    if abs(a - b * c) < 1e-3:
        return
    z = PowerSeries.identity(48)
    g = (a * z + b) / (c * z + 1.0)
    assert np.max(np.abs(schwarzian_series(g).coeffs)) < 1e-10


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.05, 1.0),
       st.complex_numbers(max_magnitude=0.9, allow_nan=False, allow_infinity=False))
def test_dilation_law(seed, t, z):
    f = random_normalized(np.random.default_rng(seed), 8, bound=0.5)
    lhs = schwarzian_at(dilate(f, t), z)
    rhs = t**2 * schwarzian_at(f, t * z)
    assert abs(lhs - rhs) < 1e-10


def test_nehari_constant_value():
    assert math.isclose(NEHARI_TWO_DELTA, 4.934802200544679)
