import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schwarzcrit.errors import DomainError, HypothesisViolated, NonConvergence
from schwarzcrit.functions import moebius, nehari, polynomial
from schwarzcrit.grid import GridSpec
from schwarzcrit.ode import (
    discrete_gronwall_check,
    gronwall_bounds,
    gronwall_rhs,
    picard_uv_ray,
    reconstruct_f,
    solve_uv_series,
    wronskian_residual,
)
from schwarzcrit.schwarzian import schwarzian_series
from schwarzcrit.series import PowerSeries, series_derive, series_eval

from .conftest import random_normalized

HALF_PI = math.pi / 2


def random_A(rng, order=32, bound=1.0):
    """Random series with ``sum |A_k| <= bound``, hence ``sup |A| <= bound`` on the disk."""
    c = rng.normal(size=order + 1) + 1j * rng.normal(size=order + 1)
    c *= 0.5 ** np.arange(order + 1)
    return PowerSeries(c * bound / np.sum(np.abs(c)))


class TestSeriesSolver:
    def test_zero_potential(self):
        sol = solve_uv_series(PowerSeries.zero(30), 32)
        assert np.allclose(sol.u.coeffs, PowerSeries.identity(32).coeffs)
        assert np.allclose(sol.v.coeffs, PowerSeries.constant(1, 32).coeffs)
        assert sol.wronskian_residual == 0.0

    def test_constant_potential(self):
        sol = solve_uv_series(PowerSeries.constant(math.pi**2 / 4, 40), 40)
        k = np.arange(41)
        w = HALF_PI
        sin_c = np.where(k % 2 == 1, (-1.0) ** ((k - 1) // 2) * w ** (k - 1) / np.array([float(math.factorial(j)) for j in k]), 0)
        cos_c = np.where(k % 2 == 0, (-1.0) ** (k // 2) * w**k / np.array([float(math.factorial(j)) for j in k]), 0)
        assert np.allclose(sol.u.coeffs, sin_c, atol=1e-15)
        assert np.allclose(sol.v.coeffs, cos_c, atol=1e-15)
        assert abs(sol.u[3] + math.pi**2 / 24) < 1e-15
        assert abs(sol.v[2] + math.pi**2 / 8) < 1e-15

    def test_initial_conditions(self, rng):
        sol = solve_uv_series(random_A(rng), 34)
        assert sol.u[0] == 0 and sol.u[1] == 1 and sol.v[0] == 1 and sol.v[1] == 0

    def test_order_cap(self):
        assert solve_uv_series(PowerSeries.zero(10), 64).u.order == 12

    def test_order_domain(self):
        with pytest.raises(DomainError):
            solve_uv_series(PowerSeries.zero(10), 1)

    def test_wronskian_random(self, rng):
        for _ in range(20):
            sol = solve_uv_series(random_A(rng, bound=2.0), 34)
            assert sol.wronskian_residual < 1e-9

    def test_fprime_representation(self, rng):
        f = random_normalized(rng, 8)
        sol = solve_uv_series(schwarzian_series(f) / 2, 64, c=-f[2])
        g = reconstruct_f(sol)
        z = 0.7 * np.exp(1j * np.linspace(0, 2 * np.pi, 13))
        w = sol.c * series_eval(sol.u, z) + series_eval(sol.v, z)
        assert np.allclose(series_eval(series_derive(g), z), 1 / w**2, atol=1e-8)


class TestReconstruction:
    def test_moebius(self):
        f = reconstruct_f(solve_uv_series(PowerSeries.zero(30), 32, c=0.3))
        assert np.allclose(f.coeffs[:4], [0, 1, -0.3, 0.09])
        assert np.allclose(f.coeffs, moebius(0.3, 32).coeffs, atol=1e-15)

    def test_identity(self):
        f = reconstruct_f(solve_uv_series(PowerSeries.zero(30), 32))
        assert np.allclose(f.coeffs, PowerSeries.identity(32).coeffs)

    def test_quadratic(self):
        f = polynomial([0, 1, 0.1])
        g = reconstruct_f(solve_uv_series(schwarzian_series(f) / 2, 64, c=-0.1))
        assert np.allclose(g.coeffs, f.coeffs[: g.order + 1], atol=1e-9)

    def test_round_trip_random(self, rng):
        for _ in range(10):
            f = random_normalized(rng, 10)
            g = reconstruct_f(solve_uv_series(schwarzian_series(f) / 2, 64, c=-f[2]))
            assert np.allclose(g.coeffs, f.coeffs[: g.order + 1], atol=1e-8)


class TestPicard:
    def test_zero_potential(self):
        ray = picard_uv_ray(PowerSeries.zero(8), 0.7, 0.9, steps=128, iters=8)
        assert np.allclose(ray.u, ray.z)
        assert np.allclose(ray.v, 1)

    def test_nehari_imaginary_ray(self):
        ray = picard_uv_ray(PowerSeries.constant(math.pi**2 / 4, 8), HALF_PI, 0.9, steps=2048)
        expected = 1j * math.sinh(0.45 * math.pi) / HALF_PI
        assert abs(ray.u[-1] - expected) < 1e-6
        assert abs(ray.v[-1] - math.cosh(0.45 * math.pi)) < 1e-6

    @pytest.mark.parametrize("theta", 2 * np.pi * np.arange(8) / 8)
    def test_agrees_with_series(self, rng, theta):
        A = random_A(rng)
        sol = solve_uv_series(A, 34)
        ray = picard_uv_ray(A, theta, 0.9)
        idx = np.linspace(0, ray.t.size - 1, 64).astype(int)
        assert np.max(np.abs(ray.u[idx] - sol.u(ray.z[idx]))) < 1e-7
        assert np.max(np.abs(ray.v[idx] - sol.v(ray.z[idx]))) < 1e-7

    def test_nonconvergence(self):
        with pytest.raises(NonConvergence):
            picard_uv_ray(PowerSeries.constant(50.0, 4), 0.0, 0.9, steps=64, iters=8)

    @pytest.mark.parametrize("kwargs", [dict(steps=32), dict(iters=4), dict(r=1.0)])
    def test_domain(self, kwargs):
        args = dict(A=PowerSeries.zero(4), theta=0.0, r=0.5)
        args.update(kwargs)
        with pytest.raises(DomainError):
            picard_uv_ray(**args)


class TestGronwallBounds:
    def test_trivial(self):
        sol = solve_uv_series(PowerSeries.zero(30), 32)
        rep = gronwall_bounds(sol, 0.0, 0.0)
        assert rep.all_hold
        assert [round(b.lhs_max, 12) for b in rep.bounds] == [0.999, 0.0, 1.0, 0.0]
        assert rep.bound_cu_plus_v.equality_boundary
        assert rep.notes

    def test_trivial_closed_grid_equality(self):
        # the |u| < e^0 bound is attained only in the limit |z| -> 1
        sol = solve_uv_series(PowerSeries.zero(30), 32)
        rep = gronwall_bounds(sol, 0.0, 0.0, GridSpec(radius=1 - 1e-13))
        assert rep.bound_u.holds and rep.bound_u.equality_boundary

    def test_nehari(self):
        sol = solve_uv_series(PowerSeries.constant(math.pi**2 / 4, 64), 66)
        rep = gronwall_bounds(sol, math.pi**2 / 4, 0.0)
        assert rep.all_hold
        assert abs(rep.bound_u.lhs_max - math.sinh(0.999 * HALF_PI) / HALF_PI) < 1e-6
        assert abs(rep.bound_u.rhs - math.exp(math.pi**2 / 8)) < 1e-12

    def test_rhs(self):
        r = gronwall_rhs(1.0, 0.2)
        e = math.exp(0.5)
        assert r == pytest.approx({"u": e, "u_over_z": 0.5 * e, "cu_plus_v": 1.2 * e, "cu_plus_v_minus_1": 0.2 + 0.6 * e})

    def test_random_sweep(self, rng):
        for _ in range(100):
            A = random_A(rng, bound=0.5)
            c = 0.2 * rng.uniform() * np.exp(2j * np.pi * rng.uniform())
            rep = gronwall_bounds(solve_uv_series(A, 34, c=c), 0.5, abs(c), GridSpec(radius=0.999, radial_steps=8, angular_steps=64))
            assert rep.all_hold


class TestDiscreteGronwall:
    def test_equality_case(self):
        t = np.linspace(0, 2, 4001)
        assert discrete_gronwall_check(np.exp(t), np.ones_like(t), 1.0, t)

    def test_constant(self):
        t = np.linspace(0, 1, 101)
        assert discrete_gronwall_check(np.ones_like(t), np.zeros_like(t), 1.0, t)

    def test_linear(self):
        t = np.linspace(0, 1, 101)
        assert discrete_gronwall_check(1 + t, np.ones_like(t), 1.0, t)

    def test_hypothesis_violated(self):
        t = np.linspace(0, 1, 101)
        with pytest.raises(HypothesisViolated) as info:
            discrete_gronwall_check(1 + 2 * t, np.zeros_like(t), 1.0, t)
        assert info.value.index == 1

    def test_bad_input(self):
        t = np.linspace(0, 1, 11)
        with pytest.raises(DomainError):
            discrete_gronwall_check(t, t, 0.0, t)
        with pytest.raises(DomainError):
            discrete_gronwall_check(t, t, 1.0, t**2)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.1, 3.0), st.floats(0.0, 2.0))
def test_gronwall_exponential_family(k, a):
    # g = k e^{a t} satisfies the hypothesis with equality for constant A = a
    t = np.linspace(0, 1, 2001)
    assert discrete_gronwall_check(k * np.exp(a * t), np.full_like(t, a), k, t, rtol=1e-6)


def test_wronskian_residual_helper():
    u = PowerSeries([0, 1, 0, 0])
    v = PowerSeries([1, 0, 0, 0])
    assert wronskian_residual(u, v) == 0.0
