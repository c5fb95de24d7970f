"""Fundamental solutions of ``y'' + A(z) y = 0`` and Gronwall-type bounds.

With ``A = S(f, .) / 2`` and solutions ``u, v`` normalized by
``u(0) = v'(0) = 0``, ``u'(0) = v(0) = 1``, a normalized ``f`` is recovered as
``f = u / (c u + v)`` with ``c = -a_2``.

``u`` and ``v`` satisfy the Volterra equations

    u(z) = z + int_0^z (eta - z) A(eta) u(eta) d eta
    v(z) = 1 + int_0^z (eta - z) A(eta) v(eta) d eta

The primary solver (:func:`solve_uv_series`) uses the equivalent coefficient
recurrence.  :func:`picard_uv_ray` iterates the Volterra equations along a ray
with the trapezoid rule and exists as an independent check on it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .errors import DomainError, HypothesisViolated, NonConvergence
from .grid import GridSpec
from .series import PowerSeries, series_derive, series_div, series_eval

WRONSKIAN_TOL = 1e-9
BOUND_SLACK = 1e-12


@dataclass(frozen=True)
class OdeSolution:
    u: PowerSeries
    v: PowerSeries
    c: complex
    wronskian_residual: float
    A: PowerSeries


@dataclass(frozen=True)
class BoundCheck:
    """One Gronwall-type bound ``sup lhs < rhs`` sampled on a grid."""

    name: str
    lhs_max: float
    rhs: float
    argmax: complex
    holds: bool
    equality_boundary: bool


@dataclass(frozen=True)
class GronwallReport:
    bound_u: BoundCheck
    bound_u_over_z: BoundCheck
    bound_cu_plus_v: BoundCheck
    bound_cu_plus_v_minus_1: BoundCheck
    notes: tuple = field(default_factory=tuple)

    @property
    def bounds(self):
        return (self.bound_u, self.bound_u_over_z, self.bound_cu_plus_v, self.bound_cu_plus_v_minus_1)

    @property
    def all_hold(self) -> bool:
        return all(b.holds for b in self.bounds)


@dataclass(frozen=True)
class RaySamples:
    t: np.ndarray
    z: np.ndarray
    u: np.ndarray
    v: np.ndarray
    iterations: int


def _fundamental_coeffs(a: np.ndarray, y0: complex, y1: complex, n: int) -> np.ndarray:
    y = np.zeros(n + 1, dtype=complex)
    y[0] = y0
    if n >= 1:
        y[1] = y1
    for k in range(n - 1):
        # y_{k+2} = -(sum_{j<=k} A_j y_{k-j}) / ((k+2)(k+1))
        y[k + 2] = -np.dot(a[: k + 1], y[k::-1]) / ((k + 2) * (k + 1))
    return y


def wronskian_residual(u: PowerSeries, v: PowerSeries, radius: float = 0.9, samples: int = 64) -> float:
    """``max |u v' - u' v + 1|`` over ``samples`` points of ``|z| = radius``."""
    z = radius * np.exp(2j * np.pi * np.arange(samples) / samples)
    w = series_eval(u, z) * series_eval(series_derive(v), z) - series_eval(series_derive(u), z) * series_eval(v, z)
    return float(np.max(np.abs(w + 1.0)))


def solve_uv_series(A: PowerSeries, order: int, c: complex = 0.0) -> OdeSolution:
    """Series solutions ``u, v`` of ``y'' + A y = 0`` up to ``order``.

    The order is capped at ``A.order + 2``, the last coefficient the
    truncated ``A`` determines.
    """
    if order < 2:
        raise DomainError(f"order must be >= 2, got {order}")
    n = min(order, A.order + 2)
    u = PowerSeries(_fundamental_coeffs(A.coeffs, 0.0, 1.0, n))
    v = PowerSeries(_fundamental_coeffs(A.coeffs, 1.0, 0.0, n))
    return OdeSolution(u=u, v=v, c=complex(c), wronskian_residual=wronskian_residual(u, v), A=A)


def picard_uv_ray(
    A: PowerSeries,
    theta: float,
    r: float,
    steps: int = 2048,
    iters: int = 64,
    tol: float = 1e-8,
) -> RaySamples:
    """Picard iterates of the Volterra equations along ``z = t e^{i theta}``, ``0 <= t <= r``.

    Iteration stops once successive iterates differ by at most ``tol`` in sup
    norm; :class:`NonConvergence` is raised if that has not happened after
    ``iters`` rounds.
    """
    if not (0.0 < r < 1.0):
        raise DomainError(f"ray length must lie in (0, 1), got {r}")
    if steps < 64 or iters < 8:
        raise DomainError("picard_uv_ray needs steps >= 64 and iters >= 8")
    t = np.linspace(0.0, r, steps + 1)
    e = np.exp(1j * theta)
    z = t * e
    # (eta - z) d eta = (s - t) e^{2 i theta} ds along the ray
    kernel = e * e * series_eval(A, z)

    def volterra(y):
        g = kernel * y
        i0 = cumulative_trapezoid(g, t, initial=0.0)
        i1 = cumulative_trapezoid(t * g, t, initial=0.0)
        return i1 - t * i0

    u = z.copy()
    v = np.ones_like(z)
    for it in range(1, iters + 1):
        u_new = z + volterra(u)
        v_new = 1.0 + volterra(v)
        diff = max(np.max(np.abs(u_new - u)), np.max(np.abs(v_new - v)))
        u, v = u_new, v_new
        if diff <= tol:
            return RaySamples(t=t, z=z, u=u, v=v, iterations=it)
    raise NonConvergence(f"Picard iterates still differ by {diff:.3e} after {iters} rounds")


def reconstruct_f(sol: OdeSolution) -> PowerSeries:
    """Series of ``u / (c u + v)``."""
    if sol.wronskian_residual >= WRONSKIAN_TOL:
        raise DomainError(f"Wronskian residual {sol.wronskian_residual:.3e} exceeds {WRONSKIAN_TOL:g}")
    return series_div(sol.u, sol.c * sol.u + sol.v)


def gronwall_rhs(delta: float, eta: float) -> dict:
    """Right-hand sides of the four bounds for ``sup |A| <= delta``, ``|c| = eta``."""
    e = math.exp(delta / 2.0)
    return {
        "u": e,
        "u_over_z": 0.5 * delta * e,
        "cu_plus_v": (1.0 + eta) * e,
        "cu_plus_v_minus_1": eta + 0.5 * (1.0 + eta) * delta * e,
    }


def _check(name, values, z, rhs) -> BoundCheck:
    k = int(np.argmax(values))
    lhs = float(values[k])
    return BoundCheck(
        name=name,
        lhs_max=lhs,
        rhs=rhs,
        argmax=complex(z[k]),
        holds=lhs < rhs + BOUND_SLACK,
        equality_boundary=abs(lhs - rhs) <= BOUND_SLACK,
    )


def gronwall_bounds(sol: OdeSolution, delta: float, eta: float, grid: GridSpec | None = None) -> GronwallReport:
    """Sample the four bounds

        |u| < e^{d/2},            |u/z - 1| < d e^{d/2} / 2,
        |cu + v| < (1+h) e^{d/2}, |cu + v - 1| < h + (1+h) d e^{d/2} / 2

    (``d = delta``, ``h = eta``) on ``grid``.  The caller is responsible for
    ``sup |A| <= delta`` and ``|c| = eta``.
    """
    grid = grid or GridSpec(radius=0.999)
    z = grid.points()
    u = series_eval(sol.u, z)
    u_over_z = series_eval(sol.u.shift_down(), z)
    w = sol.c * u + series_eval(sol.v, z)
    rhs = gronwall_rhs(delta, eta)
    return GronwallReport(
        bound_u=_check("|u|", np.abs(u), z, rhs["u"]),
        bound_u_over_z=_check("|u/z - 1|", np.abs(u_over_z - 1.0), z, rhs["u_over_z"]),
        bound_cu_plus_v=_check("|cu + v|", np.abs(w), z, rhs["cu_plus_v"]),
        bound_cu_plus_v_minus_1=_check("|cu + v - 1|", np.abs(w - 1.0), z, rhs["cu_plus_v_minus_1"]),
        notes=(
            "|u| bound derived from u = z + int (eta - z) A u d eta with |z| <= 1, "
            "not from the displayed 1 + int ... form",
        ),
    )


def discrete_gronwall_check(g, A, k: float, t, rtol: float = 1e-9) -> bool:
    """Check Gronwall's lemma on samples over a uniform grid ``t`` starting at 0.

    First verifies the hypothesis ``g(t) <= k + int_0^t g A`` at every node
    (trapezoid rule), raising :class:`HypothesisViolated` if it fails, then
    returns whether ``g(t) <= k exp(int_0^t A)`` holds at every node.
    Comparisons carry a relative slack ``rtol`` so equality cases pass.
    """
    g = np.asarray(g, dtype=float)
    A = np.asarray(A, dtype=float)
    t = np.asarray(t, dtype=float)
    if k <= 0:
        raise DomainError("Gronwall constant k must be > 0")
    if g.shape != t.shape or A.shape != t.shape:
        raise DomainError("g, A and t must have the same shape")
    if np.any(g < 0) or np.any(A < 0):
        raise DomainError("g and A must be non-negative")
    if t[0] != 0.0 or not np.allclose(np.diff(t), t[1] - t[0]):
        raise DomainError("samples must lie on a uniform grid starting at t = 0")
    bound = k + cumulative_trapezoid(g * A, t, initial=0.0)
    bad = np.nonzero(g > bound * (1.0 + rtol))[0]
    if bad.size:
        i = int(bad[0])
        raise HypothesisViolated(f"g(t) > k + int g A at t = {t[i]:g}", index=i)
    conclusion = k * np.exp(cumulative_trapezoid(A, t, initial=0.0))
    return bool(np.all(g <= conclusion * (1.0 + rtol)))
