"""Schwarzian derivative ``S(f, z) = (f''/f')' - (f''/f')**2 / 2``.

Two evaluation routes are provided.  :func:`schwarzian_series` builds the
Taylor series of ``S(f, .)`` from the series of ``f``; :func:`schwarzian_at`
evaluates ``f'''/f' - 1.5 (f''/f')**2`` pointwise from the derivative series,
which stays accurate wherever the series of ``f`` itself converges.

:func:`sup_schwarzian` estimates ``sup |S(f, z)|`` over the disk by sampling
the circle ``|z| = radius_cap`` (``S`` is analytic, so by the maximum
modulus principle the boundary carries the maximum) and polishing the best
sample with a golden-section search.  The result is a lower bound for the
supremum over the open unit disk.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NearZeroConstantTerm, NearZeroDenominator
from .series import PowerSeries, series_derive, series_div, series_eval, series_mul

POINTWISE_FLOOR = 1e-12
TAIL_TERMS = 8
TAIL_TOL = 1e-10
CONSISTENCY_TOL = 1e-8
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SupEstimate:
    """Boundary-sampled estimate of ``sup |S(f, z)|`` (that is, ``2 delta``)."""

    two_delta: float
    argmax: complex
    radius_cap: float
    grid_points: int
    diagnostics: tuple = field(default_factory=tuple)
    unbounded_growth: bool = False

    @property
    def delta(self) -> float:
        return self.two_delta / 2.0


def schwarzian_series(f: PowerSeries) -> PowerSeries:
    """Series of ``S(f, .)``, of order ``f.order - 3``.

    Raises :class:`NearZeroConstantTerm` when ``f'(0)`` vanishes numerically.
    """
    if f.order < 3:
        raise DomainError(f"need a series of order >= 3, got {f.order}")
    d1 = series_derive(f)
    d2 = series_derive(d1)
    pre = series_div(d2, d1)  # f''/f', order N-2
    dpre = series_derive(pre)  # order N-3
    return dpre - 0.5 * series_mul(pre, pre)


class _Derivatives:
    """First three derivative series of ``f``, built once per function."""

    def __init__(self, f: PowerSeries):
        if f.order < 3:
            raise DomainError(f"need a series of order >= 3, got {f.order}")
        self.d1 = series_derive(f)
        self.d2 = series_derive(self.d1)
        self.d3 = series_derive(self.d2)

    def schwarzian(self, z):
        z = np.asarray(z, dtype=complex)
        fp = series_eval(self.d1, z)
        fpp = series_eval(self.d2, z)
        fppp = series_eval(self.d3, z)
        small = np.abs(fp) < POINTWISE_FLOOR
        if np.any(small):
            where = z[small].flat[0] if z.ndim else complex(z)
            raise NearZeroDenominator(f"|f'(z)| < {POINTWISE_FLOOR:g} at z = {where}", z=where)
        ratio = fpp / fp
        return fppp / fp - 1.5 * ratio * ratio


def schwarzian_at(f: PowerSeries, z):
    """Pointwise ``S(f, z)``; ``z`` may be a scalar or an array."""
    return _Derivatives(f).schwarzian(z)


def golden_section_max(func, lo: float, hi: float, tol: float = 1e-10, max_iter: int = 200):
    """Maximize a unimodal scalar function on ``[lo, hi]``; returns ``(x, func(x))``."""
    x1 = hi - GOLDEN * (hi - lo)
    x2 = lo + GOLDEN * (hi - lo)
    f1, f2 = func(x1), func(x2)
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - GOLDEN * (hi - lo)
            f1 = func(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + GOLDEN * (hi - lo)
            f2 = func(x2)
    return (x1, f1) if f1 >= f2 else (x2, f2)


def _tail_check(f: PowerSeries, radius: float, argmax: complex, value: complex) -> list:
    try:
        s = schwarzian_series(f)
    except (DomainError, NearZeroConstantTerm) as exc:
        return [f"TruncationWarning: Schwarzian series unavailable ({exc})"]
    k = np.arange(s.order + 1)
    tail = np.abs(s.coeffs) * radius**k
    worst = float(tail[-TAIL_TERMS:].max())
    if worst >= TAIL_TOL:
        return [
            f"TruncationWarning: last {TAIL_TERMS} Schwarzian coefficients reach "
            f"{worst:.3e} at radius {radius:g}; value is a lower bound, "
            "|S| may grow without bound towards the circle"
        ]
    # A truncated f can have a formally exact S series (e.g. a cut Moebius
    # map) while the polynomial's own Schwarzian differs near the circle.
    gap = abs(complex(series_eval(s, argmax)) - value)
    if gap > CONSISTENCY_TOL * max(1.0, abs(value)):
        return [
            f"TruncationWarning: series and pointwise Schwarzian differ by {gap:.3e} "
            f"at radius {radius:g}; raise the truncation order"
        ]
    return []


def sup_schwarzian(
    f: PowerSeries,
    radius_cap: float = 0.999,
    grid_n: int = 1024,
    refine_tol: float = 1e-10,
    refine_iter: int = 200,
    check_tail: bool = True,
) -> SupEstimate:
    """Estimate ``sup_{|z| < 1} |S(f, z)|`` from the circle ``|z| = radius_cap``."""
    if not (0.0 < radius_cap < 1.0):
        raise DomainError(f"radius_cap must lie in (0, 1), got {radius_cap}")
    if grid_n < 16:
        raise DomainError(f"grid_n must be >= 16, got {grid_n}")
    ders = _Derivatives(f)
    theta = 2.0 * np.pi * np.arange(grid_n) / grid_n
    vals = np.abs(ders.schwarzian(radius_cap * np.exp(1j * theta)))
    k = int(np.argmax(vals))  # first maximum: smallest angle wins ties
    best_theta, best_val = float(theta[k]), float(vals[k])

    step = 2.0 * np.pi / grid_n

    def modulus(t):
        return abs(complex(ders.schwarzian(radius_cap * np.exp(1j * t))))

    t_ref, v_ref = golden_section_max(modulus, best_theta - step, best_theta + step, refine_tol, refine_iter)
    if v_ref > best_val:
        best_theta = t_ref % (2.0 * np.pi)

    argmax = complex(radius_cap * np.exp(1j * best_theta))
    value = complex(ders.schwarzian(argmax))
    two_delta = abs(value)
    diagnostics = _tail_check(f, radius_cap, argmax, value) if check_tail else []
    return SupEstimate(
        two_delta=two_delta,
        argmax=argmax,
        radius_cap=radius_cap,
        grid_points=grid_n,
        diagnostics=tuple(diagnostics),
        unbounded_growth=bool(diagnostics),
    )
