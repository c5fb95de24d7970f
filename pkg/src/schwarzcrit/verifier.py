"""Sampled checks of the geometric conclusions, and a budgeted test-function generator.

Every check here is evidence on a finite grid inside ``|z| <= radius < 1``,
never a proof.  The conclusions concern the open disk, so a passing grid is
necessary but not sufficient; a failing grid with a witness is decisive.

Powers and arguments use the principal branch: ``w**a = exp(a Log w)`` with
``Arg w`` in ``(-pi, pi]``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .criteria import (
    CriterionKind,
    CriterionParams,
    PGammaMode,
    delta_threshold,
    eta_limit,
    evaluate_criterion,
)
from .errors import GenerationFailed, NearZeroDenominator
from .grid import GridSpec
from .schwarzian import sup_schwarzian
from .series import DEFAULT_ORDER, PowerSeries, dilate, series_derive, series_eval

EVAL_FLOOR = 1e-12
ARG_SLACK = 1e-9
REAL_SLACK = 1e-9
COLLISION_TOL = 1e-9


class ExprKind(str, enum.Enum):
    F_PRIME_MINUS_BETA = "f_prime_minus_beta"  # f' - beta
    BAZILEVIC_EXPR = "bazilevic_expr"  # (z/f)^(1-alpha) f'
    R_ALPHA_EXPR = "r_alpha_expr"  # f' + alpha z f''
    NONLINEAR_EXPR = "nonlinear_expr"  # (zf'/f)^alpha (1 + zf''/f')^beta
    COMBO_EXPR = "combo_expr"  # zf'/f + beta z^2 f''/f
    P_GAMMA_EXPR = "p_gamma_expr"  # (1-gamma) f/z + gamma f'
    ZFPRIME_OVER_F = "zfprime_over_f"
    ONE_PLUS_ZFPP_OVER_FP = "one_plus_zfpp_over_fp"
    F_OVER_Z = "f_over_z"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class GridReport:
    quantity: str
    extremum: float
    arg_extremum: complex
    passed: bool
    threshold: float
    witness: Optional[tuple] = None
    diagnostics: tuple = field(default_factory=tuple)


class _Parts:
    """Pointwise values of ``f'``, ``f''`` and ``f/z`` on an array of points.

    ``f/z`` is evaluated from the shifted series ``c_1 + c_2 z + ...`` so the
    removable singularities of ``z/f``, ``zf'/f`` and ``z^2 f''/f`` at the
    origin never appear.
    """

    def __init__(self, f: PowerSeries, z):
        self.z = np.asarray(z, dtype=complex)
        d1 = series_derive(f)
        self.fp = series_eval(d1, self.z)
        self.fpp = series_eval(series_derive(d1), self.z)
        self.fz = series_eval(f.shift_down(), self.z)

    def _nonzero(self, values, label):
        small = np.abs(values) < EVAL_FLOOR
        if np.any(small):
            where = complex(np.asarray(self.z)[small].flat[0]) if self.z.ndim else complex(self.z)
            raise NearZeroDenominator(f"|{label}| < {EVAL_FLOOR:g} at z = {where}", z=where)
        return values

    def f_prime(self):
        return self._nonzero(self.fp, "f'(z)")

    def f_over_z(self):
        return self._nonzero(self.fz, "f(z)/z")

    def zfp_over_f(self):
        return self.fp / self.f_over_z()

    def one_plus_zfpp_over_fp(self):
        return 1.0 + self.z * self.fpp / self.f_prime()


def _power(w, a: float, label: str, z):
    if a == 0:
        return np.ones_like(w)
    small = np.abs(w) < EVAL_FLOOR
    if np.any(small):
        where = complex(np.asarray(z)[small].flat[0]) if np.ndim(z) else complex(z)
        raise NearZeroDenominator(f"base of {label} power vanishes at z = {where}", z=where)
    return np.exp(a * np.log(w))


def eval_expr(f: PowerSeries, kind, params: CriterionParams, z):
    """Evaluate one of the target expressions of ``f`` at ``z`` (scalar or array)."""
    kind = ExprKind(kind)
    p = _Parts(f, z)
    z = p.z
    a, b, g = params.alpha, params.beta, params.gamma
    if kind is ExprKind.F_PRIME_MINUS_BETA:
        out = p.fp - b
    elif kind is ExprKind.BAZILEVIC_EXPR:
        out = _power(1.0 / p.f_over_z(), 1.0 - a, "z/f", z) * p.fp
    elif kind is ExprKind.R_ALPHA_EXPR:
        out = p.fp + a * z * p.fpp
    elif kind is ExprKind.NONLINEAR_EXPR:
        out = _power(p.zfp_over_f(), a, "zf'/f", z) * _power(p.one_plus_zfpp_over_fp(), b, "1 + zf''/f'", z)
    elif kind is ExprKind.COMBO_EXPR:
        out = (p.fp + b * z * p.fpp) / p.f_over_z()
    elif kind is ExprKind.P_GAMMA_EXPR:
        out = (1.0 - g) * p.fz + g * p.fp
    elif kind is ExprKind.ZFPRIME_OVER_F:
        out = p.zfp_over_f()
    elif kind is ExprKind.ONE_PLUS_ZFPP_OVER_FP:
        out = p.one_plus_zfpp_over_fp()
    else:
        out = p.f_over_z()
    if np.ndim(out) == 0:
        return complex(out)
    return out


def max_abs_arg(f, kind, params, grid: GridSpec, threshold: float = math.pi / 2) -> GridReport:
    """Largest ``|Arg expr|`` over ``grid``; passes when it is ``<= threshold + 1e-9``."""
    z = grid.points()
    vals = np.abs(np.angle(eval_expr(f, kind, params, z)))
    k = int(np.argmax(vals))
    return GridReport(
        quantity=f"max |arg {ExprKind(kind).value}|",
        extremum=float(vals[k]),
        arg_extremum=complex(z[k]),
        passed=bool(vals[k] <= threshold + ARG_SLACK),
        threshold=threshold,
    )


def min_real(f, kind, params, grid: GridSpec, threshold: float = 0.0) -> GridReport:
    """Smallest ``Re expr`` over ``grid``; passes when it is ``> threshold - 1e-9``."""
    z = grid.points()
    vals = np.real(eval_expr(f, kind, params, z))
    k = int(np.argmin(vals))
    return GridReport(
        quantity=f"min Re {ExprKind(kind).value}",
        extremum=float(vals[k]),
        arg_extremum=complex(z[k]),
        passed=bool(vals[k] > threshold - REAL_SLACK),
        threshold=threshold,
    )


def _univalence_sample(radius: float, n: int) -> np.ndarray:
    n_r = max(2, int(round(math.sqrt(n / 4.0))))
    n_t = max(8, n // n_r)
    r = radius * np.arange(1, n_r + 1) / n_r
    theta = 2.0 * np.pi * np.arange(n_t) / n_t
    return (r[:, None] * np.exp(1j * theta)[None, :]).ravel()


def _newton_preimage(f, d1, target, start, iters=60):
    zeta = start
    for _ in range(iters):
        fp = series_eval(d1, zeta)
        if abs(fp) < EVAL_FLOOR:
            return None
        step = (series_eval(f, zeta) - target) / fp
        zeta = zeta - step
        if abs(step) < 1e-15 * max(1.0, abs(zeta)):
            break
        if abs(zeta) > 1.0:
            return None
    return zeta


def univalence_grid_check(
    f: PowerSeries,
    radius: float = 0.99,
    n: int = 1024,
    collision_tol: float = COLLISION_TOL,
    candidates: int = 32,
) -> GridReport:
    """Pairwise injectivity test on a polar sample of about ``n`` points.

    Pairs at least two grid spacings apart are ranked by ``|f(z_i) - f(z_j)|``;
    the closest ones are polished by Newton's method into exact collisions
    ``f(z_1) = f(z_2)`` with both points inside ``|z| <= radius``.  A polished
    collision is reported as ``witness`` and fails the check.  ``extremum`` is
    the smallest difference quotient ``|f(z_i) - f(z_j)| / |z_i - z_j|`` over
    separated sample pairs.
    """
    if n > 4096:
        raise ValueError("univalence_grid_check is limited to n <= 4096 points")
    z = _univalence_sample(radius, n)
    w = series_eval(f, z)
    n_r = max(2, int(round(math.sqrt(n / 4.0))))
    spacing = max(radius / n_r, 2.0 * np.pi * radius / (z.size // n_r))
    min_sep = 2.0 * spacing

    best_ratio, best_pair = math.inf, (0, 0)
    pool_d, pool_i, pool_j = [], [], []
    chunk = 256
    for start in range(0, z.size, chunk):
        rows = np.arange(start, min(start + chunk, z.size))
        dz = np.abs(z[rows, None] - z[None, :])
        dw = np.abs(w[rows, None] - w[None, :])
        mask = (np.arange(z.size)[None, :] > rows[:, None]) & (dz >= min_sep)
        if not mask.any():
            continue
        ratio = np.where(mask, dw / np.where(mask, dz, 1.0), np.inf)
        k = np.unravel_index(int(np.argmin(ratio)), ratio.shape)
        if ratio[k] < best_ratio:
            best_ratio, best_pair = float(ratio[k]), (int(rows[k[0]]), int(k[1]))
        dw_masked = np.where(mask, dw, np.inf).ravel()
        take = min(candidates, int(mask.sum()))
        idx = np.argpartition(dw_masked, take - 1)[:take]
        pool_d.extend(dw_masked[idx])
        pool_i.extend(rows[idx // z.size])
        pool_j.extend(idx % z.size)

    order = sorted(range(len(pool_d)), key=lambda m: (pool_d[m], pool_i[m], pool_j[m]))[:candidates]
    d1 = series_derive(f)
    witness = None
    for m in order:
        i, j = int(pool_i[m]), int(pool_j[m])
        for src, dst in ((i, j), (j, i)):
            zeta = _newton_preimage(f, d1, complex(w[dst]), complex(z[src]))
            if zeta is None or abs(zeta) > radius:
                continue
            gap = abs(series_eval(f, zeta) - w[dst])
            if gap < collision_tol and abs(zeta - z[dst]) >= 0.5 * min_sep:
                witness = (complex(zeta), complex(z[dst]))
                break
        if witness is not None:
            break

    diagnostics = ()
    if witness is not None:
        z1, z2 = witness
        diagnostics = (
            f"collision: f({z1:.12g}) = f({z2:.12g}) to {abs(series_eval(f, z1) - series_eval(f, z2)):.3e}",
        )
    return GridReport(
        quantity="min |f(z_i) - f(z_j)| / |z_i - z_j|",
        extremum=best_ratio,
        arg_extremum=complex(z[best_pair[0]]),
        passed=witness is None and best_ratio > collision_tol,
        threshold=collision_tol,
        witness=witness,
        diagnostics=diagnostics,
    )


def _sup_or_inf(f, radius_cap, grid_n):
    try:
        return sup_schwarzian(f, radius_cap, grid_n, check_tail=False).two_delta
    except NearZeroDenominator:
        return math.inf


def random_budgeted_function(
    seed: int,
    n_coeffs: int = 8,
    two_delta_target: float = 0.5,
    eta_max: float = 0.1,
    radius_cap: float = 0.999,
    order: int = DEFAULT_ORDER,
    attempts: int = 64,
) -> PowerSeries:
    """Seeded polynomial ``f`` of degree ``n_coeffs`` with ``sup|S(f)| <= two_delta_target``.

    Draws ``h = z + sum c_k z^k`` with ``|c_k| <= 0.5/k^2`` and returns
    ``h(t z)/t``, with ``t`` chosen by bisection so that the measured
    Schwarzian bound lies within 1% below the target (or ``t`` is as large as
    ``|a_2| = t |c_2| <= eta_max`` allows).  Since ``S`` of the dilation is
    ``t^2 S(h)(t z)``, the measured bound grows monotonically with ``t``.
    """
    if two_delta_target < 0 or eta_max < 0:
        raise ValueError("budgets must be non-negative")
    if two_delta_target == 0:
        return PowerSeries.identity(order)
    rng = np.random.default_rng(seed)
    k = np.arange(2, n_coeffs + 1)
    for _ in range(attempts):
        mags = rng.uniform(0.0, 1.0, k.size) * 0.5 / k**2
        phases = rng.uniform(0.0, 2.0 * np.pi, k.size)
        coeffs = np.zeros(order + 1, dtype=complex)
        coeffs[1] = 1.0
        coeffs[2 : n_coeffs + 1] = mags * np.exp(1j * phases)
        h = PowerSeries(coeffs)
        c2 = abs(coeffs[2])
        t_max = 1.0 if c2 <= eta_max else eta_max / c2
        if t_max <= 0:
            continue
        if _sup_or_inf(dilate(h, t_max), radius_cap, 256) <= two_delta_target:
            t = t_max
        else:
            lo, hi = 0.0, t_max
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                s = _sup_or_inf(dilate(h, mid), radius_cap, 256)
                if s <= two_delta_target:
                    lo = mid
                    if s >= 0.99 * two_delta_target:
                        break
                else:
                    hi = mid
            t = lo
        if t <= 0:
            continue
        # the coarse grid may miss the true boundary maximum; confirm and shrink
        for _ in range(20):
            f = dilate(h, t)
            if _sup_or_inf(f, radius_cap, 1024) <= two_delta_target:
                return f
            t *= 0.995
    raise GenerationFailed(f"seed {seed}: no draw met two_delta <= {two_delta_target:g}, eta <= {eta_max:g}")


def conclusion_checks(f, kind, params: CriterionParams, grid: GridSpec, univalence_n: int = 1024) -> list:
    """Grid checks of the property each criterion guarantees."""
    kind = CriterionKind(kind)
    a, b = params.alpha, params.beta
    if kind is CriterionKind.NEHARI_UNIVALENCE:
        return [univalence_grid_check(f, grid.radius, univalence_n)]
    if kind is CriterionKind.CHIANG_SST:
        return [
            max_abs_arg(f, ExprKind.ZFPRIME_OVER_F, params, grid, a * math.pi / 2),
            max_abs_arg(f, ExprKind.F_OVER_Z, params, grid, a * math.pi / 2),
        ]
    if kind is CriterionKind.CHIANG_CONVEXITY:
        res = evaluate_criterion(kind, params)
        order = res.convexity_order.order if res.convexity_order and not res.convexity_order.boundary else 0.0
        return [min_real(f, ExprKind.ONE_PLUS_ZFPP_OVER_FP, params, grid, order)]
    if kind is CriterionKind.ARG_FPRIME_BETA:
        return [max_abs_arg(f, ExprKind.F_PRIME_MINUS_BETA, params, grid, a * math.pi / 2)]
    if kind is CriterionKind.UNIVALENCE_BETA0:
        return [
            max_abs_arg(f, ExprKind.F_PRIME_MINUS_BETA, replace(params, beta=0.0), grid, a * math.pi / 2),
            univalence_grid_check(f, grid.radius, univalence_n),
        ]
    if kind is CriterionKind.BAZILEVIC:
        return [max_abs_arg(f, ExprKind.BAZILEVIC_EXPR, params, grid, b * math.pi / 2)]
    if kind is CriterionKind.R_ALPHA:
        return [min_real(f, ExprKind.R_ALPHA_EXPR, params, grid)]
    if kind is CriterionKind.NONLINEAR_ST_CV:
        return [min_real(f, ExprKind.NONLINEAR_EXPR, params, grid)]
    if kind is CriterionKind.ST_CONV_COMBO:
        return [min_real(f, ExprKind.COMBO_EXPR, params, grid)]
    return [max_abs_arg(f, ExprKind.P_GAMMA_EXPR, params, grid, math.pi / 2)]


@dataclass
class SweepRecord:
    seed: int
    eta: float
    delta: float
    criterion_satisfied: bool
    criterion_applicable: bool
    verifier_passed: Optional[bool]
    reports: list
    diagnostics: tuple
    coeffs: Optional[np.ndarray] = None

    @property
    def outcome(self) -> str:
        if not self.criterion_satisfied:
            return "criterion_fail"
        return "pass" if self.verifier_passed else "counterexample"


@dataclass
class SweepSummary:
    kind: CriterionKind
    params: CriterionParams
    mode: PGammaMode
    budget_factor: float
    records: list

    def count(self, outcome: str) -> int:
        return sum(r.outcome == outcome for r in self.records)

    @property
    def counterexamples(self) -> list:
        return [r for r in self.records if r.outcome == "counterexample"]


def soundness_sweep(
    kind,
    params: CriterionParams,
    seeds,
    budget_factor: float = 0.9,
    mode=PGammaMode.REPAIRED,
    grid: Optional[GridSpec] = None,
    n_coeffs: int = 8,
    radius_cap: float = 0.999,
    order: int = DEFAULT_ORDER,
    eta_fraction: float = 0.9,
) -> SweepSummary:
    """Falsification sweep of "criterion satisfied implies conclusion holds".

    For each seed: draw ``eta_max`` below ``eta_fraction`` times the largest
    admissible ``eta``, generate ``f`` with ``sup|S| <= 2 budget_factor
    delta*(eta_max)`` and ``|a_2| <= eta_max``, re-measure ``(eta, delta)`` from
    ``f``, evaluate the criterion there and, when it is satisfied, run the
    conclusion checks.  Since ``delta*`` is nonincreasing in ``eta``, a budget
    factor below 1 keeps the measured point feasible.
    """
    kind = CriterionKind(kind)
    mode = PGammaMode(mode)
    grid = grid or GridSpec(radius=0.99)
    eta_cap = eta_limit(kind, params)
    records = []
    for seed in seeds:
        rng = np.random.default_rng([int(seed), 0x5EED])
        eta_max = float(rng.uniform(0.0, eta_fraction * eta_cap))
        d_star = delta_threshold(kind, replace(params, eta=eta_max))
        target = 2.0 * budget_factor * (d_star if d_star is not None else 0.0)
        f = random_budgeted_function(int(seed), n_coeffs, target, eta_max, radius_cap, order)
        eta = abs(f[2])
        delta = sup_schwarzian(f, radius_cap).delta
        measured = replace(params, eta=eta, delta=delta)
        res = evaluate_criterion(kind, measured, mode)
        reports, passed = [], None
        if res.satisfied:
            reports = conclusion_checks(f, kind, measured, grid)
            passed = all(r.passed for r in reports)
        records.append(
            SweepRecord(
                seed=int(seed),
                eta=eta,
                delta=delta,
                criterion_satisfied=res.satisfied,
                criterion_applicable=res.applicable,
                verifier_passed=passed,
                reports=reports,
                diagnostics=res.diagnostics,
                coeffs=np.array(f.coeffs[: n_coeffs + 1]),
            )
        )
    return SweepSummary(kind=kind, params=params, mode=mode, budget_factor=budget_factor, records=records)
