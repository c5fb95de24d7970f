"""Sufficient conditions on ``(eta, delta)`` for geometric properties of ``f``.

Every criterion takes ``eta = |a_2|`` and ``delta = sup |S(f, z)| / 2`` and,
depending on the class, parameters ``alpha``, ``beta``, ``gamma``.  The
building blocks shared by almost all of them are

    E = exp(delta / 2)
    P = delta E / 2                         bound on |u/z - 1|
    Q = eta + (1 + eta) delta E / 2         bound on |cu + v - 1|
    M = eta + (1 + eta) delta E             bound on |cu' + v'|
    D = 2 - 2 eta - (1 + eta) delta E       twice the lower bound on |cu + v|

and an argument bound ``|arg w| <= asin r`` whenever ``|w - 1| <= r < 1``.

Nothing here raises on out-of-range input: an asin argument outside
``[-1, 1]``, a non-positive denominator, a parameter outside its class range
or a failed precondition makes the result inapplicable, with the reason in
``diagnostics``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Optional

from .errors import DomainError

HALF_PI = math.pi / 2
ASIN_SLACK = 1e-14
DENOM_FLOOR = 1e-14
BRACKET_HI = 8.0
BISECT_ITER = 200


class CriterionKind(str, enum.Enum):
    NEHARI_UNIVALENCE = "nehari_univalence"
    CHIANG_SST = "chiang_sst"
    CHIANG_CONVEXITY = "chiang_convexity"
    ARG_FPRIME_BETA = "arg_fprime_beta"
    UNIVALENCE_BETA0 = "univalence_beta0"
    BAZILEVIC = "bazilevic"
    R_ALPHA = "r_alpha"
    NONLINEAR_ST_CV = "nonlinear_st_cv"
    ST_CONV_COMBO = "st_conv_combo"
    P_GAMMA = "p_gamma"

    def __str__(self):
        return self.value


class PGammaMode(str, enum.Enum):
    LITERAL = "literal"
    REPAIRED = "repaired"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class CriterionParams:
    eta: float
    delta: float = 0.0
    alpha: float = 1.0
    beta: float = 0.0
    gamma: float = 0.0

    def __post_init__(self):
        for name in ("eta", "delta", "alpha", "beta", "gamma"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if self.eta < 0:
            raise DomainError(f"eta must be >= 0, got {self.eta}")
        if self.delta < 0:
            raise DomainError(f"delta must be >= 0, got {self.delta}")

    def with_delta(self, delta: float) -> "CriterionParams":
        return replace(self, delta=delta)


@dataclass(frozen=True)
class ConvexityOrder:
    order: float
    boundary: bool = False
    diagnostics: tuple = ()


@dataclass(frozen=True)
class CriterionResult:
    kind: CriterionKind
    params: CriterionParams
    applicable: bool
    lhs: Optional[float]
    rhs: float
    satisfied: bool
    strict: bool
    conclusion: str
    diagnostics: tuple = ()
    mode: Optional[PGammaMode] = None
    convexity_order: Optional[ConvexityOrder] = None


@dataclass(frozen=True)
class ThresholdResult:
    delta_star: Optional[float]
    saturated: bool = False
    diagnostics: tuple = field(default_factory=tuple)


class _Guard:
    """Collects domain violations while a criterion is evaluated."""

    def __init__(self):
        self.diagnostics: list = []
        self.ok = True

    def asin(self, x: float, label: str) -> float:
        if abs(x) > 1.0 + ASIN_SLACK or math.isnan(x):
            self.ok = False
            self.diagnostics.append(f"asin domain: {label} = {x:.12g} outside [-1, 1]")
            return math.nan
        return math.asin(max(-1.0, min(1.0, x)))

    def positive(self, x: float, label: str) -> float:
        if not x >= DENOM_FLOOR:
            self.ok = False
            self.diagnostics.append(f"non-positive denominator: {label} = {x:.12g}")
            return math.nan
        return x

    def require(self, cond: bool, message: str) -> None:
        if not cond:
            self.ok = False
            self.diagnostics.append(message)


def _blocks(eta: float, delta: float):
    e = math.exp(delta / 2.0)
    x = (1.0 + eta) * delta * e
    return {
        "P": 0.5 * delta * e,
        "Q": eta + 0.5 * x,
        "M": eta + x,
        "D": 2.0 - 2.0 * eta - x,
        "E": e,
    }


# Each evaluator returns (lhs, rhs, strict, conclusion) and records problems in
# two guards: ``pre`` for parameter ranges and the delta = 0 precondition,
# ``g`` for the main inequality at the given delta.


def _nehari(p, pre, g, mode):
    return 2.0 * p.delta, math.pi**2 / 2, False, "f in S (univalent)"


def _chiang_sst(p, pre, g, mode):
    a = p.alpha
    pre.require(0.0 < a <= 1.0, f"parameter range: need 0 < alpha <= 1, got alpha = {a}")
    if pre.ok:
        pre.require(p.eta < math.sin(a * HALF_PI), "precondition fails: eta >= sin(alpha pi/2)")
    b = _blocks(p.eta, p.delta)
    lhs = g.asin(b["P"], "delta e^{delta/2}/2") + g.asin(b["Q"], "eta + (1+eta) delta e^{delta/2}/2")
    return lhs, a * HALF_PI, False, f"f in SST({a:g}); |arg(f(z)/z)| <= {a:g} pi/2"


def _chiang_convexity(p, pre, g, mode):
    pre.require(p.eta < 1.0 / 3.0, "precondition fails: eta >= 1/3")
    b = _blocks(p.eta, p.delta)
    lhs = 6.0 * p.eta + 5.0 * (1.0 + p.eta) * p.delta * b["E"]
    return lhs, 2.0, True, "f in CV(order)"


def _arg_fprime_beta(p, pre, g, mode):
    a, beta, eta = p.alpha, p.beta, p.eta
    pre.require(0.0 < a <= 1.0, f"parameter range: need 0 < alpha <= 1, got alpha = {a}")
    pre.require(0.0 <= beta < 1.0, f"parameter range: need 0 <= beta < 1, got beta = {beta}")
    if pre.ok:
        at0 = pre.asin(beta * (1 + eta) ** 2, "beta (1+eta)^2") + 2 * pre.asin(eta, "eta")
        if pre.ok:
            pre.require(at0 < a * HALF_PI, "precondition fails: asin(beta(1+eta)^2) + 2 asin(eta) >= alpha pi/2")
    b = _blocks(eta, p.delta)
    lhs = g.asin(beta * (1 + eta) ** 2 * math.exp(p.delta), "beta (1+eta)^2 e^delta") + 2 * g.asin(
        b["Q"], "eta + (1+eta) delta e^{delta/2}/2"
    )
    return lhs, a * HALF_PI, False, f"|arg(f'(z) - {beta:g})| <= {a:g} pi/2"


def _univalence_beta0(p, pre, g, mode):
    a = p.alpha
    pre.require(0.0 < a <= 1.0, f"parameter range: need 0 < alpha <= 1, got alpha = {a}")
    if pre.ok:
        pre.require(p.eta < math.sin(a * math.pi / 4), "precondition fails: eta >= sin(alpha pi/4)")
    b = _blocks(p.eta, p.delta)
    return b["Q"], math.sin(a * math.pi / 4), False, f"|arg f'(z)| <= {a:g} pi/2; f in S"


def _bazilevic(p, pre, g, mode):
    a, beta = p.alpha, p.beta
    pre.require(a > 0.0, f"parameter range: need alpha > 0, got alpha = {a}")
    pre.require(0.0 < beta <= 1.0, f"parameter range: need 0 < beta <= 1, got beta = {beta}")
    if pre.ok:
        pre.require(
            p.eta < math.sin(beta * math.pi / (2 * (1 + a))),
            "precondition fails: eta >= sin(beta pi / (2(1+alpha)))",
        )
    b = _blocks(p.eta, p.delta)
    lhs = abs(1 - a) * g.asin(b["P"], "delta e^{delta/2}/2") + (1 + a) * g.asin(
        b["Q"], "eta + (1+eta) delta e^{delta/2}/2"
    )
    return lhs, beta * HALF_PI, False, f"f strongly {a:g}-Bazilevic of order {beta:g}"


def _r_alpha(p, pre, g, mode):
    a, eta = p.alpha, p.eta
    pre.require(a >= 0.0, f"parameter range: need alpha >= 0, got alpha = {a}")
    if pre.ok:
        pre.positive(1 - eta, "1 - eta")
    if pre.ok:
        at0 = 2 * pre.asin(eta, "eta") + pre.asin(2 * eta * a / (1 - eta), "2 eta alpha/(1-eta)")
        if pre.ok:
            pre.require(at0 < HALF_PI, "precondition fails: 2 asin(eta) + asin(2 eta alpha/(1-eta)) >= pi/2")
    b = _blocks(eta, p.delta)
    lhs = 2 * g.asin(b["Q"], "eta + (1+eta) delta e^{delta/2}/2")
    d = g.positive(b["D"], "2 - 2eta - (1+eta) delta e^{delta/2}")
    if g.ok:
        lhs += g.asin(4 * a * b["M"] / d, "4 alpha (eta + (1+eta) delta e^{delta/2}) / D")
    return lhs, HALF_PI, False, f"f in R({a:g}): Re(f' + {a:g} z f'') > 0"


def _three_term_pre(pre, eta, w1, w3):
    """``w1 asin(eta) + w3 asin(2 eta / (1 - eta)) < pi/2``."""
    if pre.ok:
        pre.positive(1 - eta, "1 - eta")
    if pre.ok:
        at0 = w1 * pre.asin(eta, "eta")
        if w3:
            at0 += w3 * pre.asin(2 * eta / (1 - eta), "2 eta/(1-eta)")
        if pre.ok:
            pre.require(at0 < HALF_PI, "precondition fails: value at delta = 0 is >= pi/2")


def _three_term_lhs(g, b, w12, w3):
    lhs = w12 * (g.asin(b["P"], "delta e^{delta/2}/2") + g.asin(b["Q"], "eta + (1+eta) delta e^{delta/2}/2"))
    if w3:
        d = g.positive(b["D"], "2 - 2eta - (1+eta) delta e^{delta/2}")
        if g.ok:
            lhs += w3 * g.asin(4 * b["M"] / d, "4 (eta + (1+eta) delta e^{delta/2}) / D")
    return lhs


def _nonlinear_st_cv(p, pre, g, mode):
    a, beta = abs(p.alpha), abs(p.beta)
    pre.require(p.eta <= 1.0 / 3.0, "precondition fails: eta > 1/3")
    _three_term_pre(pre, p.eta, a, beta)
    lhs = _three_term_lhs(g, _blocks(p.eta, p.delta), a, beta)
    return lhs, HALF_PI, False, f"Re((zf'/f)^{p.alpha:g} (1 + zf''/f')^{p.beta:g}) > 0"


def _st_conv_combo(p, pre, g, mode):
    beta = p.beta
    pre.require(beta >= 0.0, f"parameter range: need beta >= 0, got beta = {beta}")
    _three_term_pre(pre, p.eta, 1.0, beta)
    lhs = _three_term_lhs(g, _blocks(p.eta, p.delta), 1.0, beta)
    return lhs, HALF_PI, False, f"Re(zf'/f + {beta:g} z^2 f''/f) > 0"


def _p_gamma(p, pre, g, mode):
    gam, eta = p.gamma, p.eta
    pre.require(0.0 <= gam < 1.0, f"parameter range: need 0 <= gamma < 1, got gamma = {gam}")
    b = _blocks(eta, p.delta)
    if mode is PGammaMode.LITERAL:
        g.diagnostics.append("mode=literal")
        if pre.ok:
            pre.positive(1 - eta, "1 - eta")
        if pre.ok:
            at0 = pre.asin(gam / ((1 - gam) * (eta - 1)), "gamma/((1-gamma)(eta-1))") + pre.asin(eta, "eta")
            if pre.ok:
                pre.require(at0 < HALF_PI, "precondition fails: asin(gamma/((1-gamma)(eta-1))) + asin(eta) >= pi/2")
        inner = 1.0 / (1.0 - 2.0 * b["E"])
        # 1 - 2e^{delta/2} <= -1 for every delta >= 0
        g.ok = False
        g.diagnostics.append(
            f"literal factor 1/(1-2e^(delta/2)) = {inner:.12g} is negative; "
            "the bound |z/u| <= 1/(1-2e^(delta/2)) cannot hold, criterion flagged"
        )
        lhs = math.asin(b["P"]) if b["P"] <= 1 else math.nan
        q = b["Q"]
        lhs += math.asin(q) if q <= 1 else math.nan
        third = 2 * gam / (1 - gam) / b["D"] * inner if b["D"] > 0 and gam < 1 else math.nan
        lhs += math.asin(third) if abs(third) <= 1 else math.nan
        return lhs, HALF_PI, False, f"f in P({gam:g})"
    g.diagnostics.append("mode=repaired")
    if pre.ok:
        pre.positive(1 - eta, "1 - eta")
    if pre.ok:
        at0 = pre.asin(eta, "eta") + pre.asin(gam / ((1 - gam) * (1 - eta)), "gamma/((1-gamma)(1-eta))")
        if pre.ok:
            pre.require(at0 < HALF_PI, "precondition fails: asin(eta) + asin(gamma/((1-gamma)(1-eta))) >= pi/2")
    lhs = g.asin(b["P"], "delta e^{delta/2}/2") + g.asin(b["Q"], "eta + (1+eta) delta e^{delta/2}/2")
    one_minus_p = g.positive(1 - b["P"], "1 - delta e^{delta/2}/2")
    d = g.positive(b["D"], "2 - 2eta - (1+eta) delta e^{delta/2}")
    if g.ok:
        lhs += g.asin(2 * gam / (1 - gam) / d / one_minus_p, "2gamma/((1-gamma) D (1 - delta e^{delta/2}/2))")
    return lhs, HALF_PI, False, f"f in P({gam:g})"


_EVALUATORS = {
    CriterionKind.NEHARI_UNIVALENCE: _nehari,
    CriterionKind.CHIANG_SST: _chiang_sst,
    CriterionKind.CHIANG_CONVEXITY: _chiang_convexity,
    CriterionKind.ARG_FPRIME_BETA: _arg_fprime_beta,
    CriterionKind.UNIVALENCE_BETA0: _univalence_beta0,
    CriterionKind.BAZILEVIC: _bazilevic,
    CriterionKind.R_ALPHA: _r_alpha,
    CriterionKind.NONLINEAR_ST_CV: _nonlinear_st_cv,
    CriterionKind.ST_CONV_COMBO: _st_conv_combo,
    CriterionKind.P_GAMMA: _p_gamma,
}


def evaluate_criterion(kind, p: CriterionParams, mode=PGammaMode.REPAIRED, slack: float = 0.0) -> CriterionResult:
    """Evaluate one criterion at ``p``.

    ``mode`` only matters for ``p_gamma``: ``literal`` evaluates the bound
    exactly as displayed (always flagged, never satisfied); ``repaired``
    replaces its third term with one built from ``|z/u| <= 1/(1 - P)``.

    ``slack`` widens the final comparison to ``lhs <= rhs + slack`` for
    measured inputs whose last digits are noise; a result decided inside the
    slack band carries a ``boundary`` diagnostic.  Threshold solving always
    uses ``slack = 0``.
    """
    kind = CriterionKind(kind)
    mode = PGammaMode(mode)
    pre, g = _Guard(), _Guard()
    lhs, rhs, strict, conclusion = _EVALUATORS[kind](p, pre, g, mode)
    applicable = pre.ok and g.ok
    if lhs is not None and math.isnan(lhs):
        lhs = None
    diagnostics = pre.diagnostics + g.diagnostics
    if applicable and lhs is not None:
        satisfied = lhs < rhs if strict else lhs <= rhs
        if slack > 0 and abs(lhs - rhs) <= slack:
            satisfied = True
            diagnostics.append(f"boundary: |lhs - rhs| = {abs(lhs - rhs):.3e} <= {slack:g}")
    else:
        satisfied = False
    order = None
    if kind is CriterionKind.CHIANG_CONVEXITY:
        order = convexity_order(p.eta, p.delta)
        if order is not None:
            conclusion = f"f in CV({order.order:.12g})"
    return CriterionResult(
        kind=kind,
        params=p,
        applicable=applicable,
        lhs=lhs,
        rhs=rhs,
        satisfied=satisfied,
        strict=strict,
        conclusion=conclusion,
        diagnostics=tuple(diagnostics),
        mode=mode if kind is CriterionKind.P_GAMMA else None,
        convexity_order=order,
    )


def convexity_order(eta: float, delta: float) -> Optional[ConvexityOrder]:
    """Order of convexity ``(2 - 6 eta - 5X) / (2 - 2 eta - X)``, ``X = (1+eta) delta e^{delta/2}``.

    ``None`` unless ``6 eta + 5X < 2``.  At ``eta = delta = 0`` the quotient is
    exactly 1, returned with a boundary flag since an order must be < 1.
    """
    x = (1.0 + eta) * delta * math.exp(delta / 2.0)
    if not 6.0 * eta + 5.0 * x < 2.0:
        return None
    order = (2.0 - 6.0 * eta - 5.0 * x) / (2.0 - 2.0 * eta - x)
    if order >= 1.0:
        return ConvexityOrder(order=order, boundary=True, diagnostics=("boundary: order must be < 1",))
    return ConvexityOrder(order=order)


def _feasible(kind, p, mode) -> bool:
    return evaluate_criterion(kind, p, mode).satisfied


def solve_threshold(
    kind,
    p: CriterionParams,
    tol: float = 1e-12,
    mode=PGammaMode.REPAIRED,
    hi: float = BRACKET_HI,
) -> ThresholdResult:
    """Supremum of ``{delta >= 0 : criterion satisfied}`` by bisection on ``[0, hi]``.

    The left-hand sides are nondecreasing in ``delta``, so the feasible set is
    an interval starting at 0.
    """
    kind = CriterionKind(kind)
    mode = PGammaMode(mode)
    if tol <= 0:
        raise DomainError("tol must be > 0")
    if kind is CriterionKind.P_GAMMA and mode is PGammaMode.LITERAL:
        raise DomainError("threshold solving for p_gamma is only offered in repaired mode")
    at0 = evaluate_criterion(kind, p.with_delta(0.0), mode)
    if not at0.satisfied:
        return ThresholdResult(None, diagnostics=at0.diagnostics or ("infeasible at delta = 0",))
    if _feasible(kind, p.with_delta(hi), mode):
        return ThresholdResult(hi, saturated=True, diagnostics=(f"saturated: feasible at bracket end delta = {hi:g}",))
    lo = 0.0
    for _ in range(BISECT_ITER):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _feasible(kind, p.with_delta(mid), mode):
            lo = mid
        else:
            hi = mid
    return ThresholdResult(lo)


def delta_threshold(kind, p: CriterionParams, tol: float = 1e-12, mode=PGammaMode.REPAIRED) -> Optional[float]:
    """Largest admissible ``delta`` for ``kind`` at ``p`` (``p.delta`` is ignored).

    Returns ``None`` when the criterion already fails at ``delta = 0``.
    """
    return solve_threshold(kind, p, tol, mode).delta_star


def eta_limit(kind, p: CriterionParams, tol: float = 1e-12, mode=PGammaMode.REPAIRED) -> float:
    """Supremum of ``eta`` in ``[0, 1]`` for which the criterion holds at ``delta = 0``."""
    if not evaluate_criterion(kind, replace(p, eta=0.0, delta=0.0), mode).satisfied:
        return 0.0
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if evaluate_criterion(kind, replace(p, eta=mid, delta=0.0), mode).satisfied:
            lo = mid
        else:
            hi = mid
    return lo


def combo_trig_condition(eta: float, beta: float) -> float:
    """``asin(eta) + asin(2 beta eta / (1 - eta))``; the combo precondition asks for < pi/2."""
    return math.asin(eta) + math.asin(2 * beta * eta / (1 - eta))


def combo_closed_form(eta: float, beta: float) -> float:
    """``eta (1 + sqrt((1-eta)^2 - 4 beta^2 eta^2) + 2 beta sqrt(1 - eta^2))``; equivalent condition is < 1."""
    return eta * (1 + math.sqrt((1 - eta) ** 2 - 4 * beta**2 * eta**2) + 2 * beta * math.sqrt(1 - eta**2))


def combo_octic(eta: float) -> float:
    """Octic whose root in (0, 1) is the ``beta = 1`` transition point."""
    return eta**8 - 4 * eta**7 + 12 * eta**6 - 12 * eta**5 + 6 * eta**4 + 20 * eta**3 - 4 * eta**2 - 4 * eta + 1


def eta_root_combo(beta: float, tol: float = 1e-15) -> float:
    """Largest ``eta`` with ``asin(eta) + asin(2 beta eta/(1-eta)) < pi/2``.

    For ``beta = 0`` the condition reduces to ``asin(eta) < pi/2`` and the
    boundary is ``eta = 1``.
    """
    if beta < 0:
        raise DomainError(f"beta must be >= 0, got {beta}")
    if beta == 0:
        return 1.0
    lo, hi = 0.0, 1.0 / (1.0 + 2.0 * beta)  # second asin argument reaches 1 at hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if combo_trig_condition(mid, beta) < HALF_PI:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
