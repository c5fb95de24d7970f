"""Batch command-line interface.

Subcommands::

    schwarzcrit check     --spec SPEC --kind K[,K...]   measure eta, delta; evaluate and verify criteria
    schwarzcrit threshold --kind K --eta-grid A:B:S     curve delta*(eta)
    schwarzcrit ode       --spec SPEC                   fundamental solutions and Gronwall bounds
    schwarzcrit sweep     --kind K --seeds N            falsification sweep on random functions
    schwarzcrit example                                 built-in fixtures and known constants

``SPEC`` is inline JSON or a path to a JSON file::

    {"builtin": "nehari"}
    {"builtin": "moebius", "c": [0.3, 0.0]}
    {"builtin": "koebe"}
    {"coefficients": [[0, 0], [1, 0], [0.1, 0]]}
    {"random": {"seed": 7, "n_coeffs": 8, "two_delta": 0.5, "eta_max": 0.1}}

Exit codes: 0 success/consistent, 1 counterexample or failed check, 2 usage or spec error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .criteria import (
    CriterionKind,
    CriterionParams,
    PGammaMode,
    delta_threshold,
    eta_root_combo,
    evaluate_criterion,
    solve_threshold,
)
from .errors import GenerationFailed, SchwarzCritError
from .functions import NEHARI_TWO_DELTA, koebe, moebius, nehari
from .grid import GridSpec
from .ode import gronwall_bounds, reconstruct_f, solve_uv_series
from .schwarzian import schwarzian_series, sup_schwarzian
from .series import PowerSeries
from .verifier import conclusion_checks, random_budgeted_function, soundness_sweep

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SIG = 12


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class FunctionSpec:
    """User-facing description of a normalized analytic function."""

    variant: str  # nehari | moebius | koebe | coefficients | random
    c: complex = 0j
    coefficients: tuple = ()
    seed: int = 0
    n_coeffs: int = 8
    two_delta: float = 0.5
    eta_max: float = 0.1

    @classmethod
    def from_json(cls, doc) -> "FunctionSpec":
        if not isinstance(doc, dict):
            raise UsageError("function spec must be a JSON object")
        if "builtin" in doc:
            name = doc["builtin"]
            if name == "moebius":
                return cls("moebius", c=_complex(doc.get("c", [0.0, 0.0])))
            if name in ("nehari", "koebe"):
                return cls(name)
            raise UsageError(f"unknown builtin {name!r}")
        if "coefficients" in doc:
            coeffs = tuple(_complex(c) for c in doc["coefficients"])
            if len(coeffs) < 2 or abs(coeffs[0]) > 1e-12 or abs(coeffs[1] - 1) > 1e-12:
                raise UsageError("coefficients must be normalized: c0 = 0, c1 = 1")
            return cls("coefficients", coefficients=coeffs)
        if "random" in doc:
            r = doc["random"]
            try:
                return cls(
                    "random",
                    seed=int(r["seed"]),
                    n_coeffs=int(r.get("n_coeffs", 8)),
                    two_delta=float(r["two_delta"]),
                    eta_max=float(r["eta_max"]),
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise UsageError(f"bad random spec: {exc}") from exc
        raise UsageError("spec needs one of 'builtin', 'coefficients', 'random'")

    def build(self, order: int) -> PowerSeries:
        if self.variant == "nehari":
            return nehari(order)
        if self.variant == "moebius":
            return moebius(self.c, order)
        if self.variant == "koebe":
            return koebe(order)
        if self.variant == "coefficients":
            if len(self.coefficients) > order + 1:
                raise UsageError(f"{len(self.coefficients)} coefficients exceed truncation order {order}")
            return PowerSeries(self.coefficients).padded(order)
        return random_budgeted_function(self.seed, self.n_coeffs, self.two_delta, self.eta_max, order=order)

    def label(self) -> str:
        if self.variant == "moebius":
            return f"moebius(c={_fmt_complex(self.c)})"
        if self.variant == "random":
            return f"random(seed={self.seed})"
        return self.variant


@dataclass(frozen=True)
class RunConfig:
    truncation_order: int = 64
    radius_cap: float = 0.999
    radius: float = 0.99
    radial_steps: int = 32
    angular_steps: int = 256
    univalence_n: int = 1024
    boundary_tol: float = 1e-9
    threshold_tol: float = 1e-12
    output_format: str = "csv"
    p_gamma_mode: str = "both"

    def __post_init__(self):
        if not (0 < self.radius_cap < 1) or not (0 < self.radius < 1):
            raise UsageError("radii must lie in (0, 1)")
        if self.boundary_tol <= 0 or self.threshold_tol <= 0:
            raise UsageError("tolerances must be > 0")
        if self.truncation_order < 4:
            raise UsageError("truncation order must be >= 4")

    @property
    def grid(self) -> GridSpec:
        return GridSpec(self.radius, self.radial_steps, self.angular_steps)

    def modes(self):
        if self.p_gamma_mode == "both":
            return [PGammaMode.REPAIRED, PGammaMode.LITERAL]
        return [PGammaMode(self.p_gamma_mode)]


# ---------------------------------------------------------------- formatting


def _complex(x) -> complex:
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return complex(float(x[0]), float(x[1]))
    if isinstance(x, (int, float)):
        return complex(x)
    raise UsageError(f"complex numbers are written [re, im], got {x!r}")


def _num(x: float) -> float:
    return float(f"{x:.{SIG}g}") + 0.0  # + 0.0 drops the sign of -0.0


def _fmt_real(x: float) -> str:
    return f"{_num(x):.{SIG}g}"


def _fmt_complex(z: complex) -> str:
    return f"{_num(z.real):.{SIG}g}{_num(z.imag):+.{SIG}g}j"


def _jsonable(v):
    if v is None or isinstance(v, (bool, str, int)):
        return v
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return _num(v) if math.isfinite(v) else str(v)
    if isinstance(v, (complex, np.complexfloating)):
        return [_num(v.real), _num(v.imag)]
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return str(v)


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return _fmt_real(float(v))
    if isinstance(v, (complex, np.complexfloating)):
        return _fmt_complex(complex(v))
    if isinstance(v, (list, tuple)):
        return "; ".join(_csv_cell(x) for x in v)
    return str(v)


def render(command: str, rows: list, config: RunConfig, extra: Optional[dict] = None) -> str:
    """CSV (comment header + table) or JSON; both carry version and config."""
    meta = {"tool": "schwarzcrit", "version": __version__, "command": command, "config": asdict(config)}
    if config.output_format == "json":
        doc = {"meta": meta, "extras": extra or {}, "rows": rows}
        return json.dumps(_jsonable(doc), indent=2) + "\n"
    buf = io.StringIO()
    buf.write(f"# schwarzcrit {__version__} {command}\n")
    buf.write(f"# config {json.dumps(_jsonable(asdict(config)))}\n")
    for key, val in (extra or {}).items():
        buf.write(f"# {key} {json.dumps(_jsonable(val))}\n")
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _csv_cell(v) for k, v in row.items()})
    return buf.getvalue()


# ---------------------------------------------------------------- commands


def _report_cells(reports) -> dict:
    return {
        "verifier_passed": all(r.passed for r in reports) if reports else None,
        "verifier_quantity": [r.quantity for r in reports],
        "verifier_extremum": [r.extremum for r in reports],
        "verifier_threshold": [r.threshold for r in reports],
        "verifier_witness": [list(r.witness) if r.witness else None for r in reports],
    }


def cmd_check(spec: FunctionSpec, kinds, params: CriterionParams, config: RunConfig):
    """Measure ``(eta, delta)`` of ``spec``, evaluate each criterion and run its verifier.

    Returns ``(rows, extra, exit_code)``.  The exit code is 0 when every
    criterion is applicable and consistent (satisfied implies verified);
    literal-mode ``p_gamma`` rows are flagged by design and do not count.
    """
    f = spec.build(config.truncation_order)
    sup = sup_schwarzian(f, config.radius_cap)
    eta, delta = abs(f[2]), sup.delta
    measured = replace(params, eta=eta, delta=delta)
    rows, ok = [], True
    for kind in kinds:
        kind = CriterionKind(kind)
        modes = config.modes() if kind is CriterionKind.P_GAMMA else [PGammaMode.REPAIRED]
        reports = conclusion_checks(f, kind, measured, config.grid, config.univalence_n)
        verified = all(r.passed for r in reports)
        for mode in modes:
            res = evaluate_criterion(kind, measured, mode, slack=config.boundary_tol)
            consistent = (not res.satisfied) or verified
            flagged = kind is CriterionKind.P_GAMMA and mode is PGammaMode.LITERAL
            if not flagged:
                ok = ok and res.applicable and consistent
            rows.append(
                {
                    "function": spec.label(),
                    "kind": kind.value,
                    "mode": res.mode.value if res.mode else "",
                    "eta": eta,
                    "delta": delta,
                    "alpha": params.alpha,
                    "beta": params.beta,
                    "gamma": params.gamma,
                    "applicable": res.applicable,
                    "lhs": res.lhs,
                    "rhs": res.rhs,
                    "satisfied": res.satisfied,
                    "conclusion": res.conclusion,
                    **_report_cells(reports),
                    "consistent": consistent,
                    "diagnostics": list(res.diagnostics),
                }
            )
    extra = {"sup_schwarzian": {"two_delta": sup.two_delta, "argmax": sup.argmax, "diagnostics": list(sup.diagnostics)}}
    return rows, extra, EXIT_OK if ok else EXIT_FAIL


def parse_eta_grid(text: str) -> list:
    """``start:stop:step`` (stop inclusive), a comma list, or a single value."""
    try:
        if ":" in text:
            start, stop, step = (float(x) for x in text.split(":"))
            if step <= 0 or stop < start:
                raise UsageError(f"bad eta grid {text!r}")
            n = int(math.floor((stop - start) / step + 1e-9)) + 1
            return [round(start + i * step, 15) for i in range(n)]
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad eta grid {text!r}: {exc}") from exc


def cmd_threshold(kinds, params: CriterionParams, etas, config: RunConfig):
    rows = []
    for kind in kinds:
        kind = CriterionKind(kind)
        # literal-mode p_gamma has no threshold; only the repaired bound is solved
        for eta in etas:
            res = solve_threshold(kind, replace(params, eta=eta, delta=0.0), config.threshold_tol)
            rows.append(
                {
                    "kind": kind.value,
                    "mode": PGammaMode.REPAIRED.value if kind is CriterionKind.P_GAMMA else "",
                    "eta": eta,
                    "alpha": params.alpha,
                    "beta": params.beta,
                    "gamma": params.gamma,
                    "delta_star": res.delta_star,
                    "applicable": res.delta_star is not None,
                    "saturated": res.saturated,
                    "diagnostics": list(res.diagnostics),
                }
            )
    return rows, {}, EXIT_OK


def _closed_form_uv(spec: FunctionSpec, order: int):
    """Known ``u, v`` for builtins with constant Schwarzian."""
    k = np.arange(order + 1)
    if spec.variant == "moebius":
        return PowerSeries.identity(order), PowerSeries.constant(1.0, order)
    if spec.variant == "nehari":
        w = math.pi / 2
        fact = np.array([math.factorial(int(j)) for j in k], dtype=float)
        sign = np.array([(-1) ** (j // 2) for j in k], dtype=float)
        u = np.where(k % 2 == 1, sign * w ** (k - 1.0) / fact, 0.0)  # sin(w z)/w
        v = np.where(k % 2 == 0, sign * w**k / fact, 0.0)  # cos(w z)
        return PowerSeries(u), PowerSeries(v)
    return None


def cmd_ode(spec: FunctionSpec, config: RunConfig):
    f = spec.build(config.truncation_order)
    if not f.is_normalized():
        raise UsageError("function must be normalized (c0 = 0, c1 = 1)")
    A = schwarzian_series(f) * 0.5
    sol = solve_uv_series(A, f.order - 1, c=-f[2])
    g = reconstruct_f(sol)
    n = g.order + 1
    recon = float(np.max(np.abs(g.coeffs - f.coeffs[:n])))
    sup = sup_schwarzian(f, config.radius_cap)
    delta, eta = sup.delta, abs(f[2])
    report = gronwall_bounds(sol, delta, eta, GridSpec(config.radius_cap, config.radial_steps, config.angular_steps))
    rows = [
        {
            "bound": b.name,
            "lhs_max": b.lhs_max,
            "rhs": b.rhs,
            "argmax": b.argmax,
            "holds": b.holds,
            "equality_boundary": b.equality_boundary,
        }
        for b in report.bounds
    ]
    summary = {
        "function": spec.label(),
        "c": sol.c,
        "eta": eta,
        "delta": delta,
        "wronskian_residual": sol.wronskian_residual,
        "reconstruction_residual": recon,
        "all_hold": report.all_hold,
        "u_head": list(sol.u.coeffs[:8]),
        "v_head": list(sol.v.coeffs[:8]),
        "notes": list(report.notes),
    }
    closed = _closed_form_uv(spec, sol.u.order)
    if closed is not None:
        summary["closed_form_residual"] = float(
            max(np.max(np.abs(sol.u.coeffs - closed[0].coeffs)), np.max(np.abs(sol.v.coeffs - closed[1].coeffs)))
        )
    ok = sol.wronskian_residual < 1e-9 and recon < 1e-8 and report.all_hold
    return rows, {"summary": summary}, EXIT_OK if ok else EXIT_FAIL


def cmd_sweep(kinds, params: CriterionParams, seeds: int, budget: float, config: RunConfig):
    if not (1 <= seeds <= 10_000):
        raise UsageError("seed count must lie in [1, 10000]")
    rows, summary = [], []
    failed = False
    for kind in kinds:
        kind = CriterionKind(kind)
        modes = config.modes() if kind is CriterionKind.P_GAMMA else [PGammaMode.REPAIRED]
        for mode in modes:
            sweep = soundness_sweep(
                kind,
                params,
                range(seeds),
                budget_factor=budget,
                mode=mode,
                grid=config.grid,
                radius_cap=config.radius_cap,
                order=config.truncation_order,
            )
            flagged = kind is CriterionKind.P_GAMMA and mode is PGammaMode.LITERAL
            summary.append(
                {
                    "kind": kind.value,
                    "mode": mode.value if kind is CriterionKind.P_GAMMA else "",
                    "criterion_pass_verifier_pass": sweep.count("pass"),
                    "counterexample_candidates": sweep.count("counterexample"),
                    "criterion_fail": sweep.count("criterion_fail"),
                    "flagged": flagged,
                }
            )
            failed = failed or bool(sweep.counterexamples)
            for rec in sweep.records:
                dump = rec.outcome == "counterexample"
                rows.append(
                    {
                        "kind": kind.value,
                        "mode": mode.value if kind is CriterionKind.P_GAMMA else "",
                        "seed": rec.seed,
                        "eta": rec.eta,
                        "delta": rec.delta,
                        "criterion_applicable": rec.criterion_applicable,
                        "criterion_satisfied": rec.criterion_satisfied,
                        "outcome": "inapplicable/flagged" if flagged else rec.outcome,
                        **_report_cells(rec.reports),
                        "coefficients": list(rec.coeffs) if dump else None,
                        "diagnostics": list(rec.diagnostics) if (dump or flagged) else [],
                    }
                )
    return rows, {"summary": summary, "budget_factor": budget}, EXIT_FAIL if failed else EXIT_OK


def cmd_example(config: RunConfig):
    base = CriterionParams(eta=0.0)
    rows = [
        {"name": "nehari", "formula": "(exp(i pi z) - 1)/(i pi)", "spec": '{"builtin":"nehari"}',
         "quantity": "sup|S| (constant Schwarzian)", "value": NEHARI_TWO_DELTA},
        {"name": "moebius", "formula": "z/(1 + c z)", "spec": '{"builtin":"moebius","c":[0.3,0.0]}',
         "quantity": "sup|S|", "value": 0.0},
        {"name": "koebe", "formula": "z/(1 - z)^2", "spec": '{"builtin":"koebe"}',
         "quantity": "a_2", "value": 2.0},
        {"name": "chiang_convexity", "formula": "6 eta + 5(1+eta) delta e^(delta/2) < 2", "spec": "",
         "quantity": "delta*(0), root of delta e^(delta/2) = 0.4",
         "value": delta_threshold(CriterionKind.CHIANG_CONVEXITY, base, config.threshold_tol)},
        {"name": "univalence_beta0", "formula": "eta + (1+eta) delta e^(delta/2)/2 <= sin(alpha pi/4)", "spec": "",
         "quantity": "delta*(0) at alpha = 1",
         "value": delta_threshold(CriterionKind.UNIVALENCE_BETA0, base, config.threshold_tol)},
        {"name": "st_conv_combo", "formula": "asin(eta) + asin(2 beta eta/(1 - eta)) < pi/2", "spec": "",
         "quantity": "eta root at beta = 1", "value": eta_root_combo(1.0)},
    ]
    return rows, {}, EXIT_OK


# ---------------------------------------------------------------- entry point


def _load_spec(text: Optional[str]) -> FunctionSpec:
    if not text:
        raise UsageError("--spec is required")
    try:
        if text.lstrip().startswith("{"):
            doc = json.loads(text)
        else:
            doc = json.loads(Path(text).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read spec {text!r}: {exc}") from exc
    return FunctionSpec.from_json(doc)


def _kinds(text: Optional[str], default=None):
    if not text:
        if default is None:
            raise UsageError("--kind is required")
        return default
    out = []
    for name in text.split(","):
        try:
            out.append(CriterionKind(name.strip()))
        except ValueError:
            raise UsageError(f"unknown criterion kind {name!r}; choose from {[k.value for k in CriterionKind]}")
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="schwarzcrit", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"schwarzcrit {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", help="function spec: inline JSON or a JSON file path")
    common.add_argument("--kind", help="criterion kind(s), comma separated")
    common.add_argument("--alpha", type=float, default=1.0)
    common.add_argument("--beta", type=float, default=0.0)
    common.add_argument("--gamma", type=float, default=0.0)
    common.add_argument("--eta-grid", default="0")
    common.add_argument("--radius", type=float, default=0.99, help="verification grid radius")
    common.add_argument("--radius-cap", type=float, default=0.999, help="radius for sup|S|")
    common.add_argument("--order", type=int, default=64, help="truncation order")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--p-gamma-mode", choices=("literal", "repaired", "both"), default="both")
    common.add_argument("--seeds", type=int, default=100)
    common.add_argument("--budget", type=float, default=0.9, help="sweep budget as a fraction of delta*")
    common.add_argument("--out", help="write output here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("check", "evaluate criteria on a function and verify their conclusions"),
        ("threshold", "solve delta*(eta) over an eta grid"),
        ("ode", "fundamental solutions, Wronskian, reconstruction and Gronwall bounds"),
        ("sweep", "falsification sweep over seeded random functions"),
        ("example", "built-in fixtures and their known constants"),
    ):
        sub.add_parser(name, parents=[common], help=help_text)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig(
            truncation_order=args.order,
            radius_cap=args.radius_cap,
            radius=args.radius,
            output_format=args.format,
            p_gamma_mode=args.p_gamma_mode,
        )
        params = CriterionParams(eta=0.0, alpha=args.alpha, beta=args.beta, gamma=args.gamma)
        if args.command == "check":
            rows, extra, code = cmd_check(_load_spec(args.spec), _kinds(args.kind, list(CriterionKind)), params, config)
        elif args.command == "threshold":
            rows, extra, code = cmd_threshold(_kinds(args.kind), params, parse_eta_grid(args.eta_grid), config)
        elif args.command == "ode":
            rows, extra, code = cmd_ode(_load_spec(args.spec), config)
        elif args.command == "sweep":
            rows, extra, code = cmd_sweep(_kinds(args.kind), params, args.seeds, args.budget, config)
        else:
            rows, extra, code = cmd_example(config)
    except (UsageError, SchwarzCritError, GenerationFailed) as exc:
        print(f"schwarzcrit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE if isinstance(exc, (UsageError, ValueError)) else EXIT_FAIL
    text = render(args.command, rows, config, extra)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
