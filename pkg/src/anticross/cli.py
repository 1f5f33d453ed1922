"""
Command-line front end.

    anticross qfi-scan      --model M.json --range=LO:HI --steps N [--out F] [--format csv|json]
    anticross g-surface     [--x 0.01,0.1,10,100] [--grid N] [--out F]
    anticross thermal-scan  --model M.json --lambda L --range=LO:HI --steps N --r R1,R2,R3 [--log]
    anticross estimate      --model M.json --lambda-true L --r R1,R2,R3 --m M --batches B --seed S
    anticross model-validate --model M.json

Exit codes: 0 success, 2 configuration error, 3 degenerate or
non-identifiable setup, 4 I/O error. ANTICROSS_THREADS caps the worker
count; it never changes any output.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import __version__
from .config import delta_convention, load_model
from .errors import (
    ConfigError,
    DegenerateBundleError,
    DeterministicOutcomeError,
    DomainError,
    NonIdentifiableError,
    ZeroInformationError,
)
from .estimation import EstimatorConfig, run_experiment, worker_count
from .hamiltonian import eigenvalues, thermal_state, validate_model
from .metrology import (
    MeasurementDirection,
    g_function,
    qfi_fidelity_oracle,
    qfi_ground,
    thermal_fisher,
    thermal_fisher_leading_coefficient,
    thermal_qfi,
    thermal_qfi_leading_coefficient,
)
from .zoo import PerturbationParams, RabiParams, perturbation_qfi_printed, rabi_qfi_resonance

EXIT_OK, EXIT_CONFIG, EXIT_DEGENERATE, EXIT_IO = 0, 2, 3, 4


class _IOFailure(Exception):
    pass


# ---------------------------------------------------------------- output


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _jsonable(v):
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _dumps(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=False) + "\n"


def render_table(meta: dict, columns: list, rows: list, fmt: str) -> str:
    if fmt == "json":
        return _dumps({"meta": meta, "columns": columns, "rows": rows})
    buf = io.StringIO()
    for key, value in meta.items():
        buf.write(f"# {key}: {json.dumps(_jsonable(value), sort_keys=False)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row.get(c)) for c in columns])
    return buf.getvalue()


def read_table(text: str) -> tuple[dict, list[dict]]:
    """Parse a CSV artifact written by this tool back into (meta, rows of floats/str)."""
    meta, body = {}, []
    for line in text.splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition(": ")
            meta[key] = json.loads(value)
        else:
            body.append(line)
    rows = []
    for rec in csv.DictReader(body):
        out = {}
        for k, v in rec.items():
            try:
                out[k] = float(v) if v != "" else None
            except ValueError:
                out[k] = v
        rows.append(out)
    return meta, rows


def _emit(text: str, out) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as exc:
        raise _IOFailure(f"cannot write {out}: {exc}") from exc


def _meta(command: str, args, model=None, **extra) -> dict:
    skip = {"func", "out", "command"}
    meta = {
        "tool": "anticross",
        "version": __version__,
        "command": command,
        "args": {k: v for k, v in sorted(vars(args).items()) if k not in skip},
        "model": model.config if model is not None else None,
        "seed": getattr(args, "seed", None),
        "delta_convention": delta_convention(model) if model is not None else "n/a",
    }
    meta.update(extra)
    return meta


# ---------------------------------------------------------------- parsing helpers


def _parse_range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError as exc:
        raise ConfigError(f"--range: expected LO:HI, got {text!r}") from exc
    if not lo < hi:
        raise ConfigError(f"--range: need LO < HI, got {text!r}")
    return lo, hi


def _parse_direction(text: str) -> MeasurementDirection:
    try:
        parts = [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"--r: expected R1,R2,R3, got {text!r}") from exc
    if len(parts) != 3:
        raise ConfigError(f"--r: expected three components, got {text!r}")
    try:
        return MeasurementDirection(*parts)
    except ValueError as exc:
        raise ConfigError(f"--r: {exc}") from exc


def _parse_beta(text: str) -> float:
    try:
        beta = float(text)
    except ValueError as exc:
        raise ConfigError(f"--beta: not a number: {text!r}") from exc
    if beta < 0 or math.isnan(beta):
        raise ConfigError("--beta must be >= 0 (use 'inf' for zero temperature)")
    return beta


def _grid(lo, hi, steps, log=False):
    import numpy as np

    if steps < 2:
        raise ConfigError("--steps must be >= 2")
    if log:
        if lo <= 0:
            raise ConfigError("--log needs a positive lower bound")
        return [float(v) for v in np.geomspace(lo, hi, steps)]
    return [float(v) for v in np.linspace(lo, hi, steps)]


def _pmap(fn, items):
    n = worker_count()
    if n == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(n) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------- commands


def _printed_formula(model):
    """Callable lambda -> literature closed form for zoo models that have one, else None."""
    cfg = model.config or {}
    p = cfg.get("params", {})
    if cfg.get("type") == "perturbation":
        params = PerturbationParams(p["omega"], p["delta"], p["epsilon"], p["phi"])
        return lambda lam: perturbation_qfi_printed(params, lam)
    if cfg.get("type") == "rabi" and p["omega"] == p["omega0"] and p.get("delta_convention", "paper") == "paper":
        params = RabiParams(p["omega0"], p["omega"], "paper")
        return lambda lam: rabi_qfi_resonance(params, lam)
    return None


def cmd_qfi_scan(args) -> int:
    model = load_model(args.model)
    lo, hi = _parse_range(args.range) if args.range else model.domain
    grid = _grid(lo, hi, args.steps)
    model.check_domain([lo, hi])
    printed = _printed_formula(model)

    def row(lam):
        c = model.evaluate(lam)
        spec = eigenvalues(c)
        out = {
            "lambda": lam,
            "omega0": float(c.omega0),
            "delta": float(c.delta),
            "gamma": float(c.gamma),
            "h_minus": spec.h_minus,
            "h_plus": spec.h_plus,
            "gap": spec.gap,
            "x": spec.x,
            "H_qfi": None,
            "H_fidelity_oracle": None,
            "flag": "",
        }
        if spec.degenerate:
            out["flag"] = "degenerate"
            return out
        flags = []
        try:
            out["H_qfi"] = float(qfi_ground(c, model.derivatives(lam)))
        except DomainError:
            flags.append("derivative_outside_domain")
        try:
            out["H_fidelity_oracle"] = qfi_fidelity_oracle(model, lam)
        except DomainError:
            flags.append("oracle_outside_domain")
        except DegenerateBundleError:
            flags.append("oracle_near_crossing")
        if printed is not None:
            out["H_pipeline"] = out["H_qfi"]
            out["H_paper_printed"] = float(printed(lam))
        out["flag"] = ";".join(flags)
        return out

    columns = ["lambda", "omega0", "delta", "gamma", "h_minus", "h_plus", "gap", "x", "H_qfi", "H_fidelity_oracle"]
    if printed is not None:
        columns += ["H_pipeline", "H_paper_printed"]
    columns.append("flag")
    rows = _pmap(row, grid)
    _emit(render_table(_meta("qfi-scan", args, model), columns, rows, args.format), args.out)
    return EXIT_OK


def cmd_g_surface(args) -> int:
    import numpy as np

    if args.grid < 16:
        raise ConfigError("--grid must be >= 16")
    try:
        xs = [float(v) for v in args.x.split(",")]
    except ValueError as exc:
        raise ConfigError(f"--x: expected comma-separated numbers, got {args.x!r}") from exc
    axis = np.linspace(-1.0, 1.0, args.grid)
    rows = []
    for x in xs:
        points = [(float(a), float(b), False) for a in axis for b in axis if a * a + b * b <= 1 + 1e-12]
        theta = 2 * np.pi * np.arange(args.grid) / args.grid
        points += [(float(np.sin(t)), float(np.cos(t)), True) for t in theta]
        for r1, r3, on_circle in points:
            r2 = 0.0 if on_circle else math.sqrt(max(0.0, 1 - r1 * r1 - r3 * r3))
            row = {"x": x, "r1": r1, "r2": r2, "r3": r3, "g": None, "on_circle": on_circle, "flag": ""}
            try:
                row["g"] = g_function(x, MeasurementDirection(r1, r2, r3))
            except DeterministicOutcomeError:
                row["flag"] = "deterministic"
            rows.append(row)
    columns = ["x", "r1", "r2", "r3", "g", "on_circle", "flag"]
    _emit(render_table(_meta("g-surface", args), columns, rows, args.format), args.out)
    return EXIT_OK


def _fit_beta2(betas, values):
    """Least-squares coefficient a of values = a beta^2."""
    num = sum(v * b * b for b, v in zip(betas, values))
    den = sum(b**4 for b in betas)
    return num / den if den > 0 else None


def cmd_thermal_scan(args) -> int:
    model = load_model(args.model)
    lam = args.lambda_
    c = model.coefficients(lam)
    d = model.derivatives(lam)
    r = _parse_direction(args.r)
    lo, hi = _parse_range(args.range)
    if lo < 0:
        raise ConfigError("--range: beta must be >= 0")
    betas = _grid(lo, hi, args.steps, args.log)
    h0 = float(qfi_ground(c, d))

    def row(beta):
        br = thermal_qfi(c, d, beta)
        out = {
            "beta": beta,
            "H_classical": br.H_classical,
            "H_quantum": br.H_quantum,
            "H_total": br.H_total,
            "k_C": br.k_C,
            "k_Q": br.k_Q,
            "purity": thermal_state(c, beta).purity,
            "F_beta": None,
            "g_effective": None,
            "flag": "",
        }
        try:
            out["F_beta"] = thermal_fisher(c, d, beta, r)
        except DeterministicOutcomeError:
            out["flag"] = "deterministic"
        if out["F_beta"] is not None and br.H_total > 0:
            out["g_effective"] = out["F_beta"] / br.H_total
        return out

    rows = _pmap(row, betas)
    columns = ["beta", "H_classical", "H_quantum", "H_total", "k_C", "k_Q", "purity", "F_beta", "g_effective", "flag"]
    meta = _meta("thermal-scan", args, model, **{"lambda": lam, "direction": [r.r1, r.r2, r.r3]})
    _emit(render_table(meta, columns, rows, args.format), args.out)

    small = [rw for rw in rows if 0 < rw["beta"] <= args.fit_max and rw["F_beta"] is not None]
    h_theory = thermal_qfi_leading_coefficient(d)
    f_theory = thermal_fisher_leading_coefficient(d, r)
    fit = None
    if small:
        bs = [rw["beta"] for rw in small]
        h_fit = _fit_beta2(bs, [rw["H_total"] for rw in small])
        f_fit = _fit_beta2(bs, [rw["F_beta"] for rw in small])
        fit = {
            "beta_max_used": max(bs),
            "points": len(bs),
            "H_over_beta2": h_fit,
            "F_over_beta2": f_fit,
            "H_theory": h_theory,
            "F_theory": f_theory,
            "H_rel_err": abs(h_fit - h_theory) / h_theory if h_theory else None,
            "F_rel_err": abs(f_fit - f_theory) / f_theory if f_theory else None,
            "F_over_H": f_fit / h_fit if h_fit else None,
        }
    top = rows[-1]
    energy = float(c.energy)
    summary = {
        "meta": meta,
        "H0": h0,
        "small_beta_fit": fit,
        "low_temperature": {
            "beta": top["beta"],
            "beta_times_half_gap": top["beta"] * energy,
            "H_total_over_H0": top["H_total"] / h0 if h0 else None,
            "k_Q": top["k_Q"],
            "k_C": top["k_C"],
        },
        "beta_zero_row_all_zero": (rows[0]["beta"] == 0 and rows[0]["H_total"] == 0 and rows[0]["F_beta"] == 0) if rows[0]["beta"] == 0 else None,
    }
    summary_path = args.summary or (f"{args.out}.summary.json" if args.out not in (None, "-") else None)
    if summary_path:
        _emit(_dumps(summary), summary_path)
    return EXIT_OK


def cmd_estimate(args) -> int:
    model = load_model(args.model)
    r = _parse_direction(args.r)
    beta = _parse_beta(args.beta)
    search = _parse_range(args.search) if args.search else None
    try:
        config = EstimatorConfig(args.method, search, args.grid_points, args.tolerance)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if args.m < 1 or args.batches < 2:
        raise ConfigError("--m must be >= 1 and --batches >= 2")
    if not 0 <= args.seed < 2**64:
        raise ConfigError("--seed must be an unsigned 64-bit integer")
    report = run_experiment(model, args.lambda_true, r, beta, args.m, args.batches, args.seed, config)
    meta = _meta("estimate", args, model)
    body = report.to_dict()
    body["ratio_to_quantum_crb"] = report.ratio_to_quantum_crb
    body["ratio_to_classical_crb"] = report.ratio_to_classical_crb
    if args.format == "json":
        text = _dumps({"meta": meta, "report": body})
    else:
        summary = {k: v for k, v in body.items() if k != "estimates"}
        rows = [{"batch": i, "estimate": v} for i, v in enumerate(report.estimates)]
        text = render_table({**meta, "report": summary}, ["batch", "estimate"], rows, "csv")
    _emit(text, args.out)
    return EXIT_OK


def cmd_model_validate(args) -> int:
    model = load_model(args.model)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        check = validate_model(model, args.steps)
    report = {
        "meta": _meta("model-validate", args, model),
        "name": check.name,
        "domain": list(model.domain),
        "points": check.points,
        "min_delta": check.min_delta,
        "min_gap": check.min_gap,
        "delta_positive": check.delta_positive,
        "degenerate_points": check.degenerate_points,
        "warnings": [str(w.message) for w in caught],
    }
    _emit(_dumps(report), args.out)
    return EXIT_DEGENERATE if check.degenerate_points else EXIT_OK


# ---------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="anticross", description="Quantum estimation at level anti-crossings.")
    parser.add_argument("--version", action="version", version=f"anticross {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, model=True, steps=None):
        if model:
            p.add_argument("--model", required=True, help="model config JSON")
        p.add_argument("--out", default="-", help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--seed", type=int, default=0, help="unsigned 64-bit seed (only estimate draws random numbers)")
        if steps is not None:
            p.add_argument("--steps", type=int, default=steps)

    p = sub.add_parser("qfi-scan", help="QFI and fidelity oracle over a lambda grid")
    common(p, steps=201)
    p.add_argument("--range", help="LO:HI (default: model domain); write --range=-3:3 for negative bounds")
    p.set_defaults(func=cmd_qfi_scan)

    p = sub.add_parser("g-surface", help="measurement efficiency g over the (r1, r3) disk")
    common(p, model=False)
    p.add_argument("--x", default="0.01,0.1,10,100", help="comma-separated x = gamma/delta values")
    p.add_argument("--grid", type=int, default=101)
    p.set_defaults(func=cmd_g_surface)

    p = sub.add_parser("thermal-scan", help="thermal QFI split and Fisher information over beta")
    common(p, steps=101)
    p.add_argument("--lambda", dest="lambda_", type=float, required=True)
    p.add_argument("--range", required=True, help="beta range LO:HI")
    p.add_argument("--r", default="1,0,0", help="measurement direction R1,R2,R3")
    p.add_argument("--log", action="store_true", help="geometric beta spacing")
    p.add_argument("--fit-max", type=float, default=1e-2, help="largest beta used in the small-beta fit")
    p.add_argument("--summary", help="summary JSON path (default: OUT.summary.json)")
    p.set_defaults(func=cmd_thermal_scan)

    p = sub.add_parser("estimate", help="simulate experiments and compare with the Cramer-Rao bounds")
    common(p)
    p.set_defaults(format="json")
    p.add_argument("--lambda-true", type=float, required=True)
    p.add_argument("--r", required=True, help="measurement direction R1,R2,R3")
    p.add_argument("--beta", default="inf")
    p.add_argument("--m", type=int, default=10_000)
    p.add_argument("--batches", type=int, default=500)
    p.add_argument("--method", choices=("mle", "bayes"), default="mle")
    p.add_argument("--search", help="search interval LO:HI (default: model domain)")
    p.add_argument("--grid-points", type=int, default=1025)
    p.add_argument("--tolerance", type=float, default=1e-12)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("model-validate", help="check delta > 0 and the absence of crossings")
    common(p, steps=201)
    p.set_defaults(func=cmd_model_validate, format="json")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"anticross: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NonIdentifiableError, DegenerateBundleError, DeterministicOutcomeError, ZeroInformationError) as exc:
        print(f"anticross: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except DomainError as exc:
        print(f"anticross: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (_IOFailure, OSError) as exc:
        print(f"anticross: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
