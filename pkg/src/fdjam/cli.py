"""Command-line front end.

Four subcommands: ``optimize`` (one off-line design, JSON out),
``validate-sop`` (closed-form vs quadrature vs Monte Carlo outage table,
CSV out), ``sweep`` (one design per grid point of a swept variable, CSV
out), and ``simulate`` (slot-level Monte Carlo of a saved design, JSON
out).  Every output embeds the fully resolved configuration and package
version, so any row can be recomputed.  Exit codes: 0 success, 1
configuration/validation error, 2 solver infeasibility.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import __version__
from .analytics import comparison_metrics, sop_approx, sop_exact
from .config import Config, load_config, resolved_dict, sweep_values
from .errors import InfeasibleError, ValidationError
from .optimizer import optimize, solve_hd, solve_step2
from .params import solution_from_dict, solution_to_dict, validate
from .sim import empirical_sop, run_online
from .units import linear_to_db, watts_to_dbm

__all__ = ["main"]

_SWEEP_COLUMNS = [
    "index", "variable", "value", "value_db", "omega_s", "omega_fd",
    "omega_hd", "omega_fd_comp", "omega_hd_comp", "p_fd", "p_hd", "mu_b",
    "fd_r_c", "fd_r_s", "fd_mu_a", "fd_p_b_w", "hd_r_c", "hd_r_s",
    "hd_mu_a", "degenerate_fd", "capped_fd", "error",
]


def _jsonable(obj):
    """Recursively replace non-finite floats by None for strict JSON."""
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def _emit_text(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _json_payload(config: Config, body: Dict) -> str:
    payload = {"artifact": {"name": "fdjam", "version": __version__},
               "config": resolved_dict(config)}
    payload.update(body)
    return json.dumps(_jsonable(payload), indent=2) + "\n"


def _csv_text(config: Config, extra_header: Dict[str, object],
              columns: Sequence[str], rows: List[Dict]) -> str:
    lines = [f"# fdjam {__version__}"]
    header = dict(resolved_dict(config))
    header.update(extra_header)
    lines += [f"# {k} = {v}" for k, v in header.items()]
    out: List[str] = []
    writer_target = _StrWriter(out)
    writer = csv.DictWriter(writer_target, fieldnames=list(columns))
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _csv_cell(row.get(k)) for k in columns})
    return "\n".join(lines) + "\n" + "".join(out)


class _StrWriter:
    def __init__(self, sink: List[str]):
        self._sink = sink

    def write(self, s: str) -> None:
        self._sink.append(s)


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, (np.floating, np.integer)):
        v = v.item()
    if isinstance(v, float):
        if not math.isfinite(v):
            return ""
        return repr(v)
    return v


# --------------------------------------------------------------------------
# optimize
# --------------------------------------------------------------------------

def _cmd_optimize(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        solution = optimize(config.system, config.grid)

    # Re-derive solver diagnostics at the winning switch threshold.
    step2 = solve_step2(solution.mu_b, config.system, config.grid)
    hd = solve_hd(solution.mu_b, config.system)
    diagnostics = {
        "step1_residual": step2.step1.residual,
        "step1_omega_forms_gap": step2.step1.omega_forms_gap,
        "step1_iterations": step2.step1.iterations,
        "step2_residual": step2.residual,
        "step2_iterations": step2.iterations,
        "hd_residual": hd.residual,
        "hd_iterations": hd.iterations,
        "mu_b_grid_points": int(config.grid.mu_b_steps) + 1,
        "p_b_grid_points": int(config.grid.p_b_steps),
    }
    notes = []
    if config.system.rho == 0.0:
        notes.append("rho = 0: perfect self-interference suppression; any "
                     "mu_b > 0 keeps the receiver jamming on every slot")
    if solution.degenerate_fd:
        notes.append("jamming-power search degenerate: throughput decreases "
                     "over the whole jamming range, floor power reported")
    if solution.capped_fd:
        notes.append("jamming power capped at the p_b_max budget")

    body = {
        "solution": solution_to_dict(solution),
        "diagnostics": diagnostics,
        "notes": notes,
        "warnings": [str(w.message) for w in caught],
    }
    _emit_text(_json_payload(config, body), args.out)
    return 0


# --------------------------------------------------------------------------
# validate-sop
# --------------------------------------------------------------------------

def _parse_float_list(text: str, flag: str) -> List[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise ValidationError(f"{flag}: {text!r} is not a comma-separated "
                              f"list of numbers") from exc


def _cmd_validate_sop(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    d_abs = _parse_float_list(args.d_ab, "--d-ab")
    if args.lambda_list:
        lambdas = _parse_float_list(args.lambda_list, "--lambda-list")
    else:
        lambdas = list(np.logspace(math.log10(args.lambda_min),
                                   math.log10(args.lambda_max),
                                   args.lambda_steps))
    p_a = args.p_a_w
    p_b = args.p_b_w
    r_s = 1.0
    r_c = 1.0 + args.rate_gap

    rows = []
    index = 0
    for d_ab in d_abs:
        for lam in lambdas:
            params = replace(config.system, d_ab=d_ab, lambda_e=lam)
            row = {
                "lambda_e": lam,
                "d_ab_m": d_ab,
                "sop_exact": sop_exact(p_a, p_b, r_c, r_s, params),
                "sop_approx": sop_approx(p_a, p_b, r_c, r_s, params),
                "sop_mc": None,
                "mc_stderr": None,
            }
            if args.trials > 0:
                est = empirical_sop(p_a, p_b, r_c, r_s, params, args.trials,
                                    config.r_cut, args.seed + index)
                row["sop_mc"] = est.value
                row["mc_stderr"] = est.stderr
            rows.append(row)
            index += 1

    extra = {"p_a_w": p_a, "p_b_w": p_b, "rate_gap_bits": args.rate_gap,
             "trials": args.trials, "seed": args.seed}
    text = _csv_text(config, extra,
                     ["lambda_e", "d_ab_m", "sop_exact", "sop_approx",
                      "sop_mc", "mc_stderr"], rows)
    _emit_text(text, args.out)
    return 0


# --------------------------------------------------------------------------
# sweep
# --------------------------------------------------------------------------

def _sweep_point(task) -> Dict:
    """Solve one sweep point; module-level so process pools can pickle it."""
    base, grid, variable, value, index = task
    row: Dict = {"index": index, "variable": variable, "value": value,
                 "value_db": None, "error": None}
    try:
        if variable == "mu_b":
            solution = optimize(base, grid, forced_mu_b=[value])
        elif variable == "p_b":
            solution = optimize(base, grid, forced_p_b=value)
        else:
            solution = optimize(replace(base, **{variable: value}), grid)
    except (ValidationError, InfeasibleError) as exc:
        row["error"] = str(exc)
        return row
    params = base if variable in ("mu_b", "p_b") \
        else replace(base, **{variable: value})
    metrics = comparison_metrics(solution, params)
    if value > 0.0:
        row["value_db"] = watts_to_dbm(value) if variable in (
            "p_a_max", "p_b_max", "p_b", "sigma_b2", "sigma_e2") \
            else linear_to_db(value) if variable in ("rho", "mu_b") else None
    row.update({
        "omega_s": solution.omega_s,
        "omega_fd": solution.omega_fd,
        "omega_hd": solution.omega_hd,
        "omega_fd_comp": metrics.omega_fd_comp,
        "omega_hd_comp": metrics.omega_hd_comp,
        "p_fd": metrics.p_fd,
        "p_hd": metrics.p_hd,
        "mu_b": solution.mu_b,
        "fd_r_c": solution.fd.r_c,
        "fd_r_s": solution.fd.r_s,
        "fd_mu_a": solution.fd.mu_a,
        "fd_p_b_w": solution.fd.p_b,
        "hd_r_c": solution.hd.r_c,
        "hd_r_s": solution.hd.r_s,
        "hd_mu_a": solution.hd.mu_a,
        "degenerate_fd": solution.degenerate_fd,
        "capped_fd": solution.capped_fd,
    })
    return row


def _cmd_sweep(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    if config.sweep is None:
        raise ValidationError("sweep command needs a [sweep] section in the config")
    spec = config.sweep
    base = replace(config.system, **(spec.fixed or {}))
    validate(base)
    values = sweep_values(spec)
    tasks = [(base, config.grid, spec.variable, float(v), i)
             for i, v in enumerate(values)]

    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_point, tasks))
    else:
        rows = [_sweep_point(t) for t in tasks]
    rows.sort(key=lambda r: r["index"])

    extra = {"sweep_variable": spec.variable, "sweep_scale": spec.scale,
             "sweep_steps": spec.steps,
             "sweep_fixed": json.dumps(spec.fixed or {})}
    _emit_text(_csv_text(config, extra, _SWEEP_COLUMNS, rows), args.out)
    return 0


# --------------------------------------------------------------------------
# simulate
# --------------------------------------------------------------------------

def _cmd_simulate(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    try:
        with open(args.solution, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read solution {args.solution}: {exc}") from exc
    solution = solution_from_dict(data.get("solution", data))

    r_cut = args.r_cut if args.r_cut is not None else config.r_cut
    report = run_online(solution, config.system, args.slots, r_cut, args.seed)
    body = {
        "solution": solution_to_dict(solution),
        "simulation": {"n_slots": args.slots, "r_cut_m": r_cut, "seed": args.seed},
        "report": dataclasses.asdict(report),
    }
    _emit_text(_json_payload(config, body), args.out)
    return 0


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fdjam",
        description="Design and validate a switched FD/HD jamming-receiver link.")
    parser.add_argument("--version", action="version", version=f"fdjam {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_opt = sub.add_parser("optimize", help="run the off-line design, emit JSON")
    p_opt.add_argument("--config", required=True, help="INI scenario file")
    p_opt.add_argument("--out", default=None, help="output path (default stdout)")
    p_opt.set_defaults(func=_cmd_optimize)

    p_val = sub.add_parser("validate-sop",
                           help="tabulate exact/approximate/Monte Carlo outage")
    p_val.add_argument("--config", required=True)
    p_val.add_argument("--out", default=None)
    p_val.add_argument("--d-ab", default="0.2,10,30",
                       help="comma-separated link distances in meters")
    p_val.add_argument("--lambda-min", type=float, default=1e-6)
    p_val.add_argument("--lambda-max", type=float, default=1e-2)
    p_val.add_argument("--lambda-steps", type=int, default=25)
    p_val.add_argument("--lambda-list", default=None,
                       help="explicit comma-separated densities (overrides the range)")
    p_val.add_argument("--p-a-w", type=float, default=0.1,
                       help="fixed transmit power in watts")
    p_val.add_argument("--p-b-w", type=float, default=1.0,
                       help="fixed jamming power in watts")
    p_val.add_argument("--rate-gap", type=float, default=3.0,
                       help="codeword minus secrecy rate in bits/s/Hz")
    p_val.add_argument("--trials", type=int, default=0,
                       help="Monte Carlo trials per row (0 skips the simulation)")
    p_val.add_argument("--seed", type=int, default=0)
    p_val.set_defaults(func=_cmd_validate_sop)

    p_sw = sub.add_parser("sweep", help="one design per swept-variable value, CSV")
    p_sw.add_argument("--config", required=True)
    p_sw.add_argument("--out", default=None)
    p_sw.add_argument("--jobs", type=int, default=1,
                      help="parallel worker processes for sweep points")
    p_sw.set_defaults(func=_cmd_sweep)

    p_sim = sub.add_parser("simulate", help="slot-level Monte Carlo of a design")
    p_sim.add_argument("--config", required=True)
    p_sim.add_argument("--solution", required=True,
                       help="JSON produced by the optimize command")
    p_sim.add_argument("--out", default=None)
    p_sim.add_argument("--slots", type=int, default=100000)
    p_sim.add_argument("--r-cut", type=float, default=None,
                       help="override the [sim] r_cut_m setting")
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.set_defaults(func=_cmd_simulate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"fdjam: validation error: {exc}", file=sys.stderr)
        return 1
    except InfeasibleError as exc:
        print(f"fdjam: infeasible: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
