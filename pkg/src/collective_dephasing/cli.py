"""Command-line front end.

Exit codes: 0 success, 1 invariant or assertion failure, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from collective_dephasing import config as config_mod
from collective_dephasing.dephasing import asymptotic_state, theta_operators, trajectory
from collective_dephasing.entanglement import (
    ScanError,
    concurrence,
    critical_angle_scan,
    critical_angles,
    keff_bound,
)
from collective_dephasing.invariants import run_all
from collective_dephasing.linalg import DEFAULT_N_CAP, trace_distance

EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2

BASIS_NOTE = (
    "computational basis, index b = sum_k i_k 2^(N-k), qubit 1 most significant; "
    "entries are [re, im] pairs, row-major"
)


class UsageError(Exception):
    pass


def _fmt(x, precision: int) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if x == float("inf"):
        return "inf"
    return f"{float(x):.{precision}g}"


def _emit(text: str, output: str | None):
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(output).write_text(text)


def _matrix_json(rho: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in rho]


def _load_config(path, n_cap):
    cfg = config_mod.load(path)
    if cfg.n_qubits > n_cap:
        raise config_mod.ConfigError(f"state has {cfg.n_qubits} qubits, above --n-cap {n_cap}")
    cfg.validate()
    return cfg


def _diagnostics(cfg, rho, rho_ref, precision):
    cols = []
    for name in cfg.outputs:
        if name == "concurrence":
            cols.append(_fmt(concurrence(rho), precision))
        elif name == "keff":
            cols.append(_fmt(keff_bound(rho).k_eff, precision))
        elif name == "trace_distance":
            cols.append(_fmt(trace_distance(rho, rho_ref), precision))
    return cols


def _columns(cfg):
    names = {"concurrence": "concurrence", "keff": "k_eff", "trace_distance": "trace_distance"}
    return [names[o] for o in cfg.outputs if o in names]


def cmd_evolve(args) -> int:
    cfg = _load_config(args.config, args.n_cap)
    rho0 = cfg.initial_state()
    n = cfg.field_direction()
    times = cfg.time.values()
    states = trajectory(rho0, n, cfg.spectral_model(), times, mode=cfg.mode, n_cap=args.n_cap)
    rho_s = asymptotic_state(rho0, n, thetas=theta_operators(n, cfg.n_qubits, n_cap=args.n_cap))
    lines = [",".join(["t", *_columns(cfg)])]
    for t, rho in zip(times, states):
        lines.append(",".join([_fmt(t, args.precision), *_diagnostics(cfg, rho, rho_s, args.precision)]))
    if "state_dump" in cfg.outputs:
        dump = {
            "basis": BASIS_NOTE,
            "times": [float(t) for t in times],
            "states": [_matrix_json(rho) for rho in states],
        }
        (cfg.base_dir / cfg.state_dump_file).write_text(json.dumps(dump))
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_asymptote(args) -> int:
    cfg = _load_config(args.config, args.n_cap)
    rho0 = cfg.initial_state()
    rho_s = asymptotic_state(rho0, cfg.field_direction(), n_cap=args.n_cap)
    out = {"n_qubits": cfg.n_qubits}
    for name in cfg.outputs:
        if name == "concurrence":
            out["concurrence"] = concurrence(rho_s)
        elif name == "keff":
            rep = keff_bound(rho_s)
            out["k_eff"] = _fmt(rep.k_eff, args.precision) if rep.k_eff == float("inf") else rep.k_eff
            out.update(lhs=rep.lhs, s1=rep.s1, s2=rep.s2)
        elif name == "trace_distance":
            out["trace_distance_from_initial"] = trace_distance(rho_s, rho0)
        elif name == "state_dump":
            out["basis"] = BASIS_NOTE
            out["state"] = _matrix_json(rho_s)
    _emit(json.dumps(out, indent=2) + "\n", args.output)
    return EXIT_OK


def cmd_scan_angle(args) -> int:
    if not 2 <= args.n_qubits <= args.n_cap:
        raise UsageError(f"--n-qubits must be in [2, {args.n_cap}], got {args.n_qubits}")
    if not args.resolution > 0:
        raise UsageError(f"--resolution must be positive, got {args.resolution}")
    try:
        scan = critical_angle_scan(args.n_qubits, args.resolution, n_cap=args.n_cap)
    except ScanError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_FAILURE
    lines = ["theta,k_eff"]
    lines += [f"{_fmt(th, args.precision)},{_fmt(k, args.precision)}" for th, k in zip(scan.thetas, scan.k_eff)]
    exact = critical_angles(args.n_qubits)
    summary = {"n_qubits": args.n_qubits, "resolution": args.resolution}
    for key, numeric, closed in (("theta_E", scan.theta_E, exact.theta_E), ("theta_NPE", scan.theta_NPE, exact.theta_NPE)):
        summary[key] = {"numeric": numeric, "closed_form": closed, "abs_diff": abs(numeric - closed)}
    _emit("\n".join(lines) + "\n", args.output)
    text = json.dumps(summary, indent=2) + "\n"
    if args.summary:
        Path(args.summary).write_text(text)
    elif args.output in (None, "-"):
        sys.stderr.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_check_invariants(args) -> int:
    if args.trials < 1:
        raise UsageError(f"--trials must be >= 1, got {args.trials}")
    results = run_all(args.seed, args.trials)
    lines = [f"seed={args.seed} trials={args.trials}"]
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{r.name:<18} max_residual={r.max_residual:.3e} tolerance={r.tolerance:.0e} {status}")
    _emit("\n".join(lines) + "\n", args.output)
    failed = [r for r in results if not r.passed]
    for r in failed:
        print(f"{r.name} failed; worst inputs: {json.dumps(r.worst_inputs, sort_keys=True)}", file=sys.stderr)
    return EXIT_FAILURE if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", default=None, help="output path (default: standard output)")
    common.add_argument("--precision", type=int, default=12, help="significant digits (default 12)")
    common.add_argument("--n-cap", type=int, default=DEFAULT_N_CAP, help="largest qubit count accepted")

    parser = argparse.ArgumentParser(
        prog="collective-dephasing",
        description="Exact collective dephasing of qubit registers and entanglement diagnostics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", parents=[common], help="CSV of diagnostics along a time grid")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("asymptote", parents=[common], help="diagnostics of the long-time state, as JSON")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_asymptote)

    p = sub.add_parser("scan-angle", parents=[common], help="k_eff of the dephased W state vs polar angle")
    p.add_argument("--n-qubits", type=int, required=True)
    p.add_argument("--resolution", type=float, default=1e-3)
    p.add_argument("--summary", default=None, help="path for the JSON summary")
    p.set_defaults(func=cmd_scan_angle)

    p = sub.add_parser("check-invariants", parents=[common], help="randomized channel invariant suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=20)
    p.set_defaults(func=cmd_check_invariants)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, config_mod.ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
