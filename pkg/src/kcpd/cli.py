"""Command-line front end: detect / synth / eval workflows.

Input series are CSV files with one observation per row and one column per
dimension (optional header). Results are JSON documents that round-trip
losslessly; curve files (criterion, penalty, empirical risk per D) are CSV so
they can be plotted directly.

Errors are written to stderr as ``error[<code>]: message`` with a stable code
taxonomy: ``config`` (exit 2), ``parse`` (exit 3), ``data`` (exit 4),
``internal`` (exit 1). Exit status 0 means the requested output was written.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time

import numpy as np
from threadpoolctl import threadpool_limits

from ._validation import check_series
from .dynprog import Segmentation, solve, solve_restricted
from .kernels import KernelSpec, boundedness_check
from .metrics import RiskEvaluator, hausdorff
from .selection import DegenerateVarianceError, PenaltySpec, estimate_vmax, select
from .simulate import Scenario, generate

_EXIT_CODES = {"config": 2, "parse": 3, "data": 4, "internal": 1}

#: Maps from raw 1-D mixture draws to observation rows, recorded by name in
#: truth files so evaluation can reproduce them for reference sampling.
OBSERVATION_MAPS = {
    "identity": lambda x: x[:, None],
    "sigmoid_bins2": lambda x: np.column_stack([1.0 / (1.0 + np.exp(-x)), 1.0 - 1.0 / (1.0 + np.exp(-x))]),
}


class CliError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


def read_series_csv(path: str, stride: int = 1, simplex: bool = False) -> np.ndarray:
    """Parse a CSV of observations, reporting the line/column of any bad cell."""
    rows: list[list[float]] = []
    width = None
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise CliError("data", f"cannot open {path}: {exc}") from exc
    with fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            values = []
            for colno, cell in enumerate(row, start=1):
                try:
                    values.append(float(cell))
                except ValueError:
                    if lineno == 1:
                        values = None  # header row
                        break
                    raise CliError(
                        "parse", f"{path}:{lineno}:{colno}: not a number: {cell.strip()!r}"
                    ) from None
            if values is None:
                continue
            if width is None:
                width = len(values)
            elif len(values) != width:
                raise CliError(
                    "parse",
                    f"{path}:{lineno}: row has {len(values)} columns, expected {width}",
                )
            rows.append(values)
    if not rows:
        raise CliError("parse", f"{path}: no data rows")
    X = np.asarray(rows, dtype=float)
    if stride > 1:
        X = X[::stride]
    try:
        return check_series(X, simplex=simplex, min_samples=2)
    except ValueError as exc:
        raise CliError("data", f"{path}: {exc}") from exc


def _write_json(path: str, doc: dict) -> None:
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def _config_echo(args: argparse.Namespace, keys: list[str]) -> dict:
    return {k: getattr(args, k) for k in keys}


def _build_kernel_spec(args) -> KernelSpec:
    bandwidth = None
    if args.kernel in ("gaussian", "laplace"):
        if args.bandwidth == "median":
            bandwidth = "median"
        else:
            try:
                bandwidth = float(args.bandwidth)
            except ValueError:
                raise CliError(
                    "config", f"--bandwidth must be 'median' or a number, got {args.bandwidth!r}"
                ) from None
    try:
        return KernelSpec(kind=args.kernel, bandwidth=bandwidth, scale=args.scale)
    except ValueError as exc:
        raise CliError("config", f"kernel: {exc}") from exc


def _resolve_vmax(args, X, spec) -> tuple[float, str]:
    if args.v_max == "bound":
        return boundedness_check(spec, X), "bound"
    if args.v_max == "auto":
        lo, hi = args.edge_fractions
        try:
            return estimate_vmax(X, spec, lo, hi), "auto"
        except DegenerateVarianceError:
            return boundedness_check(spec, X), "bound_fallback"
    try:
        v = float(args.v_max)
    except ValueError:
        raise CliError(
            "config", f"--v-max must be 'auto', 'bound' or a number, got {args.v_max!r}"
        ) from None
    if v <= 0:
        raise CliError("config", f"--v-max must be positive, got {v}")
    return v, "fixed"


def _build_penalty_spec(args, v: float) -> PenaltySpec:
    if args.penalty == "kernel_log":
        return PenaltySpec(form="kernel_log", C=args.C, v_max=v)
    if args.penalty == "birge_massart":
        return PenaltySpec(form="birge_massart", c1=args.c1, c2=args.c2, v_max=v)
    return PenaltySpec(form="linear_dim", A=args.A if args.A is not None else v)


def cmd_detect(args) -> int:
    X = read_series_csv(args.input, stride=args.stride, simplex=args.simplex)
    if args.kernel == "intersection" and not args.simplex:
        raise CliError("config", "the intersection kernel requires --simplex")
    started = time.perf_counter()
    spec = _build_kernel_spec(args)
    try:
        spec = spec.resolve(X)
        v, v_source = _resolve_vmax(args, X, spec)
        pen_spec = _build_penalty_spec(args, v)
        if args.grid is not None:
            d_max = args.d_max if args.d_max is not None else len(args.grid) + 1
            solution = solve_restricted(X, spec, d_max, args.grid)
        else:
            solution = solve(X, spec, args.d_max)
        report = select(solution, pen_spec)
    except ValueError as exc:
        raise CliError("data", str(exc)) from exc
    elapsed = time.perf_counter() - started

    n = X.shape[0]
    doc = {
        "config": _config_echo(
            args,
            ["input", "kernel", "bandwidth", "scale", "penalty", "C", "c1", "c2", "A",
             "v_max", "edge_fractions", "d_max", "grid", "simplex", "stride", "seed"],
        ),
        "n": n,
        "bandwidth_used": spec.bandwidth,
        "v_max_used": v,
        "v_max_source": v_source,
        "per_d": {
            str(D): {
                "breakpoints": list(solution.best_seg[D].breakpoints),
                "emp_risk": report.emp_risk[D],
                "penalty": report.penalty[D],
                "criterion": report.criterion[D],
            }
            for D in sorted(solution.best_cost)
        },
        "d_hat": report.d_hat,
        "breakpoints": list(report.segmentation.breakpoints),
        "fractions": [b / n for b in report.segmentation.breakpoints],
        "warning": solution.warning,
        "timing_seconds": elapsed,
    }
    _write_json(args.output, doc)
    if args.emit_curves:
        with open(args.emit_curves, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["D", "emp_risk", "penalty", "criterion"])
            for D in sorted(report.criterion):
                writer.writerow(
                    [D, repr(report.emp_risk[D]), repr(report.penalty[D]), repr(report.criterion[D])]
                )
    return 0


def cmd_synth(args) -> int:
    n = args.n
    if args.breakpoints is not None:
        bps = tuple(int(round(f * n)) for f in args.breakpoints)
    else:
        bps = Scenario.default(n=n).breakpoints
    if args.ids is not None:
        ids = tuple(args.ids)
    else:
        ids = tuple((k % 10) + 1 for k in range(len(bps) + 1))
    try:
        scenario = Scenario(n=n, breakpoints=bps, segment_ids=ids, seed=args.seed)
    except ValueError as exc:
        raise CliError("config", f"invalid scenario: {exc}") from exc
    series, _ = generate(scenario)
    map_name = "sigmoid_bins2" if args.simplex else "identity"
    X = OBSERVATION_MAPS[map_name](series[:, 0])
    with open(args.output, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in X:
            writer.writerow([repr(float(v)) for v in row])
    truth = scenario.to_dict()
    truth["observation_map"] = map_name
    _write_json(args.truth, truth)
    return 0


def cmd_eval(args) -> int:
    try:
        with open(args.result) as fh:
            result = json.load(fh)
        with open(args.truth) as fh:
            truth = json.load(fh)
    except OSError as exc:
        raise CliError("data", str(exc)) from exc
    except json.JSONDecodeError as exc:
        raise CliError("parse", f"invalid JSON: {exc}") from exc

    for key in ("fractions", "d_hat"):
        if key not in result:
            raise CliError("data", f"result document lacks {key!r}")
    if "fractions" not in truth:
        raise CliError("data", "truth document lacks 'fractions'")

    est = result["fractions"]
    true_fracs = truth["fractions"]
    doc: dict = {"d_hat": result["d_hat"], "n_true_segments": len(true_fracs) + 1}
    if not est:
        doc["no_breakpoints"] = True
    elif not true_fracs:
        doc["no_true_breakpoints"] = True
    else:
        hd = hausdorff(est, true_fracs)
        doc["hausdorff"] = {"est_to_true": hd.est_to_true, "true_to_est": hd.true_to_est}

    if args.series is not None:
        doc["risk"] = _risk_section(args, result, truth)

    _write_json(args.output, doc)
    return 0


def _risk_section(args, result: dict, truth: dict) -> dict:
    for key in ("n", "breakpoints", "segment_ids", "seed"):
        if key not in truth:
            raise CliError("data", f"truth document lacks {key!r}; cannot evaluate risk")
    scenario = Scenario.from_dict(truth)
    map_name = truth.get("observation_map", "identity")
    if map_name not in OBSERVATION_MAPS:
        raise CliError("data", f"unknown observation map {map_name!r}")
    simplex = map_name == "sigmoid_bins2"
    X = read_series_csv(args.series, simplex=simplex)
    kernel_cfg = result.get("config", {})
    spec = KernelSpec(
        kind=kernel_cfg.get("kernel", "gaussian"),
        bandwidth=result.get("bandwidth_used"),
        scale=kernel_cfg.get("scale", 1.0),
    )
    try:
        evaluator = RiskEvaluator(
            X,
            spec,
            scenario,
            n_ref=args.n_ref,
            seed=args.seed,
            observation_map=OBSERVATION_MAPS[map_name] if simplex else None,
        )
        n = scenario.n
        per_d = {}
        for D, entry in sorted(result.get("per_d", {}).items(), key=lambda kv: int(kv[0])):
            seg = Segmentation(n, tuple(entry["breakpoints"]))
            est = evaluator.risk(seg)
            per_d[D] = {"risk": est.risk, "std_error": est.std_error}
        selected = per_d[str(result["d_hat"])]["risk"]
        oracle = min(entry["risk"] for entry in per_d.values())
        section = {
            "per_d": per_d,
            "selected_risk": selected,
            "oracle_risk": oracle,
            "mc_samples": evaluator.mc_samples,
        }
        if oracle > 0:
            section["risk_ratio"] = selected / oracle
        return section
    except ValueError as exc:
        raise CliError("data", str(exc)) from exc


def _fraction_list(text: str) -> list[float]:
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _edge_fractions(text: str) -> tuple[float, float]:
    parts = _fraction_list(text)
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected two comma-separated fractions, e.g. 0.05,0.95")
    return parts[0], parts[1]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kcpd",
        description="Kernel change-point detection with a penalized choice of the number of segments.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=os.cpu_count(),
                        help="max threads for numeric backends (default: all cores)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="detect change-points in a CSV series", parents=[common])
    p.add_argument("--input", required=True, help="CSV series, one observation per row")
    p.add_argument("--output", required=True, help="result JSON path")
    p.add_argument("--kernel", default="gaussian",
                   choices=["linear", "gaussian", "laplace", "intersection"])
    p.add_argument("--bandwidth", default="median",
                   help="'median' or the value of 2*h^2 (gaussian/laplace)")
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--penalty", default="kernel_log",
                   choices=["kernel_log", "birge_massart", "linear_dim"])
    p.add_argument("--C", type=float, default=2.0, help="kernel_log penalty constant")
    p.add_argument("--c1", type=float, default=2.0)
    p.add_argument("--c2", type=float, default=5.0)
    p.add_argument("--A", type=float, default=None, help="linear_dim penalty constant")
    p.add_argument("--v-max", dest="v_max", default="auto",
                   help="'auto' (edge windows), 'bound' (max kernel diagonal), or a number")
    p.add_argument("--edge-fractions", dest="edge_fractions", type=_edge_fractions,
                   default=(0.05, 0.95), metavar="LO,HI")
    p.add_argument("--d-max", dest="d_max", type=int, default=None)
    p.add_argument("--grid", type=_int_list, default=None,
                   help="comma-separated candidate breakpoint indices")
    p.add_argument("--simplex", action="store_true", help="rows are histograms (validated)")
    p.add_argument("--stride", type=int, default=1, help="subsample: keep every k-th row")
    p.add_argument("--emit-curves", dest="emit_curves", default=None,
                   help="also write a CSV of (D, emp_risk, penalty, criterion)")
    p.add_argument("--seed", type=int, default=0, help="echoed into the result for bookkeeping")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("synth", help="generate a synthetic benchmark series", parents=[common])
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--breakpoints", type=_fraction_list, default=None,
                   help="comma-separated breakpoint fractions (default: benchmark layout)")
    p.add_argument("--ids", type=_int_list, default=None,
                   help="comma-separated mixture ids, one per segment (default: cycle 1..10)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--simplex", action="store_true",
                   help="emit 2-bin histogram rows instead of scalars")
    p.add_argument("--output", required=True, help="series CSV path")
    p.add_argument("--truth", required=True, help="ground-truth JSON path")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("eval", help="score a detection result against ground truth", parents=[common])
    p.add_argument("--result", required=True, help="result JSON from 'detect'")
    p.add_argument("--truth", required=True, help="ground-truth JSON from 'synth'")
    p.add_argument("--output", required=True, help="report JSON path")
    p.add_argument("--series", default=None,
                   help="series CSV; enables Monte-Carlo risk evaluation")
    p.add_argument("--n-ref", dest="n_ref", type=int, default=5000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with threadpool_limits(limits=args.threads):
            return args.func(args)
    except CliError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return _EXIT_CODES[exc.code]
    except Exception as exc:  # pragma: no cover - safety net
        print(f"error[internal]: {exc}", file=sys.stderr)
        return _EXIT_CODES["internal"]


if __name__ == "__main__":
    sys.exit(main())
