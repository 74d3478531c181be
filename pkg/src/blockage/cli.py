"""Command-line front end: ``blockage {hb,sweep,validate,outage,bounds}``."""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from enum import IntEnum
from typing import Any, TextIO

from .approx import UniformSupport, shadow_integral_theorem1, shadow_integral_theorem2, support_bounds
from .errors import ConvergenceError, DomainError, ScenarioFileError
from .exact import QuadratureConfig, collected_fraction_unblocked, floor_spread, shadow_integral_exact
from .geometry import BlockageResult, Method
from .oracles import TABLE1, McConfig, approximation_error_sweep, mc_outage, mc_shadow_integral
from .outage import OutageParams, UniformOffsetModel, outage_probability
from .scenario_io import ScenarioFile, format_float, load_scenario, parse_length, write_csv
from .sweep import GEOMETRY_VARIABLES, SweepSpec, run_sweep


class ExitCode(IntEnum):
    OK = 0
    USAGE = 2
    FILE_NOT_FOUND = 3
    PARSE = 4
    DOMAIN = 5
    CONVERGENCE = 6
    VALIDATION_FAILED = 7
    OUTPUT = 8


class _OutputError(Exception):
    pass


def _methods(text: str) -> tuple[Method, ...]:
    return tuple(Method.parse(part) for part in text.split(",") if part.strip())


def _apply_overrides(sf: ScenarioFile, args: argparse.Namespace) -> ScenarioFile:
    q = sf.quadrature
    if args.abs_tol is not None or args.rel_tol is not None:
        q = QuadratureConfig(
            abs_tol=args.abs_tol if args.abs_tol is not None else q.abs_tol,
            rel_tol=args.rel_tol if args.rel_tol is not None else q.rel_tol,
            max_subdivisions=q.max_subdivisions,
        )
    mc = McConfig(
        samples=args.samples if args.samples is not None else sf.mc.samples,
        seed=args.seed if args.seed is not None else sf.mc.seed,
    )
    a2 = parse_length(args.a2, "--a2", default_unit="m") if args.a2 is not None else sf.a2
    outage = sf.outage
    if getattr(args, "snr_db", None) is not None or getattr(args, "r_th", None) is not None:
        n_o = outage.n_o if outage else 1.0
        snr_db = args.snr_db if args.snr_db is not None else (10 * math.log10(outage.snr) if outage else None)
        r_th = args.r_th if args.r_th is not None else (outage.r_th if outage else None)
        if snr_db is None or r_th is None:
            raise ScenarioFileError("outage needs both an SNR and r_th (scenario [outage] section or --snr-db/--r-th)")
        outage = OutageParams.from_snr_db(snr_db, r_th, n_o=n_o)
    return dataclasses.replace(sf, quadrature=q, mc=mc, a2=a2, outage=outage)


def _load(args: argparse.Namespace) -> ScenarioFile:
    if not args.scenario:
        raise ScenarioFileError("--scenario PATH is required for this command")
    return _apply_overrides(load_scenario(args.scenario), args)


def _emit(args: argparse.Namespace, payload: dict[str, Any], text: str, stream: TextIO) -> None:
    out = json.dumps(payload, indent=2) + "\n" if args.json else text
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(out)
        except OSError as exc:
            raise _OutputError(f"cannot write {args.out}: {exc}") from exc
    else:
        stream.write(out)


def _scenario_dict(sf: ScenarioFile) -> dict[str, Any]:
    s = sf.scenario
    return {"w_d": s.w_d, "alpha": s.alpha, "alpha_b": s.alpha_b, "r": s.r, "blocker_relevant": s.blocker_relevant}


def _support_dict(sup: UniformSupport) -> dict[str, Any]:
    return {"a1_eff": sup.a1_eff, "a2_eff": sup.a2_eff, "a1_clamped": sup.a1_clamped, "a2_source": str(sup.a2_source)}


def _shadow(sf: ScenarioFile, method: Method) -> BlockageResult:
    s = sf.scenario
    if method is Method.EXACT:
        return shadow_integral_exact(s, sf.quadrature)
    if method is Method.THEOREM1:
        return shadow_integral_theorem1(s)
    if method is Method.THEOREM2:
        return shadow_integral_theorem2(s)
    if s.alpha_b == 0.0:
        return BlockageResult(0.0, Method.MONTE_CARLO)
    return mc_shadow_integral(s, sf.mc)


def cmd_hb(args: argparse.Namespace, stream: TextIO) -> int:
    sf = _load(args)
    unblocked = collected_fraction_unblocked(sf.scenario)
    results = []
    for method in _methods(args.method):
        ib = _shadow(sf, method)
        hb, _ = floor_spread(unblocked - ib.value)
        results.append({"method": method.value, "I_b": ib.value, "h_b": hb, "error_estimate": ib.error_estimate})
    s = sf.scenario
    lines = [
        f"scenario: w_d={format_float(s.w_d)} m, alpha={format_float(s.alpha)} m, "
        f"alpha_b={format_float(s.alpha_b)} m, r={format_float(s.r)} m "
        f"(blocker relevant: {'yes' if s.blocker_relevant else 'no'})",
        f"I = {format_float(unblocked)}",
        f"{'method':<18}{'I_b':<24}{'h_b':<24}error_estimate",
    ]
    for row in results:
        lines.append(
            f"{row['method']:<18}{format_float(row['I_b']):<24}{format_float(row['h_b']):<24}"
            f"{row['error_estimate']:.3e}"
        )
    _emit(args, {"scenario": _scenario_dict(sf), "I": unblocked, "results": results}, "\n".join(lines) + "\n", stream)
    return ExitCode.OK


def cmd_sweep(args: argparse.Namespace, stream: TextIO) -> int:
    sf = _load(args)
    if args.var in GEOMETRY_VARIABLES:
        start = parse_length(args.start, "--start", default_unit="m")
        stop = parse_length(args.stop, "--stop", default_unit="m")
    else:
        start, stop = float(args.start), float(args.stop)
    spec = SweepSpec(args.var, start, stop, args.steps, _methods(args.method))
    header, rows = run_sweep(sf, spec)
    if args.out:
        try:
            write_csv(args.out, header, rows)
        except OSError as exc:
            raise _OutputError(f"cannot write {args.out}: {exc}") from exc
    else:
        stream.write(",".join(header) + "\n")
        for row in rows:
            stream.write(",".join(format_float(v) for v in row) + "\n")
    return ExitCode.OK


def cmd_validate(args: argparse.Namespace, stream: TextIO) -> int:
    q = QuadratureConfig(
        abs_tol=args.abs_tol if args.abs_tol is not None else 1e-10,
        rel_tol=args.rel_tol if args.rel_tol is not None else 1e-10,
    )
    rows = []
    for ratio, (paper_mse, paper_nmse) in TABLE1.items():
        report = approximation_error_sweep(ratio, Method.THEOREM2, q=q)
        decades = abs(math.log10(report.nmse / paper_nmse))
        rows.append({
            "wd_over_ab": ratio,
            "mse": report.mse,
            "paper_mse": paper_mse,
            "nmse": report.nmse,
            "paper_nmse": paper_nmse,
            "decades_off": decades,
            "within_tolerance": decades <= args.decades,
        })
    monotone = all(a["nmse"] > b["nmse"] for a, b in zip(rows, rows[1:]))
    passed = monotone and all(r["within_tolerance"] for r in rows)

    lines = [
        f"grid: {report.grid}; tolerance: {args.decades:g} decade(s) in NMSE",
        f"{'w_d/a_b':>7}  {'MSE':>10}  {'paper MSE':>10}  {'NMSE':>10}  {'paper NMSE':>10}  {'decades':>7}  ok",
    ]
    for r in rows:
        lines.append(
            f"{r['wd_over_ab']:>7}  {r['mse']:>10.3e}  {r['paper_mse']:>10.3e}  {r['nmse']:>10.3e}  "
            f"{r['paper_nmse']:>10.3e}  {r['decades_off']:>7.3f}  {'yes' if r['within_tolerance'] else 'NO'}"
        )
    lines.append(f"NMSE strictly decreasing: {'yes' if monotone else 'NO'}")
    lines.append(f"verdict: {'PASS' if passed else 'FAIL'}")
    payload = {"grid": report.grid, "decades": args.decades, "rows": rows, "monotone": monotone, "passed": passed}
    _emit(args, payload, "\n".join(lines) + "\n", stream)
    return ExitCode.OK if passed else ExitCode.VALIDATION_FAILED


def cmd_outage(args: argparse.Namespace, stream: TextIO) -> int:
    sf = _load(args)
    if sf.outage is None:
        raise ScenarioFileError("outage needs an [outage] section or --snr-db and --r-th")
    s, p = sf.scenario, sf.outage
    sup = support_bounds(s, sf.a2)
    model = UniformOffsetModel(sup)
    result = outage_probability(s, p, model)
    payload: dict[str, Any] = {
        "scenario": _scenario_dict(sf),
        "snr": p.snr,
        "r_th": p.r_th,
        "gamma_th": p.gamma_th,
        "outage_probability": result.probability,
        "branch": str(result.branch),
        "threshold_case": str(result.threshold.case),
        "threshold_radius": result.threshold.radius if math.isfinite(result.threshold.radius) else None,
        "support": _support_dict(sup),
    }
    lines = [
        f"P_o = {format_float(result.probability)}  (branch {result.branch})",
        f"threshold: {result.threshold.case}, r* = {format_float(result.threshold.radius)} m",
        f"support: [{format_float(sup.a1_eff)}, {format_float(sup.a2_eff)}] m "
        f"(a1 clamped: {'yes' if sup.a1_clamped else 'no'}, a2 from {sup.a2_source})",
    ]
    code = ExitCode.OK
    if args.mc:
        est = mc_outage(s, p, model, sf.mc, Method.THEOREM2, sf.quadrature)
        diff = abs(est.value - result.probability)
        ok = diff <= 3.0 * est.std_error if est.std_error > 0 else diff <= 1e-12
        payload["monte_carlo"] = {
            "estimate": est.value,
            "std_error": est.std_error,
            "samples": est.samples,
            "seed": sf.mc.seed,
            "verdict": "PASS" if ok else "FAIL",
        }
        lines.append(
            f"Monte Carlo ({est.samples} samples, seed {sf.mc.seed}): {format_float(est.value)} "
            f"+/- {est.std_error:.3e}  -> {'PASS' if ok else 'FAIL'} (3 sigma)"
        )
        if not ok:
            code = ExitCode.VALIDATION_FAILED
    _emit(args, payload, "\n".join(lines) + "\n", stream)
    return code


def cmd_bounds(args: argparse.Namespace, stream: TextIO) -> int:
    sf = _load(args)
    sup = support_bounds(sf.scenario, sf.a2)
    text = (
        f"a1_eff = {format_float(sup.a1_eff)} m (clamped: {'yes' if sup.a1_clamped else 'no'})\n"
        f"a2_eff = {format_float(sup.a2_eff)} m (source: {sup.a2_source})\n"
    )
    _emit(args, {"scenario": _scenario_dict(sf), "support": _support_dict(sup)}, text, stream)
    return ExitCode.OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", metavar="PATH", help="scenario file (TOML)")
    common.add_argument("--method", default="exact,theorem-1,theorem-2",
                        help="comma-separated subset of exact, theorem-1, theorem-2, monte-carlo")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")
    common.add_argument("--samples", type=int, help="Monte Carlo samples (default 10^6)")
    common.add_argument("--seed", type=int, help="Monte Carlo seed (default 42)")
    common.add_argument("--abs-tol", type=float, help="quadrature absolute tolerance")
    common.add_argument("--rel-tol", type=float, help="quadrature relative tolerance")
    common.add_argument("--a2", help="upper offset support bound, e.g. 3cm (bare numbers are meters)")

    parser = argparse.ArgumentParser(prog="blockage", description="Partial blockage of Gaussian-beam links.")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("hb", parents=[common], help="collected fraction, shadow integral and h_b per method")

    p = sub.add_parser("sweep", parents=[common], help="sweep one variable and write CSV")
    p.add_argument("--var", required=True, choices=["r", "alpha_b", "snr_db", "r_th"])
    p.add_argument("--start", required=True, help="first value (lengths accept m/cm/mm suffixes)")
    p.add_argument("--stop", required=True, help="last value")
    p.add_argument("--steps", type=int, required=True, help="number of grid points (>= 2)")

    p = sub.add_parser("validate", parents=[common], help="compare approximation errors with the published table")
    p.add_argument("--decades", type=float, default=1.0, help="allowed NMSE deviation in decades (default 1)")

    p = sub.add_parser("outage", parents=[common], help="closed-form outage probability")
    p.add_argument("--mc", action="store_true", help="also run the Monte Carlo check")
    p.add_argument("--snr-db", type=float, help="override P_s/N_o in dB")
    p.add_argument("--r-th", type=float, help="override the rate threshold [bit/s/Hz]")

    sub.add_parser("bounds", parents=[common], help="offset support bounds with provenance")
    return parser


COMMANDS = {"hb": cmd_hb, "sweep": cmd_sweep, "validate": cmd_validate, "outage": cmd_outage, "bounds": cmd_bounds}


def main(argv: list[str] | None = None, stream: TextIO | None = None) -> int:
    stream = stream or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return int(COMMANDS[args.command](args, stream))
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename}", file=sys.stderr)
        return ExitCode.FILE_NOT_FOUND
    except ScenarioFileError as exc:
        where = f" (line {exc.line})" if exc.line is not None else ""
        print(f"parse error{where}: {exc}", file=sys.stderr)
        return ExitCode.PARSE
    except ConvergenceError as exc:
        print(f"convergence error: {exc}", file=sys.stderr)
        return ExitCode.CONVERGENCE
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return ExitCode.DOMAIN
    except _OutputError as exc:
        print(f"output error: {exc}", file=sys.stderr)
        return ExitCode.OUTPUT


def main_entry() -> None:
    sys.exit(main())
