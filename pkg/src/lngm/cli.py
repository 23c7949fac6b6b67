"""Command-line frontend: solve, verify, bench, generate.

Exit statuses: 0 success (solve: solved; verify: certified), 1 usage or file
errors, 2 domain-negative outcomes (not jointly definite / not certified),
3 numerical failure.
"""
from __future__ import annotations

import argparse
import concurrent.futures
import csv
import io
import json
import sys
from typing import Optional

import numpy as np

from .instances import (GeneratorConfig, InstanceFormatError, generate_random,
                        read_instance, write_instance)
from .secular import Branch
from .solver import (LngmCertificate, SolveReport, SolveStatus, solve,
                     solve_gtre)
from .verifier import check_strict_lngm, lagrangian_inertia

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NEGATIVE = 2
EXIT_NUMERICAL = 3

BENCH_HEADER = ["n", "count", "eig_time", "bis_time", "bis_iter_call",
                "bis_iter_total", "num_lngm"]


class _Parser(argparse.ArgumentParser):
    def error(self, message):             # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _certificate_dict(cert: LngmCertificate) -> dict:
    v = cert.verification
    return {
        "x_star": [float(t) for t in np.atleast_1d(cert.x_star)],
        "mu_star": float(cert.mu_star),
        "eta_star": None if cert.eta_star is None else float(cert.eta_star),
        "branch": cert.branch.value if isinstance(cert.branch, Branch) else cert.branch,
        "constraint_residual": float(cert.constraint_residual),
        "stationarity_residual": float(cert.stationarity_residual),
        "inertia": list(cert.inertia),
        "verdict": cert.verdict.value,
        "f0_value": float(cert.f0_value),
        "reason": cert.reason,
        "flags": None if v is None else {
            "kkt_ok": v.kkt_ok, "regular_ok": v.regular_ok,
            "tangent_pd_ok": v.tangent_pd_ok, "not_psd_ok": v.not_psd_ok,
            "a1_nonzero_ok": v.a1_nonzero_ok, "mu_positive_ok": v.mu_positive_ok,
        },
    }


def report_to_dict(rep: SolveReport) -> dict:
    det = rep.definiteness
    return {
        "status": rep.status.value,
        "n": rep.n,
        "kind": rep.kind.value,
        "definiteness": None if det is None else {
            "verdict": det.verdict.value,
            "mu1": det.mu1,
            "lambda_min_at_mu1": det.lambda_min_at_mu1,
        },
        "mu1": rep.mu1,
        "sgn": rep.sgn,
        "lngm_count": rep.lngm_count,
        "certificates": [_certificate_dict(c) for c in rep.certificates],
        "rejected": [_certificate_dict(c) for c in rep.rejected],
        "branches": [{
            "branch": run.branch.value,
            "U1": run.U1, "U2": run.U2, "viable": run.viable,
            "eta_star": run.outcome.eta_star,
            "eta_refined": run.eta_refined,
            "iterations": run.outcome.iterations,
            "psi_evals": run.outcome.psi_evals,
            "psi_prime_evals": run.outcome.psi_prime_evals,
            "terminal": run.outcome.terminal.value,
            "gate_value": run.outcome.gate_value,
        } for run in rep.branches],
        "eig_time": rep.eig_time,
        "bis_time": rep.bis_time,
        "notes": list(rep.notes),
    }


def _print_report_text(rep: SolveReport, out) -> None:
    print(f"status: {rep.status.value}", file=out)
    if rep.definiteness is not None:
        det = rep.definiteness
        print(f"definiteness: {det.verdict.value}"
              + (f" (mu1={det.mu1:.10g}, margin={det.lambda_min_at_mu1:.3e})"
                 if det.is_definite else f" (best margin {det.lambda_min_at_mu1:.3e})"),
              file=out)
    print(f"local-nonglobal minimizers found: {rep.lngm_count}", file=out)
    for i, cert in enumerate(rep.certificates, 1):
        x = ", ".join(f"{t:.10g}" for t in np.atleast_1d(cert.x_star))
        print(f"  [{i}] x* = ({x})  mu* = {cert.mu_star:.10g}  "
              f"f0 = {cert.f0_value:.10g}  branch = "
              f"{cert.branch.value if isinstance(cert.branch, Branch) else cert.branch}",
              file=out)
        print(f"      |f1(x*)| = {cert.constraint_residual:.3e}  "
              f"|grad L| = {cert.stationarity_residual:.3e}  "
              f"inertia = {cert.inertia}", file=out)
    for cert in rep.rejected:
        print(f"  rejected candidate on "
              f"{cert.branch.value if isinstance(cert.branch, Branch) else cert.branch}: "
              f"{cert.reason}", file=out)
    for note in rep.notes:
        print(f"note: {note}", file=out)


def cmd_solve(args) -> int:
    if not args.tol > 0.0:
        print("error: --tol must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        inst = read_instance(args.input)
    except (OSError, InstanceFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    rep = solve(inst, eps=args.tol)
    if args.format == "json":
        json.dump(report_to_dict(rep), sys.stdout, indent=2)
        print()
    else:
        _print_report_text(rep, sys.stdout)
    if rep.status is SolveStatus.NOT_JOINTLY_DEFINITE:
        print("error: the Hessian pair admits no definite shift; this solver "
              "only covers jointly definite problems", file=sys.stderr)
        return EXIT_NEGATIVE
    if rep.status is SolveStatus.NUMERICAL_FAILURE:
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        inst = read_instance(args.input)
    except (OSError, InstanceFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        point = np.array([float(t) for t in args.point.split(",")])
    except ValueError:
        print(f"error: cannot parse --point {args.point!r} as comma-separated reals",
              file=sys.stderr)
        return EXIT_USAGE
    if point.shape != (inst.n,):
        print(f"error: point has dimension {point.size}, instance has n={inst.n}",
              file=sys.stderr)
        return EXIT_USAGE
    verdict = check_strict_lngm(inst, point, args.mu, tol=args.tol)
    inertia = lagrangian_inertia(inst, args.mu)
    certified = verdict.certified and inertia == (1, 0, inst.n - 1)
    flags = {
        "kkt_ok": verdict.kkt_ok,
        "regular_ok": verdict.regular_ok,
        "tangent_pd_ok": verdict.tangent_pd_ok,
        "not_psd_ok": verdict.not_psd_ok,
        "a1_nonzero_ok": verdict.a1_nonzero_ok,
        "mu_positive_ok": verdict.mu_positive_ok,
    }
    for name, value in flags.items():
        if value is not None:
            print(f"{name}: {value}")
    print(f"feasibility_residual: {verdict.feasibility_residual:.6e}")
    print(f"stationarity_residual: {verdict.stationarity_residual:.6e}")
    if verdict.tangent_min_eig is not None:
        print(f"tangent_min_eigenvalue: {verdict.tangent_min_eig:.6e}")
    print(f"hessian_min_eigenvalue: {verdict.hessian_min_eig:.6e}")
    print(f"inertia: {inertia}")
    if verdict.witness is not None:
        print("witness: (" + ", ".join(f"{t:.10g}" for t in verdict.witness) + ")")
    for reason in verdict.reasons:
        print(f"reason: {reason}")
    print(f"certified: {certified}")
    return EXIT_OK if certified else EXIT_NEGATIVE


def _bench_one(task: tuple[int, int, int, float]) -> tuple[float, float, int, int, int]:
    n, base_seed, index, eps = task
    seed = int(np.random.SeedSequence([base_seed, n, index]).generate_state(1)[0])
    inst = generate_random(GeneratorConfig(n=n, seed=seed))
    rep = solve_gtre(inst, eps=eps)
    iters = sum(run.outcome.iterations for run in rep.branches)
    calls = len(rep.branches)
    return rep.eig_time, rep.bis_time, iters, calls, rep.lngm_count


def cmd_bench(args) -> int:
    if not args.eps > 0.0:
        print("error: --eps must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        n_values = [int(t) for t in args.n.split(",")]
    except ValueError:
        print(f"error: cannot parse --n {args.n!r} as comma-separated integers",
              file=sys.stderr)
        return EXIT_USAGE
    if any(n < 2 for n in n_values):
        print("error: bench dimensions must be >= 2", file=sys.stderr)
        return EXIT_USAGE
    if args.count < 0:
        print("error: --count must be nonnegative", file=sys.stderr)
        return EXIT_USAGE

    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(BENCH_HEADER)
    for n in n_values:
        tasks = [(n, args.seed, i, args.eps) for i in range(args.count)]
        if args.jobs > 1 and tasks:
            with concurrent.futures.ProcessPoolExecutor(max_workers=args.jobs) as pool:
                results = list(pool.map(_bench_one, tasks))
        else:
            results = [_bench_one(t) for t in tasks]
        if not results:
            continue
        eig = sum(r[0] for r in results) / len(results)
        bis = sum(r[1] for r in results) / len(results)
        total_iters = sum(r[2] for r in results)
        total_calls = sum(r[3] for r in results)
        per_call = total_iters / total_calls if total_calls else 0.0
        per_inst = total_iters / len(results)
        lngm = sum(r[4] for r in results) / len(results)
        writer.writerow([n, len(results), f"{eig:.6e}", f"{bis:.6e}",
                         f"{per_call:.2f}", f"{per_inst:.2f}", f"{lngm:.3f}"])
    sys.stdout.write(buf.getvalue())
    return EXIT_OK


def cmd_generate(args) -> int:
    if args.count < 1:
        print("error: --count must be positive", file=sys.stderr)
        return EXIT_USAGE
    target = Branch.PSI1 if args.target == "psi1" else Branch.PSI3
    try:
        for i in range(args.count):
            cfg = GeneratorConfig(n=args.n, seed=args.seed + i, target_branch=target)
            inst = generate_random(cfg)
            path = f"{args.out_dir}/{args.prefix}-n{args.n}-s{args.seed + i}.json"
            write_instance(inst, path)
            print(path)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lngm",
                     description="Find all local-nonglobal minimizers of a quadratic "
                                 "program with one quadratic constraint.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve one instance file")
    p_solve.add_argument("--input", required=True, help="instance JSON file")
    p_solve.add_argument("--tol", type=float, default=1e-5,
                         help="bisection interval tolerance (default 1e-5)")
    p_solve.add_argument("--format", choices=("json", "text"), default="text")
    p_solve.set_defaults(func=cmd_solve)

    p_verify = sub.add_parser("verify", help="check a point/multiplier pair")
    p_verify.add_argument("--input", required=True, help="instance JSON file")
    p_verify.add_argument("--point", required=True, help="comma-separated coordinates")
    p_verify.add_argument("--mu", type=float, required=True, help="Lagrange multiplier")
    p_verify.add_argument("--tol", type=float, default=1e-6,
                          help="base KKT tolerance (default 1e-6)")
    p_verify.set_defaults(func=cmd_verify)

    p_bench = sub.add_parser("bench", help="random-instance benchmark, CSV on stdout")
    p_bench.add_argument("--n", required=True, help="comma-separated dimensions")
    p_bench.add_argument("--count", type=int, default=100, help="instances per dimension")
    p_bench.add_argument("--seed", type=int, default=1)
    p_bench.add_argument("--eps", type=float, default=1e-5)
    p_bench.add_argument("--jobs", type=int, default=1,
                         help="parallel solves (default 1, the timing-accurate mode)")
    p_bench.set_defaults(func=cmd_bench)

    p_gen = sub.add_parser("generate", help="write random instance files")
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--count", type=int, default=1)
    p_gen.add_argument("--seed", type=int, default=1)
    p_gen.add_argument("--out-dir", default=".")
    p_gen.add_argument("--prefix", default="instance")
    p_gen.add_argument("--target", choices=("psi1", "psi3"), default="psi1")
    p_gen.set_defaults(func=cmd_generate)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
