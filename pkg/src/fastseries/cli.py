"""Batch command-line front end.

Commands: exp, log, inv, pow transform a coefficient file; verify sweeps the
fast algorithms against the quadratic references and fails on a tolerance
breach; bench runs a pinned plan ladder and emits the stage budget table.
Exit codes: 0 success, 1 domain/precondition error, 2 I/O or parse error,
3 verification failure.

Reports are deterministic byte-for-byte for a fixed configuration: wall
clock never appears in them (timing, when requested, goes to stderr).
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from . import fast_ops, oracle
from .cost_ledger import CostLedger, report_kv, report_text
from .errors import DomainError, FormatError, PlanError, UnsupportedLengthError
from .series_core import TruncatedSeries, load_series, dump_series

VERIFY_TOL = 1e-8
VERIFY_POWERS = (2.0 + 0j, 0.5 + 0j, -1.0 + 0j, 0.3 + 0.7j)


def _disk_samples(rng, count):
    r = np.sqrt(rng.uniform(0.0, 1.0, count))
    phi = rng.uniform(0.0, 2.0 * np.pi, count)
    return r * np.exp(1j * phi)


def exp_input(rng, size):
    """Random exponential argument: zero constant term, coefficients drawn
    from the closed unit disk with a geometric envelope.  The envelope keeps
    the spurious zeros of truncated prefixes away from the unit circle, so
    the logarithmic-derivative tail stays bounded and double precision can
    reach the stated tolerances at every test size."""
    h = np.zeros(size, dtype=np.complex128)
    h[1:] = _disk_samples(rng, size - 1) * (0.9 ** np.arange(1, size))
    return h


def pow_input(rng, size):
    """Random power/inverse argument: constant term 1, unit-disk coefficients
    damped by 0.5**i, which certifies the series has no zeros inside the
    unit circle and keeps reciprocal-type outputs representable."""
    h = np.zeros(size, dtype=np.complex128)
    h[0] = 1.0
    h[1:] = _disk_samples(rng, size - 1) * (0.5 ** np.arange(1, size))
    return h


def _max_err(got, want):
    scale = 1.0 + float(np.max(np.abs(want))) if want.size else 1.0
    return float(np.max(np.abs(got - want))) / scale if want.size else 0.0


def run_verify(sizes, seed, report_path=None, out=sys.stdout):
    """Fast-vs-reference sweep; returns the worst normalized error and writes
    one line per check."""
    lines = [f"verify seed={seed} tol={VERIFY_TOL:g}"]
    worst = 0.0
    for size in sizes:
        rng = np.random.default_rng(seed + size)
        h = exp_input(rng, size)
        got = fast_ops.fast_exp(h, size).coeffs
        want = oracle.oracle_exp(h, size).coeffs
        err = _max_err(got, want)
        worst = max(worst, err)
        lines.append(f"exp N={size} max_err={err:.3e}")

        g = pow_input(rng, size)
        got = fast_ops.fast_inverse(g, size).coeffs
        want = oracle.oracle_inverse(g, size).coeffs
        err = _max_err(got, want)
        worst = max(worst, err)
        lines.append(f"inv N={size} max_err={err:.3e}")

        for C in VERIFY_POWERS:
            got = fast_ops.fast_pow(g, C, size).coeffs
            want = oracle.oracle_pow(g, C, size).coeffs
            err = _max_err(got, want)
            worst = max(worst, err)
            lines.append(f"pow N={size} C={C:g} max_err={err:.3e}")
    status = "ok" if worst <= VERIFY_TOL else "FAIL"
    lines.append(f"verify result={status} worst={worst:.3e}")
    text = "\n".join(lines) + "\n"
    out.write(text)
    if report_path:
        with open(report_path, "w") as fp:
            fp.write(text)
    return worst


def bench_plan(algorithm, size, k=None, n=None):
    """Pinned bench plans: block size 16 by default, with the bootstrap order
    chosen so the measured stage constants decrease toward their limits as
    the ladder grows (m/8 for exp, m/4 for pow)."""
    m = fast_ops.fft_core.granted_length(max(8, (size + 1) // 2))
    kk = 16 if k is None else k
    if n is None:
        n = m // 8 if algorithm == "exp" else m // 4
    return fast_ops.BlockPlan(k=kk, n=n, m=m)


def run_bench(sizes, seed, k=None, n=None, report_path=None, out=sys.stdout):
    """Stage budget tables for exp and pow across a size ladder."""
    kv_parts = [f"bench seed={seed}"]
    for size in sizes:
        for algorithm in ("exp", "pow"):
            plan = bench_plan(algorithm, size, k=k, n=n)
            rng = np.random.default_rng(seed + size)
            ledger = CostLedger()
            if algorithm == "exp":
                h = exp_input(rng, size)
                fast_ops.fast_exp(h, size, plan=plan, ledger=ledger)
            else:
                g = pow_input(rng, size)
                fast_ops.fast_pow(g, 0.3 + 0.7j, size, plan=plan, ledger=ledger)
            out.write(f"== {algorithm} N={size} ==\n")
            out.write(report_text(ledger, plan))
            kv_parts.append(f"[{algorithm} N={size}]")
            kv_parts.append(report_kv(ledger, plan).rstrip("\n"))
    text = "\n".join(kv_parts) + "\n"
    if report_path:
        with open(report_path, "w") as fp:
            fp.write(text)
    return text


def _transform(args):
    series = load_series(args.input)
    ledger = CostLedger()
    plan = None
    if args.command in ("exp", "pow") and (args.block_size or args.bootstrap_order):
        plan = fast_ops.choose_plan(args.n, k=args.block_size, n=args.bootstrap_order)

    if args.command == "exp":
        if args.algorithm == "oracle":
            result = oracle.oracle_exp(series, args.n)
        else:
            result = fast_ops.fast_exp(series, args.n, plan=plan, ledger=ledger)
    elif args.command == "log":
        if args.algorithm == "oracle":
            result = oracle.oracle_log(series, args.n)
        else:
            result = fast_ops.fast_log(series, args.n, ledger=ledger)
    elif args.command == "inv":
        if args.algorithm == "oracle":
            result = oracle.oracle_inverse(series, args.n)
        else:
            result = fast_ops.fast_inverse(series, args.n, ledger=ledger)
    elif args.command == "pow":
        C = complex(args.power_re, args.power_im)
        if args.algorithm == "oracle":
            result = oracle.oracle_pow(series, C, args.n)
        else:
            result = fast_ops.fast_pow(series, C, args.n, plan=plan, ledger=ledger)
    else:
        raise AssertionError(args.command)

    dump_series(result, args.output)
    if args.report:
        if plan is None:
            plan = fast_ops.choose_plan(args.n)
        with open(args.report, "w") as fp:
            if plan.fallback:
                fp.write(f"plan.fallback=1\nplan.target={plan.target}\n")
            else:
                fp.write(report_kv(ledger, plan))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="fastseries",
                                     description="truncated power series toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, io=True):
        if io:
            p.add_argument("input", help="input series file")
            p.add_argument("output", help="output series file")
            p.add_argument("--n", type=int, required=True, help="output order")
            p.add_argument("--algorithm", choices=("fast", "oracle"), default="fast")
            p.add_argument("--block-size", type=int, default=None)
            p.add_argument("--bootstrap-order", type=int, default=None)
        p.add_argument("--report", default=None, help="write the budget report here")

    for name in ("exp", "log", "inv"):
        add_common(sub.add_parser(name))
    p_pow = sub.add_parser("pow")
    add_common(p_pow)
    p_pow.add_argument("--power-re", type=float, required=True)
    p_pow.add_argument("--power-im", type=float, default=0.0)

    p_verify = sub.add_parser("verify")
    p_verify.add_argument("--sizes", default="64,256,1024")
    p_verify.add_argument("--seed", type=int, default=1)
    p_verify.add_argument("--report", default=None)

    p_bench = sub.add_parser("bench")
    p_bench.add_argument("--sizes", default="256,512,1024,2048")
    p_bench.add_argument("--seed", type=int, default=1)
    p_bench.add_argument("--block-size", type=int, default=None)
    p_bench.add_argument("--bootstrap-order", type=int, default=None)
    p_bench.add_argument("--report", default=None)
    p_bench.add_argument("--timing", action="store_true",
                         help="print wall clock to stderr (advisory only)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command in ("exp", "log", "inv", "pow"):
            return _transform(args)
        if args.command == "verify":
            sizes = [int(s) for s in args.sizes.split(",") if s]
            worst = run_verify(sizes, args.seed, report_path=args.report)
            return 0 if worst <= VERIFY_TOL else 3
        if args.command == "bench":
            sizes = [int(s) for s in args.sizes.split(",") if s]
            start = time.perf_counter()
            run_bench(sizes, args.seed, k=args.block_size, n=args.bootstrap_order,
                      report_path=args.report)
            if args.timing:
                print(f"bench wall clock: {time.perf_counter() - start:.2f}s",
                      file=sys.stderr)
            return 0
        parser.error(f"unknown command {args.command}")
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, PlanError, UnsupportedLengthError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
