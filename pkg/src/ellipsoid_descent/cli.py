"""Command-line front end.

Subcommands write CSV (TSV for ``plot-lemma1``) to standard output, or to
``--out``. Every output starts with ``#`` manifest lines recording the
canonical arguments, so ``argv`` from the manifest reproduces the data rows.

Exit codes: 0 success, 1 property violation or non-convergence, 2 usage
error, 3 numerical failure.
"""

import argparse
import contextlib
import datetime
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__, descent, fuzz, linalg, objectives, optimizer
from .errors import EllipsoidDescentError, LineSearchFailed

TOOL = "ellipsoid-descent"

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

DIRECTION_SPD_SHIFT = 0.1
DIRECTION_BOUND_RTOL = 1e-12

DEFAULT_X0 = {"rosenbrock": "-1.2,1", "sphere": "3,4", "quadratic": "1,1"}


def fmt(value):
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _row(values, sep=","):
    return sep.join(fmt(v) for v in values)


# -- manifest -----------------------------------------------------------------


def canonical_argv(command, params):
    argv = [command]
    for key, value in params.items():
        if value is None:
            continue
        argv.append(f"--{key.replace('_', '-')}={value}")
    return argv


def manifest_lines(command, params, seed):
    started = datetime.datetime.now(datetime.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    return [
        f"# tool: {TOOL} {__version__}",
        f"# subcommand: {command}",
        f"# params: {json.dumps(params, sort_keys=True)}",
        f"# seed: {seed if seed is not None else 'none'}",
        f"# started: {started}",
        f"# argv: {json.dumps(canonical_argv(command, params))}",
    ]


def read_manifest(text):
    """Parse the ``# key: value`` header of an output into a dict."""
    manifest = {}
    for line in text.splitlines():
        if not line.startswith("# "):
            break
        key, _, value = line[2:].partition(": ")
        manifest[key] = value
    if "params" in manifest:
        manifest["params"] = json.loads(manifest["params"])
    if "argv" in manifest:
        manifest["argv"] = json.loads(manifest["argv"])
    return manifest


def data_lines(text):
    """Lines of an output that are not ``#`` comments."""
    return [line for line in text.splitlines() if not line.startswith("#")]


@contextlib.contextmanager
def _output(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _emit_header(out, command, params, seed):
    for line in manifest_lines(command, params, seed):
        print(line, file=out)


# -- subcommands ----------------------------------------------------------------


def cmd_ineq(args):
    params = {
        "name": args.name,
        "trials": args.trials,
        "seed": args.seed,
        "dim": args.dim,
        "tolerance": args.tolerance,
    }
    violations = 0
    count = 0
    min_gap = min_rel = math.inf
    with _output(args.out) as out:
        _emit_header(out, "ineq", params, args.seed)
        print("trial_index,check,lhs,rhs,gap,holds,equality_predicted,equality_observed", file=out)
        rows = fuzz.run_campaign(args.name, args.trials, args.seed, args.dim, args.tolerance, args.workers)
        for row in rows:
            r = row.report
            count += 1
            violations += not row.holds
            min_gap = min(min_gap, r.gap)
            min_rel = min(min_rel, r.gap / r.scale)
            out.write(
                f"{row.trial},{row.check},{r.lhs!r},{r.rhs!r},{r.gap!r},{fmt(row.holds)},"
                f"{fmt(r.equality_predicted)},{fmt(r.equality_observed)}\n"
            )
        summary = f"# summary: cases={count} violations={violations} min_gap={min_gap!r} min_relative_gap={min_rel!r}"
        print(summary, file=out)
    print(summary[2:], file=sys.stderr)
    return EXIT_OK if violations == 0 else EXIT_VIOLATION


def direction_trial(seed, trial, dim, samples):
    """One closed-form vs. oracle comparison; returns the CSV fields."""
    rng = np.random.default_rng([seed, trial])
    b = linalg.SpdMatrix(fuzz.random_spd(rng, dim, DIRECTION_SPD_SHIFT))
    g = rng.standard_normal(dim)
    closed = descent.steepest_direction(g, b)
    oracle_seed = int(np.random.SeedSequence([seed, trial, 1]).generate_state(1)[0])
    oracle = descent.brute_force_min(g, b, samples, oracle_seed)
    rel_gap = (oracle.value - closed.value) / abs(closed.value)
    feasibility = abs(linalg.ellipsoid_norm(b, closed.d) - 1.0)
    return closed.value, oracle.value, rel_gap, feasibility


def cmd_direction(args):
    tol = args.tolerance if args.tolerance is not None else (5e-3 if args.dim <= 3 else 2e-2)
    params = {
        "dim": args.dim,
        "samples": args.samples,
        "seed": args.seed,
        "trials": args.trials,
        "tolerance": args.tolerance,
    }
    jobs = [(args.seed, t, args.dim, args.samples) for t in range(args.trials)]
    if args.workers > 1:
        with ProcessPoolExecutor(args.workers) as pool:
            results = list(pool.map(direction_trial, *zip(*jobs)))
    else:
        results = [direction_trial(*job) for job in jobs]

    failures = 0
    worst = 0.0
    with _output(args.out) as out:
        _emit_header(out, "direction", params, args.seed)
        print("trial,dim,closed_form,oracle,relative_gap,feasibility_residual,bound_ok,coverage_ok", file=out)
        for trial, (closed, oracle, rel_gap, feas) in enumerate(results):
            bound_ok = oracle >= closed - DIRECTION_BOUND_RTOL * abs(closed)
            coverage_ok = rel_gap <= tol
            failures += not (bound_ok and coverage_ok)
            worst = max(worst, rel_gap)
            print(_row([trial, args.dim, closed, oracle, rel_gap, feas, bound_ok, coverage_ok]), file=out)
        summary = f"# summary: trials={len(results)} failures={failures} worst_relative_gap={worst!r} tolerance={tol!r}"
        print(summary, file=out)
    print(summary[2:], file=sys.stderr)
    return EXIT_OK if failures == 0 else EXIT_VIOLATION


def _parse_floats(text, what):
    try:
        values = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ValueError(f"{what}: cannot parse {text!r} as comma-separated reals") from None
    if not values or not all(math.isfinite(v) for v in values):
        raise ValueError(f"{what}: need finite comma-separated reals, got {text!r}")
    return values


def _parse_matrix(text):
    rows = [_parse_floats(r, "--q") for r in text.split(";") if r.strip()]
    if len({len(r) for r in rows}) != 1:
        raise ValueError("--q rows have different lengths")
    return np.array(rows)


def _build_objective(args, n):
    if args.function == "rosenbrock":
        return objectives.rosenbrock()
    if args.function == "sphere":
        return objectives.sphere(n)
    q = _parse_matrix(args.q) if args.q else np.diag(10.0 ** np.arange(n))
    b = _parse_floats(args.b, "--b") if args.b else None
    return objectives.quadratic(q, b)


def cmd_optimize(args, parser):
    x0_text = args.x0 if args.x0 is not None else DEFAULT_X0[args.function]
    try:
        x0 = _parse_floats(x0_text, "--x0")
        obj = _build_objective(args, len(x0))
        x0 = obj.check_point(x0)
        cfg = optimizer.OptimizerConfig(grad_tol=args.tolerance, max_iter=args.max_iter)
    except (ValueError, EllipsoidDescentError) as exc:
        parser.error(str(exc))
    method = "quasi_newton" if args.method == "qn" else "steepest_descent"
    params = {
        "function": args.function,
        "method": args.method,
        "x0": x0_text,
        "tolerance": args.tolerance,
        "max_iter": args.max_iter,
        "q": args.q,
        "b": args.b,
    }
    try:
        trace = optimizer.minimize(obj, x0, method, cfg)
        code = EXIT_OK if trace.converged else EXIT_VIOLATION
    except LineSearchFailed as exc:
        trace = exc.trace
        code = EXIT_NUMERICAL
    except EllipsoidDescentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    with _output(args.out) as out:
        _emit_header(out, "optimize", params, None)
        print("iter,f,grad_norm,alpha,secant_residual", file=out)
        for rec in trace.records:
            print(_row([rec.k, rec.f, rec.grad_norm, rec.alpha, rec.secant_residual]), file=out)
        fin = trace.final
        summary = (
            f"# summary: termination={trace.termination} iterations={trace.iterations} "
            f"f={fin.f!r} grad_norm={fin.grad_norm!r} x={','.join(repr(float(v)) for v in fin.x)}"
        )
        print(summary, file=out)
    print(summary[2:], file=sys.stderr)
    return code


def lemma1_rows(xs):
    """``(x, x - 1, ln x)`` for each ``x``."""
    return [(float(x), float(x) - 1.0, math.log(x)) for x in xs]


def lemma1_grid(xmin, xmax, points):
    return np.linspace(xmin, xmax, points)


def cmd_plot_lemma1(args, parser):
    if not (0 < args.xmin < args.xmax) or not math.isfinite(args.xmax):
        parser.error("need 0 < xmin < xmax")
    if args.points < 2:
        parser.error("--points must be >= 2")
    params = {"xmin": args.xmin, "xmax": args.xmax, "points": args.points}
    with _output(args.out) as out:
        _emit_header(out, "plot-lemma1", params, None)
        print("# x\tx-1\tln(x)", file=out)
        for row in lemma1_rows(lemma1_grid(args.xmin, args.xmax, args.points)):
            print(_row(row, "\t"), file=out)
    return EXIT_OK


# -- argument parsing -----------------------------------------------------------------


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _positive_float(text):
    value = float(text)
    if not (value > 0 and math.isfinite(value)):
        raise argparse.ArgumentTypeError(f"must be a positive finite real, got {text}")
    return value


def _seed(text):
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def build_parser():
    parser = argparse.ArgumentParser(
        prog=TOOL,
        description="Steepest descent under the ellipsoid norm: inequality campaigns, "
        "direction oracle checks, optimizer traces and plot data.",
    )
    parser.add_argument("--version", action="version", version=f"{TOOL} {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, trials_default=None):
        p.add_argument("--seed", type=_seed, default=42)
        if trials_default is not None:
            p.add_argument("--trials", type=_positive_int, default=trials_default)
        p.add_argument("--tolerance", type=_positive_float, default=None)
        p.add_argument("--out", default=None, help="write output here instead of stdout")

    p = sub.add_parser("ineq", help="fuzz the inequality checks")
    p.add_argument("--name", choices=fuzz.CHECK_NAMES + ("all",), default="all")
    p.add_argument("--dim", type=_positive_int, default=8)
    p.add_argument("--workers", type=_positive_int, default=1)
    common(p, trials_default=1000)

    p = sub.add_parser("direction", help="closed-form direction against the sampling oracle")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--workers", type=_positive_int, default=1)
    common(p, trials_default=20)

    p = sub.add_parser("optimize", help="run a minimizer and print its trace")
    p.add_argument("--function", choices=("rosenbrock", "sphere", "quadratic"), default="rosenbrock")
    p.add_argument("--method", choices=("qn", "sd"), default="qn")
    p.add_argument("--x0", default=None, help="comma-separated start point; use --x0=-1.2,1 for negatives")
    p.add_argument("--tol", "--tolerance", dest="tolerance", type=_positive_float, default=1e-8)
    p.add_argument("--max-iter", type=_positive_int, default=500)
    p.add_argument("--q", default=None, help="quadratic matrix, rows split by ';', e.g. '1,0;0,10'")
    p.add_argument("--b", default=None, help="quadratic linear term, comma-separated")
    p.add_argument("--out", default=None)

    p = sub.add_parser("plot-lemma1", help="gnuplot-ready TSV of x-1 and ln(x)")
    p.add_argument("--xmin", type=float, default=0.01)
    p.add_argument("--xmax", type=float, default=4.0)
    p.add_argument("--points", type=int, default=400)
    p.add_argument("--out", default=None)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        sub = parser._subparsers._group_actions[0].choices[args.command]
        if args.command == "direction":
            if not 1 <= args.dim <= 6:
                sub.error("--dim must be in [1, 6]; the oracle tolerance is only calibrated there")
            if args.samples < 1000:
                sub.error("--samples must be >= 1000")
            return cmd_direction(args)
        if args.command == "ineq":
            return cmd_ineq(args)
        if args.command == "optimize":
            return cmd_optimize(args, sub)
        return cmd_plot_lemma1(args, sub)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
