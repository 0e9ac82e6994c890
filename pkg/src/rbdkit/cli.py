"""Command line interface.

Subcommands: ``eval`` (closed-form R(t)), ``curve`` (CSV/JSON grid),
``simulate`` (Monte Carlo estimate vs. closed form), ``check`` (full
property suite).  Reports go to stdout, diagnostics to stderr.

Exit codes: 0 success (and, for ``check``, all properties passed),
1 I/O error, 2 spec or usage error, 3 property failure (``check`` only).

``RBD_THREADS`` caps Monte Carlo worker threads (unset or 0 = auto); the
thread count never changes any output byte.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from rbdkit import __version__
from rbdkit.core import PropertyCheck, PropertyReport, RbdModel
from rbdkit.distributions import check_reliability_axioms
from rbdkit.dsl import SpecParseError, parse_spec_file
from rbdkit.mc import (
    McConfig,
    check_mutual_independence,
    estimate_system_reliability,
    survival_indicator_matrix,
)
from rbdkit.rbd import (
    evaluate,
    pipeline_reliability_closed_form,
    reliability_curve,
    series_min_bound,
    series_reliability,
)

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_IO = 1
EXIT_SPEC = 2
EXIT_PROPERTY = 3

MAX_INDEPENDENCE_COLUMNS = 5


class _Failure(Exception):
    def __init__(self, exit_code: int, message: str):
        super().__init__(message)
        self.exit_code = exit_code


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except _Failure as failure:
        print(f"rbdkit: {failure}", file=sys.stderr)
        return failure.exit_code


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rbdkit",
        description="Evaluate pipeline reliability block diagrams.",
    )
    parser.add_argument("--version", action="version", version=f"rbdkit {__version__}")
    sub = parser.add_subparsers(required=True, metavar="command")

    p_eval = sub.add_parser("eval", help="closed-form system reliability at one time")
    p_eval.add_argument("--spec", required=True, help="path to a spec file")
    p_eval.add_argument("--time", required=True, type=float, help="time at which to evaluate")
    p_eval.set_defaults(handler=_cmd_eval)

    p_curve = sub.add_parser("curve", help="closed-form reliability curve")
    p_curve.add_argument("--spec", required=True, help="path to a spec file")
    p_curve.add_argument("--t-max", required=True, type=float, help="end of the time grid")
    p_curve.add_argument("--steps", required=True, type=int, help="number of grid steps")
    p_curve.add_argument("--format", choices=("csv", "json"), default="csv")
    p_curve.set_defaults(handler=_cmd_curve)

    p_sim = sub.add_parser("simulate", help="Monte Carlo estimate vs. closed form")
    p_sim.add_argument("--spec", required=True, help="path to a spec file")
    p_sim.add_argument("--time", required=True, type=float, help="time at which to estimate")
    p_sim.add_argument("--samples", type=int, default=1_000_000, help="sample count")
    p_sim.add_argument("--seed", type=_u64, default=0, help="RNG seed (unsigned 64-bit)")
    p_sim.set_defaults(handler=_cmd_simulate)

    p_check = sub.add_parser("check", help="run the full property suite")
    p_check.add_argument("--spec", required=True, help="path to a spec file")
    p_check.add_argument(
        "--t-max", type=float, default=50.0,
        help="end of the check grid (default 50 time units; arbitrary, adjust to your horizon)",
    )
    p_check.add_argument("--steps", type=int, default=50, help="grid steps (default 50)")
    p_check.add_argument("--samples", type=int, default=100_000, help="Monte Carlo samples")
    p_check.add_argument("--seed", type=_u64, default=0, help="RNG seed (unsigned 64-bit)")
    p_check.add_argument("--epsilon", type=float, default=1e-6, help="vanishing-tail threshold")
    p_check.set_defaults(handler=_cmd_check)

    return parser


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def _load_model(path: str) -> RbdModel:
    try:
        doc = parse_spec_file(path)
    except OSError as err:
        raise _Failure(EXIT_IO, f"cannot read {path}: {err.strerror or err}") from err
    except SpecParseError as err:
        lines = "\n".join(f"{path}:{issue}" for issue in err.issues)
        raise _Failure(EXIT_SPEC, f"invalid spec\n{lines}") from err
    return doc.model


def worker_count() -> int:
    """Worker threads for Monte Carlo runs, from RBD_THREADS (0/unset = auto)."""
    raw = os.environ.get("RBD_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        n = os.cpu_count() or 1
    return n


def _emit(text: str) -> None:
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")


def _cmd_eval(args: argparse.Namespace) -> int:
    model = _load_model(args.spec)
    try:
        value = evaluate(model, args.time)
    except ValueError as err:
        raise _Failure(EXIT_SPEC, str(err)) from err
    _emit(json.dumps({"schema": SCHEMA_VERSION, "t": args.time, "reliability": value}))
    return EXIT_OK


def _cmd_curve(args: argparse.Namespace) -> int:
    model = _load_model(args.spec)
    try:
        curve = reliability_curve(model, args.t_max, args.steps)
    except ValueError as err:
        raise _Failure(EXIT_SPEC, str(err)) from err
    if args.format == "csv":
        rows = ["t,reliability"]
        rows += [f"{_fmt_time(t)},{v!r}" for t, v in zip(curve.times, curve.values)]
        _emit("\n".join(rows))
    else:
        _emit(
            json.dumps(
                {
                    "schema": SCHEMA_VERSION,
                    "source": curve.source.value,
                    "t": list(curve.times),
                    "reliability": list(curve.values),
                }
            )
        )
    return EXIT_OK


def _fmt_time(t: float) -> str:
    return str(int(t)) if float(t).is_integer() else repr(t)


def _cmd_simulate(args: argparse.Namespace) -> int:
    model = _load_model(args.spec)
    try:
        cfg = McConfig(seed=args.seed, samples=args.samples)
        closed = evaluate(model, args.time)
        estimate = estimate_system_reliability(model, args.time, cfg, workers=worker_count())
    except ValueError as err:
        raise _Failure(EXIT_SPEC, str(err)) from err
    abs_error = abs(closed - estimate.p_hat)
    if estimate.std_err > 0.0:
        z = abs_error / estimate.std_err
    else:
        z = 0.0 if abs_error == 0.0 else None
    _emit(
        json.dumps(
            {
                "schema": SCHEMA_VERSION,
                "t": args.time,
                "samples": estimate.samples,
                "seed": args.seed,
                "chunk_size": cfg.chunk_size,
                "p_hat": estimate.p_hat,
                "std_err": estimate.std_err,
                "closed_form": closed,
                "abs_error": abs_error,
                "z": z,
            }
        )
    )
    return EXIT_OK


def _cmd_check(args: argparse.Namespace) -> int:
    model = _load_model(args.spec)
    try:
        report = run_property_suite(
            model,
            t_max=args.t_max,
            steps=args.steps,
            samples=args.samples,
            seed=args.seed,
            epsilon=args.epsilon,
            workers=worker_count(),
        )
    except ValueError as err:
        raise _Failure(EXIT_SPEC, str(err)) from err
    _emit(
        json.dumps(
            {
                "schema": SCHEMA_VERSION,
                "passed": report.passed,
                "checks": [
                    {"name": c.name, "passed": c.passed, "detail": c.detail}
                    for c in report.checks
                ],
            }
        )
    )
    return EXIT_OK if report.passed else EXIT_PROPERTY


def run_property_suite(
    model: RbdModel,
    *,
    t_max: float = 50.0,
    steps: int = 50,
    samples: int = 100_000,
    seed: int = 0,
    epsilon: float = 1e-6,
    workers: int = 1,
) -> PropertyReport:
    """The ``check`` subcommand's property suite as a library call.

    Covers: maximum reliability at time zero, a non-increasing system curve,
    the per-segment distribution properties, a vanishing system tail, the
    series product rule against both a direct product and the summed-rate
    closed form, the weakest-segment upper bound, Monte Carlo agreement at
    three probed times, and a mutual-independence sweep over sampled
    survival indicators.
    """
    grid = [t_max * i / steps for i in range(steps)] + [t_max]
    segments = model.segments()
    rates = [s.model.rate for s in segments]
    checks: list[PropertyCheck] = []

    r0 = evaluate(model, 0.0)
    checks.append(
        PropertyCheck("max_at_zero", r0 == 1.0, f"R(0) = {r0!r}")
    )

    values = [evaluate(model, t) for t in grid]
    rise = next(
        ((grid[i], grid[i + 1]) for i in range(len(values) - 1) if values[i + 1] > values[i]),
        None,
    )
    checks.append(
        PropertyCheck(
            "monotone_curve",
            rise is None,
            "non-increasing on grid" if rise is None else f"increases on {rise}",
        )
    )

    distinct = sorted({s.model.rate for s in segments})
    axiom_failures = []
    for rate in distinct:
        report = check_reliability_axioms(
            next(s.model for s in segments if s.model.rate == rate), grid, epsilon
        )
        axiom_failures += [f"rate={rate!r}:{c.name}" for c in report.failures()]
    checks.append(
        PropertyCheck(
            "segment_axioms",
            not axiom_failures,
            f"{len(distinct)} distinct rates on {len(grid)}-point grid"
            if not axiom_failures
            else "; ".join(axiom_failures),
        )
    )

    # Union bound: R_system(t) <= sum(exp(-rate_i t)) <= n exp(-min_rate t),
    # so the tail must fall below epsilon past log(n/epsilon)/min_rate.
    tail_threshold = math.log(len(segments) / epsilon) / min(rates)
    tail = [(t, v) for t, v in zip(grid, values) if t > tail_threshold]
    tail_bad = next((p for p in tail if p[1] >= epsilon), None)
    checks.append(
        PropertyCheck(
            "vanishing_tail",
            tail_bad is None,
            f"{len(tail)} grid points beyond t={tail_threshold!r}"
            if tail_bad is None
            else f"R({tail_bad[0]!r}) = {tail_bad[1]!r} >= {epsilon!r}",
        )
    )

    worst_product = 0.0
    bound_violation = None
    for t in grid:
        log_space = series_reliability(segments, t)
        direct = 1.0
        for s in segments:
            direct *= math.exp(-(s.model.rate * t))
        closed = pipeline_reliability_closed_form(rates, t)
        if direct > 1e-300:
            worst_product = max(
                worst_product,
                abs(log_space - direct) / direct,
                abs(closed - direct) / direct,
            )
        if log_space > series_min_bound(segments, t):
            bound_violation = t
    checks.append(
        PropertyCheck(
            "series_product_rule",
            worst_product <= 1e-12,
            f"max relative spread {worst_product:.3e} (log-space vs direct vs summed-rate)",
        )
    )
    checks.append(
        PropertyCheck(
            "min_bound",
            bound_violation is None,
            "series <= weakest segment on grid"
            if bound_violation is None
            else f"violated at t={bound_violation!r}",
        )
    )

    cfg = McConfig(seed=seed, samples=samples)
    mc_rows = []
    mc_ok = True
    for target in (0.9, 0.5, 0.2):
        t_probe = _invert_reliability(model, target)
        closed = evaluate(model, t_probe)
        estimate = estimate_system_reliability(model, t_probe, cfg, workers=workers)
        # Standard error under the closed-form hypothesis: stays meaningful
        # even when the empirical count is 0 or n.
        se = math.sqrt(max(closed * (1.0 - closed), 1e-30) / samples)
        z = abs(estimate.p_hat - closed) / se
        mc_ok = mc_ok and z <= 4.0
        mc_rows.append(f"t={t_probe:.6g} z={z:.3f}")
    checks.append(PropertyCheck("mc_oracle", mc_ok, "; ".join(mc_rows)))

    columns = segments[:MAX_INDEPENDENCE_COLUMNS]
    if len(columns) >= 2:
        medians = [math.log(2.0) / s.model.rate for s in columns]
        indicators = survival_indicator_matrix(columns, medians, cfg, workers=workers)
        independence = check_mutual_independence(indicators, tolerance_sigmas=5.0)
        failures = independence.failures()
        checks.append(
            PropertyCheck(
                "mutual_independence",
                independence.passed,
                f"{len(independence.checks)} subset checks at 5 sigma"
                if independence.passed
                else "; ".join(c.name for c in failures),
            )
        )
    else:
        checks.append(
            PropertyCheck(
                "mutual_independence", True, "skipped: fewer than 2 segments"
            )
        )

    return PropertyReport(tuple(checks))


def _invert_reliability(model: RbdModel, target: float) -> float:
    """Time at which the closed-form system reliability crosses ``target``."""
    lo, hi = 0.0, 1.0
    while evaluate(model, hi) > target:
        hi *= 2.0
        if hi > 1e12:
            break
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if evaluate(model, mid) > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


if __name__ == "__main__":
    sys.exit(main())
