"""
Command line entry point: ``poshrink <command> [options]``.

Structured results are written as JSON with sorted keys, tabular results as CSV. Exit codes: 0 success,
2 invalid arguments, 3 numerical failure, 4 I/O failure.
"""

import argparse
import json
import logging
import os
import sys
import typing as t

import numpy as np
from smart_open import open

from poshrink import settings
from poshrink.cli import exception_handlers
from poshrink.cli.ingest import CountTable, ingest_counts
from poshrink.conditions import certify_builtin, check_fineq
from poshrink.core import exceptions
from poshrink.core.problem import ProblemSpec
from poshrink.experiments import eval_metrics, run_experiment, sweep_leave_one_out_metrics, write_experiment
from poshrink.f_integral.service import FIntegralService
from poshrink.predictive import log_predictive, predictive_mean, sample_predictive
from poshrink.priors import GammaPrior, PriorSpec, as_f_prior, parse_prior, parse_priors
from poshrink.risk import kl_risk, lemma_L, minimax_bounds, risk_gap_gamma, risk_reduction_f
from poshrink.risk.lemma import LEMMA_TRUNCATION

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def parse_floats(text: str, name: str) -> t.List[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise exceptions.InvalidArgumentError(f"`--{name}` expects comma separated numbers, got {text!r}")


def parse_ints(text: str, name: str) -> t.List[int]:
    values = parse_floats(text, name)
    if any(v != int(v) for v in values):
        raise exceptions.InvalidArgumentError(f"`--{name}` expects integers, got {text!r}")
    return [int(v) for v in values]


def parse_grid(text: str) -> np.ndarray:
    """
    ``a,b,k`` is ``k`` log-spaced points between ``a`` and ``b``.
    """
    values = parse_floats(text, "grid")
    if len(values) != 3 or values[2] != int(values[2]) or values[2] < 1:
        raise exceptions.InvalidArgumentError(f"`--grid` expects `a,b,k` with integer k >= 1, got {text!r}")
    if not values[0] > 0 or not values[1] > 0:
        raise exceptions.InvalidArgumentError(f"`--grid` bounds must be positive, got {text!r}")
    return np.geomspace(values[0], values[1], int(values[2]))


def build_spec(args: argparse.Namespace, d: t.Optional[int] = None) -> ProblemSpec:
    return ProblemSpec.from_durations(
        parse_floats(args.r, "r"), parse_floats(args.s, "s"), d=d, theta_scale=args.theta_scale
    )


def read_counts(value: str) -> CountTable:
    """
    ``value`` is either a count file or an inline comma separated vector.
    """
    if os.path.exists(value) or "://" in value:
        return ingest_counts(value)
    x = parse_ints(value, "x")
    return CountTable(ids=[str(i + 1) for i in range(len(x))], x=np.array(x, dtype=np.int64), y=None)


def write_json(payload: t.Any, path: t.Optional[str]) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w") as f:
        f.write(text)
    logger.info(f"Wrote {path}")


def make_service(args: argparse.Namespace) -> FIntegralService:
    return FIntegralService(backend=args.backend, n=args.f_samples, seed=args.seed)


def prior_summary(label: str, prior: PriorSpec) -> t.Dict[str, t.Any]:
    return {"expression": label, "spec": json.loads(prior.json())}


def predict(args: argparse.Namespace) -> int:
    table = read_counts(args.x)
    spec = build_spec(args, d=table.d)
    prior = parse_prior(args.prior, spec.d)
    service = make_service(args)
    payload: t.Dict[str, t.Any] = {"ids": table.ids, "prior": prior_summary(args.prior, prior)}
    if args.emit == "mean":
        payload["mean"] = predictive_mean(prior, table.x, spec, service).tolist()
    elif args.emit == "loglik":
        y = np.array(parse_ints(args.y, "y")) if args.y else table.y
        if y is None:
            raise exceptions.InvalidArgumentError("`--emit loglik` needs targets: pass `--y` or a file with a y column")
        payload["loglik"] = log_predictive(prior, table.x, y, spec, service)
    else:
        payload["samples"] = sample_predictive(prior, table.x, spec, args.n or 1, seed=args.seed).tolist()
        payload["seed"] = args.seed
    write_json(payload, args.out)
    return exception_handlers.EXIT_OK


def _risk_inputs(args: argparse.Namespace) -> t.Tuple[np.ndarray, ProblemSpec, PriorSpec]:
    lam = np.array(parse_floats(args.lam, "lambda"))
    spec = build_spec(args, d=lam.size)
    return lam, spec, parse_prior(args.prior, spec.d)


def risk(args: argparse.Namespace) -> int:
    lam, spec, prior = _risk_inputs(args)
    estimate = kl_risk(
        prior, lam, spec, n=args.n, seed=args.seed, method=args.method, service=make_service(args), threads=args.threads
    )
    write_json({"prior": prior_summary(args.prior, prior), "lambda": lam.tolist(), "risk": estimate.dict()}, args.out)
    return exception_handlers.EXIT_OK


def risk_diff(args: argparse.Namespace) -> int:
    """
    Risk of the power prior with the same ``beta`` minus the risk of the given prior.
    """
    lam, spec, prior = _risk_inputs(args)
    if isinstance(prior, GammaPrior):
        gap = risk_gap_gamma(lam, prior.alpha_array, prior.beta_array, spec)
        estimate = {"value": -gap, "std_error": 0.0, "method": "exact-sum", "flags": []}
    else:
        estimate = risk_reduction_f(
            as_f_prior(prior),
            lam,
            spec,
            n=args.n,
            seed=args.seed,
            method=args.method,
            service=make_service(args),
            threads=args.threads,
        ).dict()
    write_json({"prior": prior_summary(args.prior, prior), "lambda": lam.tolist(), "reduction": estimate}, args.out)
    return exception_handlers.EXIT_OK


def bounds(args: argparse.Namespace) -> int:
    result = minimax_bounds(build_spec(args))
    sys.stdout.write(f"lower={result.lower:.7f} upper={result.upper:.7f} ratio={result.ratio:.7g}\n")
    return exception_handlers.EXIT_OK


def check(args: argparse.Namespace) -> int:
    r_grid = [parse_floats(item, "r-grid") for item in args.r_grid.split(";") if item.strip()]
    lengths = [len(parse_floats(args.r, "r")), len(parse_floats(args.s, "s"))] + [len(r) for r in r_grid]
    d = args.d or max(lengths)
    spec = build_spec(args, d=d)
    prior = parse_prior(args.prior, spec.d)
    if isinstance(prior, GammaPrior):
        raise exceptions.InvalidArgumentError("Gamma priors have no shrinkage factor to check")
    prior = as_f_prior(prior)
    report = check_fineq(
        prior, spec, r_grid, args.zmax, tol_rel=args.tol, service=make_service(args), threads=args.threads
    )
    payload = json.loads(report.json(by_alias=True, exclude={"entries"}))
    payload["prior"] = prior_summary(args.prior, prior)
    if args.certify:
        payload["certificate"] = json.loads(certify_builtin(prior).json())
    write_json(payload, args.out)
    return exception_handlers.EXIT_OK


def experiment(args: argparse.Namespace) -> int:
    grid = parse_grid(args.grid) if args.grid else None
    result = run_experiment(
        args.id,
        lambda_grid=grid,
        n=args.n,
        seed=args.seed,
        method=args.method,
        threads=args.threads,
        sensitivity=args.sensitivity,
    )
    if "://" not in args.out:
        os.makedirs(args.out, exist_ok=True)
    for path in write_experiment(result, args.out):
        sys.stdout.write(f"{path}\n")
    return exception_handlers.EXIT_OK


def evaluate(args: argparse.Namespace) -> int:
    table = ingest_counts(args.data)
    if not table.has_targets:
        raise exceptions.InvalidArgumentError(f"`{args.data}` has no y column; evaluation needs future counts")
    spec = build_spec(args, d=table.d)
    service = make_service(args)
    results = []
    for label, prior in parse_priors(args.priors, spec.d):
        logger.info(f"Evaluating {label}")
        metrics = eval_metrics(table.x, table.y, prior, spec, service)
        results.append({"prior": prior_summary(label, prior), "metrics": metrics.dict()})
    payload: t.Dict[str, t.Any] = {"d": spec.d, "results": results}
    if args.subspace_sweep:
        payload["subspace_sweep"] = sweep_leave_one_out_metrics(
            table.x, table.y, spec, alpha=args.alpha, service=service
        ).dict()
    write_json(payload, args.out)
    return exception_handlers.EXIT_OK


def lemma_l(args: argparse.Namespace) -> int:
    for lam in parse_floats(args.lam, "lambda"):
        sys.stdout.write(f"lambda={lam:g} L={lemma_L(lam, args.trunc):.10g}\n")
    return exception_handlers.EXIT_OK


def _add_durations(parser: argparse.ArgumentParser, required: bool = True) -> None:
    parser.add_argument("--r", type=str, required=required, default="1", help="Observation durations, comma separated")
    parser.add_argument("--s", type=str, required=required, default="1", help="Prediction durations, comma separated")


def _add_sampling(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, default=None, help="Number of Monte Carlo samples")
    parser.add_argument("--seed", type=int, default=settings.DEFAULT_SEED, help="Seed of the random streams")
    parser.add_argument(
        "--f-samples", type=int, default=None, help="Monte Carlo samples per F evaluation (non-separable priors)"
    )
    parser.add_argument(
        "--backend", choices=["auto", "quadrature", "monte-carlo"], default="auto", help="F evaluation backend"
    )


def _add_method(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--method", choices=["auto", "hybrid", "monte-carlo"], default="auto", help="Risk reduction method"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poshrink",
        allow_abbrev=False,
        description="Shrinkage predictive distributions for independent Poisson processes under K-L loss",
    )
    parser.add_argument("--threads", type=int, default=None, help="Worker threads (env POSHRINK_THREADS)")
    parser.add_argument(
        "--log-level",
        type=str.lower,
        choices=["debug", "info", "warning", "error"],
        default=settings.LOG_LEVEL.lower(),
        help="Logging level",
    )
    parser.add_argument(
        "--theta-scale",
        choices=["gamma", "unit"],
        default="gamma",
        help="Shrinkage coordinates: gamma uses theta_i = sqrt(lambda_i / gamma_i) for different durations, "
        "unit uses theta_i = sqrt(lambda_i) as in the simulation studies",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser("predict", help="Predictive mean, log-likelihood or samples")
    sub.add_argument("--x", type=str, required=True, help="Count file or inline counts")
    sub.add_argument("--y", type=str, default=None, help="Inline future counts for `--emit loglik`")
    sub.add_argument("--prior", type=str, required=True, help="Prior expression")
    sub.add_argument("--emit", choices=["mean", "loglik", "sample"], default="mean")
    sub.add_argument("--out", type=str, default=None, help="Output JSON path, stdout when omitted")
    _add_durations(sub)
    _add_sampling(sub)
    sub.set_defaults(handler=predict)

    for name, handler, help_text in (
        ("risk", risk, "K-L risk of a predictive distribution"),
        ("risk-diff", risk_diff, "Risk reduction over the power prior with the same beta"),
    ):
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument("--prior", type=str, required=True, help="Prior expression")
        sub.add_argument("--lambda", dest="lam", type=str, required=True, help="Rates, comma separated")
        sub.add_argument("--out", type=str, default=None, help="Output JSON path, stdout when omitted")
        _add_durations(sub)
        _add_sampling(sub)
        _add_method(sub)
        sub.set_defaults(handler=handler)

    sub = commands.add_parser("bounds", help="Minimax lower bound and Jeffreys upper bound")
    _add_durations(sub)
    sub.set_defaults(handler=bounds)

    sub = commands.add_parser("check", help="Grid check of the dominance inequality")
    sub.add_argument("--prior", type=str, required=True, help="Prior expression")
    sub.add_argument("--r-grid", type=str, required=True, help="Durations to test, `;` separated lists")
    sub.add_argument("--zmax", type=int, required=True, help="Largest total count")
    sub.add_argument("--tol", type=float, default=None, help="Relative tolerance")
    sub.add_argument("--d", type=int, default=None, help="Dimension when every list is a scalar")
    sub.add_argument("--certify", action="store_true", help="Embed the proposition certificate")
    sub.add_argument("--out", type=str, default=None, help="Output JSON path, stdout when omitted")
    _add_durations(sub, required=False)
    _add_sampling(sub)
    sub.set_defaults(handler=check)

    sub = commands.add_parser("experiment", help="Run a simulation study and write plot data")
    sub.add_argument("id", type=int, choices=[1, 2, 3, 4])
    sub.add_argument("--grid", type=str, default=None, help="`a,b,k`: k log-spaced values of Lambda in [a, b]")
    sub.add_argument("--sensitivity", action="store_true", help="Rerun smoothed priors with a larger epsilon")
    sub.add_argument("--out", type=str, required=True, help="Output directory")
    _add_sampling(sub)
    _add_method(sub)
    sub.set_defaults(handler=experiment)

    sub = commands.add_parser("evaluate", help="Score priors against realised counts")
    sub.add_argument("--data", type=str, required=True, help="Count file with header unit_id,x,y")
    sub.add_argument("--priors", type=str, required=True, help="`;` separated prior expressions")
    sub.add_argument("--subspace-sweep", action="store_true", help="Also sweep leave-one-out subspace priors")
    sub.add_argument("--alpha", type=float, default=None, help="Shrinkage exponent of the sweep")
    sub.add_argument("--out", type=str, default=None, help="Output JSON path, stdout when omitted")
    _add_durations(sub)
    _add_sampling(sub)
    sub.set_defaults(handler=evaluate)

    sub = commands.add_parser("lemma-l", help="Truncated lower bound L(lambda) of the Jeffreys risk derivative")
    sub.add_argument("--lambda", dest="lam", type=str, required=True, help="Rates, comma separated")
    sub.add_argument("--trunc", type=int, default=LEMMA_TRUNCATION, help="Truncation of the Poisson sum")
    sub.set_defaults(handler=lemma_l)
    return parser


def configure_logging(level: str) -> None:
    logging.basicConfig(level=level.upper(), format=LOG_FORMAT, stream=sys.stderr, force=True)


def main(argv: t.Optional[t.Sequence[str]] = None) -> int:
    """
    Run one command.

    :param argv: Arguments without the program name. Defaults to ``sys.argv[1:]``.

    :return: Process exit code.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0) and exception_handlers.EXIT_INVALID_ARGUMENT
    configure_logging(args.log_level)
    if args.threads is not None and args.threads < 1:
        return exception_handlers.invalid_argument_error_handler(
            exceptions.InvalidArgumentError(f"`--threads` must be positive, got {args.threads}")
        )
    try:
        return args.handler(args)
    except Exception as e:
        return exception_handlers.handle_exception(e)


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
