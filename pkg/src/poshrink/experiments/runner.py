"""
Run a simulation study: risk reductions of every prior of an experiment over a grid of ``Lambda``.
Tasks are seeded by their index, so results do not depend on the number of workers.
"""

import concurrent.futures
import logging
import typing as t

import numpy as np
from pydantic import BaseModel, Field

from poshrink import settings
from poshrink.core import exceptions, rng
from poshrink.experiments.catalog import ExperimentDefinition, default_lambda_grid, get_experiment
from poshrink.f_integral.service import FIntegralService
from poshrink.risk.bounds import minimax_bounds
from poshrink.risk.kl_risk import kl_risk_power, risk_reduction_f

logger = logging.getLogger(__name__)


class ReductionRow(BaseModel):
    Lambda: float
    prior: str
    reduction: float
    se: float
    method: str


class RiskRow(BaseModel):
    Lambda: float
    prior: str
    risk: float
    se: float


class ExperimentSettings(BaseModel):
    experiment: int
    seed: int
    n: int
    method: str
    lambda_grid: t.List[float]
    base: t.List[float]
    priors: t.Dict[str, t.Dict[str, t.Any]]
    epsilon_sensitivity: t.Optional[float] = None


class ExperimentResult(BaseModel):
    settings: ExperimentSettings
    rows: t.List[ReductionRow]
    risks: t.List[RiskRow] = Field(default_factory=list)
    sensitivity: t.List[ReductionRow] = Field(default_factory=list)
    minimax_lower: float


def _reduction_task(
    definition: ExperimentDefinition,
    scale: float,
    name: str,
    service: FIntegralService,
    n: int,
    seed: int,
    method: str,
    epsilon: t.Optional[float] = None,
) -> ReductionRow:
    prior = next(p.prior for p in definition.priors if p.name == name)
    if epsilon is not None:
        prior = prior.with_epsilon(epsilon)
    logger.info(f"Experiment {definition.id}: {name} at Lambda={scale:.6g}")
    estimate = risk_reduction_f(
        prior, definition.rates(scale), definition.spec, n=n, seed=seed, method=method, service=service, threads=1
    )
    return ReductionRow(
        Lambda=scale, prior=name, reduction=estimate.value, se=estimate.std_error, method=estimate.method
    )


def run_experiment(
    experiment_id: int,
    lambda_grid: t.Optional[t.Sequence[float]] = None,
    n: t.Optional[int] = None,
    seed: t.Optional[int] = None,
    method: str = "auto",
    threads: t.Optional[int] = None,
    priors: t.Optional[t.Sequence[str]] = None,
    sensitivity: bool = False,
) -> ExperimentResult:
    """
    Risk reductions over Jeffreys for the priors of one experiment.

    :param experiment_id: 1 to 4.
    :param lambda_grid: Positive scales ``Lambda``. Defaults to a log-spaced grid from the settings.
    :param n: Coupled samples per Monte Carlo risk evaluation.
    :param seed: Global seed; task ``k`` uses the substream ``(seed, k)``.
    :param method: Risk reduction method, see :func:`poshrink.risk.risk_reduction_f`.
    :param threads: Worker threads.
    :param priors: Restrict the run to these prior names.
    :param sensitivity: Rerun smoothed priors with ``settings.SMOOTHING_EPSILON_SENSITIVITY``.

    :return: Rows sorted by ``(Lambda, prior)``, with absolute risks when the experiment reports them.
    """
    definition = get_experiment(experiment_id)
    grid = default_lambda_grid() if lambda_grid is None else np.asarray(lambda_grid, dtype=float)
    if grid.size == 0 or np.any(~(grid > 0)):
        raise exceptions.InvalidArgumentError(f"`Lambda` values must be positive, got {grid.tolist()}")
    n = n or settings.RISK_SAMPLES
    seed = settings.DEFAULT_SEED if seed is None else seed
    names = [p.name for p in definition.priors]
    if priors:
        unknown = set(priors) - set(names)
        if unknown:
            raise exceptions.InvalidArgumentError(f"Unknown priors {sorted(unknown)} for experiment {experiment_id}")
        names = [name for name in names if name in priors]
    smoothed = [p.name for p in definition.priors if p.name in names and p.prior.epsilon > 0]

    service = FIntegralService(seed=seed)
    tasks = [(scale, name, None) for scale in grid for name in names]
    if sensitivity:
        tasks += [(scale, name, settings.SMOOTHING_EPSILON_SENSITIVITY) for scale in grid for name in smoothed]

    def run(indexed: t.Tuple[int, t.Tuple[float, str, t.Optional[float]]]) -> ReductionRow:
        index, (scale, name, epsilon) = indexed
        return _reduction_task(
            definition, float(scale), name, service, n, rng.derive_seed(seed, index), method, epsilon
        )

    with concurrent.futures.ThreadPoolExecutor(max_workers=threads or settings.THREADS) as executor:
        results = list(executor.map(run, enumerate(tasks)))
    primary = results[: len(grid) * len(names)]
    extra = results[len(grid) * len(names) :]
    rows = sorted(primary, key=lambda row: (row.Lambda, row.prior))

    spec = definition.spec
    risks = []
    if definition.report_risks:
        for scale in grid:
            jeffreys = kl_risk_power(definition.rates(scale), 0.5, spec).value
            risks.append(RiskRow(Lambda=float(scale), prior="jeffreys", risk=jeffreys, se=0.0))
            for row in rows:
                if row.Lambda == float(scale):
                    risks.append(RiskRow(Lambda=row.Lambda, prior=row.prior, risk=jeffreys - row.reduction, se=row.se))
        risks.sort(key=lambda row: (row.Lambda, row.prior))

    return ExperimentResult(
        settings=ExperimentSettings(
            experiment=experiment_id,
            seed=seed,
            n=n,
            method=method,
            lambda_grid=grid.tolist(),
            base=list(definition.base),
            priors={p.name: p.prior.dict() for p in definition.priors if p.name in names},
            epsilon_sensitivity=settings.SMOOTHING_EPSILON_SENSITIVITY if sensitivity else None,
        ),
        rows=rows,
        risks=risks,
        sensitivity=sorted(extra, key=lambda row: (row.Lambda, row.prior)),
        minimax_lower=minimax_bounds(spec).lower,
    )
