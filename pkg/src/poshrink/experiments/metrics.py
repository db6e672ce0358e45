"""
Distances between a predicted mean vector and realised counts, and the log-likelihood of the realised counts under a
predictive distribution.
"""

import logging
import typing as t

import numpy as np
from pydantic import BaseModel, Field
from scipy import special

from poshrink.core import exceptions
from poshrink.core.problem import ArrayLike, CountVector, ProblemSpec, as_counts
from poshrink.f_integral.service import FIntegralService
from poshrink.predictive import log_predictive, predictive_mean
from poshrink.priors import families
from poshrink.priors.spec import FPrior, PriorSpec

logger = logging.getLogger(__name__)

METRIC_NAMES = ("kl_dist", "ws_dist", "loglik")


class Metrics(BaseModel):
    kl_dist: float = Field(example=101.1)
    ws_dist: float = Field(example=218.7)
    loglik: float = Field(example=-165.1)
    flags: t.List[str] = Field(default_factory=list)


class MetricSummary(BaseModel):
    metric: str
    max: float
    min: float
    mean: float


class SweepReport(BaseModel):
    alpha: float
    per_prior: t.List[Metrics]
    summary: t.List[MetricSummary]


def kl_distance(y_hat: ArrayLike, y: ArrayLike) -> float:
    """
    ``sum(y_hat - y - y * (log(y_hat) - log(y)))`` with ``0 log 0 = 0``.

    :return: Nonnegative distance, ``inf`` when some ``y_hat_i = 0 < y_i``.
    """
    y_hat_arr = np.asarray(y_hat, dtype=float)
    y_arr = np.asarray(y, dtype=float)
    if y_hat_arr.shape != y_arr.shape:
        raise exceptions.InvalidArgumentError(f"Shapes differ: {y_hat_arr.shape} and {y_arr.shape}")
    if np.any(y_hat_arr < 0) or np.any(y_arr < 0):
        raise exceptions.InvalidArgumentError("Predictions and counts must be nonnegative")
    with np.errstate(divide="ignore"):
        terms = y_hat_arr - y_arr - special.xlogy(y_arr, y_hat_arr) + special.xlogy(y_arr, y_arr)
    return float(np.sum(terms))


def ws_distance(y_hat: ArrayLike, y: ArrayLike) -> float:
    """
    Weighted squared distance ``sum((y_hat - y)^2 / (y + 1))``.
    """
    y_hat_arr = np.asarray(y_hat, dtype=float)
    y_arr = np.asarray(y, dtype=float)
    if y_hat_arr.shape != y_arr.shape:
        raise exceptions.InvalidArgumentError(f"Shapes differ: {y_hat_arr.shape} and {y_arr.shape}")
    return float(np.sum((y_hat_arr - y_arr) ** 2 / (y_arr + 1.0)))


def eval_metrics(
    x: t.Union[CountVector, ArrayLike],
    y: t.Union[CountVector, ArrayLike],
    prior: PriorSpec,
    spec: ProblemSpec,
    service: t.Optional[FIntegralService] = None,
) -> Metrics:
    """
    Score a predictive distribution against realised counts.

    :param x: Observed counts.
    :param y: Realised future counts.
    :param prior: Any prior specification.
    :param spec: Problem specification.
    :param service: F evaluator shared across priors.

    :return: K-L distance and weighted squared distance of the predictive mean, and the log-likelihood of ``y``.
    """
    x_arr = as_counts(x, d=spec.d, name="x")
    y_arr = as_counts(y, d=spec.d, name="y")
    y_hat = predictive_mean(prior, x_arr, spec, service)
    kl_dist = kl_distance(y_hat, y_arr)
    flags = []
    if np.isinf(kl_dist):
        logger.warning("Predictive mean vanishes where counts are positive; K-L distance is infinite")
        flags.append("infinite-kl-distance")
    return Metrics(
        kl_dist=kl_dist,
        ws_dist=ws_distance(y_hat, y_arr),
        loglik=log_predictive(prior, x_arr, y_arr, spec, service),
        flags=flags,
    )


def summarize_metrics(metrics: t.Sequence[Metrics]) -> t.List[MetricSummary]:
    summary = []
    for name in METRIC_NAMES:
        values = np.array([getattr(m, name) for m in metrics], dtype=float)
        summary.append(MetricSummary(metric=name, max=values.max(), min=values.min(), mean=values.mean()))
    return summary


def sweep_leave_one_out_metrics(
    x: t.Union[CountVector, ArrayLike],
    y: t.Union[CountVector, ArrayLike],
    spec: ProblemSpec,
    alpha: t.Optional[float] = None,
    service: t.Optional[FIntegralService] = None,
) -> SweepReport:
    """
    Evaluate every prior that shrinks towards a single-coordinate-dropped subspace and summarise each metric.

    :param alpha: Shrinkage exponent. Defaults to ``(d - 3) / 2``, the largest the coordinate-subspace family allows.

    :return: Metrics per left-out coordinate with their maximum, minimum and mean.
    """
    if spec.d < 4:
        raise exceptions.UnsupportedDimensionError(f"Leave-one-out subspace priors need d >= 4, got d={spec.d}")
    alpha = (spec.d - 3) / 2 if alpha is None else alpha
    service = service or FIntegralService()
    x_arr = as_counts(x, d=spec.d, name="x")
    y_arr = as_counts(y, d=spec.d, name="y")
    per_prior = []
    for index, family in enumerate(families.leave_one_out_subspaces(spec.d, alpha)):
        logger.info(f"Leave-one-out sweep: dropping coordinate {index + 1} of {spec.d}")
        prior = FPrior.build(family, spec.d, beta=0.5)
        per_prior.append(eval_metrics(x_arr, y_arr, prior, spec, service))
    return SweepReport(alpha=alpha, per_prior=per_prior, summary=summarize_metrics(per_prior))
