import logging
import typing as t

import numpy as np
from scipy import special, stats

from poshrink import settings
from poshrink.core import exceptions
from poshrink.core.problem import ArrayLike, ProblemSpec, as_vector
from poshrink.risk.schemas import RiskEstimate, RiskSettings

logger = logging.getLogger(__name__)

Rule = t.Callable[[np.ndarray], np.ndarray]


def estimator_kl_risk(
    rule: Rule,
    lam: ArrayLike,
    spec: ProblemSpec,
    truncation: t.Optional[int] = None,
) -> RiskEstimate:
    """
    Risk of the plug-in predictive ``Po(r * rule(x))`` for ``x``, i.e. the expected K-L divergence
    ``sum_i r_i (lambda_i log(lambda_i / lambda_hat_i) - lambda_i + lambda_hat_i)`` over ``x ~ Po(r * lambda)``.

    :param rule: Estimator mapping a count vector to rates. Rules with a true ``vectorized`` attribute receive the
        whole lattice as an ``(m, d)`` array.
    :param lam: Positive rates.
    :param spec: Problem specification.
    :param truncation: Largest count per coordinate. Defaults to the point leaving a tail mass of
        ``settings.ESTIMATOR_TAIL_MASS`` split across coordinates.

    :return: Exact truncated sum; an estimate of zero with ``lambda_i > 0`` gives an infinite value and a flag.
    """
    lam_vec = as_vector(lam, d=spec.d, name="lambda")
    if np.any(~(lam_vec > 0)):
        raise exceptions.InvalidArgumentError(f"Rates must be positive, got {lam_vec.tolist()}")
    means = spec.r_array * lam_vec
    if truncation is None:
        uppers = stats.poisson.isf(settings.ESTIMATOR_TAIL_MASS / spec.d, means).astype(int)
    else:
        uppers = np.full(spec.d, int(truncation))
    size = int(np.prod(uppers + 1))
    if size > settings.ESTIMATOR_MAX_POINTS:
        raise exceptions.CostLimitError(
            f"The truncated lattice has {size} points, more than {settings.ESTIMATOR_MAX_POINTS}"
        )
    grids = np.meshgrid(*[np.arange(u + 1) for u in uppers], indexing="ij")
    points = np.stack([g.reshape(-1) for g in grids], axis=1)
    log_pmf = sum(stats.poisson.logpmf(points[:, i], means[i]) for i in range(spec.d))

    if getattr(rule, "vectorized", False):
        estimates = np.asarray(rule(points), dtype=float)
    else:
        estimates = np.array([rule(point) for point in points], dtype=float)
    estimates = estimates.reshape(points.shape)

    with np.errstate(divide="ignore"):
        losses = spec.r_array * (
            special.xlogy(lam_vec, lam_vec) - lam_vec * np.log(estimates) - lam_vec + estimates
        )
    loss = losses.sum(axis=1)
    flags = []
    if np.any(np.isinf(loss) & (log_pmf > -np.inf)):
        flags.append("infinite-risk")
        logger.warning("The estimator returns zero for a positive rate; the risk is infinite")
        value = np.inf
    else:
        value = float(np.dot(np.exp(log_pmf), loss))
    return RiskEstimate(
        value=value,
        std_error=0.0,
        method="exact-sum",
        settings=RiskSettings(truncation=f"x_i <= {uppers.tolist()}"),
        flags=flags,
    )
