import numpy as np
from scipy import stats

from poshrink.core import exceptions
from poshrink.core.special import poisson_expectation

LEMMA_TRUNCATION = 20


def lemma_L(lam: float, truncation: int = LEMMA_TRUNCATION) -> float:
    """
    ``lambda * sum_{x <= truncation} log(x + 1/2) Po(x; lambda) - lambda log(lambda)``. The dropped terms are all
    positive, so this bounds :func:`lemma_f` from below.
    """
    if not lam > 0:
        raise exceptions.InvalidArgumentError(f"`lambda` must be positive, got {lam}")
    support = np.arange(truncation + 1)
    return float(lam * np.dot(np.log(support + 0.5), stats.poisson.pmf(support, lam)) - lam * np.log(lam))


def lemma_f(lam: float) -> float:
    """
    ``lambda * E[log((x + 1/2) / lambda)]`` for ``x ~ Po(lambda)``, with adaptive truncation.
    """
    if not lam > 0:
        raise exceptions.InvalidArgumentError(f"`lambda` must be positive, got {lam}")
    return lam * poisson_expectation(lambda x: np.log((x + 0.5) / lam), lam)


def lemma_f_derivative_bound(t: float, lam: float) -> float:
    """
    Derivative in ``t`` of the per-coordinate Jeffreys risk, ``1/(2t) - E[lambda log((x + 1/2)/(t lambda))]`` with
    ``x ~ Po(t lambda)``; staying below ``0.52 / t`` yields the Jeffreys upper bound.
    """
    if not t > 0 or not lam > 0:
        raise exceptions.InvalidArgumentError(f"`t` and `lambda` must be positive, got t={t}, lambda={lam}")
    return 1 / (2 * t) - lemma_f(t * lam) / t
