import typing as t

import numpy as np
from scipy import special, stats

from poshrink import settings
from poshrink.core import exceptions


def log_gamma_fn(v: t.Union[float, np.ndarray]) -> t.Union[float, np.ndarray]:
    """
    Natural logarithm of the gamma function for positive arguments.

    :param v: Positive scalar or array.

    :return: ``log(Gamma(v))`` with the shape of ``v``.
    """
    v_arr = np.asarray(v, dtype=float)
    if np.any(~(v_arr > 0)):
        raise exceptions.DomainError(f"log-gamma is defined for positive arguments only, got {v}")
    result = special.gammaln(v_arr)
    return float(result) if result.ndim == 0 else result


def log_sum_exp(values: t.Sequence[float], weights: t.Optional[t.Sequence[float]] = None) -> float:
    """
    Stable ``log(sum(w * exp(values)))``. Returns ``-inf`` for an empty input.
    """
    values_arr = np.asarray(values, dtype=float)
    if values_arr.size == 0:
        return -np.inf
    return float(special.logsumexp(values_arr, b=weights))


def log_mean_exp(values: np.ndarray) -> float:
    values_arr = np.asarray(values, dtype=float)
    return float(special.logsumexp(values_arr) - np.log(values_arr.size))


def poisson_upper(mean: t.Union[float, np.ndarray]) -> t.Union[int, np.ndarray]:
    """
    Truncation point for Poisson sums: ``mean + k * sqrt(mean) + c`` with ``k`` and ``c`` from the settings.
    The neglected tail mass stays below 1e-14 for means up to 1e5.

    :param mean: Poisson mean(s).

    :return: Inclusive upper summation index.
    """
    mean_arr = np.asarray(mean, dtype=float)
    upper = np.ceil(mean_arr + settings.POISSON_TAIL_SIGMAS * np.sqrt(mean_arr) + settings.POISSON_TAIL_OFFSET)
    upper = upper.astype(np.int64)
    return int(upper) if upper.ndim == 0 else upper


def poisson_support(mean: float) -> t.Tuple[np.ndarray, np.ndarray]:
    """
    Truncated Poisson support and its probability mass.

    :param mean: Poisson mean, nonnegative.

    :return: Integer support ``0..upper`` and the matching pmf values.
    """
    if mean < 0:
        raise exceptions.InvalidArgumentError(f"Poisson mean must be nonnegative, got {mean}")
    support = np.arange(poisson_upper(mean) + 1)
    return support, stats.poisson.pmf(support, mean)


def poisson_expectation(func: t.Callable[[np.ndarray], np.ndarray], mean: float) -> float:
    """
    Expectation ``E[func(x)]`` for ``x ~ Poisson(mean)`` by a truncated sum.
    """
    support, pmf = poisson_support(mean)
    return float(np.dot(pmf, func(support)))


def poisson_box(means: np.ndarray, tail_mass: float) -> t.List[np.ndarray]:
    """
    Per-coordinate supports covering all but ``tail_mass`` of each Poisson marginal.

    :param means: Poisson means, one per coordinate.
    :param tail_mass: Upper tail probability dropped in every coordinate.

    :return: One integer support array per coordinate.
    """
    uppers = stats.poisson.isf(tail_mass, np.asarray(means, dtype=float))
    uppers = np.maximum(np.nan_to_num(np.atleast_1d(uppers), nan=0.0), 0.0)
    return [np.arange(int(upper) + 1) for upper in uppers]
