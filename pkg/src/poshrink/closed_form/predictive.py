"""
Closed-form predictive distributions for the power prior ``prod lambda_i^(beta_i - 1)`` (Jeffreys at ``beta = 1/2``)
and for the gamma prior ``prod lambda_i^(beta_i - 1) exp(-alpha_i lambda_i)``. Both predictives are products of
negative binomial laws, evaluated in log space.
"""

import typing as t

import numpy as np
from scipy import special

from poshrink.core import exceptions, rng
from poshrink.core.problem import ArrayLike, CountVector, ProblemSpec, as_counts, as_vector

JEFFREYS_BETA = 0.5


def _check_beta(beta: ArrayLike, d: int) -> np.ndarray:
    beta_vec = as_vector(beta, d=d, name="beta")
    if np.any(~(beta_vec > 0)):
        raise exceptions.InvalidArgumentError(f"`beta` must be positive, got {beta_vec.tolist()}")
    return beta_vec


def _check_alpha(alpha: ArrayLike, d: int) -> np.ndarray:
    alpha_vec = as_vector(alpha, d=d, name="alpha")
    if np.any(~(alpha_vec >= 0)):
        raise exceptions.InvalidArgumentError(f"`alpha` must be nonnegative, got {alpha_vec.tolist()}")
    return alpha_vec


def log_predictive_gamma_terms(
    x: t.Union[CountVector, ArrayLike],
    y: t.Union[CountVector, ArrayLike],
    alpha: ArrayLike,
    beta: ArrayLike,
    spec: ProblemSpec,
) -> np.ndarray:
    """
    Per-coordinate log-pmf terms of the gamma-prior predictive. ``y`` may carry a leading batch axis.

    :return: Array of shape ``y.shape`` holding one term per coordinate.
    """
    x_arr = as_counts(x, d=spec.d, name="x")
    y_arr = as_counts(y, d=spec.d, name="y")
    alpha_vec = _check_alpha(alpha, spec.d)
    beta_vec = _check_beta(beta, spec.d)
    r, s = spec.r_array, spec.s_array
    shape = x_arr + beta_vec
    return (
        shape * np.log((r + alpha_vec) / (r + s + alpha_vec))
        + special.xlogy(y_arr, s / (r + s + alpha_vec))
        + special.gammaln(x_arr + y_arr + beta_vec)
        - special.gammaln(shape)
        - special.gammaln(y_arr + 1)
    )


def log_predictive_gamma(
    x: t.Union[CountVector, ArrayLike],
    y: t.Union[CountVector, ArrayLike],
    alpha: ArrayLike,
    beta: ArrayLike,
    spec: ProblemSpec,
) -> t.Union[float, np.ndarray]:
    """
    Log-pmf of ``y`` under the gamma-prior predictive given ``x``. ``alpha = 0`` gives the power prior.

    :param x: Observed counts over durations ``r``.
    :param y: Future counts over durations ``s``, optionally batched as ``(n, d)``.
    :param alpha: Nonnegative rate parameters of the gamma prior.
    :param beta: Positive shape parameters.
    :param spec: Problem specification.

    :return: Log probability (array for batched ``y``).
    """
    terms = log_predictive_gamma_terms(x, y, alpha, beta, spec)
    total = terms.sum(axis=-1)
    return float(total) if np.ndim(total) == 0 else total


def log_predictive_power(
    x: t.Union[CountVector, ArrayLike],
    y: t.Union[CountVector, ArrayLike],
    beta: ArrayLike,
    spec: ProblemSpec,
) -> t.Union[float, np.ndarray]:
    """
    Log-pmf of ``y`` under the power-prior predictive given ``x``.

    :param x: Observed counts.
    :param y: Future counts, optionally batched as ``(n, d)``.
    :param beta: Positive exponents; ``0.5`` everywhere is the Jeffreys predictive.
    :param spec: Problem specification.

    :return: Log probability.
    """
    return log_predictive_gamma(x, y, 0.0, beta, spec)


def bayes_estimator_power(x: t.Union[CountVector, ArrayLike], beta: ArrayLike, spec: ProblemSpec) -> np.ndarray:
    """
    Posterior mean of the rates under the power prior, ``(x_i + beta_i) / r_i``.
    """
    x_arr = as_counts(x, d=spec.d, name="x")
    return (x_arr + _check_beta(beta, spec.d)) / spec.r_array


def bayes_estimator_gamma(
    x: t.Union[CountVector, ArrayLike], alpha: ArrayLike, beta: ArrayLike, spec: ProblemSpec
) -> np.ndarray:
    x_arr = as_counts(x, d=spec.d, name="x")
    return (x_arr + _check_beta(beta, spec.d)) / (spec.r_array + _check_alpha(alpha, spec.d))


def sample_predictive_gamma(
    x: t.Union[CountVector, ArrayLike],
    alpha: ArrayLike,
    beta: ArrayLike,
    spec: ProblemSpec,
    n: int,
    seed: t.Optional[int] = None,
) -> np.ndarray:
    """
    Draw from the gamma-prior predictive as a gamma-Poisson mixture: ``lambda_i ~ Gamma(x_i + beta_i, r_i + alpha_i)``
    then ``y_i ~ Poisson(s_i lambda_i)``.

    :param n: Number of draws, at least one.
    :param seed: Seed of the random stream.

    :return: Int64 array of shape ``(n, d)``.
    """
    if n < 1:
        raise exceptions.InvalidArgumentError(f"Sample count must be at least 1, got {n}")
    x_arr = as_counts(x, d=spec.d, name="x")
    generator = rng.substream(seed)
    lam = rng.sample_gamma(
        generator, x_arr + _check_beta(beta, spec.d), spec.r_array + _check_alpha(alpha, spec.d), n
    )
    return generator.poisson(lam * spec.s_array).astype(np.int64)


def sample_predictive_power(
    x: t.Union[CountVector, ArrayLike],
    beta: ArrayLike,
    spec: ProblemSpec,
    n: int,
    seed: t.Optional[int] = None,
) -> np.ndarray:
    return sample_predictive_gamma(x, 0.0, beta, spec, n, seed)
