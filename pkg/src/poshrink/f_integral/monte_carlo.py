"""
Monte Carlo backend: ``F(z, t) = E[f(theta(lambda))]`` with independent ``lambda_i ~ Gamma(z_i + beta_i, t_i)``.
Rates are obtained by inverting the gamma distribution function at uniform draws, so every evaluation with the
same seed shares its uniforms (common random numbers across ``z`` and ``t``).
"""

import logging
import typing as t

import numpy as np
from scipy import special

from poshrink import settings
from poshrink.core import exceptions, rng
from poshrink.core.problem import ArrayLike, CountVector, as_counts, as_vector
from poshrink.f_integral.schemas import FEstimate, FRatio
from poshrink.priors.families import Family

logger = logging.getLogger(__name__)

# median of means standard error factor, sqrt(pi / 2)
MEDIAN_SE_FACTOR = 1.2533141373155003


def common_uniforms(n: int, d: int, seed: t.Optional[int]) -> np.ndarray:
    return rng.sample_uniform_open(rng.substream(seed), n, d)


def log_f_samples(
    family: Family,
    uniforms: np.ndarray,
    z: np.ndarray,
    t_vec: np.ndarray,
    beta: np.ndarray,
    gamma: np.ndarray,
    epsilon: float,
) -> np.ndarray:
    """
    ``log f`` at the shrinkage coordinates obtained from ``uniforms`` by gamma inversion.
    """
    lam = special.gammaincinv(z + beta, uniforms) / t_vec
    log_f = family.log_f(np.sqrt(lam / gamma), epsilon)
    if np.any(np.isnan(log_f) | (log_f == np.inf)):
        raise exceptions.SingularityError(
            f"`{family.label}` is infinite at a sampled point; evaluate it with epsilon > 0"
        )
    return log_f


def _mean_and_error(log_f: np.ndarray, blocks: int) -> t.Tuple[float, float]:
    top = float(log_f.max())
    if not np.isfinite(top):
        return -np.inf, 0.0
    weights = np.exp(log_f - top)
    if blocks <= 1:
        mean = float(weights.mean())
        error = float(weights.std(ddof=1) / (np.sqrt(weights.size) * mean)) if weights.size > 1 else 0.0
        return top + float(np.log(mean)), error
    block_means = np.array([chunk.mean() for chunk in np.array_split(weights, blocks)])
    median = float(np.median(block_means))
    error = MEDIAN_SE_FACTOR * float(block_means.std(ddof=1)) / (np.sqrt(blocks) * median)
    return top + float(np.log(median)), error


def F_monte_carlo(
    family: Family,
    z: t.Union[CountVector, ArrayLike],
    t: ArrayLike,
    beta: ArrayLike,
    gamma: ArrayLike,
    epsilon: float = 0.0,
    n: t.Optional[int] = None,
    seed: t.Optional[int] = None,
    median_of_means: t.Optional[bool] = None,
) -> FEstimate:
    """
    Estimate ``F(z, t)`` by sampling.

    :param family: Any shrinkage factor.
    :param z: Count vector.
    :param t: Positive gamma rates.
    :param beta: Positive prior exponents.
    :param gamma: Divisors of the rate to shrinkage-coordinate transform.
    :param epsilon: Smoothing constant.
    :param n: Sample count, at least ``settings.F_MC_MIN_SAMPLES``. Defaults to ``settings.F_MC_SAMPLES``.
    :param seed: Seed of the uniform stream.
    :param median_of_means: Use the median of block means. Defaults to ``epsilon > 0``.

    :return: Estimate of ``log F`` with its delta-method standard error.
    """
    n = n or settings.F_MC_SAMPLES
    if n < settings.F_MC_MIN_SAMPLES:
        raise exceptions.InvalidArgumentError(f"At least {settings.F_MC_MIN_SAMPLES} samples are required, got {n}")
    z_arr = as_counts(z, name="z")
    d = z_arr.size
    t_vec = as_vector(t, d=d, name="t")
    if np.any(t_vec <= 0):
        raise exceptions.InvalidArgumentError(f"Rates `t` must be positive, got {t_vec.tolist()}")
    if median_of_means is None:
        median_of_means = epsilon > 0
    log_f = log_f_samples(
        family,
        common_uniforms(n, d, seed),
        z_arr,
        t_vec,
        as_vector(beta, d=d, name="beta"),
        as_vector(gamma, d=d, name="gamma"),
        epsilon,
    )
    log_value, error = _mean_and_error(log_f, settings.MEDIAN_OF_MEANS_BLOCKS if median_of_means else 1)
    logger.debug(f"Monte Carlo F{tuple(z_arr.tolist())} = {np.exp(log_value):.6g} (log se {error:.2g})")
    return FEstimate(
        log_value=log_value,
        std_error=error,
        backend="monte-carlo",
        n_samples=n,
        z=tuple(z_arr.tolist()),
        t=tuple(t_vec.tolist()),
    )


def log_F_ratio_monte_carlo(
    family: Family,
    z_num: ArrayLike,
    t_num: ArrayLike,
    z_den: ArrayLike,
    t_den: ArrayLike,
    beta: ArrayLike,
    gamma: ArrayLike,
    epsilon: float = 0.0,
    n: t.Optional[int] = None,
    seed: t.Optional[int] = None,
) -> FRatio:
    """
    Paired estimate of ``log F(z_num, t_num) - log F(z_den, t_den)`` from one uniform stream.
    """
    n = n or settings.F_MC_SAMPLES
    z_num_arr, z_den_arr = as_counts(z_num, name="z_num"), as_counts(z_den, d=np.size(z_num), name="z_den")
    d = z_num_arr.size
    beta_vec, gamma_vec = as_vector(beta, d=d, name="beta"), as_vector(gamma, d=d, name="gamma")
    uniforms = common_uniforms(n, d, seed)
    log_num = log_f_samples(family, uniforms, z_num_arr, as_vector(t_num, d=d), beta_vec, gamma_vec, epsilon)
    log_den = log_f_samples(family, uniforms, z_den_arr, as_vector(t_den, d=d), beta_vec, gamma_vec, epsilon)
    w_num = np.exp(log_num - log_num.max())
    w_den = np.exp(log_den - log_den.max())
    mean_num, mean_den = w_num.mean(), w_den.mean()
    log_value = (log_num.max() + np.log(mean_num)) - (log_den.max() + np.log(mean_den))
    influence = w_num / mean_num - w_den / mean_den
    return FRatio(
        log_value=float(log_value),
        std_error=float(influence.std(ddof=1) / np.sqrt(n)),
        backend="monte-carlo",
        n_samples=n,
    )
