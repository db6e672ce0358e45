"""
Predictive distributions and Bayes estimators under shrinkage priors, expressed through ratios of F:

    p_f(y | x) = p_beta(y | x) * F(x + y, r + s) / F(x, r)
    lambda_hat_i = (x_i + beta_i) / r_i * F(x + e_i, r) / F(x, r)
"""

import typing as t

import numpy as np
from pydantic import BaseModel, Field

from poshrink import settings
from poshrink.closed_form import predictive as closed_form
from poshrink.core import exceptions, rng
from poshrink.core.problem import ArrayLike, CountVector, ProblemSpec, as_counts
from poshrink.f_integral.service import FIntegralService
from poshrink.priors.spec import FPrior, GammaPrior, PowerPrior, PriorSpec


class PredictiveEstimate(BaseModel):
    log_value: float = Field(example=-1.2)
    std_error: float = Field(ge=0, example=0.0)

    class Config:
        allow_mutation = False


def _check(prior: FPrior, spec: ProblemSpec) -> None:
    if prior.d != spec.d:
        raise exceptions.InvalidArgumentError(f"Prior has dimension {prior.d}, problem has d={spec.d}")


def log_predictive_f(
    prior: FPrior,
    x: t.Union[CountVector, ArrayLike],
    y: t.Union[CountVector, ArrayLike],
    spec: ProblemSpec,
    service: t.Optional[FIntegralService] = None,
) -> PredictiveEstimate:
    """
    Log-pmf of ``y`` given ``x`` under a shrinkage prior.

    :param prior: Shrinkage prior.
    :param x: Observed counts.
    :param y: Future counts.
    :param spec: Problem specification.
    :param service: F evaluator.

    :return: Log probability; Monte Carlo errors of both F values are combined in quadrature.
    """
    _check(prior, spec)
    service = service or FIntegralService()
    x_arr = as_counts(x, d=spec.d, name="x")
    y_arr = as_counts(y, d=spec.d, name="y")
    base = closed_form.log_predictive_power(x_arr, y_arr, prior.beta_array, spec)
    if prior.is_constant:
        return PredictiveEstimate(log_value=base, std_error=0.0)
    numerator = service.evaluate(prior, x_arr + y_arr, spec.r_array + spec.s_array, spec.theta_gamma)
    denominator = service.evaluate(prior, x_arr, spec.r_array, spec.theta_gamma)
    return PredictiveEstimate(
        log_value=base + numerator.log_value - denominator.log_value,
        std_error=float(np.hypot(numerator.std_error, denominator.std_error)),
    )


def bayes_estimator_f(
    prior: FPrior,
    x: t.Union[CountVector, ArrayLike],
    spec: ProblemSpec,
    service: t.Optional[FIntegralService] = None,
) -> np.ndarray:
    """
    Posterior mean of the rates under a shrinkage prior.
    """
    _check(prior, spec)
    service = service or FIntegralService()
    x_arr = as_counts(x, d=spec.d, name="x")
    estimate = closed_form.bayes_estimator_power(x_arr, prior.beta_array, spec)
    if prior.is_constant:
        return estimate
    shifted = x_arr[None, :] + np.eye(spec.d, dtype=np.int64)
    log_shifted, _ = service.evaluate_many(prior, shifted, spec.r_array, spec.theta_gamma)
    log_base = service.evaluate(prior, x_arr, spec.r_array, spec.theta_gamma).log_value
    return estimate * np.exp(log_shifted - log_base)


def predictive_mean_f(
    prior: FPrior,
    x: t.Union[CountVector, ArrayLike],
    spec: ProblemSpec,
    service: t.Optional[FIntegralService] = None,
) -> np.ndarray:
    return spec.s_array * bayes_estimator_f(prior, x, spec, service)


def log_predictive(
    prior: PriorSpec,
    x: t.Union[CountVector, ArrayLike],
    y: t.Union[CountVector, ArrayLike],
    spec: ProblemSpec,
    service: t.Optional[FIntegralService] = None,
) -> float:
    """
    Log-pmf of ``y`` given ``x`` for any prior specification.
    """
    if isinstance(prior, PowerPrior):
        return closed_form.log_predictive_power(x, y, prior.beta_array, spec)
    if isinstance(prior, GammaPrior):
        return closed_form.log_predictive_gamma(x, y, prior.alpha_array, prior.beta_array, spec)
    return log_predictive_f(prior, x, y, spec, service).log_value


def bayes_estimator(
    prior: PriorSpec,
    x: t.Union[CountVector, ArrayLike],
    spec: ProblemSpec,
    service: t.Optional[FIntegralService] = None,
) -> np.ndarray:
    if isinstance(prior, PowerPrior):
        return closed_form.bayes_estimator_power(x, prior.beta_array, spec)
    if isinstance(prior, GammaPrior):
        return closed_form.bayes_estimator_gamma(x, prior.alpha_array, prior.beta_array, spec)
    return bayes_estimator_f(prior, x, spec, service)


def predictive_mean(
    prior: PriorSpec,
    x: t.Union[CountVector, ArrayLike],
    spec: ProblemSpec,
    service: t.Optional[FIntegralService] = None,
) -> np.ndarray:
    """
    Mean vector of the predictive distribution, ``s_i`` times the Bayes estimate of ``lambda_i``.
    """
    return spec.s_array * bayes_estimator(prior, x, spec, service)


def bayes_rule_power(beta: ArrayLike, spec: ProblemSpec) -> t.Callable[[np.ndarray], np.ndarray]:
    """
    Estimator ``x -> (x + beta) / r`` usable as a rule in :func:`poshrink.risk.estimator_kl_risk`.
    """

    def rule(x: np.ndarray) -> np.ndarray:
        return closed_form.bayes_estimator_power(x, beta, spec)

    rule.vectorized = True
    return rule


def bayes_rule_f(
    prior: FPrior, spec: ProblemSpec, service: t.Optional[FIntegralService] = None
) -> t.Callable[[np.ndarray], np.ndarray]:
    service = service or FIntegralService()
    return lambda x: bayes_estimator_f(prior, x, spec, service)


def sample_predictive_f(
    prior: FPrior,
    x: t.Union[CountVector, ArrayLike],
    spec: ProblemSpec,
    n: int,
    seed: t.Optional[int] = None,
) -> np.ndarray:
    """
    Draw from the shrinkage predictive by sampling-importance-resampling: rates are proposed from the power-prior
    posterior, resampled with weights ``f(theta)`` and then mapped to Poisson counts.

    :param n: Number of draws, at least one.
    :param seed: Seed of the random stream.

    :return: Int64 array of shape ``(n, d)``.
    """
    _check(prior, spec)
    if n < 1:
        raise exceptions.InvalidArgumentError(f"Sample count must be at least 1, got {n}")
    if prior.is_constant:
        return closed_form.sample_predictive_power(x, prior.beta_array, spec, n, seed)
    x_arr = as_counts(x, d=spec.d, name="x")
    generator = rng.substream(seed)
    pool = max(10 * n, settings.F_MC_MIN_SAMPLES)
    lam = rng.sample_gamma(generator, x_arr + prior.beta_array, spec.r_array, pool)
    log_weights = prior.log_f(np.sqrt(lam / spec.theta_gamma))
    if np.any(np.isnan(log_weights)) or np.any(np.isposinf(log_weights)):
        raise exceptions.SingularityError("Shrinkage factor is singular at a proposed rate; use a positive epsilon")
    weights = np.exp(log_weights - log_weights.max())
    chosen = generator.choice(pool, size=n, replace=True, p=weights / weights.sum())
    return generator.poisson(lam[chosen] * spec.s_array).astype(np.int64)


def sample_predictive(
    prior: PriorSpec,
    x: t.Union[CountVector, ArrayLike],
    spec: ProblemSpec,
    n: int,
    seed: t.Optional[int] = None,
) -> np.ndarray:
    if isinstance(prior, PowerPrior):
        return closed_form.sample_predictive_power(x, prior.beta_array, spec, n, seed)
    if isinstance(prior, GammaPrior):
        return closed_form.sample_predictive_gamma(x, prior.alpha_array, prior.beta_array, spec, n, seed)
    return sample_predictive_f(prior, x, spec, n, seed)
