"""
K-L risks of predictive distributions for independent Poisson processes.

The power-prior risk is an exact per-coordinate sum. A shrinkage prior changes it by

    risk(p_beta) - risk(p_f) = E[log F(z+, r + s)] - E[log F(z-, r)],   z+ ~ Po((r + s) lambda), z- ~ Po(r lambda)

which is evaluated on the Poisson lattice when it is small and by coupled sampling otherwise: ``z-`` is drawn from
``z+`` by binomial thinning with probability ``r / (r + s)`` so both have their exact marginals.
"""

import concurrent.futures
import logging
import typing as t

import numpy as np
from scipy import special, stats

from poshrink import settings
from poshrink.core import exceptions, rng
from poshrink.core.problem import ArrayLike, ProblemSpec, as_vector
from poshrink.core.special import poisson_box, poisson_expectation
from poshrink.f_integral.service import FIntegralService
from poshrink.priors.spec import FPrior, GammaPrior, PowerPrior, PriorSpec
from poshrink.risk.schemas import RiskEstimate, RiskSettings

logger = logging.getLogger(__name__)

METHODS = ("auto", "hybrid", "monte-carlo")
TRUNCATION_POLICY = f"mean + {settings.POISSON_TAIL_SIGMAS:g} sqrt(mean) + {settings.POISSON_TAIL_OFFSET:g}"


def _check_lambda(lam: ArrayLike, spec: ProblemSpec) -> np.ndarray:
    lam_vec = as_vector(lam, d=spec.d, name="lambda")
    bad = np.flatnonzero(~(lam_vec > 0))
    if bad.size:
        raise exceptions.InvalidArgumentError(f"Rates must be positive, got {lam_vec[bad[0]]} at index {bad[0]}")
    return lam_vec


def kl_risk_power_terms(lam: ArrayLike, beta: ArrayLike, spec: ProblemSpec) -> np.ndarray:
    """
    Per-coordinate K-L risks of the power-prior predictive.
    """
    lam_vec = _check_lambda(lam, spec)
    beta_vec = as_vector(beta, d=spec.d, name="beta")
    terms = np.empty(spec.d)
    for i, (lam_i, r_i, s_i, beta_i) in enumerate(zip(lam_vec, spec.r, spec.s, beta_vec)):
        total = r_i + s_i
        expected_w = poisson_expectation(lambda w: special.gammaln(w + beta_i), total * lam_i)
        expected_x = poisson_expectation(lambda x: special.gammaln(x + beta_i), r_i * lam_i)
        terms[i] = (
            -s_i * lam_i
            + s_i * lam_i * np.log(s_i * lam_i)
            - (r_i * lam_i + beta_i) * np.log(r_i / total)
            - s_i * lam_i * np.log(s_i / total)
            - (expected_w - expected_x)
        )
    return terms


def kl_risk_power(lam: ArrayLike, beta: ArrayLike, spec: ProblemSpec) -> RiskEstimate:
    """
    Exact K-L risk of the power-prior predictive (Jeffreys at ``beta = 1/2``).

    :param lam: Positive rates.
    :param beta: Positive prior exponents.
    :param spec: Problem specification.

    :return: Exact-sum risk estimate.
    """
    return RiskEstimate(
        value=float(kl_risk_power_terms(lam, beta, spec).sum()),
        std_error=0.0,
        method="exact-sum",
        settings=RiskSettings(truncation=TRUNCATION_POLICY),
    )


def risk_gap_gamma(lam: ArrayLike, alpha: ArrayLike, beta: ArrayLike, spec: ProblemSpec) -> float:
    """
    ``risk(p_gamma) - risk(p_beta)`` in closed form.
    """
    lam_vec = _check_lambda(lam, spec)
    alpha_vec = as_vector(alpha, d=spec.d, name="alpha")
    beta_vec = as_vector(beta, d=spec.d, name="beta")
    r, s = spec.r_array, spec.s_array
    gap = (r * lam_vec + beta_vec) * (np.log(r / (r + s)) - np.log((r + alpha_vec) / (r + s + alpha_vec))) + (
        s * lam_vec * np.log((r + s + alpha_vec) / (r + s))
    )
    return float(gap.sum())


def kl_risk_gamma(lam: ArrayLike, alpha: ArrayLike, beta: ArrayLike, spec: ProblemSpec) -> RiskEstimate:
    power = kl_risk_power(lam, beta, spec)
    return power.copy(update={"value": power.value + risk_gap_gamma(lam, alpha, beta, spec)})


def _lattice(means: np.ndarray) -> t.Tuple[np.ndarray, np.ndarray]:
    axes = poisson_box(means, settings.LATTICE_TAIL_MASS)
    grids = np.meshgrid(*axes, indexing="ij")
    points = np.stack([g.reshape(-1) for g in grids], axis=1)
    log_pmf = sum(stats.poisson.logpmf(points[:, i], means[i]) for i in range(means.size))
    weights = np.exp(log_pmf - log_pmf.max())
    return points, weights / weights.sum()


def lattice_size(means: np.ndarray) -> int:
    return int(np.prod([axis.size for axis in poisson_box(means, settings.LATTICE_TAIL_MASS)]))


def expected_log_F(
    prior: FPrior,
    lam: ArrayLike,
    t_vec: ArrayLike,
    spec: ProblemSpec,
    service: t.Optional[FIntegralService] = None,
) -> t.Tuple[float, float]:
    """
    ``E[log F(z, t)]`` for ``z ~ Po(t lambda)``, summed over the truncated Poisson lattice. For priors meeting the
    dominance conditions it is nondecreasing along ``c t`` in ``c``; the risk reduction is its increment from ``r``
    to ``r + s``.

    :return: Expectation and its numerical error bound.
    """
    lam_vec = _check_lambda(lam, spec)
    rates = as_vector(t_vec, d=spec.d, name="t")
    if not np.all(rates > 0):
        raise exceptions.InvalidArgumentError(f"Durations `t` must be positive, got {rates.tolist()}")
    service = service or FIntegralService()
    points, weights = _lattice(rates * lam_vec)
    logger.debug(f"Lattice of {len(points)} points for means {np.round(rates * lam_vec, 6).tolist()}")
    log_values, errors = service.evaluate_many(prior, points, rates, spec.theta_gamma)
    return float(np.dot(weights, log_values)), float(np.dot(weights, errors))


def _reduction_hybrid(
    prior: FPrior, lam: np.ndarray, spec: ProblemSpec, service: FIntegralService
) -> t.Tuple[float, float]:
    r, s = spec.r_array, spec.s_array
    plus, plus_error = expected_log_F(prior, lam, r + s, spec, service)
    minus, minus_error = expected_log_F(prior, lam, r, spec, service)
    error = max(float(np.hypot(plus_error, minus_error)), settings.QUADRATURE_REL_TOL)
    return plus - minus, error


def _reduction_chunk(
    prior: FPrior, lam: np.ndarray, spec: ProblemSpec, service: FIntegralService, size: int, seed: int, index: int
) -> t.Tuple[np.ndarray, np.ndarray]:
    r, s = spec.r_array, spec.s_array
    generator = rng.substream(seed, index)
    z_plus = rng.sample_poisson(generator, (r + s) * lam, size)
    z_minus = rng.thin_binomial(generator, z_plus, r / (r + s))
    log_plus, error_plus = service.evaluate_many(prior, z_plus, r + s, spec.theta_gamma)
    log_minus, error_minus = service.evaluate_many(prior, z_minus, r, spec.theta_gamma)
    return log_plus - log_minus, np.hypot(error_plus, error_minus)


def _reduction_monte_carlo(
    prior: FPrior, lam: np.ndarray, spec: ProblemSpec, service: FIntegralService, n: int, seed: int, threads: int
) -> t.Tuple[float, float]:
    chunk = settings.RISK_CHUNK_SIZE
    sizes = [min(chunk, n - start) for start in range(0, n, chunk)]
    with concurrent.futures.ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
        results = list(
            executor.map(
                lambda item: _reduction_chunk(prior, lam, spec, service, item[1], seed, item[0]), enumerate(sizes)
            )
        )
    differences = np.concatenate([result[0] for result in results])
    inner = np.concatenate([result[1] for result in results])
    outer = float(differences.std(ddof=1) / np.sqrt(differences.size)) if differences.size > 1 else 0.0
    return float(differences.mean()), float(np.hypot(outer, inner.mean()))


def risk_reduction_f(
    prior: FPrior,
    lam: ArrayLike,
    spec: ProblemSpec,
    n: t.Optional[int] = None,
    seed: t.Optional[int] = None,
    method: str = "auto",
    service: t.Optional[FIntegralService] = None,
    threads: t.Optional[int] = None,
) -> RiskEstimate:
    """
    Risk improvement ``risk(p_beta) - risk(p_f)`` of a shrinkage prior over the power prior with the same ``beta``.

    :param prior: Shrinkage prior.
    :param lam: Positive rates.
    :param spec: Problem specification.
    :param n: Number of coupled samples. Defaults to ``settings.RISK_SAMPLES``.
    :param seed: Seed of the sampling streams.
    :param method: ``hybrid`` sums over the truncated Poisson lattice, ``monte-carlo`` samples, ``auto`` picks the
        lattice for quadrature-routed priors when it has at most ``settings.LATTICE_MAX_POINTS`` points.
    :param service: F evaluator.
    :param threads: Worker threads for sampling chunks.

    :return: Positive when the shrinkage prior improves on the power prior.
    """
    if method not in METHODS:
        raise exceptions.InvalidArgumentError(f"`method` must be one of {METHODS}, got {method!r}")
    if prior.d != spec.d:
        raise exceptions.InvalidArgumentError(f"Prior has dimension {prior.d}, problem has d={spec.d}")
    lam_vec = _check_lambda(lam, spec)
    n = n or settings.RISK_SAMPLES
    seed = settings.DEFAULT_SEED if seed is None else seed
    if prior.is_constant:
        return RiskEstimate(value=0.0, std_error=0.0, method="exact-sum", settings=RiskSettings(n=0, seed=seed))
    service = service or FIntegralService(seed=seed)

    if method == "auto":
        r, s = spec.r_array, spec.s_array
        points = lattice_size((r + s) * lam_vec) + lattice_size(r * lam_vec)
        separable = service.route(prior) == "quadrature"
        method = "hybrid" if separable and points <= settings.LATTICE_MAX_POINTS else "monte-carlo"
        logger.debug(f"Risk reduction at lambda={np.round(lam_vec, 6).tolist()}: {points} lattice points, {method}")

    if method == "hybrid":
        value, error = _reduction_hybrid(prior, lam_vec, spec, service)
        risk_settings = RiskSettings(n=0, seed=service.seed, truncation=f"tail mass {settings.LATTICE_TAIL_MASS:g}")
    else:
        value, error = _reduction_monte_carlo(
            prior, lam_vec, spec, service, n, seed, threads if threads is not None else settings.THREADS
        )
        risk_settings = RiskSettings(n=n, seed=seed, truncation="")
    service.cache.log_stats()
    return RiskEstimate(value=value, std_error=max(error, np.finfo(float).tiny), method=method, settings=risk_settings)


def kl_risk_f(
    prior: FPrior,
    lam: ArrayLike,
    spec: ProblemSpec,
    n: t.Optional[int] = None,
    seed: t.Optional[int] = None,
    method: str = "auto",
    service: t.Optional[FIntegralService] = None,
    threads: t.Optional[int] = None,
) -> RiskEstimate:
    """
    K-L risk of the shrinkage-prior predictive, the power-prior risk minus the risk reduction.
    """
    base = kl_risk_power(lam, prior.beta_array, spec)
    reduction = risk_reduction_f(prior, lam, spec, n=n, seed=seed, method=method, service=service, threads=threads)
    return reduction.copy(update={"value": base.value - reduction.value})


def kl_risk(
    prior: PriorSpec,
    lam: ArrayLike,
    spec: ProblemSpec,
    n: t.Optional[int] = None,
    seed: t.Optional[int] = None,
    method: str = "auto",
    service: t.Optional[FIntegralService] = None,
    threads: t.Optional[int] = None,
) -> RiskEstimate:
    """
    K-L risk of the predictive distribution of any prior specification.
    """
    if isinstance(prior, PowerPrior):
        return kl_risk_power(lam, prior.beta_array, spec)
    if isinstance(prior, GammaPrior):
        return kl_risk_gamma(lam, prior.alpha_array, prior.beta_array, spec)
    return kl_risk_f(prior, lam, spec, n=n, seed=seed, method=method, service=service, threads=threads)
