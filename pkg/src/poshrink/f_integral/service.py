"""
Routing between the F backends. Separable factors go to quadrature, everything else to Monte Carlo; results are
memoized in an :class:`FCache`.
"""

import logging
import typing as t

import numpy as np

from poshrink import settings
from poshrink.core import exceptions
from poshrink.core.problem import ArrayLike, CountVector, ProblemSpec, as_counts, as_vector
from poshrink.f_integral import monte_carlo, quadrature
from poshrink.f_integral.cache import F_cache, FCache
from poshrink.f_integral.schemas import FEstimate, FRatio
from poshrink.priors.families import Family, Sum, SymSubspace
from poshrink.priors.spec import FPrior

logger = logging.getLogger(__name__)

ROUTES = ("auto", "quadrature", "monte-carlo")


def _has_singular_subspace(family: Family) -> bool:
    if isinstance(family, Sum):
        return any(_has_singular_subspace(part) for part in family.parts)
    return isinstance(family, SymSubspace)


class FIntegralService:
    """
    Evaluate ``F(z, t)`` for shrinkage priors.

    :param cache: Memo of evaluations. Defaults to the process-wide cache.
    :param backend: ``auto``, ``quadrature`` or ``monte-carlo``.
    :param n: Monte Carlo sample count.
    :param seed: Monte Carlo seed, shared by every evaluation of this service.
    """

    def __init__(
        self,
        cache: t.Optional[FCache] = None,
        backend: str = "auto",
        n: t.Optional[int] = None,
        seed: t.Optional[int] = None,
    ):
        if backend not in ROUTES:
            raise exceptions.InvalidArgumentError(f"`backend` must be one of {ROUTES}, got {backend!r}")
        self.cache = F_cache if cache is None else cache
        self.backend = backend
        self.n = n or settings.F_MC_SAMPLES
        self.seed = settings.DEFAULT_SEED if seed is None else seed

    def route(self, prior: FPrior) -> str:
        if self.backend != "auto":
            return self.backend
        return "quadrature" if prior.is_quadrature else "monte-carlo"

    def effective_epsilon(self, prior: FPrior, backend: str) -> float:
        """
        Smoothing used for an evaluation: sampling of unsmoothed subspace factors falls back to
        ``settings.SMOOTHING_EPSILON_MC``.
        """
        if backend == "monte-carlo" and prior.epsilon == 0 and _has_singular_subspace(prior.family):
            return settings.SMOOTHING_EPSILON_MC
        return prior.epsilon

    def _compute(self, prior: FPrior, backend: str, z: np.ndarray, t_vec: np.ndarray, gamma: np.ndarray) -> FEstimate:
        epsilon = self.effective_epsilon(prior, backend)
        if backend == "quadrature":
            return quadrature.F_quadrature(prior.family, z, t_vec, prior.beta_array, gamma, epsilon)
        return monte_carlo.F_monte_carlo(
            prior.family, z, t_vec, prior.beta_array, gamma, epsilon, n=self.n, seed=self.seed
        )

    def evaluate(
        self, prior: FPrior, z: t.Union[CountVector, ArrayLike], t: ArrayLike, gamma: ArrayLike
    ) -> FEstimate:
        """
        :param prior: Shrinkage prior.
        :param z: Count vector of length ``prior.d``.
        :param t: Gamma rates.
        :param gamma: Divisors of the rate to shrinkage-coordinate transform.
        """
        z_arr = as_counts(z, d=prior.d, name="z")
        t_vec = as_vector(t, d=prior.d, name="t")
        gamma_vec = as_vector(gamma, d=prior.d, name="gamma")
        backend = self.route(prior)
        if prior.is_constant:
            return FEstimate(
                log_value=0.0,
                std_error=0.0,
                backend="quadrature",
                n_samples=0,
                z=tuple(z_arr.tolist()),
                t=tuple(t_vec.tolist()),
            )
        key = FCache.make_key(
            prior.digest(),
            z_arr,
            t_vec,
            tuple(gamma_vec.round(12).tolist()),
            backend,
            self.n if backend == "monte-carlo" else 0,
            self.seed if backend == "monte-carlo" else 0,
        )
        return self.cache.get_or_compute(key, lambda: self._compute(prior, backend, z_arr, t_vec, gamma_vec))

    def evaluate_many(
        self, prior: FPrior, zs: np.ndarray, t: ArrayLike, gamma: ArrayLike
    ) -> t.Tuple[np.ndarray, np.ndarray]:
        """
        Evaluate ``log F`` at every row of ``zs``; repeated rows are computed once.

        :return: Log values and standard errors, one per row.
        """
        zs = np.atleast_2d(np.asarray(zs, dtype=np.int64))
        unique, inverse = np.unique(zs, axis=0, return_inverse=True)
        estimates = [self.evaluate(prior, row, t, gamma) for row in unique]
        if not prior.is_constant:
            self.cache.record_hits(len(zs) - len(unique))
        log_values = np.array([e.log_value for e in estimates])
        errors = np.array([e.std_error for e in estimates])
        inverse = np.asarray(inverse).reshape(-1)
        return log_values[inverse], errors[inverse]

    def log_ratio(
        self,
        prior: FPrior,
        z_num: ArrayLike,
        t_num: ArrayLike,
        z_den: ArrayLike,
        t_den: ArrayLike,
        gamma: ArrayLike,
    ) -> FRatio:
        backend = self.route(prior)
        if backend == "monte-carlo" and not prior.is_constant:
            return monte_carlo.log_F_ratio_monte_carlo(
                prior.family,
                z_num,
                t_num,
                z_den,
                t_den,
                prior.beta_array,
                gamma,
                self.effective_epsilon(prior, backend),
                n=self.n,
                seed=self.seed,
            )
        numerator = self.evaluate(prior, z_num, t_num, gamma)
        denominator = self.evaluate(prior, z_den, t_den, gamma)
        return FRatio(log_value=numerator.log_value - denominator.log_value, std_error=0.0, backend=backend)


def evaluate_F(
    prior: FPrior,
    z: t.Union[CountVector, ArrayLike],
    t: ArrayLike,
    spec: ProblemSpec,
    service: t.Optional[FIntegralService] = None,
) -> FEstimate:
    """
    ``F(z, t)`` for a prior in the coordinates of ``spec``.
    """
    return (service or FIntegralService()).evaluate(prior, z, t, spec.theta_gamma)


def log_F_ratio(
    prior: FPrior,
    z_num: ArrayLike,
    t_num: ArrayLike,
    z_den: ArrayLike,
    t_den: ArrayLike,
    spec: ProblemSpec,
    service: t.Optional[FIntegralService] = None,
) -> FRatio:
    """
    ``log F(z_num, t_num) - log F(z_den, t_den)``. The Monte Carlo path pairs both evaluations on one uniform stream.
    """
    return (service or FIntegralService()).log_ratio(prior, z_num, t_num, z_den, t_den, spec.theta_gamma)
