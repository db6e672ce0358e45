"""
Exact backend for shrinkage factors that are sums of ``(sum_{i in S} theta_i**2 + eta)**(-alpha)`` terms. With
``u**(-alpha) = Gamma(alpha)**(-1) * int_0^inf v**(alpha - 1) exp(-u v) dv`` the gamma expectation factorizes and

    F(z, t) = Gamma(alpha)**(-1) int_0^inf v**(alpha - 1) exp(-eta v) prod_{i in S} (1 + v / (g_i t_i))**(-(z_i + beta_i)) dv

is a one-dimensional integral, computed on the axis ``v = exp(u)`` around the mode of the integrand.
"""

import logging
import typing as t

import numpy as np
from scipy import integrate, optimize, special

from poshrink import settings
from poshrink.core import exceptions
from poshrink.core.problem import ArrayLike, CountVector, as_counts, as_vector
from poshrink.f_integral.schemas import FEstimate
from poshrink.priors.families import Family, QuadraticPart

logger = logging.getLogger(__name__)


def _log_integrand(u: float, alpha: float, eta: float, shapes: np.ndarray, log_c: np.ndarray) -> float:
    return alpha * u - eta * np.exp(u) - float(np.dot(shapes, np.logaddexp(0.0, u + log_c)))


def _slope(u: float, alpha: float, eta: float, shapes: np.ndarray, log_c: np.ndarray) -> float:
    return alpha - eta * np.exp(u) - float(np.dot(shapes, special.expit(u + log_c)))


def _mode(alpha: float, eta: float, shapes: np.ndarray, log_c: np.ndarray) -> float:
    lower, upper = -1.0, 1.0
    while _slope(lower, alpha, eta, shapes, log_c) <= 0:
        lower = 2 * lower - 1
    while _slope(upper, alpha, eta, shapes, log_c) >= 0:
        upper = 2 * upper + 1
    return optimize.brentq(_slope, lower, upper, args=(alpha, eta, shapes, log_c), xtol=1e-12)


def log_F_part(alpha: float, eta: float, shapes: np.ndarray, log_c: np.ndarray) -> float:
    """
    ``log F`` of a single term ``(sum_{i in S} theta_i**2 + eta)**(-alpha)``.

    :param alpha: Exponent, zero for the constant term.
    :param eta: Shift added to the quadratic form, smoothing included.
    :param shapes: Gamma shapes ``z_i + beta_i`` over ``S``.
    :param log_c: ``-log(g_i t_i)`` over ``S``.

    :return: Log of the gamma expectation.
    """
    if alpha == 0:
        return 0.0
    if eta == 0 and alpha >= shapes.sum():
        raise exceptions.IntegrabilityError(
            f"F diverges: alpha={alpha:g} is not below the total shape {shapes.sum():g} of the shrunk coordinates "
            "(see the alpha bound of Proposition 1)"
        )
    mode = _mode(alpha, eta, shapes, log_c)
    log_max = _log_integrand(mode, alpha, eta, shapes, log_c)
    left = max(40.0, 36.0 / alpha)
    right = 40.0 if eta > 0 else max(40.0, 36.0 / (shapes.sum() - alpha))
    lower = min(settings.QUADRATURE_U_MIN, mode - left)
    upper = max(settings.QUADRATURE_U_MAX, mode + right)
    integral, _ = integrate.quad(
        lambda u: np.exp(_log_integrand(u, alpha, eta, shapes, log_c) - log_max),
        lower,
        upper,
        points=[mode],
        epsabs=0.0,
        epsrel=settings.QUADRATURE_REL_TOL,
        limit=settings.QUADRATURE_LIMIT,
    )
    return log_max + float(np.log(integral)) - float(special.gammaln(alpha))


def log_F_parts(
    parts: t.Sequence[QuadraticPart], z: np.ndarray, t_vec: np.ndarray, beta: np.ndarray, gamma: np.ndarray
) -> float:
    shapes = z + beta
    log_c = -np.log(gamma * t_vec)
    values = []
    for part in parts:
        mask = np.asarray(part.mask, dtype=bool)
        values.append(part.log_weight + log_F_part(part.alpha, part.eta, shapes[mask], log_c[mask]))
    return float(special.logsumexp(values)) if len(values) > 1 else values[0]


def F_quadrature(
    family: Family,
    z: t.Union[CountVector, ArrayLike],
    t: ArrayLike,
    beta: ArrayLike,
    gamma: ArrayLike,
    epsilon: float = 0.0,
) -> FEstimate:
    """
    Evaluate ``F(z, t)`` for a separable family by one-dimensional adaptive quadrature.

    :param family: Family with a quadratic-part decomposition.
    :param z: Count vector.
    :param t: Positive gamma rates.
    :param beta: Positive prior exponents.
    :param gamma: Divisors of the rate to shrinkage-coordinate transform.
    :param epsilon: Smoothing constant added to the quadratic forms.

    :return: Estimate with zero standard error.
    """
    z_arr = as_counts(z, name="z")
    d = z_arr.size
    t_vec = as_vector(t, d=d, name="t")
    beta_vec = as_vector(beta, d=d, name="beta")
    gamma_vec = as_vector(gamma, d=d, name="gamma")
    if np.any(t_vec <= 0):
        raise exceptions.InvalidArgumentError(f"Rates `t` must be positive, got {t_vec.tolist()}")
    parts = family.quadratic_parts(d, epsilon)
    if parts is None:
        raise exceptions.InvalidArgumentError(f"`{family.label}` has no separable form; use the Monte Carlo backend")
    log_value = log_F_parts(parts, z_arr, t_vec, beta_vec, gamma_vec)
    logger.debug(f"Quadrature F{tuple(z_arr.tolist())} = {np.exp(log_value):.10g}")
    return FEstimate(
        log_value=log_value,
        std_error=0.0,
        backend="quadrature",
        n_samples=0,
        z=tuple(z_arr.tolist()),
        t=tuple(t_vec.tolist()),
    )
