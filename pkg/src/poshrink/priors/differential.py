"""
Pointwise evaluation of shrinkage factors and finite-difference checks of the differential conditions behind
dominance: superharmonicity of the base function and the sign of the boundary derivative.
"""

import logging
import typing as t

import numpy as np
from pydantic import BaseModel
from scipy import special

from poshrink import settings
from poshrink.core import exceptions
from poshrink.core.problem import ThetaPoint
from poshrink.priors.families import Family, as_rows, check_enumeration, sign_matrix
from poshrink.priors.spec import FPrior

logger = logging.getLogger(__name__)

ThetaLike = t.Union[ThetaPoint, t.Sequence[float], np.ndarray]


def _point(theta: ThetaLike) -> np.ndarray:
    if isinstance(theta, ThetaPoint):
        return theta.as_array()
    return np.asarray(theta, dtype=float)


def eval_log_f(family: t.Union[Family, FPrior], theta: ThetaLike, epsilon: t.Optional[float] = None) -> float:
    """
    Evaluate ``log f(theta)`` at a single point.

    :param family: Shrinkage factor, or a shrinkage prior whose ``epsilon`` is used by default.
    :param theta: Point of the nonnegative orthant.
    :param epsilon: Smoothing constant overriding the prior's one.

    :return: ``log f``, ``+inf`` on the singular set of an unsmoothed factor.
    """
    if isinstance(family, FPrior):
        epsilon = family.epsilon if epsilon is None else epsilon
        family = family.family
    point = _point(theta)
    if np.any(point < 0):
        raise exceptions.InvalidArgumentError("Shrinkage coordinates lie in the nonnegative orthant")
    return float(family.log_f(point, epsilon or 0.0)[0])


def symmetrized_value(family: Family, theta: ThetaLike, epsilon: float = 0.0) -> float:
    """
    Log of the sum of the base function over all sign reflections of ``theta``.
    """
    point = _point(theta)
    check_enumeration(point.size)
    reflected = sign_matrix(point.size) * point
    return float(special.logsumexp(family.log_h(reflected, epsilon)))


def symmetrize_check(family: Family, theta: ThetaLike, epsilon: float = 0.0) -> float:
    """
    Ratio of the symmetrized base function to the base function at ``theta``; ``2**d`` for factors that depend on
    ``theta`` only through the squares ``theta_i**2``.
    """
    point = _point(theta)
    return float(np.exp(symmetrized_value(family, point, epsilon) - family.log_h(point, epsilon)[0]))


def _values(func: t.Callable[[np.ndarray, float], np.ndarray], points: np.ndarray, epsilon: float) -> np.ndarray:
    with np.errstate(over="ignore"):
        values = np.exp(func(points, epsilon))
    if not np.all(np.isfinite(values)):
        raise exceptions.SingularityError(
            "The shrinkage factor is singular inside the finite-difference stencil; use epsilon > 0 or move theta"
        )
    return values


def _laplacian_once(func, point: np.ndarray, h: float, epsilon: float) -> float:
    d = point.size
    offsets = np.eye(d) * h
    stencil = np.vstack([point[None, :], point + offsets, point - offsets])
    values = _values(func, stencil, epsilon)
    return float((values[1 : d + 1].sum() + values[d + 1 :].sum() - 2 * d * values[0]) / h**2)


def laplacian_fd(
    family: Family,
    theta: ThetaLike,
    step: t.Optional[float] = None,
    epsilon: float = 0.0,
    symmetrized: bool = False,
) -> float:
    """
    Central-difference Laplacian of ``f``, Richardson-extrapolated once.

    :param family: Shrinkage factor.
    :param theta: Evaluation point.
    :param step: Step relative to ``max(|theta|, 1)``. Defaults to ``settings.FD_STEP``.
    :param epsilon: Smoothing constant.
    :param symmetrized: Differentiate the symmetrized factor instead of its base function.

    :return: Estimate of the sum of second derivatives.
    """
    point = _point(theta)
    h = (step or settings.FD_STEP) * max(float(np.linalg.norm(point)), 1.0)
    func = family.log_f if symmetrized else family.log_h
    coarse = _laplacian_once(func, point, h, epsilon)
    fine = _laplacian_once(func, point, h / 2, epsilon)
    return (4 * fine - coarse) / 3


def divergence_condition_fd(
    family: Family,
    theta: ThetaLike,
    beta: t.Union[float, t.Sequence[float]],
    step: t.Optional[float] = None,
    epsilon: float = 0.0,
) -> float:
    """
    Finite-difference value of ``sum_i d/dtheta_i (df/dtheta_i * prod_j theta_j^(2 beta_j - 1))``. Nonpositive
    values are required for dominance; with ``beta = 1/2`` this is the Laplacian.

    :param theta: Interior point, every coordinate larger than the step.
    """
    point = _point(theta)
    d = point.size
    beta_vec = np.broadcast_to(np.asarray(beta, dtype=float), (d,))
    h = (step or settings.FD_STEP) * max(float(np.linalg.norm(point)), 1.0)
    if np.any(point <= h):
        raise exceptions.InvalidArgumentError(f"Every coordinate of theta must exceed the step {h:g}")

    def weight(p: np.ndarray) -> float:
        return float(np.prod(p ** (2 * beta_vec - 1)))

    total = 0.0
    for i in range(d):
        e = np.zeros(d)
        e[i] = h
        stencil = np.vstack([point + e, point, point - e])
        values = _values(family.log_f, stencil, epsilon)
        upper = (values[0] - values[1]) / h * weight(point + e / 2)
        lower = (values[1] - values[2]) / h * weight(point - e / 2)
        total += (upper - lower) / h
    return total


class BoundaryReport(BaseModel):
    coordinate: int
    grid: t.List[float]
    values: t.List[float]
    limit: float
    status: str


def boundary_derivative_fd(
    prior: FPrior,
    i: int,
    theta_partial: ThetaLike,
    grid: t.Optional[t.Sequence[float]] = None,
    tol: float = 1e-6,
) -> BoundaryReport:
    """
    Estimate ``theta_i^(2 beta_i - 1) * df/dtheta_i`` as ``theta_i`` approaches zero along ``grid``, the other
    coordinates fixed at ``theta_partial``.

    :param prior: Shrinkage prior supplying ``beta`` and ``epsilon``.
    :param i: Zero-based coordinate index.
    :param theta_partial: Full point whose ``i``-th entry is replaced by the grid values.
    :param grid: Decreasing positive values of ``theta_i``. Defaults to ``settings.BOUNDARY_GRID``.
    :param tol: Magnitude below which a value counts as zero.

    :return: Report with the sequence, its linear extrapolation to zero and the status ``nonpositive``,
        ``positive`` or ``inconclusive``.
    """
    grid = list(grid or settings.BOUNDARY_GRID)
    point = _point(theta_partial).copy()
    if not 0 <= i < point.size:
        raise exceptions.InvalidArgumentError(f"Coordinate index {i} is out of range for d={point.size}")
    values = []
    for value in grid:
        h = value / 10
        upper, lower = point.copy(), point.copy()
        upper[i], lower[i] = value + h, value - h
        f_values = _values(prior.family.log_f, np.vstack([upper, lower]), prior.epsilon)
        derivative = (f_values[0] - f_values[1]) / (2 * h)
        values.append(float(value ** (2 * prior.beta[i] - 1) * derivative))

    if len(grid) > 1:
        slope = (values[-1] - values[-2]) / (grid[-1] - grid[-2])
        limit = values[-1] - slope * grid[-1]
    else:
        limit = values[-1]
    signs = {np.sign(v) for v in values if abs(v) > tol}
    if len(signs) > 1:
        status = "inconclusive"
        logger.warning(f"Boundary derivative along coordinate {i} changes sign across the grid: {values}")
    elif limit <= tol:
        status = "nonpositive"
    else:
        status = "positive"
    return BoundaryReport(coordinate=i, grid=grid, values=values, limit=float(limit), status=status)
