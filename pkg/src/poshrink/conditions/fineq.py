"""
Finite-grid verification of the dominance conditions on F:

    sum_i g_i r_i z_i (F(z, r) - F(z - e_i, r)) + sum_i g_i r_i (z_i + beta_i) (F(z, r) - F(z + e_i, r)) >= 0

for every ``z`` with ``|z| <= z_max`` and every ``r`` of a grid, the weights ``g`` being fixed by the problem.
A grid is a refuter and supporting evidence, never a proof.
"""

import concurrent.futures
import logging
import typing as t

import numpy as np

from poshrink import settings
from poshrink.conditions.schemas import FineqEntry, FineqGrid, FineqReport
from poshrink.core import exceptions
from poshrink.core.problem import ArrayLike, ProblemSpec, as_vector
from poshrink.f_integral.service import FIntegralService
from poshrink.priors.spec import FPrior

logger = logging.getLogger(__name__)


def _bounded(d: int, total: int) -> t.Iterator[t.Tuple[int, ...]]:
    if d == 0:
        yield ()
        return
    for head in range(total + 1):
        for tail in _bounded(d - 1, total - head):
            yield (head,) + tail


def simplex_lattice(d: int, total: int) -> np.ndarray:
    """
    All ``z`` in ``N^d`` with ``sum(z) <= total``, sorted by ``(sum(z), z)``.
    """
    points = list(_bounded(d, total))
    points.sort(key=lambda z: (sum(z), z))
    return np.asarray(points, dtype=np.int64).reshape(-1, d)


def _f_table(
    prior: FPrior, r_vec: np.ndarray, spec: ProblemSpec, total: int, service: FIntegralService
) -> t.Tuple[t.Dict[t.Tuple[int, ...], float], float]:
    points = simplex_lattice(spec.d, total)
    log_values, errors = service.evaluate_many(prior, points, r_vec, spec.theta_gamma)
    table = {tuple(z): float(np.exp(v)) for z, v in zip(points.tolist(), log_values)}
    return table, float(errors.max()) if errors.size else 0.0


def fineq_lhs(
    table: t.Dict[t.Tuple[int, ...], float], z: t.Sequence[int], weights: np.ndarray, beta: np.ndarray
) -> t.Tuple[float, float]:
    """
    Left-hand side of the inequality at ``z`` from a table of F values, and its normalizer
    ``sum_i weights_i (z_i + beta_i) F(z)``. ``weights`` are ``g_i r_i``; ones give the equal-duration form.
    """
    z = tuple(int(v) for v in z)
    center = table[z]
    lhs = 0.0
    for i in range(len(z)):
        up = list(z)
        up[i] += 1
        if z[i] > 0:
            down = list(z)
            down[i] -= 1
            lhs += weights[i] * z[i] * (center - table[tuple(down)])
        lhs += weights[i] * (z[i] + beta[i]) * (center - table[tuple(up)])
    normalizer = float(np.sum(weights * (np.asarray(z) + beta)) * center)
    return lhs, normalizer


def check_fineq(
    prior: FPrior,
    spec: ProblemSpec,
    r_grid: t.Sequence[ArrayLike],
    z_max: int,
    tol_rel: t.Optional[float] = None,
    service: t.Optional[FIntegralService] = None,
    threads: t.Optional[int] = None,
) -> FineqReport:
    """
    Verify the dominance inequality on a grid.

    :param prior: Shrinkage prior.
    :param spec: Problem specification; its weights ``gamma`` stay fixed while ``r`` runs over ``r_grid``.
    :param r_grid: Observation durations to test, scalars broadcast.
    :param z_max: Largest total count checked.
    :param tol_rel: Tolerance on the normalized left-hand side. Defaults to ``settings.FINEQ_TOL_QUADRATURE`` for
        quadrature-backed priors and ``settings.FINEQ_SE_MULTIPLIER`` times the largest standard error otherwise.
    :param service: F evaluator.
    :param threads: Worker threads, one task per grid value of ``r``.

    :return: Report with the minimum, its location and the verdict.
    """
    if z_max < 0:
        raise exceptions.InvalidArgumentError(f"`z_max` must be nonnegative, got {z_max}")
    if z_max > settings.FINEQ_MAX_Z_PER_DIM * spec.d:
        raise exceptions.CostLimitError(
            f"`z_max`={z_max} exceeds {settings.FINEQ_MAX_Z_PER_DIM} per coordinate (d={spec.d})"
        )
    if not r_grid:
        raise exceptions.InvalidArgumentError("`r_grid` must not be empty")
    service = service or FIntegralService()
    r_vectors = [as_vector(r, d=spec.d, name="r_grid") for r in r_grid]
    for r_vec in r_vectors:
        if np.any(r_vec <= 0):
            raise exceptions.InvalidArgumentError(f"Durations in `r_grid` must be positive, got {r_vec.tolist()}")
    gamma = spec.gamma
    beta = prior.beta_array
    points = simplex_lattice(spec.d, z_max)

    def run(r_vec: np.ndarray) -> t.Tuple[t.List[FineqEntry], float]:
        table, max_error = _f_table(prior, r_vec, spec, z_max + 1, service)
        entries = []
        for z in points.tolist():
            lhs, normalizer = fineq_lhs(table, z, gamma * r_vec, beta)
            entries.append(FineqEntry(z=tuple(z), r=tuple(r_vec.tolist()), lhs=lhs / normalizer))
        return entries, max_error

    with concurrent.futures.ThreadPoolExecutor(max_workers=threads or settings.THREADS) as executor:
        results = list(executor.map(run, r_vectors))

    entries = sorted(
        (entry for result in results for entry in result[0]), key=lambda e: (sum(e.z), e.z, e.r)
    )
    max_error = max(result[1] for result in results)
    if tol_rel is None:
        if service.route(prior) == "quadrature":
            tol_rel = settings.FINEQ_TOL_QUADRATURE
        else:
            tol_rel = settings.FINEQ_SE_MULTIPLIER * max_error
    worst = min(entries, key=lambda e: e.lhs)
    passed = worst.lhs >= -tol_rel
    logger.info(
        f"Condition check over {len(points)} lattice points and {len(r_vectors)} durations: "
        f"min={worst.lhs:.3g} at z={worst.z}, r={worst.r}, {'PASS' if passed else 'FAIL'}"
    )
    return FineqReport(
        prior=prior.dict(),
        grid=FineqGrid(r_grid=[tuple(r.tolist()) for r in r_vectors], z_max=z_max, points=len(points)),
        min_lhs=worst.lhs,
        argmin_z=worst.z,
        argmin_r=worst.r,
        tol_rel=tol_rel,
        passed=passed,
        entries=entries,
    )


def check_nonconstant_F(
    prior: FPrior,
    spec: ProblemSpec,
    r: t.Optional[ArrayLike] = None,
    z_max: int = 10,
    service: t.Optional[FIntegralService] = None,
) -> bool:
    """
    Whether F varies over the lattice ``|z| <= z_max`` by more than its numerical error.
    """
    if prior.is_constant:
        return False
    service = service or FIntegralService()
    r_vec = spec.r_array if r is None else as_vector(r, d=spec.d, name="r")
    log_values, errors = service.evaluate_many(prior, simplex_lattice(spec.d, z_max), r_vec, spec.theta_gamma)
    spread = float(log_values.max() - log_values.min())
    return spread > 3 * 2 * float(errors.max()) + 1e-9
