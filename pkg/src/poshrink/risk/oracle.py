import typing as t

import numpy as np
from scipy import stats

from poshrink.core import exceptions
from poshrink.core.problem import ProblemSpec
from poshrink.core.special import poisson_upper

LogPmf = t.Callable[[int, np.ndarray], np.ndarray]


def brute_force_risk_1d(q: LogPmf, lam: float, spec: ProblemSpec, truncation: t.Optional[int] = None) -> float:
    """
    Direct double sum ``sum_x Po(x; r lambda) sum_y Po(y; s lambda) (log Po(y; s lambda) - q(x, y))``.

    :param q: Predictive log-pmf, called as ``q(x, ys)`` with a scalar ``x`` and an array of ``y`` values.
    :param lam: Positive rate.
    :param spec: One-dimensional problem.
    :param truncation: Largest ``x`` and ``y``. Defaults to the Poisson truncation policy of each sum.
    """
    if spec.d != 1:
        raise exceptions.UnsupportedDimensionError(f"The brute-force oracle is one-dimensional, got d={spec.d}")
    r, s = spec.r[0], spec.s[0]
    x_max = truncation if truncation is not None else poisson_upper(r * lam)
    y_max = truncation if truncation is not None else poisson_upper(s * lam)
    ys = np.arange(y_max + 1)
    log_true = stats.poisson.logpmf(ys, s * lam)
    weights_y = np.exp(log_true)
    total = 0.0
    for x in range(x_max + 1):
        total += stats.poisson.pmf(x, r * lam) * float(np.dot(weights_y, log_true - q(x, ys)))
    return total
