import numpy as np

from poshrink.core.problem import ProblemSpec
from poshrink.risk.schemas import MinimaxBounds

LOWER_FACTOR = 0.5
JEFFREYS_UPPER_FACTOR = 0.52


def minimax_bounds(spec: ProblemSpec) -> MinimaxBounds:
    """
    Minimax risk lower bound ``0.5 * sum log((r_i + s_i) / r_i)`` and the Jeffreys risk upper bound with factor 0.52.
    A predictive whose risk stays below ``ratio`` times the lower bound is nearly minimax.
    """
    log_ratio = float(np.sum(np.log((spec.r_array + spec.s_array) / spec.r_array)))
    return MinimaxBounds(
        lower=LOWER_FACTOR * log_ratio,
        upper=JEFFREYS_UPPER_FACTOR * log_ratio,
        ratio=JEFFREYS_UPPER_FACTOR / LOWER_FACTOR,
    )
