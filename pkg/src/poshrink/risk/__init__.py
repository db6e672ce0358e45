from poshrink.risk.bounds import minimax_bounds  # noqa
from poshrink.risk.estimators import estimator_kl_risk  # noqa
from poshrink.risk.kl_risk import (  # noqa
    expected_log_F,
    kl_risk,
    kl_risk_f,
    kl_risk_gamma,
    kl_risk_power,
    kl_risk_power_terms,
    risk_gap_gamma,
    risk_reduction_f,
)
from poshrink.risk.lemma import lemma_f, lemma_f_derivative_bound, lemma_L  # noqa
from poshrink.risk.oracle import brute_force_risk_1d  # noqa
from poshrink.risk.schemas import MinimaxBounds, RiskEstimate, RiskSettings  # noqa
