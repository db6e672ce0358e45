from poshrink.closed_form.predictive import (  # noqa
    JEFFREYS_BETA,
    bayes_estimator_gamma,
    bayes_estimator_power,
    log_predictive_gamma,
    log_predictive_gamma_terms,
    log_predictive_power,
    sample_predictive_gamma,
    sample_predictive_power,
)
