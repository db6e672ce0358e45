from poshrink.predictive.shrinkage import (  # noqa
    PredictiveEstimate,
    bayes_estimator,
    bayes_estimator_f,
    bayes_rule_f,
    bayes_rule_power,
    log_predictive,
    log_predictive_f,
    predictive_mean,
    predictive_mean_f,
    sample_predictive,
    sample_predictive_f,
)
