from poshrink.core.exceptions import (  # noqa
    CostLimitError,
    DomainError,
    IntegrabilityError,
    InvalidArgumentError,
    NumericalError,
    PoshrinkBaseException,
    SingularityError,
    UnsupportedDimensionError,
)
from poshrink.core.problem import (  # noqa
    CountVector,
    ProblemSpec,
    ThetaPoint,
    as_counts,
    as_vector,
    derive_gamma,
    lambda_from_theta,
    theta_from_lambda,
)
from poshrink.core.rng import (  # noqa
    derive_seed,
    sample_gamma,
    sample_poisson,
    sample_uniform_open,
    substream,
    thin_binomial,
)
from poshrink.core.special import (  # noqa
    log_gamma_fn,
    log_mean_exp,
    log_sum_exp,
    poisson_box,
    poisson_expectation,
    poisson_support,
    poisson_upper,
)
