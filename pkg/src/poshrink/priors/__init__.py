from poshrink.priors.differential import (  # noqa
    BoundaryReport,
    boundary_derivative_fd,
    divergence_condition_fd,
    eval_log_f,
    laplacian_fd,
    symmetrize_check,
    symmetrized_value,
)
from poshrink.priors.exceptions import GrammarError, HypothesisError, PriorBaseException  # noqa
from poshrink.priors.families import (  # noqa
    Constant,
    CoordSubspace,
    Family,
    FamilyType,
    Point,
    QuadraticPart,
    ShiftPoint,
    Sum,
    SymPoint,
    SymSubspace,
    leave_one_out_subspaces,
    mix_coord_subspace,
)
from poshrink.priors.grammar import complement_basis, parse_prior, parse_priors  # noqa
from poshrink.priors.spec import (  # noqa
    FPrior,
    GammaPrior,
    PowerPrior,
    PriorEnvelope,
    PriorSpec,
    as_f_prior,
    check_hypotheses,
)
