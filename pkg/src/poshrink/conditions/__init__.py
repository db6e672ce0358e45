from poshrink.conditions.certify import certify_builtin, certify_family, positive_orthant_meets  # noqa
from poshrink.conditions.fineq import check_fineq, check_nonconstant_F, fineq_lhs, simplex_lattice  # noqa
from poshrink.conditions.schemas import Certificate, Check, FineqEntry, FineqGrid, FineqReport  # noqa
