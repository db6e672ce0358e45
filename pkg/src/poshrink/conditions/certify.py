"""
Arithmetic check of the hypotheses under which each built-in family is known to dominate the power prior.
No integration is performed.
"""

import typing as t

import numpy as np
from scipy import optimize

from poshrink import settings
from poshrink.conditions.schemas import Certificate, Check
from poshrink.priors import families
from poshrink.priors.spec import FPrior

JEFFREYS = 0.5


def _alpha_check(alpha: float, bound: float, proposition: str, label: str) -> Check:
    return Check(
        name="alpha-range",
        passed=0 < alpha <= bound + settings.HYPOTHESIS_TOL,
        detail=f"0 < alpha={alpha:g} <= {label}={bound:g} ({proposition})",
    )


def _jeffreys_check(beta: np.ndarray) -> Check:
    return Check(
        name="jeffreys-beta",
        passed=bool(np.all(np.abs(beta - JEFFREYS) <= settings.HYPOTHESIS_TOL)),
        detail=f"beta={beta.tolist()} must equal 1/2 everywhere",
    )


def positive_orthant_meets(vperp: np.ndarray) -> bool:
    """
    Whether the subspace orthogonal to the rows of ``vperp`` contains a nonzero point of the nonnegative orthant.
    """
    d = vperp.shape[1]
    a_eq = np.vstack([vperp, np.ones((1, d))])
    b_eq = np.concatenate([np.zeros(vperp.shape[0]), [1.0]])
    result = optimize.linprog(np.zeros(d), A_eq=a_eq, b_eq=b_eq, bounds=[(0, None)] * d, method="highs")
    return bool(result.status == 0)


def _certify_family(family: families.Family, d: int, beta: np.ndarray) -> Certificate:
    if isinstance(family, families.Sum):
        parts = [_certify_family(part, d, beta) for part in family.parts]
        return Certificate(
            family=family.label,
            proposition="Proposition 4",
            applies=all(part.applies for part in parts),
            checks=[Check(name="parts-certified", passed=all(p.applies for p in parts), detail="every part certified")],
            parts=parts,
        )

    if isinstance(family, (families.ShiftPoint, families.Point)) and family.alpha_bound(d, beta) is not None:
        eta = getattr(family, "eta", 0.0)
        checks = [
            _alpha_check(family.alpha, float(np.sum(beta)) - 1, "Proposition 1", "sum(beta)-1"),
            Check(name="eta-nonnegative", passed=eta >= 0, detail=f"eta={eta:g}"),
        ]
        proposition = "Proposition 1"
    elif isinstance(family, families.SymPoint):
        checks = [
            _alpha_check(family.alpha, (d - 2) / 2, "Proposition 2", "(d-2)/2"),
            _jeffreys_check(beta),
            Check(name="center-nonnegative", passed=min(family.center) >= 0, detail=f"center={list(family.center)}"),
        ]
        proposition = "Proposition 2"
    elif isinstance(family, families.SymSubspace):
        basis = family.basis
        deviation = float(np.abs(basis @ basis.T - np.eye(basis.shape[0])).max())
        checks = [
            _alpha_check(family.alpha, (basis.shape[0] - 2) / 2, "Proposition 3", "(d-k-2)/2"),
            _jeffreys_check(beta),
            Check(
                name="orthonormal", passed=deviation <= settings.ORTHONORMAL_TOL, detail=f"deviation={deviation:.2g}"
            ),
            Check(
                name="target-meets-orthant",
                passed=positive_orthant_meets(basis),
                detail="V contains a nonzero nonnegative point",
                required=False,
            ),
        ]
        proposition = "Proposition 3"
    elif isinstance(family, families.CoordSubspace):
        excluded = [i for i in range(d) if i not in family.include]
        checks = [
            _alpha_check(family.alpha, (len(family.include) - 2) / 2, "Proposition 3", "(d-k-2)/2"),
            _jeffreys_check(beta),
            Check(
                name="target-meets-orthant",
                passed=bool(excluded),
                detail=f"V is spanned by coordinates {[i + 1 for i in excluded]}",
                required=False,
            ),
        ]
        proposition = "Proposition 3"
    else:
        detail = "F is constant" if isinstance(family, families.Constant) else "no proposition covers this family"
        return Certificate(
            family=family.label,
            applies=False,
            checks=[Check(name="covered", passed=False, detail=detail)],
        )
    return Certificate(
        family=family.label,
        proposition=proposition,
        applies=all(check.passed for check in checks if check.required),
        checks=checks,
    )


def certify_builtin(prior: FPrior) -> Certificate:
    """
    Report which proposition certifies dominance of the prior over the power prior with the same ``beta``, and
    every individual hypothesis check.

    :param prior: Shrinkage prior with a built-in family.

    :return: Structured verdict; ``applies`` is true when every required check passes.
    """
    return _certify_family(prior.family, prior.d, prior.beta_array)


def certify_family(family: families.Family, d: int, beta: t.Union[float, t.Sequence[float]] = JEFFREYS) -> Certificate:
    return _certify_family(family, d, np.broadcast_to(np.asarray(beta, dtype=float), (d,)))
