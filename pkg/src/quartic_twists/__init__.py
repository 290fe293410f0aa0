"""Everywhere-local solvability of quadratic twists of quartic curves.

Given a monic irreducible integer quartic f, the package decides for which
square-free q >= 1 the curve q y^2 = f(x) has points over every completion
of Q, counts such q up to large bounds, expands the count's Dirichlet series
into character twists, and verifies the Euler-factor identities that govern
its asymptotics.
"""
from .arith import NotSquareFreeError, PrimeTable, gamma_eval, is_padic_square, jacobi
from .counting import (
    DensityReport,
    FitReport,
    count_L,
    count_L_reference,
    density_check,
    euler_cf_truncated,
    fit_cf,
)
from .criterion import (
    CriterionBundle,
    build_bundle,
    bundle_from_dict,
    bundle_to_dict,
    is_ELS_criterion,
)
from .errors import TripwireError
from .localsolve import (
    DepthCapExceeded,
    SolvabilityReport,
    is_ELS_direct,
    is_locally_solvable,
    local_report,
)
from .quartic import (
    ClassificationConflict,
    GaloisType,
    Quartic,
    mean_rho,
    realizable_types,
)
from .series import (
    CharacterMod8,
    FrobenianMultiplicative,
    QuadCharacter,
    Stream,
    empirical_mean,
    rho_coefficients,
)
from .verify import CriterionOracleMismatch, default_corpus, run_suites
from .zeta import IdentityCheck, LocalFactor, verify_all, verify_identity

__version__ = "0.1.0"

__all__ = [
    "CharacterMod8",
    "ClassificationConflict",
    "CriterionBundle",
    "CriterionOracleMismatch",
    "DensityReport",
    "DepthCapExceeded",
    "FitReport",
    "FrobenianMultiplicative",
    "GaloisType",
    "IdentityCheck",
    "LocalFactor",
    "NotSquareFreeError",
    "PrimeTable",
    "Quartic",
    "QuadCharacter",
    "SolvabilityReport",
    "Stream",
    "TripwireError",
    "build_bundle",
    "bundle_from_dict",
    "bundle_to_dict",
    "count_L",
    "count_L_reference",
    "default_corpus",
    "density_check",
    "empirical_mean",
    "euler_cf_truncated",
    "fit_cf",
    "gamma_eval",
    "is_ELS_criterion",
    "is_ELS_direct",
    "is_locally_solvable",
    "is_padic_square",
    "jacobi",
    "local_report",
    "mean_rho",
    "realizable_types",
    "rho_coefficients",
    "run_suites",
    "verify_all",
    "verify_identity",
    "__version__",
]
