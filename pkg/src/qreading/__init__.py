"""Reading a binary phase-shift memory with squeezed coherent light and homodyne detection.

The package compares the coherent-state reading strategy with the
closed-form optimal squeezed probe, backs the closed form with a numeric
search, and ships a truncated Fock-space oracle (:mod:`qreading.fock`) that
checks the underlying channel identities and homodyne statistics by brute
force.
"""

from .exceptions import DomainError, IntegrationError, OracleError, TruncationError, UnsupportedPriorError
from .gauss_core import (
    DecisionRule,
    GaussianPdf,
    equal_width_error,
    erf,
    erfc,
    error_probability,
    mle_error,
    mle_rule,
)
from .homodyne import HomodyneSetup, loss_convolution_width, outcome_pdf
from .reading import (
    NOT_CONVERGED,
    REGIME_WARNING,
    SQUEEZING_INFEASIBLE,
    CurveRow,
    Method,
    ReadingTask,
    SearchConfig,
    Strategy,
    error_for,
    hybrid_bound,
    numeric_optimal,
    optimal_strategy,
    sql_strategy,
    tradeoff_curve,
)
from .states import SqueezedCoherentState, apply_phase_shift, energy, wigner, wigner_grid

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "IntegrationError",
    "OracleError",
    "TruncationError",
    "UnsupportedPriorError",
    "DecisionRule",
    "GaussianPdf",
    "equal_width_error",
    "erf",
    "erfc",
    "error_probability",
    "mle_error",
    "mle_rule",
    "HomodyneSetup",
    "loss_convolution_width",
    "outcome_pdf",
    "NOT_CONVERGED",
    "REGIME_WARNING",
    "SQUEEZING_INFEASIBLE",
    "CurveRow",
    "Method",
    "ReadingTask",
    "SearchConfig",
    "Strategy",
    "error_for",
    "hybrid_bound",
    "numeric_optimal",
    "optimal_strategy",
    "sql_strategy",
    "tradeoff_curve",
    "SqueezedCoherentState",
    "apply_phase_shift",
    "energy",
    "wigner",
    "wigner_grid",
]
