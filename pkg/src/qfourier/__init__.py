"""Basic Fourier series on the q-linear grid.

q-calculus primitives (:mod:`qcore`), the q-trigonometric functions
(:mod:`qtrig`), the zeros of S_q (:mod:`zeros`), expansions (:mod:`fourier`),
convergence and Hölder diagnostics (:mod:`analysis`), identity checks
(:mod:`identities`), a scikit-learn style front end (:mod:`estimator`) and a
command-line driver (:mod:`cli`).
"""

from .analysis import (
    DecayReport,
    HolderReport,
    check_holder,
    decay_diagnostics,
    energy_check,
    estimate_holder,
    lemma_bound_B,
    offgrid_error,
    sup_error_on_grid,
    verify_orthogonality,
)
from .estimator import QFourierRegressor, QTrigBasis
from .exceptions import (
    ConfigError,
    NonConvergenceError,
    PreconditionError,
    PrecisionWarning,
    QDomainError,
    ScanFailure,
)
from .fourier import (
    FourierSeries,
    closed_abs_coeffs,
    closed_monomial_coeffs,
    closed_sign_coeffs,
    closed_step_coeffs,
    coeff_a0,
    coeff_ak,
    coeff_bk,
    compute_series,
    eval_partial_sum,
)
from .qcore import (
    GridFunction,
    QContext,
    delta_op,
    delta_quotient,
    q_integral_0a,
    q_integral_sym,
    q_pochhammer,
    verify_ibp,
)
from .qtrig import SeriesValue, cq, exp_q, jackson_bessel3, sq, sq_prime, theorem_d_cq, theorem_d_sq
from .zeros import ZeroTable, alpha_k, beta0, extract_Rk, extract_Sk, find_zeros, theorem_a_bracket

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
