"""Certified spectral gaps of Markov chains from Foster-Lyapunov conditions."""

from .bounds import (
    GapBound,
    Route,
    combine,
    doeblin_gap,
    nonreversible_gap,
    poincare_bound,
    psd_gap,
    squared_constants,
    squared_gap,
)
from .certificates import (
    DriftCertificate,
    MinorizationCertificate,
    check_assumption3,
    fit_common_drift,
    fit_drift,
    fit_minorization,
    level_set,
    verify_drift,
    verify_minorization,
)
from .chain import (
    FiniteChain,
    adjoint,
    apply_to_function,
    apply_to_measure,
    center,
    dirichlet_forms,
    inner_product,
    is_reversible,
    load_chain,
    multiply,
    new_finite_chain,
    norm2,
    square,
    stationary_measure,
    two_state_chain,
)
from .convergence import DecaySeries, moment_decay, tv_decay
from .errors import LyapgapError
from .spectrum import (
    SpectralReport,
    check_claim_one,
    check_claim_two,
    eigen_report,
    exact_poincare_constants,
    is_psd,
    operator_norm,
    symmetrize,
)

__version__ = "0.1.0"
