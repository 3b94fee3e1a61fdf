r"""Exact spectral oracle for finite reversible chains.

For a chain reversible with respect to ``pi`` the similarity transform
``S = D^{1/2} P D^{-1/2}`` with ``D = diag(pi)`` is symmetric, so its
spectrum (that of ``P``) is real and is computed with a symmetric
eigensolver. The module also evaluates the two intermediate inequalities of
the drift-to-Poincaré argument, which the test-suite sweeps numerically.
"""

from dataclasses import dataclass, field

import numpy as np

from .chain import (
    adjoint,
    as_measure,
    as_observable,
    dirichlet_forms,
    inner_product,
    is_reversible,
    multiply,
)
from .errors import (
    EigenFailureError,
    EmptyKError,
    NotReversibleError,
    ZeroMassStateError,
    ZeroPiOnKError,
)

REVERSIBLE_TOL = 1e-8
SYMMETRY_TOL = 1e-8
RESIDUAL_TOL = 1e-9
PSD_TOL = 1e-10


@dataclass(frozen=True)
class SpectralReport:
    """Eigenvalues of ``P`` (descending) and derived gap quantities.

    ``beta_plus_exact = 1 - lambda2`` is reported raw and exceeds one when
    ``lambda2 < 0``. The gap is always ``1 - op_norm_L20``.
    """

    eigenvalues: np.ndarray
    lambda2: float
    lambda_min: float
    op_norm_L20: float
    beta_plus_exact: float
    beta_minus_exact: float
    psd: bool
    eigenvectors: np.ndarray = field(default=None, repr=False)
    pi: np.ndarray = field(default=None, repr=False)

    @property
    def gap(self):
        return 1.0 - self.op_norm_L20

    @property
    def has_gap(self):
        return self.gap > 1e-12

    def second_eigenvector(self):
        """Right eigenvector of ``P`` for ``lambda2``, normalized in ``L^2(pi)``."""
        if self.eigenvectors is None or self.eigenvalues.size < 2:
            raise ValueError("no second eigenvector stored")
        return self.eigenvectors[:, 1] / np.sqrt(self.pi)

    def to_dict(self):
        return {
            "eigenvalues": self.eigenvalues.tolist(),
            "op_norm_L20": self.op_norm_L20,
            "beta_plus_exact": self.beta_plus_exact,
            "beta_minus_exact": self.beta_minus_exact,
            "psd": self.psd,
        }


def symmetrize(chain, pi, *, reversible_tol=REVERSIBLE_TOL, symmetry_tol=SYMMETRY_TOL):
    """Symmetric matrix ``S_ij = sqrt(pi_i / pi_j) P_ij`` similar to ``P``.

    Raises
    ------
    ZeroMassStateError
        Some state has zero mass.
    NotReversibleError
        Detailed balance fails at ``reversible_tol`` or the transformed matrix
        is asymmetric beyond ``symmetry_tol``.
    """
    pi = as_measure(pi, chain.n)
    if np.any(pi <= 0):
        raise ZeroMassStateError(f"state {int(np.argmin(pi))} has zero mass")
    rep = is_reversible(chain, pi, reversible_tol)
    if not rep:
        raise NotReversibleError(
            f"detailed balance violated by {rep.max_violation:.3g} at {rep.pair}", pair=rep.pair)
    r = np.sqrt(pi)
    S = r[:, None] * chain.P / r[None, :]
    asym = float(np.max(np.abs(S - S.T)))
    if asym > symmetry_tol:
        raise NotReversibleError(f"symmetrized matrix has asymmetry {asym:.3g}")
    return 0.5 * (S + S.T)


def eigen_report(chain, pi, *, psd_tol=PSD_TOL, residual_tol=RESIDUAL_TOL):
    r"""Full spectrum of a reversible chain.

    Eigenvalues of ``P`` equal those of :func:`symmetrize`. A repeated
    eigenvalue at one (reducible chain) does not raise; the report then has
    ``op_norm_L20 = 1`` and no gap.
    """
    pi = as_measure(pi, chain.n)
    S = symmetrize(chain, pi)
    try:
        w, U = np.linalg.eigh(S)
    except np.linalg.LinAlgError as exc:
        raise EigenFailureError(str(exc)) from exc
    resid = np.linalg.norm(S @ U - U * w[None, :], axis=0)
    if np.any(resid > residual_tol):
        raise EigenFailureError(f"eigenpair residual {resid.max():.3g} above {residual_tol}")
    order = np.argsort(w)[::-1]
    w, U = w[order], U[:, order]
    if w.size == 1:
        lam2 = lam_min = 0.0
    else:
        lam2, lam_min = float(w[1]), float(w[-1])
    op = max(abs(lam2), abs(lam_min))
    return SpectralReport(
        eigenvalues=w,
        lambda2=lam2,
        lambda_min=lam_min,
        op_norm_L20=op,
        beta_plus_exact=1.0 - lam2,
        beta_minus_exact=1.0 + lam_min,
        psd=bool(w[-1] >= -psd_tol),
        eigenvectors=U,
        pi=pi,
    )


def is_psd(report, tol=PSD_TOL):
    return bool(report.lambda_min >= -tol) if report.eigenvalues.size > 1 else True


def exact_poincare_constants(report):
    """``(1 - lambda2, 1 + lambda_min, 1 - op_norm)`` from a spectral report."""
    return report.beta_plus_exact, report.beta_minus_exact, 1.0 - report.op_norm_L20


def operator_norm(chain, pi):
    r"""Exact :math:`\|P\|_{L^2_0(\pi)}` for any chain with positive ``pi``.

    Reversible chains use :func:`eigen_report` directly. Otherwise the norm
    is ``sqrt(lambda2(P† P))``, with ``P† P`` reversible and positive
    semi-definite.
    """
    pi = as_measure(pi, chain.n)
    if is_reversible(chain, pi, REVERSIBLE_TOL):
        return eigen_report(chain, pi).op_norm_L20
    rep = eigen_report(multiply(adjoint(chain, pi), chain), pi)
    return float(np.sqrt(max(rep.lambda2, 0.0)))


def _require_reversible(chain, pi):
    rep = is_reversible(chain, pi, REVERSIBLE_TOL)
    if not rep:
        raise NotReversibleError(
            f"detailed balance violated by {rep.max_violation:.3g} at {rep.pair}", pair=rep.pair)


def check_claim_one(chain, pi, V, f, m):
    r"""Slack of ``<(f - m)^2 / V, (I - P) V>_pi <= <f, (I - P) f>_pi``.

    Returns right side minus left side; nonnegative for reversible chains
    and any constant ``m``.
    """
    pi = as_measure(pi, chain.n)
    _require_reversible(chain, pi)
    V = as_observable(V, chain.n)
    f = as_observable(f, chain.n)
    g2 = (f - m) ** 2 / V
    lhs = inner_product(pi, g2, V - chain.P @ V)
    rhs = dirichlet_forms(chain, pi, f)[0]
    return rhs - lhs


def conditional_mean(pi, f, K):
    """``pi``-average of ``f`` over the index set ``K``."""
    K = list(K)
    if not K:
        raise EmptyKError("set K is empty")
    mass = float(np.sum(pi[K]))
    if not mass > 0:
        raise ZeroPiOnKError("pi puts no mass on K")
    return float(np.sum(pi[K] * f[K]) / mass)


def check_claim_two(chain, pi, f, K, alpha, nu=None):
    r"""Slack of ``||(f - m) 1_K||^2 <= (2 / alpha) <f, (I - P) f>_pi``.

    ``m`` is the ``pi``-conditional mean of ``f`` on ``K``; ``alpha`` must
    come from a minorization certificate verified on ``K``. The measure
    ``nu`` plays no part in the inequality and is accepted for symmetry with
    the certificate.
    """
    pi = as_measure(pi, chain.n)
    _require_reversible(chain, pi)
    f = as_observable(f, chain.n)
    K = sorted(set(int(k) for k in K))
    m = conditional_mean(pi, f, K)
    lhs = float(np.sum(pi[K] * (f[K] - m) ** 2))
    rhs = 2.0 / alpha * dirichlet_forms(chain, pi, f)[0]
    return rhs - lhs
