r"""Certified spectral-gap bounds from drift and minorization constants.

Every route returns a :class:`GapBound` carrying ``norm_bound``, a certified
upper bound on :math:`\|P\|_{L^2_0(\pi)}`, together with the constants it was
computed from.

Routes
------
``Theorem1+PSD``
    Poincaré constant ``lam / (1 + 2 b / alpha)`` turned into a gap for a
    positive semi-definite ``P``.
``Prop1_Psquared``
    The same formula applied to ``P^2`` with the transformed constants
    ``lam (3/2 - lam)``, ``(2 - lam) b`` and ``alpha^2 nu(K)``; the norm bound
    is the square root of the one for ``P^2``.
``Prop2_PdaggerP``
    Identical arithmetic applied to ``P† P`` for non-reversible chains.
``Doeblin``
    ``1 - alpha / 2`` when the small set is the whole space.
``ExactSpectrum``
    The eigenvalue oracle, for side-by-side reporting.
"""

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .certificates import assumption3_radius, check_assumption3
from .errors import (
    Assumption3ViolatedError,
    ConstantsMismatchError,
    InvalidInputError,
    NotFullSpaceError,
    NotPSDError,
    SetMismatchError,
)


MASS_TOL = 1e-12


class Route(str, enum.Enum):
    THEOREM1_PSD = "Theorem1+PSD"
    PROP1_PSQUARED = "Prop1_Psquared"
    PROP2_PDAGGERP = "Prop2_PdaggerP"
    DOEBLIN = "Doeblin"
    EXACT = "ExactSpectrum"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class GapBound:
    """A certified bound on the norm of ``P`` restricted to mean-zero functions."""

    route: Route
    norm_bound: float
    beta_plus: float = None
    beta_minus: float = None
    inputs: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0.0 <= self.norm_bound <= 1.0:
            raise InvalidInputError(f"norm bound {self.norm_bound!r} outside [0, 1]")

    @property
    def gap(self):
        return 1.0 - self.norm_bound

    def to_dict(self):
        out = {"route": str(self.route), "norm_bound": self.norm_bound}
        if self.beta_plus is not None:
            out["beta_plus"] = self.beta_plus
        if self.beta_minus is not None:
            out["beta_minus"] = self.beta_minus
        out["inputs"] = dict(self.inputs)
        return out


def theorem1_beta(lam, b, alpha):
    """``lam / (1 + 2 b / alpha)``."""
    return lam / (1.0 + 2.0 * b / alpha)


def poincare_bound(drift, minor):
    r"""Poincaré constant :math:`\beta_+` certified by a matching pair of certificates.

    Both certificates must be verified on the same chain beforehand; this
    function only combines their constants.

    >>> from lyapgap.certificates import DriftCertificate, MinorizationCertificate
    >>> d = DriftCertificate([1, 3], [0], 0.5, 3.0)
    >>> m = MinorizationCertificate([0], 1.0, [0.1, 0.9])
    >>> poincare_bound(d, m) == 1 / 14
    True
    """
    if tuple(drift.K) != tuple(minor.K):
        raise SetMismatchError(f"drift set {drift.K} differs from minorization set {minor.K}")
    return theorem1_beta(drift.lam, drift.b, minor.alpha)


def psd_gap(beta_plus, psd_witness, inputs=None):
    """Gap ``beta_plus`` for a positive semi-definite operator."""
    if not psd_witness:
        raise NotPSDError("Theorem 1 Poincare constant needs a PSD operator to become a gap")
    if not 0.0 < beta_plus <= 1.0:
        raise InvalidInputError(f"beta_plus = {beta_plus!r} outside (0, 1]")
    return GapBound(Route.THEOREM1_PSD, 1.0 - beta_plus, beta_plus=beta_plus,
                    inputs=dict(inputs or {}))


def squared_constants(lam, b, alpha, nuK):
    """Drift and minorization constants inherited by ``P^2``.

    Returns ``(lam * (3/2 - lam), (2 - lam) * b, alpha**2 * nuK)``.
    """
    if not 0.0 < lam <= 1.0:
        raise InvalidInputError(f"lambda = {lam!r} outside (0, 1]")
    if not 0.0 < alpha <= 1.0:
        raise InvalidInputError(f"alpha = {alpha!r} outside (0, 1]")
    if not -MASS_TOL <= nuK <= 1.0 + MASS_TOL:
        raise InvalidInputError(f"nu(K) = {nuK!r} outside [0, 1]")
    nuK = min(max(nuK, 0.0), 1.0)
    if not b >= 0:
        raise InvalidInputError(f"b = {b!r} must be >= 0")
    return lam * (1.5 - lam), (2.0 - lam) * b, alpha * alpha * nuK


def _squared_route(route, lam, b, alpha, nuK, extra):
    lam_p, b_p, alpha_p = squared_constants(lam, b, alpha, nuK)
    if alpha_p <= 0:
        raise InvalidInputError("nu(K) = 0 leaves no minorization mass for the squared chain")
    beta = theorem1_beta(lam_p, b_p, alpha_p)
    inputs = {"lambda": lam, "b": b, "alpha": alpha, "nu_K": nuK,
              "lambda_prime": lam_p, "b_prime": b_p, "alpha_prime": alpha_p}
    inputs.update(extra)
    return GapBound(route, math.sqrt(1.0 - beta), beta_plus=beta, inputs=inputs)


def _require_assumption3(drift, R):
    if R is None:
        R = assumption3_radius(drift)
        if R is None:
            raise Assumption3ViolatedError(
                f"no radius R makes K = {{V <= R}} with R > 2b/lambda = {2 * drift.b / drift.lam:.6g}")
    elif not check_assumption3(drift, R):
        raise Assumption3ViolatedError(
            f"K is not {{V <= {R!r}}} or R <= 2b/lambda = {2 * drift.b / drift.lam:.6g}")
    return R


def squared_gap(drift, minor, R=None):
    r"""Norm bound for a reversible ``P`` through the positive operator ``P^2``.

    Requires the level-set condition: ``K = {V <= R}`` with
    ``R > 2 b / lambda``. When ``R`` is omitted any admissible radius is
    accepted.

    Returns
    -------
    GapBound
        ``norm_bound = sqrt(1 - beta)`` with ``beta`` the Poincaré constant of
        ``P^2``.
    """
    if tuple(drift.K) != tuple(minor.K):
        raise SetMismatchError(f"drift set {drift.K} differs from minorization set {minor.K}")
    R = _require_assumption3(drift, R)
    return _squared_route(Route.PROP1_PSQUARED, drift.lam, drift.b, minor.alpha,
                          minor.nu_of(drift.K), {"R": R})


def nonreversible_gap(drift_P, drift_Pdag, minor_P, minor_Pdag, R=None):
    r"""Norm bound for a non-reversible ``P`` through ``P† P``.

    ``P`` and its adjoint must share ``V``, ``K``, ``lambda``, ``b`` and
    ``alpha``; their minorizing measures may differ. Pushing the
    minorization of ``P`` through the adjoint gives
    ``P† P 1_A >= alpha^2 nu†(K) nu(A)`` on ``K``, so ``nu(K)`` in the
    squared constant is the mass the adjoint's measure puts on ``K``.
    The level-set condition is required as for :func:`squared_gap`.
    """
    same_V = np.array_equal(drift_P.V, drift_Pdag.V)
    same = (same_V and drift_P.K == drift_Pdag.K == minor_P.K == minor_Pdag.K
            and drift_P.lam == drift_Pdag.lam and drift_P.b == drift_Pdag.b
            and minor_P.alpha == minor_Pdag.alpha)
    if not same:
        raise ConstantsMismatchError("P and its adjoint must share V, K, lambda, b and alpha")
    R = _require_assumption3(drift_P, R)
    return _squared_route(Route.PROP2_PDAGGERP, drift_P.lam, drift_P.b, minor_P.alpha,
                          minor_Pdag.nu_of(drift_P.K), {"R": R})


def doeblin_gap(minor, full_space):
    """``1 - alpha / 2`` for a minorization holding on the whole state space."""
    if not full_space:
        raise NotFullSpaceError("Doeblin route needs the minorization set to be the whole space")
    return GapBound(Route.DOEBLIN, 1.0 - minor.alpha / 2.0, inputs={"alpha": minor.alpha})


def combine(beta_plus, beta_minus):
    """Spectral gap from the two Poincaré constants."""
    return min(beta_plus, beta_minus)


def exact_gap_bound(report):
    """Wrap a spectral report as a :class:`GapBound` of route ``ExactSpectrum``."""
    return GapBound(Route.EXACT, min(report.op_norm_L20, 1.0),
                    beta_plus=report.beta_plus_exact, beta_minus=report.beta_minus_exact)
