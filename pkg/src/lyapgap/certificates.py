r"""Drift and minorization certificates.

A drift certificate ``(V, K, lambda, b)`` witnesses

.. math:: PV \le (1-\lambda) V + b\,\mathbb{1}_K ,

and a minorization certificate ``(K, alpha, nu)`` witnesses
``P(i, A) >= alpha * nu(A)`` for every ``i`` in ``K``. On a finite state
space the latter reduces to the entrywise inequality ``P_ij >= alpha nu_j``.
"""

from dataclasses import dataclass, field

import numpy as np

from .chain import as_measure, as_observable
from .errors import (
    DimensionMismatchError,
    EmptyLevelSetError,
    InvalidInputError,
    InvalidLyapunovError,
    NoDriftOutsideKError,
    ZeroOverlapError,
)

SLACK_TOL = 1e-10
MINOR_TOL = 1e-12
LAMBDA_MARGIN = 1e-12


def default_lambda_grid():
    """200 logarithmically spaced rates in ``[1e-6, 1]``."""
    return np.logspace(-6, 0, 200)


def _index_set(K, n=None):
    K = tuple(sorted({int(k) for k in K}))
    if n is not None and any(k < 0 or k >= n for k in K):
        raise DimensionMismatchError(f"set {K} has indices outside 0..{n - 1}")
    return K


def _check_lyapunov(V):
    if np.any(V < 1.0):
        i = int(np.argmin(V))
        raise InvalidLyapunovError(f"V[{i}] = {V[i]!r} < 1", state=i)


@dataclass(frozen=True, eq=False)
class DriftCertificate:
    """Witness ``(V, K, lam, b)`` of the Foster-Lyapunov drift inequality."""

    V: np.ndarray
    K: tuple
    lam: float
    b: float

    def __post_init__(self):
        V = as_observable(self.V).copy()
        V.flags.writeable = False
        _check_lyapunov(V)
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "K", _index_set(self.K, V.shape[0]))
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "b", float(self.b))
        if not 0.0 < self.lam <= 1.0:
            raise InvalidInputError(f"drift rate lambda = {self.lam!r} outside (0, 1]")
        if not 0.0 <= self.b < np.inf:
            raise InvalidInputError(f"drift constant b = {self.b!r} must be finite and >= 0")

    def __eq__(self, other):
        if not isinstance(other, DriftCertificate):
            return NotImplemented
        return (self.K == other.K and self.lam == other.lam and self.b == other.b
                and np.array_equal(self.V, other.V))

    __hash__ = None

    def indicator(self):
        return _indicator(self.K, self.V.shape[0])

    def to_dict(self):
        return {"V": self.V.tolist(), "K": list(self.K), "lambda": self.lam, "b": self.b}

    @classmethod
    def from_dict(cls, data):
        return cls(data["V"], data["K"], data["lambda"], data["b"])


@dataclass(frozen=True, eq=False)
class MinorizationCertificate:
    """Witness ``(K, alpha, nu)`` of the small-set condition."""

    K: tuple
    alpha: float
    nu: np.ndarray

    def __post_init__(self):
        nu = as_measure(self.nu).copy()
        nu.flags.writeable = False
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "K", _index_set(self.K, nu.shape[0]))
        object.__setattr__(self, "alpha", float(self.alpha))
        if not self.alpha > 0:
            raise InvalidInputError(f"minorization constant alpha = {self.alpha!r} must be > 0")

    def __eq__(self, other):
        if not isinstance(other, MinorizationCertificate):
            return NotImplemented
        return self.K == other.K and self.alpha == other.alpha and np.array_equal(self.nu, other.nu)

    __hash__ = None

    def nu_of(self, A):
        """Mass ``nu(A)`` of an index set, clipped to ``[0, 1]`` against summation rounding."""
        if not len(A):
            return 0.0
        return min(1.0, float(self.nu[list(_index_set(A))].sum()))

    def to_dict(self):
        return {"K": list(self.K), "alpha": self.alpha, "nu": self.nu.tolist()}

    @classmethod
    def from_dict(cls, data):
        return cls(data["K"], data["alpha"], data["nu"])


def _indicator(K, n):
    one = np.zeros(n)
    one[list(K)] = 1.0
    return one


@dataclass(frozen=True)
class CheckReport:
    """Outcome of a pointwise inequality check.

    ``slack`` holds the per-state margin (right side minus left side); the
    check passes when every margin is at least ``-tol``.
    """

    passed: bool
    worst_state: int
    worst_slack: float
    slack: np.ndarray = field(repr=False)
    tol: float = SLACK_TOL

    def __bool__(self):
        return self.passed

    def to_dict(self):
        return {"passed": self.passed, "worst_state": self.worst_state,
                "worst_slack": self.worst_slack, "tol": self.tol}


def _report(slack, tol):
    i = int(np.argmin(slack))
    return CheckReport(bool(slack[i] >= -tol), i, float(slack[i]), slack, tol)


def drift_slack(chain, cert):
    """Per-state margin ``(1 - lam) V + b 1_K - PV``."""
    V = cert.V
    if V.shape[0] != chain.n:
        raise DimensionMismatchError(f"V has {V.shape[0]} entries, chain has {chain.n} states")
    return (1.0 - cert.lam) * V + cert.b * cert.indicator() - chain.P @ V


def verify_drift(chain, cert, tol=SLACK_TOL):
    """Check the drift inequality at every state.

    >>> from lyapgap.chain import two_state_chain
    >>> cert = DriftCertificate([1.0, 3.0], [0], 0.5, 3.0)
    >>> bool(verify_drift(two_state_chain(0.1), cert))
    True
    """
    _check_lyapunov(cert.V)
    return _report(drift_slack(chain, cert), tol)


def fit_minorization(chain, K):
    """Maximal-``alpha`` minorization on ``K`` from column minima.

    ``alpha = sum_j min_{i in K} P_ij`` and ``nu`` is the normalized vector
    of column minima. No other measure achieves a larger constant for the
    same set.
    """
    K = _index_set(K, chain.n)
    if not K:
        raise InvalidInputError("minorization set K must be nonempty")
    colmin = chain.P[list(K)].min(axis=0)
    alpha = float(colmin.sum())
    if not alpha > 0:
        raise ZeroOverlapError(f"rows {K} share no common support", K=K)
    return MinorizationCertificate(K, min(alpha, 1.0), colmin / colmin.sum())


def verify_minorization(chain, cert, tol=MINOR_TOL):
    """Check ``P_ij >= alpha nu_j - tol`` for ``i`` in ``K`` and all ``j``.

    The reported slack for state ``i`` is the minimum over ``j``; states
    outside ``K`` carry ``+inf``.
    """
    if cert.nu.shape[0] != chain.n:
        raise DimensionMismatchError("nu and chain dimensions differ")
    slack = np.full(chain.n, np.inf)
    K = list(cert.K)
    if K:
        slack[K] = (chain.P[K] - cert.alpha * cert.nu[None, :]).min(axis=1)
    return _report(slack, tol)


def fit_drift(chain, V, K, lambda_grid=None, *, alpha=None, tol=SLACK_TOL,
              margin=LAMBDA_MARGIN):
    r"""Fit ``(lambda, b)`` for a given Lyapunov function and set.

    For each candidate rate the tightest constant is
    ``b(lambda) = max(0, max_{i in K} (PV_i - (1 - lambda) V_i))``. Rates
    for which some state outside ``K`` violates ``PV_i <= (1 - lambda) V_i``
    are infeasible. Among feasible rates the one maximizing
    ``lambda / (1 + 2 b / alpha)`` wins, ties going to the smallest rate.

    Parameters
    ----------
    chain : FiniteChain
    V : array_like
        Lyapunov function, all values at least one.
    K : iterable of int
        The small set.
    lambda_grid : array_like, optional
        Candidate rates in ``(0, 1]``; defaults to :func:`default_lambda_grid`.
    alpha : float, optional
        Minorization constant used to rank rates; fitted on ``K`` by
        :func:`fit_minorization` when omitted.
    margin : float
        Subtracted from the winning rate before it is reported.

    Returns
    -------
    DriftCertificate
    """
    return fit_common_drift([chain], V, K, lambda_grid, alpha=alpha, tol=tol, margin=margin)


def fit_common_drift(chains, V, K, lambda_grid=None, *, alpha=None, tol=SLACK_TOL,
                     margin=LAMBDA_MARGIN):
    """One drift certificate valid for every chain in ``chains`` at once.

    A rate is feasible only if it is feasible for each chain, and ``b`` is the
    largest of the per-chain constants. With a single chain this is
    :func:`fit_drift`. When ``alpha`` is omitted the smallest fitted
    minorization constant across the chains is used for ranking.
    """
    chains = list(chains)
    n = chains[0].n
    V = as_observable(V, n)
    _check_lyapunov(V)
    K = _index_set(K, n)
    inK = _indicator(K, n).astype(bool)

    grid = default_lambda_grid() if lambda_grid is None else np.asarray(lambda_grid, dtype=float)
    grid = np.unique(grid)
    if grid.size == 0 or grid[0] <= 0 or grid[-1] > 1:
        raise InvalidInputError("lambda grid must be a nonempty subset of (0, 1]")

    lam_cap = np.inf
    worst = None
    b = np.zeros_like(grid)
    for chain in chains:
        if chain.n != n:
            raise DimensionMismatchError("chains have different state counts")
        PV = chain.P @ V
        out = ~inK
        if np.any(out):
            caps = (V[out] - PV[out] + tol) / V[out]
            j = int(np.argmin(caps))
            if caps[j] < lam_cap:
                lam_cap = caps[j]
                worst = int(np.flatnonzero(out)[j])
        if K:
            excess = PV[inK][None, :] - (1.0 - grid[:, None]) * V[inK][None, :]
            b = np.maximum(b, np.maximum(0.0, excess.max(axis=1)))

    feasible = grid <= lam_cap
    if not np.any(feasible):
        raise NoDriftOutsideKError(
            f"state {worst} outside K has no drift for any rate >= {grid[0]:.3g}",
            state=worst, max_rate=float(lam_cap))

    if K:
        if alpha is None:
            alpha = min(fit_minorization(c, K).alpha for c in chains)
        score = grid / (1.0 + 2.0 * b / alpha)
    else:
        score = grid.copy()
    score[~feasible] = -np.inf
    k = int(np.argmax(score))  # grid ascending: first maximum is the smallest rate
    lam = grid[k] - margin if grid[k] > margin else grid[k]
    return DriftCertificate(V, K, lam, float(b[k]))


def level_set(V, R):
    """Indices ``{i : V_i <= R}``."""
    V = as_observable(V)
    K = tuple(int(i) for i in np.flatnonzero(V <= R))
    if not K:
        raise EmptyLevelSetError(f"no state has V <= {R!r}", R=R)
    return K


def assumption3_radius(cert):
    """A radius ``R`` with ``K = {V <= R}`` and ``R > 2b/lam``, or ``None``.

    Such a radius exists iff ``max_K V < min_{i not in K} V_i`` and
    ``2b/lam < min_{i not in K} V_i``.
    """
    V = cert.V
    inK = cert.indicator().astype(bool)
    if not np.any(inK):
        return None
    top = float(V[inK].max())
    high = float(V[~inK].min()) if np.any(~inK) else np.inf
    need = 2.0 * cert.b / cert.lam
    if not (top < high and need < high):
        return None
    if need < top:
        return top
    return 2.0 * need + 1.0 if high == np.inf else 0.5 * (need + high)


def check_assumption3(cert, R=None):
    """Whether ``cert.K`` is the level set ``{V <= R}`` with ``R > 2 b / lam``.

    With ``R=None`` the check asks whether any admissible radius exists.
    """
    if R is None:
        return assumption3_radius(cert) is not None
    try:
        K = level_set(cert.V, R)
    except EmptyLevelSetError:
        return False
    return K == cert.K and R > 2.0 * cert.b / cert.lam
