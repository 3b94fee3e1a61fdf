r"""Finite-state Markov chains and the :math:`L^2(\pi)` operator algebra.

A :class:`FiniteChain` wraps a row-stochastic matrix ``P``. Measures and
observables are plain one-dimensional ``numpy`` arrays; the helpers
:func:`as_measure` and :func:`as_observable` validate them against a chain.
"""

import json

import numpy as np

from .errors import (
    DimensionMismatchError,
    InvalidMeasureError,
    NegativeEntryError,
    NoConvergenceError,
    NonStochasticError,
    NonUniqueError,
    NotInvariantError,
    ZeroMassStateError,
)

ROW_SUM_TOL = 1e-10
STATIONARY_TOL = 1e-10
NULL_SPACE_TOL = 1e-10
POWER_MAX_ITER = 10**6
POWER_TOL = 1e-12


class FiniteChain:
    """Row-stochastic transition matrix over ``n`` labelled states.

    Parameters
    ----------
    P : (n, n) array_like
        Transition probabilities ``P[i, j] = p(i, j)``.
    labels : sequence, optional
        Distinct state identifiers; defaults to ``0, ..., n-1``.
    tol : float
        Admissible deviation of each row sum from one. Rows within
        tolerance are renormalized exactly; larger deviations raise
        :class:`NonStochasticError`.

    Notes
    -----
    Instances are immutable: the stored matrix is a read-only copy.
    """

    __slots__ = ("_P", "_labels")

    def __init__(self, P, labels=None, *, tol=ROW_SUM_TOL):
        P = np.array(P, dtype=float)
        if P.ndim != 2 or P.shape[0] != P.shape[1] or P.shape[0] < 1:
            raise DimensionMismatchError(f"transition matrix must be square, got shape {P.shape}")
        n = P.shape[0]
        if not np.all(np.isfinite(P)):
            raise NonStochasticError("transition matrix has non-finite entries")
        if np.any(P < 0):
            i, j = np.argwhere(P < 0)[0]
            raise NegativeEntryError(f"P[{i}, {j}] = {P[i, j]!r} < 0", state=(int(i), int(j)))
        sums = P.sum(axis=1)
        dev = np.abs(sums - 1.0)
        if np.any(dev > tol):
            i = int(np.argmax(dev))
            raise NonStochasticError(f"row {i} sums to {sums[i]!r}", row=i, row_sum=float(sums[i]))
        P = P / sums[:, None]
        P.flags.writeable = False

        if labels is None:
            labels = tuple(range(n))
        else:
            labels = tuple(labels)
        if len(labels) != n:
            raise DimensionMismatchError(f"{len(labels)} labels for {n} states")
        if len(set(labels)) != n:
            raise ValueError("state labels must be distinct")
        self._P = P
        self._labels = labels

    @property
    def P(self):
        return self._P

    @property
    def labels(self):
        return self._labels

    @property
    def n(self):
        return self._P.shape[0]

    def __repr__(self):
        return f"FiniteChain(n={self.n})"

    # JSON ------------------------------------------------------------------

    def to_dict(self, pi=None):
        out = {"labels": list(self.labels), "P": self.P.tolist()}
        if pi is not None:
            out["pi"] = np.asarray(pi, dtype=float).tolist()
        return out

    @classmethod
    def from_dict(cls, data):
        """Build a chain (and optional validated measure) from chain JSON.

        Returns
        -------
        chain : FiniteChain
        pi : ndarray or None
            The ``"pi"`` entry after validation, ``None`` when absent.
        """
        chain = cls(data["P"], data.get("labels"))
        pi = data.get("pi")
        if pi is not None:
            pi = as_measure(pi, chain.n)
            resid = np.abs(apply_to_measure(pi, chain) - pi).sum()
            if resid > STATIONARY_TOL:
                raise NotInvariantError(f"supplied pi is not invariant: |pi P - pi|_1 = {resid:.3g}")
        return chain, pi


def new_finite_chain(matrix, labels=None, *, tol=ROW_SUM_TOL):
    """Validate ``matrix`` and wrap it as a :class:`FiniteChain`."""
    return FiniteChain(matrix, labels, tol=tol)


def load_chain(path):
    """Read chain JSON ``{"labels": [...], "P": [[...]], "pi": [...]?}``."""
    with open(path) as fh:
        return FiniteChain.from_dict(json.load(fh))


def two_state_chain(eps):
    """The two-state chain ``[[eps, 1-eps], [1-eps, eps]]`` on states 1, 2."""
    return FiniteChain([[eps, 1.0 - eps], [1.0 - eps, eps]], labels=(1, 2))


# measures and observables -----------------------------------------------------


def as_measure(weights, n=None, *, tol=ROW_SUM_TOL):
    """Return ``weights`` as a float array after checking it is a probability vector."""
    mu = np.asarray(weights, dtype=float)
    if mu.ndim != 1:
        raise DimensionMismatchError("a measure is a one-dimensional weight vector")
    if n is not None and mu.shape[0] != n:
        raise DimensionMismatchError(f"measure has {mu.shape[0]} entries, chain has {n} states")
    if np.any(mu < 0) or not np.all(np.isfinite(mu)):
        raise InvalidMeasureError("measure weights must be finite and nonnegative")
    if abs(mu.sum() - 1.0) > tol:
        raise InvalidMeasureError(f"measure weights sum to {mu.sum()!r}")
    return mu


def as_observable(values, n=None):
    f = np.asarray(values, dtype=float)
    if f.ndim != 1:
        raise DimensionMismatchError("an observable is a one-dimensional value vector")
    if n is not None and f.shape[0] != n:
        raise DimensionMismatchError(f"observable has {f.shape[0]} entries, chain has {n} states")
    return f


def delta(n, i):
    """Point mass at state index ``i``."""
    mu = np.zeros(n)
    mu[i] = 1.0
    return mu


# stationary measure -----------------------------------------------------------


def _gth(P):
    """Grassmann-Taksar-Heyman elimination; ``None`` on a zero pivot.

    Subtraction-free, so small stationary weights keep their relative accuracy.
    """
    A = np.array(P, dtype=float)
    n = A.shape[0]
    for k in range(n - 1, 0, -1):
        s = A[k, :k].sum()
        if not s > 0:
            return None
        A[:k, k] /= s
        A[:k, :k] += np.outer(A[:k, k], A[k, :k])
    x = np.zeros(n)
    x[0] = 1.0
    for k in range(1, n):
        x[k] = x[:k] @ A[:k, k]
    return x / x.sum()


def _normalized_solve(P):
    n = P.shape[0]
    A = P.T - np.eye(n)
    A[-1, :] = 1.0
    rhs = np.zeros(n)
    rhs[-1] = 1.0
    x = np.linalg.solve(A, rhs)
    x = np.clip(x, 0.0, None)
    return x / x.sum()


def _power_iteration(P, max_iter, tol):
    # lazy chain: same invariant measure, aperiodic
    Q = 0.5 * (P + np.eye(P.shape[0]))
    x = np.full(P.shape[0], 1.0 / P.shape[0])
    for _ in range(max_iter):
        y = x @ Q
        if np.abs(y - x).sum() <= tol:
            return y / y.sum()
        x = y
    raise NoConvergenceError(f"power iteration did not converge in {max_iter} iterations")


def null_space_dimension(chain, tol=NULL_SPACE_TOL):
    """Number of singular values of ``I - P`` at or below ``tol``."""
    sv = np.linalg.svd(np.eye(chain.n) - chain.P, compute_uv=False)
    return int(np.sum(sv <= tol))


def stationary_measure(chain, *, tol=STATIONARY_TOL, null_tol=NULL_SPACE_TOL,
                       max_iter=POWER_MAX_ITER, power_tol=POWER_TOL):
    r"""Unique invariant probability vector :math:`\pi P = \pi`.

    Uniqueness is decided from the dimension of the null space of
    ``I - P``. The solve uses GTH elimination, falls back to the dense system
    with one equation replaced by the normalization constraint, and finally to
    power iteration on the lazy chain ``(I + P)/2``.

    Raises
    ------
    NonUniqueError
        The null space of ``I - P`` has dimension greater than one.
    NoConvergenceError
        Power iteration exceeded ``max_iter`` steps.
    """
    P = chain.P
    if chain.n == 1:
        return np.ones(1)
    dim = null_space_dimension(chain, null_tol)
    if dim > 1:
        raise NonUniqueError(f"null space of I - P has dimension {dim}", dimension=dim)

    candidates = []
    pi = _gth(P)
    if pi is not None:
        candidates.append(pi)
    try:
        candidates.append(_normalized_solve(P))
    except np.linalg.LinAlgError:
        pass
    for pi in candidates:
        if np.abs(pi @ P - pi).sum() <= tol:
            return pi
    pi = _power_iteration(P, max_iter, power_tol)
    if np.abs(pi @ P - pi).sum() > tol:
        raise NoConvergenceError("stationary residual above tolerance after power iteration")
    return pi


def is_reversible(chain, pi, tol=1e-10):
    """Detailed-balance check ``pi_i P_ij == pi_j P_ji``.

    Returns
    -------
    ReversibilityReport
        Truthy when the maximal violation is at most ``tol``.
    """
    pi = as_measure(pi, chain.n)
    flow = pi[:, None] * chain.P
    gap = np.abs(flow - flow.T)
    i, j = np.unravel_index(np.argmax(gap), gap.shape)
    return ReversibilityReport(bool(gap[i, j] <= tol), float(gap[i, j]), (int(i), int(j)), tol)


class ReversibilityReport:
    __slots__ = ("reversible", "max_violation", "pair", "tol")

    def __init__(self, reversible, max_violation, pair, tol):
        self.reversible = reversible
        self.max_violation = max_violation
        self.pair = pair
        self.tol = tol

    def __bool__(self):
        return self.reversible

    def __repr__(self):
        return (f"ReversibilityReport(reversible={self.reversible}, "
                f"max_violation={self.max_violation:.3g}, pair={self.pair})")

    def to_dict(self):
        return {"reversible": self.reversible, "max_violation": self.max_violation,
                "pair": list(self.pair), "tol": self.tol}


# operator algebra -------------------------------------------------------------


def apply_to_function(chain, f):
    """``(Pf)_i = sum_j P_ij f_j``."""
    return chain.P @ as_observable(f, chain.n)


def apply_to_measure(mu, chain):
    """``(mu P)_j = sum_i mu_i P_ij``."""
    mu = np.asarray(mu, dtype=float)
    if mu.shape != (chain.n,):
        raise DimensionMismatchError(f"measure has shape {mu.shape}, chain has {chain.n} states")
    return mu @ chain.P


def _positive(pi):
    if np.any(pi <= 0):
        i = int(np.argmin(pi))
        raise ZeroMassStateError(f"state {i} has zero mass under pi", state=i)


def adjoint(chain, pi):
    r"""Adjoint of ``P`` in :math:`L^2(\pi)`: ``P†_ij = pi_j P_ji / pi_i``."""
    pi = as_measure(pi, chain.n)
    _positive(pi)
    Pd = chain.P.T * pi[None, :] / pi[:, None]
    return FiniteChain(Pd, chain.labels, tol=1e-9)


def multiply(a, b):
    """Chain with transition matrix ``a.P @ b.P``."""
    if a.n != b.n:
        raise DimensionMismatchError(f"cannot multiply chains with {a.n} and {b.n} states")
    return FiniteChain(a.P @ b.P, a.labels, tol=1e-9)


def square(chain):
    return multiply(chain, chain)


# L^2(pi) geometry --------------------------------------------------------------


def inner_product(pi, f, g):
    pi = np.asarray(pi, dtype=float)
    f = as_observable(f, pi.shape[0])
    g = as_observable(g, pi.shape[0])
    return float(np.sum(pi * f * g))


def mean(pi, f):
    return inner_product(pi, f, np.ones_like(np.asarray(pi, dtype=float)))


def center(pi, f):
    """``f - pi(f)``, the projection of ``f`` onto mean-zero functions."""
    f = as_observable(f, np.shape(pi)[0])
    return f - mean(pi, f)


def norm2(pi, f):
    return float(np.sqrt(inner_product(pi, f, f)))


def dirichlet_forms(chain, pi, f):
    """The forms ``<f, (I - P) f>_pi`` and ``<f, (I + P) f>_pi``."""
    pi = np.asarray(pi, dtype=float)
    if pi.shape != (chain.n,):
        raise DimensionMismatchError("measure and chain dimensions differ")
    f = as_observable(f, chain.n)
    ff = inner_product(pi, f, f)
    fPf = inner_product(pi, f, chain.P @ f)
    return ff - fPf, ff + fPf
