r"""Grid discretizations of two continuum kernels and their certificate constants.

Ornstein-Uhlenbeck chain
    ``X' = (1 - a) X + sigma B`` with Gaussian ``B``. Its Markov operator has
    spectrum ``(1 - a)^k``.

Diffusion map
    ``T_eps f(x) = int g(x - y) e^{-U(y)} f(y) dy / int g(x - y) e^{-U(y)} dy``
    with ``g(z) = exp(-z^2 / (4 eps))``. It is reversible and positive
    semi-definite.

Both kernels are discretized on a uniform trapezoid grid:

.. math:: P_{ij} \propto k(x_i, x_j)\, w_j ,

with each row renormalized to sum to one. Everything here is one-dimensional.
The constant calculators follow the closed-form displays verbatim; see
:func:`ou_paper_constants` for a caveat on the OU minorization constant.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .bounds import GapBound, Route
from .certificates import CheckReport
from .chain import FiniteChain
from .errors import (
    AssumptionUViolatedError,
    EpsilonOutOfRangeError,
    GridTooCoarseError,
    GridTooNarrowError,
    InvalidInputError,
)

TRUNCATION_TOL = 1e-6
SUBGRID_POINTS = 2001


@dataclass(frozen=True)
class Grid:
    """``n`` uniformly spaced nodes on ``[-L, L]`` with trapezoid weights."""

    L: float
    n: int

    def __post_init__(self):
        if not self.L > 0:
            raise InvalidInputError(f"grid half-width L = {self.L!r} must be positive")
        if int(self.n) != self.n or self.n < 3 or self.n % 2 == 0:
            raise InvalidInputError(f"grid size n = {self.n!r} must be an odd integer >= 3")

    @property
    def nodes(self):
        x = np.linspace(-self.L, self.L, self.n)
        x[self.n // 2] = 0.0
        return x

    @property
    def spacing(self):
        return 2.0 * self.L / (self.n - 1)

    @property
    def weights(self):
        w = np.full(self.n, self.spacing)
        w[0] = w[-1] = 0.5 * self.spacing
        return w

    def to_dict(self):
        return {"L": self.L, "n": self.n}


def _renormalize(raw):
    sums = raw.sum(axis=1)
    return raw / sums[:, None], sums


# Ornstein-Uhlenbeck ---------------------------------------------------------


@dataclass(frozen=True)
class OUParams:
    a: float
    sigma: float

    def __post_init__(self):
        if not 0.0 < self.a < 1.0:
            raise InvalidInputError(f"mean reversion a = {self.a!r} outside (0, 1)")
        if not self.sigma > 0:
            raise InvalidInputError(f"noise scale sigma = {self.sigma!r} must be positive")

    @property
    def stationary_variance(self):
        """Variance ``sigma^2 / (a (2 - a))`` of the AR(1) fixed point."""
        return self.sigma**2 / (self.a * (2.0 - self.a))

    def to_dict(self):
        return {"a": self.a, "sigma": self.sigma}


def ou_truncation_mass(params, grid):
    """Per-row Gaussian mass falling outside ``[-L, L]``."""
    mu = (1.0 - params.a) * grid.nodes
    s = params.sigma
    return ndtr((-grid.L - mu) / s) + ndtr((mu - grid.L) / s)


def discretize_ou(params, grid, *, truncation_tol=TRUNCATION_TOL):
    """Finite chain approximating the OU operator on ``grid``.

    Raises
    ------
    GridTooNarrowError
        Some row loses more than ``truncation_tol`` Gaussian mass outside the
        grid before renormalization.
    """
    lost = ou_truncation_mass(params, grid)
    if lost.max() > truncation_tol:
        i = int(np.argmax(lost))
        raise GridTooNarrowError(
            f"row at x = {grid.nodes[i]:.4g} loses mass {lost[i]:.3g} > {truncation_tol:g}",
            lost=float(lost[i]))
    raw = ou_raw_rows(params, grid)
    P, _ = _renormalize(raw)
    return FiniteChain(P)


def ou_raw_rows(params, grid):
    """Unnormalized quadrature rows ``k(x_i, x_j) w_j`` of the OU kernel."""
    x = grid.nodes
    s2 = params.sigma**2
    z = x[None, :] - (1.0 - params.a) * x[:, None]
    k = np.exp(-0.5 * z * z / s2) / math.sqrt(2.0 * math.pi * s2)
    return k * grid.weights[None, :]


def ou_invariant(params, grid):
    r"""Exact invariant vector of :func:`discretize_ou`.

    The continuum pair ``pi(x) k(x, y)`` is symmetric, so the discrete chain
    is reversible with ``pi_i ∝ pi(x_i) w_i Z_i``, ``Z_i`` the raw row sum.
    """
    x = grid.nodes
    raw = ou_raw_rows(params, grid)
    logpi = -0.5 * x * x / params.stationary_variance
    pi = np.exp(logpi - logpi.max()) * grid.weights * raw.sum(axis=1)
    return pi / pi.sum()


@dataclass(frozen=True)
class OUConstants:
    """Closed-form drift and minorization constants for ``V(x) = 1 + x^2``."""

    lam: float
    b: float
    R: float
    alpha: float
    sigma_nu: float

    @staticmethod
    def V(x):
        return 1.0 + np.asarray(x, dtype=float) ** 2

    @property
    def theorem1_beta(self):
        return self.lam / (1.0 + 2.0 * self.b / self.alpha)

    @property
    def theorem1_norm_bound(self):
        return 1.0 - self.theorem1_beta

    @property
    def printed_norm_bound(self):
        """``1 - a / (1 + (sigma^2 + 1) exp(...))``, i.e. ``b / alpha`` without the factor 2."""
        return 1.0 - self.lam / (1.0 + self.b / self.alpha)

    @property
    def alpha_for_nu(self):
        """Largest constant valid with ``nu = N(0, sigma^2 / 2)``: ``alpha / sqrt(2)``."""
        return self.alpha / math.sqrt(2.0)

    def to_dict(self):
        return {"lambda": self.lam, "b": self.b, "R": self.R, "alpha": self.alpha,
                "alpha_for_nu": self.alpha_for_nu,
                "theorem1_beta_plus": self.theorem1_beta,
                "theorem1_norm_bound": self.theorem1_norm_bound,
                "printed_formula_norm_bound": self.printed_norm_bound}


def ou_paper_constants(params):
    r"""Closed-form certificate constants for the OU chain with ``V = 1 + x^2``.

    ``lambda = a``, ``b = sigma^2 + 1``, ``R^2 = (sigma^2 + 1) / (a (1 - a))``
    and ``alpha = exp(-(sigma^2 + 1) / sigma^2 * (1 - a) / a)``.

    Notes
    -----
    For ``|x| <= R`` the ratio of the transition density to the
    ``N(0, sigma^2 / 2)`` density attains ``alpha / sqrt(2)`` at ``x = ±R``,
    so with that reference measure only ``alpha / sqrt(2)`` is a valid
    minorization constant (:attr:`OUConstants.alpha_for_nu`). ``alpha`` is
    kept as displayed for comparison.
    """
    a, s2 = params.a, params.sigma**2
    b = s2 + 1.0
    R = math.sqrt(b / (a * (1.0 - a)))
    alpha = math.exp(-b / s2 * (1.0 - a) / a)
    return OUConstants(lam=a, b=b, R=R, alpha=alpha, sigma_nu=params.sigma / math.sqrt(2.0))


def gaussian_reference(grid, scale):
    """Discretized ``N(0, scale^2)`` on ``grid``, normalized to a probability vector."""
    x = grid.nodes
    w = np.exp(-0.5 * (x / scale) ** 2) * grid.weights
    return w / w.sum()


# potentials ------------------------------------------------------------------


@dataclass(frozen=True)
class Potential:
    """Potential ``U`` with analytic gradient and a Hessian bound.

    ``shift`` records the constant added so that ``U >= 1``.
    """

    U: object
    gradU: object
    hessU: object
    hess_bound: float
    description: str
    shift: float = 0.0

    def __post_init__(self):
        if not self.hess_bound >= 0:
            raise InvalidInputError("Hessian bound must be nonnegative")

    def check(self, grid, tol=1e-4):
        """Sanity checks on ``grid``.

        ``U`` must be bounded below by one at the nodes, the gradient must
        agree with central differences of ``U`` and ``|U''|`` must stay
        below ``hess_bound``.
        """
        x = grid.nodes
        u = self.U(x)
        if np.min(u) < 1.0 - 1e-12:
            raise InvalidInputError(f"{self.description}: U < 1 on the grid")
        h = 1e-5
        fd = (self.U(x + h) - self.U(x - h)) / (2 * h)
        g = self.gradU(x)
        if np.max(np.abs(fd - g) / np.maximum(1.0, np.abs(g))) > tol:
            raise InvalidInputError(f"{self.description}: gradient disagrees with finite differences")
        if np.max(np.abs(self.hessU(x))) > self.hess_bound * (1 + 1e-12) + 1e-12:
            raise InvalidInputError(f"{self.description}: |U''| exceeds the stated bound")
        return True


def _shifted(U, gradU, hessU, hess_bound, name, floor):
    shift = 1.0 - floor
    return Potential(lambda x: U(x) + shift, gradU, hessU, hess_bound,
                     f"{name} (shifted by {shift:+.6g})" if shift else name, shift)


def quadratic(k=1.0):
    """``U = k x^2 / 2``, shifted so that ``U >= 1``."""
    return _shifted(lambda x: 0.5 * k * np.asarray(x) ** 2,
                    lambda x: k * np.asarray(x, dtype=float),
                    lambda x: np.full(np.shape(x), float(k)),
                    abs(k), f"quadratic(k={k:g})", 0.0)


def shifted_quadratic():
    """``U = 1 + x^2 / 2``."""
    def gradU(x):
        return np.asarray(x, dtype=float)

    return Potential(lambda x: 1.0 + 0.5 * gradU(x) ** 2, gradU,
                     lambda x: np.ones(np.shape(x)), 1.0, "shifted_quadratic")


def lipschitz_plus_quadratic(c=1.0, delta=1.0):
    """``U = c sqrt(1 + x^2) + delta x^2 / 2``, shifted so that ``U >= 1``.

    The first term is ``c``-Lipschitz with ``0 <= U_0'' <= c``.
    """
    def U(x):
        x = np.asarray(x, dtype=float)
        return c * np.sqrt(1.0 + x * x) + 0.5 * delta * x * x

    def gradU(x):
        x = np.asarray(x, dtype=float)
        return c * x / np.sqrt(1.0 + x * x) + delta * x

    def hessU(x):
        x = np.asarray(x, dtype=float)
        return c / (1.0 + x * x) ** 1.5 + delta

    return _shifted(U, gradU, hessU, abs(c) + abs(delta),
                    f"lipschitz_plus_quadratic(c={c:g}, delta={delta:g})", float(U(0.0)))


def flat():
    """``U = 1``: no confinement, never satisfies the dissipativity condition."""
    return Potential(lambda x: np.ones(np.shape(x)), lambda x: np.zeros(np.shape(x)),
                     lambda x: np.zeros(np.shape(x)), 0.0, "flat")


POTENTIALS = {
    "quadratic": quadratic,
    "shifted_quadratic": shifted_quadratic,
    "lipschitz_plus_quadratic": lipschitz_plus_quadratic,
    "flat": flat,
}


def make_potential(name, **params):
    try:
        factory = POTENTIALS[name]
    except KeyError:
        raise InvalidInputError(f"unknown potential {name!r}; choose from {sorted(POTENTIALS)}")
    return factory(**params)


# diffusion map ----------------------------------------------------------------


@dataclass(frozen=True)
class DiffMapParams:
    epsilon: float
    potential: Potential

    def __post_init__(self):
        m = self.potential.hess_bound
        if not self.epsilon > 0:
            raise EpsilonOutOfRangeError(f"epsilon = {self.epsilon!r} must be positive")
        if m > 0 and not self.epsilon < 1.0 / (4.0 * m):
            raise EpsilonOutOfRangeError(
                f"epsilon = {self.epsilon!r} outside (0, 1/(4 |U''|_inf)) = (0, {1 / (4 * m):.6g})")

    @property
    def sigma2(self):
        m = self.potential.hess_bound
        return 2.0 * self.epsilon / (1.0 + 2.0 * m * self.epsilon)

    def to_dict(self):
        return {"epsilon": self.epsilon, "potential": self.potential.description}


def diffmap_raw_rows(params, grid):
    x = grid.nodes
    d = x[:, None] - x[None, :]
    g = np.exp(-d * d / (4.0 * params.epsilon))
    return g * (np.exp(-params.potential.U(x)) * grid.weights)[None, :]


def discretize_diffusion_map(params, grid):
    """Finite chain approximating ``T_eps`` on ``grid``.

    Raises
    ------
    GridTooCoarseError
        Node spacing exceeds ``sqrt(eps) / 3``.
    """
    if grid.spacing > math.sqrt(params.epsilon) / 3.0:
        raise GridTooCoarseError(
            f"spacing {grid.spacing:.4g} > sqrt(eps)/3 = {math.sqrt(params.epsilon) / 3:.4g}")
    P, _ = _renormalize(diffmap_raw_rows(params, grid))
    return FiniteChain(P)


def diffusion_map_invariant(params, grid):
    """Exact invariant vector ``pi_i ∝ e^{-U(x_i)} Z_i w_i`` of the discretized map."""
    x = grid.nodes
    Z = diffmap_raw_rows(params, grid).sum(axis=1)
    pi = np.exp(-params.potential.U(x)) * Z * grid.weights
    return pi / pi.sum()


def verify_assumption_U(potential, lambda0, R, probe_grid, tol=1e-10):
    r"""Dissipativity ``|U'|^2 / 2 >= lambda0 U + |U''|_inf`` for ``|x| >= R``.

    The inequality is probed at the grid nodes with ``|x| >= R`` and at
    ``x = ±R`` itself. The grid must reach at least ``3 R``.
    """
    if probe_grid.L < 3.0 * R:
        raise InvalidInputError(f"probe grid half-width {probe_grid.L} < 3R = {3 * R}")
    x = probe_grid.nodes
    x = np.concatenate([[-R, R], x[np.abs(x) >= R]])
    margin = 0.5 * potential.gradU(x) ** 2 - lambda0 * potential.U(x) - potential.hess_bound
    i = int(np.argmin(margin))
    return CheckReport(bool(margin[i] >= -tol), i, float(margin[i]), margin, tol)


@dataclass(frozen=True)
class DiffMapConstants:
    b0: float
    alpha: float
    sigma2: float
    lambda0: float
    R: float
    epsilon: float

    @property
    def lam(self):
        """Drift rate ``eps lambda0`` of ``T_eps``."""
        return self.epsilon * self.lambda0

    @property
    def b(self):
        return self.epsilon * self.b0

    @property
    def beta_plus(self):
        # same as lam / (1 + 2 b / alpha), but finite when alpha underflows to zero
        return self.lam * self.alpha / (self.alpha + 2.0 * self.b)

    def to_dict(self):
        return {"b0": self.b0, "alpha": self.alpha, "sigma2": self.sigma2,
                "lambda0": self.lambda0, "R": self.R, "epsilon": self.epsilon,
                "lambda": self.lam, "b": self.b}


def diffmap_constants(params, lambda0, R, *, probe_grid=None, subgrid_points=SUBGRID_POINTS):
    """Drift and minorization constants for ``T_eps`` with ``V = U``, ``K = {|x| <= R}``.

    The maximum in ``b0`` and the minimum in ``alpha`` are taken over a
    ``subgrid_points``-node grid of ``[-R, R]``.

    Raises
    ------
    AssumptionUViolatedError
        The dissipativity condition fails beyond ``R``.
    """
    if not lambda0 > 0 or not R > 0:
        raise InvalidInputError("lambda0 and R must be positive")
    U = params.potential
    if probe_grid is None:
        probe_grid = Grid(max(3.0 * R, 10.0), 4001)
    rep = verify_assumption_U(U, lambda0, R, probe_grid)
    if not rep:
        raise AssumptionUViolatedError(
            f"dissipativity fails beyond R = {R:g}: worst margin {rep.worst_slack:.4g}")
    m = U.hess_bound
    eps = params.epsilon
    s2 = params.sigma2
    x = np.linspace(-R, R, subgrid_points)
    gu = U.gradU(x)
    b0 = m + float(np.max(lambda0 * U.U(x) - 0.5 * gu * gu))
    expo = -2.0 * eps * gu * gu - 3.0 * eps * m - 2.0 / s2 * (x - s2 * gu) ** 2
    alpha = float(np.min(np.exp(expo))) / math.sqrt(2.0)
    return DiffMapConstants(b0=b0, alpha=alpha, sigma2=s2, lambda0=lambda0, R=R, epsilon=eps)


def diffmap_gap_bound(params, lambda0, R, **kwargs):
    """Norm bound ``1 - eps lambda0 / (1 + 2 eps b0 / alpha)`` for ``T_eps``.

    ``T_eps`` is positive semi-definite by construction, which serves as the
    PSD witness.
    """
    c = diffmap_constants(params, lambda0, R, **kwargs)
    beta = c.beta_plus
    return GapBound(Route.THEOREM1_PSD, 1.0 - beta, beta_plus=beta,
                    inputs=dict(c.to_dict(), psd_witness="structural"))
