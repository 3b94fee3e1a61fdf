"""Random reversible and non-reversible chains with known invariant measures.

States sit on a line ``0..n-1``. Metropolis chains use a symmetric proposal
mixing a nearest-neighbour step with a uniform jump, which keeps every
off-diagonal entry positive and makes small sets easy to minorize.
"""

import numpy as np

from .chain import FiniteChain


def metropolis(target, proposal):
    """Metropolis chain for ``target`` under a symmetric ``proposal`` matrix."""
    target = np.asarray(target, dtype=float)
    target = target / target.sum()
    Q = np.asarray(proposal, dtype=float)
    ratio = np.minimum(1.0, target[None, :] / target[:, None])
    P = Q * ratio
    np.fill_diagonal(P, 0.0)
    np.fill_diagonal(P, 1.0 - P.sum(axis=1))
    return FiniteChain(P)


def line_proposal(n, jump=0.2):
    """Nearest-neighbour step (probability ``1 - jump``) mixed with a uniform jump.

    Moves off either end of the line are rejected, which keeps the matrix
    symmetric.
    """
    Q = np.full((n, n), jump / n)
    step = 0.5 * (1.0 - jump)
    idx = np.arange(n - 1)
    Q[idx, idx + 1] += step
    Q[idx + 1, idx] += step
    np.fill_diagonal(Q, 0.0)
    np.fill_diagonal(Q, 1.0 - Q.sum(axis=1))
    return Q


def random_target(rng, n, *, shape="gaussian", scale=None, jitter=0.3):
    """Positive target concentrated around a random mode, with lognormal noise.

    ``shape="gaussian"`` decays like ``exp(-d^2 / (2 scale^2))`` in the
    distance ``d`` to the mode; ``shape="laplace"`` like ``exp(-d / scale)``.
    """
    mode = int(rng.integers(n))
    d = np.abs(np.arange(n) - mode)
    if shape == "gaussian":
        scale = max(1.0, n / 4.0) if scale is None else scale
        logp = -0.5 * (d / scale) ** 2
    elif shape == "laplace":
        scale = 0.5 if scale is None else scale
        logp = -d / scale
    else:
        raise ValueError(f"unknown target shape {shape!r}")
    logp = logp + jitter * rng.standard_normal(n)
    p = np.exp(logp - logp.max())
    return p / p.sum()


def quadratic_lyapunov(target):
    """``V = 1 + (distance to the mode / scale)^2`` with scale ``sqrt(n)``."""
    n = target.size
    d = np.arange(n) - int(np.argmax(target))
    return 1.0 + d**2 / n


def exponential_lyapunov(target, rate=1.0):
    """``V = exp(rate * distance to the mode)``."""
    n = target.size
    d = np.abs(np.arange(n) - int(np.argmax(target)))
    return np.exp(rate * d)


def random_metropolis_chain(rng, n, *, shape="gaussian", jump=0.2, **target_kw):
    """Return ``(chain, target)`` for a random Metropolis chain of size ``n``."""
    target = random_target(rng, n, shape=shape, **target_kw)
    return metropolis(target, line_proposal(n, jump)), target


def random_reversible_chain(rng, n):
    """Reversible chain from a random symmetric flow matrix.

    Returns ``(chain, pi)`` where ``pi`` is proportional to the row sums of
    the flow.
    """
    W = rng.random((n, n))
    W = W + W.T
    pi = W.sum(axis=1)
    return FiniteChain(W / pi[:, None]), pi / pi.sum()


def add_circulation(chain, pi, rng, *, strength=0.5, cycles=3):
    """Non-reversible ``P + Gamma / pi`` with ``pi`` still invariant.

    ``Gamma`` is a sum of antisymmetric flows around random 3-cycles; each
    term is capped by the smallest reverse flow it consumes, times
    ``strength / cycles``. Row sums and ``pi`` are preserved.
    """
    n = chain.n
    P = np.array(chain.P)
    flow = pi[:, None] * P
    G = np.zeros((n, n))
    budget = strength / cycles
    for _ in range(cycles):
        i, j, k = rng.choice(n, size=3, replace=False)
        c = budget * min(flow[j, i], flow[k, j], flow[i, k])
        for u, v in ((i, j), (j, k), (k, i)):
            G[u, v] += c
            G[v, u] -= c
    return FiniteChain(P + G / pi[:, None])
