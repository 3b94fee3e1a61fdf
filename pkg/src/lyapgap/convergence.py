"""Geometric decay of distributions and moments under a spectral gap.

Distributions are propagated by exact matrix-vector products, so the
envelope checks involve no sampling noise.
"""

import io
from dataclasses import dataclass

import numpy as np

from .chain import as_measure, as_observable, stationary_measure
from .errors import InvalidInputError, ZeroMassStateError

MAX_STEPS = 500
FLOOR = 1e-14


@dataclass(frozen=True)
class DecaySeries:
    """Observed decay ``values[k]`` against ``constant * rate_bound**k``."""

    steps: np.ndarray
    values: np.ndarray
    rate_bound: float
    envelope: np.ndarray

    def slack(self):
        return self.envelope - self.values

    def holds(self, tol=1e-9):
        return bool(np.all(self.values <= self.envelope + tol))

    def is_monotone(self, tol=1e-12):
        return bool(np.all(np.diff(self.values) <= tol))

    def to_csv(self):
        buf = io.StringIO()
        buf.write("step,value,envelope\n")
        for k, v, e in zip(self.steps, self.values, self.envelope):
            buf.write(f"{int(k)},{v:.17g},{e:.17g}\n")
        return buf.getvalue()

    def summary(self):
        return {"steps": int(self.steps[-1]), "rate_bound": self.rate_bound,
                "holds": self.holds(), "worst_slack": float(self.slack().min()),
                "final_value": float(self.values[-1])}


def _rate(beta):
    if not 0.0 < beta <= 1.0:
        raise InvalidInputError(f"gap beta = {beta!r} outside (0, 1]")
    return 1.0 - beta


def _iterate(step, x0, measure, N):
    values = [measure(x0)]
    x = x0
    limit = MAX_STEPS if N is None else int(N)
    for _ in range(limit):
        # default horizon stops once the series is numerically zero
        if N is None and values[-1] < FLOOR:
            break
        x = step(x)
        values.append(measure(x))
    return np.asarray(values)


def tv_decay(chain, mu0, beta, N=None, *, pi=None):
    r"""Total-variation distance ``||mu0 P^k - pi||_TV`` with its envelope.

    The envelope is ``(1 - beta)^k ||h - 1||_{2, pi}`` with ``h = mu0 / pi``.
    With ``N=None`` the series runs for at most 500 steps, stopping early
    once the distance falls below ``1e-14``.
    """
    rate = _rate(beta)
    pi = stationary_measure(chain) if pi is None else as_measure(pi, chain.n)
    if np.any(pi <= 0):
        raise ZeroMassStateError("density h = dmu/dpi needs pi > 0 everywhere")
    mu0 = as_measure(mu0, chain.n)
    P = chain.P
    values = _iterate(lambda mu: mu @ P, mu0, lambda mu: 0.5 * np.abs(mu - pi).sum(), N)
    h = mu0 / pi
    const = float(np.sqrt(np.sum(pi * (h - 1.0) ** 2)))
    steps = np.arange(values.size)
    return DecaySeries(steps, values, rate, const * rate**steps)


def moment_decay(chain, f, beta, N=None, *, pi=None):
    r"""``||P^k f - pi(f)||_{2, pi}`` with envelope ``(1 - beta)^k ||f - pi(f)||_{2, pi}``."""
    rate = _rate(beta)
    pi = stationary_measure(chain) if pi is None else as_measure(pi, chain.n)
    f = as_observable(f, chain.n)
    mean = float(pi @ f)
    P = chain.P
    values = _iterate(lambda g: P @ g, f,
                      lambda g: float(np.sqrt(np.sum(pi * (g - mean) ** 2))), N)
    steps = np.arange(values.size)
    return DecaySeries(steps, values, rate, values[0] * rate**steps)
