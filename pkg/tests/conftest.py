import numpy as np
import pytest

from lyapgap.chain import is_reversible
from lyapgap.corpus import (
    add_circulation,
    exponential_lyapunov,
    quadratic_lyapunov,
    random_metropolis_chain,
    random_reversible_chain,
)

ACCEPTANCE_LINES = []


def record(criterion, passed, message):
    """Store a one-line verdict for the acceptance summary."""
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {criterion:>2}: {message}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
        terminalreporter.write_line(line)


@pytest.fixture
def acceptance():
    return record


@pytest.fixture(scope="session")
def metropolis_corpus():
    """100 random Metropolis chains on 5..50 states with their quadratic Lyapunov functions."""
    rng = np.random.default_rng(20240611)
    out = []
    for i in range(100):
        n = int(rng.integers(5, 51))
        shape = "gaussian" if i % 2 == 0 else "laplace"
        kw = {} if shape == "gaussian" else {"scale": float(rng.uniform(1.0, 3.0))}
        chain, target = random_metropolis_chain(rng, n, shape=shape, **kw)
        out.append((chain, target, quadratic_lyapunov(target)))
    return out


@pytest.fixture(scope="session")
def level_set_corpus():
    """Sharply peaked chains with exponential V: many level sets satisfy the level-set radius condition."""
    rng = np.random.default_rng(11)
    out = []
    for _ in range(40):
        n = int(rng.integers(5, 31))
        chain, target = random_metropolis_chain(rng, n, shape="laplace",
                                                scale=float(rng.uniform(0.4, 1.0)))
        out.append((chain, target, exponential_lyapunov(target, float(rng.uniform(0.3, 1.0)))))
    return out


@pytest.fixture(scope="session")
def reversible_corpus():
    rng = np.random.default_rng(5)
    return [random_reversible_chain(rng, int(rng.integers(3, 13))) for _ in range(10)]


@pytest.fixture(scope="session")
def nonreversible_corpus():
    """Peaked Metropolis chains with added 3-cycle circulation, clearly non-reversible."""
    rng = np.random.default_rng(3)
    out = []
    while len(out) < 60:
        n = int(rng.integers(5, 21))
        chain, target = random_metropolis_chain(rng, n, shape="laplace",
                                                scale=float(rng.uniform(0.4, 1.0)))
        nr = add_circulation(chain, target, rng, strength=0.9)
        if is_reversible(nr, target, 1e-6):
            continue
        out.append((nr, target, exponential_lyapunov(target, float(rng.uniform(0.3, 1.0)))))
    return out
