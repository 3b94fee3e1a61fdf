import numpy as np
import pytest

from lyapgap.chain import delta, two_state_chain
from lyapgap.convergence import moment_decay, tv_decay
from lyapgap.corpus import random_reversible_chain
from lyapgap.errors import DimensionMismatchError, InvalidInputError, ZeroMassStateError
from lyapgap.spectrum import eigen_report


def test_tv_from_stationary_is_zero():
    s = tv_decay(two_state_chain(0.1), [0.5, 0.5], 0.2, 20)
    np.testing.assert_allclose(s.values, 0.0, atol=1e-15)


def test_tv_two_state_closed_form():
    s = tv_decay(two_state_chain(0.1), delta(2, 0), 0.2, 50)
    k = np.arange(51)
    np.testing.assert_allclose(s.values, 0.5 * 0.8**k, atol=1e-15)
    np.testing.assert_allclose(s.envelope, 0.8**k, rtol=1e-14)
    assert s.holds() and s.is_monotone()


def test_tv_loose_certified_rate():
    s = tv_decay(two_state_chain(0.1), delta(2, 0), 1 / 14, 100)
    assert s.holds() and np.all(s.slack()[1:] > 0)


def test_tv_default_horizon_stops_at_floor():
    s = tv_decay(two_state_chain(0.1), delta(2, 0), 0.2)
    assert s.values[-1] < 1e-14 and s.values[-2] >= 1e-14
    assert s.steps.size <= 501


def test_tv_zero_mass():
    with pytest.raises(ZeroMassStateError):
        tv_decay(two_state_chain(0.1), [1.0, 0.0], 0.2, 5, pi=[1.0, 0.0])


def test_moment_constant_is_zero():
    s = moment_decay(two_state_chain(0.1), [3.0, 3.0], 0.2, 10)
    np.testing.assert_allclose(s.values, 0.0, atol=1e-15)


def test_moment_eigenfunction_tight():
    chain = two_state_chain(0.1)
    f = eigen_report(chain, [0.5, 0.5]).second_eigenvector()
    s = moment_decay(chain, f, 0.2, 40)
    np.testing.assert_allclose(s.values, 0.8 ** np.arange(41), rtol=1e-12)
    np.testing.assert_allclose(s.slack(), 0.0, atol=1e-12)


def test_moment_random_reversible_exact_rate():
    rng = np.random.default_rng(0)
    for _ in range(10):
        chain, pi = random_reversible_chain(rng, int(rng.integers(3, 15)))
        beta = eigen_report(chain, pi).gap
        s = moment_decay(chain, rng.standard_normal(chain.n), beta, 200, pi=pi)
        assert s.holds(1e-9)


def test_input_validation():
    with pytest.raises(DimensionMismatchError):
        moment_decay(two_state_chain(0.1), [1.0, 2.0, 3.0], 0.2, 5)
    with pytest.raises(InvalidInputError):
        tv_decay(two_state_chain(0.1), delta(2, 0), 0.0, 5)


def test_csv_output():
    s = tv_decay(two_state_chain(0.1), delta(2, 0), 0.2, 3)
    lines = s.to_csv().strip().splitlines()
    assert lines[0] == "step,value,envelope" and len(lines) == 5
    step, value, env = lines[2].split(",")
    assert int(step) == 1 and float(value) == pytest.approx(0.4) and float(env) == pytest.approx(0.8)
    assert s.summary()["holds"]
