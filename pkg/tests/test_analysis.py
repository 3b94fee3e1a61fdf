import numpy as np
import pytest

from lyapgap.analysis import analyze_chain, ou_report
from lyapgap.bounds import Route
from lyapgap.chain import square
from lyapgap.continuum import Grid, OUParams
from lyapgap.corpus import exponential_lyapunov, random_metropolis_chain
from lyapgap.errors import InvalidInputError, NotReversibleError
from lyapgap.chain import new_finite_chain


@pytest.fixture(scope="module")
def psd_case():
    rng = np.random.default_rng(11)
    chain, target = random_metropolis_chain(rng, 15, shape="laplace", scale=0.6)
    # squaring makes the chain PSD while keeping the same invariant measure
    return square(chain), target, exponential_lyapunov(target, 0.8)


def test_psd_chain_gets_theorem1_route(psd_case):
    chain, target, V = psd_case
    rep = analyze_chain(chain, target, V=V, sweep=True)
    assert rep.poincare["psd"]
    psd = rep.bound(Route.THEOREM1_PSD)
    assert psd is not None and psd.norm_bound == pytest.approx(1 - rep.poincare["beta_plus"])
    assert rep.sound and all(s >= -1e-9 for s in rep.comparison.values())
    assert rep.bound(Route.EXACT).norm_bound == pytest.approx(rep.exact_norm)


def test_squared_route_checks_recorded(psd_case):
    chain, target, V = psd_case
    rep = analyze_chain(chain, target, V=V, sweep=True)
    if rep.bound(Route.PROP1_PSQUARED) is not None:
        assert rep.checks["P2"]["drift"]["passed"] and rep.checks["P2"]["minorization"]["passed"]


def test_requires_set():
    chain = new_finite_chain([[0.5, 0.5], [0.5, 0.5]])
    with pytest.raises(InvalidInputError):
        analyze_chain(chain, V=[1.0, 2.0])


def test_rejects_nonreversible():
    chain = new_finite_chain([[0.1, 0.6, 0.3], [0.3, 0.1, 0.6], [0.6, 0.3, 0.1]])
    with pytest.raises(NotReversibleError):
        analyze_chain(chain)
    rep = analyze_chain(chain, nonreversible=True)
    assert rep.exact_norm < 1


def test_ou_report_fields():
    rep = ou_report(OUParams(0.5, 1.0), Grid(10.0, 201))
    assert rep["comparison"]["sound"]
    assert rep["grid_checks"]["drift"]["passed"]
    assert not rep["grid_checks"]["minorization_displayed_alpha"]["passed"]
    assert rep["grid_checks"]["minorization_alpha_over_sqrt2"]["passed"]
    assert rep["stationary_variance"]["relative_error"] < 1e-2
