import numpy as np
import pytest

from lyapgap.chain import (
    center,
    dirichlet_forms,
    is_reversible,
    new_finite_chain,
    norm2,
    square,
    two_state_chain,
)
from lyapgap.corpus import random_metropolis_chain, random_reversible_chain
from lyapgap.errors import EmptyKError, NotReversibleError, ZeroMassStateError, ZeroPiOnKError
from lyapgap.spectrum import (
    check_claim_one,
    check_claim_two,
    eigen_report,
    exact_poincare_constants,
    is_psd,
    operator_norm,
    symmetrize,
)

CYCLE = new_finite_chain([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
# symmetric doubly-stochastic matrix with spectrum {1, 0.5, -0.3}
THREE = new_finite_chain([[8 / 15, 13 / 30, 1 / 30], [13 / 30, 2 / 15, 13 / 30], [1 / 30, 13 / 30, 8 / 15]])
UNIFORM3 = np.full(3, 1 / 3)


def test_symmetrize_uniform_is_identity_transform():
    c = two_state_chain(0.1)
    np.testing.assert_allclose(symmetrize(c, [0.5, 0.5]), c.P)


def test_symmetrize_birth_death_against_characteristic_polynomial():
    P = np.array([[0.5, 0.5, 0.0], [0.25, 0.5, 0.25], [0.0, 0.5, 0.5]])
    pi = np.array([0.25, 0.5, 0.25])
    S = symmetrize(new_finite_chain(P), pi)
    np.testing.assert_allclose(S, S.T)
    oracle = np.sort(np.roots(np.poly(P)).real)
    np.testing.assert_allclose(np.sort(np.linalg.eigvalsh(S)), oracle, atol=1e-12)


def test_symmetrize_errors():
    with pytest.raises(NotReversibleError):
        symmetrize(CYCLE, UNIFORM3)
    with pytest.raises(ZeroMassStateError):
        symmetrize(two_state_chain(0.1), [1.0, 0.0])


def test_eigen_report_example():
    rep = eigen_report(two_state_chain(0.1), [0.5, 0.5])
    np.testing.assert_allclose(rep.eigenvalues, [1.0, -0.8], atol=1e-15)
    assert rep.op_norm_L20 == pytest.approx(0.8)
    assert rep.beta_plus_exact == pytest.approx(1.8)
    assert rep.beta_minus_exact == pytest.approx(0.2)
    assert rep.gap == pytest.approx(0.2)
    assert not rep.psd and not is_psd(rep)
    assert exact_poincare_constants(rep) == pytest.approx((1.8, 0.2, 0.2))


def test_eigen_report_identity_and_rank_one():
    rep = eigen_report(new_finite_chain(np.eye(3)), UNIFORM3)
    np.testing.assert_allclose(rep.eigenvalues, 1.0)
    assert rep.op_norm_L20 == pytest.approx(1.0) and not rep.has_gap
    pi = np.array([0.2, 0.3, 0.5])
    rep = eigen_report(new_finite_chain([pi] * 3), pi)
    np.testing.assert_allclose(rep.eigenvalues, [1, 0, 0], atol=1e-14)
    assert rep.op_norm_L20 == pytest.approx(0.0, abs=1e-14)
    assert exact_poincare_constants(rep) == pytest.approx((1, 1, 1))


def test_prescribed_spectrum():
    oracle = np.sort(np.roots(np.poly(THREE.P)).real)[::-1]
    np.testing.assert_allclose(oracle, [1, 0.5, -0.3], atol=1e-12)
    rep = eigen_report(THREE, UNIFORM3)
    np.testing.assert_allclose(rep.eigenvalues, [1, 0.5, -0.3], atol=1e-12)
    bp, bm, b = exact_poincare_constants(rep)
    assert (bp, bm, b) == pytest.approx((0.5, 0.7, 0.5))
    assert b == pytest.approx(min(bp, bm), abs=1e-12)


def test_square_is_psd_and_spectrum_squares():
    rng = np.random.default_rng(2)
    for _ in range(10):
        chain, pi = random_reversible_chain(rng, int(rng.integers(3, 12)))
        rep, rep2 = eigen_report(chain, pi), eigen_report(square(chain), pi)
        assert is_psd(rep2)
        np.testing.assert_allclose(np.sort(rep.eigenvalues ** 2), np.sort(rep2.eigenvalues), atol=1e-8)


def test_report_invariants_on_corpus():
    rng = np.random.default_rng(3)
    for _ in range(20):
        chain, target = random_metropolis_chain(rng, int(rng.integers(5, 40)))
        rep = eigen_report(chain, target)
        assert rep.eigenvalues[0] == pytest.approx(1.0, abs=1e-9)
        assert np.all(np.abs(rep.eigenvalues) <= 1 + 1e-9)
        assert 0 <= rep.op_norm_L20 <= 1 + 1e-9
        assert np.all(np.diff(rep.eigenvalues) <= 1e-15)


def test_variational_characterizations():
    rng = np.random.default_rng(4)
    chain, pi = random_reversible_chain(rng, 9)
    rep = eigen_report(chain, pi)
    quotients, ratios = [], []
    for _ in range(500):
        f = center(pi, rng.standard_normal(9))
        quotients.append(dirichlet_forms(chain, pi, f)[0] / norm2(pi, f) ** 2)
        ratios.append(norm2(pi, chain.P @ f) / norm2(pi, f))
    assert min(quotients) >= rep.beta_plus_exact - 1e-6
    assert max(ratios) <= rep.op_norm_L20 + 1e-9
    v = rep.second_eigenvector()
    assert norm2(pi, v) == pytest.approx(1.0)
    assert dirichlet_forms(chain, pi, v)[0] == pytest.approx(rep.beta_plus_exact, abs=1e-9)


def test_operator_norm_nonreversible():
    assert operator_norm(CYCLE, UNIFORM3) == pytest.approx(1.0)
    rng = np.random.default_rng(5)
    P = rng.random((6, 6)) + 0.1
    chain = new_finite_chain(P / P.sum(axis=1, keepdims=True))
    from lyapgap.chain import stationary_measure

    pi = stationary_measure(chain)
    assert not is_reversible(chain, pi, 1e-8)
    r = np.sqrt(pi)
    A = r[:, None] * chain.P / r[None, :]
    Q = np.eye(6) - np.outer(r, r)
    oracle = np.linalg.svd(Q @ A @ Q, compute_uv=False)[0]
    assert operator_norm(chain, pi) == pytest.approx(oracle, abs=1e-10)


def test_claim_one_examples():
    c = two_state_chain(0.1)
    pi = [0.5, 0.5]
    assert check_claim_one(c, pi, [1, 3], [2, 2], 2.0) == pytest.approx(0.0, abs=1e-15)
    assert check_claim_one(c, pi, [1, 3], [1, 3], 1.0) >= 0
    with pytest.raises(NotReversibleError):
        check_claim_one(CYCLE, UNIFORM3, [1, 1, 1], [0, 1, 2], 0.0)


def test_claim_two_examples():
    c = two_state_chain(0.1)
    pi = np.array([0.5, 0.5])
    assert check_claim_two(c, pi, [4, 4], [0], 1.0) == pytest.approx(0.0, abs=1e-15)
    slack = check_claim_two(c, pi, [1, -1], [0], 1.0, [0.1, 0.9])
    assert slack == pytest.approx(2 * dirichlet_forms(c, pi, [1, -1])[0])
    with pytest.raises(EmptyKError):
        check_claim_two(c, pi, [1, -1], [], 1.0)
    P = new_finite_chain([[1, 0, 0], [0, 0.5, 0.5], [0, 0.5, 0.5]])
    with pytest.raises(ZeroPiOnKError):
        check_claim_two(P, [0, 0.5, 0.5], [1, 2, 3], [0], 1.0)
