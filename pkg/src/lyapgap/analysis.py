"""End-to-end analysis of a finite chain: certificates, every applicable bound, exact oracle."""

from dataclasses import dataclass, field

import numpy as np

from . import bounds as B
from .certificates import (
    DriftCertificate,
    MinorizationCertificate,
    assumption3_radius,
    check_assumption3,
    fit_common_drift,
    fit_drift,
    fit_minorization,
    level_set,
    verify_drift,
    verify_minorization,
)
from .chain import adjoint, as_observable, is_reversible, multiply, square, stationary_measure
from .errors import InvalidInputError, LyapgapError, NotReversibleError
from .spectrum import REVERSIBLE_TOL, eigen_report, operator_norm

SOUNDNESS_TOL = 1e-9


@dataclass
class AnalysisReport:
    chain_summary: dict
    exact: dict
    certificates: dict = field(default_factory=dict)
    poincare: dict = field(default_factory=dict)
    bounds: list = field(default_factory=list)
    checks: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    @property
    def exact_norm(self):
        return self.exact["op_norm_L20"]

    @property
    def comparison(self):
        return {str(b.route): b.norm_bound - self.exact_norm for b in self.bounds}

    @property
    def sound(self):
        return all(s >= -SOUNDNESS_TOL for s in self.comparison.values())

    def bound(self, route):
        for b in self.bounds:
            if b.route == route:
                return b
        return None

    def to_dict(self):
        out = {
            "chain_summary": self.chain_summary,
            "exact": self.exact,
            "certificates": self.certificates,
            "poincare": self.poincare,
            "bounds": [b.to_dict() for b in self.bounds],
            "comparison": self.comparison,
            "sound": self.sound,
        }
        if self.checks:
            out["checks"] = self.checks
        out.update(self.extra)
        return out


def _summary(chain, pi, rev):
    return {"n": chain.n, "reversible": rev.reversible,
            "detailed_balance_violation": rev.max_violation,
            "pi_min": float(pi.min()), "pi_max": float(pi.max())}


def _resolve_set(V, K, R):
    if K is not None:
        return tuple(sorted(int(k) for k in K)), R
    if R is not None:
        return level_set(V, R), R
    raise InvalidInputError("a Lyapunov function needs a set K or a level-set radius R")


def _checked(chain, drift, minor, label):
    d = verify_drift(chain, drift)
    m = verify_minorization(chain, minor)
    if not d:
        raise InvalidInputError(
            f"{label}: drift certificate fails at state {d.worst_state} (slack {d.worst_slack:.3g})")
    if not m:
        raise InvalidInputError(
            f"{label}: minorization certificate fails at state {m.worst_state} "
            f"(slack {m.worst_slack:.3g})")
    return {"drift": d.to_dict(), "minorization": m.to_dict()}


def squared_chain_checks(chain, drift, minor, gap):
    """Verify the transformed constants of ``gap`` directly on ``chain``.

    ``chain`` is ``P^2`` or ``P† P``; ``minor`` supplies the minorizing measure.
    """
    inp = gap.inputs
    d2 = DriftCertificate(drift.V, drift.K, inp["lambda_prime"], inp["b_prime"])
    m2 = MinorizationCertificate(drift.K, inp["alpha_prime"], minor.nu)
    return {"drift": verify_drift(chain, d2).to_dict(),
            "minorization": verify_minorization(chain, m2).to_dict()}


def _best_certified(report):
    vals = [b.norm_bound for b in report.bounds
            if b.route not in (B.Route.EXACT, B.Route.DOEBLIN)]
    return min(vals, default=1.0)


def analyze_chain(chain, pi=None, *, V=None, K=None, R=None, lam=None, b=None,
                  lambda_grid=None, sweep=False, nonreversible=False):
    """Run the full pipeline on ``chain``.

    Parameters
    ----------
    V : array_like, optional
        Lyapunov function. Without it only the exact spectrum and the Doeblin
        route are reported.
    K, R : optional
        The small set, given explicitly or as the level set ``{V <= R}``.
    lam, b : float, optional
        Fixed drift constants to verify instead of fitting.
    sweep : bool
        Try every level set of ``V`` and keep the one with the smallest
        certified norm bound, then the largest Poincaré constant.
    nonreversible : bool
        Accept non-reversible chains and certify them through ``P† P``.
    """
    pi = stationary_measure(chain) if pi is None else np.asarray(pi, dtype=float)
    rev = is_reversible(chain, pi, REVERSIBLE_TOL)
    if not rev and not nonreversible:
        raise NotReversibleError(
            f"chain is not reversible (violation {rev.max_violation:.3g} at {rev.pair}); "
            "pass nonreversible=True for the adjoint route", pair=rev.pair)

    if rev:
        spec = eigen_report(chain, pi)
        exact = spec.to_dict()
        psd = spec.psd
    else:
        exact = {"op_norm_L20": operator_norm(chain, pi)}
        psd = False
    report = AnalysisReport(_summary(chain, pi, rev), exact)
    if rev:
        report.bounds.append(B.exact_gap_bound(spec))
        try:
            full = fit_minorization(chain, range(chain.n))
            report.bounds.append(B.doeblin_gap(full, True))
        except LyapgapError:
            pass

    if V is None:
        return report
    V = as_observable(V, chain.n)

    if sweep:
        rows = []
        for r in np.unique(V):
            try:
                sub = analyze_chain(chain, pi, V=V, R=float(r), lam=lam, b=b,
                                    lambda_grid=lambda_grid, nonreversible=nonreversible)
            except LyapgapError as exc:
                rows.append({"R": float(r), "error": exc.kind})
                continue
            rows.append({"R": float(r), "beta_plus": sub.poincare.get("beta_plus"),
                         "norm_bound": _best_certified(sub)})
        good = [r for r in rows if "error" not in r]
        if not good:
            raise InvalidInputError("no level set of V admits drift and minorization certificates")
        best = min(good, key=lambda r: (r["norm_bound"], -(r["beta_plus"] or 0.0), r["R"]))
        report = analyze_chain(chain, pi, V=V, R=best["R"], lam=lam, b=b,
                               lambda_grid=lambda_grid, nonreversible=nonreversible)
        report.extra["sweep"] = rows
        return report

    K, R = _resolve_set(V, K, R)
    if rev:
        _certify_reversible(report, chain, pi, V, K, R, lam, b, lambda_grid, psd)
    else:
        _certify_nonreversible(report, chain, pi, V, K, R, lam, b, lambda_grid)
    return report


def _certify_reversible(report, chain, pi, V, K, R, lam, b, lambda_grid, psd):
    if lam is not None and b is not None:
        drift = DriftCertificate(V, K, lam, b)
    else:
        drift = fit_drift(chain, V, K, lambda_grid)
    minor = fit_minorization(chain, K)
    report.checks["P"] = _checked(chain, drift, minor, "P")
    report.certificates = {"drift": drift.to_dict(), "minorization": minor.to_dict()}
    beta = B.poincare_bound(drift, minor)
    report.poincare = {"beta_plus": beta, "psd": psd,
                       "inputs": {"lambda": drift.lam, "b": drift.b, "alpha": minor.alpha}}
    if psd:
        report.bounds.append(B.psd_gap(beta, True, report.poincare["inputs"]))

    radius = R if R is not None and check_assumption3(drift, R) else assumption3_radius(drift)
    report.poincare["assumption3"] = radius is not None
    if radius is not None:
        gap = B.squared_gap(drift, minor, radius)
        report.bounds.append(gap)
        report.checks["P2"] = squared_chain_checks(square(chain), drift, minor, gap)


def _certify_nonreversible(report, chain, pi, V, K, R, lam, b, lambda_grid):
    Pd = adjoint(chain, pi)
    if lam is not None and b is not None:
        drift = DriftCertificate(V, K, lam, b)
    else:
        drift = fit_common_drift([chain, Pd], V, K, lambda_grid)
    mP, mD = fit_minorization(chain, K), fit_minorization(Pd, K)
    alpha = min(mP.alpha, mD.alpha)
    mP = MinorizationCertificate(K, alpha, mP.nu)
    mD = MinorizationCertificate(K, alpha, mD.nu)
    report.checks["P"] = _checked(chain, drift, mP, "P")
    report.checks["Pdagger"] = _checked(Pd, drift, mD, "P-adjoint")
    report.certificates = {"drift": drift.to_dict(), "minorization": mP.to_dict(),
                           "adjoint_minorization": mD.to_dict()}
    # no Poincare constant for P itself: the drift-to-Poincare step needs self-adjointness
    report.poincare = {"psd": False,
                       "inputs": {"lambda": drift.lam, "b": drift.b, "alpha": alpha}}
    radius = R if R is not None and check_assumption3(drift, R) else assumption3_radius(drift)
    report.poincare["assumption3"] = radius is not None
    if radius is not None:
        gap = B.nonreversible_gap(drift, drift, mP, mD, radius)
        report.bounds.append(gap)
        report.checks["PdaggerP"] = squared_chain_checks(multiply(Pd, chain), drift, mP, gap)


# continuum examples -------------------------------------------------------------


def _grid_set(grid, R):
    return tuple(int(i) for i in np.flatnonzero(np.abs(grid.nodes) <= R))


def ou_report(params, grid, *, n_eigs=6, discretization_tol=1e-6):
    """Discretized OU chain: spectrum, closed-form constants and their checks on the grid."""
    from .continuum import discretize_ou, gaussian_reference, ou_invariant, ou_paper_constants

    chain = discretize_ou(params, grid)
    pi = stationary_measure(chain)
    rev = is_reversible(chain, pi, 1e-6)
    spec = eigen_report(chain, pi)
    k = np.arange(min(n_eigs, chain.n))
    predicted = (1.0 - params.a) ** k
    x = grid.nodes
    var = float(np.sum(pi * x * x))

    c = ou_paper_constants(params)
    V = c.V(x)
    K = _grid_set(grid, c.R)
    drift = DriftCertificate(V, K, c.lam, c.b)
    nu = gaussian_reference(grid, c.sigma_nu)
    displayed_minor = MinorizationCertificate(K, c.alpha, nu)
    corrected_minor = MinorizationCertificate(K, c.alpha_for_nu, nu)
    fitted = fit_minorization(chain, K)

    gap = B.psd_gap(c.theorem1_beta, spec.psd,
                    {"lambda": c.lam, "b": c.b, "alpha": c.alpha, "R": c.R})
    fitted_beta = B.theorem1_beta(c.lam, c.b, fitted.alpha)
    exact = spec.op_norm_L20
    return {
        "params": params.to_dict(),
        "grid": grid.to_dict(),
        "reversible": rev.to_dict(),
        "invariant_max_abs_error": float(np.max(np.abs(pi - ou_invariant(params, grid)))),
        "stationary_variance": {"grid": var, "ar1": params.stationary_variance,
                                "relative_error": abs(var / params.stationary_variance - 1.0)},
        "spectrum": {"eigenvalues": spec.eigenvalues[: k.size].tolist(),
                     "predicted": predicted.tolist(),
                     "abs_error": np.abs(spec.eigenvalues[: k.size] - predicted).tolist(),
                     "op_norm_L20": exact, "psd": spec.psd},
        "constants": c.to_dict(),
        "grid_checks": {
            "drift": verify_drift(chain, drift, discretization_tol).to_dict(),
            "minorization_displayed_alpha": verify_minorization(chain, displayed_minor).to_dict(),
            "minorization_alpha_over_sqrt2": verify_minorization(chain, corrected_minor).to_dict(),
            "fitted_alpha": fitted.alpha,
        },
        "bounds": {
            "theorem1": gap.to_dict(),
            "printed_formula_norm_bound": c.printed_norm_bound,
            "theorem1_with_fitted_alpha": 1.0 - fitted_beta,
        },
        "comparison": {"theorem1_minus_exact": gap.norm_bound - exact,
                       "sound": gap.norm_bound >= exact - SOUNDNESS_TOL},
        "_series": {"k": k, "eigenvalues": spec.eigenvalues[: k.size], "predicted": predicted},
    }


def diffmap_report(params, grid, lambda0, R):
    """Discretized diffusion map: dissipativity, constants, bound and exact spectrum."""
    from .continuum import (
        diffmap_gap_bound,
        diffusion_map_invariant,
        discretize_diffusion_map,
        gaussian_reference,
        verify_assumption_U,
        Grid,
    )

    chain = discretize_diffusion_map(params, grid)
    pi = stationary_measure(chain)
    pi_exact = diffusion_map_invariant(params, grid)
    rev = is_reversible(chain, pi_exact, 1e-8)
    spec = eigen_report(chain, pi)
    probe = Grid(max(3.0 * R, grid.L, 10.0), 4001)
    dissip = verify_assumption_U(params.potential, lambda0, R, probe)
    gap = diffmap_gap_bound(params, lambda0, R, probe_grid=probe)
    inp = gap.inputs

    x = grid.nodes
    V = params.potential.U(x)
    K = _grid_set(grid, R)
    drift = DriftCertificate(V, K, inp["lambda"], inp["b"])
    nu = gaussian_reference(grid, np.sqrt(inp["sigma2"] / 2.0))
    minor = MinorizationCertificate(K, inp["alpha"], nu)
    exact = spec.op_norm_L20
    out = {
        "params": params.to_dict(),
        "grid": grid.to_dict(),
        "lambda0": lambda0,
        "R": R,
        "assumption_U": dissip.to_dict(),
        "constants": {k: inp[k] for k in ("b0", "alpha", "sigma2", "lambda", "b")},
        "bound": gap.to_dict(),
        "reversible": rev.to_dict(),
        "invariant_max_abs_error": float(np.max(np.abs(pi - pi_exact))),
        "spectrum": {"eigenvalues": spec.eigenvalues[:6].tolist(), "lambda_min": spec.lambda_min,
                     "op_norm_L20": exact, "psd": spec.psd},
        "grid_checks": {"drift": verify_drift(chain, drift).to_dict(),
                        "minorization": verify_minorization(chain, minor).to_dict()},
        "comparison": {"bound_minus_exact": gap.norm_bound - exact,
                       "sound": gap.norm_bound >= exact - SOUNDNESS_TOL},
    }
    try:
        fitted = analyze_chain(chain, pi, V=V, K=K)
        psd_bound = fitted.bound(B.Route.THEOREM1_PSD)
        out["grid_fitted"] = {**fitted.poincare["inputs"],
                              "beta_plus": fitted.poincare["beta_plus"],
                              "norm_bound": psd_bound.norm_bound if psd_bound else None}
    except LyapgapError as exc:
        out["grid_fitted"] = {"error": exc.kind, "detail": exc.detail}
    return out
