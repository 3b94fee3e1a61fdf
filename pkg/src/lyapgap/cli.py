"""Command-line front end: ``lyapgap <command> ...``.

Reports go to stdout as JSON; CSV series go to ``--out``. Any package error
exits with status 1 and prints ``{"error": {"kind": ..., "detail": ...}}``.
"""

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import bounds as B
from .analysis import analyze_chain, diffmap_report, ou_report
from .certificates import (
    DriftCertificate,
    MinorizationCertificate,
    fit_drift,
    fit_minorization,
    level_set,
    verify_drift,
    verify_minorization,
)
from .chain import FiniteChain, delta, is_reversible, stationary_measure, two_state_chain
from .continuum import DiffMapParams, Grid, OUParams, make_potential
from .convergence import moment_decay, tv_decay
from .errors import EpsOutOfRangeError, InvalidInputError, LyapgapError, UnsoundBoundError
from .spectrum import eigen_report, operator_norm

BUILTIN_CHAINS = ("example1",)


def example1_certificates(eps):
    """Hand-made certificate for the two-state chain, valid for ``eps <= 1/4``."""
    drift = DriftCertificate([1.0, 3.0], (0,), 0.5, 3.0)
    minor = MinorizationCertificate((0,), 1.0, [eps, 1.0 - eps])
    return drift, minor


# io helpers ---------------------------------------------------------------------


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    return obj


def emit(obj, stream=None):
    stream = sys.stdout if stream is None else stream
    # float repr is shortest round-trip, so reports are reproducible byte for byte
    json.dump(_jsonable(obj), stream, indent=2, sort_keys=False)
    stream.write("\n")


def _json_arg(text):
    """JSON literal, or a path to a JSON file."""
    p = Path(text)
    if p.suffix == ".json" and p.exists():
        return json.loads(p.read_text())
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"not a JSON literal or existing .json file: {text!r}") from exc


def _index_list(text):
    if text is None:
        return None
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError as exc:
        raise InvalidInputError(f"set must be comma-separated state indices, got {text!r}") from exc


def load_chain_arg(name, eps=None):
    """Resolve a chain argument: a built-in name or a chain JSON file.

    Returns ``(chain, pi or None, builtin name or None)``.
    """
    stem = name[:-5] if name.endswith(".json") else name
    if stem in BUILTIN_CHAINS and not Path(name).exists():
        eps = 0.1 if eps is None else eps
        return two_state_chain(eps), None, stem
    p = Path(name)
    if not p.exists():
        raise InvalidInputError(f"no chain file {name!r} (built-ins: {', '.join(BUILTIN_CHAINS)})")
    chain, pi = FiniteChain.from_dict(json.loads(p.read_text()))
    return chain, pi, None


def _write(path, text):
    Path(path).write_text(text)
    return str(path)


def _finish(report, ok, detail):
    """Emit ``report``; a failed soundness check adds an error entry and exits 1."""
    if not ok:
        report["error"] = {"kind": UnsoundBoundError.kind, "detail": detail}
    emit(report)
    return 0 if ok else 1


def _series_csv(columns, names):
    lines = [",".join(names)]
    for row in zip(*columns):
        lines.append(",".join(f"{v:.17g}" if isinstance(v, float) else str(v) for v in row))
    return "\n".join(lines) + "\n"


# commands -----------------------------------------------------------------------


def cmd_analyze(args):
    chain, pi, builtin = load_chain_arg(args.chain, args.eps)
    V = None if args.lyapunov is None else np.asarray(_json_arg(args.lyapunov), dtype=float)
    if V is None and (args.set is not None or args.level_set is not None or args.sweep_level_sets):
        raise InvalidInputError("--set, --level-set and --sweep-level-sets need --lyapunov")
    report = analyze_chain(chain, pi, V=V, K=_index_list(args.set), R=args.level_set,
                           lam=args.lam, b=args.b, sweep=args.sweep_level_sets,
                           nonreversible=args.nonreversible)
    out = report.to_dict()
    if builtin == "example1":
        eps = float(chain.P[0, 0])
        drift, minor = example1_certificates(eps)
        out["reference_certificate"] = {
            "drift": drift.to_dict(), "minorization": minor.to_dict(),
            "drift_check": verify_drift(chain, drift).to_dict(),
            "minorization_check": verify_minorization(chain, minor).to_dict(),
            "beta_plus": B.poincare_bound(drift, minor),
        }
    return _finish(out, report.sound, "a certified bound falls below the exact norm")


def cmd_certify(args):
    chain, _, _ = load_chain_arg(args.chain, args.eps)
    if args.drift or args.minorization:
        out = {}
        if args.drift:
            d = DriftCertificate.from_dict(_json_arg(args.drift))
            out["drift"] = verify_drift(chain, d).to_dict()
        if args.minorization:
            m = MinorizationCertificate.from_dict(_json_arg(args.minorization))
            out["minorization"] = verify_minorization(chain, m).to_dict()
        out["passed"] = all(v["passed"] for v in out.values())
        emit(out)
        return 0 if out["passed"] else 1
    if args.lyapunov is None:
        raise InvalidInputError("certify needs --lyapunov to fit, or --drift/--minorization to verify")
    V = np.asarray(_json_arg(args.lyapunov), dtype=float)
    K = _index_list(args.set)
    if K is None:
        if args.level_set is None:
            raise InvalidInputError("certify needs --set or --level-set")
        K = level_set(V, args.level_set)
    minor = fit_minorization(chain, K)
    drift = fit_drift(chain, V, K, alpha=minor.alpha)
    emit({"drift": drift.to_dict(), "minorization": minor.to_dict(),
          "beta_plus": B.poincare_bound(drift, minor)})
    return 0


def cmd_ou(args):
    report = ou_report(OUParams(args.a, args.sigma), Grid(args.L, args.grid))
    series = report.pop("_series")
    if args.out:
        report["csv"] = _write(args.out, _series_csv(
            [series["k"].tolist(), series["eigenvalues"].tolist(), series["predicted"].tolist()],
            ["k", "eigenvalue", "predicted"]))
    return _finish(report, report["comparison"]["sound"],
                   "certified bound falls below the exact norm")


def _potential_params(items):
    out = {}
    for item in items or ():
        key, _, val = item.partition("=")
        if not _:
            raise InvalidInputError(f"potential parameter must be key=value, got {item!r}")
        out[key] = float(val)
    return out


def cmd_diffmap(args):
    potential = make_potential(args.potential, **_potential_params(args.param))
    params = DiffMapParams(args.epsilon, potential)
    grid = Grid(args.L, args.grid)
    report = diffmap_report(params, grid, args.lambda0, args.R)
    if args.out:
        from .continuum import discretize_diffusion_map

        chain = discretize_diffusion_map(params, grid)
        w = eigen_report(chain, stationary_measure(chain)).eigenvalues
        report["csv"] = _write(args.out, _series_csv(
            [list(range(w.size)), w.tolist()], ["k", "eigenvalue"]))
    return _finish(report, report["comparison"]["sound"],
                   "certified bound falls below the exact norm")


def _resolve_beta(args, chain, pi):
    src = args.beta
    if src == "exact":
        return 1.0 - operator_norm(chain, pi), "exact"
    try:
        return float(src), "given"
    except ValueError:
        pass
    try:
        route = B.Route(src)
    except ValueError:
        raise InvalidInputError(
            f"--beta must be 'exact', a number or a route in {[str(r) for r in B.Route]}")
    if args.lyapunov is None:
        raise InvalidInputError(f"route {src!r} needs --lyapunov and --set/--level-set")
    V = np.asarray(_json_arg(args.lyapunov), dtype=float)
    rep = analyze_chain(chain, pi, V=V, K=_index_list(args.set), R=args.level_set,
                        nonreversible=not is_reversible(chain, pi, 1e-8))
    bound = rep.bound(route)
    if bound is None:
        raise InvalidInputError(f"route {src!r} does not apply to this chain and certificate")
    return bound.gap, str(route)


def cmd_simulate(args):
    chain, pi, builtin = load_chain_arg(args.chain, args.eps)
    pi = stationary_measure(chain) if pi is None else pi
    if args.mu0 is not None:
        mu0 = np.asarray(_json_arg(args.mu0), dtype=float)
    else:
        mu0 = delta(chain.n, args.start)
    f = (np.asarray(_json_arg(args.f), dtype=float) if args.f is not None
         else np.arange(chain.n, dtype=float))
    beta, source = _resolve_beta(args, chain, pi)
    tv = tv_decay(chain, mu0, beta, args.N, pi=pi)
    mom = moment_decay(chain, f, beta, args.N, pi=pi)
    out = {"beta": beta, "beta_source": source,
           "tv": {**tv.summary(), "monotone": tv.is_monotone()},
           "moment": mom.summary()}
    if args.out:
        out["csv"] = [_write(f"{args.out}_tv.csv", tv.to_csv()),
                      _write(f"{args.out}_moment.csv", mom.to_csv())]
    return _finish(out, tv.holds() and mom.holds(), "decay envelope violated")


def counterexample_rows(eps_list):
    """Verify the fixed two-state certificate and the exact ``beta_-`` for each ``eps``."""
    rows = []
    for eps in eps_list:
        if not 0.0 <= eps <= 0.25:
            raise EpsOutOfRangeError(f"eps = {eps!r} outside [0, 1/4], where the certificate holds")
        chain = two_state_chain(eps)
        drift, minor = example1_certificates(eps)
        spec = eigen_report(chain, np.array([0.5, 0.5]))
        rows.append({
            "eps": eps,
            "drift": verify_drift(chain, drift).passed,
            "minorization": verify_minorization(chain, minor).passed,
            "constants": {"lambda": drift.lam, "b": drift.b, "alpha": minor.alpha},
            "beta_plus_certified": B.poincare_bound(drift, minor),
            "beta_minus_exact": spec.beta_minus_exact,
            "eigenvalues": spec.eigenvalues.tolist(),
        })
    return rows


def cmd_counterexample(args):
    rows = counterexample_rows(args.eps)
    consts = {json.dumps(r["constants"], sort_keys=True) for r in rows}
    betas = [r["beta_minus_exact"] for r in rows]
    out = {"rows": rows,
           "all_certificates_pass": all(r["drift"] and r["minorization"] for r in rows),
           "constants_independent_of_eps": len(consts) == 1,
           "distinct_beta_minus": len(set(betas))}
    emit(out)
    return 0 if out["all_certificates_pass"] else 1


# parser -------------------------------------------------------------------------


def _chain_args(p):
    p.add_argument("chain", help="chain JSON file, or a built-in: " + ", ".join(BUILTIN_CHAINS))
    p.add_argument("--eps", type=float, default=None, help="parameter of the built-in example1")


def _set_args(p):
    p.add_argument("--lyapunov", help="Lyapunov function V as a JSON list or .json file")
    p.add_argument("--set", help="small set K as comma-separated 0-based indices")
    p.add_argument("--level-set", type=float, default=None, metavar="R",
                   help="use K = {V <= R}")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lyapgap", description="Certified spectral-gap bounds for Markov chains.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="exact spectrum, certificates and every applicable bound")
    _chain_args(p)
    _set_args(p)
    p.add_argument("--sweep-level-sets", action="store_true",
                   help="try every level set of V and keep the best")
    p.add_argument("--lambda", dest="lam", type=float, default=None, help="fixed drift rate")
    p.add_argument("--b", type=float, default=None, help="fixed drift constant")
    p.add_argument("--nonreversible", action="store_true",
                   help="allow non-reversible chains (adjoint route)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("certify", help="fit or verify drift and minorization certificates")
    _chain_args(p)
    _set_args(p)
    p.add_argument("--drift", help="drift certificate JSON (literal or file) to verify")
    p.add_argument("--minorization", help="minorization certificate JSON to verify")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("ou", help="discretized Ornstein-Uhlenbeck chain")
    p.add_argument("--a", type=float, default=0.5)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--L", type=float, default=10.0, help="grid half-width")
    p.add_argument("--grid", type=int, default=401, help="number of grid nodes (odd)")
    p.add_argument("--out", help="CSV path for the leading eigenvalues")
    p.set_defaults(func=cmd_ou)

    p = sub.add_parser("diffmap", help="discretized diffusion-map operator")
    p.add_argument("--potential", default="shifted_quadratic")
    p.add_argument("--param", action="append", metavar="KEY=VALUE",
                   help="potential parameter, repeatable")
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--lambda0", type=float, default=0.5)
    p.add_argument("--R", type=float, default=math.sqrt(6.0))
    p.add_argument("--L", type=float, default=8.0)
    p.add_argument("--grid", type=int, default=321)
    p.add_argument("--out", help="CSV path for the discretized spectrum")
    p.set_defaults(func=cmd_diffmap)

    p = sub.add_parser("simulate", help="TV and moment decay against the gap envelope")
    _chain_args(p)
    _set_args(p)
    p.add_argument("--mu0", help="initial distribution as JSON (default: point mass at --start)")
    p.add_argument("--start", type=int, default=0)
    p.add_argument("--f", help="observable as JSON (default: the state index)")
    p.add_argument("--beta", default="exact", help="'exact', a number, or a route name")
    p.add_argument("--N", type=int, default=None, help="number of steps")
    p.add_argument("--out", help="CSV prefix; writes <prefix>_tv.csv and <prefix>_moment.csv")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("counterexample", help="same certificate, different beta_minus")
    p.add_argument("--eps", type=float, nargs="+", default=[0.01, 0.05, 0.1, 0.2, 0.25])
    p.set_defaults(func=cmd_counterexample)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        code = args.func(args)
    except LyapgapError as exc:
        emit({"error": {"kind": exc.kind, "detail": exc.detail}})
        return 1
    return 0 if code is None else int(code)


if __name__ == "__main__":
    sys.exit(main())
