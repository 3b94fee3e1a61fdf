"""Discretized Ornstein-Uhlenbeck chain against its closed-form constants.

Run with ``python demos/ornstein_uhlenbeck.py``.
"""
import numpy as np

from lyapgap.analysis import ou_report
from lyapgap.continuum import Grid, OUParams

params, grid = OUParams(a=0.5, sigma=1.0), Grid(L=10.0, n=401)
rep = ou_report(params, grid)
rep.pop("_series")

s = rep["spectrum"]
for k, (w, p) in enumerate(zip(s["eigenvalues"], s["predicted"])):
    print(f"lambda_{k} grid={w:.12f}  (1-a)^k={p:.12f}")

v = rep["stationary_variance"]
print("variance on grid", v["grid"], " AR(1) value", v["ar1"])

c = rep["constants"]
print(f"lambda={c['lambda']} b={c['b']} R={c['R']:.4f} alpha={c['alpha']:.6f}")

# the closed-form alpha is too large for nu = N(0, sigma^2/2); alpha/sqrt(2) is the valid one
g = rep["grid_checks"]
print("drift on grid", g["drift"]["passed"])
print("minorization with alpha", g["minorization_displayed_alpha"]["passed"],
      "| with alpha/sqrt(2)", g["minorization_alpha_over_sqrt2"]["passed"],
      "| best alpha on grid", round(g["fitted_alpha"], 4))

b = rep["bounds"]
print("norm bound (drift + PSD)", b["theorem1"]["norm_bound"])
print("norm bound without the factor 2 on b/alpha", b["printed_formula_norm_bound"])
print("exact norm", s["op_norm_L20"], " sound:", rep["comparison"]["sound"])

# refinement: trapezoid on Gaussians converges very fast
from lyapgap.chain import stationary_measure
from lyapgap.continuum import discretize_ou
from lyapgap.spectrum import eigen_report
for n in (11, 15, 21, 41):
    ch = discretize_ou(params, Grid(10.0, n))
    w = eigen_report(ch, stationary_measure(ch)).eigenvalues[:4]
    print(n, "nodes: max eigenvalue error", np.abs(w - 0.5 ** np.arange(4)).max())
