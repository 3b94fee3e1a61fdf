"""Certified norm bounds against the exact norm on random Metropolis chains.

Run with ``python demos/soundness_sweep.py``.
"""
import numpy as np

from lyapgap.analysis import analyze_chain
from lyapgap.bounds import Route
from lyapgap.chain import square
from lyapgap.corpus import exponential_lyapunov, quadratic_lyapunov, random_metropolis_chain
from lyapgap.errors import LyapgapError

rng = np.random.default_rng(0)
rows = []
for i in range(30):
    n = int(rng.integers(5, 40))
    chain, target = random_metropolis_chain(rng, n, shape="laplace", scale=float(rng.uniform(0.5, 2)))
    V = exponential_lyapunov(target, 0.7) if i % 2 else quadratic_lyapunov(target)
    # squared chain is PSD, so the drift + PSD route applies as well
    for label, P in (("P", chain), ("P^2", square(chain))):
        try:
            rep = analyze_chain(P, target, V=V, sweep=True)
        except LyapgapError:
            continue
        best = {str(b.route): b.norm_bound for b in rep.bounds}
        rows.append((label, n, rep.exact_norm, best))

print(f"{'chain':5} {'n':>3} {'exact':>8} {'Doeblin':>8} {'drift+PSD':>10} {'squared':>8}")
for label, n, exact, best in rows:
    cells = [best.get(str(r)) for r in (Route.DOEBLIN, Route.THEOREM1_PSD, Route.PROP1_PSQUARED)]
    cells = ["-" if c is None else f"{c:.4f}" for c in cells]
    print(f"{label:5} {n:>3} {exact:8.4f} {cells[0]:>8} {cells[1]:>10} {cells[2]:>8}")

worst = min(v - exact for _, _, exact, best in rows for r, v in best.items() if r != str(Route.EXACT))
print("worst certified bound - exact norm:", worst)
