"""Decay of TV distance and of centered moments under exact and certified rates.

Run with ``python demos/convergence.py``; writes CSV files next to the script.
"""
from pathlib import Path

import numpy as np

from lyapgap import moment_decay, tv_decay, two_state_chain
from lyapgap.chain import delta

out = Path(__file__).with_suffix("")
P = two_state_chain(0.1)

# exact rate: TV is 0.5 * 0.8^k, the envelope is 0.8^k
tv = tv_decay(P, delta(2, 0), beta=0.2, N=30)
print("exact:   ", tv.summary())

# certified rate 1/14 from the hand-made certificate: looser, still valid
loose = tv_decay(P, delta(2, 0), beta=1 / 14, N=30)
print("certified:", loose.summary())

# second eigenvector decays exactly at the rate, so the moment envelope is tight
f = np.array([1.0, -1.0])
m = moment_decay(P, f, beta=0.2, N=30)
print("moment slack range", m.slack().min(), m.slack().max())

for name, s in (("tv_exact", tv), ("tv_certified", loose), ("moment", m)):
    Path(f"{out}_{name}.csv").write_text(s.to_csv())
print("wrote", sorted(p.name for p in out.parent.glob(out.name + "_*.csv")))
