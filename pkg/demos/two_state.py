"""Two-state chain: a drift certificate that says nothing about the bottom of the spectrum.

Run with ``python demos/two_state.py``.
"""
import numpy as np

from lyapgap import (DriftCertificate, MinorizationCertificate, eigen_report, fit_drift,
                     fit_minorization, poincare_bound, two_state_chain, verify_drift,
                     verify_minorization)

eps = 0.1
P = two_state_chain(eps)
pi = np.array([0.5, 0.5])
rep = eigen_report(P, pi)
print("eigenvalues", rep.eigenvalues)            # 1 and 2 eps - 1
print("gap", rep.gap)                            # 1 - |2 eps - 1|

# hand-made certificate: V = [1, 3], small set = first state
drift = DriftCertificate([1.0, 3.0], [0], 0.5, 3.0)
minor = MinorizationCertificate([0], 1.0, [eps, 1 - eps])
print("drift ok", bool(verify_drift(P, drift)), " minorization ok", bool(verify_minorization(P, minor)))
print("beta_plus from the certificate", poincare_bound(drift, minor), "= 1/14")

# the fitted certificate is tighter
m = fit_minorization(P, [0])
d = fit_drift(P, [1.0, 3.0], [0], alpha=m.alpha)
print(f"fitted lambda={d.lam:.4f} b={d.b:.4f} -> beta_plus={poincare_bound(d, m):.4f}")

# same certificate, every eps <= 1/4, but beta_minus = 2 eps moves freely
for e in (0.01, 0.05, 0.1, 0.2, 0.25):
    c = two_state_chain(e)
    ok = verify_drift(c, drift) and verify_minorization(c, MinorizationCertificate([0], 1.0, [e, 1 - e]))
    print(f"eps={e:<5} certificate {'passes' if ok else 'fails'}   beta_minus={eigen_report(c, pi).beta_minus_exact:.3f}")
