"""
Which boundary measurement observes the beam?
=============================================

Evaluates the three root measurements on the unit eigenvectors of the
state operator and classifies each one from the spectral data.
"""

import numpy as np

from sgbeam.observability import c3_band, classify, observability_constants, observe_values
from sgbeam.spectrum import compute_spectrum

zeta = 1.0
basis = compute_spectrum(zeta, 24)

values = {op: observe_values(basis, op) for op in ("C1", "C2", "C3")}
print(" k        |C1 psi|     |C2 psi|   |C3 psi|")
for k in (1, 2, 4, 8, 16, 24):
    print(f"{k:2d}  {values['C1'][k-1]:12.2f} {values['C2'][k-1]:12.3f} {values['C3'][k-1]:10.6f}")

lo, hi = c3_band(zeta)
print(f"\nC3 stays inside [{lo:.4f}, {hi:.4f}] and approaches the upper end")

for op in ("C1", "C2", "C3"):
    rep = classify(basis, op)
    print(f"{op}: {rep.verdict:17s} growth exponent {rep.growth_fit:6.3f}  bounds {rep.bounds}")

# time-domain constants for the non-classical moment
for T in (5.0, 8.0, 20.0):
    c = observability_constants(zeta, T)
    note = "" if c.guaranteed else "  (below threshold: no lower bound)"
    print(f"T = {T:4}: {c.lower:6.2f} E <= int y^2 <= {c.upper:6.2f} E{note}")

# the shear force grows like a^2 and the classical moment like a
print("\nratios to a_k^2 and a_k:", np.round(values["C1"][-3:] / basis.a_values[-3:] ** 2, 5),
      np.round(values["C2"][-3:] / basis.a_values[-3:], 5))
