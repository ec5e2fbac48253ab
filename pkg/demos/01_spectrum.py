"""
Eigenvalues of the strain-gradient cantilever
=============================================

Computes the first modes for a few stiffness ratios, compares them with the
closed-form large-frequency estimate, and shows how the gaps grow.
"""

import numpy as np

from sgbeam.spectrum import SEED_INDEX_OFFSET, asymptotic_seed, compute_spectrum, gap_profile

# a stiffer higher-order term pushes every frequency up
for zeta in (0.1, 1.0, 10.0):
    basis = compute_spectrum(zeta, 5)
    print(f"zeta = {zeta:5}:", np.array2string(basis.lambdas, precision=4))

# the seed for index n lands on mode n + 1
basis = compute_spectrum(1.0, 20)
print("\n k   lambda_k          a_k        seed        a_k - seed   (a_k - seed)(k - 1/2)")
for k in (2, 5, 10, 15, 20):
    a = basis.a_values[k - 1]
    seed, _ = asymptotic_seed(k - SEED_INDEX_OFFSET)
    print(f"{k:2d}  {basis[k].lam:14.6f}  {a:10.6f}  {seed:10.6f}  {a - seed:11.3e}  {(a - seed) * (k - 0.5):8.5f}")
# the last column settles near 0.1: the seed misses a 1/n term

gp = gap_profile(basis, 10, 20)
print(f"\ngap growth exponent over k = 10..20: {gp.gap_slope:.3f}  (tends to 2)")
print(f"lambda growth exponent over the same range: {gp.lambda_slope:.3f}  (tends to 3)")
