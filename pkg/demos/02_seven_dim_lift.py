"""The 7-dimensional product-fiber lift of a positive triple.

A triple on the 4-dimensional base lifts to a 3-form phi on the product
with a flat 3-torus; its dual triple lifts to a 4-form psi.  The two are
Hodge duals for the product metric, whose blocks are the unit-determinant
Gram matrix and the base metric, and the lift's torsion trace vanishes
identically, closed triple or not.

Run:  python demos/02_seven_dim_lift.py
"""

import numpy as np

from hsflow import (build_phi, build_psi, check_star7, dual_triple,
                    metric7_block, metric_from_phi, metric_from_triple,
                    normalize, standard_triple, torsion_trace, assemble_dphi)

rng = np.random.default_rng(1)

# flat model: the lift of the standard triple has unit metric
phi0 = build_phi(standard_triple())
g7, vol = metric_from_phi(phi0)
print("flat lift metric == identity:", np.array_equal(g7, np.eye(7)),
      " volume:", vol)

# generic triple: the 7x7 metric splits into the Gram and base blocks
m = rng.uniform(-1, 1, (3, 3))
if np.linalg.det(m) < 0:
    m[0] *= -1
t = m @ standard_triple()
q, mu_w = normalize(t)
g4, _ = metric_from_triple(t)
phi = build_phi(t)
g7, vol7 = metric_from_phi(phi)
print("\nT3 block matches unit-determinant Gram:",
      np.abs(g7[:3, :3] - q).max())
print("base block matches triple metric:     ",
      np.abs(g7[3:, 3:] - g4).max())
print("mixed block:                           ",
      np.abs(g7[:3, 3:]).max())

# the dual triple's 4-form is the Hodge dual of phi
sigma = dual_triple(t, q)
psi = build_psi(sigma, mu_w)
print("\n|star7(psi) - phi|_inf =", check_star7(phi, psi, g7))

# the torsion trace of the lift vanishes identically: the relevant product
# is a 5-form living entirely on the 4-dimensional base
domega = rng.uniform(-1, 1, (3, 4))     # arbitrary non-closed derivative data
dphi = assemble_dphi(domega)
print("torsion trace on non-closed data:",
      torsion_trace(phi, dphi, metric7_block(q, g4)))
