"""Tour of the single-fiber algebra: Gram matrices, the induced metric,
volume normalization, dual triples, and self-duality.

Run:  python demos/01_pointwise_identities.py
"""

import numpy as np

from hsflow import (det3, dual_triple, gram, hodge2, inv3,
                    levi_civita_det_check, metric_from_triple, normalize,
                    standard_triple)

rng = np.random.default_rng(0)

# ----------------------------------------------------------------------
# The standard triple w_i = e0^ei + ej^ek has Gram matrix I against the
# unit volume: the flat reference point of everything in this package.
# ----------------------------------------------------------------------
std = standard_triple()
print("standard triple coefficients (basis e01,e02,e03,e23,e31,e12):")
print(std)
print("\nGram matrix Q (w_i ^ w_j = 2 Q_ij e0123):")
print(gram(std))

g, mu_w = metric_from_triple(std)
print("\ninduced metric g and volume coefficient:")
print(g, "\nmu_w =", mu_w)

# ----------------------------------------------------------------------
# A generic positive triple: mix the standard one by a random invertible
# matrix with positive determinant.  The volume coefficient always equals
# det(Q)^(1/3) -- the cube-root volume relation.
# ----------------------------------------------------------------------
m = rng.uniform(-1, 1, (3, 3))
if np.linalg.det(m) < 0:
    m[0] *= -1
t = m @ std
q = gram(t)
g, mu_w = metric_from_triple(t)
print("\nrandom mix: det(M) =", np.linalg.det(m))
print("mu_w =", mu_w, " det(Q)^(1/3) =", det3(q) ** (1 / 3))

# Normalizing against the triple's own Riemannian volume makes det Q = 1.
qn, mu_n = normalize(t)
print("normalized Gram determinant:", det3(qn))

# ----------------------------------------------------------------------
# The dual triple s_i = (Q^{-1})_ik w_k has Gram matrix Q^{-1}, and taking
# the dual twice returns the original triple.
# ----------------------------------------------------------------------
sigma = dual_triple(t, qn)
print("\nGram of dual minus inverse Gram (sup):",
      np.abs(gram(sigma, mu_n) - inv3(qn)).max())
back = dual_triple(sigma, gram(sigma, mu_n))
print("dual of dual minus original (sup):", np.abs(back - t).max())

# ----------------------------------------------------------------------
# Every form of a positive triple is self-dual for its own metric, and the
# Hodge star is an involution on 2-forms.
# ----------------------------------------------------------------------
worst = max(np.abs(hodge2(t[i], g, mu_w) - t[i]).max() for i in range(3))
print("\nself-duality residual:", worst)
beta = rng.uniform(-1, 1, 6)
print("star of star minus identity:",
      np.abs(hodge2(hodge2(beta, g, mu_w), g, mu_w) - beta).max())

# ----------------------------------------------------------------------
# The contraction identity behind the volume relation, checked on a batch
# of arbitrary (not even symmetric) matrices.
# ----------------------------------------------------------------------
res = levi_civita_det_check(rng.uniform(-10, 10, (1000, 3, 3)))
print("\ncontraction-identity residual over 1000 matrices:", res)
