"""Pointwise algebra of 2-form triples on an oriented R^4 fiber.

Conventions, fixed once and shared by every module in the package:

* 2-forms are coefficient vectors of shape ``(..., 6)`` in the ordered basis
  ``(e01, e02, e03, e23, e31, e12)``.  In this order the standard triple
  ``w1 = e01 + e23, w2 = e02 + e31, w3 = e03 + e12`` is two-hot.
* Triples are stacks of shape ``(..., 3, 6)``.
* The orientation is ``e0123`` positive; a volume form is ``m * e0123`` with
  coefficient ``m > 0`` (plain floats/arrays stand in for volume forms).
* Symmetric 3x3 and 4x4 matrices are plain ``(..., 3, 3)`` / ``(..., 4, 4)``
  arrays; all operations broadcast over leading axes, so a lattice of fibers
  is just another batch shape.

A triple is *positive* when its Gram matrix ``Q`` (pairwise wedge products
against the reference volume) is positive definite.  Positivity of ``Q``
alone does not guarantee the metric reconstruction succeeds: the ordered
triple must also be right-handed inside its span (an odd relabeling such as
``(w1, w2, -w3)`` of the standard triple keeps ``Q = I`` but flips the sign
of the metric density and is rejected by ``metric_from_triple``).
"""

from __future__ import annotations

import numpy as np

from . import exterior
from .errors import NotPositive, SingularMatrix

# Ordered Lambda^2(R^4) basis; (3, 1) is deliberate, e31 = -e13.
LAMBDA2_TUPLES = ((0, 1), (0, 2), (0, 3), (2, 3), (3, 1), (1, 2))
LAMBDA1_TUPLES = ((0,), (1,), (2,), (3,))
LAMBDA3_TUPLES = exterior.lex_tuples(4, 3)

# Wedge pairing on Lambda^2: a ∧ b = (a . W2 b) e0123.  For the basis above
# this is the half-swap [[0, I], [I, 0]].
WEDGE2 = exterior.pairing_matrix(LAMBDA2_TUPLES, LAMBDA2_TUPLES, 4)

_W12 = exterior.pairing_matrix(LAMBDA1_TUPLES, LAMBDA3_TUPLES, 4)
_W32 = exterior.pairing_matrix(LAMBDA3_TUPLES, LAMBDA1_TUPLES, 4)
_W2INV = np.linalg.inv(WEDGE2)
_W32INV = np.linalg.inv(_W32)

# Coefficients -> antisymmetric matrix B with B[a, b] = beta(e_a, e_b).
_CMAT = np.zeros((6, 4, 4))
for _m, (_a, _b) in enumerate(LAMBDA2_TUPLES):
    _CMAT[_m, _a, _b] = 1.0
    _CMAT[_m, _b, _a] = -1.0

# Metric-free duality on coefficients: eps^{cdef} Z_{ef} swaps the two halves.
_SWAP = np.array([3, 4, 5, 0, 1, 2])

EPS3 = np.zeros((3, 3, 3))
for _p in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    EPS3[_p] = 1.0
for _p in ((0, 2, 1), (2, 1, 0), (1, 0, 2)):
    EPS3[_p] = -1.0

# index bookkeeping for the Lambda^3 Gram shortcut (see star3)
_OMITTED = np.array([3, 2, 1, 0])           # coordinate missing from each lex 3-tuple
_SIGMA3 = np.array([-1.0, 1.0, -1.0, 1.0])  # (-1)^omitted

_I2 = np.array([list(t) for t in LAMBDA2_TUPLES])
_W32INV_T = np.ascontiguousarray(_W32INV.T)
_W12INV_T = np.ascontiguousarray(np.linalg.inv(_W12).T)


def _apply_pointwise(mat: np.ndarray, vec: np.ndarray) -> np.ndarray:
    """matmul of a symmetric matrix stack onto vectors, with or without a
    trailing batch axis on the vectors ((..., m) or (..., B, m))."""
    if vec.ndim == mat.ndim - 1:
        return np.matmul(mat, vec[..., None])[..., 0]
    return np.matmul(vec, mat)


def _match_rank(scalar, like: np.ndarray) -> np.ndarray:
    """Append singleton axes so a pointwise scalar broadcasts against ``like``."""
    s = np.asarray(scalar, dtype=float)
    return s.reshape(s.shape + (1,) * (like.ndim - s.ndim))


def two_form(c01=0.0, c02=0.0, c03=0.0, c23=0.0, c31=0.0, c12=0.0) -> np.ndarray:
    """Coefficient vector of a 2-form in the package basis order."""
    return np.array([c01, c02, c03, c23, c31, c12], dtype=float)


def standard_triple() -> np.ndarray:
    """The flat reference triple: w_i = e0 ∧ ei + ej ∧ ek (cyclic), Gram = I."""
    t = np.zeros((3, 6))
    for i in range(3):
        t[i, i] = 1.0
        t[i, 3 + i] = 1.0
    return t


def wedge22(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Coefficient c with a ∧ b = c * e0123; symmetric and bilinear."""
    return np.einsum('...m,mn,...n->...', a, WEDGE2, b)


def gram(triple: np.ndarray, mu=1.0) -> np.ndarray:
    """Gram matrix Q with w_i ∧ w_j = 2 Q_ij * (mu e0123)."""
    triple = np.asarray(triple, dtype=float)
    q = np.matmul(np.matmul(triple, WEDGE2), np.swapaxes(triple, -1, -2))
    return q / (2.0 * np.asarray(mu)[..., None, None])


def is_positive(q: np.ndarray, tol: float = 0.0):
    """Whether all leading principal minors of the symmetric matrix exceed tol."""
    m1 = q[..., 0, 0]
    m2 = q[..., 0, 0] * q[..., 1, 1] - q[..., 0, 1] * q[..., 1, 0]
    m3 = det3(q)
    ok = (m1 > tol) & (m2 > tol) & (m3 > tol)
    return bool(ok) if np.ndim(ok) == 0 else ok


def det3(s: np.ndarray) -> np.ndarray:
    """Determinant of a 3x3 stack by cofactor expansion."""
    return (s[..., 0, 0] * (s[..., 1, 1] * s[..., 2, 2] - s[..., 1, 2] * s[..., 2, 1])
            - s[..., 0, 1] * (s[..., 1, 0] * s[..., 2, 2] - s[..., 1, 2] * s[..., 2, 0])
            + s[..., 0, 2] * (s[..., 1, 0] * s[..., 2, 1] - s[..., 1, 1] * s[..., 2, 0]))


def adj3(s: np.ndarray) -> np.ndarray:
    """Adjugate of a 3x3 stack; adj(s) @ s = det(s) I."""
    out = np.empty(np.broadcast_shapes(s.shape), dtype=float)
    out[..., 0, 0] = s[..., 1, 1] * s[..., 2, 2] - s[..., 1, 2] * s[..., 2, 1]
    out[..., 0, 1] = s[..., 0, 2] * s[..., 2, 1] - s[..., 0, 1] * s[..., 2, 2]
    out[..., 0, 2] = s[..., 0, 1] * s[..., 1, 2] - s[..., 0, 2] * s[..., 1, 1]
    out[..., 1, 0] = s[..., 1, 2] * s[..., 2, 0] - s[..., 1, 0] * s[..., 2, 2]
    out[..., 1, 1] = s[..., 0, 0] * s[..., 2, 2] - s[..., 0, 2] * s[..., 2, 0]
    out[..., 1, 2] = s[..., 0, 2] * s[..., 1, 0] - s[..., 0, 0] * s[..., 1, 2]
    out[..., 2, 0] = s[..., 1, 0] * s[..., 2, 1] - s[..., 1, 1] * s[..., 2, 0]
    out[..., 2, 1] = s[..., 0, 1] * s[..., 2, 0] - s[..., 0, 0] * s[..., 2, 1]
    out[..., 2, 2] = s[..., 0, 0] * s[..., 1, 1] - s[..., 0, 1] * s[..., 1, 0]
    return out


def inv3(s: np.ndarray) -> np.ndarray:
    """Inverse of a 3x3 stack via the adjugate; raises SingularMatrix on det == 0."""
    d = det3(s)
    if np.any(d == 0.0):
        raise SingularMatrix("3x3 matrix has zero determinant")
    return adj3(s) / d[..., None, None]


def levi_civita_det_check(s: np.ndarray) -> float:
    """Max residual of the contraction identity eps_ijk S_ip S_jq S_kl = det(S) eps_pql.

    Holds for every 3x3 matrix, symmetric or not; the return value is the
    worst absolute deviation over all (p, q, l) (and over any batch axes).
    """
    s = np.asarray(s, dtype=float)
    lhs = np.einsum('ijk,...ip,...jq,...kl->...pql', EPS3, s, s, s)
    rhs = det3(s)[..., None, None, None] * EPS3
    return float(np.abs(lhs - rhs).max())


def dual_triple(triple: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Dual triple s_i = (q^{-1})_{ik} w_k; its Gram against the same volume is q^{-1}."""
    return np.einsum('...ik,...km->...im', inv3(q), triple)


def rescale_triple(triple: np.ndarray, a: np.ndarray) -> np.ndarray:
    """Linear mix w~_i = a_{ik} w_k.  Gram transforms as a Q a^T.

    The induced metric obeys g(a w) = det(a)^{1/3} g(w) for any invertible
    mix, so an ``a`` taking a constant-Q triple to Gram I changes the metric
    by the constant factor det(a)^{1/3}.
    """
    a = np.asarray(a, dtype=float)
    if np.any(det3(a) == 0.0):
        raise SingularMatrix("rescale matrix is singular")
    return np.einsum('...ik,...km->...im', a, triple)


def metric_density(triple: np.ndarray) -> np.ndarray:
    """Matrix K = g sqrt(det g) of the triple metric in the coordinate frame.

    K_ab * e0123 = (1/6) eps_ijk (e_a ⌟ w_i) ∧ (e_b ⌟ w_j) ∧ w_k.  Independent
    of any reference volume form.  Per-term the contraction reduces to matrix
    products: with B_i the antisymmetric matrix of w_i and S_k the matrix of
    the half-swapped coefficients, eps^{cdef} B_i[a,c] B_j[b,d] B_k[e,f]
    equals 2 (B_i S_k B_j^T)[a,b].
    """
    triple = np.asarray(triple, dtype=float)
    flat = _CMAT.reshape(6, 16)
    B = np.matmul(triple, flat).reshape(triple.shape[:-1] + (4, 4))
    S = np.matmul(triple[..., _SWAP], flat).reshape(triple.shape[:-1] + (4, 4))
    Bi = [B[..., i, :, :] for i in range(3)]
    Si = [S[..., i, :, :] for i in range(3)]
    Bt = [np.swapaxes(b, -1, -2) for b in Bi]

    def term(i, k, j):
        return np.matmul(np.matmul(Bi[i], Si[k]), Bt[j])

    k = (term(0, 2, 1) + term(1, 0, 2) + term(2, 1, 0)
         - term(0, 1, 2) - term(2, 0, 1) - term(1, 2, 0))
    k /= 6.0
    return 0.5 * (k + np.swapaxes(k, -1, -2))   # exact symmetry up to roundoff


def _det4(m: np.ndarray) -> np.ndarray:
    """Determinant of a 4x4 stack by expansion along the first row."""
    rows = m[..., 1:, :]
    cols = [rows[..., :, [1, 2, 3]], rows[..., :, [0, 2, 3]],
            rows[..., :, [0, 1, 3]], rows[..., :, [0, 1, 2]]]
    return (m[..., 0, 0] * det3(cols[0]) - m[..., 0, 1] * det3(cols[1])
            + m[..., 0, 2] * det3(cols[2]) - m[..., 0, 3] * det3(cols[3]))


def _pd_minors4(m: np.ndarray):
    d1 = m[..., 0, 0]
    d2 = m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]
    d3 = det3(m[..., :3, :3])
    d4 = _det4(m)
    return d1, d2, d3, d4


def metric_from_triple(triple: np.ndarray, mu=1.0, tol: float = 1e-12):
    """Riemannian metric and volume coefficient determined by a positive triple.

    Returns ``(g, mu_w)`` where ``g`` solves K = g sqrt(det g) for the density
    of :func:`metric_density` (``g = K det(K)^{-1/6}``) and ``mu_w`` is the
    coefficient of the Riemannian volume form, ``mu_w = det(K)^{1/6}``.  Both
    are independent of the reference volume ``mu``; the argument is kept so
    callers can state which Gram normalization they pair the result with, and
    ``mu_w`` always equals ``det(gram(triple, mu))^{1/3} * mu``.

    Raises NotPositive when the density fails positive-definiteness (Gram
    positivity plus right-handedness of the triple inside its span).
    """
    K = metric_density(triple)
    d1, d2, d3, d4 = _pd_minors4(K)
    if not np.all((d1 > tol) & (d2 > tol) & (d3 > tol) & (d4 > tol)):
        raise NotPositive("metric density is not positive definite")
    s = d4 ** (1.0 / 6.0)
    g = K / s[..., None, None]
    return g, s


def normalize(triple: np.ndarray, mu=1.0):
    """Gram matrix against the triple's own Riemannian volume; det Q* = 1.

    Returns ``(q_star, mu_w)`` with ``q_star = gram(triple, mu_w)``.  This is
    the normalization that makes the determinant identically one, which the
    closed-form Hodge tables on the 3-torus fiber assume.
    """
    _, mu_w = metric_from_triple(triple, mu)
    return gram(triple, mu_w), mu_w


def lambda2_gram(h: np.ndarray) -> np.ndarray:
    """Inner products of the Lambda^2 basis for inverse metric ``h`` (..., 6, 6)."""
    p, q = _I2[:, 0], _I2[:, 1]
    return (h[..., p[:, None], p[None, :]] * h[..., q[:, None], q[None, :]]
            - h[..., p[:, None], q[None, :]] * h[..., q[:, None], p[None, :]])


def star2(coeffs: np.ndarray, h: np.ndarray, sqrt_det_g) -> np.ndarray:
    """Hodge star on 2-forms, fast path: no validation, caller supplies g^{-1}.

    ``coeffs`` may carry one batch axis before the component axis (a triple);
    leading axes otherwise match the metric stack.
    """
    raised = _apply_pointwise(lambda2_gram(h), np.asarray(coeffs, dtype=float))
    out = np.matmul(raised, _W2INV)
    return out * _match_rank(sqrt_det_g, out)


def star3(coeffs: np.ndarray, g: np.ndarray, sqrt_det_g) -> np.ndarray:
    """Hodge star Lambda^3 -> Lambda^1 (lex 3-form basis in, 1-form basis out).

    Uses the complementary-minor identity: the Lambda^3 Gram of g^{-1} is
    D g D / det(g) with D the signs of the omitted coordinates, so only ``g``
    itself is needed.  Batch axis handled as in :func:`star2`.
    """
    gsub = g[..., _OMITTED[:, None], _OMITTED[None, :]]
    G = (_SIGMA3[:, None] * _SIGMA3[None, :]) * gsub
    raised = _apply_pointwise(G, np.asarray(coeffs, dtype=float))
    out = np.matmul(raised, _W32INV_T)
    return out / _match_rank(sqrt_det_g, out)


def star1(coeffs: np.ndarray, h: np.ndarray, sqrt_det_g) -> np.ndarray:
    """Hodge star Lambda^1 -> Lambda^3 (1-form basis in, lex 3-form basis out)."""
    raised = _apply_pointwise(h, np.asarray(coeffs, dtype=float))
    out = np.matmul(raised, _W12INV_T)
    return out * _match_rank(sqrt_det_g, out)


def hodge2(b: np.ndarray, g: np.ndarray, mu_g) -> np.ndarray:
    """Hodge star of a 2-form for metric ``g`` with volume coefficient ``mu_g``.

    Defining relation: beta ∧ hodge2(gamma) = <beta, gamma>_g * (mu_g e0123)
    for all 2-forms beta.  Requires ``mu_g = sqrt(det g)``; an involution and
    an isometry for Riemannian ``g``.  Raises NotPositive on indefinite g.
    """
    g = np.asarray(g, dtype=float)
    d1, d2, d3, d4 = _pd_minors4(g)
    if not np.all((d1 > 0) & (d2 > 0) & (d3 > 0) & (d4 > 0)):
        raise NotPositive("hodge2 requires a positive definite metric")
    h = np.linalg.inv(g)
    return star2(b, h, mu_g)
