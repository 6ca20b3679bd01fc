"""Combinatorial tables for dense exterior algebra in low dimensions.

Degree-k forms are stored as flat coefficient vectors over an explicit ordered
basis of index tuples.  Basis tuples may be given in non-sorted order (the
4-dimensional 2-form basis uses ``(3, 1)`` for e31); all signs produced here
account for that.  Everything in this module is metric-free; metric-dependent
pieces (Gram matrices of form bases, Hodge stars) take the inverse metric as
input and broadcast over arbitrary leading axes.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np


def tuple_parity(t) -> int:
    """Sign of the permutation sorting ``t``; 0 if an index repeats."""
    t = list(t)
    if len(set(t)) != len(t):
        return 0
    sign = 1
    for i in range(len(t)):
        for j in range(i + 1, len(t)):
            if t[i] > t[j]:
                sign = -sign
    return sign


def lex_tuples(n: int, k: int):
    """Sorted index tuples of the lexicographic degree-k basis on R^n."""
    return tuple(combinations(range(n), k))


def wedge_sign(i_tuple, j_tuple):
    """Return ``(sign, sorted_tuple)`` with e^I ∧ e^J = sign * e^sorted; sign 0 on overlap."""
    cat = tuple(i_tuple) + tuple(j_tuple)
    s = tuple_parity(cat)
    if s == 0:
        return 0, None
    return s, tuple(sorted(cat))


def pairing_matrix(tuples_a, tuples_b, n: int) -> np.ndarray:
    """Matrix W with e^{I_m} ∧ e^{J_l} = W[m, l] * e^{0...n-1}.

    Nonzero only for complementary index sets, so for complementary degrees W
    is a signed permutation matrix (hence W^{-1} = W^T).
    """
    full = tuple(range(n))
    W = np.zeros((len(tuples_a), len(tuples_b)))
    for m, I in enumerate(tuples_a):
        for l, J in enumerate(tuples_b):
            s, sorted_t = wedge_sign(I, J)
            if s and sorted_t == full:
                W[m, l] = s
    return W


def wedge_table(tuples_a, tuples_b, tuples_out) -> np.ndarray:
    """Dense structure tensor T with (α ∧ β)_p = T[m, l, p] α_m β_l."""
    pos = {}
    for p, K in enumerate(tuples_out):
        pos[tuple(sorted(K))] = (p, tuple_parity(K))
    T = np.zeros((len(tuples_a), len(tuples_b), len(tuples_out)))
    for m, I in enumerate(tuples_a):
        for l, J in enumerate(tuples_b):
            s, sorted_t = wedge_sign(I, J)
            if not s:
                continue
            p, par = pos[sorted_t]
            # coefficient against basis element K: e^K = par * e^sorted(K)
            T[m, l, p] = s * par
    return T


def interior_table(tuples_in, tuples_out, n: int) -> np.ndarray:
    """Structure tensor C with (e_a ⌟ β)_q = C[a, m, q] β_m."""
    pos = {}
    for q, K in enumerate(tuples_out):
        pos[tuple(sorted(K))] = (q, tuple_parity(K))
    C = np.zeros((n, len(tuples_in), len(tuples_out)))
    for m, I in enumerate(tuples_in):
        par_in = tuple_parity(I)
        I_sorted = tuple(sorted(I))
        for j, a in enumerate(I_sorted):
            rest = I_sorted[:j] + I_sorted[j + 1:]
            q, par_out = pos[rest]
            C[a, m, q] = par_in * par_out * (-1) ** j
    return C


def metric_gram(h: np.ndarray, tuples) -> np.ndarray:
    """Gram matrix of the degree-k basis under the inner product induced by g.

    ``h`` is the inverse metric g^{-1}, shape (..., n, n).  Entry [m, l] is
    det(h[I_m, J_l]); the index tuples are used in their stored order, which
    bakes in the sign of non-sorted labels.  Broadcasts over leading axes.
    """
    idx = np.array([list(t) for t in tuples], dtype=np.intp)
    k = idx.shape[1]
    if k == 0:
        shape = h.shape[:-2] + (1, 1)
        return np.ones(shape, dtype=h.dtype)
    sub = h[..., idx[:, None, :, None], idx[None, :, None, :]]
    if k == 1:
        return sub[..., 0, 0]
    if k == 2:
        return (sub[..., 0, 0] * sub[..., 1, 1]
                - sub[..., 0, 1] * sub[..., 1, 0])
    return np.linalg.det(sub)


def star_via_pairing(coeffs: np.ndarray, h: np.ndarray, sqrt_det_g: np.ndarray,
                     tuples_k, w_inv: np.ndarray) -> np.ndarray:
    """Hodge star from the defining relation α ∧ *β = <α, β>_g vol_g.

    ``w_inv`` is the inverse of ``pairing_matrix(tuples_k, tuples_{n-k}, n)``.
    Broadcasts: coeffs (..., m), h (..., n, n), sqrt_det_g (...).
    """
    G = metric_gram(h, tuples_k)
    raised = np.einsum('...ml,...l->...m', G, coeffs)
    out = np.einsum('pm,...m->...p', w_inv, raised)
    return out * sqrt_det_g[..., None] if np.ndim(sqrt_det_g) else out * sqrt_det_g


def d_entries(tuples_in, tuples_out, n: int):
    """Assembly table for the coefficientwise exterior derivative.

    Returns a list of ``(dst_comp, src_comp, axis, sign)``: the derivative of
    source component ``src_comp`` along ``axis`` contributes with ``sign`` to
    output component ``dst_comp``.
    """
    pos = {}
    for p, K in enumerate(tuples_out):
        pos[tuple(sorted(K))] = (p, tuple_parity(K))
    entries = []
    for m, I in enumerate(tuples_in):
        for a in range(n):
            s, sorted_t = wedge_sign((a,), I)
            if not s:
                continue
            p, par = pos[sorted_t]
            entries.append((p, m, a, s * par))
    return entries
