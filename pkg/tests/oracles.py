"""Independent reference computations used to derive expected test values.

None of these touch pragql's Gram-Schmidt or Extension code.
"""

import itertools

import numpy as np


def gram_rank(vectors, tol=1e-9):
    """Rank as the size of the largest subset with nonzero Gram determinant."""
    vecs = [np.asarray(v, complex) for v in vectors]
    # unit vectors keep the determinant scale-free
    vecs = [v / np.linalg.norm(v) for v in vecs if np.linalg.norm(v) > tol]
    best = 0
    for r in range(1, len(vecs) + 1):
        for idx in itertools.combinations(range(len(vecs)), r):
            g = np.array([[np.vdot(vecs[i], vecs[j]) for j in idx] for i in idx])
            if abs(np.linalg.det(g)) > tol:
                best = r
                break
    return best


def svd_projector(vectors, d):
    if len(vectors) == 0:
        return np.zeros((d, d), complex)
    m = np.array(vectors, complex).T
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    u = u[:, s > 1e-9]
    return u @ u.conj().T


def nullspace_intersection(basis_v, basis_w):
    """Projector onto span(V) ∩ span(W) from the null space of [Bv, -Bw]."""
    bv = np.array(basis_v, complex).T
    bw = np.array(basis_w, complex).T
    d = bv.shape[0]
    m = np.hstack([bv, -bw])
    _, s, vh = np.linalg.svd(m)
    rank = int((s > 1e-9).sum())
    null = vh[rank:].conj().T
    vecs = (bv @ null[: bv.shape[1]]).T
    return svd_projector(list(vecs), d)


def random_state_in(basis, rng):
    b = np.array(basis, complex).T
    c = rng.normal(size=b.shape[1]) + 1j * rng.normal(size=b.shape[1])
    v = b @ c
    return v / np.linalg.norm(v)


def in_span(v, basis, tol=1e-9):
    p = svd_projector(basis, len(v))
    return np.linalg.norm(v - p @ v) <= tol
