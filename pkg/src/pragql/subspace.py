"""Closed subspaces of a finite-dimensional complex Hilbert space.

A :class:`Subspace` is stored as an orthonormal basis together with its
orthogonal projector.  The projector is the canonical identity of the
subspace: inclusion and equality are decided on projectors, so two bases
spanning the same space (for instance differing by a phase) compare equal.

>>> import numpy as np
>>> v = span([1, 0])
>>> complement(v).equals(span([0, 1]))
True
>>> join(span([1, 0]), span([1, 1])).dim
2
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, DomainError

__all__ = [
    "DEFAULT_TOL",
    "MAX_DIM",
    "Subspace",
    "check_tolerance",
    "orthonormalize",
    "complement",
    "meet",
    "join",
    "includes",
    "equals",
    "span",
    "full_space",
    "zero_space",
    "random_subspace",
    "random_state_vector",
]

#: Tolerance used for every rank decision and inclusion test.
DEFAULT_TOL = 1e-9

#: Largest ambient dimension accepted.  Rebind to lift the cap.
MAX_DIM = 16


def check_tolerance(tol: float) -> float:
    tol = float(tol)
    if not (0.0 < tol < 1.0):
        raise DomainError(f"tolerance must lie in (0, 1), got {tol!r}")
    return tol


def _check_dim(d: int) -> int:
    if int(d) != d or d < 1:
        raise DimensionError(f"ambient dimension must be a positive integer, got {d!r}")
    if d > MAX_DIM:
        raise DimensionError(f"ambient dimension {d} exceeds MAX_DIM={MAX_DIM}")
    return int(d)


def _as_vector(v, d: int | None = None) -> np.ndarray:
    arr = np.asarray(v, dtype=complex).reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise DomainError("vector has non-finite entries")
    if d is not None and arr.shape[0] != d:
        raise DimensionError(f"vector of length {arr.shape[0]} in a space of dimension {d}")
    return arr


@dataclass(frozen=True, eq=False)
class Subspace:
    """A closed subspace of C^d.

    Build instances through :func:`orthonormalize`, :func:`span` and the
    lattice operations; the constructor trusts that ``basis`` already has
    orthonormal columns.
    """

    basis: np.ndarray
    projector: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        basis = np.array(self.basis, dtype=complex, copy=True)
        if basis.ndim != 2:
            raise DimensionError("basis must be a d x k matrix")
        _check_dim(basis.shape[0])
        if basis.shape[1] > basis.shape[0]:
            raise DimensionError("more basis columns than the ambient dimension")
        if not np.all(np.isfinite(basis)):
            raise DomainError("basis has non-finite entries")
        proj = basis @ basis.conj().T
        basis.flags.writeable = False
        proj.flags.writeable = False
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "projector", proj)

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def is_zero(self) -> bool:
        return self.dim == 0

    @property
    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def residual(self, vector) -> float:
        """Norm of the component of ``vector`` orthogonal to this subspace."""
        v = _as_vector(vector, self.ambient_dim)
        return float(np.linalg.norm(v - self.projector @ v))

    def contains_vector(self, vector, tol: float = DEFAULT_TOL) -> bool:
        return self.residual(vector) <= tol

    def equals(self, other: Subspace, tol: float = DEFAULT_TOL) -> bool:
        return equals(self, other, tol)

    def includes(self, other: Subspace, tol: float = DEFAULT_TOL) -> bool:
        return includes(self, other, tol)

    def sort_key(self, decimals: int = 6) -> tuple:
        """Ordering key: dimension first, then rounded projector entries."""
        p = np.round(self.projector, decimals) + 0.0
        return (self.dim, tuple(p.real.ravel()), tuple(p.imag.ravel()))

    # lattice operators, mirroring the free functions
    def __invert__(self):
        return complement(self)

    def __and__(self, other):
        return meet(self, other)

    def __or__(self, other):
        return join(self, other)

    def __le__(self, other):
        return includes(other, self)

    def __ge__(self, other):
        return includes(self, other)

    def __repr__(self):
        return f"<Subspace dim {self.dim} of C^{self.ambient_dim}>"


def _same_ambient(v: Subspace, w: Subspace) -> int:
    if v.ambient_dim != w.ambient_dim:
        raise DimensionError(
            f"subspaces live in C^{v.ambient_dim} and C^{w.ambient_dim}"
        )
    return v.ambient_dim


def _gram_schmidt(accepted: list[np.ndarray], v: np.ndarray, tol: float):
    """Orthogonalize ``v`` against ``accepted`` twice (MGS + one re-pass)."""
    scale = max(1.0, float(np.linalg.norm(v)))
    w = v.copy()
    for _ in range(2):
        for q in accepted:
            w = w - np.vdot(q, w) * q
    norm = float(np.linalg.norm(w))
    if norm <= tol * scale:
        return None
    return w / norm


def orthonormalize(vectors: Iterable, d: int | None = None, tol: float = DEFAULT_TOL) -> Subspace:
    """Span of ``vectors`` as a :class:`Subspace`.

    Vectors are processed in the given order; one whose residual after
    projection onto the columns accepted so far is at most ``tol`` is
    dropped.  ``d`` is required when ``vectors`` is empty.
    """
    tol = check_tolerance(tol)
    vecs = [_as_vector(v) for v in vectors]
    if d is None:
        if not vecs:
            raise DimensionError("ambient dimension needed for an empty span")
        d = vecs[0].shape[0]
    d = _check_dim(d)
    accepted: list[np.ndarray] = []
    for v in vecs:
        if v.shape[0] != d:
            raise DimensionError(f"vector of length {v.shape[0]} in a space of dimension {d}")
        if len(accepted) == d:
            break
        q = _gram_schmidt(accepted, v, tol)
        if q is not None:
            accepted.append(q)
    basis = np.array(accepted, dtype=complex).T if accepted else np.zeros((d, 0), complex)
    return Subspace(basis)


def span(*vectors, d: int | None = None, tol: float = DEFAULT_TOL) -> Subspace:
    return orthonormalize(vectors, d=d, tol=tol)


def full_space(d: int) -> Subspace:
    return Subspace(np.eye(_check_dim(d), dtype=complex))


def zero_space(d: int) -> Subspace:
    return Subspace(np.zeros((_check_dim(d), 0), dtype=complex))


def complement(v: Subspace, tol: float = DEFAULT_TOL) -> Subspace:
    """Orthocomplement, built by pivoted Gram-Schmidt on the columns of I - P."""
    d = v.ambient_dim
    if v.is_zero:
        return full_space(d)
    if v.is_full:
        return zero_space(d)
    residual = np.eye(d, dtype=complex) - v.projector
    accepted: list[np.ndarray] = []
    pool = [residual[:, j].copy() for j in range(d)]
    for _ in range(d - v.dim):
        norms = [np.linalg.norm(c) for c in pool]
        j = int(np.argmax(norms))
        q = _gram_schmidt(list(v.basis.T) + accepted, pool[j], tol)
        if q is None:
            break
        accepted.append(q)
        pool = [c - np.vdot(q, c) * q for c in pool]
    return Subspace(np.array(accepted, dtype=complex).T)


def join(v: Subspace, w: Subspace, tol: float = DEFAULT_TOL) -> Subspace:
    d = _same_ambient(v, w)
    return orthonormalize(list(v.basis.T) + list(w.basis.T), d=d, tol=tol)


def meet(v: Subspace, w: Subspace, tol: float = DEFAULT_TOL) -> Subspace:
    # De Morgan keeps a single rank-decision path (the one in join).
    _same_ambient(v, w)
    return complement(join(complement(v, tol), complement(w, tol), tol), tol)


def includes(v: Subspace, w: Subspace, tol: float = DEFAULT_TOL) -> bool:
    """True iff ``w`` is a subspace of ``v``."""
    _same_ambient(v, w)
    if w.is_zero:
        return True
    gap = w.projector - v.projector @ w.projector
    return float(np.max(np.abs(gap))) <= tol


def equals(v: Subspace, w: Subspace, tol: float = DEFAULT_TOL) -> bool:
    _same_ambient(v, w)
    if v.dim != w.dim:
        return False
    return float(np.max(np.abs(v.projector - w.projector))) <= tol


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_subspace(d: int, k: int, seed=None) -> Subspace:
    """Haar-like random ``k``-dimensional subspace of C^d."""
    d = _check_dim(d)
    if not 0 <= k <= d:
        raise DimensionError(f"cannot draw a {k}-dimensional subspace of C^{d}")
    rng = _rng(seed)
    g = rng.normal(size=(k, d)) + 1j * rng.normal(size=(k, d))
    return orthonormalize(list(g), d=d)


def random_state_vector(d: int, seed=None) -> np.ndarray:
    rng = _rng(seed)
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def basis_vectors(v: Subspace) -> Sequence[np.ndarray]:
    return [v.basis[:, j] for j in range(v.dim)]
