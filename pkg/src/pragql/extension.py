"""Pragmatic extensions: finite unions of closed subsets of the state set.

A pure state is a unit ray, so a set of states of the form ``{s : s in V}``
is identified with the subspace ``V``.  An :class:`Extension` is a finite
union of such sets, kept in antichain normal form: no component is
contained in another, and zero-dimensional components are dropped because
the zero subspace contains no state.

Over the complex field a subspace contained in a finite union of subspaces
lies in one of them, so inclusion of extensions reduces to componentwise
subspace inclusion and is decided exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DimensionError, DomainError
from .subspace import (
    DEFAULT_TOL,
    Subspace,
    complement,
    full_space,
    includes,
    join,
    meet,
    zero_space,
)

__all__ = [
    "Extension",
    "StateRef",
    "normalize",
    "ext_union",
    "ext_intersect",
    "closure",
    "ext_complement",
    "contains_state",
    "ext_includes",
    "ext_equals",
    "is_closed",
]


@dataclass(frozen=True, eq=False)
class StateRef:
    """A pure state, represented by a unit vector (meaningful up to phase)."""

    vector: np.ndarray

    def __post_init__(self):
        v = np.array(self.vector, dtype=complex).reshape(-1)
        if not np.all(np.isfinite(v)):
            raise DomainError("state vector has non-finite entries")
        norm = np.linalg.norm(v)
        if abs(norm - 1.0) > 1e-6:
            raise DomainError(f"state vector must have unit norm, got {norm:.6g}")
        v = v / norm
        v.flags.writeable = False
        object.__setattr__(self, "vector", v)

    @classmethod
    def from_vector(cls, vector) -> StateRef:
        """Normalize ``vector`` and wrap it; rejects the zero vector."""
        v = np.asarray(vector, dtype=complex).reshape(-1)
        if not np.all(np.isfinite(v)):
            raise DomainError("state vector has non-finite entries")
        norm = np.linalg.norm(v)
        if norm == 0:
            raise DomainError("the zero vector is not a state")
        return cls(v / norm)

    @property
    def dim(self) -> int:
        return self.vector.shape[0]

    def __repr__(self):
        entries = ", ".join(f"{z.real:.4g}{z.imag:+.4g}j" for z in self.vector)
        return f"StateRef([{entries}])"


@dataclass(frozen=True, eq=False)
class Extension:
    """Union of closed state sets; build with :func:`normalize`."""

    components: tuple[Subspace, ...]
    ambient_dim: int

    @property
    def is_empty(self) -> bool:
        return not self.components

    @property
    def dims(self) -> list[int]:
        return [c.dim for c in self.components]

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __repr__(self):
        if self.is_empty:
            return f"<Extension empty in C^{self.ambient_dim}>"
        return f"<Extension dims {self.dims} in C^{self.ambient_dim}>"

    @classmethod
    def empty(cls, d: int) -> Extension:
        return cls((), d)

    @classmethod
    def of(cls, v: Subspace, tol: float = DEFAULT_TOL) -> Extension:
        return normalize([v], d=v.ambient_dim, tol=tol)


def normalize(components: Iterable[Subspace], d: int | None = None,
              tol: float = DEFAULT_TOL) -> Extension:
    """Antichain normal form of a union of subspaces.

    Drops zero components, duplicates and components included in another;
    the survivors are sorted by dimension and then projector entries so
    equal extensions normalize to the same sequence.
    """
    comps = list(components)
    if d is None:
        if not comps:
            raise DimensionError("ambient dimension needed for an empty extension")
        d = comps[0].ambient_dim
    for c in comps:
        if c.ambient_dim != d:
            raise DimensionError(f"component in C^{c.ambient_dim}, expected C^{d}")
    # larger components first so that a component is only compared with
    # possible supersets already kept
    comps = sorted((c for c in comps if not c.is_zero), key=lambda c: -c.dim)
    kept: list[Subspace] = []
    for c in comps:
        if not any(includes(k, c, tol) for k in kept):
            kept.append(c)
    kept.sort(key=lambda c: c.sort_key())
    return Extension(tuple(kept), d)


def _check_pair(t1: Extension, t2: Extension) -> int:
    if t1.ambient_dim != t2.ambient_dim:
        raise DimensionError(
            f"extensions live in C^{t1.ambient_dim} and C^{t2.ambient_dim}"
        )
    return t1.ambient_dim


def ext_union(t1: Extension, t2: Extension, tol: float = DEFAULT_TOL) -> Extension:
    d = _check_pair(t1, t2)
    return normalize(t1.components + t2.components, d=d, tol=tol)


def ext_intersect(t1: Extension, t2: Extension, tol: float = DEFAULT_TOL) -> Extension:
    # intersection distributes over the unions; each pairwise meet is closed
    d = _check_pair(t1, t2)
    return normalize(
        [meet(v, w, tol) for v in t1.components for w in t2.components], d=d, tol=tol
    )


def closure(t: Extension, tol: float = DEFAULT_TOL) -> Subspace:
    """Least closed subspace containing every state of ``t``."""
    result = zero_space(t.ambient_dim)
    for c in t.components:
        result = join(result, c, tol)
    return result


def ext_complement(t: Extension, tol: float = DEFAULT_TOL) -> Extension:
    if t.is_empty:
        return Extension((full_space(t.ambient_dim),), t.ambient_dim)
    return normalize([complement(closure(t, tol), tol)], d=t.ambient_dim, tol=tol)


def contains_state(t: Extension, s: StateRef, tol: float = DEFAULT_TOL) -> bool:
    if s.dim != t.ambient_dim:
        raise DimensionError(f"state in C^{s.dim}, extension in C^{t.ambient_dim}")
    return any(c.residual(s.vector) <= tol for c in t.components)


def ext_includes(t1: Extension, t2: Extension, tol: float = DEFAULT_TOL) -> bool:
    """True iff every state of ``t2`` is a state of ``t1``."""
    _check_pair(t1, t2)
    return all(any(includes(v, w, tol) for v in t1.components) for w in t2.components)


def ext_equals(t1: Extension, t2: Extension, tol: float = DEFAULT_TOL) -> bool:
    return ext_includes(t1, t2, tol) and ext_includes(t2, t1, tol)


def is_closed(t: Extension) -> bool:
    """True iff ``t`` is the state set of a single closed subspace (or empty)."""
    return len(t.components) <= 1
