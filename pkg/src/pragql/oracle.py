"""Brute-force, state-level justification evaluator used as a test oracle.

It shares nothing with the production path except the property bases of
the model.  Subspaces are plain projector matrices, intersections come
from the eigenvalue-2 eigenspace of ``P + Q`` and closures from the range
of a sum of projectors.  Conjunction and disjunction are evaluated
pointwise at the state; only negation needs the state set of its argument.
"""

from __future__ import annotations

import numpy as np

from .formula import And, Assert, Formula, Not, Or
from .model import PropertyModel

__all__ = ["StateLevelEvaluator"]

_EIG_TOL = 1e-8


def _range_projector(h: np.ndarray, threshold: float) -> np.ndarray:
    w, v = np.linalg.eigh(h)
    cols = v[:, w > threshold]
    return cols @ cols.conj().T


def _projector_from_basis(basis: np.ndarray) -> np.ndarray:
    d = basis.shape[0]
    if basis.shape[1] == 0:
        return np.zeros((d, d), complex)
    u, s, _ = np.linalg.svd(basis, full_matrices=False)
    u = u[:, s > _EIG_TOL]
    return u @ u.conj().T


class StateLevelEvaluator:
    def __init__(self, model: PropertyModel, tol: float | None = None):
        self.model = model
        self.d = model.dim
        self.tol = model.tolerance if tol is None else tol
        self._props = {
            n: _projector_from_basis(np.asarray(s.basis)) for n, s in model.properties.items()
        }
        self._sets: dict[Formula, list[np.ndarray]] = {}
        self._neg: dict[Formula, np.ndarray] = {}

    def _nonzero(self, p: np.ndarray) -> bool:
        return np.trace(p).real > 0.5

    def _meet(self, p: np.ndarray, q: np.ndarray) -> np.ndarray:
        return _range_projector(p + q, 2.0 - _EIG_TOL)

    def _closure(self, comps: list[np.ndarray]) -> np.ndarray:
        if not comps:
            return np.zeros((self.d, self.d), complex)
        return _range_projector(sum(comps), _EIG_TOL)

    def state_set(self, f: Formula) -> list[np.ndarray]:
        """Union of projectors whose rays make up the state set of ``f``."""
        if f in self._sets:
            return self._sets[f]
        if isinstance(f, Assert):
            p = self._props[f.name]
            out = [p] if self._nonzero(p) else []
        elif isinstance(f, Not):
            p = self._negation(f.arg)
            out = [p] if self._nonzero(p) else []
        elif isinstance(f, And):
            out = [
                r for p in self.state_set(f.left) for q in self.state_set(f.right)
                if self._nonzero(r := self._meet(p, q))
            ]
        elif isinstance(f, Or):
            out = self.state_set(f.left) + self.state_set(f.right)
        else:
            raise TypeError(f"not a formula: {f!r}")
        self._sets[f] = out
        return out

    def _negation(self, f: Formula) -> np.ndarray:
        if f not in self._neg:
            self._neg[f] = np.eye(self.d) - self._closure(self.state_set(f))
        return self._neg[f]

    def justified(self, f: Formula, vector: np.ndarray) -> bool:
        v = np.asarray(vector, complex)
        return bool(self.justified_many(f, v[:, None])[0])

    def justified_many(self, f: Formula, states: np.ndarray) -> np.ndarray:
        """Boolean mask over the columns of ``states`` (shape ``d x n``)."""
        v = np.asarray(states, complex)
        if isinstance(f, (Assert, Not)):
            p = self._props[f.name] if isinstance(f, Assert) else self._negation(f.arg)
            return np.linalg.norm(v - p @ v, axis=0) <= self.tol
        if isinstance(f, And):
            return self.justified_many(f.left, v) & self.justified_many(f.right, v)
        if isinstance(f, Or):
            return self.justified_many(f.left, v) | self.justified_many(f.right, v)
        raise TypeError(f"not a formula: {f!r}")
