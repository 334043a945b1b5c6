"""Property models: a finite registry of named properties as closed subspaces.

A model fixes an ambient dimension ``d`` and maps property names to
subspaces of C^d.  Distinct names must map to distinct subspaces.  The
extension of a property is the set of states whose ray lies in its
subspace; relative to a given state every property is either actual
(ray inside the subspace), nonactual (ray inside the orthocomplement) or
potential (neither).

Model files are JSON::

    {"dim": 2, "tolerance": 1e-9,
     "properties": {"Ez+": [[[1, 0], [0, 0]]], "O": []}}

Each property is a list of spanning vectors, each vector a list of
``[re, im]`` pairs.  Vectors are orthonormalized on load.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from .errors import DimensionError, DomainError, ModelError, UnknownPropertyError
from .extension import Extension, StateRef
from .subspace import (
    DEFAULT_TOL,
    Subspace,
    check_tolerance,
    complement,
    equals,
    full_space,
    orthonormalize,
    random_subspace,
    span,
    zero_space,
)

__all__ = [
    "PropertyModel",
    "StateClassification",
    "property_extension",
    "classify",
    "support",
    "load_model",
    "model_from_dict",
    "model_to_dict",
    "standard_model",
    "random_model",
]


@dataclass(frozen=True)
class StateClassification:
    actual: frozenset[str]
    nonactual: frozenset[str]
    potential: frozenset[str]

    def status(self, name: str) -> str:
        if name in self.actual:
            return "actual"
        if name in self.nonactual:
            return "nonactual"
        if name in self.potential:
            return "potential"
        raise UnknownPropertyError(f"unknown property {name!r}")


@dataclass(frozen=True, eq=False)
class PropertyModel:
    dim: int
    properties: Mapping[str, Subspace]
    tolerance: float = DEFAULT_TOL
    name: str = field(default="model", compare=False)

    def __post_init__(self):
        check_tolerance(self.tolerance)
        props = dict(self.properties)
        for key, sub in props.items():
            if not isinstance(key, str) or not key:
                raise ModelError(f"bad property name {key!r}")
            if sub.ambient_dim != self.dim:
                raise ModelError(
                    f"property {key!r} lives in C^{sub.ambient_dim}, model is C^{self.dim}"
                )
        names = list(props)
        for i, a in enumerate(names):
            for b in names[i + 1:]:
                if equals(props[a], props[b], self.tolerance):
                    raise ModelError(f"properties {a!r} and {b!r} have the same subspace")
        object.__setattr__(self, "properties", props)

    @property
    def names(self) -> list[str]:
        return list(self.properties)

    def subspace(self, name: str) -> Subspace:
        try:
            return self.properties[name]
        except KeyError:
            raise UnknownPropertyError(f"unknown property {name!r}") from None

    def ray_state(self, name: str) -> StateRef:
        """The state whose ray is the one-dimensional property ``name``."""
        sub = self.subspace(name)
        if sub.dim != 1:
            raise ModelError(f"property {name!r} is not an atom (dim {sub.dim})")
        return StateRef(sub.basis[:, 0])

    def atoms(self) -> list[str]:
        return [n for n, s in self.properties.items() if s.dim == 1]

    def __repr__(self):
        return f"<PropertyModel {self.name!r} C^{self.dim} with {len(self.properties)} properties>"


def property_extension(m: PropertyModel, name: str) -> Extension:
    return Extension.of(m.subspace(name), m.tolerance)


def classify(m: PropertyModel, s: StateRef) -> StateClassification:
    if s.dim != m.dim:
        raise DimensionError(f"state in C^{s.dim}, model is C^{m.dim}")
    actual, nonactual, potential = set(), set(), set()
    for name, sub in m.properties.items():
        r = sub.residual(s.vector)
        if r <= m.tolerance:
            actual.add(name)
        elif np.linalg.norm(sub.projector @ s.vector) <= m.tolerance:
            nonactual.add(name)
        else:
            potential.add(name)
    return StateClassification(frozenset(actual), frozenset(nonactual), frozenset(potential))


def support(m: PropertyModel, s: StateRef) -> Subspace:
    """The atom spanned by the state's vector."""
    if s.dim != m.dim:
        raise DimensionError(f"state in C^{s.dim}, model is C^{m.dim}")
    return span(s.vector, tol=m.tolerance)


def _parse_vector(raw, d: int, where: str) -> np.ndarray:
    if not isinstance(raw, list) or len(raw) != d:
        raise ModelError(f"{where}: expected {d} entries")
    out = []
    for entry in raw:
        if isinstance(entry, (int, float)):
            re_, im_ = entry, 0.0
        elif isinstance(entry, list) and len(entry) == 2:
            re_, im_ = entry
        else:
            raise ModelError(f"{where}: entries must be [re, im] pairs")
        try:
            z = complex(float(re_), float(im_))
        except (TypeError, ValueError):
            raise ModelError(f"{where}: non-numeric entry {entry!r}") from None
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise ModelError(f"{where}: non-finite entry")
        out.append(z)
    return np.array(out)


def model_from_dict(data: Mapping, name: str = "model") -> PropertyModel:
    if not isinstance(data, Mapping):
        raise ModelError("model must be a JSON object")
    try:
        d = int(data["dim"])
        props = data["properties"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelError(f"model needs 'dim' and 'properties': {exc}") from None
    tol = data.get("tolerance", DEFAULT_TOL)
    try:
        tol = check_tolerance(tol)
    except (DomainError, TypeError, ValueError) as exc:
        raise ModelError(str(exc)) from None
    if not isinstance(props, Mapping):
        raise ModelError("'properties' must be an object")
    subspaces = {}
    for key, vectors in props.items():
        if not isinstance(vectors, list):
            raise ModelError(f"property {key!r}: expected a list of vectors")
        vecs = [_parse_vector(v, d, f"property {key!r}") for v in vectors]
        if vecs and all(np.linalg.norm(v) == 0 for v in vecs):
            raise ModelError(f"property {key!r}: only zero vectors given")
        try:
            subspaces[key] = orthonormalize(vecs, d=d, tol=tol)
        except (DimensionError, DomainError) as exc:
            raise ModelError(f"property {key!r}: {exc}") from None
    return PropertyModel(d, subspaces, tol, name=data.get("name", name))


def _pairs_hook(pairs):
    keys = [k for k, _ in pairs]
    dupes = {k for k in keys if keys.count(k) > 1}
    if dupes:
        raise ModelError(f"duplicate keys {sorted(dupes)}")
    return dict(pairs)


def load_model(path) -> PropertyModel:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"), object_pairs_hook=_pairs_hook)
    except OSError as exc:
        raise ModelError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ModelError(f"malformed JSON in {path}: {exc}") from None
    return model_from_dict(data, name=path.stem)


def model_to_dict(m: PropertyModel) -> dict:
    def vec(v):
        return [[float(z.real), float(z.imag)] for z in v]

    return {
        "dim": m.dim,
        "tolerance": m.tolerance,
        "properties": {
            name: [vec(sub.basis[:, j]) for j in range(sub.dim)]
            for name, sub in m.properties.items()
        },
    }


_R = 1 / math.sqrt(2)


def standard_model(name: str) -> PropertyModel:
    """Built-in fixtures: ``"qubit"`` (six spin rays) and ``"qutrit"`` (axes and planes).

    Both include ``O`` (the zero subspace) and ``I`` (the whole space).
    """
    if name == "qubit":
        rays = {
            "Ez+": [1, 0],
            "Ez-": [0, 1],
            "Ex+": [_R, _R],
            "Ex-": [_R, -_R],
            "Ey+": [_R, 1j * _R],
            "Ey-": [_R, -1j * _R],
        }
        props = {k: span(v) for k, v in rays.items()}
        props["O"] = zero_space(2)
        props["I"] = full_space(2)
        return PropertyModel(2, props, name="qubit")
    if name == "qutrit":
        e = np.eye(3)
        props = {
            "X1": span(e[0]),
            "X2": span(e[1]),
            "X3": span(e[2]),
            "P12": span(e[0], e[1]),
            "P13": span(e[0], e[2]),
            "P23": span(e[1], e[2]),
            "O": zero_space(3),
            "I": full_space(3),
        }
        return PropertyModel(3, props, name="qutrit")
    raise ModelError(f"unknown standard model {name!r}")


def random_model(d: int, count: int, seed=0) -> PropertyModel:
    """``count`` random proper subspaces of C^d (dimensions 1..d-1), their
    complements, plus ``O`` and ``I``."""
    rng = np.random.default_rng(seed)
    props = {"O": zero_space(d), "I": full_space(d)}
    for i in range(count):
        k = int(rng.integers(1, d)) if d > 1 else 1
        sub = random_subspace(d, k, rng)
        props[f"R{i}"] = sub
        props[f"R{i}c"] = complement(sub)
    return PropertyModel(d, props, name=f"random-d{d}-s{seed}")

