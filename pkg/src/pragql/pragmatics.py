"""Set-theoretical pragmatics of assertive formulas.

Every formula ``d`` gets a pragmatic extension ``S_d`` (the set of states
at which asserting ``d`` is justified):

* ``|-E(x)``  -> the state set of the property ``E``
* ``N d``     -> orthocomplement of the closure of ``S_d``
* ``(d K e)`` -> ``S_d`` intersected with ``S_e``
* ``(d A e)`` -> ``S_d`` united with ``S_e``

A formula is justified (J) at a state iff the state lies in its extension,
unjustified (U) otherwise.  Validity, the preorder and decidability are
all read off extensions, so they are decided over every state of C^d
rather than by sampling.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping, MutableMapping

import numpy as np

from .errors import AssignmentError, ConsistencyError, DimensionError
from .extension import (
    Extension,
    StateRef,
    contains_state,
    ext_complement,
    ext_equals,
    ext_includes,
    ext_intersect,
    ext_union,
    is_closed,
)
from .formula import And, Assert, Formula, Not, Or, Slot, desugar_iq, in_phi_ad, to_text
from .model import PropertyModel, classify, property_extension

__all__ = [
    "JustificationValue",
    "J",
    "U",
    "pragmatic_extension",
    "evaluate",
    "p_valid",
    "p_invalid",
    "preorder",
    "equivalent",
    "TraceEntry",
    "DecidabilityReport",
    "decide",
    "pdl_check",
    "Assignment",
    "sample_assignments",
    "cc_check",
    "is_consistent",
]


class JustificationValue(enum.Enum):
    J = "J"
    U = "U"

    def __str__(self):
        return self.value


J = JustificationValue.J
U = JustificationValue.U

ExtensionCache = MutableMapping[Formula, Extension]


def pragmatic_extension(m: PropertyModel, f: Formula, cache: ExtensionCache | None = None) -> Extension:
    """The extension ``S_f``.  ``cache`` memoizes subformulas for one model."""
    if cache is not None:
        hit = cache.get(f)
        if hit is not None:
            return hit
    tol = m.tolerance
    if isinstance(f, Assert):
        result = property_extension(m, f.name)
    elif isinstance(f, Not):
        result = ext_complement(pragmatic_extension(m, f.arg, cache), tol)
    elif isinstance(f, And):
        result = ext_intersect(
            pragmatic_extension(m, f.left, cache), pragmatic_extension(m, f.right, cache), tol
        )
    elif isinstance(f, Or):
        result = ext_union(
            pragmatic_extension(m, f.left, cache), pragmatic_extension(m, f.right, cache), tol
        )
    elif isinstance(f, Slot):
        raise TypeError("cannot evaluate a template with unfilled slots")
    else:
        raise TypeError(f"not a formula: {f!r}")
    if cache is not None:
        cache[f] = result
    return result


def evaluate(m: PropertyModel, f: Formula, s: StateRef, cache: ExtensionCache | None = None) -> JustificationValue:
    if s.dim != m.dim:
        raise DimensionError(f"state in C^{s.dim}, model is C^{m.dim}")
    return J if contains_state(pragmatic_extension(m, f, cache), s, m.tolerance) else U


def p_valid(m: PropertyModel, f: Formula, cache: ExtensionCache | None = None) -> bool:
    """Justified at every state: some component is the whole space."""
    return any(c.is_full for c in pragmatic_extension(m, f, cache).components)


def p_invalid(m: PropertyModel, f: Formula, cache: ExtensionCache | None = None) -> bool:
    return pragmatic_extension(m, f, cache).is_empty


def preorder(m: PropertyModel, d1: Formula, d2: Formula, cache: ExtensionCache | None = None) -> bool:
    """``d1 < d2``: whenever ``d1`` is justified, so is ``d2``."""
    return ext_includes(
        pragmatic_extension(m, d2, cache), pragmatic_extension(m, d1, cache), m.tolerance
    )


def equivalent(m: PropertyModel, d1: Formula, d2: Formula, cache: ExtensionCache | None = None) -> bool:
    return ext_equals(
        pragmatic_extension(m, d1, cache), pragmatic_extension(m, d2, cache), m.tolerance
    )


@dataclass(frozen=True)
class TraceEntry:
    formula: str
    criterion: str | None
    decidable: bool
    note: str = ""


@dataclass(frozen=True)
class DecidabilityReport:
    decidable: bool
    witness_extension: Extension
    criterion_trace: tuple[TraceEntry, ...]

    def to_dict(self) -> dict:
        return {
            "decidable": self.decidable,
            "extension_dims": self.witness_extension.dims,
            "trace": [
                {"formula": t.formula, "criterion": t.criterion,
                 "decidable": t.decidable, "note": t.note}
                for t in self.criterion_trace
            ],
        }


def decide(m: PropertyModel, f: Formula, cache: ExtensionCache | None = None) -> DecidabilityReport:
    """Decidability of ``f`` (its extension is a single closed set), with the
    criterion applied at every node in post-order."""
    cache = {} if cache is None else cache
    trace: list[TraceEntry] = []
    tol = m.tolerance

    def walk(g: Formula) -> bool:
        ext = pragmatic_extension(m, g, cache)
        ok = is_closed(ext)
        text = to_text(g)
        if isinstance(g, Assert):
            trace.append(TraceEntry(text, "C1", ok, "elementary"))
        elif isinstance(g, Not):
            inner = walk(g.arg)
            if inner:
                trace.append(TraceEntry(text, "C2", ok, "complement of a closed set"))
            else:
                trace.append(TraceEntry(text, None, ok, "argument undecidable; complement is closed"))
        elif isinstance(g, And):
            a, b = walk(g.left), walk(g.right)
            if a and b:
                trace.append(TraceEntry(text, "C3", ok, "meet of closed sets"))
            else:
                trace.append(TraceEntry(text, None, ok, "an argument is undecidable"))
        elif isinstance(g, Or):
            a, b = walk(g.left), walk(g.right)
            if a and b:
                e1 = pragmatic_extension(m, g.left, cache)
                e2 = pragmatic_extension(m, g.right, cache)
                sub12 = ext_includes(e2, e1, tol)
                sub21 = ext_includes(e1, e2, tol)
                if sub12 and sub21:
                    note = "equal extensions"
                elif sub12:
                    note = "left included in right"
                elif sub21:
                    note = "right included in left"
                else:
                    note = "incomparable extensions"
                if ok != (sub12 or sub21):
                    raise ConsistencyError(f"C4 disagrees with closedness for {text}")
                trace.append(TraceEntry(text, "C4", ok, note))
            else:
                trace.append(TraceEntry(text, None, ok, "an argument is undecidable"))
        else:
            raise TypeError(f"not a formula: {g!r}")
        return ok

    decidable = walk(f)
    if in_phi_ad(f) and not decidable:
        raise ConsistencyError(f"A-free formula {to_text(f)} has a non-closed extension")
    return DecidabilityReport(decidable, pragmatic_extension(m, f, cache), tuple(trace))


def pdl_check(m: PropertyModel, d1: Formula, d2: Formula, cache: ExtensionCache | None = None) -> bool:
    """``d1 < d2``, cross-checked against validity of ``d1 Iq d2``."""
    if not (in_phi_ad(d1) and in_phi_ad(d2)):
        raise ValueError("the deduction lemma applies to A-free formulas only")
    ordered = preorder(m, d1, d2, cache)
    valid = p_valid(m, desugar_iq(d1, d2), cache)
    if ordered != valid:
        raise ConsistencyError(
            f"preorder={ordered} but validity of implication={valid} for "
            f"{to_text(d1)}, {to_text(d2)}"
        )
    return ordered


def is_consistent(m: PropertyModel, s: StateRef, values: Mapping[str, int]) -> bool:
    """Whether ``values`` is a QM-consistent assignment for a system in state ``s``."""
    cls = classify(m, s)
    if set(values) != set(m.names):
        return False
    return all(values[n] == 1 for n in cls.actual) and all(values[n] == 0 for n in cls.nonactual)


@dataclass(frozen=True, eq=False)
class Assignment:
    """Truth values of all registered properties for an object in ``state``.

    Actual properties must be 1 and nonactual ones 0; potential ones are free.
    """

    model: PropertyModel = field(repr=False)
    state: StateRef
    values: Mapping[str, int]

    def __post_init__(self):
        values = dict(self.values)
        if any(v not in (0, 1) for v in values.values()):
            raise AssignmentError("truth values must be 0 or 1")
        missing = set(self.model.names) - set(values)
        extra = set(values) - set(self.model.names)
        if missing or extra:
            raise AssignmentError(f"assignment domain mismatch: missing {sorted(missing)}, extra {sorted(extra)}")
        cls = classify(self.model, self.state)
        bad = sorted(n for n in cls.actual if values[n] != 1)
        bad += sorted(n for n in cls.nonactual if values[n] != 0)
        if bad:
            raise AssignmentError(f"assignment contradicts the state on {bad}")
        object.__setattr__(self, "values", values)


def sample_assignments(m: PropertyModel, s: StateRef, count: int, seed=0) -> list[Assignment]:
    """``count`` assignments for state ``s`` with fair coins on potential properties."""
    rng = np.random.default_rng(seed)
    cls = classify(m, s)
    free = sorted(cls.potential)
    out = []
    for _ in range(count):
        coins = rng.integers(0, 2, size=len(free))
        values = {n: 1 for n in cls.actual}
        values.update({n: 0 for n in cls.nonactual})
        values.update({n: int(c) for n, c in zip(free, coins)})
        out.append(Assignment(m, s, {n: values[n] for n in m.names}))
    return out


def cc_check(m: PropertyModel, s: StateRef, assignments) -> bool:
    """Justified elementary assertions are true under every assignment."""
    justified = [n for n in m.names if evaluate(m, Assert(n), s) is J]
    return all(a.values[n] == 1 for a in assignments for n in justified)
