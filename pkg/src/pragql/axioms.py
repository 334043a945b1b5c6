"""Axiom schemata for the A-free fragment and counterexample searches.

Each schema is a formula template over slots ``$1``..``$3`` written with
``N``, ``K``, ``Aq`` and ``Iq``.  An instance is *valid* when its extension
is the whole state set.

Besides checking each instance as a formula, :func:`verify_axioms` also
records the rule reading of schemata of the form ``P Iq C``: whenever the
premise ``P`` is valid, the conclusion ``C`` must be valid.  The two
readings differ for A7, A8 and A9: the Sasaki hook is neither transitive
nor contrapositive as a formula in a non-distributive lattice, so those
instances can fail while the corresponding rules hold.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .extension import StateRef, closure, contains_state
from .formula import (
    And,
    Assert,
    Formula,
    Not,
    Or,
    desugar_aq,
    in_phi_ad,
    parse,
    substitute,
    to_text,
)
from .model import PropertyModel, model_to_dict
from .pragmatics import evaluate, J, U, decide, p_valid, pragmatic_extension
from .subspace import complement, includes, join, random_state_vector

__all__ = [
    "AxiomSchema",
    "SCHEMATA",
    "DISTRIBUTIVITY",
    "instantiate",
    "default_pool",
    "SchemaResult",
    "verify_axioms",
    "total_failures",
    "CounterexampleReport",
    "find_tertium_counterexample",
    "find_nonclosed_disjunction",
    "find_distributivity_counterexample",
]


@dataclass(frozen=True)
class AxiomSchema:
    id: str
    arity: int
    source: str
    template: Formula = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "template", parse(self.source, allow_slots=True))


SCHEMATA = (
    AxiomSchema("A1", 1, "($1 Iq $1)"),
    AxiomSchema("A2", 2, "(($1 K $2) Iq $1)"),
    AxiomSchema("A3", 2, "(($1 K $2) Iq $2)"),
    AxiomSchema("A4", 1, "($1 Iq N N $1)"),
    AxiomSchema("A5", 1, "(N N $1 Iq $1)"),
    AxiomSchema("A6", 3, "((($1 Iq $2) K ($1 Iq $3)) Iq ($1 Iq ($2 K $3)))"),
    AxiomSchema("A7", 3, "((($1 Iq $2) K ($2 Iq $3)) Iq ($1 Iq $3))"),
    AxiomSchema("A8", 2, "(($1 Iq $2) Iq (N $2 Iq N $1))"),
    AxiomSchema("A9", 2, "(($1 Iq $2) Iq ($2 Iq ($1 Aq (N $1 K $2))))"),
)

#: Classical distributive law; must fail in any non-Boolean model.
DISTRIBUTIVITY = AxiomSchema(
    "DIST", 3, "(($1 K ($2 Aq $3)) Iq (($1 K $2) Aq ($1 K $3)))"
)

_BY_ID = {s.id: s for s in SCHEMATA + (DISTRIBUTIVITY,)}


def schema(schema_id: str) -> AxiomSchema:
    return _BY_ID[schema_id]


def instantiate(s: AxiomSchema | str, args) -> Formula:
    if isinstance(s, str):
        s = schema(s)
    args = list(args)
    if len(args) != s.arity:
        raise ValueError(f"{s.id} takes {s.arity} arguments, got {len(args)}")
    for a in args:
        if not in_phi_ad(a):
            raise ValueError(f"argument outside the A-free fragment: {to_text(a)}")
    return substitute(s.template, args)


def _split_implication(f: Formula):
    """Inverse of :func:`desugar_iq`: ``(P, C)`` if ``f`` is ``P Iq C``."""
    if (
        isinstance(f, Not)
        and isinstance(f.arg, And)
        and isinstance(f.arg.left, Not)
        and isinstance(f.arg.left.arg, Not)
        and isinstance(f.arg.right, Not)
        and isinstance(f.arg.right.arg, And)
    ):
        p = f.arg.left.arg.arg
        if f.arg.right.arg.left == p:
            return p, f.arg.right.arg.right
    return None


def default_pool(m: PropertyModel) -> list[Formula]:
    """Elementary formulas of the registry and their negations."""
    base = [Assert(n) for n in m.names]
    return base + [Not(a) for a in base]


@dataclass
class SchemaResult:
    schema_id: str
    instances_checked: int = 0
    failures: list = field(default_factory=list)
    failure_count: int = 0
    premise_valid: int = 0
    rule_failures: int = 0

    def to_dict(self) -> dict:
        return {
            "schema_id": self.schema_id,
            "instances_checked": self.instances_checked,
            "failure_count": self.failure_count,
            "failures": self.failures,
            "rule_instances": self.premise_valid,
            "rule_failures": self.rule_failures,
        }


def verify_axioms(m: PropertyModel, pool=None, trials: int = 200, seed=0,
                  schemata=SCHEMATA, max_failures: int = 10) -> list[SchemaResult]:
    """Check ``trials`` random instances of every schema for validity.

    Argument tuples are drawn with replacement from ``pool`` (default
    :func:`default_pool`) using a generator seeded with ``seed``; each
    schema draws from its own stream so results do not depend on which
    schemata are selected.  At most ``max_failures`` failing instances are
    kept per schema; all are counted.
    """
    pool = default_pool(m) if pool is None else list(pool)
    cache: dict = {}
    results = []
    for s in schemata:
        stream = int(s.id[1:]) if s.id[1:].isdigit() else 0
        rng = np.random.default_rng([int(seed), stream])
        res = SchemaResult(s.id)
        for _ in range(trials):
            idx = rng.integers(0, len(pool), size=s.arity)
            args = [pool[i] for i in idx]
            inst = instantiate(s, args)
            res.instances_checked += 1
            ok = p_valid(m, inst, cache)
            if not ok:
                res.failure_count += 1
                if len(res.failures) < max_failures:
                    res.failures.append({
                        "args": [to_text(a) for a in args],
                        "instance": to_text(inst),
                        "extension_dims": pragmatic_extension(m, inst, cache).dims,
                    })
            split = _split_implication(inst)
            if split is not None and p_valid(m, split[0], cache):
                res.premise_valid += 1
                if not p_valid(m, split[1], cache):
                    res.rule_failures += 1
        results.append(res)
    return results


def total_failures(results) -> int:
    return sum(r.failure_count for r in results)


def _vec(v) -> list:
    return [[round(float(z.real), 12), round(float(z.imag), 12)] for z in v]


@dataclass
class CounterexampleReport:
    kind: str
    model: PropertyModel
    witnesses: dict
    residuals: dict
    found: bool = True

    def replay(self) -> bool:
        """Re-run the witness and confirm the violation still occurs."""
        if not self.found:
            return False
        m = self.model
        if self.kind == "tertium_non_datur":
            s = StateRef.from_vector(self.witnesses["state"])
            f = Assert(self.witnesses["property"])
            return evaluate(m, f, s) is U and evaluate(m, Not(f), s) is U
        if self.kind == "non_closed_disjunction":
            d1 = parse(self.witnesses["left"])
            d2 = parse(self.witnesses["right"])
            s = StateRef.from_vector(self.witnesses["state"])
            return (
                not decide(m, Or(d1, d2)).decidable
                and evaluate(m, Or(d1, d2), s) is U
                and evaluate(m, desugar_aq(d1, d2), s) is J
            )
        if self.kind == "distributivity":
            inst = parse(self.witnesses["instance"])
            s = StateRef.from_vector(self.witnesses["state"])
            return not p_valid(m, inst) and evaluate(m, inst, s) is U
        raise ValueError(f"unknown counterexample kind {self.kind!r}")

    def to_dict(self) -> dict:
        w = {k: (_vec(v) if isinstance(v, np.ndarray) else v) for k, v in self.witnesses.items()}
        return {
            "kind": self.kind,
            "found": self.found,
            "model": model_to_dict(self.model),
            "witnesses": w,
            "residuals": {k: round(float(v), 12) for k, v in self.residuals.items()},
        }


def _candidate_states(m: PropertyModel, seed, random_count: int):
    for n in m.atoms():
        yield n, m.ray_state(n)
    rng = np.random.default_rng(seed)
    for i in range(random_count):
        yield f"random-{i}", StateRef(random_state_vector(m.dim, rng))


def find_tertium_counterexample(m: PropertyModel, seed=0, random_count: int = 20) -> CounterexampleReport:
    """Search for a property and state where neither ``|-E`` nor ``N |-E`` is justified."""
    for name in m.names:
        sub = m.subspace(name)
        for label, s in _candidate_states(m, seed, random_count):
            if evaluate(m, Assert(name), s) is U and evaluate(m, Not(Assert(name)), s) is U:
                return CounterexampleReport(
                    "tertium_non_datur", m,
                    {"property": name, "state_label": label, "state": s.vector},
                    {
                        "distance_to_property": sub.residual(s.vector),
                        "distance_to_complement": complement(sub, m.tolerance).residual(s.vector),
                    },
                )
    return CounterexampleReport("tertium_non_datur", m, {}, {}, found=False)


def _mixtures(u, v):
    for c in (1.0, -1.0, 1j, -1j):
        yield u + c * v


def find_nonclosed_disjunction(m: PropertyModel, seed=0) -> CounterexampleReport:
    """Search for incomparable properties ``E, F`` and a state in their join
    lying in neither: there ``(|-E A |-F)`` is U while ``(|-E Aq |-F)`` is J."""
    tol = m.tolerance
    rng = np.random.default_rng(seed)
    names = m.names
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            va, vb = m.subspace(a), m.subspace(b)
            if includes(va, vb, tol) or includes(vb, va, tol):
                continue
            d1, d2 = Assert(a), Assert(b)
            if decide(m, Or(d1, d2)).decidable:
                continue
            whole = join(va, vb, tol)
            candidates = [w for x in va.basis.T for y in vb.basis.T for w in _mixtures(x, y)]
            candidates += [whole.basis @ (rng.normal(size=whole.dim) + 1j * rng.normal(size=whole.dim))
                           for _ in range(10)]
            for w in candidates:
                if np.linalg.norm(w) < 1e-6:
                    continue
                s = StateRef.from_vector(w)
                if evaluate(m, Or(d1, d2), s) is U and evaluate(m, desugar_aq(d1, d2), s) is J:
                    return CounterexampleReport(
                        "non_closed_disjunction", m,
                        {"left": to_text(d1), "right": to_text(d2), "state": s.vector},
                        {
                            "distance_to_left": va.residual(s.vector),
                            "distance_to_right": vb.residual(s.vector),
                            "distance_to_join": whole.residual(s.vector),
                        },
                    )
    return CounterexampleReport("non_closed_disjunction", m, {}, {}, found=False)


def find_distributivity_counterexample(m: PropertyModel, pool=None) -> CounterexampleReport:
    """Sweep argument triples of the distributive law for an invalid instance."""
    pool = default_pool(m) if pool is None else list(pool)
    cache: dict = {}
    for a in pool:
        for b in pool:
            for c in pool:
                inst = instantiate(DISTRIBUTIVITY, (a, b, c))
                if p_valid(m, inst, cache):
                    continue
                ext = pragmatic_extension(m, inst, cache)
                hole = complement(closure(ext, m.tolerance), m.tolerance)
                s = StateRef.from_vector(hole.basis[:, 0])
                if contains_state(ext, s, m.tolerance):
                    continue
                return CounterexampleReport(
                    "distributivity", m,
                    {"args": [to_text(x) for x in (a, b, c)], "instance": to_text(inst),
                     "state": s.vector},
                    {"extension_dim": float(closure(ext, m.tolerance).dim)},
                )
    return CounterexampleReport("distributivity", m, {}, {}, found=False)
