"""Quotient of A-free formulas by equal extensions, and its comparison with
the subspace lattice.

Formulas with the same extension form one class; classes are ordered by
inclusion of extensions.  :func:`check_isomorphism` verifies on a finite
universe that the map class -> subspace is injective, order-preserving in
both directions, and that ``N``, ``K`` and ``Aq`` act on classes as
orthocomplement, meet and join.

Lattice terms use the syntax ``E``, ``t⊥`` (or ``t'``), ``(t ⋒ u)`` /
``(t & u)`` and ``(t ⋓ u)`` / ``(t | u)``; a single top-level binary
operator may be written without parentheses.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import ConsistencyError, FormulaSyntaxError
from .extension import Extension, closure, ext_equals, ext_includes, is_closed
from .formula import And, Assert, Formula, Not, desugar_aq, in_phi_ad, to_text
from .model import PropertyModel
from .pragmatics import pragmatic_extension
from .subspace import Subspace, complement, equals, includes, join, meet

__all__ = [
    "Atom",
    "Perp",
    "Meet",
    "Join",
    "LatticeTerm",
    "parse_lattice_term",
    "lattice_term_text",
    "translate_lattice_term",
    "evaluate_lattice_term",
    "random_lattice_term",
    "EquivalenceClass",
    "QuotientLattice",
    "IsomorphismReport",
    "build_quotient",
    "check_isomorphism",
    "to_dot",
    "to_json_dict",
]


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Perp:
    arg: "LatticeTerm"


@dataclass(frozen=True)
class Meet:
    left: "LatticeTerm"
    right: "LatticeTerm"


@dataclass(frozen=True)
class Join:
    left: "LatticeTerm"
    right: "LatticeTerm"


LatticeTerm = Union[Atom, Perp, Meet, Join]

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_+\-]*")
_MEET_OPS = ("⋒", "&")
_JOIN_OPS = ("⋓", "|")
_PERP_OPS = ("⊥", "'")


class _TermParser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def error(self, msg):
        raise FormulaSyntaxError(msg, self.text, self.pos)

    def expr(self):
        left = self.postfix()
        self.skip()
        for ops, ctor in ((_MEET_OPS, Meet), (_JOIN_OPS, Join)):
            for op in ops:
                if self.text.startswith(op, self.pos):
                    self.pos += len(op)
                    return ctor(left, self.postfix())
        return left

    def postfix(self):
        t = self.primary()
        while True:
            self.skip()
            op = next((o for o in _PERP_OPS if self.text.startswith(o, self.pos)), None)
            if op is None:
                return t
            self.pos += len(op)
            t = Perp(t)

    def primary(self):
        self.skip()
        if self.text.startswith("(", self.pos):
            self.pos += 1
            t = self.expr()
            self.skip()
            if not self.text.startswith(")", self.pos):
                self.error("expected ')'")
            self.pos += 1
            return t
        m = _NAME.match(self.text, self.pos)
        if not m:
            self.error("expected a property name or '('")
        self.pos = m.end()
        return Atom(m.group(0))


def parse_lattice_term(text: str) -> LatticeTerm:
    p = _TermParser(text)
    t = p.expr()
    p.skip()
    if p.pos != len(text):
        p.error("trailing input")
    return t


def lattice_term_text(t: LatticeTerm) -> str:
    if isinstance(t, Atom):
        return t.name
    if isinstance(t, Perp):
        inner = lattice_term_text(t.arg)
        return f"{inner}⊥"
    op = "⋒" if isinstance(t, Meet) else "⋓"
    return f"({lattice_term_text(t.left)} {op} {lattice_term_text(t.right)})"


def translate_lattice_term(t: LatticeTerm) -> Formula:
    """Name -> ``|-name(x)``, ⊥ -> ``N``, ⋒ -> ``K``, ⋓ -> ``Aq``."""
    if isinstance(t, str):
        t = parse_lattice_term(t)
    if isinstance(t, Atom):
        return Assert(t.name)
    if isinstance(t, Perp):
        return Not(translate_lattice_term(t.arg))
    if isinstance(t, Meet):
        return And(translate_lattice_term(t.left), translate_lattice_term(t.right))
    if isinstance(t, Join):
        return desugar_aq(translate_lattice_term(t.left), translate_lattice_term(t.right))
    raise TypeError(f"not a lattice term: {t!r}")


def evaluate_lattice_term(m: PropertyModel, t: LatticeTerm) -> Subspace:
    """Value of ``t`` computed directly in the subspace lattice."""
    if isinstance(t, str):
        t = parse_lattice_term(t)
    tol = m.tolerance
    if isinstance(t, Atom):
        return m.subspace(t.name)
    if isinstance(t, Perp):
        return complement(evaluate_lattice_term(m, t.arg), tol)
    left = evaluate_lattice_term(m, t.left)
    right = evaluate_lattice_term(m, t.right)
    return meet(left, right, tol) if isinstance(t, Meet) else join(left, right, tol)


def random_lattice_term(names, depth: int, rng: np.random.Generator) -> LatticeTerm:
    if depth == 0 or rng.random() < 0.25:
        return Atom(names[int(rng.integers(len(names)))])
    r = rng.random()
    if r < 0.3:
        return Perp(random_lattice_term(names, depth - 1, rng))
    ctor = Meet if r < 0.65 else Join
    return ctor(random_lattice_term(names, depth - 1, rng), random_lattice_term(names, depth - 1, rng))


@dataclass(frozen=True, eq=False)
class EquivalenceClass:
    representative: Formula
    members: tuple[Formula, ...]
    extension: Extension
    subspace: Subspace
    elementary: tuple[str, ...]

    @property
    def dim(self) -> int:
        return self.subspace.dim


@dataclass(frozen=True, eq=False)
class QuotientLattice:
    model: PropertyModel
    classes: tuple[EquivalenceClass, ...]
    order: tuple[tuple[bool, ...], ...]

    def class_of(self, ext: Extension) -> int | None:
        for i, c in enumerate(self.classes):
            if ext_equals(c.extension, ext, self.model.tolerance):
                return i
        return None

    def covers(self) -> list[tuple[int, int]]:
        """Hasse edges (i, j): class i is directly below class j."""
        n = len(self.classes)
        out = []
        for i in range(n):
            for j in range(n):
                if i == j or not self.order[i][j]:
                    continue
                if not any(
                    k not in (i, j) and self.order[i][k] and self.order[k][j] for k in range(n)
                ):
                    out.append((i, j))
        return out


def build_quotient(m: PropertyModel, universe, adjoin_elementary: bool = False,
                   require_phi_ad: bool = True) -> QuotientLattice:
    """Group ``universe`` (A-free formulas) by extension and order the classes.

    With ``adjoin_elementary`` every registered ``|-E(x)`` is added first so
    that realized property classes get an elementary representative.
    ``require_phi_ad=False`` admits any formula whose extension is closed.
    """
    formulas = list(universe)
    for f in formulas if require_phi_ad else ():
        if not in_phi_ad(f):
            raise ValueError(f"formula outside the A-free fragment: {to_text(f)}")
    if adjoin_elementary:
        formulas = [Assert(n) for n in m.names] + formulas
    tol = m.tolerance
    cache: dict = {}
    groups: list[list[Formula]] = []
    keys: list[Extension] = []
    seen = set()
    for f in formulas:
        if f in seen:
            continue
        seen.add(f)
        ext = pragmatic_extension(m, f, cache)
        for i, k in enumerate(keys):
            if ext_equals(k, ext, tol):
                groups[i].append(f)
                break
        else:
            keys.append(ext)
            groups.append([f])
    classes = []
    for ext, members in zip(keys, groups):
        if not is_closed(ext):
            raise ConsistencyError("A-free formula with a non-closed extension")
        sub = closure(ext, tol)
        elementary = tuple(f.name for f in members if isinstance(f, Assert))
        rep = next((f for f in members if isinstance(f, Assert)), members[0])
        classes.append(EquivalenceClass(rep, tuple(members), ext, sub, elementary))
    # stable presentation: by dimension, then by representative text
    classes.sort(key=lambda c: (c.dim, to_text(c.representative)))
    order = tuple(
        tuple(ext_includes(cj.extension, ci.extension, tol) for cj in classes) for ci in classes
    )
    return QuotientLattice(m, tuple(classes), order)


@dataclass
class IsomorphismReport:
    well_defined: bool = True
    injective: bool = True
    order_preserving: bool = True
    order_reflecting: bool = True
    unique_elementary: bool = True
    complement_commutes: bool = True
    meet_commutes: bool = True
    join_commutes: bool = True
    problems: list = None

    def __post_init__(self):
        if self.problems is None:
            self.problems = []

    @property
    def passed(self) -> bool:
        return all(
            (self.well_defined, self.injective, self.order_preserving, self.order_reflecting,
             self.unique_elementary, self.complement_commutes, self.meet_commutes,
             self.join_commutes)
        )

    def __bool__(self):
        return self.passed

    def to_dict(self) -> dict:
        keys = ("well_defined", "injective", "order_preserving", "order_reflecting",
                "unique_elementary", "complement_commutes", "meet_commutes", "join_commutes")
        out = {k: getattr(self, k) for k in keys}
        out["passed"] = self.passed
        out["problems"] = list(self.problems)
        return out


def check_isomorphism(m: PropertyModel, q: QuotientLattice) -> IsomorphismReport:
    """Verify that classes correspond one-to-one and order-isomorphically to
    subspaces, and that the connectives act as the lattice operations."""
    tol = m.tolerance
    rep = IsomorphismReport()
    fresh: dict = {}
    members = {f for c in q.classes for f in c.members}
    adjoined = all(Assert(n) in members for n in m.names)
    for i, c in enumerate(q.classes):
        for f in c.members:
            if not equals(closure(pragmatic_extension(m, f, fresh), tol), c.subspace, tol):
                rep.well_defined = False
                rep.problems.append(f"class {i}: member {to_text(f)} has another extension")
        if len(c.elementary) > 1:
            rep.unique_elementary = False
            rep.problems.append(f"class {i}: several elementary members {list(c.elementary)}")
        registered = [n for n in m.names if equals(m.subspace(n), c.subspace, tol)]
        if adjoined and registered and list(c.elementary) != registered:
            rep.unique_elementary = False
            rep.problems.append(
                f"class {i}: elementary members {list(c.elementary)}, registry has {registered}"
            )
    n = len(q.classes)
    for i in range(n):
        for j in range(n):
            si, sj = q.classes[i].subspace, q.classes[j].subspace
            if i < j and equals(si, sj, tol):
                rep.injective = False
                rep.problems.append(f"classes {i} and {j} share a subspace")
            incl = includes(sj, si, tol)
            if q.order[i][j] and not incl:
                rep.order_preserving = False
                rep.problems.append(f"class {i} < {j} but subspaces not included")
            if incl and not q.order[i][j]:
                rep.order_reflecting = False
                rep.problems.append(f"subspace {i} <= {j} but classes unordered")
    cache: dict = {}
    reps = [c.representative for c in q.classes]
    for i, a in enumerate(reps):
        got = closure(pragmatic_extension(m, Not(a), cache), tol)
        if not equals(got, complement(q.classes[i].subspace, tol), tol):
            rep.complement_commutes = False
            rep.problems.append(f"N of class {i} is not the orthocomplement")
        for j, b in enumerate(reps):
            si, sj = q.classes[i].subspace, q.classes[j].subspace
            got = closure(pragmatic_extension(m, And(a, b), cache), tol)
            if not equals(got, meet(si, sj, tol), tol):
                rep.meet_commutes = False
                rep.problems.append(f"K of classes {i},{j} is not the meet")
            got = closure(pragmatic_extension(m, desugar_aq(a, b), cache), tol)
            if not equals(got, join(si, sj, tol), tol):
                rep.join_commutes = False
                rep.problems.append(f"Aq of classes {i},{j} is not the join")
    return rep


def _label(c: EquivalenceClass) -> str:
    return to_text(c.representative)


def to_dot(q: QuotientLattice, name: str = "quotient") -> str:
    lines = [f"digraph {json_quote(name)} {{", "  rankdir=BT;", "  node [shape=box];"]
    for i, c in enumerate(q.classes):
        label = f"{_label(c)}\\ndim {c.dim}, {len(c.members)} members"
        lines.append(f"  c{i} [label={json_quote(label)}];")
    for i, j in q.covers():
        lines.append(f"  c{i} -> c{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def json_quote(s: str) -> str:
    return '"' + s.replace('"', '\\"') + '"'


def to_json_dict(q: QuotientLattice) -> dict:
    n = len(q.classes)
    return {
        "classes": [
            {
                "representative": _label(c),
                "extension_dim": c.dim,
                "members_count": len(c.members),
                "elementary": list(c.elementary),
            }
            for c in q.classes
        ],
        "order_pairs": [[i, j] for i in range(n) for j in range(n) if i != j and q.order[i][j]],
    }
