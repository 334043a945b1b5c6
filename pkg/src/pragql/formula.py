"""Assertive formulas: AST, parser, printer and derived connectives.

Grammar (binary connectives are always parenthesized, no precedence)::

    af  := "|-" IDENT "(x)"
         | "N" af
         | "(" af OP af ")"
    OP  := "K" | "A" | "Aq" | "Iq"

``Aq`` (quantum disjunction) and ``Iq`` (quantum implication) are surface
syntax only; the parser expands them into ``N``/``K`` trees, so every AST
is built from :class:`Assert`, :class:`Not`, :class:`And` and :class:`Or`.
``⊢`` is accepted as a synonym for ``|-``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Union

from .errors import FormulaSyntaxError

__all__ = [
    "Assert",
    "Not",
    "And",
    "Or",
    "Slot",
    "Formula",
    "parse",
    "to_text",
    "desugar_aq",
    "desugar_iq",
    "in_phi_ad",
    "depth",
    "property_names",
    "substitute",
    "enumerate_formulas",
    "MAX_ENUM_DEPTH",
]

MAX_ENUM_DEPTH = 6


class _Node:
    # formulas are used as memo keys; cache the recursive hash per node
    def __hash__(self):
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = hash((type(self).__name__,) + tuple(getattr(self, f) for f in self.__dataclass_fields__))
            object.__setattr__(self, "_hash", h)
            return h


@dataclass(frozen=True)
class Assert(_Node):
    name: str

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Not(_Node):
    arg: "Formula"

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class And(_Node):
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Or(_Node):
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Slot(_Node):
    """Metavariable placeholder, only used by axiom templates."""

    index: int

    def __str__(self):
        return to_text(self)


Formula = Union[Assert, Not, And, Or, Slot]

# dataclass() installs its own uncached __hash__; put the cached one back
for _cls in (Assert, Not, And, Or, Slot):
    _cls.__hash__ = _Node.__hash__


def desugar_aq(d1: Formula, d2: Formula) -> Formula:
    """``d1 Aq d2`` is ``N((N d1) K (N d2))``."""
    return Not(And(Not(d1), Not(d2)))


def desugar_iq(d1: Formula, d2: Formula) -> Formula:
    """``d1 Iq d2`` is ``(N d1) Aq (d1 K d2)``, i.e. ``N((N N d1) K (N (d1 K d2)))``."""
    return desugar_aq(Not(d1), And(d1, d2))


def to_text(f: Formula) -> str:
    if isinstance(f, Assert):
        return f"|-{f.name}(x)"
    if isinstance(f, Not):
        return f"N {to_text(f.arg)}"
    if isinstance(f, And):
        return f"({to_text(f.left)} K {to_text(f.right)})"
    if isinstance(f, Or):
        return f"({to_text(f.left)} A {to_text(f.right)})"
    if isinstance(f, Slot):
        return f"${f.index}"
    raise TypeError(f"not a formula: {f!r}")


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_+\-]*")
_SLOT = re.compile(r"\$([0-9]+)")
_BINARY = ("Aq", "Iq", "K", "A")


class _Parser:
    def __init__(self, text: str, allow_slots: bool):
        self.text = text
        self.pos = 0
        self.allow_slots = allow_slots

    def error(self, message):
        raise FormulaSyntaxError(message, self.text, self.pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, token: str) -> bool:
        self.skip()
        return self.text.startswith(token, self.pos)

    def expect(self, token: str):
        if not self.peek(token):
            self.error(f"expected {token!r}")
        self.pos += len(token)

    def formula(self) -> Formula:
        self.skip()
        if self.peek("|-") or self.peek("⊢"):
            self.pos += 2 if self.text.startswith("|-", self.pos) else 1
            m = _IDENT.match(self.text, self.pos)
            if not m:
                self.error("expected a property name")
            # an identifier may legally end in '-', but then "(x)" must follow
            self.pos = m.end()
            self.expect("(x)")
            return Assert(m.group(0))
        if self.peek("$"):
            m = _SLOT.match(self.text, self.pos)
            if not self.allow_slots or not m:
                self.error("unexpected '$'")
            self.pos = m.end()
            return Slot(int(m.group(1)))
        if self.peek("("):
            self.pos += 1
            left = self.formula()
            self.skip()
            op = next((o for o in _BINARY if self.text.startswith(o, self.pos)), None)
            if op is None:
                m = re.compile(r"\S+").match(self.text, self.pos)
                self.error(f"unknown connective {m.group(0)!r}" if m else "expected a connective")
            self.pos += len(op)
            right = self.formula()
            self.expect(")")
            if op == "K":
                return And(left, right)
            if op == "A":
                return Or(left, right)
            if op == "Aq":
                return desugar_aq(left, right)
            return desugar_iq(left, right)
        if self.peek("N"):
            self.pos += 1
            return Not(self.formula())
        if self.pos >= len(self.text):
            self.error("unexpected end of input")
        self.error(f"unexpected character {self.text[self.pos]!r}")


def parse(text: str, allow_slots: bool = False) -> Formula:
    """Parse formula text into an AST (with ``Aq``/``Iq`` expanded)."""
    p = _Parser(text, allow_slots)
    f = p.formula()
    p.skip()
    if p.pos != len(text):
        p.error("trailing input")
    return f


def in_phi_ad(f: Formula) -> bool:
    """True iff the pragmatic disjunction ``A`` does not occur in ``f``."""
    if isinstance(f, (Assert, Slot)):
        return True
    if isinstance(f, Not):
        return in_phi_ad(f.arg)
    if isinstance(f, And):
        return in_phi_ad(f.left) and in_phi_ad(f.right)
    return False


def depth(f: Formula) -> int:
    """Connective nesting depth; elementary formulas have depth 0."""
    if isinstance(f, (Assert, Slot)):
        return 0
    if isinstance(f, Not):
        return 1 + depth(f.arg)
    return 1 + max(depth(f.left), depth(f.right))


def property_names(f: Formula) -> set[str]:
    if isinstance(f, Assert):
        return {f.name}
    if isinstance(f, Slot):
        return set()
    if isinstance(f, Not):
        return property_names(f.arg)
    return property_names(f.left) | property_names(f.right)


def substitute(f: Formula, args) -> Formula:
    """Replace ``Slot(i)`` by ``args[i - 1]``."""
    if isinstance(f, Slot):
        return args[f.index - 1]
    if isinstance(f, Assert):
        return f
    if isinstance(f, Not):
        return Not(substitute(f.arg, args))
    return type(f)(substitute(f.left, args), substitute(f.right, args))


def _levels(names, max_depth: int, binary) -> Iterator[list[Formula]]:
    seen: set[Formula] = set()
    current = []
    for n in names:
        a = Assert(n)
        if a not in seen:
            seen.add(a)
            current.append(a)
    yield list(current)
    for _ in range(max_depth):
        new = []
        for f in current:
            g = Not(f)
            if g not in seen:
                seen.add(g)
                new.append(g)
        for ctor in binary:
            for l, r in itertools.product(current, repeat=2):
                g = ctor(l, r)
                if g not in seen:
                    seen.add(g)
                    new.append(g)
        current = current + new
        yield new


def enumerate_formulas(properties, max_depth: int, fragment: str = "full",
                       limit: int | None = None) -> list[Formula]:
    """All formulas of connective depth at most ``max_depth``.

    ``fragment`` is ``"full"`` or ``"phi_AD"`` (no ``A``).  The result is
    ordered by depth and then by construction order, without duplicates.
    The count grows doubly exponentially; ``limit`` raises ``ValueError``
    before an oversized level is built.
    """
    if fragment not in ("full", "phi_AD"):
        raise ValueError(f"unknown fragment {fragment!r}")
    if not 0 <= max_depth <= MAX_ENUM_DEPTH:
        raise ValueError(f"max_depth must be in 0..{MAX_ENUM_DEPTH}, got {max_depth}")
    binary = (And,) if fragment == "phi_AD" else (And, Or)
    if limit is not None:
        n = len(set(properties))
        for _ in range(max_depth):
            n = 2 * n + len(binary) * n * n
            if n > limit:
                raise ValueError(
                    f"enumeration would exceed {limit} formulas; lower the depth or the property count"
                )
    out: list[Formula] = []
    for level in _levels(properties, max_depth, binary):
        out.extend(level)
    return out
