"""Lattice expressions such as ``A2``, ``Z(3)+Z2`` or ``gram:[[2,1],[1,2]]``.

Grammar (whitespace is ignored)::

    expr := term ('+' term)*
    term := atom ('(' int ')')?
    atom := 'Z' int? | 'A' int | 'D' int | 'E' (6|7|8) | 'gram:' json-matrix
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .lattice import Lattice, LatticeError, direct_sum, make_lattice, named_lattice, rescale

__all__ = ["ExprSyntaxError", "UnknownLattice", "Atom", "Scaled", "Sum", "LatticeExpr",
           "parse_lattice_expr", "to_text", "evaluate"]


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownLattice(ValueError):
    pass


@dataclass(frozen=True)
class Atom:
    kind: str  # "Z", "A", "D", "E" or "gram"
    n: int | None = None
    gram: tuple[tuple[int, ...], ...] | None = None


@dataclass(frozen=True)
class Scaled:
    inner: Atom
    factor: int


@dataclass(frozen=True)
class Sum:
    terms: tuple


LatticeExpr = Atom | Scaled | Sum


class _Parser:
    def __init__(self, text: str):
        self.src = text
        # keep original offsets for error messages
        self.chars = [(i, c) for i, c in enumerate(text) if not c.isspace()]
        self.pos = 0

    def peek(self) -> str:
        return self.chars[self.pos][1] if self.pos < len(self.chars) else ""

    def where(self) -> int:
        return self.chars[self.pos][0] if self.pos < len(self.chars) else len(self.src)

    def take(self) -> str:
        c = self.peek()
        self.pos += 1
        return c

    def integer(self, what: str) -> int:
        start = self.where()
        digits = ""
        while self.peek().isdigit():
            digits += self.take()
        if not digits:
            raise ExprSyntaxError(f"expected {what}", start)
        return int(digits)

    def expr(self) -> LatticeExpr:
        if not self.chars:
            raise ExprSyntaxError("empty expression", 0)
        terms = [self.term()]
        while self.peek() == "+":
            self.take()
            terms.append(self.term())
        if self.pos < len(self.chars):
            raise ExprSyntaxError(f"unexpected {self.peek()!r}", self.where())
        return terms[0] if len(terms) == 1 else Sum(tuple(terms))

    def term(self) -> LatticeExpr:
        atom = self.atom()
        if self.peek() == "(":
            self.take()
            f = self.integer("scale factor")
            if self.peek() != ")":
                raise ExprSyntaxError("expected ')'", self.where())
            self.take()
            if f < 1:
                raise UnknownLattice("scale factor must be positive")
            return Scaled(atom, f)
        return atom

    def atom(self) -> Atom:
        start = self.where()
        c = self.take()
        if c == "Z":
            n = self.integer("rank") if self.peek().isdigit() else 1
            return Atom("Z", n)
        if c in ("A", "D", "E"):
            return Atom(c, self.integer("rank"))
        if c == "g":
            return self.gram(start)
        if not c:
            raise ExprSyntaxError("unexpected end of input", start)
        raise ExprSyntaxError(f"unexpected {c!r}", start)

    def gram(self, start: int) -> Atom:
        for want in "ram:":
            if self.take() != want:
                raise ExprSyntaxError("expected 'gram:'", start)
        if self.peek() != "[":
            raise ExprSyntaxError("expected '['", self.where())
        depth, text = 0, ""
        while True:
            c = self.take()
            if not c:
                raise ExprSyntaxError("unbalanced brackets", self.where())
            text += c
            depth += (c == "[") - (c == "]")
            if depth == 0:
                break
        try:
            rows = json.loads(text)
            gram = tuple(tuple(int(x) for x in r) for r in rows)
            if any(int(x) != x for r in rows for x in r):
                raise ValueError
        except (ValueError, TypeError) as exc:
            raise ExprSyntaxError("gram literal is not an integer matrix", start) from exc
        return Atom("gram", len(gram), gram)


def parse_lattice_expr(text: str) -> LatticeExpr:
    return _Parser(text).expr()


def to_text(e: LatticeExpr) -> str:
    """Canonical spelling; ``parse_lattice_expr(to_text(e)) == e``."""
    if isinstance(e, Sum):
        return "+".join(to_text(t) for t in e.terms)
    if isinstance(e, Scaled):
        return f"{to_text(e.inner)}({e.factor})"
    if e.kind == "gram":
        return "gram:" + json.dumps([list(r) for r in e.gram], separators=(",", ":"))
    if e.kind == "Z" and e.n == 1:
        return "Z"
    return f"{e.kind}{e.n}"


def _atom_lattice(a: Atom) -> Lattice:
    if a.kind == "gram":
        return make_lattice(a.gram, name=to_text(a))
    if a.kind == "E" and a.n not in (6, 7, 8):
        raise UnknownLattice(f"E{a.n} is not a supported lattice")
    if a.kind == "A" and a.n < 1 or a.kind == "Z" and a.n < 1 or a.kind == "D" and a.n < 2:
        raise UnknownLattice(f"{a.kind}{a.n} is not a supported lattice")
    try:
        return named_lattice(a.kind, a.n)
    except LatticeError as exc:
        raise UnknownLattice(str(exc)) from exc


def evaluate(e: LatticeExpr | str) -> Lattice:
    if isinstance(e, str):
        e = parse_lattice_expr(e)
    if isinstance(e, Sum):
        out = evaluate(e.terms[0])
        for t in e.terms[1:]:
            out = direct_sum(out, evaluate(t))
    elif isinstance(e, Scaled):
        out = rescale(_atom_lattice(e.inner), e.factor) if e.factor != 1 else _atom_lattice(e.inner)
    else:
        out = _atom_lattice(e)
    return Lattice(out.gram, to_text(e), out.definiteness)
