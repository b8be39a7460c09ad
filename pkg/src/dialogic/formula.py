"""Propositional formulas: AST, parser, printer, enumeration and substitution.

Formulas are immutable and hashable.  The canonical text form uses ASCII
connectives ``~ & | ->`` with precedence ``~ > & > | > ->``; ``->`` is
right-associative, ``&`` and ``|`` are left-associative.  The parser also
accepts the Unicode spellings ``¬ ∧ ∨ →``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence, Union

__all__ = [
    "Atom", "Neg", "And", "Or", "Imp", "Formula", "FormulaSyntaxError",
    "parse", "to_text", "size", "atoms_of", "occurrences", "subformulas",
    "substitute", "enumerate_formulas", "formula_key", "is_atomic",
]

ATOM_RE = re.compile(r"[a-z][a-zA-Z0-9_]*")


@dataclass(frozen=True)
class Atom:
    name: str

    def __post_init__(self):
        if not isinstance(self.name, str) or not ATOM_RE.fullmatch(self.name):
            raise ValueError(f"bad atom name: {self.name!r}")

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Neg:
    body: "Formula"

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Imp:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return to_text(self)


Formula = Union[Atom, Neg, And, Or, Imp]
FORMULA_TYPES = (Atom, Neg, And, Or, Imp)


def is_atomic(f) -> bool:
    return isinstance(f, Atom)


# ---------------------------------------------------------------- printing

_PREC = {Imp: 1, Or: 2, And: 3, Neg: 4, Atom: 5}
_SYMBOL = {Imp: "->", Or: "|", And: "&"}


def _wrap(f: Formula, need_parens: bool) -> str:
    s = to_text(f)
    return f"({s})" if need_parens else s


@lru_cache(maxsize=None)
def to_text(f: Formula) -> str:
    """Canonical minimal-parenthesis rendering; ``parse(to_text(f)) == f``."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Neg):
        return "~" + _wrap(f.body, _PREC[type(f.body)] < 4)
    level = _PREC[type(f)]
    lp, rp = _PREC[type(f.left)], _PREC[type(f.right)]
    if isinstance(f, Imp):
        left, right = _wrap(f.left, lp <= level), _wrap(f.right, rp < level)
    else:
        left, right = _wrap(f.left, lp < level), _wrap(f.right, rp <= level)
    return f"{left} {_SYMBOL[type(f)]} {right}"


# ----------------------------------------------------------------- parsing

class FormulaSyntaxError(ValueError):
    """Malformed formula text; ``offset`` is the 0-based character position."""

    def __init__(self, message: str, offset: int, text: str = ""):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.text = text


_UNICODE = {"¬": "~", "∧": "&", "∨": "|", "→": "->"}
_TOKEN_RE = re.compile(r"\s*(?:(->|→)|([~¬&∧|∨()])|([a-z][a-zA-Z0-9_]*))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        start = m.start(m.lastindex)
        if m.group(3) is not None:
            tokens.append(("atom", m.group(3), start))
        else:
            sym = m.group(1) or m.group(2)
            tokens.append(("op", _UNICODE.get(sym, sym), start))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, what: str):
        kind, value, pos = self.peek()
        found = "end of input" if kind == "end" else repr(value)
        raise FormulaSyntaxError(f"expected {what}, found {found}", pos, self.text)

    def formula(self) -> Formula:
        return self.imp()

    def imp(self) -> Formula:
        left = self.disj()
        if self.peek()[1] == "->":
            self.take()
            return Imp(left, self.imp())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek()[1] == "|":
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.neg()
        while self.peek()[1] == "&":
            self.take()
            f = And(f, self.neg())
        return f

    def neg(self) -> Formula:
        kind, value, _ = self.peek()
        if value == "~" and kind == "op":
            self.take()
            return Neg(self.neg())
        if kind == "atom":
            self.take()
            return Atom(value)
        if value == "(" and kind == "op":
            self.take()
            f = self.formula()
            if self.peek()[1] != ")":
                self.fail("')'")
            self.take()
            return f
        self.fail("a formula")


def parse(text: str) -> Formula:
    """Parse formula text.  Raises :class:`FormulaSyntaxError` with an offset."""
    if not text or not text.strip():
        raise FormulaSyntaxError("empty formula", 0, text or "")
    p = _Parser(text)
    f = p.formula()
    if p.peek()[0] != "end":
        p.fail("end of input")
    return f


# --------------------------------------------------------------- structure

@lru_cache(maxsize=None)
def size(f: Formula) -> int:
    """Node count: atoms count 1, each connective 1."""
    if isinstance(f, Atom):
        return 1
    if isinstance(f, Neg):
        return 1 + size(f.body)
    return 1 + size(f.left) + size(f.right)


def formula_key(f: Formula) -> tuple[int, str]:
    """Canonical ordering key: by size, then by canonical text."""
    return size(f), to_text(f)


def subformulas(f: Formula) -> Iterator[Formula]:
    """All subformula occurrences, preorder (duplicates included)."""
    yield f
    if isinstance(f, Neg):
        yield from subformulas(f.body)
    elif not isinstance(f, Atom):
        yield from subformulas(f.left)
        yield from subformulas(f.right)


def atoms_of(f: Formula) -> frozenset[Atom]:
    return frozenset(g for g in subformulas(f) if isinstance(g, Atom))


def occurrences(a: Atom, f: Formula) -> int:
    return sum(1 for g in subformulas(f) if g == a)


def substitute(f: Formula, target: Atom, replacement: Formula) -> Formula:
    """Uniformly replace every occurrence of ``target`` in ``f``."""
    if isinstance(f, Atom):
        return replacement if f == target else f
    if isinstance(f, Neg):
        return Neg(substitute(f.body, target, replacement))
    return type(f)(substitute(f.left, target, replacement),
                   substitute(f.right, target, replacement))


# ------------------------------------------------------------- enumeration

def _layers(atoms: tuple[Atom, ...], max_size: int) -> Iterator[list[Formula]]:
    layers: list[list[Formula]] = [[]]
    for n in range(1, max_size + 1):
        if n == 1:
            layer = list(atoms)
        else:
            layer = [Neg(g) for g in layers[n - 1]]
            for i in range(1, n - 1):
                for left, right in product(layers[i], layers[n - 1 - i]):
                    layer.extend((And(left, right), Or(left, right), Imp(left, right)))
        layer.sort(key=to_text)
        layers.append(layer)
        yield layer


def enumerate_formulas(max_size: int, atoms: Sequence[Atom | str]) -> Iterator[Formula]:
    """Every formula of size <= ``max_size`` over ``atoms``, each exactly once.

    Order is by size, then by canonical text.  Only one size layer is sorted
    at a time; smaller layers are retained to build the next one.
    """
    if max_size < 1:
        raise ValueError("max_size must be >= 1")
    atom_list = tuple(dict.fromkeys(a if isinstance(a, Atom) else Atom(a) for a in atoms))
    if not atom_list:
        raise ValueError("at least one atom is required")
    for layer in _layers(atom_list, max_size):
        yield from layer
