"""Reference deciders independent of the dialogue machinery.

Classical validity by truth tables; intuitionistic validity by proof search
in the contraction-free sequent calculus G4ip, which terminates without loop
checking.  Formulas are translated into a private tuple encoding so nothing
here shares code with the game side.
"""

from __future__ import annotations

from functools import lru_cache

from .formula import And, Atom, Formula, Imp, Neg, Or, atoms_of

__all__ = ["classical_valid", "intuitionistic_valid", "OracleLimitError", "MAX_TRUTH_TABLE_ATOMS"]

MAX_TRUTH_TABLE_ATOMS = 20


class OracleLimitError(ValueError):
    pass


def _columns(f: Formula, cols: dict, full: int) -> int:
    """Truth-table column of ``f``: bit r is its value in row r."""
    if isinstance(f, Atom):
        return cols[f.name]
    if isinstance(f, Neg):
        return full ^ _columns(f.body, cols, full)
    left, right = _columns(f.left, cols, full), _columns(f.right, cols, full)
    if isinstance(f, And):
        return left & right
    if isinstance(f, Or):
        return left | right
    return (full ^ left) | right


def classical_valid(f: Formula) -> bool:
    """Truth-table check, all rows at once: each atom's column is a big integer."""
    names = sorted(a.name for a in atoms_of(f))
    k = len(names)
    if k > MAX_TRUTH_TABLE_ATOMS:
        raise OracleLimitError(f"{k} atoms exceed the truth-table limit of {MAX_TRUTH_TABLE_ATOMS}")
    rows = 1 << k
    full = (1 << rows) - 1
    cols = {}
    for i, name in enumerate(names):
        half = 1 << i                      # atom i is true where bit i of the row index is set
        unit = ((1 << half) - 1) << half
        cols[name] = unit * (full // ((1 << (2 * half)) - 1))
    return _columns(f, cols, full) == full


# -------------------------------------------------------------------- G4ip

BOT = ("bot",)


def _enc(f: Formula) -> tuple:
    if isinstance(f, Atom):
        return ("at", f.name)
    if isinstance(f, Neg):
        return ("imp", _enc(f.body), BOT)
    tag = {And: "and", Or: "or", Imp: "imp"}[type(f)]
    return (tag, _enc(f.left), _enc(f.right))


@lru_cache(maxsize=None)
def _g4(gamma: frozenset, goal: tuple) -> bool:
    if goal in gamma or BOT in gamma:
        return True
    # invertible left rules
    for h in gamma:
        if h[0] == "and":
            return _g4((gamma - {h}) | {h[1], h[2]}, goal)
        if h[0] == "or":
            rest = gamma - {h}
            return _g4(rest | {h[1]}, goal) and _g4(rest | {h[2]}, goal)
        if h[0] == "imp":
            a, b = h[1], h[2]
            if a == BOT:
                return _g4(gamma - {h}, goal)
            if a[0] == "at" and a in gamma:
                return _g4((gamma - {h}) | {b}, goal)
            if a[0] == "and":
                return _g4((gamma - {h}) | {("imp", a[1], ("imp", a[2], b))}, goal)
            if a[0] == "or":
                return _g4((gamma - {h}) | {("imp", a[1], b), ("imp", a[2], b)}, goal)
    # invertible right rules
    if goal[0] == "and":
        return _g4(gamma, goal[1]) and _g4(gamma, goal[2])
    if goal[0] == "imp":
        return _g4(gamma | {goal[1]}, goal[2])
    # non-invertible choices
    if goal[0] == "or" and (_g4(gamma, goal[1]) or _g4(gamma, goal[2])):
        return True
    for h in gamma:
        if h[0] == "imp" and h[1][0] == "imp":
            c, d, b = h[1][1], h[1][2], h[2]
            rest = gamma - {h}
            if _g4(rest | {("imp", d, b), c}, d) and _g4(rest | {b}, goal):
                return True
    return False


def intuitionistic_valid(f: Formula) -> bool:
    return _g4(frozenset(), _enc(f))
