"""Particle rules and the skeletal dialogue conditions.

A dialogue is a sequence of moves.  Move 0 is P's initial assertion; every
later move is an attack on, or a defence against, some strictly earlier move.
Structural rules are not applied here; see :mod:`dialogic.rules`.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Union

from .formula import And, Atom, Formula, FORMULA_TYPES, Imp, Neg, Or, formula_key, to_text

__all__ = [
    "SymAttack", "Statement", "Player", "Stance", "Move", "Dialogue", "DialogueError",
    "attacks_against", "defenses_against", "skeletal_moves", "is_won_by_p",
    "statement_text", "statement_key", "is_formula",
]


class SymAttack(Enum):
    """Symbolic attacks.  They are statements but never formulas."""

    QUERY = "?"
    LEFT = "&L"
    RIGHT = "&R"

    def __str__(self):
        return self.value


Statement = Union[Formula, SymAttack]


class Player(Enum):
    P = "P"
    O = "O"

    @property
    def other(self) -> "Player":
        return Player.O if self is Player.P else Player.P

    def __str__(self):
        return self.value


class Stance(Enum):
    INITIAL = "initial"
    ATTACK = "attack"
    DEFEND = "defend"

    def __str__(self):
        return self.value


def is_formula(s) -> bool:
    return isinstance(s, FORMULA_TYPES)


def statement_text(s: Statement) -> str:
    return s.value if isinstance(s, SymAttack) else to_text(s)


_SYM_ORDER = {SymAttack.QUERY: 0, SymAttack.LEFT: 1, SymAttack.RIGHT: 2}


def statement_key(s: Statement) -> tuple:
    """Symbolic attacks sort before formulas; formulas by size then text."""
    if isinstance(s, SymAttack):
        return (0, _SYM_ORDER[s], "")
    return (1, *formula_key(s))


@dataclass(frozen=True)
class Move:
    player: Player
    statement: Statement
    stance: Stance
    ref: Optional[int] = None

    def __str__(self):
        tag = "initial" if self.stance is Stance.INITIAL else f"[{self.stance.value[0].upper()},{self.ref}]"
        return f"{self.player} {statement_text(self.statement)} {tag}"


class DialogueError(ValueError):
    pass


# ------------------------------------------------------------ particle rules

def attacks_against(s: Statement) -> list[Statement]:
    """Attacks admitted by the particle rules against statement ``s``."""
    if isinstance(s, And):
        return [SymAttack.LEFT, SymAttack.RIGHT]
    if isinstance(s, Or):
        return [SymAttack.QUERY]
    if isinstance(s, (Imp, Neg)):
        return [s.left if isinstance(s, Imp) else s.body]
    return []


def defenses_against(attacked: Statement, attack: Statement) -> list[Statement]:
    """Defences against ``attack`` on ``attacked``.  Attacks on a negation have none."""
    if attack not in attacks_against(attacked):
        raise DialogueError(f"{statement_text(attack)} is not an attack on {statement_text(attacked)}")
    if isinstance(attacked, And):
        return [attacked.left if attack is SymAttack.LEFT else attacked.right]
    if isinstance(attacked, Or):
        return [attacked.left, attacked.right]
    if isinstance(attacked, Imp):
        return [attacked.right]
    return []


# ----------------------------------------------------------------- dialogues

class Dialogue:
    """An immutable, validated move sequence commencing with ``initial``."""

    __slots__ = ("moves", "initial")

    def __init__(self, moves: Sequence[Move], validate: bool = True):
        moves = tuple(moves)
        if not moves:
            raise DialogueError("a dialogue has at least the initial move")
        self.moves = moves
        self.initial = moves[0].statement
        if validate:
            self.check()

    @classmethod
    def start(cls, phi: Formula) -> "Dialogue":
        return cls((Move(Player.P, phi, Stance.INITIAL),))

    def __len__(self):
        return len(self.moves)

    def __getitem__(self, i):
        return self.moves[i]

    def __iter__(self):
        return iter(self.moves)

    def __eq__(self, other):
        return isinstance(other, Dialogue) and self.moves == other.moves

    def __hash__(self):
        return hash(self.moves)

    def __repr__(self):
        return "Dialogue(" + "; ".join(f"{i}: {m}" for i, m in enumerate(self.moves)) + ")"

    @property
    def to_move(self) -> Player:
        return Player.P if len(self.moves) % 2 == 0 else Player.O

    def extend(self, move: Move, validate: bool = False) -> "Dialogue":
        d = Dialogue(self.moves + (move,), validate=False)
        if validate:
            d.check()
        return d

    def check(self) -> None:
        """Raise :class:`DialogueError` unless the skeletal conditions hold."""
        first = self.moves[0]
        if first.player is not Player.P or first.stance is not Stance.INITIAL or first.ref is not None:
            raise DialogueError("move 0 must be P's initial assertion")
        if not is_formula(first.statement):
            raise DialogueError("the initial statement must be a formula")
        for n, m in enumerate(self.moves[1:], start=1):
            _check_move(self.moves, n, m)


def _check_move(moves: Sequence[Move], n: int, m: Move) -> None:
    expected = Player.P if n % 2 == 0 else Player.O
    if m.player is not expected:
        raise DialogueError(f"move {n} must be {expected}-signed")
    if m.stance is Stance.INITIAL or m.ref is None:
        raise DialogueError(f"move {n} must attack or defend an earlier move")
    if not 0 <= m.ref < n:
        raise DialogueError(f"move {n} refers to {m.ref}, which is not earlier")
    target = moves[m.ref]
    if target.player is m.player:
        raise DialogueError(f"move {n} refers to a move by the same player")
    if m.stance is Stance.ATTACK:
        if not is_formula(target.statement) or isinstance(target.statement, Atom):
            raise DialogueError(f"move {n} attacks a statement that is not a compound formula")
        if m.statement not in attacks_against(target.statement):
            raise DialogueError(f"move {n} is not an attack on move {m.ref}")
    else:
        if target.stance is not Stance.ATTACK:
            raise DialogueError(f"move {n} defends against move {m.ref}, which is not an attack")
        attacked = moves[target.ref].statement
        if m.statement not in defenses_against(attacked, target.statement):
            raise DialogueError(f"move {n} is not a defence against move {m.ref}")


def skeletal_moves(d: Dialogue) -> list[Move]:
    """Moves extending ``d`` to a dialogue, ignoring structural rules.

    Ordered by ref index, attacks before defences, then statement order.
    """
    player = d.to_move
    out: list[Move] = []
    moves = d.moves
    for k, target in enumerate(moves):
        if target.player is player:
            continue
        s = target.statement
        if is_formula(s) and not isinstance(s, Atom):
            for a in sorted(attacks_against(s), key=statement_key):
                out.append(Move(player, a, Stance.ATTACK, k))
        if target.stance is Stance.ATTACK:
            attacked = moves[target.ref].statement
            for g in sorted(set(defenses_against(attacked, s)), key=statement_key):
                out.append(Move(player, g, Stance.DEFEND, k))
    return out


def is_won_by_p(d: Dialogue, legal: Sequence[Move]) -> bool:
    """P wins iff the last move is P's and no legal extension exists."""
    return len(d) % 2 == 1 and not legal
