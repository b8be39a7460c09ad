"""Structural rules as predicates over dialogue histories, and named rule sets.

Each ``admits_*`` predicate takes a dialogue ``d`` and a skeletally legal
candidate move ``m`` (the move that would get index ``len(d)``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterable

from .formula import Atom, Formula, Or
from .game import (
    Dialogue, Move, Player, Stance, SymAttack, is_formula, skeletal_moves,
)

__all__ = [
    "RULE_NAMES", "RuleSet", "PRESETS", "parse_rules", "legal_moves", "admits_initial",
    "admits_d10", "admits_d10prime", "admits_d11", "admits_d12", "admits_d13", "admits_e",
    "admits", "StructuralRule", "RULES",
]

RULE_NAMES = ("D10", "D10'", "D11", "D12", "D13", "E")


def _o_asserted(d: Dialogue, a: Atom) -> bool:
    return any(mv.player is Player.O and mv.statement == a for mv in d.moves)


def admits_d10(d: Dialogue, m: Move) -> bool:
    """P may assert an atom only after O has asserted it."""
    if m.player is not Player.P or not isinstance(m.statement, Atom):
        return True
    return _o_asserted(d, m.statement)


def _disjunctive_defense(d: Dialogue, m: Move) -> bool:
    # Defending a disjunction against "?", or defending against an attack
    # whose content is itself a disjunction.
    if m.stance is not Stance.DEFEND:
        return False
    attack = d.moves[m.ref]
    return attack.statement is SymAttack.QUERY or isinstance(attack.statement, Or)


def admits_d10prime(d: Dialogue, m: Move) -> bool:
    """D10 relaxed: atoms are free when P defends in a disjunctive exchange."""
    if m.player is not Player.P or not isinstance(m.statement, Atom):
        return True
    return _disjunctive_defense(d, m) or _o_asserted(d, m.statement)


def _answered(d: Dialogue, n: int) -> bool:
    return any(mv.stance is Stance.DEFEND and mv.ref == n for mv in d.moves)


def admits_d11(d: Dialogue, m: Move) -> bool:
    """Only the most recent open attack of the adversary may be answered."""
    if m.stance is not Stance.DEFEND:
        return True
    adversary = m.player.other
    latest = None
    for j, mv in enumerate(d.moves):
        if mv.player is adversary and mv.stance is Stance.ATTACK and not _answered(d, j):
            latest = j
    return m.ref == latest


def admits_d12(d: Dialogue, m: Move) -> bool:
    """An attack may be answered at most once."""
    return m.stance is not Stance.DEFEND or not _answered(d, m.ref)


def admits_d13(d: Dialogue, m: Move) -> bool:
    """A P-assertion (even move index) may be attacked at most once."""
    if m.stance is not Stance.ATTACK or m.ref % 2 != 0:
        return True
    return not any(mv.stance is Stance.ATTACK and mv.ref == m.ref for mv in d.moves)


def admits_e(d: Dialogue, m: Move) -> bool:
    """O may react only to the immediately preceding P-statement."""
    return m.player is not Player.O or m.ref == len(d) - 1


@dataclass(frozen=True)
class StructuralRule:
    name: str
    admits: Callable[[Dialogue, Move], bool]


RULES = {
    "D10": StructuralRule("D10", admits_d10),
    "D10'": StructuralRule("D10'", admits_d10prime),
    "D11": StructuralRule("D11", admits_d11),
    "D12": StructuralRule("D12", admits_d12),
    "D13": StructuralRule("D13", admits_d13),
    "E": StructuralRule("E", admits_e),
}


@dataclass(frozen=True)
class RuleSet:
    name: str
    rules: frozenset

    def __post_init__(self):
        unknown = set(self.rules) - set(RULE_NAMES)
        if unknown:
            raise ValueError(f"unknown structural rules: {sorted(unknown)}")

    def __contains__(self, rule: str) -> bool:
        return rule in self.rules

    def __str__(self):
        return self.name

    @property
    def listing(self) -> str:
        return "+".join(r for r in RULE_NAMES if r in self.rules) or "(none)"

    def union(self, other: "RuleSet") -> "RuleSet":
        rules = self.rules | other.rules
        return RuleSet("+".join(r for r in RULE_NAMES if r in rules), rules)

    @property
    def restricts_atoms(self) -> bool:
        return "D10" in self.rules or "D10'" in self.rules


PRESETS = {
    "D": RuleSet("D", frozenset({"D10", "D11", "D12", "D13"})),
    "D+E": RuleSet("D+E", frozenset({"D10", "D11", "D12", "D13", "E"})),
    "CL": RuleSet("CL", frozenset({"D10", "D13", "E"})),
    "N": RuleSet("N", frozenset({"D10", "D13"})),
    "CLprime": RuleSet("CLprime", frozenset({"D10'", "D13", "E"})),
}

_ALIASES = {"CL'": "CLprime", "DE": "D+E"}
_RULE_ALIASES = {"D10PRIME": "D10'", "D10P": "D10'"}


def parse_rules(text: str | RuleSet | Iterable[str]) -> RuleSet:
    """Resolve a preset name (``N``, ``D+E``, ``CLprime`` ...) or an explicit
    ``+``/``,``-separated rule list such as ``D10+D13``."""
    if isinstance(text, RuleSet):
        return text
    if not isinstance(text, str):
        rules = frozenset(text)
        return RuleSet("+".join(r for r in RULE_NAMES if r in rules), rules)
    key = text.strip()
    key = _ALIASES.get(key, key)
    if key in PRESETS:
        return PRESETS[key]
    parts = [p.strip() for p in re.split(r"[+,\s]+", key) if p.strip()]
    if not parts:
        raise ValueError(f"empty rule set: {text!r}")
    rules = set()
    for p in parts:
        p = _RULE_ALIASES.get(p.upper(), p)
        if p not in RULE_NAMES:
            raise ValueError(f"unknown rule or preset {p!r} in {text!r}")
        rules.add(p)
    return RuleSet(key, frozenset(rules))


def admits(d: Dialogue, m: Move, rs: RuleSet) -> bool:
    return all(RULES[r].admits(d, m) for r in RULE_NAMES if r in rs.rules)


def admits_initial(phi: Formula, rs: RuleSet) -> bool:
    """A bare atom cannot open a dialogue under D10 or D10'."""
    return not (isinstance(phi, Atom) and rs.restricts_atoms) and is_formula(phi)


def legal_moves(d: Dialogue, rs: RuleSet) -> list[Move]:
    """Skeletal moves admitted by every rule of ``rs``, in skeletal order."""
    return [m for m in skeletal_moves(d) if admits(d, m, rs)]
