import pytest
from hypothesis import given, settings, strategies as st

from dialogic.formula import Atom, parse
from dialogic.game import (
    Dialogue, DialogueError, Move, Player, Stance, SymAttack, attacks_against,
    defenses_against, is_won_by_p, skeletal_moves,
)
from dialogic.rules import parse_rules

from conftest import random_dialogue

P, O = Player.P, Player.O
A, D = Stance.ATTACK, Stance.DEFEND
p, q = Atom("p"), Atom("q")


def moves(*spec):
    """Build a dialogue from (statement, stance, ref) triples after the initial one."""
    first, *rest = spec
    out = [Move(P, parse(first), Stance.INITIAL)]
    for i, (s, stance, ref) in enumerate(rest, start=1):
        stmt = s if isinstance(s, SymAttack) else parse(s)
        out.append(Move(P if i % 2 == 0 else O, stmt, stance, ref))
    return Dialogue(out)


@pytest.mark.parametrize("text, expected", [
    ("p & q", [SymAttack.LEFT, SymAttack.RIGHT]),
    ("p | q", [SymAttack.QUERY]),
    ("p -> q", [p]),
    ("~(p & q)", [parse("p & q")]),
    ("p", []),
])
def test_attacks(text, expected):
    assert attacks_against(parse(text)) == expected


def test_symbolic_attacks_have_no_attacks_and_differ_from_formulas():
    for s in SymAttack:
        assert attacks_against(s) == []
        assert all(s != parse(t) for t in ("p", "p | q"))


@pytest.mark.parametrize("attacked, attack, expected", [
    ("p & q", SymAttack.LEFT, [p]),
    ("p & q", SymAttack.RIGHT, [q]),
    ("p | q", SymAttack.QUERY, [p, q]),
    ("p -> q", "p", [q]),
    ("~p", "p", []),
])
def test_defenses(attacked, attack, expected):
    attack = attack if isinstance(attack, SymAttack) else parse(attack)
    assert defenses_against(parse(attacked), attack) == expected


def test_defense_against_non_attack_raises():
    with pytest.raises(DialogueError):
        defenses_against(parse("p -> q"), q)


def test_skeletal_moves_disjunction():
    assert skeletal_moves(Dialogue.start(parse("p | ~p"))) == [Move(O, SymAttack.QUERY, A, 0)]


def test_skeletal_moves_double_negation_antecedent():
    d = moves("~~r -> s", ("~~r", A, 0))
    got = skeletal_moves(d)
    assert Move(P, parse("~r"), A, 1) in got
    assert Move(P, parse("s"), D, 1) in got
    assert len(got) == 2


def test_skeletal_moves_atom_root():
    assert skeletal_moves(Dialogue.start(p)) == []


def test_skeletal_order_ref_then_attack_then_statement():
    d = moves("(p | q) -> p & q", ("p | q", A, 0))
    got = skeletal_moves(d)
    assert [(m.ref, m.stance) for m in got] == [(1, A), (1, D)]


@pytest.mark.parametrize("bad", [
    [("p", A, 0)],                                   # attack that is not an attack
    [("q", D, 0)],                                   # defending against a non-attack
    [(SymAttack.QUERY, A, 0), (SymAttack.QUERY, A, 1)],  # attacking a symbolic statement
    [(SymAttack.QUERY, D, 0)],                       # defending against an initial move
    [(SymAttack.QUERY, A, 5)],                       # ref not earlier
])
def test_check_rejects(bad):
    with pytest.raises(DialogueError):
        moves("p | ~p", *bad)


def test_check_rejects_parity_and_self_reference():
    ok = [Move(P, parse("p | q"), Stance.INITIAL), Move(O, SymAttack.QUERY, A, 0)]
    with pytest.raises(DialogueError):
        Dialogue(ok + [Move(O, p, D, 1)])
    with pytest.raises(DialogueError):
        Dialogue(ok + [Move(P, SymAttack.QUERY, A, 0)])
    with pytest.raises(DialogueError):
        Dialogue([Move(O, p, Stance.INITIAL)])


@pytest.mark.parametrize("length, legal, expected", [
    (1, [], True), (2, [], False), (3, ["x"], False), (3, [], True),
])
def test_is_won_by_p(length, legal, expected):
    d = Dialogue.start(parse("p | ~p"))
    d = Dialogue(list(d.moves) + [Move(O, SymAttack.QUERY, A, 0), Move(P, parse("~p"), D, 1)][:length - 1],
                 validate=False)
    assert is_won_by_p(d, legal) is expected


@settings(max_examples=150, deadline=None)
@given(random_dialogue(parse_rules([]), max_len=8))
def test_skeletal_moves_preserve_dialogue_invariants(d):
    for m in skeletal_moves(d):
        d.extend(m, validate=True)
        assert m.stance is not Stance.ATTACK or not isinstance(d.moves[m.ref].statement, Atom)
        assert m.stance is not Stance.DEFEND or d.moves[m.ref].stance is Stance.ATTACK
