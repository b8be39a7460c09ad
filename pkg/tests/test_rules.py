import pytest
from hypothesis import given, settings

from dialogic.formula import parse
from dialogic.game import Dialogue, Move, Player, Stance, SymAttack, defenses_against
from dialogic.rules import (
    PRESETS, admits_d10, admits_d10prime, admits_d11, admits_d12, admits_d13,
    admits_e, admits_initial, legal_moves, parse_rules,
)

from conftest import random_dialogue

P, O = Player.P, Player.O
A, D = Stance.ATTACK, Stance.DEFEND


def dlg(first, *rest):
    out = [Move(P, parse(first), Stance.INITIAL)]
    for i, (s, stance, ref) in enumerate(rest, start=1):
        stmt = s if isinstance(s, SymAttack) else parse(s)
        out.append(Move(P if i % 2 == 0 else O, stmt, stance, ref))
    return Dialogue(out)


def pm(s, stance, ref):
    return Move(P, s if isinstance(s, SymAttack) else parse(s), stance, ref)


def om(s, stance, ref):
    return Move(O, s if isinstance(s, SymAttack) else parse(s), stance, ref)


# ------------------------------------------------------------------ D10

def test_d10_blocks_fresh_atom():
    d = dlg("p | ~p", (SymAttack.QUERY, A, 0))
    assert not admits_d10(d, pm("p", D, 1))


def test_d10_allows_atom_asserted_by_o():
    d = dlg("p -> p", ("p", A, 0))
    assert admits_d10(d, pm("p", D, 1))


def test_d10_ignores_compounds():
    d = dlg("p | ~p", (SymAttack.QUERY, A, 0))
    assert admits_d10(d, pm("~p", D, 1))


# ------------------------------------------------------------------ D11

# two defendable O attacks open, at 1 and 3
TWO_OPEN = ("((p -> p) -> r) -> (p -> p)", ("(p -> p) -> r", A, 0), ("p -> p", A, 1), ("p", A, 2))


def test_d11_only_latest_open_attack():
    d = dlg(*TWO_OPEN)
    assert not admits_d11(d, pm("p -> p", D, 1))
    assert admits_d11(d, pm("p", D, 3))


def test_d11_attacks_unconstrained():
    d = dlg(*TWO_OPEN)
    assert admits_d11(d, pm("p -> p", A, 1))


def test_d11_undefendable_attack_blocks_older_ones():
    d = dlg("~~p -> p", ("~~p", A, 0), ("~p", A, 1), ("p", A, 2))
    assert not admits_d11(d, pm("p", D, 1))


def test_d11_answered_attack_is_not_reopened():
    d = dlg("p -> p | q", ("p", A, 0), ("p | q", D, 1), (SymAttack.QUERY, A, 2))
    assert not admits_d11(d, pm("p | q", D, 1))
    assert admits_d11(d, pm("p", D, 3))


# ------------------------------------------------------------------ D12

def test_d12():
    d = dlg("p -> p | q", ("p", A, 0), ("p | q", D, 1), (SymAttack.QUERY, A, 2))
    assert not admits_d12(d, pm("p | q", D, 1))
    assert admits_d12(d, pm("p", D, 3))


def test_n_allows_o_redefence():
    d = dlg("p | q -> q", ("p | q", A, 0), (SymAttack.QUERY, A, 1), ("p", D, 2), (SymAttack.QUERY, A, 1))
    again = om("q", D, 2)
    assert not admits_d12(d, again)
    assert again in legal_moves(d, PRESETS["N"])
    assert again not in legal_moves(d, PRESETS["D"])


# ------------------------------------------------------------------ D13

def test_d13_second_attack_on_p_move():
    d = dlg("(p -> p) & q", (SymAttack.LEFT, A, 0), ("p -> p", D, 1))
    assert not admits_d13(d, om(SymAttack.RIGHT, A, 0))
    assert admits_d13(d, om("p", A, 2))


def test_d13_distinct_tokens_of_same_formula():
    d = dlg("~~(p | p) -> ~~(p | p)", ("~~(p | p)", A, 0), ("~(p | p)", A, 1), ("p | p", A, 2),
            (SymAttack.QUERY, A, 3), ("p", D, 4), ("~(p | p)", A, 1))
    # P asserted the formula ~(p | p) at 2 and again at 6; each token takes one attack
    assert admits_d13(d, om("p | p", A, 6))
    assert not admits_d13(d, om("p | p", A, 2))


def test_d13_does_not_limit_p():
    d = dlg("~~p -> p", ("~~p", A, 0), ("~p", A, 1), ("p", A, 2))
    assert admits_d13(d, pm("~p", A, 1))


# -------------------------------------------------------------------- E

def test_e_constrains_o_only():
    d = dlg("~~p -> p", ("~~p", A, 0), ("~p", A, 1))
    assert admits_e(d, om("p", A, 2))
    assert not admits_e(Dialogue(d.moves + (pm("~p", A, 1),), validate=False), om("p", A, 2))
    assert admits_e(d, pm("~p", A, 1))


# ------------------------------------------------------------------ D10'

def test_d10prime_disjunction_defence():
    d = dlg("p | ~p", (SymAttack.QUERY, A, 0))
    assert admits_d10prime(d, pm("p", D, 1))


def test_d10prime_implication_defence_with_fresh_atom():
    d = dlg("q -> p", ("q", A, 0))
    assert not admits_d10prime(d, pm("p", D, 1))


def test_d10prime_attack_with_fresh_atom():
    d = dlg("(p -> q) -> q", ("p -> q", A, 0))
    assert not admits_d10prime(d, pm("p", A, 1))


def test_d10prime_defence_against_disjunctive_attack():
    # the attack on (p | ~p) -> p asserts a disjunction; defending with p is free
    d = dlg("(p | ~p) -> p", ("p | ~p", A, 0))
    assert admits_d10prime(d, pm("p", D, 1))
    assert not admits_d10(d, pm("p", D, 1))


# ---------------------------------------------------------------- presets

@pytest.mark.parametrize("name, rules", [
    ("D", {"D10", "D11", "D12", "D13"}),
    ("D+E", {"D10", "D11", "D12", "D13", "E"}),
    ("CL", {"D10", "D13", "E"}),
    ("N", {"D10", "D13"}),
    ("CLprime", {"D10'", "D13", "E"}),
    ("CL'", {"D10'", "D13", "E"}),
    ("D10+D13", {"D10", "D13"}),
    ("d10prime, E", {"D10'", "E"}),
])
def test_parse_rules(name, rules):
    assert parse_rules(name).rules == rules


@pytest.mark.parametrize("bad", ["", "X", "D10+D99"])
def test_parse_rules_rejects(bad):
    with pytest.raises(ValueError):
        parse_rules(bad)


def test_atom_root_inadmissible_under_d10():
    assert not admits_initial(parse("p"), PRESETS["N"])
    assert not admits_initial(parse("p"), PRESETS["CLprime"])
    assert admits_initial(parse("p"), parse_rules("D13"))


@pytest.mark.parametrize("text, expected", [
    ("p", []),
    ("p & q", [Move(O, SymAttack.LEFT, A, 0), Move(O, SymAttack.RIGHT, A, 0)]),
])
def test_legal_moves_n(text, expected):
    assert legal_moves(Dialogue.start(parse(text)), PRESETS["N"]) == expected


def test_legal_moves_cl_filters_stale_references():
    d = dlg("~~p -> p", ("~~p", A, 0), ("~p", A, 1))
    d = Dialogue(d.moves + (Move(O, parse("p"), A, 2), pm("~p", A, 1)), validate=False)
    assert all(m.ref == len(d) - 1 for m in legal_moves(d, PRESETS["CL"]))


@settings(max_examples=60, deadline=None)
@given(random_dialogue(PRESETS["N"], max_len=10))
def test_filtering_is_monotone(d):
    base = set(legal_moves(d, parse_rules([])))
    for extra in ("D11", "D12", "E", "D10'"):
        assert set(legal_moves(d, parse_rules(["D10", "D13", extra]))) <= set(legal_moves(d, PRESETS["N"])) <= base


@settings(max_examples=100, deadline=None)
@given(random_dialogue(parse_rules(["D10", "E"]), max_len=12))
def test_e_subsumes_d13_for_o(d):
    if d.to_move is Player.O:
        assert legal_moves(d, parse_rules(["D10", "E"])) == legal_moves(d, PRESETS["CL"])


@settings(max_examples=100, deadline=None)
@given(random_dialogue(PRESETS["N"], max_len=12))
def test_n_o_can_defend_when_attack_is_answerable(d):
    # Without D11/D12 a P attack that has a defence stays answerable for good.
    if d.to_move is not Player.O:
        return
    defendable = any(m.player is P and m.stance is A and defenses_against(d.moves[m.ref].statement, m.statement)
                     for m in d.moves)
    if defendable:
        assert any(m.stance is D for m in legal_moves(d, PRESETS["N"]))


@settings(max_examples=100, deadline=None)
@given(random_dialogue(PRESETS["N"], max_len=12))
def test_o_redefence_after_o_defence(d):
    # Under N an O defence can be repeated after any P reply.
    last = d.moves[-1]
    if last.player is not O or last.stance is not D:
        return
    for m in legal_moves(d, PRESETS["N"]):
        assert Move(O, last.statement, D, last.ref) in legal_moves(d.extend(m), PRESETS["N"])
