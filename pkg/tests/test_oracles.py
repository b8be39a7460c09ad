import pytest
from hypothesis import given, settings, strategies as st

from dialogic.formula import And, Atom, Imp, Neg, Or, parse
from dialogic.oracles import OracleLimitError, classical_valid, intuitionistic_valid

from conftest import CORPUS5

# Textbook IPC theorems and classical tautologies that IPC rejects.
IPC_THEOREMS = [
    "p -> p", "p -> ~~p", "~~~p -> ~p", "~p -> ~~~p", "~~(p | ~p)", "~~(~~p -> p)",
    "(p -> q) -> ~q -> ~p", "~(p | q) -> ~p & ~q", "~p & ~q -> ~(p | q)",
    "~p | ~q -> ~(p & q)", "(p -> q) -> (q -> r) -> p -> r", "p & (p -> q) -> q",
    "(p -> q -> r) -> p & q -> r", "(p & q -> r) -> p -> q -> r", "p | q -> q | p",
    "~p -> p -> q", "(p | q) & ~p -> q", "~~(p -> q) -> ~~p -> ~~q", "(p -> ~p) -> ~p",
    "((((p -> q) -> p) -> p) -> q) -> q", "~~(((p -> q) -> p) -> p)", "p -> q -> p",
    "(~p -> q) -> (~p -> ~q) -> ~~p",
]
IPC_NON_THEOREMS = [
    "p | ~p", "~~p -> p", "((p -> q) -> p) -> p", "(p -> q) | (q -> p)", "~p | ~~p",
    "~(p & q) -> ~p | ~q", "(~q -> ~p) -> p -> q", "(p -> q) -> ~p | q",
    "(~p -> q | r) -> (~p -> q) | (~p -> r)", "((p -> q) -> q) -> p | q",
    "(~~p -> p) -> p | ~p",
]
CLASSICAL_NON_TAUTOLOGIES = ["p", "p -> q", "(p -> q) -> q -> p", "~(p & ~q)", "p | q -> p & q"]


@pytest.mark.parametrize("text", IPC_THEOREMS)
def test_ipc_theorems(text):
    f = parse(text)
    assert intuitionistic_valid(f)
    assert classical_valid(f)


@pytest.mark.parametrize("text", IPC_NON_THEOREMS)
def test_ipc_non_theorems(text):
    f = parse(text)
    assert not intuitionistic_valid(f)
    assert classical_valid(f)


@pytest.mark.parametrize("text", CLASSICAL_NON_TAUTOLOGIES)
def test_classical_non_tautologies(text):
    assert not classical_valid(parse(text))
    assert not intuitionistic_valid(parse(text))


def test_truth_table_atom_budget():
    many = Atom("a0")
    for i in range(1, 21):
        many = Or(many, Atom(f"a{i}"))
    with pytest.raises(OracleLimitError):
        classical_valid(Imp(many, many))
    twenty = Imp(Atom("a0"), Atom("a0"))
    for i in range(1, 20):
        twenty = And(twenty, Imp(Atom(f"a{i}"), Atom(f"a{i}")))
    assert classical_valid(twenty)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(CORPUS5))
def test_intuitionistic_implies_classical(f):
    if intuitionistic_valid(f):
        assert classical_valid(f)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(CORPUS5))
def test_glivenko(f):
    assert classical_valid(f) == intuitionistic_valid(Neg(Neg(f)))
