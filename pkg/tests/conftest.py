from hypothesis import strategies as st

from dialogic.formula import enumerate_formulas
from dialogic.game import Dialogue
from dialogic.rules import admits_initial, legal_moves

CORPUS5 = list(enumerate_formulas(5, "pq"))
COMPOUND5 = [f for f in CORPUS5 if type(f).__name__ != "Atom"]


@st.composite
def random_dialogue(draw, rs, max_len=12, formulas=COMPOUND5):
    """A dialogue built by a random walk through ``legal_moves``."""
    phi = draw(st.sampled_from(formulas))
    assert admits_initial(phi, rs)
    d = Dialogue.start(phi)
    for _ in range(draw(st.integers(0, max_len))):
        legal = legal_moves(d, rs)
        if not legal:
            break
        d = d.extend(legal[draw(st.integers(0, len(legal) - 1))])
    return d
