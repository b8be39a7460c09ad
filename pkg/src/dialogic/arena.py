"""Index-free game positions and their transitions.

A dialogue history is folded into an *abstract position*: the information the
structural rules can still consult.  Move indices are erased; what remains is

``turn``
    0 when P is to move, 1 when O is to move.
``oas``
    bitmask of subformulas O has asserted (D10 reads the atoms among them;
    P may attack any compound one, any number of times).
``toks``
    P's compound assertions O may still attack: a sorted multiset under D13
    (an attack consumes one copy), a bitmask otherwise.  Unused under E,
    where only P's last move is attackable.
``oatt``
    O's attacks on P that P may still answer (defendable records only):
    a stack under D11 (only the top is answerable; an undefendable attack
    such as one on a negation buries everything below it), a sorted multiset
    under D12, a bitmask when answers may be repeated.
``patt``
    P's attacks on O that O may still answer; same layout as ``oatt``.
    Unused under E.
``last``
    under E and with O to move, ``(token, record)`` describing P's last
    move: the formula O may attack (-1 if none) and the attack O may answer
    (-1 if none).

Multisets and stacks are unbounded in general.  :class:`Arena` therefore
runs in one of three modes, each of which yields a finite game:

``exact``
    no bounding (used to fold concrete dialogues and in tests);
``under``
    O's resources (attackable tokens, answerable P attacks) are *saturated*
    and P's (answerable O attacks) are *truncated*, so every P-win found
    here is a genuine win;
``over``
    the other way round, so every P-loss found here is a genuine loss.

Saturating a multiset turns any count above ``Limits.counts`` into an
inexhaustible supply; saturating a stack folds everything below the top
``Limits.stack`` entries into a persistent set whose records stay
answerable while the visible stack is empty.  Truncating simply discards
the surplus.  Stacks are stored as ``(visible, bottom_mask)`` pairs.
"""

from __future__ import annotations

from bisect import insort
from dataclasses import dataclass, field
from typing import Optional

from .formula import And, Atom, Formula, Imp, Neg, Or, formula_key, subformulas
from .game import Dialogue, Move, Stance, SymAttack, attacks_against, defenses_against
from .rules import RuleSet

P_TURN, O_TURN = 0, 1

SET, MULTI, STACK, NONE = "set", "multiset", "stack", "none"


@dataclass
class Limits:
    counts: int = 2
    stack: int = 4


@dataclass
class AttackInfo:
    statement: object          # Formula or SymAttack
    fid: int                   # subformula id of a formula attack, else -1
    record: int                # record id of (target, this attack)
    defenses: tuple            # distinct defence fids


@dataclass
class RecordInfo:
    target: int
    attack_index: int
    defenses: tuple
    disjunctive: bool          # D10' exempts atom defences of such records


def _remove_one(ms: tuple, x: int) -> tuple:
    i = ms.index(x)
    return ms[:i] + ms[i + 1:]


def _add_one(ms: tuple, x: int) -> tuple:
    lst = list(ms)
    insort(lst, x)
    return tuple(lst)


class Arena:
    """The dialogue game for ``phi`` under ``rules``, over abstract positions."""

    def __init__(self, phi: Formula, rules: RuleSet, mode: str = "exact",
                 limits: Optional[Limits] = None, corollary2: bool = False):
        self.phi = phi
        self.rules = rules
        self.mode = mode
        self.limits = limits or Limits()
        r = rules.rules
        self.d10 = "D10" in r
        self.d10p = "D10'" in r
        self.d11 = "D11" in r
        self.d12 = "D12" in r
        self.d13 = "D13" in r
        self.e = "E" in r
        self.corollary2 = corollary2

        self.tok_kind = NONE if self.e else (MULTI if self.d13 else SET)
        ans = STACK if self.d11 else (MULTI if self.d12 else SET)
        self.oatt_kind = ans
        self.patt_kind = NONE if self.e else ans
        self.kinds = {"toks": self.tok_kind, "oatt": self.oatt_kind, "patt": self.patt_kind}
        self.saturated = {"exact": (), "under": ("toks", "patt"), "over": ("oatt",)}[mode]

        subs = sorted(set(subformulas(phi)), key=formula_key)
        self.formulas: list[Formula] = subs
        self.fid = {f: i for i, f in enumerate(subs)}
        self.atomic = [isinstance(f, Atom) for f in subs]
        self.attacks: list[list[AttackInfo]] = []
        self.records: list[RecordInfo] = []
        for i, f in enumerate(subs):
            infos = []
            for k, a in enumerate(attacks_against(f)):
                defs = tuple(sorted({self.fid[g] for g in defenses_against(f, a)}))
                rec = len(self.records)
                self.records.append(RecordInfo(i, k, defs, a is SymAttack.QUERY or isinstance(a, Or)))
                infos.append(AttackInfo(a, self.fid[a] if not isinstance(a, SymAttack) else -1, rec, defs))
            self.attacks.append(infos)
        self.root_fid = self.fid[phi]

    # ------------------------------------------------------------- helpers

    @property
    def bounded(self) -> bool:
        """True when every position component ranges over a finite set."""
        return (self.tok_kind != MULTI and self.oatt_kind != MULTI
                and self.patt_kind not in (MULTI, STACK)
                and (self.oatt_kind != STACK or self.e))

    def _atom_ok(self, oas: int, g: int, rec: int = -1) -> bool:
        if not self.atomic[g] or not (self.d10 or self.d10p):
            return True
        if (oas >> g) & 1:
            return True
        return not self.d10 and rec >= 0 and self.records[rec].disjunctive

    def _add_token(self, toks, g: int):
        if self.atomic[g]:
            return toks
        if self.tok_kind == MULTI:
            return _add_one(toks, g)
        if self.tok_kind == SET:
            return toks | (1 << g)
        return toks

    def _take_token(self, toks, g: int):
        if self.tok_kind != MULTI or self._inexhaustible("toks", toks, g):
            return toks
        return _remove_one(toks, g)

    def _inexhaustible(self, comp: str, coll, x: int) -> bool:
        return comp in self.saturated and coll.count(x) > self.limits.counts

    def _push(self, kind: str, coll, rec: int, defendable: bool):
        if kind == STACK:
            if not defendable:
                return ((), 0)
            if self.e:
                return ((rec,), 0)
            return (coll[0] + (rec,), coll[1])
        if not defendable:
            return coll
        if kind == MULTI:
            return _add_one(coll, rec)
        if kind == SET:
            return coll | (1 << rec)
        return coll

    def _answerable(self, kind: str, coll) -> list[int]:
        if kind == STACK:
            stack, bottom = coll
            if stack:
                return [stack[-1]]
            return [i for i in range(len(self.records)) if (bottom >> i) & 1]
        if kind == MULTI:
            return sorted(set(coll))
        if kind == SET:
            return [i for i in range(len(self.records)) if (coll >> i) & 1]
        return []

    def _answer(self, comp: str, coll, rec: int):
        kind = self.kinds[comp]
        if kind == STACK:
            return (coll[0][:-1], coll[1]) if coll[0] else coll
        if kind == MULTI and not self._inexhaustible(comp, coll, rec):
            return _remove_one(coll, rec)
        return coll

    def _empty(self, kind: str):
        if kind == STACK:
            return ((), 0)
        return () if kind == MULTI else 0

    # ------------------------------------------------------------ bounding

    def _bound(self, comp: str, coll):
        kind = self.kinds[comp]
        keep = self.limits.counts + (comp in self.saturated)
        if kind == MULTI:
            out, prev, run = [], None, 0
            for x in coll:
                run = run + 1 if x == prev else 1
                prev = x
                if run <= keep:
                    out.append(x)
            return tuple(out)
        if kind == STACK:
            stack, bottom = coll
            cut = len(stack) - self.limits.stack
            if cut <= 0:
                return coll
            if comp in self.saturated:
                for rec in stack[:cut]:
                    bottom |= 1 << rec
            return (stack[cut:], bottom)
        return coll

    def classify(self, state) -> tuple:
        """Bring ``state`` within the bounds of the mode.  Returns
        ``(state', flag)``; the flag is reserved for terminal scoring and is
        always None with the current abstractions."""
        if self.mode == "exact":
            return state, None
        turn, oas, toks, oatt, patt, last = state
        return (turn, oas, self._bound("toks", toks), self._bound("oatt", oatt),
                self._bound("patt", patt), last), None

    # --------------------------------------------------------- transitions

    def root(self):
        """Position after P's initial move, or None if it is inadmissible."""
        g = self.root_fid
        if self.atomic[g] and (self.d10 or self.d10p):
            return None
        toks = self._add_token(self._empty(self.tok_kind), g)
        last = (-1 if self.atomic[g] else g, -1) if self.e else None
        return (O_TURN, 0, toks, self._empty(self.oatt_kind), self._empty(self.patt_kind), last)

    def moves(self, state) -> list[tuple[tuple, tuple]]:
        """``(descriptor, successor)`` pairs.  Descriptors are
        ``('A', target_fid, attack_index)`` or ``('D', record, defence_fid)``."""
        return self._p_moves(state) if state[0] == P_TURN else self._o_moves(state)

    def _p_moves(self, state):
        _, oas, toks, oatt, patt, _ = state
        out = []
        for rec in self._answerable(self.oatt_kind, oatt):
            info = self.records[rec]
            oatt2 = self._answer("oatt", oatt, rec)
            for g in info.defenses:
                if not self._atom_ok(oas, g, rec):
                    continue
                toks2 = self._add_token(toks, g)
                last = (-1 if self.atomic[g] else g, -1) if self.e else None
                out.append((("D", rec, g), (O_TURN, oas, toks2, oatt2, patt, last)))
        for f in range(len(self.formulas)):
            if not (oas >> f) & 1 or self.atomic[f]:
                continue
            for k, a in enumerate(self.attacks[f]):
                if a.fid >= 0 and not self._atom_ok(oas, a.fid):
                    continue
                defendable = bool(a.defenses)
                if defendable and self.corollary2:
                    continue
                toks2 = self._add_token(toks, a.fid) if a.fid >= 0 else toks
                if self.e:
                    tok = a.fid if a.fid >= 0 and not self.atomic[a.fid] else -1
                    last = (tok, a.record if defendable else -1)
                    patt2 = patt
                else:
                    last = None
                    patt2 = self._push(self.patt_kind, patt, a.record, defendable)
                out.append((("A", f, k), (O_TURN, oas, toks2, oatt, patt2, last)))
        return out

    def _o_moves(self, state):
        _, oas, toks, oatt, patt, last = state
        out = []
        if self.e:
            tok, prec = last
            targets = [tok] if tok >= 0 else []
            answerable = [prec] if prec >= 0 else []
        else:
            if self.tok_kind == MULTI:
                targets = sorted(set(toks))
            else:
                targets = [i for i in range(len(self.formulas)) if (toks >> i) & 1]
            answerable = self._answerable(self.patt_kind, patt)
        for t in targets:
            toks2 = self._take_token(toks, t)
            for k, a in enumerate(self.attacks[t]):
                oas2 = oas | (1 << a.fid) if a.fid >= 0 else oas
                oatt2 = self._push(self.oatt_kind, oatt, a.record, bool(a.defenses))
                out.append((("A", t, k), (P_TURN, oas2, toks2, oatt2, patt, None)))
        for rec in answerable:
            patt2 = self._answer("patt", patt, rec) if not self.e else patt
            for g in self.records[rec].defenses:
                out.append((("D", rec, g), (P_TURN, oas | (1 << g), toks, oatt, patt2, None)))
        return out

    # ------------------------------------------------------ concrete bridge

    def describe(self, d: Dialogue, m: Move) -> tuple:
        """Descriptor of concrete move ``m`` played after dialogue ``d``."""
        if m.stance is Stance.ATTACK:
            target = self.fid[d.moves[m.ref].statement]
            return ("A", target, attacks_against(self.formulas[target]).index(m.statement))
        attack = d.moves[m.ref]
        attacked = self.fid[d.moves[attack.ref].statement]
        k = attacks_against(self.formulas[attacked]).index(attack.statement)
        return ("D", self.attacks[attacked][k].record, self.fid[m.statement])

    def fold(self, d: Dialogue):
        """Abstract position of a concrete dialogue (exact mode only)."""
        state = self.root()
        if state is None:
            raise ValueError("the dialogue's initial move is inadmissible")
        for n in range(1, len(d)):
            desc = self.describe(Dialogue(d.moves[:n], validate=False), d.moves[n])
            succ = dict(self.moves(state))
            if desc not in succ:
                raise ValueError(f"move {n} ({d.moves[n]}) is not legal in the abstract game")
            state = succ[desc]
        return state

    def decode(self, state) -> "AbstractPosition":
        turn, oas, toks, oatt, patt, last = state

        def coll_records(kind, coll):
            if kind == SET:
                return tuple(self._record_text(i) for i in range(len(self.records)) if (coll >> i) & 1)
            if kind == NONE:
                return ()
            if kind == STACK:
                stack, bottom = coll
                below = [i for i in range(len(self.records)) if (bottom >> i) & 1]
                return tuple(self._record_text(i) for i in below + list(stack))
            return tuple(self._record_text(i) for i in coll)

        if self.tok_kind == MULTI:
            tokens = tuple(str(self.formulas[i]) for i in toks)
        elif self.tok_kind == SET:
            tokens = tuple(str(self.formulas[i]) for i in range(len(self.formulas)) if (toks >> i) & 1)
        else:
            tokens = ()
        o_assertions = frozenset(self.formulas[i] for i in range(len(self.formulas)) if (oas >> i) & 1)
        return AbstractPosition(
            turn="P" if turn == P_TURN else "O",
            o_atoms=frozenset(f for f in o_assertions if isinstance(f, Atom)),
            o_assertions=o_assertions,
            open_p_tokens=tokens,
            o_attacks=coll_records(self.oatt_kind, oatt),
            p_attacks=coll_records(self.patt_kind, patt),
            last=None if last is None else (
                str(self.formulas[last[0]]) if last[0] >= 0 else None,
                self._record_text(last[1]) if last[1] >= 0 else None),
            key=state,
        )

    def _record_text(self, rec: int) -> str:
        info = self.records[rec]
        a = self.attacks[info.target][info.attack_index].statement
        return f"{self.formulas[info.target]} / {a}"


@dataclass(frozen=True)
class AbstractPosition:
    """Readable view of an abstract position; equality is on ``key``."""

    turn: str
    o_atoms: frozenset
    o_assertions: frozenset = field(compare=False)
    open_p_tokens: tuple = field(compare=False)
    o_attacks: tuple = field(compare=False)
    p_attacks: tuple = field(compare=False)
    last: Optional[tuple] = field(compare=False)
    key: tuple = field(default=(), repr=False)
