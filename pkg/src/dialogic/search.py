"""Deciding S-validity by winning-strategy search.

The dialogue tree is never materialised.  :func:`search_strategy` solves the
finite game over abstract positions (see :mod:`dialogic.arena`) by backward
induction: O-to-move positions without legal moves are P-wins, a P-to-move
position is won if some move reaches a won position, an O-to-move position
if every move does.  Positions never labelled won are P-losses, which in
particular scores every repetition as a loss.

Where multiplicities are unbounded the game is solved twice per bound: once
in a version that favours O (a win there is a genuine win) and once in a
version that favours P (a loss there is a genuine loss).  Bounds grow until
one of the two settles the question or the schedule or node budget runs out.
"""

from __future__ import annotations

import json
import sys
import time
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional

from .arena import Arena, Limits, P_TURN, O_TURN
from .formula import Formula, to_text
from .game import Dialogue, Move, Player, Stance, is_won_by_p, statement_text
from .rules import PRESETS, RuleSet, admits_initial, legal_moves, parse_rules

__all__ = [
    "SearchConfig", "Status", "SearchStats", "Verdict", "StrategyTree",
    "search_strategy", "verify_strategy", "naive_search", "NaiveResult",
    "prune_corollary2", "strategy_to_json", "strategy_to_dot", "dialogue_tree",
    "render_tree", "abstract_position", "BudgetExceeded", "LIMIT_SCHEDULE", "Advisor", "dumps",
]

LIMIT_SCHEDULE = (Limits(1, 2), Limits(2, 4), Limits(3, 6))


class BudgetExceeded(Exception):
    pass


@dataclass(frozen=True)
class SearchConfig:
    max_depth: int = 40
    max_nodes: int = 10_000_000
    cycle_pruning: bool = True
    corollary2_pruning: Optional[bool] = None   # None: on iff the rule set is N

    def __post_init__(self):
        if not isinstance(self.max_depth, int) or self.max_depth < 1:
            raise ValueError("max_depth must be a positive integer")
        if not isinstance(self.max_nodes, int) or self.max_nodes < 1:
            raise ValueError("max_nodes must be a positive integer")

    def corollary2_for(self, rs: RuleSet) -> bool:
        if self.corollary2_pruning is None:
            return rs.rules == PRESETS["N"].rules
        return self.corollary2_pruning


class Status(Enum):
    VALID = "valid"
    INVALID = "invalid"
    UNKNOWN = "unknown"


@dataclass
class SearchStats:
    nodes: int = 0
    max_depth: int = 0
    elapsed: float = 0.0
    bound: Optional[tuple] = None

    def to_dict(self):
        return {"nodes": self.nodes, "max_depth": self.max_depth,
                "elapsed": round(self.elapsed, 6), "bound": list(self.bound) if self.bound else None}


@dataclass
class StrategyTree:
    move: Move
    children: list = field(default_factory=list)

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)

    def depth(self) -> int:
        return 1 + max((c.depth() for c in self.children), default=0)

    def branches(self) -> Iterator[tuple]:
        """Every root-to-leaf move sequence."""
        if not self.children:
            yield (self.move,)
            return
        for c in self.children:
            for b in c.branches():
                yield (self.move,) + b

    def nodes(self) -> Iterator["StrategyTree"]:
        yield self
        for c in self.children:
            yield from c.nodes()

    def to_dict(self) -> dict:
        m = self.move
        return {
            "player": m.player.value,
            "statement": statement_text(m.statement),
            "stance": m.stance.value,
            "ref": m.ref,
            "children": [c.to_dict() for c in self.children],
        }


@dataclass
class Verdict:
    status: Status
    formula: Formula
    rules: RuleSet
    stats: SearchStats
    strategy: Optional[StrategyTree] = None
    budget_exceeded: Optional[str] = None

    @property
    def valid(self) -> bool:
        return self.status is Status.VALID

    @property
    def invalid(self) -> bool:
        return self.status is Status.INVALID

    @property
    def unknown(self) -> bool:
        return self.status is Status.UNKNOWN

    def __str__(self):
        return f"{self.status.value}: {to_text(self.formula)} under {self.rules.name}"


# -------------------------------------------------------------- the solver

class _Solution:
    """Backward-induction solution of an arena from its root."""

    def __init__(self, arena: Arena, root, max_nodes: int):
        self.arena = arena
        self.index = {}
        self.states = []
        self.flags = []
        self.edges = []          # list of dict descriptor -> state index
        self.rank = []
        self._explore(root, max_nodes)
        self._induct()

    def _add(self, state) -> int:
        state, flag = self.arena.classify(state)
        i = self.index.get(state)
        if i is None:
            i = len(self.states)
            self.index[state] = i
            self.states.append(state)
            self.flags.append(flag)
            self.edges.append(None)
        return i

    def _explore(self, root, max_nodes):
        self._add(root)
        i = 0
        while i < len(self.states):
            if len(self.states) > max_nodes:
                raise BudgetExceeded("nodes")
            if self.flags[i] is None:
                self.edges[i] = {desc: self._add(nxt) for desc, nxt in self.arena.moves(self.states[i])}
            i += 1

    def _induct(self):
        n = len(self.states)
        rank = [None] * n
        preds = [[] for _ in range(n)]
        pending = [0] * n
        queue = deque()
        for i in range(n):
            if self.flags[i] == "win":
                rank[i] = 0
                queue.append(i)
                continue
            if self.flags[i] == "loss":
                continue
            succ = set(self.edges[i].values())
            for j in succ:
                preds[j].append(i)
            pending[i] = len(succ)
            if not succ and self.states[i][0] == O_TURN:
                rank[i] = 0
                queue.append(i)
        while queue:
            j = queue.popleft()
            for i in preds[j]:
                if rank[i] is not None:
                    continue
                if self.states[i][0] == P_TURN:
                    rank[i] = rank[j] + 1
                    queue.append(i)
                else:
                    pending[i] -= 1
                    if pending[i] == 0:
                        rank[i] = rank[j] + 1
                        queue.append(i)
        self.rank = rank

    def won(self, state) -> Optional[int]:
        i = self.index.get(state)
        return None if i is None else self.rank[i]


def _solve(phi: Formula, rs: RuleSet, cfg: SearchConfig, stats: SearchStats):
    """Return (status, solution-or-None, budget_reason)."""
    corollary2 = cfg.corollary2_for(rs)
    nodes_left = cfg.max_nodes
    exact = Arena(phi, rs, "exact", corollary2=corollary2)
    if exact.bounded:
        schedule = [None]
    else:
        schedule = list(LIMIT_SCHEDULE)
    reason = None
    for limits in schedule:
        if limits is None:
            under = over = exact
        else:
            under = Arena(phi, rs, "under", limits, corollary2)
            over = Arena(phi, rs, "over", limits, corollary2)
        try:
            sol_under = _Solution(under, under.root(), nodes_left)
        except BudgetExceeded:
            return Status.UNKNOWN, None, "nodes"
        stats.nodes += len(sol_under.states)
        nodes_left -= len(sol_under.states)
        stats.bound = None if limits is None else (limits.counts, limits.stack)
        r = sol_under.won(sol_under.states[0])
        if r is not None:
            stats.max_depth = r
            if r > cfg.max_depth:
                return Status.UNKNOWN, None, "depth"
            return Status.VALID, sol_under, None
        if over is under:
            return Status.INVALID, None, None
        try:
            sol_over = _Solution(over, over.root(), max(nodes_left, 1))
        except BudgetExceeded:
            return Status.UNKNOWN, None, "nodes"
        stats.nodes += len(sol_over.states)
        nodes_left -= len(sol_over.states)
        if sol_over.won(sol_over.states[0]) is None:
            return Status.INVALID, None, None
        reason = "bound"
        if nodes_left <= 0:
            return Status.UNKNOWN, None, "nodes"
    return Status.UNKNOWN, None, reason


def _extract(sol: _Solution, rs: RuleSet, d: Dialogue, state) -> StrategyTree:
    arena = sol.arena
    node = StrategyTree(d.moves[-1])
    legal = legal_moves(d, rs)
    i = sol.index[state]
    edges = sol.edges[i]
    if d.to_move is Player.O:
        for m in legal:
            nxt = sol.states[edges[arena.describe(d, m)]]
            node.children.append(_extract(sol, rs, d.extend(m), nxt))
        return node
    best = None
    for m in legal:
        j = edges.get(arena.describe(d, m))
        if j is None or sol.rank[j] is None:
            continue
        if best is None or sol.rank[j] < best[0]:
            best = (sol.rank[j], m, j)
    _, m, j = best
    node.children.append(_extract(sol, rs, d.extend(m), sol.states[j]))
    return node


def _bounded_search(phi, rs, cfg, stats):
    """Depth-limited AND-OR search without repetition detection."""
    arena = Arena(phi, rs, "exact", corollary2=cfg.corollary2_for(rs))
    memo = {}
    cut = [False]

    def win(state, k):
        key = (state, k)
        if key in memo:
            return memo[key]
        stats.nodes += 1
        if stats.nodes > cfg.max_nodes:
            raise BudgetExceeded("nodes")
        moves = arena.moves(state)
        if state[0] == O_TURN:
            if not moves:
                res = True
            elif k == 0:
                cut[0] = True
                res = False
            else:
                res = all(win(nxt, k - 1) for _, nxt in moves)
        else:
            if k == 0:
                cut[0] = bool(moves)
                res = False
            else:
                res = any(win(nxt, k - 1) for _, nxt in moves)
        memo[key] = res
        return res

    root = arena.root()
    if root is None:
        return Status.INVALID, None
    for k in range(0, cfg.max_depth + 1):
        cut[0] = False
        if win(root, k):
            stats.max_depth = k
            return Status.VALID, (arena, win, k)
        if not cut[0]:
            return Status.INVALID, None
    return Status.UNKNOWN, None


def _extract_bounded(arena, win, rs, d, state, k) -> StrategyTree:
    node = StrategyTree(d.moves[-1])
    legal = legal_moves(d, rs)
    succ = dict(arena.moves(state))
    if d.to_move is Player.O:
        for m in legal:
            node.children.append(_extract_bounded(arena, win, rs, d.extend(m), succ[arena.describe(d, m)], k - 1))
        return node
    for m in legal:
        nxt = succ.get(arena.describe(d, m))
        if nxt is not None and win(nxt, k - 1):
            node.children.append(_extract_bounded(arena, win, rs, d.extend(m), nxt, k - 1))
            return node
    raise AssertionError("no winning P move found during extraction")


def search_strategy(phi: Formula, rs: RuleSet | str, cfg: Optional[SearchConfig] = None) -> Verdict:
    """Decide ``phi`` under ``rs``; Valid verdicts carry a winning strategy."""
    rs = parse_rules(rs)
    cfg = cfg or SearchConfig()
    stats = SearchStats()
    t0 = time.perf_counter()
    verdict = Verdict(Status.UNKNOWN, phi, rs, stats)
    if not admits_initial(phi, rs):
        verdict.status = Status.INVALID
    elif cfg.cycle_pruning:
        status, sol, reason = _solve(phi, rs, cfg, stats)
        verdict.status, verdict.budget_exceeded = status, reason
        if status is Status.VALID:
            d = Dialogue.start(phi)
            verdict.strategy = _extract(sol, rs, d, sol.states[0])
    else:
        try:
            status, found = _bounded_search(phi, rs, cfg, stats)
        except BudgetExceeded:
            status, found, verdict.budget_exceeded = Status.UNKNOWN, None, "nodes"
        verdict.status = status
        if status is Status.UNKNOWN and verdict.budget_exceeded is None:
            verdict.budget_exceeded = "depth"
        if status is Status.VALID:
            arena, win, k = found
            verdict.strategy = _extract_bounded(arena, win, rs, Dialogue.start(phi), arena.root(), k)
    stats.elapsed = time.perf_counter() - t0
    return verdict


# ------------------------------------------------------------ verification

def verify_strategy(s: Optional[StrategyTree], phi: Formula, rs: RuleSet | str) -> bool:
    """Check the four winning-strategy conditions against fresh legal moves."""
    rs = parse_rules(rs)
    if s is None or not admits_initial(phi, rs):
        return False
    root = s.move
    if root.player is not Player.P or root.stance is not Stance.INITIAL or root.statement != phi or root.ref is not None:
        return False
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 10_000))
    try:
        return _verify(s, Dialogue.start(phi), rs)
    finally:
        sys.setrecursionlimit(limit)


def _verify(node: StrategyTree, d: Dialogue, rs: RuleSet) -> bool:
    legal = legal_moves(d, rs)
    kids = [c.move for c in node.children]
    if len(d) % 2 == 1:
        # P has just moved: every O option must be present, nothing else.
        if not node.children:
            return is_won_by_p(d, legal)
        if len(set(kids)) != len(kids) or set(kids) != set(legal):
            return False
    else:
        if len(node.children) != 1 or kids[0] not in legal:
            return False
    return all(_verify(c, d.extend(c.move), rs) for c in node.children)


# ---------------------------------------------------------- naive oracle

@dataclass(frozen=True)
class NaiveResult:
    """Bounded minimax outcome.  ``win`` is None when the node budget ran out."""

    win: Optional[bool]
    depth: int

    @property
    def conclusive(self) -> bool:
        return self.win is not None

    def __str__(self):
        if self.win is None:
            return f"Inconclusive({self.depth})"
        return f"{'WinWithin' if self.win else 'NoWinWithin'}({self.depth})"


def naive_search(phi: Formula, rs: RuleSet | str, depth: int, max_nodes: Optional[int] = None) -> NaiveResult:
    """Literal bounded minimax over raw dialogues: can P force a win within
    ``depth`` moves after the initial one?  A win reports the least such depth."""
    rs = parse_rules(rs)
    if depth < 1:
        raise ValueError("depth must be positive")
    if not admits_initial(phi, rs):
        return NaiveResult(False, depth)
    counter = [0]

    def win(d: Dialogue, k: int) -> bool:
        counter[0] += 1
        if max_nodes is not None and counter[0] > max_nodes:
            raise BudgetExceeded("nodes")
        legal = legal_moves(d, rs)
        if d.to_move is Player.O:
            if not legal:
                return True
            if k == 0:
                return False
            return all(win(d.extend(m), k - 1) for m in legal)
        if k == 0:
            return False
        return any(win(d.extend(m), k - 1) for m in legal)

    d0 = Dialogue.start(phi)
    try:
        for k in range(0, depth + 1, 2):
            if win(d0, k):
                return NaiveResult(True, k)
    except BudgetExceeded:
        return NaiveResult(None, depth)
    return NaiveResult(False, depth)


def prune_corollary2(d: Dialogue, candidates: list[Move], rs: RuleSet | str = "N") -> list[Move]:
    """Drop P moves after which O could defend.  Under N such a defence can be
    repeated forever, so these moves never lie on a winning strategy."""
    rs = parse_rules(rs)
    keep = []
    for m in candidates:
        after = d.extend(m)
        if not any(o.stance is Stance.DEFEND for o in legal_moves(after, rs)):
            keep.append(m)
    return keep


def abstract_position(d: Dialogue, rs: RuleSet | str):
    """The index-free position reached by ``d`` (exact, no bounding)."""
    rs = parse_rules(rs)
    arena = Arena(d.initial, rs, "exact")
    return arena.decode(arena.fold(d))


# ----------------------------------------------------------------- exports

def strategy_to_json(verdict: Verdict) -> dict:
    return {
        "formula": to_text(verdict.formula),
        "rules": verdict.rules.name,
        "verdict": verdict.status.value,
        "strategy": verdict.strategy.to_dict() if verdict.strategy else None,
    }


def _dot_label(m: Move, index: int) -> str:
    tag = "initial" if m.stance is Stance.INITIAL else f"{m.stance.value[0].upper()},{m.ref}"
    return f"{index}: {m.player.value} {statement_text(m.statement)} [{tag}]".replace('"', '\\"')


def strategy_to_dot(tree: Optional[StrategyTree], title: str = "strategy") -> str:
    """DOT rendering: P nodes boxed, O nodes oval."""
    lines = [f'digraph "{title}" {{', "  node [fontname=monospace];"]
    if tree is not None:
        counter = [0]

        def walk(node: StrategyTree, depth: int) -> str:
            name = f"n{counter[0]}"
            counter[0] += 1
            shape = "box" if node.move.player is Player.P else "oval"
            lines.append(f'  {name} [shape={shape}, label="{_dot_label(node.move, depth)}"];')
            for c in node.children:
                lines.append(f"  {name} -> {walk(c, depth + 1)};")
            return name

        walk(tree, 0)
    lines.append("}")
    return "\n".join(lines) + "\n"


def dialogue_tree(phi: Formula, rs: RuleSet | str, depth: int) -> Optional[StrategyTree]:
    """The S-dialogue tree truncated to ``depth`` moves after the initial one.
    Truncated nodes are recorded in ``StrategyTree.children`` as None-free;
    use :func:`render_tree` to see truncation marks."""
    rs = parse_rules(rs)
    if not admits_initial(phi, rs):
        return None

    def grow(d: Dialogue, k: int) -> StrategyTree:
        node = StrategyTree(d.moves[-1])
        node.truncated = False
        legal = legal_moves(d, rs)
        if k == 0:
            node.truncated = bool(legal)
            return node
        node.children = [grow(d.extend(m), k - 1) for m in legal]
        return node

    return grow(Dialogue.start(phi), depth)


def render_tree(tree: Optional[StrategyTree], phi: Formula) -> str:
    if tree is None:
        return f"(empty: no admissible dialogue commences with {to_text(phi)})\n"
    out = []

    def walk(node: StrategyTree, index: int, indent: str):
        m = node.move
        tag = "initial" if m.stance is Stance.INITIAL else f"[{m.stance.value[0].upper()},{m.ref}]"
        mark = " ..." if getattr(node, "truncated", False) else ""
        if not node.children and not mark and index % 2 == 0:
            mark = "  (P wins)"
        elif not node.children and not mark:
            mark = "  (P stuck)"
        out.append(f"{indent}{index}. {m.player.value} {statement_text(m.statement)} {tag}{mark}")
        for c in node.children:
            walk(c, index + 1, indent + "  ")

    walk(tree, 0, "")
    return "\n".join(out) + "\n"


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, ensure_ascii=False)


class Advisor:
    """Move hints for positions off any extracted strategy.

    Solves the under-approximating game once; ``rank(d)`` is the number of
    moves within which P can force a win from the end of ``d``, or None when
    no such win was found.
    """

    def __init__(self, phi: Formula, rs: RuleSet | str, cfg: Optional[SearchConfig] = None):
        rs = parse_rules(rs)
        cfg = cfg or SearchConfig()
        self.rules = rs
        self.sol = None
        if admits_initial(phi, rs):
            arena = Arena(phi, rs, "exact", corollary2=False)
            if not arena.bounded:
                arena = Arena(phi, rs, "under", LIMIT_SCHEDULE[-1], False)
            try:
                self.sol = _Solution(arena, arena.root(), cfg.max_nodes)
            except BudgetExceeded:
                self.sol = None

    def rank(self, d: Dialogue) -> Optional[int]:
        if self.sol is None:
            return None
        i = 0
        for n in range(1, len(d)):
            edges = self.sol.edges[i]
            if not edges:
                return None
            i = edges.get(self.sol.arena.describe(Dialogue(d.moves[:n], validate=False), d.moves[n]))
            if i is None:
                return None
        return self.sol.rank[i]

    def choose(self, d: Dialogue) -> Optional[Move]:
        legal = legal_moves(d, self.rules)
        if not legal:
            return None
        ranked = [(self.rank(d.extend(m)), k, m) for k, m in enumerate(legal)]
        if d.to_move is Player.P:
            wins = [(r, k, m) for r, k, m in ranked if r is not None]
            return min(wins)[2] if wins else legal[0]
        spoilers = [m for r, _, m in ranked if r is None]
        if spoilers:
            return spoilers[0]
        return max(ranked, key=lambda t: (t[0], -t[1]))[2]
