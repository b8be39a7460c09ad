"""Command line: ``dialogic check|tree|play|experiment``.

Exit status: 0 valid (or expectations met), 1 invalid (or expectations
failed), 2 unknown, 64 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Callable, Optional

from .formula import FormulaSyntaxError, parse, to_text
from .game import Dialogue, Player
from .rules import admits_initial, legal_moves, parse_rules
from .search import (
    Advisor, SearchConfig, Status, dialogue_tree, dumps, render_tree, search_strategy,
    strategy_to_dot, strategy_to_json,
)

EXIT_VALID, EXIT_INVALID, EXIT_UNKNOWN, EXIT_USAGE = 0, 1, 2, 64
EXIT_FOR = {Status.VALID: EXIT_VALID, Status.INVALID: EXIT_INVALID, Status.UNKNOWN: EXIT_UNKNOWN}
EXPERIMENTS = ("closure", "compare", "audit", "paper-tables")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {n}")
    return n


def _search_flags(p):
    p.add_argument("--rules", default="N", help="preset (N, CL, CLprime, D, D+E) or rule list like D10+D13")
    p.add_argument("--max-depth", type=_positive, default=40)
    p.add_argument("--max-nodes", type=_positive, default=10_000_000)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dialogic", description="Dialogue games for propositional validity.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", help="decide validity and print the winning strategy")
    p.add_argument("formula")
    _search_flags(p)
    p.add_argument("--output", choices=("text", "json", "dot"), default="text")

    p = sub.add_parser("tree", help="print the dialogue tree truncated at a depth")
    p.add_argument("formula")
    _search_flags(p)
    p.add_argument("--depth", type=_positive, default=4)
    p.add_argument("--output", choices=("text", "json"), default="text")

    p = sub.add_parser("play", help="play one side of a dialogue against the engine")
    p.add_argument("formula")
    _search_flags(p)
    p.add_argument("--as", dest="side", choices=("P", "O"), default="O")

    p = sub.add_parser("experiment", help="corpus experiments with report files")
    p.add_argument("name", choices=EXPERIMENTS)
    p.add_argument("--rules", action="append", help="rule set (give twice for compare)")
    p.add_argument("--max-depth", type=_positive, default=40)
    p.add_argument("--max-nodes", type=_positive, default=10_000_000)
    p.add_argument("--max-size", type=_positive, default=None)
    p.add_argument("--atoms", default="p,q")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--extended", action="store_true",
                   help="closure: pair every valid formula with every corpus conclusion")
    p.add_argument("--extra", action="append", default=[], metavar="FORMULA",
                   help="compare: also decide this formula (repeatable)")
    p.add_argument("--out", default="reports", help="report directory (default ./reports)")
    return parser


def _formula(text: str):
    try:
        return parse(text)
    except FormulaSyntaxError as e:
        raise UsageError(f"{e}\n  {text}\n  {' ' * e.offset}^")


def _rules(text: str):
    try:
        return parse_rules(text)
    except ValueError as e:
        raise UsageError(str(e))


def _config(args) -> SearchConfig:
    return SearchConfig(max_depth=args.max_depth, max_nodes=args.max_nodes)


# ---------------------------------------------------------------- commands

def cmd_check(args, out) -> int:
    phi, rs = _formula(args.formula), _rules(args.rules)
    v = search_strategy(phi, rs, _config(args))
    if args.output == "json":
        out.write(dumps(strategy_to_json(v)) + "\n")
    elif args.output == "dot":
        out.write(strategy_to_dot(v.strategy, f"{to_text(phi)} under {rs.name}"))
    else:
        st = v.stats
        out.write(f"{v.status.value}: {to_text(phi)} under {rs.name} ({rs.listing})\n")
        out.write(f"  positions {st.nodes}, strategy depth {st.max_depth}, {st.elapsed:.3f}s\n")
        if v.budget_exceeded:
            out.write(f"  undecided: {v.budget_exceeded} budget exhausted\n")
        if v.strategy is not None:
            out.write("winning strategy:\n")
            out.write(render_tree(v.strategy, phi))
    return EXIT_FOR[v.status]


def cmd_tree(args, out) -> int:
    phi, rs = _formula(args.formula), _rules(args.rules)
    tree = dialogue_tree(phi, rs, args.depth)
    if args.output == "json":
        out.write(dumps({"formula": to_text(phi), "rules": rs.name, "depth": args.depth,
                         "tree": tree.to_dict() if tree else None}) + "\n")
    else:
        out.write(render_tree(tree, phi))
    return 0


def play_session(phi, rs, human: Player, cfg: Optional[SearchConfig] = None,
                 read: Callable[[str], str] = input, write: Callable[[str], None] = print,
                 max_moves: int = 200) -> str:
    """Run one dialogue with ``human`` choosing that side's moves.

    The engine follows a winning strategy as P when one exists and falls
    back on :class:`Advisor` hints otherwise.  Returns ``"P"`` when P wins,
    ``"O"`` when P is stuck, ``"quit"`` or ``"limit"``.
    """
    rs = parse_rules(rs)
    if not admits_initial(phi, rs):
        write(f"No dialogue can open with {to_text(phi)} under {rs.name}; P has no first move.")
        return "O"
    verdict = search_strategy(phi, rs, cfg)
    node = verdict.strategy
    advisor = None
    d = Dialogue.start(phi)
    write(f"{rs.name} dialogue for {to_text(phi)}; you play {human.value}.")
    write(f"0. {d.moves[0]}")
    while len(d) <= max_moves:
        legal = legal_moves(d, rs)
        if not legal:
            winner = "P" if d.to_move is Player.O else "O"
            write("O has no move: P wins." if winner == "P" else "P has no move: P does not win this dialogue.")
            return winner
        if d.to_move is human:
            for k, m in enumerate(legal, 1):
                write(f"  [{k}] {m}")
            while True:
                answer = read("move> ").strip()
                if answer.lower() in ("q", "quit"):
                    write("Session ended.")
                    return "quit"
                if answer.isdigit() and 1 <= int(answer) <= len(legal):
                    move = legal[int(answer) - 1]
                    break
                write(f"Enter a number from 1 to {len(legal)}, or quit.")
        else:
            move = None
            if node is not None and node.children and d.to_move is Player.P:
                move = node.children[0].move
            if move is None:
                if advisor is None:
                    advisor = Advisor(phi, rs, cfg)
                move = advisor.choose(d)
                node = None
        if node is not None:
            node = next((c for c in node.children if c.move == move), None)
        d = d.extend(move)
        write(f"{len(d) - 1}. {move}")
    write("Move limit reached.")
    return "limit"


def cmd_play(args, out, stdin=None) -> int:
    stdin = stdin or sys.stdin
    if not stdin.isatty():
        raise UsageError("play needs an interactive terminal")
    phi, rs = _formula(args.formula), _rules(args.rules)
    play_session(phi, rs, Player(args.side), _config(args),
                 write=lambda s: print(s, file=out, flush=True))
    return 0


def _write_report(report: dict, out_dir: Path, stem: str) -> list[Path]:
    from .figures import plot_report

    out_dir.mkdir(parents=True, exist_ok=True)
    paths = [out_dir / f"{stem}.json", out_dir / f"{stem}.txt", out_dir / f"{stem}.png"]
    paths[0].write_text(dumps(report) + "\n")
    lines = [f"experiment: {report['experiment']}", f"rules: {', '.join(report['rules'])}",
             f"corpus: {json.dumps(report['corpus'])}"]
    lines += [f"{k}: {json.dumps(v, ensure_ascii=False)}" for k, v in report["summary"].items()]
    if report["counterexamples"]:
        lines.append("counterexamples:")
        lines += [f"  {json.dumps(c, ensure_ascii=False)}" for c in report["counterexamples"]]
    paths[1].write_text("\n".join(lines) + "\n")
    plot_report(report, paths[2])
    return paths


def cmd_experiment(args, out) -> int:
    from . import harness

    cfg = _config(args)
    atoms = [a.strip() for a in args.atoms.split(",") if a.strip()]
    try:
        atoms = [parse(a) for a in atoms]
    except FormulaSyntaxError as e:
        raise UsageError(f"bad atom list {args.atoms!r}: {e}")
    if not atoms or any(type(a).__name__ != "Atom" for a in atoms):
        raise UsageError(f"bad atom list {args.atoms!r}")
    names = args.rules or []
    if args.name == "closure":
        rs = _rules(names[0] if names else "N")
        rep = harness.closure_test(rs, args.max_size or 6, atoms, cfg, extended=args.extended)
        report = rep.to_dict()
        ok = not rep.unknowns and (not rep.closed if rs.name == "CLprime" else rep.closed)
        stem = f"closure-{rs.name}-{args.max_size or 6}"
        note = f"{rep.valid_count} valid, {rep.mp_pairs_checked} MP pairs, {len(rep.counterexamples)} counterexamples"
    elif args.name == "compare":
        if len(names) == 0:
            names = ["N", "CL"]
        if len(names) != 2:
            raise UsageError("compare needs exactly two --rules options")
        a, b = _rules(names[0]), _rules(names[1])
        extra = [_formula(t) for t in args.extra]
        cmp = harness.compare_rule_sets(a, b, args.max_size or 6, atoms, cfg, extra=extra)
        report = cmp.to_dict()
        ok = not cmp.unknowns
        stem = f"compare-{a.name}-{b.name}-{args.max_size or 6}"
        note = f"{cmp.relation} (A={a.name}, B={b.name})"
    elif args.name == "audit":
        report = harness.audit_report(args.max_size or 5, atoms, cfg, seed=args.seed)
        ok = report["summary"]["violations"] == 0
        stem = f"audit-{args.max_size or 5}"
        note = f"{report['summary']['violations']} violations"
    else:
        report = harness.paper_tables(cfg)
        ok = report["summary"]["ok"]
        stem = "paper-tables"
        note = f"{report['summary']['correct']}/{report['summary']['total']} as expected"
    stem = stem.replace("+", "")
    paths = _write_report(report, Path(args.out), stem)
    out.write(f"{args.name}: {note}; {'expectations met' if ok else 'EXPECTATIONS FAILED'}\n")
    for p in paths:
        out.write(f"  wrote {p}\n")
    return EXIT_VALID if ok else EXIT_INVALID


COMMANDS = {"check": cmd_check, "tree": cmd_tree, "play": cmd_play, "experiment": cmd_experiment}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as e:
        print(f"dialogic: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
