"""Corpus experiments: modus-ponens closure, rule-set comparison, theorem
audits and the golden list of N-verdicts.  Every experiment produces a plain
dict following one report layout so the CLI can write it out unchanged."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .formula import And, Atom, Formula, Imp, Neg, enumerate_formulas, formula_key, parse, to_text
from .game import Player, Stance
from .rules import RuleSet, parse_rules
from .search import SearchConfig, Status, Verdict, search_strategy

__all__ = [
    "Evaluator", "ClosureReport", "Violation", "Comparison", "closure_test",
    "characterization_audit", "compare_rule_sets", "paper_tables",
    "PAPER_VALID", "PAPER_INVALID", "corpus",
]

PAPER_VALID = (
    "p | ~p", "~p | ~~p", "(p -> q) | (p -> ~q)", "(p -> q) | (q -> p)",
    "~~p -> p", "p -> ~~p", "p -> p | q", "p -> p & p", "~p -> p -> q",
    "~(p | ~p) -> q", "~(p & q) -> ~p | ~q", "~(p | q) -> ~p & ~q",
)
PAPER_INVALID = (
    "((p -> q) -> p) -> p", "p -> (p -> q) -> q", "p & (p -> q) -> q", "p & q -> p",
    "~p | ~q -> ~(p & q)", "~(p & q)", "p & p -> ~~(p & p)", "p & p | ~(p & p)",
    "(p -> ~q | ~r) -> (~p -> ~q) | (~p -> ~r)",
)


def corpus(max_size: int, atoms: Sequence) -> list[Formula]:
    return list(enumerate_formulas(max_size, atoms))


def _atom_names(atoms: Sequence) -> list[str]:
    return [a.name if isinstance(a, Atom) else str(a) for a in atoms]


class Evaluator:
    """Verdict cache shared by the checks of one experiment run."""

    def __init__(self, cfg: Optional[SearchConfig] = None):
        self.cfg = cfg or SearchConfig()
        self._cache: dict = {}

    def __call__(self, phi: Formula, rs: RuleSet | str) -> Verdict:
        rs = parse_rules(rs)
        key = (phi, rs.rules)
        v = self._cache.get(key)
        if v is None:
            v = search_strategy(phi, rs, self.cfg)
            self._cache[key] = v
        return v

    def status(self, phi: Formula, rs) -> Status:
        return self(phi, rs).status


def _result(v: Verdict, **extra) -> dict:
    row = {"formula": to_text(v.formula), "verdict": v.status.value,
           "nodes": v.stats.nodes}
    if v.budget_exceeded:
        row["budget"] = v.budget_exceeded
    row.update(extra)
    return row


def _report(experiment: str, rules: Iterable[RuleSet], corpus_info: dict, results: list,
            counterexamples: list, summary: dict, **extra) -> dict:
    out = {
        "experiment": experiment,
        "rules": [r.name for r in rules],
        "corpus": corpus_info,
        "results": results,
        "counterexamples": counterexamples,
        "summary": summary,
    }
    out.update(extra)
    return out


# ----------------------------------------------------------------- closure

@dataclass
class ClosureReport:
    rules: RuleSet
    max_size: int
    atoms: list
    extended: bool = False
    valid_count: int = 0
    mp_pairs_checked: int = 0
    counterexamples: list = field(default_factory=list)   # (phi, psi) pairs
    unknowns: list = field(default_factory=list)
    verdicts: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def closed(self) -> bool:
        return not self.counterexamples

    def has_counterexample(self, phi: Formula | str, psi: Formula | str) -> bool:
        phi = parse(phi) if isinstance(phi, str) else phi
        psi = parse(psi) if isinstance(psi, str) else psi
        return (phi, psi) in self.counterexamples

    def to_dict(self) -> dict:
        return _report(
            "closure", [self.rules],
            {"max_size": self.max_size, "atoms": self.atoms, "formulas": len(self.verdicts),
             "extended": self.extended},
            [_result(v) for v in self.verdicts],
            [{"premise": to_text(a), "conclusion": to_text(b)} for a, b in self.counterexamples],
            {"valid": self.valid_count, "mp_pairs_checked": self.mp_pairs_checked,
             "counterexamples": len(self.counterexamples), "unknowns": len(self.unknowns),
             "closed": self.closed, "elapsed": round(self.elapsed, 3)},
            unknowns=[to_text(f) for f in self.unknowns],
        )


def closure_test(rs: RuleSet | str, max_size: int, atoms: Sequence,
                 cfg: Optional[SearchConfig] = None, evaluator: Optional[Evaluator] = None,
                 extended: bool = False) -> ClosureReport:
    """Check modus ponens over the corpus: whenever phi and phi -> psi are
    both valid, psi must be too.

    By default only implications inside the corpus are used.  With
    ``extended`` every valid corpus formula is paired with every corpus
    formula as conclusion and the implication is decided directly, even
    when it is larger than ``max_size``.
    """
    rs = parse_rules(rs)
    ev = evaluator or Evaluator(cfg)
    t0 = time.perf_counter()
    rep = ClosureReport(rs, max_size, _atom_names(atoms), extended)
    forms = corpus(max_size, atoms)
    for f in forms:
        v = ev(f, rs)
        rep.verdicts.append(v)
        if v.unknown:
            rep.unknowns.append(f)
    valid = {v.formula for v in rep.verdicts if v.valid}
    rep.valid_count = len(valid)
    if extended:
        candidates = [(phi, psi) for phi in forms if phi in valid for psi in forms]
    else:
        candidates = [(f.left, f.right) for f in forms if isinstance(f, Imp) and f in valid]
    for phi, psi in candidates:
        if ev(phi, rs).status is not Status.VALID:
            continue
        s_imp = ev(Imp(phi, psi), rs).status
        if s_imp is Status.UNKNOWN and Imp(phi, psi) not in rep.unknowns:
            rep.unknowns.append(Imp(phi, psi))
        if s_imp is not Status.VALID:
            continue
        rep.mp_pairs_checked += 1
        s_psi = ev(psi, rs).status
        if s_psi is Status.INVALID:
            rep.counterexamples.append((phi, psi))
        elif s_psi is Status.UNKNOWN and psi not in rep.unknowns:
            rep.unknowns.append(psi)
    rep.counterexamples.sort(key=lambda pr: (formula_key(pr[0]), formula_key(pr[1])))
    rep.elapsed = time.perf_counter() - t0
    return rep


# ------------------------------------------------------------------ audits

@dataclass(frozen=True)
class Violation:
    check: str
    formula: str
    detail: str = ""


AUDIT_CHECKS = ("implication", "negation", "weakening", "no-o-defence", "conjunction", "contraposition")


def characterization_audit(max_size: int, atoms: Sequence, cfg: Optional[SearchConfig] = None,
                           seed: int = 0, samples: int = 20, evaluator: Optional[Evaluator] = None,
                           counts: Optional[dict] = None) -> list[Violation]:
    """Audit structural facts about N-validity on the corpus.

    ``implication``: a valid phi -> psi has phi atomic, phi a negation, or psi valid.
    ``negation``: a valid negation is ~~chi with chi valid.
    ``weakening``: for valid psi, phi -> psi is valid for ``samples`` seeded phi.
    ``no-o-defence``: no extracted winning strategy contains an O defence.
    ``conjunction``: phi & psi is valid iff both conjuncts are.
    ``contraposition``: valid phi -> psi gives valid ~psi -> ~phi.

    Returns the violations; ``counts`` (if given) receives checks per kind.
    """
    ev = evaluator or Evaluator(cfg)
    N = parse_rules("N")
    rng = random.Random(seed)
    forms = corpus(max_size, atoms)
    tally = {c: 0 for c in AUDIT_CHECKS}
    out: list[Violation] = []

    def valid(f):
        v = ev(f, N)
        if v.unknown:
            out.append(Violation("unknown", to_text(f), v.budget_exceeded or ""))
        return v.valid

    for f in forms:
        v = ev(f, N)
        if v.valid:
            tally["no-o-defence"] += 1
            if any(n.move.player is Player.O and n.move.stance is Stance.DEFEND for n in v.strategy.nodes()):
                out.append(Violation("no-o-defence", to_text(f), "strategy contains an O defence"))
        if isinstance(f, Imp) and v.valid:
            tally["implication"] += 1
            if not (isinstance(f.left, (Atom, Neg)) or valid(f.right)):
                out.append(Violation("implication", to_text(f), "antecedent compound, consequent invalid"))
            tally["contraposition"] += 1
            contra = Imp(Neg(f.right), Neg(f.left))
            if not valid(contra):
                out.append(Violation("contraposition", to_text(f), to_text(contra)))
        if isinstance(f, Neg) and v.valid:
            tally["negation"] += 1
            if not (isinstance(f.body, Neg) and valid(f.body.body)):
                out.append(Violation("negation", to_text(f), "not a double negation of a valid formula"))
        if isinstance(f, And):
            tally["conjunction"] += 1
            if v.valid != (valid(f.left) and valid(f.right)):
                out.append(Violation("conjunction", to_text(f), f"conjunction {v.status.value}"))
        if v.valid:
            for phi in (rng.choice(forms) for _ in range(samples)):
                tally["weakening"] += 1
                if not valid(Imp(phi, f)):
                    out.append(Violation("weakening", to_text(Imp(phi, f)), f"seed {seed}"))
    if counts is not None:
        counts.update(tally)
    return out


def audit_report(max_size: int, atoms: Sequence, cfg: Optional[SearchConfig] = None,
                 seed: int = 0, samples: int = 20) -> dict:
    ev = Evaluator(cfg)
    t0 = time.perf_counter()
    tally: dict = {}
    violations = characterization_audit(max_size, atoms, seed=seed, samples=samples,
                                        evaluator=ev, counts=tally)
    forms = corpus(max_size, atoms)
    return _report(
        "audit", [parse_rules("N")],
        {"max_size": max_size, "atoms": _atom_names(atoms), "formulas": len(forms)},
        [_result(ev(f, "N")) for f in forms],
        [{"check": v.check, "formula": v.formula, "detail": v.detail} for v in violations],
        {"checks": tally, "violations": len(violations), "seed": seed, "samples": samples,
         "elapsed": round(time.perf_counter() - t0, 3)},
    )


# -------------------------------------------------------------- comparison

@dataclass
class Comparison:
    a: RuleSet
    b: RuleSet
    max_size: int
    atoms: list
    a_only: list = field(default_factory=list)
    b_only: list = field(default_factory=list)
    both: list = field(default_factory=list)
    neither: list = field(default_factory=list)
    unknowns: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    extra: list = field(default_factory=list)

    @property
    def relation(self) -> str:
        if self.a_only and self.b_only:
            return "incomparable"
        if self.a_only:
            return "B ⊂ A"
        if self.b_only:
            return "A ⊂ B"
        return "A = B"

    @property
    def a_subset_b(self) -> bool:
        return not self.a_only

    def to_dict(self) -> dict:
        txt = lambda fs: [to_text(f) for f in fs]
        return _report(
            "compare", [self.a, self.b],
            {"max_size": self.max_size, "atoms": self.atoms, "formulas": len(self.rows),
             "extra": txt(self.extra)},
            self.rows,
            [{"valid_in": self.a.name, "formula": to_text(f)} for f in self.a_only]
            + [{"valid_in": self.b.name, "formula": to_text(f)} for f in self.b_only],
            {"relation": self.relation, "a_only": len(self.a_only), "b_only": len(self.b_only),
             "both": len(self.both), "neither": len(self.neither), "unknowns": len(self.unknowns)},
            witnesses={"a_only": txt(self.a_only), "b_only": txt(self.b_only)},
            unknowns=txt(self.unknowns),
        )


def compare_rule_sets(a: RuleSet | str, b: RuleSet | str, max_size: int, atoms: Sequence,
                      cfg: Optional[SearchConfig] = None, evaluator: Optional[Evaluator] = None,
                      extra: Sequence[Formula | str] = ()) -> Comparison:
    """Classify every corpus formula, plus any ``extra`` formulas (typically
    named witnesses too large for the corpus), by validity under A and B."""
    a, b = parse_rules(a), parse_rules(b)
    ev = evaluator or Evaluator(cfg)
    cmp = Comparison(a, b, max_size, _atom_names(atoms))
    forms = corpus(max_size, atoms)
    seen = set(forms)
    for f in extra:
        f = parse(f) if isinstance(f, str) else f
        if f not in seen:
            seen.add(f)
            forms.append(f)
            cmp.extra.append(f)
    for f in forms:
        va, vb = ev(f, a), ev(f, b)
        cmp.rows.append({"formula": to_text(f), "verdict": f"{va.status.value}/{vb.status.value}",
                         a.name: va.status.value, b.name: vb.status.value})
        if va.unknown or vb.unknown:
            cmp.unknowns.append(f)
        elif va.valid and vb.valid:
            cmp.both.append(f)
        elif va.valid:
            cmp.a_only.append(f)
        elif vb.valid:
            cmp.b_only.append(f)
        else:
            cmp.neither.append(f)
    return cmp


# ----------------------------------------------------------- golden verdicts

def paper_tables(cfg: Optional[SearchConfig] = None) -> dict:
    """Decide the fixed list of N-validities and N-invalidities."""
    N = parse_rules("N")
    ev = Evaluator(cfg)
    t0 = time.perf_counter()
    rows, mismatches = [], []
    for expected, texts in (("valid", PAPER_VALID), ("invalid", PAPER_INVALID)):
        for t in texts:
            v = ev(parse(t), N)
            ok = v.status.value == expected
            rows.append(_result(v, expected=expected, ok=ok))
            if not ok:
                mismatches.append({"formula": to_text(v.formula), "expected": expected, "got": v.status.value})
    return _report(
        "paper-tables", [N], {"fixed": len(rows)}, rows, mismatches,
        {"total": len(rows), "correct": len(rows) - len(mismatches), "mismatches": len(mismatches),
         "unknowns": sum(r["verdict"] == "unknown" for r in rows), "ok": not mismatches,
         "elapsed": round(time.perf_counter() - t0, 3)},
    )
