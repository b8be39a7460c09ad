"""Matplotlib renderings of experiment reports (written to PNG files)."""

from __future__ import annotations

from collections import Counter
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .formula import parse, size  # noqa: E402

VERDICT_COLOURS = {"valid": "#3a7d44", "invalid": "#b23a48", "unknown": "#c9a227"}


def _verdicts_by_size(ax, results):
    counts = Counter((size(parse(r["formula"])), r["verdict"]) for r in results)
    sizes = sorted({s for s, _ in counts})
    present = [v for v in VERDICT_COLOURS if any(counts.get((s, v)) for s in sizes)]
    width = 0.8 / max(len(present), 1)
    for k, verdict in enumerate(present):
        xs = [s + (k - (len(present) - 1) / 2) * width for s in sizes]
        ax.bar(xs, [counts.get((s, verdict), 0) for s in sizes], width,
               color=VERDICT_COLOURS[verdict], label=verdict)
    ax.set_xticks(sizes)
    ax.set_xlabel("formula size")
    ax.set_ylabel("formulas")
    ax.set_yscale("symlog")
    ax.legend()


def _bars(ax, labels, values, colour="#4c72b0"):
    ax.bar(range(len(labels)), values, color=colour)
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=20, ha="right")
    for i, v in enumerate(values):
        ax.annotate(str(v), (i, v), ha="center", va="bottom", fontsize=8)


def plot_report(report: dict, path: str | Path) -> Path:
    """Draw one figure summarising ``report`` and save it at ``path``."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(7, 4))
    kind = report["experiment"]
    rules = ", ".join(report["rules"])
    s = report["summary"]
    if kind == "closure":
        _verdicts_by_size(ax, report["results"])
        ax.set_title(f"closure under {rules}: {s['mp_pairs_checked']} MP pairs, "
                     f"{s['counterexamples']} counterexamples")
    elif kind == "compare":
        a, b = report["rules"]
        _bars(ax, [f"{a} only", f"{b} only", "both", "neither", "unknown"],
              [s["a_only"], s["b_only"], s["both"], s["neither"], s["unknowns"]])
        ax.set_ylabel("formulas")
        ax.set_title(f"{a} vs {b}: {s['relation']}")
    elif kind == "audit":
        checks = s["checks"]
        bad = Counter(c["check"] for c in report["counterexamples"])
        _bars(ax, list(checks), [checks[k] for k in checks])
        ax.bar(range(len(checks)), [bad.get(k, 0) for k in checks], color="#b23a48")
        ax.set_ylabel("instances checked")
        ax.set_yscale("symlog")
        ax.set_title(f"N audit: {s['violations']} violations (seed {s['seed']})")
    else:
        by = Counter((r["expected"], r["ok"]) for r in report["results"])
        labels = ["valid", "invalid"]
        ok = [by.get((k, True), 0) for k in labels]
        miss = [by.get((k, False), 0) for k in labels]
        ax.bar(labels, ok, color=VERDICT_COLOURS["valid"], label="as expected")
        ax.bar(labels, miss, bottom=ok, color=VERDICT_COLOURS["invalid"], label="mismatch")
        ax.set_ylabel("formulas")
        ax.legend()
        ax.set_title(f"golden N verdicts: {s['correct']}/{s['total']} as expected")
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)
    return path
