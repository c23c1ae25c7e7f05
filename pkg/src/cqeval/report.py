"""Campaign summaries: per-pattern verdict tables and run-to-run diffs.

One row per (polarity, pattern family) plus a totals row per polarity.
Questions the runner never produced a verdict for count as unknown, so
each row's three columns always add up to its slice of the corpus.
Mean times cover settled verdicts only; an unknown question by
construction ran to the full time limit, which the rendered output
says in a footnote rather than folding into the means.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

from .cqgen import FAMILIES, Polarity
from .verdict import Classification, Verdict


class ReportError(Exception):
    pass


class UnresolvedCqId(ReportError):
    pass


class CorpusMismatch(ReportError):
    pass


# Orientation figures from a full-scale lexicon-to-ontology campaign
# (generated questions per family and polarity side).  Fixture-sized runs
# produce far smaller tables; nothing asserts these numbers.
REFERENCE_FULL_SCALE_COUNTS = {
    "antonym": 64,
    "relation": 1280,
    "event1": 25,
    "event2": 330,
    "event3": 1857,
    "generated_total_per_polarity": 3556,
    "creative_truth": 50,
    "creative_falsity": 14,
}

TOTAL_LABELS = {"truth": "truth-tests", "falsity": "falsity-tests"}

FOOTNOTE = (
    "note: mean times cover settled questions only; "
    "unknown questions each ran to the full time limit."
)


@dataclass(frozen=True)
class ReportRow:
    polarity: str  # "truth" | "falsity"
    family: str  # family name, or "total"
    total: int
    passing: int
    non_passing: int
    unknown: int
    mean_passing: float | None
    mean_non_passing: float | None

    @property
    def label(self) -> str:
        return TOTAL_LABELS[self.polarity] if self.family == "total" else self.family


@dataclass
class Report:
    rows: list
    verdicts: dict  # cq_id -> Verdict
    corpus_ids: frozenset
    missing: tuple  # corpus ids that never got a verdict
    flagged: tuple  # cq_ids whose raw status needs a human look


def _mean(values) -> float | None:
    values = list(values)
    return sum(values) / len(values) if values else None


def summarize(verdicts, corpus) -> Report:
    """Aggregate verdicts over a question corpus.

    Every verdict must name a corpus question; corpus questions without a
    verdict are counted unknown so the table never quietly shrinks.
    """
    by_id = {v.cq_id: v for v in verdicts}
    corpus_questions = corpus.questions if hasattr(corpus, "questions") else list(corpus)
    corpus_ids = {cq.id for cq in corpus_questions}
    stray = sorted(set(by_id) - corpus_ids)
    if stray:
        raise UnresolvedCqId(f"verdicts for unknown questions: {stray}")
    missing = tuple(sorted(corpus_ids - set(by_id)))

    cells: dict = {}
    for cq in corpus_questions:
        key = (cq.polarity.value, cq.pattern.family)
        cell = cells.setdefault(key, {"p": 0, "n": 0, "u": 0, "pt": [], "nt": []})
        v = by_id.get(cq.id)
        if v is None or v.classification is Classification.UNKNOWN:
            cell["u"] += 1
        elif v.classification is Classification.PASSING:
            cell["p"] += 1
            cell["pt"].append(v.wall_seconds)
        else:
            cell["n"] += 1
            cell["nt"].append(v.wall_seconds)

    rows: list = []
    for pol in (Polarity.TRUTH.value, Polarity.FALSITY.value):
        group = [(fam, cells[(pol, fam)]) for fam in FAMILIES if (pol, fam) in cells]
        if not group:
            continue
        tot = {"p": 0, "n": 0, "u": 0, "pt": [], "nt": []}
        for fam, cell in group:
            rows.append(
                ReportRow(
                    polarity=pol,
                    family=fam,
                    total=cell["p"] + cell["n"] + cell["u"],
                    passing=cell["p"],
                    non_passing=cell["n"],
                    unknown=cell["u"],
                    mean_passing=_mean(cell["pt"]),
                    mean_non_passing=_mean(cell["nt"]),
                )
            )
            for k in ("p", "n", "u"):
                tot[k] += cell[k]
            tot["pt"].extend(cell["pt"])
            tot["nt"].extend(cell["nt"])
        rows.append(
            ReportRow(
                polarity=pol,
                family="total",
                total=tot["p"] + tot["n"] + tot["u"],
                passing=tot["p"],
                non_passing=tot["n"],
                unknown=tot["u"],
                mean_passing=_mean(tot["pt"]),
                mean_non_passing=_mean(tot["nt"]),
            )
        )
    flagged = tuple(sorted(v.cq_id for v in verdicts if v.flagged))
    return Report(rows, by_id, frozenset(corpus_ids), missing, flagged)


# --------------------------------------------------------------------------
# rendering


def _fmt_mean(m: float | None) -> str:
    return f"{m:.2f} s." if m is not None else "--"


def render_text(report: Report) -> str:
    headers = ("", "total", "passing", "non-passing", "unknown", "mean pass", "mean non-pass")
    table = [headers]
    for row in report.rows:
        table.append((
            row.label,
            str(row.total),
            str(row.passing),
            str(row.non_passing),
            str(row.unknown),
            _fmt_mean(row.mean_passing),
            _fmt_mean(row.mean_non_passing),
        ))
    widths = [max(len(r[i]) for r in table) for i in range(len(headers))]
    lines = []
    for r in table:
        cells = [r[0].ljust(widths[0])] + [r[i].rjust(widths[i]) for i in range(1, len(headers))]
        lines.append("  ".join(cells).rstrip())
    if report.missing:
        lines.append(f"missing verdicts: {len(report.missing)} (counted unknown)")
    if report.flagged:
        lines.append("flagged for review: " + ", ".join(report.flagged))
    lines.append(FOOTNOTE)
    return "\n".join(lines) + "\n"


def render_csv(report: Report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([
        "polarity", "family", "total", "passing", "non_passing", "unknown",
        "mean_passing_seconds", "mean_non_passing_seconds",
    ])
    for row in report.rows:
        w.writerow([
            row.polarity,
            row.family,
            row.total,
            row.passing,
            row.non_passing,
            row.unknown,
            "" if row.mean_passing is None else f"{row.mean_passing:.6f}",
            "" if row.mean_non_passing is None else f"{row.mean_non_passing:.6f}",
        ])
    return buf.getvalue()


def render_json(report: Report) -> str:
    doc = {
        "rows": [
            {
                "polarity": r.polarity,
                "family": r.family,
                "total": r.total,
                "passing": r.passing,
                "non_passing": r.non_passing,
                "unknown": r.unknown,
                "mean_passing_seconds": r.mean_passing,
                "mean_non_passing_seconds": r.mean_non_passing,
            }
            for r in report.rows
        ],
        "missing": list(report.missing),
        "flagged": list(report.flagged),
        "note": FOOTNOTE,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# --------------------------------------------------------------------------
# diffing two runs


@dataclass(frozen=True)
class RowDelta:
    polarity: str
    family: str
    d_passing: int
    d_non_passing: int
    d_unknown: int


@dataclass
class Delta:
    row_deltas: list
    flips: list  # (cq_id, old classification, new classification)

    def is_empty(self) -> bool:
        return not self.row_deltas and not self.flips


def diff_reports(old: Report, new: Report) -> Delta:
    """Changes between two runs over the same corpus."""
    if old.corpus_ids != new.corpus_ids:
        raise CorpusMismatch(
            f"corpora differ: {len(old.corpus_ids)} vs {len(new.corpus_ids)} questions"
        )
    old_rows = {(r.polarity, r.family): r for r in old.rows}
    new_rows = {(r.polarity, r.family): r for r in new.rows}
    row_deltas = []
    for key in sorted(set(old_rows) | set(new_rows)):
        a = old_rows.get(key)
        b = new_rows.get(key)
        ap, an, au = (a.passing, a.non_passing, a.unknown) if a else (0, 0, 0)
        bp, bn, bu = (b.passing, b.non_passing, b.unknown) if b else (0, 0, 0)
        if (ap, an, au) != (bp, bn, bu):
            row_deltas.append(RowDelta(key[0], key[1], bp - ap, bn - an, bu - au))

    def classification_of(report: Report, cq_id: str) -> Classification:
        v = report.verdicts.get(cq_id)
        return v.classification if v is not None else Classification.UNKNOWN

    flips = []
    for cq_id in sorted(old.corpus_ids):
        before = classification_of(old, cq_id)
        after = classification_of(new, cq_id)
        if before is not after:
            flips.append((cq_id, before, after))
    return Delta(row_deltas, flips)


def render_delta(delta: Delta) -> str:
    if delta.is_empty():
        return "no changes\n"
    lines = []
    for rd in delta.row_deltas:
        label = TOTAL_LABELS[rd.polarity] if rd.family == "total" else rd.family
        parts = []
        for name, d in (("passing", rd.d_passing), ("non-passing", rd.d_non_passing),
                        ("unknown", rd.d_unknown)):
            if d:
                parts.append(f"{name} {d:+d}")
        lines.append(f"{rd.polarity}/{label}: " + ", ".join(parts))
    for cq_id, before, after in delta.flips:
        lines.append(f"flip {cq_id}: {before.value} -> {after.value}")
    return "\n".join(lines) + "\n"
