"""Scoring of caption-only VQA answer logs.

Consumes JSON-lines logs of yes/no VQA attempts made from captions alone
(no image), one entry per question per prompt condition, and produces
per-category accuracy tables plus a count-weighted Overall row. Any
answer that does not normalize to yes/no counts as incorrect; category
inclusion is a property of the input log, not a hardcoded filter.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

CONDITIONS = ("none", "see")
OVERALL = "Overall"

_TOKEN_RE = re.compile(r"[a-z]+")


def normalize_answer(text: str) -> str:
    """Map raw model output to "yes", "no", or "unparsed".

    Case-insensitive; reasoning text is stripped down to the final
    alphabetic token, so "Answer: YES." normalizes to "yes".
    """
    tokens = _TOKEN_RE.findall(text.lower())
    if tokens and tokens[-1] in ("yes", "no"):
        return tokens[-1]
    return "unparsed"


@dataclass(frozen=True)
class VqaLogEntry:
    category: str
    question_id: str
    condition: str  # "none" or "see"
    answer: str  # "yes", "no", or "unparsed"
    gold: str  # "yes" or "no"

    @property
    def correct(self) -> bool:
        return self.answer == self.gold


def parse_vqa_line(line: str, lineno: int) -> VqaLogEntry:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as e:
        raise ValueError(f"line {lineno}: malformed JSON: {e}") from e
    if not isinstance(obj, dict):
        raise ValueError(f"line {lineno}: expected a JSON object")
    missing = [f for f in ("category", "question_id", "condition", "answer", "gold") if f not in obj]
    if missing:
        raise ValueError(f"line {lineno}: missing fields {missing}")
    if not obj["category"]:
        raise ValueError(f"line {lineno}: empty category")
    if obj["condition"] not in CONDITIONS:
        raise ValueError(f"line {lineno}: condition must be one of {CONDITIONS}, got {obj['condition']!r}")
    if obj["gold"] not in ("yes", "no"):
        raise ValueError(f"line {lineno}: gold must be yes or no, got {obj['gold']!r}")
    return VqaLogEntry(
        category=str(obj["category"]),
        question_id=str(obj["question_id"]),
        condition=obj["condition"],
        answer=normalize_answer(str(obj["answer"])),
        gold=obj["gold"],
    )


def parse_vqa_log(path: str | Path) -> list[VqaLogEntry]:
    entries = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            entries.append(parse_vqa_line(line, lineno))
    if not entries:
        raise ValueError("empty VQA log")
    return entries


@dataclass(frozen=True)
class VqaRow:
    category: str
    condition: str
    n: int
    correct: int

    @property
    def accuracy(self) -> float:
        return 100.0 * self.correct / self.n


def score_vqa(entries: list[VqaLogEntry]) -> list[VqaRow]:
    """Per (category, condition) accuracy rows plus count-weighted Overall.

    Categories are sorted alphabetically; the Overall rows aggregate raw
    counts, so they equal the count-weighted mean of category accuracies.
    """
    counts: dict[tuple[str, str], list[int]] = {}
    for e in entries:
        cell = counts.setdefault((e.category, e.condition), [0, 0])
        cell[0] += 1
        cell[1] += int(e.correct)

    rows = []
    categories = sorted({cat for cat, _ in counts})
    for cat in categories:
        for cond in CONDITIONS:
            if (cat, cond) in counts:
                n, c = counts[(cat, cond)]
                rows.append(VqaRow(category=cat, condition=cond, n=n, correct=c))
    for cond in CONDITIONS:
        per_cond = [r for r in rows if r.condition == cond]
        if per_cond:
            rows.append(
                VqaRow(
                    category=OVERALL,
                    condition=cond,
                    n=sum(r.n for r in per_cond),
                    correct=sum(r.correct for r in per_cond),
                )
            )
    return rows


def render_vqa_csv(rows: list[VqaRow]) -> str:
    """CSV with two-decimal accuracy percentages."""
    lines = ["category,condition,n,correct,accuracy"]
    for r in rows:
        lines.append(f"{r.category},{r.condition},{r.n},{r.correct},{r.accuracy:.2f}")
    return "\n".join(lines) + "\n"
