"""Caption-only VQA answering: prompts, answer normalization, JSONL logs.

The model answers a yes/no question from a caption standing in for the
image, under either a neutral instruction or a visual framing that asks it
to imagine seeing the caption first. Answers are normalized to
yes/no/unparsed and logged one JSON object per line in the schema the
analysis CLI's vqa-score command consumes.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

from .embed import DecodeSpec, generate_text

VQA_PROMPTS = {
    "none": (
        "You will be given a CAPTION and a question. Your role is to answer "
        "the question only with 'yes' or 'no' by using the CAPTION. "
        "CAPTION: {caption}"
    ),
    "see": (
        "You will be given a CAPTION and a question. Your role is to answer "
        "the question only with 'yes' or 'no' by imagining what it looks "
        "like to see the CAPTION. CAPTION: {caption}"
    ),
}

_TOKEN_RE = re.compile(r"[a-z]+")


def normalize_answer(text: str) -> str:
    """Final-token yes/no extraction, case-insensitive; else "unparsed"."""
    tokens = _TOKEN_RE.findall(text.lower())
    if tokens and tokens[-1] in ("yes", "no"):
        return tokens[-1]
    return "unparsed"


def vqa_prompt(caption: str, question: str, condition: str) -> str:
    if condition not in VQA_PROMPTS:
        raise ValueError(f"condition must be one of {tuple(VQA_PROMPTS)}, got {condition!r}")
    return f"{VQA_PROMPTS[condition].format(caption=caption)}\nQUESTION: {question}\nANSWER:"


def vqa_answer(
    model,
    caption: str,
    question: str,
    condition: str,
    gold: str,
    category: str,
    question_id: str,
    max_new_tokens: int = 48,
    decode: DecodeSpec = DecodeSpec(),
) -> dict:
    """One scored-log entry; model failures degrade to answer "unparsed"."""
    if not caption or not question:
        raise ValueError("caption and question must be nonempty")
    if gold not in ("yes", "no"):
        raise ValueError(f"gold must be yes or no, got {gold!r}")
    prompt = vqa_prompt(caption, question, condition)
    try:
        raw = generate_text(model, prompt, max_new_tokens, decode)
        answer = normalize_answer(raw)
    except Exception:
        answer = "unparsed"
    return {
        "category": category,
        "question_id": question_id,
        "condition": condition,
        "answer": answer,
        "gold": gold,
    }


def write_vqa_log(entries: list[dict], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for entry in entries:
            f.write(json.dumps(entry, ensure_ascii=False))
            f.write("\n")
