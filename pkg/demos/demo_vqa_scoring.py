#!/usr/bin/env python3
"""Walkthrough: scoring a caption-only VQA answer log.

Synthesizes a small JSON-lines log of yes/no answers produced under two
prompt conditions, including messy raw answers ("Answer: YES.", refusals)
that the scorer normalizes, then renders the per-category accuracy table.
"""

import json
import tempfile
from pathlib import Path

import numpy as np

from sensealign import normalize_answer, parse_vqa_log, render_vqa_csv, score_vqa

rng = np.random.default_rng(5)

# the "see" condition answers a bit more accurately in perception-flavored
# categories, and identically in the reasoning-flavored one
accuracy = {
    ("existence", "none"): 0.80, ("existence", "see"): 0.90,
    ("color", "none"): 0.75, ("color", "see"): 0.85,
    ("numerical", "none"): 0.70, ("numerical", "see"): 0.70,
}

lines = []
for (category, condition), p in accuracy.items():
    for i in range(60):
        gold = "yes" if rng.random() < 0.5 else "no"
        if rng.random() < p:
            raw = {0: gold, 1: f"Answer: {gold.upper()}.", 2: f"the answer is {gold}"}[i % 3]
        elif rng.random() < 0.1:
            raw = "cannot be determined from the caption"  # -> unparsed -> incorrect
        else:
            raw = "no" if gold == "yes" else "yes"
        lines.append(json.dumps({
            "category": category,
            "question_id": f"{category}/{i:03d}",
            "condition": condition,
            "answer": raw,
            "gold": gold,
        }))

log_path = Path(tempfile.mkdtemp(prefix="sensealign-vqa-")) / "answers.jsonl"
log_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
print(f"wrote {len(lines)} entries to {log_path}\n")

for raw in ("Answer: YES.", "I think the answer is no", "hard to say"):
    print(f"normalize_answer({raw!r}) = {normalize_answer(raw)!r}")

rows = score_vqa(parse_vqa_log(log_path))
print("\n" + render_vqa_csv(rows))

see_gain = {}
for r in rows:
    see_gain.setdefault(r.category, {})[r.condition] = r.accuracy
for category, accs in see_gain.items():
    print(f"{category:>10}: none {accs['none']:.2f} -> see {accs['see']:.2f}")
