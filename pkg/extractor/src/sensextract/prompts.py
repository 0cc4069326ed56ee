"""Prompt construction for cue-conditioned generation and its controls.

Prompt text must be byte-stable across runs: the same condition and
caption always produce the identical string, and any randomness (null
distractors, visual-word draws) is seeded.

The cue templates instruct the model to imagine the named modality before
continuing; the instruction verb is swappable (the robustness sweep uses
ten of them), and a "null" cue replaces the instruction with a distractor
sentence drawn from a caption pool by seeded choice.
"""

from __future__ import annotations

import numpy as np

from .emb1 import Condition

# instruction verbs used in the robustness sweep; "imagine" is the default
INSTRUCTION_VERBS = (
    "conceptualize",
    "consider",
    "describe",
    "detail",
    "explain",
    "formulate",
    "imagine",
    "think (about)",
    "wonder",
    "write",
)

CUE_CLAUSES = {
    "see": "what it would look like to see",
    "hear": "what it would sound like to hear",
}


def _verb_phrase(verb: str) -> str:
    # "think (about)" renders as "think about"
    return verb.replace("(", "").replace(")", "").strip()


def build_prompt(
    condition: Condition,
    caption: str,
    distractor_pool: list[str] | None = None,
    seed: int = 0,
) -> str:
    """Instantiate the prompt template for a condition around a caption.

    "see"/"hear" cues ask the model to imagine the modality; any other
    nonempty cue gets the generic clause "what it would be like to <cue>".
    The "null" cue prepends a seeded distractor sentence from
    ``distractor_pool`` instead of an instruction.
    """
    if not caption:
        raise ValueError("caption must be nonempty")
    verb = _verb_phrase(condition.verb or "imagine")
    cue = condition.cue
    if cue == "none":
        return f"{verb.capitalize()}: {caption}"
    if cue == "null":
        if not distractor_pool:
            raise ValueError("null cue needs a distractor_pool")
        rng = np.random.default_rng(seed)
        distractor = distractor_pool[int(rng.integers(0, len(distractor_pool)))]
        return f"{distractor} {caption}"
    clause = CUE_CLAUSES.get(cue, f"what it would be like to {cue}")
    return f"{verb.capitalize()} {clause}: {caption}"


# rewriting templates for generation edits: strip sensory language, or flip
# the modality framing of an existing continuation
ABLATION_TEMPLATE = (
    "Rewrite the following text, replacing all modality-specific sensory "
    "language with neutral phrasing while preserving the semantic content.\n\n"
    "Text: {text}"
)

REDIRECT_TEMPLATES = {
    "redirect-to-see": (
        "Rewrite the following text so that it describes what the scene would "
        "look like to see, instead of how it would sound. Preserve the "
        "content.\n\nText: {text}"
    ),
    "redirect-to-hear": (
        "Rewrite the following text so that it describes what the scene would "
        "sound like to hear, instead of how it would look. Preserve the "
        "content.\n\nText: {text}"
    ),
}


def visual_word_control(caption: str, attribute_pool: list[str], mode: str, seed: int) -> str:
    """Caption variant carrying 10 randomly drawn visual attribute words.

    "append" keeps the caption and adds the words after it; "replace"
    returns only the words. The draw is seeded and without replacement.
    """
    if len(attribute_pool) < 10:
        raise ValueError(f"attribute pool too small ({len(attribute_pool)} < 10)")
    if mode not in ("append", "replace"):
        raise ValueError(f"mode must be append or replace, got {mode!r}")
    rng = np.random.default_rng(seed)
    picks = rng.choice(len(attribute_pool), size=10, replace=False)
    words = " ".join(attribute_pool[int(i)] for i in picks)
    if mode == "append":
        return f"{caption} {words}"
    return words
