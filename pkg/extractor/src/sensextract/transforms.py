"""Edits of existing generations: sensory ablation and cue redirection.

Generative embeddings are defined over the model's own outputs, so
rewriting a generation rewrites the representation. Two edits are
supported: "ablate-sensory" replaces modality-specific language with
neutral phrasing while keeping the semantics, and "redirect-to-see" /
"redirect-to-hear" flip the modality framing of a continuation produced
under the opposite cue. Every result carries its provenance so downstream
matrices can name the source condition and edit that produced them.
"""

from __future__ import annotations

from dataclasses import dataclass

from .prompts import ABLATION_TEMPLATE, REDIRECT_TEMPLATES

MODES = ("ablate-sensory", "redirect-to-see", "redirect-to-hear")

# transform label recorded in matrix metadata for each edit mode
META_TRANSFORMS = {
    "ablate-sensory": "ablated",
    "redirect-to-see": "redirected-to-see",
    "redirect-to-hear": "redirected-to-hear",
}


@dataclass(frozen=True)
class TransformResult:
    text: str
    mode: str
    source_condition: str  # cue the original generation was produced under
    rewriter_prompt: str


def transform_generation(text: str, mode: str, rewriter,
                         source_condition: str = "unknown") -> TransformResult:
    """Rewrite a generation with the template for ``mode``.

    ``rewriter`` is any callable prompt -> text (typically an LLM wrapper).
    """
    if not text:
        raise ValueError("cannot transform empty text")
    if mode == "ablate-sensory":
        prompt = ABLATION_TEMPLATE.format(text=text)
    elif mode in REDIRECT_TEMPLATES:
        prompt = REDIRECT_TEMPLATES[mode].format(text=text)
    else:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    try:
        rewritten = rewriter(prompt)
    except Exception as e:
        raise RuntimeError(f"rewriter failure in mode {mode}: {e}") from e
    if not rewritten:
        raise RuntimeError(f"rewriter returned empty output in mode {mode}")
    return TransformResult(
        text=rewritten,
        mode=mode,
        source_condition=source_condition,
        rewriter_prompt=prompt,
    )
