"""Run-spec driven batch extraction: manifest in, EMB1 matrix out.

A run spec (JSON) names the model, prompt condition, representation mode,
token budget, decode settings, and output directory for one
(model, condition) cell. The pipeline walks the manifest in order, embeds
every caption, writes the row-aligned EMB1 matrix, and persists the
generated continuations (JSON lines) next to it so later edits (ablation,
redirection) can reuse them without re-decoding.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .emb1 import Condition, Manifest, load_manifest, matrix_meta, write_emb1
from .embed import DecodeSpec, GenerationSpec, embed_generative, embed_single_pass
from .models import resolve_model
from .prompts import build_prompt, visual_word_control


@dataclass(frozen=True)
class RunSpec:
    manifest: str
    output_dir: str
    model_id: str
    mode: str = "generative"  # or "single-pass"
    condition: Condition = field(default_factory=Condition)
    token_budget: int = 128
    decode: DecodeSpec = field(default_factory=DecodeSpec)
    layer_policy: str = "mean-all-layers"
    caption_variant: str = "plain"  # plain | plus-visual-words | visual-words-only
    attribute_pool: tuple[str, ...] = ()
    variant_seed: int = 0
    distractor_pool: tuple[str, ...] = ()
    limit: int | None = None

    def __post_init__(self):
        if self.mode not in ("generative", "single-pass"):
            raise ValueError(f"mode must be generative or single-pass, got {self.mode!r}")
        if self.caption_variant not in ("plain", "plus-visual-words", "visual-words-only"):
            raise ValueError(f"unknown caption variant {self.caption_variant!r}")


def load_run_spec(path: str | Path) -> RunSpec:
    with open(path, encoding="utf-8") as f:
        raw = json.load(f)
    cond = raw.get("condition", {})
    decode = raw.get("decode", {})
    return RunSpec(
        manifest=raw["manifest"],
        output_dir=raw["output_dir"],
        model_id=raw["model_id"],
        mode=raw.get("mode", "generative"),
        condition=Condition(
            cue=cond.get("cue", "none"),
            verb=cond.get("verb"),
            transform=cond.get("transform"),
        ),
        token_budget=int(raw.get("token_budget", 128)),
        decode=DecodeSpec(
            kind=decode.get("kind", "greedy"),
            temperature=float(decode.get("temperature", 1.0)),
            seed=decode.get("seed"),
        ),
        layer_policy=raw.get("layer_policy", "mean-all-layers"),
        caption_variant=raw.get("caption_variant", "plain"),
        attribute_pool=tuple(raw.get("attribute_pool", ())),
        variant_seed=int(raw.get("variant_seed", 0)),
        distractor_pool=tuple(raw.get("distractor_pool", ())),
        limit=raw.get("limit"),
    )


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9.-]+", "-", text).strip("-")


def output_stem(spec: RunSpec) -> str:
    parts = [_slug(spec.model_id), spec.condition.cue]
    if spec.condition.verb:
        parts.append(_slug(spec.condition.verb))
    if spec.caption_variant != "plain":
        parts.append(spec.caption_variant)
    parts.append(spec.mode if spec.mode == "single-pass" else f"T{spec.token_budget}")
    return "__".join(parts)


def _variant_caption(spec: RunSpec, caption: str, row: int) -> str:
    if spec.caption_variant == "plain":
        return caption
    mode = "append" if spec.caption_variant == "plus-visual-words" else "replace"
    # per-item seed keeps draws independent across rows but reproducible
    return visual_word_control(
        caption, list(spec.attribute_pool), mode, seed=spec.variant_seed * 100_003 + row
    )


@dataclass(frozen=True)
class ExtractionOutput:
    matrix_path: str
    generations_path: str | None
    n_items: int


def run_extraction(spec: RunSpec, model=None) -> ExtractionOutput:
    """Embed every manifest caption under one condition; write the cell."""
    manifest: Manifest = load_manifest(spec.manifest)
    items = manifest.items[: spec.limit] if spec.limit else manifest.items
    if len(items) < 2:
        raise ValueError("need at least 2 manifest items")
    if model is None:
        model = resolve_model(spec.model_id)

    out_dir = Path(spec.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = output_stem(spec)

    rows = []
    generations = []
    for row, item in enumerate(items):
        caption = _variant_caption(spec, item.caption, row)
        if spec.mode == "single-pass":
            prompt = build_prompt(
                spec.condition, caption,
                distractor_pool=list(spec.distractor_pool) or None,
                seed=spec.decode.seed or 0,
            )
            rows.append(embed_single_pass(model, prompt, caption, spec.layer_policy))
        else:
            gen_spec = GenerationSpec(
                model_id=spec.model_id,
                condition=spec.condition,
                token_budget=spec.token_budget,
                decode=spec.decode,
                layer_policy=spec.layer_policy,
            )
            result = embed_generative(
                model, gen_spec, caption,
                distractor_pool=list(spec.distractor_pool) or None,
            )
            rows.append(result.embedding)
            generations.append(
                {
                    "item_id": item.item_id,
                    "caption": caption,
                    "prompt": result.prompt,
                    "generated": result.text,
                    "n_tokens": result.trace.generated_len,
                }
            )

    variant_transform = {
        "plus-visual-words": "caption-plus-visual-words",
        "visual-words-only": "visual-words-only",
    }.get(spec.caption_variant)
    condition = Condition(
        cue=spec.condition.cue,
        verb=spec.condition.verb,
        transform=spec.condition.transform or variant_transform,
    )
    meta = matrix_meta(
        model_id=spec.model_id,
        condition=condition,
        layer_policy=spec.layer_policy,
        token_budget=spec.token_budget if spec.mode == "generative" else None,
        extra={
            "mode": spec.mode,
            "decode": {
                "kind": spec.decode.kind,
                "temperature": spec.decode.temperature,
                "seed": spec.decode.seed,
            },
            "normalization": "true-mean-over-summed-layer-position-terms",
            "prefix_includes_prompt": True,
            "dataset_id": manifest.dataset_id,
            "n_items": len(items),
        },
    )
    matrix_path = out_dir / f"{stem}.emb"
    write_emb1(np.stack(rows), meta, matrix_path)

    generations_path = None
    if generations:
        generations_path = out_dir / f"{stem}.generations.jsonl"
        with open(generations_path, "w", encoding="utf-8") as f:
            for g in generations:
                f.write(json.dumps(g, ensure_ascii=False))
                f.write("\n")

    return ExtractionOutput(
        matrix_path=str(matrix_path),
        generations_path=None if generations_path is None else str(generations_path),
        n_items=len(items),
    )


def run_encoder(manifest_path: str | Path, encoder_id: str, output_path: str | Path,
                media_root: str | Path | None = None, limit: int | None = None) -> str:
    """Encode every manifest media_ref; write the reference EMB1."""
    from .encoders import encode_sensory

    manifest = load_manifest(manifest_path)
    items = manifest.items[:limit] if limit else manifest.items
    missing = [it.item_id for it in items if not it.media_ref]
    if missing:
        raise ValueError(f"manifest items without media_ref: {missing}")
    root = Path(media_root) if media_root else Path()
    pairs = [(it.item_id, str(root / it.media_ref)) for it in items]
    data = encode_sensory(pairs, encoder_id)
    meta = matrix_meta(
        model_id=encoder_id,
        condition=Condition(cue="none"),
        layer_policy="mean-all-layers",
        extra={"kind": "sensory-encoder", "dataset_id": manifest.dataset_id,
               "n_items": len(items)},
    )
    write_emb1(data, meta, output_path)
    return str(output_path)
