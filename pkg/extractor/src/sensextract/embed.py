"""Single-pass and generative hidden-state embeddings.

A single-pass embedding averages the per-layer hidden states over every
prefix position (prompt and caption included) in one forward pass. A
generative embedding first lets the model continue the prompt for up to T
tokens, then averages hidden states over the generated positions only,
across layers: the continuation itself becomes part of the representation.

Layers mean transformer-block outputs; the raw token-embedding layer is
excluded. Averages are true means over the summed (layer, position) terms
(any fixed normalization differs only by a positive scalar per embedding
and leaves cosine kernels unchanged); the divisor convention is recorded
in output metadata by the pipeline. With greedy decoding the whole
procedure is a deterministic function of (model, spec, caption).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .emb1 import Condition
from .prompts import build_prompt


@dataclass(frozen=True)
class DecodeSpec:
    kind: str = "greedy"  # "greedy" or "sampled"
    temperature: float = 1.0
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in ("greedy", "sampled"):
            raise ValueError(f"decode kind must be greedy or sampled, got {self.kind!r}")
        if self.kind == "sampled":
            if self.seed is None:
                raise ValueError("sampled decode requires a seed")
            if self.temperature <= 0:
                raise ValueError("sampled decode requires temperature > 0")


@dataclass(frozen=True)
class GenerationSpec:
    model_id: str
    condition: Condition
    token_budget: int = 128
    decode: DecodeSpec = field(default_factory=DecodeSpec)
    layer_policy: str = "mean-all-layers"

    def __post_init__(self):
        if self.token_budget < 1:
            raise ValueError(f"token budget must be >= 1, got {self.token_budget}")


@dataclass(frozen=True)
class HiddenTrace:
    """Block-output hidden states at the generated positions."""

    states: np.ndarray  # (num_layers, generated_len, hidden_size)
    prefix_len: int
    generated_len: int

    def __post_init__(self):
        if not np.isfinite(self.states).all():
            raise ValueError("non-finite hidden state in trace")
        if self.states.shape[1] != self.generated_len:
            raise ValueError("trace shape disagrees with generated length")


@dataclass(frozen=True)
class GenerativeResult:
    embedding: np.ndarray
    text: str
    prompt: str
    generated_ids: tuple[int, ...]
    trace: HiddenTrace


def _select_layers(states: np.ndarray, layer_policy: str) -> np.ndarray:
    """Slice (L+1, T, H) full states down to the policy's block outputs."""
    num_layers = states.shape[0] - 1
    if layer_policy == "mean-all-layers":
        return states[1:]
    if layer_policy.startswith("single-layer:"):
        layer = int(layer_policy.split(":", 1)[1])
        if not 1 <= layer <= num_layers:
            raise ValueError(f"layer must be in [1, {num_layers}], got {layer}")
        return states[layer : layer + 1]
    raise ValueError(f"unknown layer policy {layer_policy!r}")


def _flat_mean(states: np.ndarray) -> np.ndarray:
    # mean over all (layer, position) terms
    return states.reshape(-1, states.shape[-1]).mean(axis=0)


def next_token(logits: np.ndarray, decode: DecodeSpec, step: int) -> int:
    """Greedy argmax (ties to the lowest id) or seeded temperature sampling.

    Sampling draws from a stream keyed by (seed, step), so a generation is
    reproducible regardless of how work is scheduled around it.
    """
    if decode.kind == "greedy":
        return int(np.argmax(logits))
    z = logits.astype(np.float64) / decode.temperature
    z -= z.max()
    p = np.exp(z)
    p /= p.sum()
    rng = np.random.default_rng([decode.seed, step])
    return int(rng.choice(len(p), p=p))


def generate_ids(model, prefix_ids: list[int], max_tokens: int,
                 decode: DecodeSpec = DecodeSpec()) -> list[int]:
    """Autoregressive continuation of a prefix, stopping at EOS."""
    ids = list(prefix_ids)
    generated = []
    for step in range(max_tokens):
        _, logits = model.forward(ids)
        token = next_token(logits, decode, step)
        if model.eos_id is not None and token == model.eos_id:
            break
        generated.append(token)
        ids.append(token)
    return generated


def generate_text(model, prompt: str, max_tokens: int,
                  decode: DecodeSpec = DecodeSpec()) -> str:
    return model.decode_tokens(generate_ids(model, model.encode(prompt), max_tokens, decode))


def embed_single_pass(model, prompt: str, caption: str | None = None,
                      layer_policy: str = "mean-all-layers") -> np.ndarray:
    """z_e: mean block-output state over every position of the prompt.

    ``prompt`` is the full prefix text (condition template with the caption
    already spliced, as produced by build_prompt); ``caption`` is accepted
    for symmetry with the generative path and provenance records.
    """
    del caption  # recorded by callers; the prefix already contains it
    ids = model.encode(prompt)
    if model.max_len is not None and len(ids) > model.max_len:
        raise ValueError(f"context overflow: prefix is {len(ids)} tokens")
    states, _ = model.forward(ids)
    z = _flat_mean(_select_layers(states, layer_policy))
    if not np.isfinite(z).all():
        raise ValueError("non-finite embedding")
    return z


def embed_generative(model, spec: GenerationSpec, caption: str,
                     distractor_pool: list[str] | None = None) -> GenerativeResult:
    """z_g: decode up to T tokens, then average states at generated positions.

    Decoding stops early at EOS; generating nothing at all is an error.
    Hidden states for the continuation come from one full forward pass over
    prefix plus generation (causal attention makes them identical to the
    states observed incrementally during decoding).
    """
    prompt = build_prompt(spec.condition, caption, distractor_pool=distractor_pool,
                          seed=spec.decode.seed or 0)
    prefix_ids = model.encode(prompt)
    if model.max_len is not None and len(prefix_ids) + spec.token_budget > model.max_len:
        raise ValueError(
            f"context overflow: {len(prefix_ids)} prefix + {spec.token_budget} "
            f"budget > {model.max_len}"
        )
    generated = generate_ids(model, prefix_ids, spec.token_budget, spec.decode)
    if not generated:
        raise ValueError("empty generation: model emitted end-of-sequence immediately")

    states, _ = model.forward(prefix_ids + generated)
    # the trace keeps every block layer so one generation supports
    # layer-wise readouts; the embedding follows the requested policy
    trace = HiddenTrace(
        states=np.ascontiguousarray(states[1:, len(prefix_ids):, :]),
        prefix_len=len(prefix_ids),
        generated_len=len(generated),
    )
    z = _flat_mean(_select_layers(states, spec.layer_policy)[:, len(prefix_ids):, :])
    if not np.isfinite(z).all():
        raise ValueError("non-finite embedding")
    return GenerativeResult(
        embedding=z,
        text=model.decode_tokens(generated),
        prompt=prompt,
        generated_ids=tuple(generated),
        trace=trace,
    )
