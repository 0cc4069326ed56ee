"""Causal LM adapters exposing per-layer hidden states.

The embedding code needs only this duck-typed surface from a model:

    hidden_size: int
    num_layers: int            # transformer blocks; embeddings not counted
    max_len: int | None        # context window, None if unbounded
    eos_id: int | None
    encode(text) -> list[int]
    decode_tokens(ids) -> str
    forward(ids) -> (hidden, last_logits)
        hidden: float32 array (num_layers + 1, len(ids), hidden_size),
                index 0 is the embedding-layer output, 1..L the block outputs
        last_logits: float32 array (vocab,) for the position after ids[-1]

ToyCausalLM is a small, fully deterministic byte-level transformer used by
tests, demos, and desk-scale smoke runs; HFCausalLM wraps any Hugging Face
checkpoint behind the same surface for real extractions.
"""

from __future__ import annotations

import numpy as np
import torch
import torch.nn as nn


class _Block(nn.Module):
    def __init__(self, hidden_size: int, num_heads: int):
        super().__init__()
        self.ln1 = nn.LayerNorm(hidden_size)
        self.attn = nn.MultiheadAttention(hidden_size, num_heads, batch_first=True)
        self.ln2 = nn.LayerNorm(hidden_size)
        self.mlp = nn.Sequential(
            nn.Linear(hidden_size, 4 * hidden_size),
            nn.GELU(),
            nn.Linear(4 * hidden_size, hidden_size),
        )

    def forward(self, x, mask):
        h = self.ln1(x)
        attn_out, _ = self.attn(h, h, h, attn_mask=mask, need_weights=False)
        x = x + attn_out
        x = x + self.mlp(self.ln2(x))
        return x


class ToyCausalLM(nn.Module):
    """Byte-level causal transformer with seeded random weights.

    Vocabulary is the 256 byte values plus BOS/EOS. Inference is eval-mode
    float32 on CPU, so repeated calls are bit-identical. BOS/EOS are masked
    out of the output logits: with random weights an early argmax EOS is
    noise, and a test backend should honor the full token budget.
    """

    BOS = 256
    EOS = 257
    VOCAB = 258

    def __init__(self, seed: int = 0, num_layers: int = 2, hidden_size: int = 16,
                 num_heads: int = 2, max_len: int = 256):
        super().__init__()
        torch.manual_seed(seed)
        self.seed = seed
        self.hidden_size = hidden_size
        self.num_layers = num_layers
        self.max_len = max_len
        self.eos_id = self.EOS
        self.tok_emb = nn.Embedding(self.VOCAB, hidden_size)
        self.pos_emb = nn.Embedding(max_len, hidden_size)
        self.blocks = nn.ModuleList(_Block(hidden_size, num_heads) for _ in range(num_layers))
        self.ln_f = nn.LayerNorm(hidden_size)
        self.lm_head = nn.Linear(hidden_size, self.VOCAB, bias=False)
        self.eval()

    def encode(self, text: str) -> list[int]:
        return [self.BOS] + list(text.encode("utf-8"))

    def decode_tokens(self, ids) -> str:
        return bytes(i for i in ids if i < 256).decode("utf-8", errors="replace")

    @torch.no_grad()
    def forward(self, ids) -> tuple[np.ndarray, np.ndarray]:
        if len(ids) > self.max_len:
            raise ValueError(f"context overflow: {len(ids)} > {self.max_len}")
        x = torch.tensor(ids, dtype=torch.long).unsqueeze(0)
        t = x.shape[1]
        h = self.tok_emb(x) + self.pos_emb(torch.arange(t).unsqueeze(0))
        mask = torch.triu(torch.full((t, t), float("-inf")), diagonal=1)
        hidden = [h]
        for block in self.blocks:
            h = block(h, mask)
            hidden.append(h)
        logits = self.lm_head(self.ln_f(h[:, -1, :]))[0].numpy().astype(np.float32)
        logits[[self.BOS, self.EOS]] = -np.inf
        states = torch.stack([s[0] for s in hidden]).numpy().astype(np.float32)
        return states, logits


class HFCausalLM:
    """Hugging Face checkpoint behind the adapter surface (CPU by default)."""

    def __init__(self, model_id: str, device: str = "cpu", dtype=None):
        try:
            from transformers import AutoModelForCausalLM, AutoTokenizer
        except ImportError as e:  # pragma: no cover - optional dependency
            raise RuntimeError(
                "transformers is required for Hugging Face models; "
                "pip install 'sensextract[hf]'"
            ) from e
        self.tokenizer = AutoTokenizer.from_pretrained(model_id)
        self.model = AutoModelForCausalLM.from_pretrained(
            model_id, torch_dtype=dtype, output_hidden_states=True
        ).to(device)
        self.model.eval()
        self.device = device
        self.hidden_size = self.model.config.hidden_size
        self.num_layers = self.model.config.num_hidden_layers
        self.max_len = getattr(self.model.config, "max_position_embeddings", None)
        self.eos_id = self.tokenizer.eos_token_id

    def encode(self, text: str) -> list[int]:
        return self.tokenizer(text, add_special_tokens=True)["input_ids"]

    def decode_tokens(self, ids) -> str:
        return self.tokenizer.decode(ids, skip_special_tokens=True)

    @torch.no_grad()
    def forward(self, ids):
        x = torch.tensor(ids, dtype=torch.long, device=self.device).unsqueeze(0)
        out = self.model(x, output_hidden_states=True)
        states = torch.stack([h[0] for h in out.hidden_states]).float().cpu().numpy()
        return states, out.logits[0, -1].float().cpu().numpy()


def resolve_model(model_id: str):
    """Model registry: "toy:<seed>[:<layers>:<hidden>]" or an HF model id."""
    if model_id.startswith("toy"):
        parts = model_id.split(":")
        seed = int(parts[1]) if len(parts) > 1 else 0
        num_layers = int(parts[2]) if len(parts) > 2 else 2
        hidden = int(parts[3]) if len(parts) > 3 else 16
        return ToyCausalLM(seed=seed, num_layers=num_layers, hidden_size=hidden)
    return HFCausalLM(model_id)
