"""Sensory encoder adapters: one pooled embedding row per media item.

Real extractions use pretrained self-supervised encoders through the
hf-image adapter (any Hugging Face vision checkpoint with pooled output).
The toy-image and toy-audio encoders are deterministic featurizers with no
learned weights, for desk-scale runs and tests: identical inputs always
produce identical rows, and no input can produce a zero row.
"""

from __future__ import annotations

import wave
from pathlib import Path

import numpy as np


class MediaDecodeError(Exception):
    """One or more items failed to decode; carries (item_id, reason) pairs."""

    def __init__(self, failures: list[tuple[str, str]]):
        self.failures = failures
        lines = "; ".join(f"{item_id}: {reason}" for item_id, reason in failures)
        super().__init__(f"{len(failures)} item(s) failed to decode: {lines}")


class ToyImageEncoder:
    """16x16 RGB downsample pushed through a fixed random projection."""

    dim = 64

    def __init__(self):
        rng = np.random.default_rng(0xD1A0)
        # +1 input for a constant bias feature: keeps all-black images off zero
        self.projection = rng.standard_normal((16 * 16 * 3 + 1, self.dim)) / 16.0

    def encode_path(self, path: str | Path) -> np.ndarray:
        from PIL import Image

        with Image.open(path) as img:
            small = img.convert("RGB").resize((16, 16))
        feats = np.asarray(small, dtype=np.float64).reshape(-1) / 255.0
        feats = np.concatenate([feats, [1.0]])
        return (feats @ self.projection).astype(np.float32)


class ToyAudioEncoder:
    """Log-magnitude spectrum binned to 64 features, fixed projection."""

    dim = 64

    def __init__(self):
        rng = np.random.default_rng(0xBEA7)
        self.projection = rng.standard_normal((64 + 1, self.dim)) / 8.0

    def encode_path(self, path: str | Path) -> np.ndarray:
        with wave.open(str(path), "rb") as w:
            frames = w.readframes(w.getnframes())
            width = w.getsampwidth()
        if width != 2:
            raise ValueError(f"expected 16-bit PCM, got sample width {width}")
        samples = np.frombuffer(frames, dtype="<i2").astype(np.float64) / 32768.0
        if samples.size == 0:
            raise ValueError("empty audio stream")
        spectrum = np.abs(np.fft.rfft(samples, n=4096))[:2048]
        bins = np.log1p(spectrum.reshape(64, -1).mean(axis=1))
        feats = np.concatenate([bins, [1.0]])
        return (feats @ self.projection).astype(np.float32)


class HFImageEncoder:
    """Pooled representation from a Hugging Face vision checkpoint."""

    def __init__(self, model_id: str, device: str = "cpu"):
        try:
            from transformers import AutoImageProcessor, AutoModel
        except ImportError as e:  # pragma: no cover - optional dependency
            raise RuntimeError(
                "transformers is required for Hugging Face encoders; "
                "pip install 'sensextract[hf]'"
            ) from e
        self.processor = AutoImageProcessor.from_pretrained(model_id)
        self.model = AutoModel.from_pretrained(model_id).to(device).eval()
        self.device = device
        self.dim = self.model.config.hidden_size

    def encode_path(self, path: str | Path) -> np.ndarray:
        import torch
        from PIL import Image

        with Image.open(path) as img:
            inputs = self.processor(images=img.convert("RGB"), return_tensors="pt")
        with torch.no_grad():
            out = self.model(**{k: v.to(self.device) for k, v in inputs.items()})
        if getattr(out, "pooler_output", None) is not None:
            vec = out.pooler_output[0]
        else:
            vec = out.last_hidden_state[0, 0]  # CLS token
        return vec.float().cpu().numpy()


def resolve_encoder(encoder_id: str):
    if encoder_id == "toy-image":
        return ToyImageEncoder()
    if encoder_id == "toy-audio":
        return ToyAudioEncoder()
    if encoder_id.startswith("hf-image:"):
        return HFImageEncoder(encoder_id.split(":", 1)[1])
    raise ValueError(
        f"unknown encoder {encoder_id!r}; use toy-image, toy-audio, "
        "hf-image:<model_id>, or supply an object with encode_path()"
    )


def encode_sensory(media_items: list[tuple[str, str]], encoder_id) -> np.ndarray:
    """Encode (item_id, media_path) pairs into a row-per-item matrix.

    Items are encoded in order; decode failures are collected and raised
    together with their item ids rather than aborting at the first one.
    """
    encoder = resolve_encoder(encoder_id) if isinstance(encoder_id, str) else encoder_id
    rows = []
    failures = []
    for item_id, path in media_items:
        try:
            rows.append(encoder.encode_path(path))
        except Exception as e:
            failures.append((item_id, f"{type(e).__name__}: {e}"))
    if failures:
        raise MediaDecodeError(failures)
    if not rows:
        raise ValueError("no media items to encode")
    return np.stack(rows)
