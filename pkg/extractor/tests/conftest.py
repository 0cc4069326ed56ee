"""Fixtures: toy model, scripted model, tiny manifests and media files."""

from __future__ import annotations

import json
import wave

import numpy as np
import pytest

from sensextract import Manifest, ManifestItem, ToyCausalLM, save_manifest


@pytest.fixture(scope="session")
def toy_model():
    return ToyCausalLM(seed=0)


class ScriptedLM:
    """Protocol-compatible model that greedily emits a fixed byte script.

    forward() infers how much of the script has been generated from the
    trailing ids, so the standard decode loop drives it; after the script
    it emits EOS. Hidden states are well-formed but carry no meaning.
    """

    BOS = 256
    EOS = 257
    VOCAB = 258

    hidden_size = 4
    num_layers = 1
    max_len = 4096
    eos_id = EOS

    def __init__(self, script: str):
        self.script_ids = list(script.encode("utf-8"))

    def encode(self, text: str) -> list[int]:
        return [self.BOS] + list(text.encode("utf-8"))

    def decode_tokens(self, ids) -> str:
        return bytes(i for i in ids if i < 256).decode("utf-8", errors="replace")

    def forward(self, ids):
        progress = 0
        for s in range(min(len(self.script_ids), len(ids)), 0, -1):
            if list(ids[-s:]) == self.script_ids[:s]:
                progress = s
                break
        target = self.script_ids[progress] if progress < len(self.script_ids) else self.EOS
        states = np.full((self.num_layers + 1, len(ids), self.hidden_size), 0.25,
                         dtype=np.float32)
        logits = np.zeros(self.VOCAB, dtype=np.float32)
        logits[target] = 10.0
        return states, logits


@pytest.fixture
def scripted_lm():
    return ScriptedLM


CAPTIONS = [
    "a red fishing boat docked in a small harbor",
    "two dogs running across a snowy field",
    "an old stone bridge over a quiet river",
    "a street market with fruit stalls at dusk",
    "a propeller plane parked on a grass airstrip",
    "children playing drums in a courtyard",
    "a lighthouse on a rocky cliff in fog",
    "a bowl of noodle soup with chopsticks",
    "a violinist performing in a subway station",
    "rain falling on a tin roof at night",
    "a tractor plowing a muddy field",
    "waves crashing against a concrete pier",
]


@pytest.fixture
def tiny_manifest(tmp_path):
    manifest = Manifest(
        dataset_id="toy-captions",
        items=tuple(
            ManifestItem(item_id=f"cap-{i:02d}", caption=c) for i, c in enumerate(CAPTIONS[:6])
        ),
    )
    path = tmp_path / "manifest.json"
    save_manifest(manifest, path)
    return manifest, path


@pytest.fixture
def attribute_pool():
    return [
        "red", "striped", "glossy", "round", "rusty", "tall", "narrow",
        "wooden", "bright", "faded", "curved", "metallic", "translucent",
    ]


def write_png(path, color, size=(12, 10)):
    from PIL import Image

    Image.new("RGB", size, color).save(path)
    return path


def write_wav(path, freq=440.0, n=2000, rate=8000):
    t = np.arange(n) / rate
    samples = (np.sin(2 * np.pi * freq * t) * 20000).astype("<i2")
    with wave.open(str(path), "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(2)
        w.setframerate(rate)
        w.writeframes(samples.tobytes())
    return path


@pytest.fixture
def media_manifest(tmp_path):
    """Manifest whose items reference tiny generated PNG files."""
    colors = [(200, 30, 30), (30, 200, 30), (30, 30, 200), (250, 250, 40)]
    items = []
    for i, color in enumerate(colors):
        name = f"img{i}.png"
        write_png(tmp_path / name, color)
        items.append(ManifestItem(item_id=f"img-{i}", caption=f"colored card {i}",
                                  media_ref=name))
    manifest = Manifest(dataset_id="toy-media", items=tuple(items))
    path = tmp_path / "media_manifest.json"
    save_manifest(manifest, path)
    return manifest, path, tmp_path


def read_jsonl(path):
    with open(path, encoding="utf-8") as f:
        return [json.loads(line) for line in f if line.strip()]
