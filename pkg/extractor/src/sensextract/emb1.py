"""EMB1 matrix files and dataset manifests, as consumed by the analysis CLI.

This is an independent implementation of the published interchange format
(the extraction side deliberately does not import the analysis package):

    magic "EMB1" | u32 version=1 | u64 n | u64 d | u32 meta_len |
    meta_len bytes UTF-8 JSON | n*d little-endian float32, row-major

Metadata carries model_id, condition {cue, verb, transform}, layer_policy,
token_budget, and a free-form extra dict.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

MAGIC = b"EMB1"
VERSION = 1


@dataclass(frozen=True)
class Condition:
    """Prompt condition labels recorded in matrix metadata."""

    cue: str = "none"
    verb: str | None = None
    transform: str | None = None

    def __post_init__(self):
        if not self.cue:
            raise ValueError("condition cue must be nonempty")

    def to_dict(self) -> dict:
        return {"cue": self.cue, "verb": self.verb, "transform": self.transform}


def matrix_meta(
    model_id: str,
    condition: Condition,
    layer_policy: str = "mean-all-layers",
    token_budget: int | None = None,
    extra: dict | None = None,
) -> dict:
    return {
        "model_id": model_id,
        "condition": condition.to_dict(),
        "layer_policy": layer_policy,
        "token_budget": token_budget,
        "extra": extra or {},
    }


def write_emb1(data: np.ndarray, meta: dict, path: str | Path) -> None:
    arr = np.ascontiguousarray(data, dtype=np.float32)
    if arr.ndim != 2:
        raise ValueError(f"expected 2-D matrix, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError("non-finite value in matrix data")
    if not np.any(arr != 0, axis=1).all():
        bad = np.flatnonzero(~np.any(arr != 0, axis=1)).tolist()
        raise ValueError(f"zero row at indices {bad}")
    meta_bytes = json.dumps(meta, ensure_ascii=False).encode("utf-8")
    n, d = arr.shape
    with open(path, "wb") as f:
        f.write(MAGIC + struct.pack("<IQQI", VERSION, n, d, len(meta_bytes)))
        f.write(meta_bytes)
        f.write(arr.tobytes(order="C"))


def read_emb1(path: str | Path) -> tuple[np.ndarray, dict]:
    blob = Path(path).read_bytes()
    if blob[:4] != MAGIC:
        raise ValueError(f"bad magic in {path}")
    version, n, d, meta_len = struct.unpack("<IQQI", blob[4:28])
    if version != VERSION:
        raise ValueError(f"version mismatch in {path}: {version}")
    meta = json.loads(blob[28 : 28 + meta_len].decode("utf-8"))
    payload = blob[28 + meta_len :]
    if len(payload) != 4 * n * d:
        raise ValueError(f"payload size mismatch in {path}")
    return np.frombuffer(payload, dtype="<f4").reshape(n, d), meta


@dataclass(frozen=True)
class ManifestItem:
    item_id: str
    caption: str
    media_ref: str | None = None


@dataclass(frozen=True)
class Manifest:
    dataset_id: str
    items: tuple[ManifestItem, ...] = field(default_factory=tuple)

    @property
    def n_items(self) -> int:
        return len(self.items)


def load_manifest(path: str | Path) -> Manifest:
    with open(path, encoding="utf-8") as f:
        raw = json.load(f)
    return Manifest(
        dataset_id=raw["dataset_id"],
        items=tuple(
            ManifestItem(
                item_id=str(it["item_id"]),
                caption=it.get("caption", ""),
                media_ref=it.get("media_ref"),
            )
            for it in raw["items"]
        ),
    )


def save_manifest(manifest: Manifest, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(
            {
                "dataset_id": manifest.dataset_id,
                "items": [
                    {"item_id": it.item_id, "caption": it.caption, "media_ref": it.media_ref}
                    for it in manifest.items
                ],
            },
            f,
            ensure_ascii=False,
            indent=2,
        )
        f.write("\n")
