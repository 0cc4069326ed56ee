"""Embedding matrix container, dataset manifest, and on-disk formats.

All cross-condition comparisons in this toolkit index rows positionally:
a dataset manifest fixes the row order once, and every embedding matrix
bound to that manifest must have exactly one row per manifest item, in
manifest order. Embedding dimension may differ between matrices (an LLM
and a vision encoder live in different spaces); only row counts must agree.

Matrix file format ("EMB1"), all integers little-endian:

    magic   4 bytes   b"EMB1"
    version u32       1
    n       u64       row count
    d       u64       column count
    meta    u32       byte length of the JSON metadata block
            meta_len  UTF-8 JSON (model id, condition, layer policy, ...)
    payload n*d*4     IEEE-754 float32, row-major

A file is exactly header + 4*n*d bytes; loaders reject anything else.
Matrices are stored as raw (unnormalized) vectors; cosine normalization
happens inside the kernel engine.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

MAGIC = b"EMB1"
FORMAT_VERSION = 1

KNOWN_CUES = ("none", "see", "hear")
KNOWN_TRANSFORMS = (
    "ablated",
    "redirected-to-see",
    "redirected-to-hear",
    "caption-plus-visual-words",
    "visual-words-only",
)


class MatrixFormatError(Exception):
    """Structurally bad matrix file: bad magic, version, or truncation."""


@dataclass(frozen=True)
class ConditionTag:
    """Prompt condition a matrix was produced under.

    ``cue`` is "none", "see", "hear", or any other nonempty string for a
    custom cue. ``verb`` optionally records the instruction verb used in
    the prompt; ``transform`` records a post-hoc edit of the generations.
    """

    cue: str = "none"
    verb: str | None = None
    transform: str | None = None

    def __post_init__(self):
        if not self.cue:
            raise ValueError("condition cue must be a nonempty string")
        if self.transform is not None and self.transform not in KNOWN_TRANSFORMS:
            raise ValueError(
                f"unknown transform {self.transform!r}; expected one of {KNOWN_TRANSFORMS}"
            )

    def label(self) -> str:
        parts = [self.cue]
        if self.verb:
            parts.append(f"verb={self.verb}")
        if self.transform:
            parts.append(self.transform)
        return "+".join(parts)

    def to_dict(self) -> dict:
        return {"cue": self.cue, "verb": self.verb, "transform": self.transform}

    @classmethod
    def from_dict(cls, d: dict) -> "ConditionTag":
        return cls(
            cue=d.get("cue", "none"),
            verb=d.get("verb"),
            transform=d.get("transform"),
        )


@dataclass(frozen=True)
class MatrixMeta:
    """Self-describing metadata stored in the file header."""

    model_id: str = ""
    condition: ConditionTag = field(default_factory=ConditionTag)
    layer_policy: str = "mean-all-layers"
    token_budget: int | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "model_id": self.model_id,
            "condition": self.condition.to_dict(),
            "layer_policy": self.layer_policy,
            "token_budget": self.token_budget,
            "extra": self.extra,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MatrixMeta":
        return cls(
            model_id=d.get("model_id", ""),
            condition=ConditionTag.from_dict(d.get("condition", {})),
            layer_policy=d.get("layer_policy", "mean-all-layers"),
            token_budget=d.get("token_budget"),
            extra=d.get("extra", {}),
        )


@dataclass(frozen=True)
class ManifestItem:
    item_id: str
    caption: str
    media_ref: str | None = None


@dataclass(frozen=True)
class DatasetManifest:
    """Ordered list of paired items fixing row order across matrices."""

    dataset_id: str
    items: tuple[ManifestItem, ...]

    def __post_init__(self):
        if len(self.items) < 2:
            raise ValueError("manifest needs at least 2 items")
        ids = [it.item_id for it in self.items]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise ValueError(f"duplicate item_id values: {dupes}")

    @property
    def n_items(self) -> int:
        return len(self.items)

    def item_ids(self) -> list[str]:
        return [it.item_id for it in self.items]

    def to_dict(self) -> dict:
        return {
            "dataset_id": self.dataset_id,
            "items": [
                {"item_id": it.item_id, "caption": it.caption, "media_ref": it.media_ref}
                for it in self.items
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DatasetManifest":
        return cls(
            dataset_id=d["dataset_id"],
            items=tuple(
                ManifestItem(
                    item_id=str(it["item_id"]),
                    caption=it.get("caption", ""),
                    media_ref=it.get("media_ref"),
                )
                for it in d["items"]
            ),
        )


def load_manifest(path: str | Path) -> DatasetManifest:
    with open(path, encoding="utf-8") as f:
        return DatasetManifest.from_dict(json.load(f))


def save_manifest(manifest: DatasetManifest, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(manifest.to_dict(), f, ensure_ascii=False, indent=2)
        f.write("\n")


class EmbeddingMatrix:
    """n x d float32 embedding matrix plus its provenance metadata.

    Data is held as a C-contiguous float32 array (the storage dtype of the
    file format), so write/load round-trips are bit-exact. Instances are
    treated as immutable after construction and are safe to share across
    workers; the array is flagged read-only.
    """

    def __init__(self, data, meta: MatrixMeta | None = None):
        # always copy: freezing a view would flip flags on the caller's array
        arr = np.array(data, dtype=np.float32, order="C", copy=True)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-D matrix, got shape {arr.shape}")
        arr.flags.writeable = False
        self.data = arr
        self.meta = meta if meta is not None else MatrixMeta()

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def __repr__(self):
        return (
            f"EmbeddingMatrix({self.rows}x{self.cols}, model={self.meta.model_id!r}, "
            f"condition={self.meta.condition.label()!r})"
        )


def matrix_violations(matrix: EmbeddingMatrix) -> list[str]:
    """Invariant violations of a matrix, as human-readable strings.

    Empty list means the matrix is well-formed: all values finite and no
    all-zero row (cosine is undefined for a zero vector).
    """
    problems = []
    if not np.isfinite(matrix.data).all():
        bad = int((~np.isfinite(matrix.data)).sum())
        problems.append(f"non-finite value ({bad} entries)")
    zero = zero_rows(matrix.data)
    if zero:
        problems.append(f"zero row at indices {zero}")
    return problems


def zero_rows(data: np.ndarray) -> list[int]:
    return [int(i) for i in np.flatnonzero(~np.any(data != 0, axis=1))]


def as_embedding_array(X, dtype=np.float64) -> np.ndarray:
    """Accept an EmbeddingMatrix or array-like; return a 2-D float array."""
    data = X.data if isinstance(X, EmbeddingMatrix) else X
    arr = np.asarray(data, dtype=dtype)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {arr.shape}")
    return arr


def header_size(meta_len: int) -> int:
    # magic + version + n + d + meta_len field + metadata block
    return 4 + 4 + 8 + 8 + 4 + meta_len


def write_matrix(matrix: EmbeddingMatrix, path: str | Path) -> None:
    """Write a matrix in the EMB1 format. Refuses invariant-violating input."""
    if not np.isfinite(matrix.data).all():
        raise ValueError("non-finite value in matrix data")
    zero = zero_rows(matrix.data)
    if zero:
        raise ValueError(f"zero row at indices {zero}")
    meta_bytes = json.dumps(matrix.meta.to_dict(), ensure_ascii=False).encode("utf-8")
    n, d = matrix.data.shape
    header = MAGIC + struct.pack("<IQQI", FORMAT_VERSION, n, d, len(meta_bytes))
    with open(path, "wb") as f:
        f.write(header)
        f.write(meta_bytes)
        f.write(matrix.data.tobytes(order="C"))


def load_matrix(path: str | Path) -> EmbeddingMatrix:
    """Load an EMB1 file, enforcing format and matrix invariants."""
    with open(path, "rb") as f:
        blob = f.read()
    if len(blob) < 4 or blob[:4] != MAGIC:
        raise MatrixFormatError(f"bad magic in {path}")
    if len(blob) < header_size(0):
        raise MatrixFormatError(f"truncated header in {path}")
    version, n, d, meta_len = struct.unpack("<IQQI", blob[4 : header_size(0)])
    if version != FORMAT_VERSION:
        raise MatrixFormatError(f"version mismatch: file has {version}, expected {FORMAT_VERSION}")
    hsize = header_size(meta_len)
    if len(blob) < hsize:
        raise MatrixFormatError(f"truncated metadata block in {path}")
    try:
        meta = MatrixMeta.from_dict(json.loads(blob[header_size(0) : hsize].decode("utf-8")))
    except (ValueError, KeyError) as e:
        raise MatrixFormatError(f"bad metadata block in {path}: {e}") from e
    expected = hsize + 4 * n * d
    if len(blob) < expected:
        raise MatrixFormatError(
            f"truncated payload in {path}: have {len(blob) - hsize} bytes, need {4 * n * d}"
        )
    if len(blob) > expected:
        raise MatrixFormatError(f"trailing bytes after payload in {path}")
    data = np.frombuffer(blob[hsize:], dtype="<f4").reshape(n, d)
    matrix = EmbeddingMatrix(data, meta)
    problems = matrix_violations(matrix)
    if problems:
        raise ValueError(f"invalid matrix in {path}: " + "; ".join(problems))
    return matrix


@dataclass
class MatrixCheck:
    """Per-matrix entry of a ValidationReport."""

    index: int
    label: str
    rows: int
    expected_rows: int
    problems: list[str]

    @property
    def ok(self) -> bool:
        return not self.problems


@dataclass
class ValidationReport:
    manifest_id: str
    checks: list[MatrixCheck]

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "manifest_id": self.manifest_id,
            "passed": self.passed,
            "checks": [
                {
                    "index": c.index,
                    "label": c.label,
                    "rows": c.rows,
                    "expected_rows": c.expected_rows,
                    "ok": c.ok,
                    "problems": c.problems,
                }
                for c in self.checks
            ],
        }


def validate_cell_set(
    manifest: DatasetManifest, matrices: list[EmbeddingMatrix]
) -> ValidationReport:
    """Check that every matrix is well-formed and row-aligned to the manifest.

    Violations are report entries, not exceptions, so a sweep over many
    condition cells can list every problem in one pass.
    """
    if not matrices:
        raise ValueError("need at least one matrix to validate")
    checks = []
    for i, m in enumerate(matrices):
        problems = matrix_violations(m)
        if m.rows != manifest.n_items:
            problems.append(f"row count mismatch ({m.rows}≠{manifest.n_items})")
        if not m.meta.model_id:
            problems.append("incomplete metadata: empty model_id")
        label = f"{m.meta.model_id or '?'}/{m.meta.condition.label()}"
        checks.append(
            MatrixCheck(
                index=i,
                label=label,
                rows=m.rows,
                expected_rows=manifest.n_items,
                problems=problems,
            )
        )
    return ValidationReport(manifest_id=manifest.dataset_id, checks=checks)
