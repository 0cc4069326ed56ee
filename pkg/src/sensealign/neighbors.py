"""Per-item neighbor-overlap diagnostics between conditions.

For each caption these reports answer: how many of the LLM's top-k
neighbors are shared with the sensory encoder, and which items gain or
lose the most shared neighbors when the prompt condition changes. Records
resolve neighbor row indices to manifest item ids and captions so the
qualitative inspection (which items moved, and toward what) needs no
rerun of the analysis.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .kernels import NeighborIndex, overlap_counts
from .store import DatasetManifest


@dataclass(frozen=True)
class OverlapRecord:
    """Overlap of one item's neighbor sets with a reference, in two conditions."""

    item_index: int
    item_id: str
    caption: str
    overlap_a: int
    overlap_b: int
    delta: int
    neighbors_a: list[str]
    neighbors_b: list[str]
    neighbors_ref: list[str]

    def to_dict(self) -> dict:
        return {
            "item_index": self.item_index,
            "item_id": self.item_id,
            "caption": self.caption,
            "overlap_a": self.overlap_a,
            "overlap_b": self.overlap_b,
            "delta": self.delta,
            "neighbors_a": self.neighbors_a,
            "neighbors_b": self.neighbors_b,
            "neighbors_ref": self.neighbors_ref,
        }


def overlap_per_item(N_llm: NeighborIndex, N_ref: NeighborIndex) -> list[tuple[int, int]]:
    """Per-item shared-neighbor counts |N_k(i) of llm  intersect  N_k(i) of ref|.

    The mean count divided by k equals the mutual-kNN alignment score
    bit-for-bit (both are computed from the same intersection sizes).
    """
    counts = overlap_counts(N_llm, N_ref)
    return [(int(i), int(c)) for i, c in enumerate(counts)]


def overlap_delta_ranking(
    N_cond_a: NeighborIndex,
    N_cond_b: NeighborIndex,
    N_ref: NeighborIndex,
    top_m: int,
    manifest: DatasetManifest,
) -> list[OverlapRecord]:
    """Items ranked by gain in reference neighbor overlap from a to b.

    Sorted by descending delta = overlap_b - overlap_a, ties by ascending
    item index, truncated to ``top_m`` records.
    """
    n = N_ref.n
    if not (N_cond_a.n == N_cond_b.n == n):
        raise ValueError("neighbor index row counts differ")
    if not (N_cond_a.k == N_cond_b.k == N_ref.k):
        raise ValueError("neighbor index k values differ")
    if manifest.n_items != n:
        raise ValueError(f"manifest has {manifest.n_items} items, indices have {n} rows")
    if not 1 <= top_m <= n:
        raise ValueError(f"top_m must be in [1, {n}], got {top_m}")

    counts_a = overlap_counts(N_cond_a, N_ref)
    counts_b = overlap_counts(N_cond_b, N_ref)
    deltas = counts_b.astype(int) - counts_a.astype(int)
    order = sorted(range(n), key=lambda i: (-deltas[i], i))[:top_m]

    ids = manifest.item_ids()
    records = []
    for i in order:
        records.append(
            OverlapRecord(
                item_index=i,
                item_id=ids[i],
                caption=manifest.items[i].caption,
                overlap_a=int(counts_a[i]),
                overlap_b=int(counts_b[i]),
                delta=int(deltas[i]),
                neighbors_a=[ids[j] for j in N_cond_a.lists[i]],
                neighbors_b=[ids[j] for j in N_cond_b.lists[i]],
                neighbors_ref=[ids[j] for j in N_ref.lists[i]],
            )
        )
    return records


def write_overlap_records(records: list[OverlapRecord], path: str | Path) -> None:
    """Emit records as UTF-8 JSON lines, one record per line."""
    with open(path, "w", encoding="utf-8") as f:
        for rec in records:
            f.write(json.dumps(rec.to_dict(), ensure_ascii=False))
            f.write("\n")
