"""Sweep runner: alignment-with-bootstrap over many condition cells.

A sweep config names a manifest, one reference matrix (the sensory
encoder), and a list of cells (matrix path plus axis labels: model,
condition, token budget, layer). Each cell is scored against the
reference with a bootstrap SE; one CSV row per cell, in config order.
Failures are isolated per cell: a corrupt file yields a status=error row
instead of killing the sweep, and the run is flagged as failed overall.

Config files are JSON or TOML with the same field names.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .kernels import DEFAULT_K
from .stats import bootstrap_alignment
from .store import DatasetManifest, load_manifest, load_matrix

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

CSV_COLUMNS = [
    "model_id",
    "condition",
    "token_budget",
    "layer",
    "n",
    "k",
    "B",
    "seed",
    "score",
    "se",
    "status",
    "error",
]


@dataclass(frozen=True)
class SweepCell:
    matrix_path: str
    model_id: str
    condition: str
    token_budget: int | None = None
    layer: str | None = None

    def labels(self) -> tuple:
        return (self.model_id, self.condition, self.token_budget, self.layer)


@dataclass(frozen=True)
class SweepConfig:
    manifest_path: str
    reference: str
    cells: tuple[SweepCell, ...]
    k: int = DEFAULT_K
    bootstrap_B: int = 1000
    seed: int = 0
    output: str | None = None

    def __post_init__(self):
        if not self.cells:
            raise ValueError("sweep config has no cells")
        labels = [c.labels() for c in self.cells]
        if len(set(labels)) != len(labels):
            dupes = sorted({l for l in labels if labels.count(l) > 1})
            raise ValueError(f"duplicate cell labels: {dupes}")


def load_sweep_config(path: str | Path) -> SweepConfig:
    path = Path(path)
    if path.suffix.lower() == ".toml":
        with open(path, "rb") as f:
            raw = tomllib.load(f)
    else:
        with open(path, encoding="utf-8") as f:
            raw = json.load(f)
    try:
        cells = tuple(
            SweepCell(
                matrix_path=str(c["matrix_path"]),
                model_id=str(c.get("model_id", "")),
                condition=str(c.get("condition", "")),
                token_budget=c.get("token_budget"),
                layer=None if c.get("layer") is None else str(c["layer"]),
            )
            for c in raw["cells"]
        )
        return SweepConfig(
            manifest_path=str(raw["manifest_path"]),
            reference=str(raw["reference"]),
            cells=cells,
            k=int(raw.get("k", DEFAULT_K)),
            bootstrap_B=int(raw.get("bootstrap_B", 1000)),
            seed=int(raw.get("seed", 0)),
            output=raw.get("output"),
        )
    except KeyError as e:
        raise ValueError(f"sweep config missing field {e}") from e


def _cell_row(cell: SweepCell, config: SweepConfig, manifest, reference, shared_error) -> dict:
    row = {
        "model_id": cell.model_id,
        "condition": cell.condition,
        "token_budget": "" if cell.token_budget is None else cell.token_budget,
        "layer": "" if cell.layer is None else cell.layer,
        "n": manifest.n_items if manifest is not None else "",
        "k": config.k,
        "B": config.bootstrap_B,
        "seed": config.seed,
        "score": "",
        "se": "",
        "status": "error",
        "error": "",
    }
    try:
        if shared_error is not None:
            raise ValueError(shared_error)
        matrix = load_matrix(cell.matrix_path)
        if matrix.rows != manifest.n_items:
            raise ValueError(f"row count mismatch ({matrix.rows}≠{manifest.n_items})")
        result = bootstrap_alignment(
            matrix, reference, k=config.k, B=config.bootstrap_B, seed=config.seed
        )
        row["score"] = result.point_estimate
        row["se"] = result.standard_error
        row["status"] = "ok"
    except Exception as e:  # isolate any cell failure
        row["error"] = f"{type(e).__name__}: {e}"
    return row


def run_sweep(config: SweepConfig, workers: int = 1) -> list[dict]:
    """Evaluate every cell; returns one row dict per cell in config order."""
    manifest: DatasetManifest | None = None
    reference = None
    shared_error = None
    try:
        manifest = load_manifest(config.manifest_path)
        reference = load_matrix(config.reference)
        if reference.rows != manifest.n_items:
            raise ValueError(
                f"reference row count mismatch ({reference.rows}≠{manifest.n_items})"
            )
    except Exception as e:
        shared_error = f"{type(e).__name__}: {e}"

    if workers <= 1:
        return [_cell_row(c, config, manifest, reference, shared_error) for c in config.cells]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futs = [
            pool.submit(_cell_row, c, config, manifest, reference, shared_error)
            for c in config.cells
        ]
        return [f.result() for f in futs]


def sweep_rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()
