#!/usr/bin/env python3
"""Walkthrough: the file format, manifest, and CLI sweep, end to end.

Writes a manifest and a family of EMB1 matrices that mimic a
generation-length sweep (progressively less noise relative to the
reference as the token budget grows), then drives the installed CLI:
validate -> align -> sweep, all through files like a real experiment.
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np

from sensealign import (
    ConditionTag,
    DatasetManifest,
    EmbeddingMatrix,
    ManifestItem,
    MatrixMeta,
    save_manifest,
    write_matrix,
)

rng = np.random.default_rng(42)
n, d = 64, 16
workdir = Path(tempfile.mkdtemp(prefix="sensealign-demo-"))
print(f"working in {workdir}")

manifest = DatasetManifest(
    dataset_id="demo-sweep",
    items=tuple(ManifestItem(f"item-{i:03d}", f"caption {i}") for i in range(n)),
)
save_manifest(manifest, workdir / "manifest.json")

reference = rng.standard_normal((n, d))
write_matrix(
    EmbeddingMatrix(reference, MatrixMeta(model_id="toy-encoder")),
    workdir / "encoder.emb",
)

# longer "generations" recover more of the encoder geometry
noise = rng.standard_normal((n, d))
cells = []
for budget, noise_scale in [(32, 2.0), (64, 1.2), (128, 0.7), (256, 0.35)]:
    path = workdir / f"llm_T{budget}.emb"
    meta = MatrixMeta(
        model_id="toy-llm",
        condition=ConditionTag(cue="see", verb="imagine"),
        token_budget=budget,
    )
    write_matrix(EmbeddingMatrix(reference + noise_scale * noise, meta), path)
    cells.append(
        {"matrix_path": str(path), "model_id": "toy-llm", "condition": "see",
         "token_budget": budget}
    )

config = {
    "manifest_path": str(workdir / "manifest.json"),
    "reference": str(workdir / "encoder.emb"),
    "k": 10,
    "bootstrap_B": 300,
    "seed": 0,
    "cells": cells,
    "output": str(workdir / "sweep.csv"),
}
(workdir / "sweep.json").write_text(json.dumps(config, indent=2))


def cli(*args):
    proc = subprocess.run(
        [sys.executable, "-m", "sensealign", *args], capture_output=True, text=True
    )
    print(f"$ sensealign {' '.join(args)}  (exit {proc.returncode})")
    return proc.stdout


out = cli("validate", str(workdir / "manifest.json"), str(workdir / "encoder.emb"),
          cells[0]["matrix_path"])
print(f"  validation passed: {json.loads(out)['passed']}")

out = cli("align", cells[-1]["matrix_path"], str(workdir / "encoder.emb"),
          "--k", "10", "--bootstrap", "300")
result = json.loads(out)
print(f"  T=256 alignment: {result['score']:.3f} +- {result['se']:.3f}")

cli("sweep", str(workdir / "sweep.json"))
print("\nsweep.csv:")
print((workdir / "sweep.csv").read_text())
