"""Direction-only smoke run against a sensory reference matrix.

Extracts a small family of embedding cells from one model (single-pass and
generative under no cue, generative under the SEE cue, and the two
visual-word caption controls), scores each against a reference encoder
matrix through the analysis CLI, and records whether the expected
directions hold: generative above single-pass, SEE above no cue, and both
visual-word controls at or below the unmodified-caption baseline.

The directions are recorded, not asserted: with a random-weight toy model
they carry no signal, and at full scale the report is the deliverable.
The analysis toolkit is reached only through its CLI (subprocess), never
imported.
"""

from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

from .emb1 import Condition, Manifest, load_manifest, read_emb1, save_manifest, write_emb1
from .embed import DecodeSpec
from .models import resolve_model
from .pipeline import RunSpec, run_extraction


def align_via_cli(matrix_path: str, reference_path: str, k: int, bootstrap: int,
                  seed: int = 0) -> dict:
    """Score one pair through the analysis CLI; returns its JSON result."""
    proc = subprocess.run(
        [sys.executable, "-m", "sensealign", "align", str(matrix_path),
         str(reference_path), "--k", str(k), "--bootstrap", str(bootstrap),
         "--seed", str(seed)],
        capture_output=True,
        text=True,
    )
    payload = json.loads(proc.stdout)
    if proc.returncode != 0:
        raise RuntimeError(f"align failed: {payload.get('error', proc.stderr)}")
    return payload


def smoke_run(
    manifest_path: str,
    reference_path: str,
    model_id: str,
    output_dir: str,
    k: int = 10,
    token_budget: int = 128,
    limit: int | None = 128,
    attribute_pool: list[str] | None = None,
    bootstrap: int = 200,
    seed: int = 0,
) -> dict:
    """Run the smoke cells, score them, and write smoke_report.json."""
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)

    manifest = load_manifest(manifest_path)
    n = min(limit or manifest.n_items, manifest.n_items)
    if n < k + 1:
        raise ValueError(f"need at least k+1={k + 1} items, have {n}")

    ref_data, ref_meta = read_emb1(reference_path)
    if ref_data.shape[0] < n:
        raise ValueError(f"reference has {ref_data.shape[0]} rows, need {n}")
    if n < manifest.n_items or ref_data.shape[0] > n:
        # slice both sides to the same leading subset and work from copies
        manifest = Manifest(dataset_id=manifest.dataset_id, items=manifest.items[:n])
        manifest_path = out / "smoke_manifest.json"
        save_manifest(manifest, manifest_path)
        reference_path = out / "smoke_reference.emb"
        write_emb1(ref_data[:n], ref_meta, reference_path)

    model = resolve_model(model_id)
    common = dict(
        manifest=str(manifest_path),
        output_dir=str(out),
        model_id=model_id,
        token_budget=token_budget,
        decode=DecodeSpec(kind="greedy"),
        limit=n,
    )
    cells = {
        "single_pass_none": RunSpec(mode="single-pass", condition=Condition("none"), **common),
        "generative_none": RunSpec(mode="generative", condition=Condition("none"), **common),
        "generative_see": RunSpec(mode="generative", condition=Condition("see"), **common),
    }
    if attribute_pool:
        cells["caption_plus_words"] = RunSpec(
            mode="generative", condition=Condition("none"),
            caption_variant="plus-visual-words", attribute_pool=tuple(attribute_pool),
            variant_seed=seed, **common,
        )
        cells["words_only"] = RunSpec(
            mode="generative", condition=Condition("none"),
            caption_variant="visual-words-only", attribute_pool=tuple(attribute_pool),
            variant_seed=seed, **common,
        )

    scores = {}
    for name, spec in cells.items():
        result = run_extraction(spec, model=model)
        scores[name] = align_via_cli(result.matrix_path, reference_path, k, bootstrap, seed)

    report = {
        "model_id": model_id,
        "reference": str(reference_path),
        "n_items": n,
        "k": k,
        "token_budget": token_budget,
        "bootstrap_B": bootstrap,
        "scores": {name: s["score"] for name, s in scores.items()},
        "standard_errors": {name: s["se"] for name, s in scores.items()},
        "directions": {
            "generative_ge_single_pass": bool(
                scores["generative_none"]["score"] >= scores["single_pass_none"]["score"]
            ),
            "see_ge_none": bool(
                scores["generative_see"]["score"] >= scores["generative_none"]["score"]
            ),
        },
    }
    if attribute_pool:
        base = scores["generative_none"]["score"]
        report["directions"]["append_le_baseline"] = bool(
            scores["caption_plus_words"]["score"] <= base
        )
        report["directions"]["replace_le_baseline"] = bool(
            scores["words_only"]["score"] <= base
        )
        report["directions"]["replace_le_append"] = bool(
            scores["words_only"]["score"] <= scores["caption_plus_words"]["score"]
        )

    report_path = out / "smoke_report.json"
    report_path.write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
    report["report_path"] = str(report_path)
    return report


def make_word_pool(path: str | Path) -> list[str]:
    """Attribute pool file: one visual attribute word per line."""
    words = [w.strip() for w in Path(path).read_text(encoding="utf-8").splitlines()]
    return [w for w in words if w]
