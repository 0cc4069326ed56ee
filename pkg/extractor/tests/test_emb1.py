import json
import subprocess
import sys

import numpy as np
import pytest

from sensextract import (
    Condition,
    load_manifest,
    matrix_meta,
    read_emb1,
    save_manifest,
    write_emb1,
)


def sensealign(*args):
    return subprocess.run(
        [sys.executable, "-m", "sensealign", *args], capture_output=True, text=True
    )


class TestEmb1:
    def test_round_trip(self, tmp_path, ):
        rng = np.random.default_rng(0)
        data = rng.standard_normal((5, 7)).astype(np.float32)
        meta = matrix_meta("toy:0", Condition("see", verb="imagine"), token_budget=8)
        path = tmp_path / "m.emb"
        write_emb1(data, meta, path)
        loaded, loaded_meta = read_emb1(path)
        assert np.array_equal(loaded, data)
        assert loaded_meta == meta

    def test_zero_row_rejected(self, tmp_path):
        data = np.ones((3, 4), dtype=np.float32)
        data[1] = 0
        with pytest.raises(ValueError, match="zero row"):
            write_emb1(data, matrix_meta("m", Condition()), tmp_path / "z.emb")

    def test_non_finite_rejected(self, tmp_path):
        data = np.ones((2, 2), dtype=np.float32)
        data[0, 0] = np.nan
        with pytest.raises(ValueError, match="non-finite"):
            write_emb1(data, matrix_meta("m", Condition()), tmp_path / "n.emb")

    def test_manifest_round_trip(self, tiny_manifest):
        manifest, path = tiny_manifest
        assert load_manifest(path) == manifest


class TestInteropWithAnalysisCli:
    """Files written here must be readable by the analysis toolkit's CLI."""

    def test_written_matrix_passes_validate(self, tmp_path, tiny_manifest):
        manifest, man_path = tiny_manifest
        rng = np.random.default_rng(1)
        data = rng.standard_normal((manifest.n_items, 16)).astype(np.float32)
        meta = matrix_meta("toy:0", Condition("hear"), token_budget=32)
        path = tmp_path / "cell.emb"
        write_emb1(data, meta, path)

        proc = sensealign("validate", str(man_path), str(path))
        assert proc.returncode == 0, proc.stdout + proc.stderr
        report = json.loads(proc.stdout)
        assert report["passed"] is True
        assert report["checks"][0]["label"] == "toy:0/hear"

    def test_align_on_written_matrices(self, tmp_path, tiny_manifest):
        manifest, _ = tiny_manifest
        rng = np.random.default_rng(2)
        data = rng.standard_normal((manifest.n_items, 8)).astype(np.float32)
        pa, pb = tmp_path / "a.emb", tmp_path / "b.emb"
        write_emb1(data, matrix_meta("a", Condition()), pa)
        write_emb1(data, matrix_meta("b", Condition()), pb)
        proc = sensealign("align", str(pa), str(pb), "--k", "2", "--bootstrap", "5")
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["score"] == 1.0
