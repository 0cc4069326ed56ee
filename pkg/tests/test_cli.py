import json
import subprocess
import sys

import numpy as np
import pytest

from sensealign import (
    DatasetManifest,
    ManifestItem,
    save_manifest,
    write_matrix,
)
from sensealign.cli import main
from sensealign.sweep import load_sweep_config, run_sweep

from conftest import make_matrix, table1_log_lines


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def workspace(tmp_path, rng):
    """Manifest plus a few row-aligned matrices on disk."""
    n, d = 16, 6
    manifest = DatasetManifest(
        dataset_id="toy",
        items=tuple(ManifestItem(item_id=f"it{i:02d}", caption=f"caption {i}") for i in range(n)),
    )
    man_path = tmp_path / "manifest.json"
    save_manifest(manifest, man_path)

    ref = rng.standard_normal((n, d))
    noise = rng.standard_normal((n, d))
    paths = {}
    for name, data in [
        ("ref", ref),
        ("a", ref + 0.3 * noise),
        ("b", ref + 1.5 * noise),
        ("see", rng.standard_normal((n, d)) + 1.5),
        ("hear", rng.standard_normal((n, d)) - 1.5),
        ("none", rng.standard_normal((n, d))),
    ]:
        p = tmp_path / f"{name}.emb"
        write_matrix(make_matrix(data, model_id=f"model-{name}", cue="none"), p)
        paths[name] = str(p)
    return tmp_path, str(man_path), paths


class TestValidate:
    def test_pass(self, capsys, workspace):
        _, man, paths = workspace
        code, out, _ = run_cli(capsys, "validate", man, paths["a"], paths["ref"])
        assert code == 0
        assert json.loads(out)["passed"] is True

    def test_fail_on_mismatch(self, capsys, workspace, tmp_path, rng):
        _, man, _ = workspace
        short = tmp_path / "short.emb"
        write_matrix(make_matrix(rng.standard_normal((3, 6)), model_id="m"), short)
        code, out, _ = run_cli(capsys, "validate", man, str(short))
        assert code == 1
        report = json.loads(out)
        assert report["passed"] is False
        assert any("row count mismatch" in p for p in report["checks"][0]["problems"])


class TestAlign:
    def test_identical_files(self, capsys, workspace):
        _, _, paths = workspace
        code, out, _ = run_cli(
            capsys, "align", paths["a"], paths["a"], "--k", "10", "--bootstrap", "20"
        )
        assert code == 0
        result = json.loads(out)
        assert result["score"] == 1.0 and result["se"] == 0.0
        assert result["k"] == 10 and result["n"] == 16 and result["B"] == 20

    def test_swapped_pairs_fixture(self, capsys, tmp_path, swapped_pairs):
        A, B = swapped_pairs
        pa, pb = tmp_path / "a.emb", tmp_path / "b.emb"
        write_matrix(A, pa)
        write_matrix(B, pb)
        code, out, _ = run_cli(
            capsys, "align", str(pa), str(pb), "--k", "1", "--bootstrap", "10"
        )
        assert code == 0
        assert json.loads(out)["score"] == 0.0

    def test_row_mismatch_exits_1(self, capsys, workspace, tmp_path, rng):
        _, _, paths = workspace
        short = tmp_path / "short.emb"
        write_matrix(make_matrix(rng.standard_normal((5, 6)), model_id="m"), short)
        code, out, _ = run_cli(capsys, "align", paths["a"], str(short))
        assert code == 1
        assert "row count mismatch" in json.loads(out)["error"]

    def test_missing_file_exits_2(self, capsys, workspace):
        _, _, paths = workspace
        code, out, _ = run_cli(capsys, "align", paths["a"], "/nonexistent/x.emb")
        assert code == 2
        assert "error" in json.loads(out)

    def test_corrupt_file_exits_2(self, capsys, workspace, tmp_path):
        _, _, paths = workspace
        bad = tmp_path / "bad.emb"
        bad.write_bytes(b"XXXX" + b"\x00" * 64)
        code, out, _ = run_cli(capsys, "align", paths["a"], str(bad))
        assert code == 2
        assert "bad magic" in json.loads(out)["error"]


class TestCka:
    def test_self_cka(self, capsys, workspace):
        _, _, paths = workspace
        code, out, _ = run_cli(capsys, "cka", paths["a"], paths["a"])
        assert code == 0
        assert json.loads(out)["cka"] == pytest.approx(1.0, abs=1e-9)


class TestProject:
    def test_report_and_curves(self, capsys, workspace):
        tmp, _, paths = workspace
        curves = tmp / "curves.csv"
        code, out, _ = run_cli(
            capsys,
            "project",
            paths["see"],
            paths["hear"],
            "--extra",
            f"none={paths['none']}",
            "--grid-points",
            "64",
            "--out",
            str(curves),
        )
        assert code == 0
        report = json.loads(out)
        assert set(report["conditions"]) == {"see", "hear", "none"}
        assert report["delta_mu"] > 0
        assert 0 <= report["auroc"] <= 1
        lines = curves.read_text().splitlines()
        assert lines[0] == "condition,grid,density"
        assert len(lines) == 1 + 3 * 64

    def test_inline_curves_without_out(self, capsys, workspace):
        _, _, paths = workspace
        code, out, _ = run_cli(
            capsys, "project", paths["see"], paths["hear"], "--grid-points", "32"
        )
        assert code == 0
        report = json.loads(out)
        assert len(report["curves"]["see"]["grid"]) == 32

    def test_bad_extra_spec(self, capsys, workspace):
        _, _, paths = workspace
        code, out, _ = run_cli(
            capsys, "project", paths["see"], paths["hear"], "--extra", "oops"
        )
        assert code == 1
        assert "NAME=PATH" in json.loads(out)["error"]


class TestNeighborsCmd:
    def test_jsonl_stdout(self, capsys, workspace):
        _, man, paths = workspace
        code, out, _ = run_cli(
            capsys,
            "neighbors",
            paths["a"],
            paths["b"],
            paths["ref"],
            "--manifest",
            man,
            "--k",
            "3",
            "--top-m",
            "5",
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 5
        rec = json.loads(lines[0])
        assert {"item_id", "overlap_a", "overlap_b", "delta", "neighbors_ref"} <= rec.keys()
        assert len(rec["neighbors_ref"]) == 3

    def test_out_file(self, capsys, workspace):
        tmp, man, paths = workspace
        out_path = tmp / "nn.jsonl"
        code, out, _ = run_cli(
            capsys, "neighbors", paths["a"], paths["b"], paths["ref"],
            "--manifest", man, "--k", "2", "--out", str(out_path),
        )
        assert code == 0
        assert json.loads(out)["records"] == 16
        assert len(out_path.read_text().splitlines()) == 16


def write_sweep_config(path, man, ref, cells, fmt="json", **over):
    cfg = {
        "manifest_path": man,
        "reference": ref,
        "k": over.get("k", 5),
        "bootstrap_B": over.get("bootstrap_B", 20),
        "seed": over.get("seed", 0),
        "cells": cells,
    }
    if fmt == "json":
        path.write_text(json.dumps(cfg), encoding="utf-8")
    else:
        lines = [
            f'manifest_path = "{man}"',
            f'reference = "{ref}"',
            f"k = {cfg['k']}",
            f"bootstrap_B = {cfg['bootstrap_B']}",
            f"seed = {cfg['seed']}",
        ]
        for c in cells:
            lines.append("[[cells]]")
            for key, val in c.items():
                lines.append(f'{key} = "{val}"' if isinstance(val, str) else f"{key} = {val}")
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


class TestSweep:
    def test_matches_align_bit_for_bit(self, capsys, workspace):
        tmp, man, paths = workspace
        cells = [
            {"matrix_path": paths["a"], "model_id": "m", "condition": "none", "token_budget": 32},
            {"matrix_path": paths["b"], "model_id": "m", "condition": "none", "token_budget": 64},
        ]
        cfg = write_sweep_config(tmp / "sweep.json", man, paths["ref"], cells)
        code, out, _ = run_cli(capsys, "sweep", str(cfg))
        assert code == 0
        rows = out.strip().splitlines()
        assert len(rows) == 3  # header + 2 cells
        header = rows[0].split(",")
        for row_text, path in zip(rows[1:], (paths["a"], paths["b"])):
            row = dict(zip(header, row_text.split(",")))
            code2, out2, _ = run_cli(
                capsys, "align", path, paths["ref"],
                "--k", "5", "--bootstrap", "20", "--seed", "0",
            )
            expected = json.loads(out2)
            assert float(row["score"]) == expected["score"]
            assert float(row["se"]) == expected["se"]
            assert row["status"] == "ok"

    def test_monotone_noise_sweep(self, capsys, tmp_path):
        rng = np.random.default_rng(0)
        ref = rng.standard_normal((48, 8))
        noise = rng.standard_normal((48, 8))
        man = tmp_path / "man.json"
        save_manifest(
            DatasetManifest(
                dataset_id="toy",
                items=tuple(ManifestItem(f"i{i}", f"c{i}") for i in range(48)),
            ),
            man,
        )
        ref_path = tmp_path / "ref.emb"
        write_matrix(make_matrix(ref, model_id="enc"), ref_path)
        cells = []
        for i, s in enumerate([0.0, 0.1, 0.25, 0.5, 1.0, 2.0]):
            p = tmp_path / f"cell{i}.emb"
            write_matrix(make_matrix(ref + s * noise, model_id="m"), p)
            cells.append(
                {"matrix_path": str(p), "model_id": "m", "condition": "none",
                 "token_budget": 2 ** (5 + i)}
            )
        cfg = write_sweep_config(tmp_path / "sweep.json", str(man), str(ref_path), cells)
        code, out, _ = run_cli(capsys, "sweep", str(cfg))
        assert code == 0
        scores = [float(r.split(",")[8]) for r in out.strip().splitlines()[1:]]
        assert scores[0] == 1.0
        assert all(a > b for a, b in zip(scores, scores[1:]))

    def test_missing_cell_file_is_isolated(self, capsys, workspace):
        tmp, man, paths = workspace
        cells = [
            {"matrix_path": paths["a"], "model_id": "m", "condition": "none"},
            {"matrix_path": str(tmp / "missing.emb"), "model_id": "m", "condition": "see"},
        ]
        cfg = write_sweep_config(tmp / "sweep.json", man, paths["ref"], cells)
        code, out, err = run_cli(capsys, "sweep", str(cfg))
        assert code != 0
        rows = out.strip().splitlines()
        assert len(rows) == 3
        assert rows[1].split(",")[10] == "ok"
        assert rows[2].split(",")[10] == "error"
        assert "failed" in err

    def test_toml_config_and_workers(self, capsys, workspace):
        tmp, man, paths = workspace
        cells = [
            {"matrix_path": paths["a"], "model_id": "m", "condition": "none"},
            {"matrix_path": paths["b"], "model_id": "m", "condition": "see"},
        ]
        cfg_toml = write_sweep_config(tmp / "sweep.toml", man, paths["ref"], cells, fmt="toml")
        serial = run_sweep(load_sweep_config(cfg_toml), workers=1)
        threaded = run_sweep(load_sweep_config(cfg_toml), workers=4)
        assert serial == threaded
        code, out, _ = run_cli(capsys, "sweep", str(cfg_toml), "--workers", "2")
        assert code == 0
        assert len(out.strip().splitlines()) == 3

    def test_duplicate_cell_labels_rejected(self, workspace):
        tmp, man, paths = workspace
        cells = [
            {"matrix_path": paths["a"], "model_id": "m", "condition": "none"},
            {"matrix_path": paths["b"], "model_id": "m", "condition": "none"},
        ]
        cfg = write_sweep_config(tmp / "dup.json", man, paths["ref"], cells)
        with pytest.raises(ValueError, match="duplicate cell labels"):
            load_sweep_config(cfg)

    def test_out_file_with_summary(self, capsys, workspace):
        tmp, man, paths = workspace
        cells = [{"matrix_path": paths["a"], "model_id": "m", "condition": "none"}]
        cfg = write_sweep_config(tmp / "sweep.json", man, paths["ref"], cells)
        out_csv = tmp / "result.csv"
        code, out, _ = run_cli(capsys, "sweep", str(cfg), "--out", str(out_csv))
        assert code == 0
        assert json.loads(out) == {"cells": 1, "failed": 0, "out": str(out_csv)}
        assert out_csv.read_text().startswith("model_id,")


class TestVqaScoreCmd:
    def test_table(self, capsys, tmp_path):
        log = tmp_path / "log.jsonl"
        log.write_text("\n".join(table1_log_lines()) + "\n", encoding="utf-8")
        code, out, _ = run_cli(capsys, "vqa-score", str(log))
        assert code == 0
        assert "Overall,none,2334,1512,64.78" in out
        assert "Overall,see,2334,1567,67.14" in out

    def test_malformed_line_exits_1(self, capsys, tmp_path):
        log = tmp_path / "log.jsonl"
        log.write_text('{"category": "x"}\n', encoding="utf-8")
        code, out, _ = run_cli(capsys, "vqa-score", str(log))
        assert code == 1
        assert "line 1" in json.loads(out)["error"]


class TestSubprocessEntrypoint:
    def test_module_invocation(self, tmp_path, rng):
        pa = tmp_path / "a.emb"
        write_matrix(make_matrix(rng.standard_normal((8, 4)), model_id="m"), pa)
        proc = subprocess.run(
            [sys.executable, "-m", "sensealign", "align", str(pa), str(pa),
             "--k", "3", "--bootstrap", "5"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["score"] == 1.0

    def test_exit_code_2_for_missing_file(self):
        proc = subprocess.run(
            [sys.executable, "-m", "sensealign", "cka", "/no/such.emb", "/no/such2.emb"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 2
        assert proc.stderr  # diagnostics on stderr
