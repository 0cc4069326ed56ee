"""Command-line surface.

Machine-readable results go to stdout (JSON for single results, CSV for
tables and curves); diagnostics go to stderr. Exit codes: 0 success,
1 validation error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import neighbors as nbr
from .axis import separation_report
from .kernels import DEFAULT_K, cosine_kernel, linear_cka, topk_neighbors
from .stats import bootstrap_alignment
from .store import MatrixFormatError, load_manifest, load_matrix, validate_cell_set
from .sweep import load_sweep_config, run_sweep, sweep_rows_to_csv
from .vqa import parse_vqa_log, render_vqa_csv, score_vqa

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2


def _emit(obj) -> None:
    print(json.dumps(obj))


def _fail(code: int, message: str) -> int:
    _emit({"error": message})
    print(f"error: {message}", file=sys.stderr)
    return code


def cmd_validate(args) -> int:
    manifest = load_manifest(args.manifest)
    matrices = [load_matrix(p) for p in args.matrices]
    report = validate_cell_set(manifest, matrices)
    _emit(report.to_dict())
    return EXIT_OK if report.passed else EXIT_VALIDATION


def cmd_align(args) -> int:
    a = load_matrix(args.a)
    b = load_matrix(args.b)
    result = bootstrap_alignment(
        a, b, k=args.k, B=args.bootstrap, seed=args.seed, workers=args.workers,
        keep_replicates=False,
    )
    _emit(
        {
            "score": result.point_estimate,
            "se": result.standard_error,
            "k": result.k,
            "n": result.n,
            "B": result.B,
            "seed": result.seed,
        }
    )
    return EXIT_OK


def cmd_cka(args) -> int:
    a = load_matrix(args.a)
    b = load_matrix(args.b)
    _emit({"cka": linear_cka(a, b), "n": a.rows})
    return EXIT_OK


def _parse_extra(specs) -> dict:
    extra = {}
    for spec in specs or []:
        name, sep, path = spec.partition("=")
        if not sep or not name or not path:
            raise ValueError(f"--extra expects NAME=PATH, got {spec!r}")
        if name in extra:
            raise ValueError(f"duplicate extra condition {name!r}")
        extra[name] = load_matrix(path)
    return extra


def cmd_project(args) -> int:
    see = load_matrix(args.see)
    hear = load_matrix(args.hear)
    extra = _parse_extra(args.extra)
    report = separation_report(see, hear, extra=extra, grid_points=args.grid_points)

    out = {
        "delta_mu": report.delta_mu,
        "cohens_d": report.cohens_d,
        "auroc": report.auroc,
        "conditions": sorted(report.curves),
        "bandwidths": {name: c.bandwidth for name, c in sorted(report.curves.items())},
    }
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write("condition,grid,density\n")
            for name in sorted(report.curves):
                curve = report.curves[name]
                for g, d in zip(curve.grid.tolist(), curve.density.tolist()):
                    f.write(f"{name},{g!r},{d!r}\n")
        out["curves_csv"] = args.out
    else:
        out["curves"] = {
            name: {"grid": c.grid.tolist(), "density": c.density.tolist()}
            for name, c in sorted(report.curves.items())
        }
    _emit(out)
    return EXIT_OK


def cmd_neighbors(args) -> int:
    manifest = load_manifest(args.manifest)
    mats = {name: load_matrix(path) for name, path in
            (("a", args.a), ("b", args.b), ("ref", args.ref))}
    for name, m in mats.items():
        if m.rows != manifest.n_items:
            raise ValueError(
                f"{name} matrix row count mismatch ({m.rows}≠{manifest.n_items})"
            )
    idx = {name: topk_neighbors(cosine_kernel(m), args.k) for name, m in mats.items()}
    top_m = args.top_m if args.top_m is not None else manifest.n_items
    records = nbr.overlap_delta_ranking(idx["a"], idx["b"], idx["ref"], top_m, manifest)
    if args.out:
        nbr.write_overlap_records(records, args.out)
        _emit({"records": len(records), "out": args.out})
    else:
        for rec in records:
            print(json.dumps(rec.to_dict(), ensure_ascii=False))
    return EXIT_OK


def cmd_sweep(args) -> int:
    config = load_sweep_config(args.config)
    rows = run_sweep(config, workers=args.workers)
    csv_text = sweep_rows_to_csv(rows)
    out_path = args.out or config.output
    if out_path:
        with open(out_path, "w", encoding="utf-8") as f:
            f.write(csv_text)
        _emit({"cells": len(rows), "failed": sum(r["status"] != "ok" for r in rows),
               "out": out_path})
    else:
        sys.stdout.write(csv_text)
    if any(r["status"] != "ok" for r in rows):
        print("error: one or more sweep cells failed", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def cmd_vqa_score(args) -> int:
    entries = parse_vqa_log(args.log)
    csv_text = render_vqa_csv(score_vqa(entries))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(csv_text)
        _emit({"entries": len(entries), "out": args.out})
    else:
        sys.stdout.write(csv_text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sensealign",
        description="Representational alignment toolkit: kernels, mutual-kNN "
        "alignment with bootstrap errors, CKA, sensory-axis separation, "
        "neighbor reports, sweeps, and VQA log scoring.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check matrices against a manifest")
    p.add_argument("manifest")
    p.add_argument("matrices", nargs="+")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("align", help="mutual-kNN alignment with bootstrap SE")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--k", type=int, default=DEFAULT_K)
    p.add_argument("--bootstrap", type=int, default=1000, metavar="B")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("cka", help="linear centered kernel alignment")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_cka)

    p = sub.add_parser("project", help="sensory-axis projections and separation report")
    p.add_argument("see")
    p.add_argument("hear")
    p.add_argument("--extra", action="append", metavar="NAME=PATH",
                   help="additional condition to project (repeatable)")
    p.add_argument("--grid-points", type=int, default=512)
    p.add_argument("--out", help="write per-condition density curves CSV here")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("neighbors", help="per-item neighbor overlap delta ranking")
    p.add_argument("a", help="condition A matrix")
    p.add_argument("b", help="condition B matrix")
    p.add_argument("ref", help="reference (sensory encoder) matrix")
    p.add_argument("--manifest", required=True)
    p.add_argument("--k", type=int, default=DEFAULT_K)
    p.add_argument("--top-m", type=int, default=None)
    p.add_argument("--out", help="write JSON-lines records here instead of stdout")
    p.set_defaults(func=cmd_neighbors)

    p = sub.add_parser("sweep", help="run an alignment sweep from a config file")
    p.add_argument("config", help="JSON or TOML sweep config")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="override the config output path")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("vqa-score", help="score a JSON-lines VQA answer log")
    p.add_argument("log")
    p.add_argument("--out", help="write the CSV table here instead of stdout")
    p.set_defaults(func=cmd_vqa_score)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MatrixFormatError as e:
        return _fail(EXIT_IO, str(e))
    except OSError as e:
        return _fail(EXIT_IO, f"{e.__class__.__name__}: {e}")
    except KeyError as e:
        return _fail(EXIT_VALIDATION, f"missing field {e}")
    except ValueError as e:
        return _fail(EXIT_VALIDATION, str(e))


if __name__ == "__main__":
    sys.exit(main())
