"""Extraction CLI: run-spec extraction, sensory encoding, smoke runs."""

from __future__ import annotations

import argparse
import json
import sys

from .pipeline import load_run_spec, run_encoder, run_extraction
from .smoke import make_word_pool, smoke_run


def cmd_run(args) -> int:
    spec = load_run_spec(args.spec)
    out = run_extraction(spec)
    print(json.dumps({
        "matrix": out.matrix_path,
        "generations": out.generations_path,
        "n_items": out.n_items,
    }))
    return 0


def cmd_encode(args) -> int:
    path = run_encoder(args.manifest, args.encoder, args.out,
                       media_root=args.media_root, limit=args.limit)
    print(json.dumps({"matrix": path}))
    return 0


def cmd_smoke(args) -> int:
    pool = make_word_pool(args.pool) if args.pool else None
    report = smoke_run(
        manifest_path=args.manifest,
        reference_path=args.reference,
        model_id=args.model,
        output_dir=args.out,
        k=args.k,
        token_budget=args.budget,
        limit=args.limit,
        attribute_pool=pool,
        bootstrap=args.bootstrap,
        seed=args.seed,
    )
    print(json.dumps(report, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sensextract",
        description="Embedding extraction: prompt-conditioned LLM representations, "
        "sensory encoders, and direction-only smoke runs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="extract one (model, condition) cell from a run spec")
    p.add_argument("spec", help="JSON run-spec file")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("encode", help="encode manifest media through a sensory encoder")
    p.add_argument("manifest")
    p.add_argument("--encoder", required=True,
                   help="toy-image, toy-audio, or hf-image:<model_id>")
    p.add_argument("--out", required=True)
    p.add_argument("--media-root", default=None)
    p.add_argument("--limit", type=int, default=None)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("smoke", help="direction-only smoke run against a reference")
    p.add_argument("manifest")
    p.add_argument("reference", help="sensory reference matrix (EMB1)")
    p.add_argument("--model", default="toy:0")
    p.add_argument("--out", required=True)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--budget", type=int, default=128)
    p.add_argument("--limit", type=int, default=128)
    p.add_argument("--bootstrap", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pool", default=None, help="visual-attribute word list, one per line")
    p.set_defaults(func=cmd_smoke)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
