"""sensextract: embedding extraction for the sensealign toolkit.

Produces the EMB1 embedding matrices and JSON-lines logs the analysis
package consumes: prompt-conditioned LLM representations (single-pass and
generative), sensory-encoder embeddings, prompt/caption transformations
(ablation, redirection, visual-word controls), and caption-only VQA answer
logs. Communication with the analysis side is file formats and its CLI
only.
"""

from .emb1 import (
    Condition,
    Manifest,
    ManifestItem,
    load_manifest,
    matrix_meta,
    read_emb1,
    save_manifest,
    write_emb1,
)
from .embed import (
    DecodeSpec,
    GenerationSpec,
    GenerativeResult,
    HiddenTrace,
    embed_generative,
    embed_single_pass,
    generate_ids,
    generate_text,
)
from .encoders import MediaDecodeError, encode_sensory, resolve_encoder
from .models import HFCausalLM, ToyCausalLM, resolve_model
from .pipeline import ExtractionOutput, RunSpec, load_run_spec, run_encoder, run_extraction
from .prompts import INSTRUCTION_VERBS, build_prompt, visual_word_control
from .smoke import align_via_cli, smoke_run
from .transforms import TransformResult, transform_generation
from .vqa import normalize_answer, vqa_answer, vqa_prompt, write_vqa_log

__version__ = "0.1.0"

__all__ = [
    "Condition",
    "DecodeSpec",
    "ExtractionOutput",
    "GenerationSpec",
    "GenerativeResult",
    "HFCausalLM",
    "HiddenTrace",
    "INSTRUCTION_VERBS",
    "Manifest",
    "ManifestItem",
    "MediaDecodeError",
    "RunSpec",
    "ToyCausalLM",
    "TransformResult",
    "align_via_cli",
    "build_prompt",
    "embed_generative",
    "embed_single_pass",
    "encode_sensory",
    "generate_ids",
    "generate_text",
    "load_manifest",
    "load_run_spec",
    "matrix_meta",
    "normalize_answer",
    "read_emb1",
    "resolve_encoder",
    "resolve_model",
    "run_encoder",
    "run_extraction",
    "save_manifest",
    "smoke_run",
    "transform_generation",
    "visual_word_control",
    "vqa_answer",
    "vqa_prompt",
    "write_emb1",
    "write_vqa_log",
]
