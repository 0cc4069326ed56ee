"""sensealign: representational alignment between embedding sets.

Quantifies how closely two models' similarity structures over a paired
dataset agree: cosine kernels, mutual-kNN alignment with bootstrap
standard errors, linear CKA, sensory-axis projection statistics
(delta-mu, Cohen's d, AUROC, KDE curves), per-item neighbor-overlap
reports, sweep orchestration, and VQA answer-log scoring.
"""

from .axis import SensoryAxis, SeparationReport, fit_axis, project, separation_report
from .kernels import (
    DEFAULT_K,
    AlignmentScore,
    Kernel,
    NeighborIndex,
    alignment_from_kernels,
    cosine_kernel,
    linear_cka,
    mutual_knn_alignment,
    overlap_counts,
    topk_neighbors,
)
from .neighbors import (
    OverlapRecord,
    overlap_delta_ranking,
    overlap_per_item,
    write_overlap_records,
)
from .stats import (
    BootstrapResult,
    DensityCurve,
    auroc,
    bootstrap_alignment,
    cohens_d,
    kde,
)
from .store import (
    ConditionTag,
    DatasetManifest,
    EmbeddingMatrix,
    ManifestItem,
    MatrixFormatError,
    MatrixMeta,
    ValidationReport,
    load_manifest,
    load_matrix,
    save_manifest,
    validate_cell_set,
    write_matrix,
)
from .sweep import SweepCell, SweepConfig, load_sweep_config, run_sweep
from .vqa import VqaLogEntry, VqaRow, normalize_answer, parse_vqa_log, render_vqa_csv, score_vqa

__version__ = "0.1.0"

__all__ = [
    "AlignmentScore",
    "BootstrapResult",
    "ConditionTag",
    "DEFAULT_K",
    "DatasetManifest",
    "DensityCurve",
    "EmbeddingMatrix",
    "Kernel",
    "ManifestItem",
    "MatrixFormatError",
    "MatrixMeta",
    "NeighborIndex",
    "OverlapRecord",
    "SensoryAxis",
    "SeparationReport",
    "SweepCell",
    "SweepConfig",
    "ValidationReport",
    "VqaLogEntry",
    "VqaRow",
    "alignment_from_kernels",
    "auroc",
    "bootstrap_alignment",
    "cohens_d",
    "cosine_kernel",
    "fit_axis",
    "kde",
    "linear_cka",
    "load_manifest",
    "load_matrix",
    "load_sweep_config",
    "mutual_knn_alignment",
    "normalize_answer",
    "overlap_counts",
    "overlap_delta_ranking",
    "overlap_per_item",
    "parse_vqa_log",
    "project",
    "render_vqa_csv",
    "run_sweep",
    "save_manifest",
    "score_vqa",
    "separation_report",
    "topk_neighbors",
    "validate_cell_set",
    "write_matrix",
    "write_overlap_records",
]
