"""Visual-auditory axis: fit, project, and quantify modality separation.

The axis is the unit vector along the difference of mean embeddings under
the SEE and HEAR prompt conditions,

    v = (mu_see - mu_hear) / |mu_see - mu_hear|,

and each embedding's scalar position along it is s_i = dot(x_i, v).
Separation of the two projection clouds is reported three ways: the raw
mean gap (which by construction equals |mu_see - mu_hear|), Cohen's d,
and AUROC with SEE as the positive class. Other conditions (e.g. no cue)
are projected onto the same axis for display but never used to fit it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .stats import DensityCurve, auroc, cohens_d, kde
from .store import as_embedding_array


@dataclass(frozen=True)
class SensoryAxis:
    direction: np.ndarray  # unit vector, float64
    mu_see: np.ndarray
    mu_hear: np.ndarray
    delta_norm: float

    @property
    def dim(self) -> int:
        return self.direction.shape[0]


@dataclass(frozen=True)
class SeparationReport:
    delta_mu: float
    cohens_d: float
    auroc: float
    curves: dict[str, DensityCurve] = field(default_factory=dict)
    projections: dict[str, np.ndarray] = field(default_factory=dict)


def fit_axis(X_see, X_hear) -> SensoryAxis:
    """Unit mean-difference direction between the SEE and HEAR sets."""
    A = as_embedding_array(X_see)
    B = as_embedding_array(X_hear)
    if A.shape[1] != B.shape[1]:
        raise ValueError(f"dimension mismatch ({A.shape[1]}≠{B.shape[1]})")
    if A.shape[0] == 0 or B.shape[0] == 0:
        raise ValueError("both condition sets must be nonempty")
    mu_see = A.mean(axis=0)
    mu_hear = B.mean(axis=0)
    diff = mu_see - mu_hear
    norm = float(np.linalg.norm(diff))
    if norm == 0:
        raise ValueError("degenerate axis: mean SEE and HEAR embeddings coincide")
    return SensoryAxis(direction=diff / norm, mu_see=mu_see, mu_hear=mu_hear, delta_norm=norm)


def project(X, axis: SensoryAxis) -> np.ndarray:
    """Scalar positions of each row along the axis, row order preserved."""
    A = as_embedding_array(X)
    if A.shape[1] != axis.dim:
        raise ValueError(f"dimension mismatch ({A.shape[1]}≠{axis.dim})")
    return A @ axis.direction


def separation_report(
    X_see,
    X_hear,
    extra: dict | None = None,
    grid_points: int = 512,
) -> SeparationReport:
    """Fit the axis on SEE/HEAR, project every condition, and summarize.

    ``extra`` maps condition names to additional embedding sets (same
    dimension) that are projected and density-estimated alongside SEE and
    HEAR; they do not influence the axis or the separation statistics.
    """
    axis = fit_axis(X_see, X_hear)
    projections = {"see": project(X_see, axis), "hear": project(X_hear, axis)}
    for name, X in (extra or {}).items():
        if name in projections:
            raise ValueError(f"condition name {name!r} collides with see/hear")
        projections[name] = project(X, axis)

    s_see, s_hear = projections["see"], projections["hear"]
    curves = {name: kde(s, grid_points=grid_points) for name, s in projections.items()}
    return SeparationReport(
        delta_mu=float(s_see.mean() - s_hear.mean()),
        cohens_d=cohens_d(s_see, s_hear),
        auroc=auroc(s_see, s_hear),
        curves=curves,
        projections=projections,
    )
