"""Bootstrap uncertainty for alignment scores and scalar separation stats.

The bootstrap resamples N paired rows with replacement (same index draws
applied to both embedding sets), rebuilds both kernels and neighbor sets
on the resampled multiset, and recomputes the alignment score; the
reported standard error is the sample standard deviation over B
replicates. Duplicated rows are distinct items in a replicate: neighbor
search excludes only each item's own position, so a duplicate usually is
its twin's nearest neighbor.

Replicate b draws from an RNG stream derived from (seed, b), never from a
shared sequential stream, so results are bit-identical for any worker
count or execution order.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .kernels import DEFAULT_K, cosine_kernel, topk_membership
from .store import as_embedding_array

_trapezoid = getattr(np, "trapezoid", None) or np.trapz  # numpy 1.x fallback


@dataclass(frozen=True)
class BootstrapResult:
    """Full-sample score plus bootstrap spread.

    ``point_estimate`` is the score on the full data (not the replicate
    mean; the replicate mean stays available through the retained scores).
    """

    point_estimate: float
    standard_error: float
    B: int
    seed: int
    k: int
    n: int
    replicate_scores: np.ndarray | None = None

    @property
    def replicate_mean(self) -> float | None:
        if self.replicate_scores is None:
            return None
        return float(self.replicate_scores.mean())


@dataclass(frozen=True)
class DensityCurve:
    """1-D kernel density estimate sampled on a regular grid."""

    grid: np.ndarray
    density: np.ndarray
    bandwidth: float

    def integral(self) -> float:
        return float(_trapezoid(self.density, self.grid))


def _alignment_on_kernels(Ka: np.ndarray, Kb: np.ndarray, k: int) -> float:
    # membership matrices select the same sets as topk_neighbors; only the
    # intersection sizes are needed here, never the ordered lists
    Ma = topk_membership(Ka, k)
    Mb = topk_membership(Kb, k)
    n = Ka.shape[0]
    return int(np.count_nonzero(Ma & Mb)) / (n * k)


def _replicate_chunk(
    Ka: np.ndarray, Kb: np.ndarray, k: int, seed: int, b_lo: int, b_hi: int
) -> np.ndarray:
    """Scores for replicates b_lo..b_hi-1, each seeded by (seed, b).

    Cosine depends only on the two rows involved, so the kernel of a
    resampled multiset is a gather of the full kernel; no matmul rerun.
    """
    n = Ka.shape[0]
    out = np.empty(b_hi - b_lo, dtype=np.float64)
    for j, b in enumerate(range(b_lo, b_hi)):
        rng = np.random.default_rng([seed, b])
        idx = rng.integers(0, n, size=n)
        grid = np.ix_(idx, idx)
        out[j] = _alignment_on_kernels(Ka[grid], Kb[grid], k)
    return out


def bootstrap_alignment(
    Xa,
    Xb,
    k: int = DEFAULT_K,
    B: int = 1000,
    seed: int = 0,
    workers: int = 1,
    keep_replicates: bool = True,
) -> BootstrapResult:
    """Mutual-kNN alignment of two paired embedding sets with bootstrap SE.

    Parameters
    ----------
    Xa, Xb : EmbeddingMatrix or (n, d) array
        Row-paired embedding sets; dimensions may differ.
    k : int
        Neighborhood size.
    B : int
        Number of bootstrap replicates, at least 2.
    seed : int
        Nonnegative base seed; replicate b uses the stream (seed, b).
    workers : int
        Process count for replicate evaluation. Results are identical for
        any value; this is purely a throughput knob.
    """
    A = as_embedding_array(Xa)
    Bm = as_embedding_array(Xb)
    n = A.shape[0]
    if Bm.shape[0] != n:
        raise ValueError(f"row count mismatch ({n}≠{Bm.shape[0]})")
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must be in [1, n-1] = [1, {n - 1}], got {k}")
    if B < 2:
        raise ValueError(f"need B >= 2 replicates, got {B}")
    if seed < 0:
        raise ValueError(f"seed must be nonnegative, got {seed}")

    Ka = cosine_kernel(A).values
    Kb = cosine_kernel(Bm).values
    point = _alignment_on_kernels(Ka.copy(), Kb.copy(), k)

    if workers <= 1:
        scores = _replicate_chunk(Ka, Kb, k, seed, 0, B)
    else:
        bounds = np.linspace(0, B, workers + 1, dtype=int)
        scores = np.empty(B, dtype=np.float64)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futs = {
                pool.submit(_replicate_chunk, Ka, Kb, k, seed, int(lo), int(hi)): (int(lo), int(hi))
                for lo, hi in zip(bounds[:-1], bounds[1:])
                if hi > lo
            }
            for fut, (lo, hi) in futs.items():
                scores[lo:hi] = fut.result()

    se = float(np.std(scores, ddof=1))
    return BootstrapResult(
        point_estimate=float(point),
        standard_error=se,
        B=B,
        seed=seed,
        k=k,
        n=n,
        replicate_scores=scores if keep_replicates else None,
    )


def cohens_d(a, b) -> float:
    """Standardized mean difference (mean(a) - mean(b)) / pooled sd.

    Pooled variance is Bessel-corrected:
    s_p^2 = ((n_a - 1) s_a^2 + (n_b - 1) s_b^2) / (n_a + n_b - 2).
    """
    x = np.asarray(a, dtype=np.float64).ravel()
    y = np.asarray(b, dtype=np.float64).ravel()
    if x.size < 2 or y.size < 2:
        raise ValueError("need at least 2 samples per group")
    pooled_var = ((x.size - 1) * x.var(ddof=1) + (y.size - 1) * y.var(ddof=1)) / (
        x.size + y.size - 2
    )
    if pooled_var == 0:
        raise ValueError("zero pooled variance")
    return float((x.mean() - y.mean()) / np.sqrt(pooled_var))


def auroc(pos, neg) -> float:
    """Rank-based discriminability of pos over neg (0.5 chance, 1 perfect).

    Mann-Whitney convention: mean over all (p, q) pairs of 1 if p > q,
    0.5 if p == q, 0 otherwise. Midranks make the tie handling exact, so
    the result equals the O(n^2) pairwise definition bit-for-bit.
    """
    p = np.asarray(pos, dtype=np.float64).ravel()
    q = np.asarray(neg, dtype=np.float64).ravel()
    if p.size == 0 or q.size == 0:
        raise ValueError("both sample sets must be nonempty")
    ranks = rankdata(np.concatenate([p, q]))
    u = ranks[: p.size].sum() - p.size * (p.size + 1) / 2
    return float(u / (p.size * q.size))


def scott_bandwidth(samples: np.ndarray) -> float:
    """Scott's rule: n^(-1/5) times the sample standard deviation."""
    return float(samples.std(ddof=1) * samples.size ** (-1 / 5))


def kde(samples, grid_points: int = 512, bandwidth: float | None = None) -> DensityCurve:
    """Gaussian kernel density estimate on a regular grid.

    The grid spans [min - 4h, max + 4h] so the curve integrates to 1 up to
    the far Gaussian tails. Bandwidth defaults to Scott's rule; samples
    with zero variance require an explicit bandwidth.
    """
    x = np.asarray(samples, dtype=np.float64).ravel()
    if x.size < 2:
        raise ValueError("need at least 2 samples")
    if grid_points < 2:
        raise ValueError("need at least 2 grid points")
    if bandwidth is None:
        if x.std(ddof=1) == 0:
            raise ValueError("zero variance samples; pass an explicit bandwidth")
        bandwidth = scott_bandwidth(x)
    if bandwidth <= 0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth}")
    grid = np.linspace(x.min() - 4 * bandwidth, x.max() + 4 * bandwidth, grid_points)
    z = (grid[:, None] - x[None, :]) / bandwidth
    density = np.exp(-0.5 * z * z).sum(axis=1) / (x.size * bandwidth * np.sqrt(2 * np.pi))
    return DensityCurve(grid=grid, density=density, bandwidth=float(bandwidth))
