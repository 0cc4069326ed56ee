"""Cosine kernels, exact top-k neighbors, mutual-kNN alignment, linear CKA.

A model's representation of a dataset is summarized by its kernel: the
n x n matrix of pairwise cosine similarities between its embeddings. Two
kernels are compared with mutual-kNN alignment,

    align(K, K') = (1/n) * sum_i |N_k(i) under K  intersect  N_k(i) under K'| / k,

the mean fraction of shared top-k neighbors over paired rows. Self is
excluded from every neighbor list (including it would add one shared
neighbor to every set and inflate all scores uniformly), and ties are
broken by ascending row index so results are identical across platforms
and worker counts. The default k used throughout the toolkit is 10.

Dataset sizes here are at most a few thousand rows, so everything is
exact and O(n^2); there is deliberately no approximate-NN path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .store import as_embedding_array

DEFAULT_K = 10


@dataclass(frozen=True)
class Kernel:
    """Pairwise cosine similarity matrix over one embedding set.

    Symmetric, unit diagonal, entries in [-1, 1] up to float rounding.
    """

    values: np.ndarray

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class NeighborIndex:
    """Top-k neighbor lists per row, self excluded.

    ``lists[i]`` holds k distinct row indices ordered by descending
    similarity, ties by ascending index.
    """

    lists: np.ndarray  # (n, k) int64
    k: int

    @property
    def n(self) -> int:
        return self.lists.shape[0]


@dataclass(frozen=True)
class AlignmentScore:
    """Mutual-kNN alignment in [0, 1]; value * n * k is an integer."""

    value: float
    k: int
    n: int


def cosine_kernel(X) -> Kernel:
    """Cosine similarity kernel K[i,j] = dot(x_i, x_j) / (|x_i| |x_j|).

    Accepts an EmbeddingMatrix or any 2-D array-like; computation is in
    float64. The result is exactly symmetric with an exact unit diagonal.
    """
    V = as_embedding_array(X)
    n = V.shape[0]
    if n < 2:
        raise ValueError(f"need at least 2 rows, got {n}")
    norms = np.linalg.norm(V, axis=1, keepdims=True)
    if np.any(norms == 0):
        bad = [int(i) for i in np.flatnonzero(norms[:, 0] == 0)]
        raise ValueError(f"zero row at indices {bad}; cosine undefined")
    U = V / norms
    K = U @ U.T
    K = (K + K.T) / 2.0  # kill asymmetric rounding from BLAS
    np.fill_diagonal(K, 1.0)
    return Kernel(values=K)


def topk_neighbors(K: Kernel, k: int) -> NeighborIndex:
    """Exact top-k neighbor lists under a kernel, self excluded.

    Ordering is deterministic: descending similarity, then ascending row
    index (numpy's stable sort on the negated row gives exactly this).
    """
    n = K.n
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must be in [1, n-1] = [1, {n - 1}], got {k}")
    vals = K.values.copy()
    np.fill_diagonal(vals, -np.inf)
    order = np.argsort(-vals, axis=1, kind="stable")
    return NeighborIndex(lists=np.ascontiguousarray(order[:, :k], dtype=np.int64), k=k)


def topk_membership(K_values: np.ndarray, k: int) -> np.ndarray:
    """Boolean top-k membership matrix, same selection rule as topk_neighbors.

    M[i, j] is True iff j is one of row i's top-k neighbors. Set-only and
    partition-based, so much faster than full per-row sorts; used by the
    bootstrap where only intersection counts matter. ``K_values`` is
    consumed as scratch space.
    """
    n = K_values.shape[0]
    np.fill_diagonal(K_values, -np.inf)
    # k-th largest value per row, then take everything strictly above it
    # and fill the remainder from the tied values in ascending index order.
    thr = np.partition(K_values, n - k, axis=1)[:, n - k]
    member = K_values > thr[:, None]
    eq = K_values == thr[:, None]
    need = (k - member.sum(axis=1)).astype(np.int32)
    cum = np.cumsum(eq, axis=1, dtype=np.int32)
    member |= eq & (cum <= need[:, None])
    return member


def overlap_counts(Na: NeighborIndex, Nb: NeighborIndex) -> np.ndarray:
    """Per-row sizes of the intersection of two neighbor index lists."""
    if Na.n != Nb.n:
        raise ValueError(f"row count mismatch ({Na.n}≠{Nb.n})")
    if Na.k != Nb.k:
        raise ValueError(f"k mismatch ({Na.k}≠{Nb.k})")
    n = Na.n
    Ma = np.zeros((n, n), dtype=bool)
    Mb = np.zeros((n, n), dtype=bool)
    rows = np.arange(n)[:, None]
    Ma[rows, Na.lists] = True
    Mb[rows, Nb.lists] = True
    return np.count_nonzero(Ma & Mb, axis=1)


def mutual_knn_alignment(Na: NeighborIndex, Nb: NeighborIndex) -> AlignmentScore:
    """Mean fraction of shared top-k neighbors between two neighbor indices."""
    counts = overlap_counts(Na, Nb)
    # single division keeps the score bit-identical to sum(counts) / (n*k)
    value = float(int(counts.sum()) / (Na.n * Na.k))
    return AlignmentScore(value=value, k=Na.k, n=Na.n)


def alignment_from_kernels(Ka: Kernel, Kb: Kernel, k: int) -> AlignmentScore:
    """Convenience: alignment between two kernels at the given k."""
    return mutual_knn_alignment(topk_neighbors(Ka, k), topk_neighbors(Kb, k))


def linear_cka(X, Y) -> float:
    """Linear centered kernel alignment between two representations.

    Columns of each matrix are mean-centered, then

        CKA = |Xc^T Yc|_F^2 / (|Xc^T Xc|_F * |Yc^T Yc|_F).

    Biased (plain) estimator; invariant to orthogonal transforms and
    isotropic scaling of either argument. Row counts must match; column
    counts may differ.
    """
    A = as_embedding_array(X)
    B = as_embedding_array(Y)
    if A.shape[0] != B.shape[0]:
        raise ValueError(f"row count mismatch ({A.shape[0]}≠{B.shape[0]})")
    if A.shape[0] < 3:
        raise ValueError(f"need at least 3 rows, got {A.shape[0]}")
    Ac = A - A.mean(axis=0, keepdims=True)
    Bc = B - B.mean(axis=0, keepdims=True)
    denom_a = np.linalg.norm(Ac.T @ Ac)
    denom_b = np.linalg.norm(Bc.T @ Bc)
    if denom_a == 0 or denom_b == 0:
        raise ValueError("degenerate input: matrix is constant across rows")
    cross = np.linalg.norm(Ac.T @ Bc) ** 2
    return float(cross / (denom_a * denom_b))
