"""Shared fixtures and independent oracle implementations.

The oracles here are deliberately naive (double loops, python sets,
explicit pairwise enumeration) and never call into the library's own
computation paths; they exist so library results can be checked against
an implementation too simple to share a bug with the fast code.
"""

from __future__ import annotations

import numpy as np
import pytest

from sensealign import ConditionTag, EmbeddingMatrix, MatrixMeta


def make_matrix(data, model_id="test-model", cue="none", **meta_kw) -> EmbeddingMatrix:
    meta = MatrixMeta(model_id=model_id, condition=ConditionTag(cue=cue), **meta_kw)
    return EmbeddingMatrix(np.asarray(data), meta)


def random_matrix(rng, n, d, model_id="test-model", cue="none") -> EmbeddingMatrix:
    return make_matrix(rng.standard_normal((n, d)), model_id=model_id, cue=cue)


# ---------------------------------------------------------------------------
# oracles


def oracle_cosine(X: np.ndarray) -> np.ndarray:
    """Double-loop cosine similarity, one pair at a time."""
    X = np.asarray(X, dtype=np.float64)
    n = X.shape[0]
    K = np.empty((n, n))
    norms = [np.sqrt(np.dot(X[i], X[i])) for i in range(n)]
    for i in range(n):
        for j in range(n):
            K[i, j] = np.dot(X[i], X[j]) / (norms[i] * norms[j])
    return K


def oracle_topk(K: np.ndarray, k: int) -> list[list[int]]:
    """Per-row top-k by (descending similarity, ascending index), no self."""
    n = K.shape[0]
    out = []
    for i in range(n):
        candidates = [j for j in range(n) if j != i]
        candidates.sort(key=lambda j: (-K[i, j], j))
        out.append(candidates[:k])
    return out


def oracle_alignment(Xa: np.ndarray, Xb: np.ndarray, k: int) -> float:
    """Mutual-kNN alignment via the naive pipeline and python sets."""
    la = oracle_topk(oracle_cosine(Xa), k)
    lb = oracle_topk(oracle_cosine(Xb), k)
    n = len(la)
    total = sum(len(set(a) & set(b)) for a, b in zip(la, lb))
    return total / (n * k)


def oracle_auroc(pos, neg) -> float:
    """Pairwise Mann-Whitney enumeration."""
    total = 0.0
    for p in pos:
        for q in neg:
            if p > q:
                total += 1.0
            elif p == q:
                total += 0.5
    return total / (len(pos) * len(neg))


def oracle_cka(X: np.ndarray, Y: np.ndarray) -> float:
    """Linear CKA through explicitly centered Gram matrices (HSIC route)."""
    X = np.asarray(X, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    n = X.shape[0]
    H = np.eye(n) - np.ones((n, n)) / n
    Kx = H @ (X @ X.T) @ H
    Ky = H @ (Y @ Y.T) @ H
    hsic_xy = (Kx * Ky).sum()
    hsic_xx = (Kx * Kx).sum()
    hsic_yy = (Ky * Ky).sum()
    return hsic_xy / np.sqrt(hsic_xx * hsic_yy)


# ---------------------------------------------------------------------------
# fixtures


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


# (category, n, correct under no cue, correct under see): a synthetic log
# shaped like the MME caption-VQA benchmark without its OCR category
TABLE1_CELLS = [
    ("artwork", 400, 242, 246),
    ("celebrity", 340, 171, 176),
    ("code_reasoning", 40, 38, 39),
    ("color", 60, 49, 49),
    ("commonsense", 140, 114, 116),
    ("count", 60, 42, 45),
    ("existence", 60, 51, 54),
    ("landmark", 400, 214, 219),
    ("numerical", 40, 32, 32),
    ("position", 60, 31, 33),
    ("posters", 294, 206, 232),
    ("scene", 400, 283, 289),
    ("text_translation", 40, 39, 37),
]


def table1_log_lines() -> list[str]:
    """JSON-lines VQA log reproducing the reference per-category accuracies."""
    import json

    lines = []
    for cat, n, correct_none, correct_see in TABLE1_CELLS:
        for cond, n_correct in (("none", correct_none), ("see", correct_see)):
            for i in range(n):
                gold = "yes" if i % 2 == 0 else "no"
                if i < n_correct:
                    answer = f"Answer: {gold.upper()}." if i % 3 == 0 else gold
                elif i == n_correct:  # one unparsed entry among the incorrect
                    answer = "cannot tell from the caption"
                else:
                    answer = "no" if gold == "yes" else "yes"
                lines.append(
                    json.dumps(
                        {
                            "category": cat,
                            "question_id": f"{cat}/{i:04d}",
                            "condition": cond,
                            "answer": answer,
                            "gold": gold,
                        }
                    )
                )
    return lines


@pytest.fixture
def swapped_pairs():
    """Two spaces over 4 items whose nearest-neighbor pairings are swapped.

    In A the tight pairs are (0,1) and (2,3); in B they are (0,2) and
    (1,3). At k=1 no item shares a neighbor across spaces, so mutual-kNN
    alignment is exactly 0.
    """
    A = make_matrix([[1.0, 0.0], [0.99, 0.14], [0.0, 1.0], [0.14, 0.99]], cue="none")
    B = make_matrix([[1.0, 0.0], [0.0, 1.0], [0.99, 0.14], [0.14, 0.99]], cue="see")
    return A, B
