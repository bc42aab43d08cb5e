"""Exact (dense) t-SNE: symmetric SNE with a Student-t low-dimensional kernel.

Per-point Gaussian bandwidths are found by binary search so each conditional
distribution's entropy matches log(perplexity) within 1e-5. The descent uses
early exaggeration 12 for the first 250 iterations, momentum 0.5 switching to
0.8, learning rate 200 with adaptive gains, and PCA initialization scaled to
std 1e-4. The Kullback-Leibler divergence against the unexaggerated target
distribution is recorded at every iteration.
"""

from __future__ import annotations

import numpy as np

from .base import Embedding, matrix_values
from .pca import _eigendecompose

_ENTROPY_TOL = 1e-5
_MAX_BISECTIONS = 200
_EXAGGERATION = 12.0
_EXAGGERATION_ITERS = 250
_LEARNING_RATE = 200.0
_MIN_GAIN = 0.01
_INIT_STD = 1e-4


def squared_distances(X: np.ndarray) -> np.ndarray:
    """Dense pairwise squared Euclidean distances with an exact zero diagonal."""
    sq = np.sum(X * X, axis=1)
    D = sq[:, None] + sq[None, :] - 2.0 * (X @ X.T)
    np.fill_diagonal(D, 0.0)
    return np.maximum(D, 0.0)


def _row_entropy(Di: np.ndarray, beta: float) -> tuple[float, np.ndarray]:
    """Shannon entropy (nats) and probabilities of one row at precision beta."""
    w = np.exp(-(Di - Di.min()) * beta)
    total = w.sum()
    if total <= 0.0:
        total = np.finfo(float).tiny
    P = w / total
    # H = log(sum w) + beta * <D>_P, computed on the shifted weights.
    H = np.log(total) + beta * float((Di - Di.min()) @ P)
    return H, P


def conditional_probabilities(
    D: np.ndarray, perplexity: float, tol: float = _ENTROPY_TOL
) -> tuple[np.ndarray, np.ndarray]:
    """Per-row conditional Gaussians calibrated to the target perplexity.

    Returns the row-stochastic conditional matrix (zero diagonal) and the
    precision (beta = 1/(2 sigma^2)) per point.
    """
    n = D.shape[0]
    target = np.log(perplexity)
    P = np.zeros((n, n))
    betas = np.ones(n)
    idx = np.arange(n)
    for i in range(n):
        mask = idx != i
        Di = D[i, mask]
        lo, hi = 0.0, np.inf
        beta = betas[i - 1] if i > 0 else 1.0  # warm start from the previous row
        H, Pi = _row_entropy(Di, beta)
        for _ in range(_MAX_BISECTIONS):
            diff = H - target
            if abs(diff) <= tol:
                break
            if diff > 0:  # entropy too high -> sharpen
                lo = beta
                beta = beta * 2.0 if not np.isfinite(hi) else (lo + hi) / 2.0
            else:
                hi = beta
                beta = (lo + hi) / 2.0 if lo > 0 else beta / 2.0
            H, Pi = _row_entropy(Di, beta)
        betas[i] = beta
        P[i, mask] = Pi
    return P, betas


def joint_probabilities(X: np.ndarray, perplexity: float) -> np.ndarray:
    """Symmetrized joint distribution; entries sum to exactly 1."""
    D = squared_distances(X)
    cond, _ = conditional_probabilities(D, perplexity)
    P = (cond + cond.T) / (2.0 * X.shape[0])
    return P / P.sum()


def low_dim_affinities(Y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Student-t kernel matrix and the normalized Q distribution."""
    num = 1.0 / (1.0 + squared_distances(Y))
    np.fill_diagonal(num, 0.0)
    Q = num / num.sum()
    return num, Q


def kl_divergence(P: np.ndarray, Q: np.ndarray) -> float:
    mask = P > 0
    return float(np.sum(P[mask] * np.log(P[mask] / np.maximum(Q[mask], 1e-12))))


def _pca_init(X: np.ndarray, n_components: int, seed: int) -> np.ndarray:
    _, eigvecs, mean = _eigendecompose(X)
    scores = (X - mean) @ eigvecs[:n_components].T
    scale = scores[:, 0].std()
    if scale > 0:
        return scores / scale * _INIT_STD
    return np.random.default_rng(seed).standard_normal(scores.shape) * _INIT_STD


def fit_tsne(
    matrix,
    perplexity: float = 30.0,
    n_components: int = 2,
    seed: int = 0,
    iterations: int = 1000,
) -> Embedding:
    X, sample_ids = matrix_values(matrix)
    n = X.shape[0]
    if perplexity <= 1.0:
        raise ValueError(f"perplexity must be > 1, got {perplexity}")
    if n < 3 * perplexity:
        raise ValueError(
            f"need at least 3*perplexity samples ({n} < {3 * perplexity:g})"
        )
    if n_components not in (2, 3):
        raise ValueError(f"n_components must be 2 or 3, got {n_components}")
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")

    P = joint_probabilities(X, perplexity)
    Y = _pca_init(X, n_components, seed)

    update = np.zeros_like(Y)
    gains = np.ones_like(Y)
    # kl_trace[i] is the divergence (against the unexaggerated P) after i updates.
    kl_trace = []
    for it in range(iterations):
        exaggerate = it < _EXAGGERATION_ITERS
        momentum = 0.5 if exaggerate else 0.8
        P_eff = P * _EXAGGERATION if exaggerate else P

        num, Q = low_dim_affinities(Y)
        kl_trace.append(kl_divergence(P, Q))
        W = (P_eff - Q) * num
        grad = 4.0 * (W.sum(axis=1)[:, None] * Y - W @ Y)

        flip = np.sign(grad) != np.sign(update)
        gains = np.where(flip, gains + 0.2, gains * 0.8)
        np.maximum(gains, _MIN_GAIN, out=gains)
        update = momentum * update - _LEARNING_RATE * (gains * grad)
        Y = Y + update
        Y -= Y.mean(axis=0)

    _, Q = low_dim_affinities(Y)
    kl_trace.append(kl_divergence(P, Q))

    return Embedding(
        coords=Y,
        method="tsne",
        hyperparameters={
            "perplexity": float(perplexity),
            "n_components": int(n_components),
            "iterations": int(iterations),
            "learning_rate": _LEARNING_RATE,
            "early_exaggeration": _EXAGGERATION,
        },
        diagnostics={"kl_divergence": kl_trace[-1], "kl_trace": kl_trace},
        seed=int(seed),
        sample_ids=sample_ids,
    )
