"""UMAP built on an exact k-NN graph, suitable for cohorts up to ~10k samples.

Stages: exact nearest neighbors; smooth-kNN calibration (per-point sigma so the
exponential weight sum hits log2(n_neighbors) within 1e-5); fuzzy union
symmetrization a + b - ab; low-dimensional curve parameters fit from min_dist by
least squares; spectral initialization from the normalized graph Laplacian with
a seeded Gaussian fallback; and negative-sampling stochastic gradient descent
with a linearly decaying learning rate. The SGD loop is numba-compiled and uses
its own xorshift generator so runs are bitwise reproducible.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg
from numba import njit
from scipy.optimize import curve_fit

from .base import Embedding, matrix_values

_SMOOTH_TOL = 1e-5
_SMOOTH_MAX_ITER = 200
_NEGATIVE_SAMPLE_RATE = 5
_INITIAL_ALPHA = 1.0
_REPULSION_GAMMA = 1.0
_DENSE_SPECTRAL_LIMIT = 4096


def knn_graph(X: np.ndarray, n_neighbors: int) -> tuple[np.ndarray, np.ndarray]:
    """Exact nearest neighbors (self excluded): index and distance arrays."""
    n = X.shape[0]
    sq = np.sum(X * X, axis=1)
    D = np.maximum(sq[:, None] + sq[None, :] - 2.0 * (X @ X.T), 0.0)
    np.fill_diagonal(D, np.inf)
    order = np.argsort(D, axis=1, kind="stable")[:, :n_neighbors]
    dists = np.sqrt(np.take_along_axis(D, order, axis=1))
    return order.astype(np.int64), dists


def smooth_knn_calibration(
    knn_dists: np.ndarray,
    n_neighbors: int,
    tol: float = _SMOOTH_TOL,
    max_iter: int = _SMOOTH_MAX_ITER,
) -> tuple[np.ndarray, np.ndarray]:
    """Solve per-point sigma so sum_j exp(-max(d_ij - rho_i, 0)/sigma_i) = log2(k).

    rho is the distance to the nearest neighbor at positive distance (local
    connectivity of one). Returns (sigmas, rhos).
    """
    n = knn_dists.shape[0]
    target = np.log2(n_neighbors)
    pos = knn_dists > 0
    with np.errstate(invalid="ignore"):
        rho = np.where(
            pos.any(axis=1),
            np.where(pos, knn_dists, np.inf).min(axis=1),
            0.0,
        )
    lo = np.zeros(n)
    hi = np.full(n, np.inf)
    sigma = np.ones(n)
    shifted = None
    for _ in range(max_iter):
        shifted = np.maximum(knn_dists - rho[:, None], 0.0)
        psum = np.exp(-shifted / sigma[:, None]).sum(axis=1)
        err = psum - target
        undone = np.abs(err) >= tol
        if not undone.any():
            break
        too_high = undone & (err > 0)
        too_low = undone & (err < 0)
        hi = np.where(too_high, sigma, hi)
        lo = np.where(too_low, sigma, lo)
        expand = too_low & ~np.isfinite(hi)
        mid = np.where(np.isfinite(hi), (lo + hi) / 2.0, sigma)
        sigma = np.where(undone, np.where(expand, sigma * 2.0, mid), sigma)
        sigma = np.maximum(sigma, 1e-20)
    return sigma, rho


def membership_weights(
    knn_dists: np.ndarray, sigmas: np.ndarray, rhos: np.ndarray
) -> np.ndarray:
    return np.exp(-np.maximum(knn_dists - rhos[:, None], 0.0) / sigmas[:, None])


def fuzzy_union(
    knn_idx: np.ndarray, weights: np.ndarray, n: int
) -> scipy.sparse.csr_matrix:
    """Directed membership strengths combined with the fuzzy union a + b - ab."""
    k = knn_idx.shape[1]
    rows = np.repeat(np.arange(n), k)
    W = scipy.sparse.coo_matrix(
        (weights.ravel(), (rows, knn_idx.ravel())), shape=(n, n)
    ).tocsr()
    Wt = W.T.tocsr()
    graph = W + Wt - W.multiply(Wt)
    graph.eliminate_zeros()
    return graph.tocsr()


def fit_curve_params(min_dist: float, spread: float = 1.0) -> tuple[float, float]:
    """Least-squares (a, b) so 1/(1 + a x^(2b)) matches the min_dist target curve."""

    def curve(x, a, b):
        return 1.0 / (1.0 + a * x ** (2.0 * b))

    xv = np.linspace(0.0, spread * 3.0, 300)
    yv = np.where(xv < min_dist, 1.0, np.exp(-(xv - min_dist) / spread))
    params, _ = curve_fit(curve, xv, yv)
    return float(params[0]), float(params[1])


def _spectral_init(
    graph: scipy.sparse.csr_matrix, n_components: int, seed: int
) -> tuple[np.ndarray, bool]:
    """Eigenvectors 2..d+1 of the normalized Laplacian, scaled to max-extent 10.

    Falls back to a seeded Gaussian layout when the eigensolver fails.
    """
    n = graph.shape[0]
    rng = np.random.default_rng(seed)
    try:
        if n <= _DENSE_SPECTRAL_LIMIT:
            A = graph.toarray()
            deg = A.sum(axis=1)
            dinv = np.where(deg > 0, 1.0 / np.sqrt(deg), 0.0)
            L = np.eye(n) - (dinv[:, None] * A) * dinv[None, :]
            _, vecs = scipy.linalg.eigh(L, subset_by_index=[0, n_components])
            coords = vecs[:, 1 : n_components + 1]
        else:
            deg = np.asarray(graph.sum(axis=1)).ravel()
            dinv = np.where(deg > 0, 1.0 / np.sqrt(deg), 0.0)
            Dinv = scipy.sparse.diags(dinv)
            M = Dinv @ graph @ Dinv  # largest eigenvectors of M = smallest of L
            v0 = rng.standard_normal(n)
            _, vecs = scipy.sparse.linalg.eigsh(
                M, k=n_components + 1, which="LM", v0=v0
            )
            coords = vecs[:, ::-1][:, 1 : n_components + 1]
        max_abs = np.abs(coords).max()
        if not np.isfinite(max_abs) or max_abs <= 0:
            raise ValueError("degenerate spectral coordinates")
    except Exception:
        return rng.standard_normal((n, n_components)) * 10.0, False
    coords = coords * (10.0 / max_abs)
    coords = coords + rng.normal(0.0, 1e-4, coords.shape)
    return np.ascontiguousarray(coords, dtype=np.float64), True


def _epochs_per_sample(weights: np.ndarray, n_epochs: int) -> np.ndarray:
    result = np.full(weights.shape[0], -1.0)
    n_samples = n_epochs * (weights / weights.max())
    result[n_samples > 0] = float(n_epochs) / n_samples[n_samples > 0]
    return result


@njit(cache=True, inline="always")
def _xorshift(state):
    s1 = state[0]
    s0 = state[1]
    state[0] = s0
    s1 ^= s1 << np.uint64(23)
    s1 ^= s1 >> np.uint64(17)
    s1 ^= s0
    s1 ^= s0 >> np.uint64(26)
    state[1] = s1
    return state[0] + state[1]


@njit(cache=True, inline="always")
def _clip(val):
    if val > 4.0:
        return 4.0
    if val < -4.0:
        return -4.0
    return val


@njit(cache=True)
def _optimize_layout(
    emb,
    head,
    tail,
    n_epochs,
    n_vertices,
    epochs_per_sample,
    a,
    b,
    rng_state,
    gamma,
    initial_alpha,
    negative_sample_rate,
):
    dim = emb.shape[1]
    alpha = initial_alpha
    epochs_per_negative_sample = epochs_per_sample / negative_sample_rate
    epoch_of_next_negative_sample = epochs_per_negative_sample.copy()
    epoch_of_next_sample = epochs_per_sample.copy()

    for n in range(n_epochs):
        for i in range(epochs_per_sample.shape[0]):
            if epoch_of_next_sample[i] <= n:
                j = head[i]
                k = tail[i]
                dist_squared = 0.0
                for d in range(dim):
                    diff = emb[j, d] - emb[k, d]
                    dist_squared += diff * diff
                if dist_squared > 0.0:
                    grad_coeff = -2.0 * a * b * dist_squared ** (b - 1.0)
                    grad_coeff /= a * dist_squared**b + 1.0
                else:
                    grad_coeff = 0.0
                for d in range(dim):
                    grad_d = _clip(grad_coeff * (emb[j, d] - emb[k, d]))
                    emb[j, d] += grad_d * alpha
                    emb[k, d] -= grad_d * alpha
                epoch_of_next_sample[i] += epochs_per_sample[i]

                n_neg = int(
                    (n - epoch_of_next_negative_sample[i])
                    / epochs_per_negative_sample[i]
                )
                for _ in range(n_neg):
                    kneg = int(_xorshift(rng_state) % np.uint64(n_vertices))
                    dist_squared = 0.0
                    for d in range(dim):
                        diff = emb[j, d] - emb[kneg, d]
                        dist_squared += diff * diff
                    if dist_squared > 0.0:
                        grad_coeff = 2.0 * gamma * b
                        grad_coeff /= (0.001 + dist_squared) * (
                            a * dist_squared**b + 1.0
                        )
                    elif j == kneg:
                        continue
                    else:
                        grad_coeff = 0.0
                    for d in range(dim):
                        if grad_coeff > 0.0:
                            grad_d = _clip(grad_coeff * (emb[j, d] - emb[kneg, d]))
                        else:
                            grad_d = 4.0
                        emb[j, d] += grad_d * alpha
                epoch_of_next_negative_sample[i] += (
                    n_neg * epochs_per_negative_sample[i]
                )
        alpha = initial_alpha * (1.0 - float(n + 1) / float(n_epochs))


def _cross_entropy(
    P: np.ndarray, emb: np.ndarray, a: float, b: float, eps: float = 1e-12
) -> float:
    """Fuzzy set cross entropy between the graph and the embedded kernel."""
    sq = np.sum(emb * emb, axis=1)
    d2 = np.maximum(sq[:, None] + sq[None, :] - 2.0 * (emb @ emb.T), 0.0)
    with np.errstate(divide="ignore"):
        q = 1.0 / (1.0 + a * d2**b)
    np.clip(q, eps, 1.0 - eps, out=q)
    iu = np.triu_indices(P.shape[0], k=1)
    p = np.clip(P[iu], 0.0, 1.0)
    qistar = q[iu]
    attract = np.where(p > 0, p * np.log(np.maximum(p, eps) / qistar), 0.0)
    repel = np.where(
        p < 1.0, (1.0 - p) * np.log(np.maximum(1.0 - p, eps) / (1.0 - qistar)), 0.0
    )
    return float(np.sum(attract + repel))


def fit_umap(
    matrix,
    n_neighbors: int = 50,
    min_dist: float = 0.1,
    n_components: int = 2,
    seed: int = 0,
    epochs: int = 500,
) -> Embedding:
    X, sample_ids = matrix_values(matrix)
    n = X.shape[0]
    if n_neighbors >= n:
        raise ValueError(f"n_neighbors must be < samples ({n_neighbors} >= {n})")
    if n_neighbors < 2:
        raise ValueError(f"n_neighbors must be >= 2, got {n_neighbors}")
    if min_dist <= 0:
        raise ValueError(f"min_dist must be > 0, got {min_dist}")
    if epochs < 1:
        raise ValueError(f"epochs must be >= 1, got {epochs}")

    knn_idx, knn_dists = knn_graph(X, n_neighbors)
    sigmas, rhos = smooth_knn_calibration(knn_dists, n_neighbors)
    weights = membership_weights(knn_dists, sigmas, rhos)
    graph = fuzzy_union(knn_idx, weights, n)

    a, b = fit_curve_params(min_dist)
    init, spectral_ok = _spectral_init(graph, n_components, seed)

    coo = graph.tocoo()
    data = coo.data.copy()
    data[data < data.max() / float(epochs)] = 0.0
    keep = data > 0
    head = coo.row[keep].astype(np.int64)
    tail = coo.col[keep].astype(np.int64)
    eps_per_sample = _epochs_per_sample(data[keep], epochs)

    emb = np.ascontiguousarray(init, dtype=np.float64)
    rng_state = np.random.default_rng(seed).integers(
        1, 2**63 - 1, size=2, dtype=np.uint64
    )
    _optimize_layout(
        emb,
        head,
        tail,
        int(epochs),
        int(n),
        eps_per_sample,
        float(a),
        float(b),
        rng_state,
        float(_REPULSION_GAMMA),
        float(_INITIAL_ALPHA),
        float(_NEGATIVE_SAMPLE_RATE),
    )

    calib = membership_weights(knn_dists, sigmas, rhos).sum(axis=1)
    diagnostics = {
        "cross_entropy": _cross_entropy(graph.toarray(), emb, a, b),
        "curve_a": float(a),
        "curve_b": float(b),
        "init": "spectral" if spectral_ok else "random",
        "calibration_max_abs_error": float(
            np.abs(calib - np.log2(n_neighbors)).max()
        ),
    }
    return Embedding(
        coords=emb,
        method="umap",
        hyperparameters={
            "n_neighbors": int(n_neighbors),
            "min_dist": float(min_dist),
            "n_components": int(n_components),
            "epochs": int(epochs),
            "negative_sample_rate": _NEGATIVE_SAMPLE_RATE,
            "initial_learning_rate": _INITIAL_ALPHA,
        },
        diagnostics=diagnostics,
        seed=int(seed),
        sample_ids=sample_ids,
    )
