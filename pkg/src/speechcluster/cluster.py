"""K-Means clustering, elbow-based K selection, and silhouette scoring.

All randomness flows through seeds; cluster labels are canonicalized by
ascending first-member index so identical seeds give identical label vectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_SHIFT_TOL = 1e-6
_MAX_LLOYD_ITERS = 300


def _coords(data) -> np.ndarray:
    if hasattr(data, "coords"):
        return np.asarray(data.coords, dtype=np.float64)
    X = np.asarray(data, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("expected an Embedding or a 2-D coordinate array")
    return X


@dataclass(frozen=True)
class ClusterAssignment:
    labels: np.ndarray
    centroids: np.ndarray
    inertia: float
    k: int
    seed: int

    def __post_init__(self):
        labels = np.ascontiguousarray(self.labels, dtype=np.int64)
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        centroids = np.ascontiguousarray(self.centroids, dtype=np.float64)
        centroids.setflags(write=False)
        object.__setattr__(self, "centroids", centroids)
        if sorted(set(labels.tolist())) != list(range(self.k)):
            raise ValueError("every cluster index in [0, K) must be non-empty")


@dataclass(frozen=True)
class ElbowCurve:
    k_values: tuple[int, ...]
    inertias: tuple[float, ...]
    chosen_k: int


def _sq_dists_to(X: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    d = X[:, None, :] - centroids[None, :, :]
    return np.einsum("ijk,ijk->ij", d, d)


def _kmeans_pp_init(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = X.shape[0]
    centroids = np.empty((k, X.shape[1]))
    first = int(rng.integers(n))
    centroids[0] = X[first]
    d2 = np.sum((X - centroids[0]) ** 2, axis=1)
    chosen = {first}
    for j in range(1, k):
        total = d2.sum()
        if total <= 0.0:
            # All remaining mass at distance 0: pick any point not yet chosen.
            candidates = [i for i in range(n) if i not in chosen]
            idx = int(candidates[rng.integers(len(candidates))])
        else:
            idx = int(rng.choice(n, p=d2 / total))
        chosen.add(idx)
        centroids[j] = X[idx]
        d2 = np.minimum(d2, np.sum((X - centroids[j]) ** 2, axis=1))
    return centroids


def _kmeans_single(
    X: np.ndarray, k: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray, float, list[float]]:
    """One k-means++ / Lloyd run. Returns labels, centroids, inertia, trace."""
    n = X.shape[0]
    centroids = _kmeans_pp_init(X, k, rng)
    trace: list[float] = []
    labels = np.zeros(n, dtype=np.int64)
    for _ in range(_MAX_LLOYD_ITERS):
        d2 = _sq_dists_to(X, centroids)
        labels = np.argmin(d2, axis=1)
        point_cost = d2[np.arange(n), labels]

        # Repair empty clusters: reseed each to the farthest point and move
        # that point into it (only stealing from clusters that keep a member).
        counts = np.bincount(labels, minlength=k)
        for empty in np.flatnonzero(counts == 0):
            eligible = (counts[labels] > 1) & (point_cost >= 0)
            far = int(np.argmax(np.where(eligible, point_cost, -np.inf)))
            counts[labels[far]] -= 1
            counts[empty] += 1
            labels[far] = empty
            centroids[empty] = X[far]
            point_cost[far] = -1.0
        point_cost = np.maximum(point_cost, 0.0)
        trace.append(float(point_cost.sum()))

        new_centroids = centroids.copy()
        for c in range(k):
            members = labels == c
            if members.any():
                new_centroids[c] = X[members].mean(axis=0)
        shift = np.sqrt(np.sum((new_centroids - centroids) ** 2, axis=1)).max()
        centroids = new_centroids
        if shift < _SHIFT_TOL:
            break
    inertia = float(
        np.sum((X - centroids[labels]) ** 2)
    )
    return labels, centroids, inertia, trace


def _canonicalize(
    labels: np.ndarray, centroids: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Renumber clusters by ascending first-member index."""
    order = []
    for lab in labels:
        if lab not in order:
            order.append(int(lab))
    remap = {old: new for new, old in enumerate(order)}
    new_labels = np.array([remap[int(lab)] for lab in labels], dtype=np.int64)
    new_centroids = centroids[order]
    return new_labels, new_centroids


def fit_kmeans(
    embedding, k: int, seed: int = 0, restarts: int = 10
) -> ClusterAssignment:
    """Best-of-restarts K-Means with k-means++ initialization.

    Empty clusters are repaired by reseeding to the farthest point. Ties on
    inertia are broken toward the earlier restart.
    """
    X = _coords(embedding)
    n = X.shape[0]
    if not (1 <= k <= n):
        raise ValueError(f"K must be in [1, {n}], got {k}")
    if restarts < 1:
        raise ValueError(f"restarts must be >= 1, got {restarts}")

    best = None
    for r in range(restarts):
        rng = np.random.default_rng([seed % 2**32, r])
        labels, centroids, inertia, _ = _kmeans_single(X, k, rng)
        if best is None or inertia < best[2]:
            best = (labels, centroids, inertia)
    labels, centroids, inertia = best
    labels, centroids = _canonicalize(labels, centroids)
    return ClusterAssignment(
        labels=labels, centroids=centroids, inertia=inertia, k=int(k), seed=int(seed)
    )


def optimal_k_elbow(
    embedding, k_range, seed: int = 0, restarts: int = 10
) -> ElbowCurve:
    """Pick K at the point of maximum distance to the chord of the inertia curve.

    Both axes are min-max normalized first; ties go to the smallest K.
    """
    k_values = sorted(int(k) for k in k_range)
    if len(k_values) < 3:
        raise ValueError(f"k_range must contain at least 3 values, got {k_values}")
    inertias = [
        fit_kmeans(embedding, k, seed=seed, restarts=restarts).inertia
        for k in k_values
    ]

    ks = np.asarray(k_values, dtype=float)
    ins = np.asarray(inertias, dtype=float)
    kx = (ks - ks[0]) / (ks[-1] - ks[0])
    span = ins.max() - ins.min()
    iy = (ins - ins.min()) / span if span > 0 else np.zeros_like(ins)

    x0, y0 = kx[0], iy[0]
    x1, y1 = kx[-1], iy[-1]
    chord = np.hypot(x1 - x0, y1 - y0)
    dist = np.abs((y1 - y0) * (kx - x0) - (x1 - x0) * (iy - y0))
    if chord > 0:
        dist = dist / chord

    best = 0
    for i in range(1, len(k_values)):
        if dist[i] > dist[best]:
            best = i
    return ElbowCurve(
        k_values=tuple(k_values),
        inertias=tuple(float(v) for v in inertias),
        chosen_k=int(k_values[best]),
    )


def silhouette_score(embedding, labels) -> float:
    """Mean per-sample (b - a)/max(a, b) with Euclidean embedding distances.

    Singleton clusters contribute 0, as does any sample with a = b = 0.
    """
    X = _coords(embedding)
    labels = np.asarray(labels, dtype=np.int64)
    n = X.shape[0]
    if labels.shape[0] != n:
        raise ValueError("labels length does not match samples")
    clusters = np.unique(labels)
    if clusters.size < 2:
        raise ValueError("silhouette requires at least 2 clusters")
    if clusters.size > n - 1:
        raise ValueError("silhouette requires at most samples-1 clusters")

    sq = np.sum(X * X, axis=1)
    D = np.sqrt(np.maximum(sq[:, None] + sq[None, :] - 2.0 * (X @ X.T), 0.0))
    np.fill_diagonal(D, 0.0)

    sums = np.empty((n, clusters.size))
    counts = np.empty(clusters.size)
    for ci, c in enumerate(clusters):
        members = labels == c
        counts[ci] = members.sum()
        sums[:, ci] = D[:, members].sum(axis=1)

    own = np.searchsorted(clusters, labels)
    scores = np.zeros(n)
    for i in range(n):
        ci = own[i]
        if counts[ci] <= 1:
            continue  # singleton: score 0
        a = sums[i, ci] / (counts[ci] - 1)
        b = np.inf
        for cj in range(clusters.size):
            if cj != ci:
                b = min(b, sums[i, cj] / counts[cj])
        denom = max(a, b)
        if denom > 0:
            scores[i] = (b - a) / denom
    return float(scores.mean())
