"""PCA with feature loadings, plus Horn's parallel analysis for component retention.

Covariance is the population (divide-by-n) estimator, matching the
standardization convention of the preprocessing stage. Eigenvector signs follow
a deterministic convention: each component's largest-magnitude entry is made
positive, so repeated fits are bitwise identical.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import Embedding, matrix_values


@dataclass(frozen=True)
class PcaModel:
    components: np.ndarray  # (n_components, n_features), orthonormal rows
    explained_variance_ratio: np.ndarray
    loadings: np.ndarray  # (n_features, n_components)
    mean: np.ndarray
    eigenvalues: np.ndarray  # all eigenvalues, descending

    def __post_init__(self):
        for name in ("components", "explained_variance_ratio", "loadings", "mean",
                     "eigenvalues"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=np.float64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if np.any(np.abs(self.loadings) > 1.0 + 1e-9):
            raise ValueError("loadings out of [-1, 1]")

    @property
    def n_components(self) -> int:
        return self.components.shape[0]

    def transform(self, X: np.ndarray) -> np.ndarray:
        return (np.asarray(X, dtype=np.float64) - self.mean) @ self.components.T


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip each row so its largest-magnitude entry is positive."""
    out = vectors.copy()
    for row in out:
        j = int(np.argmax(np.abs(row)))
        if row[j] < 0:
            row *= -1.0
    return out


def _eigendecompose(X: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Population-covariance eigendecomposition, eigenvalues descending."""
    n = X.shape[0]
    mean = X.mean(axis=0)
    Xc = X - mean
    cov = (Xc.T @ Xc) / n
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1]
    eigvals = np.clip(eigvals[order], 0.0, None)
    eigvecs = eigvecs[:, order].T  # rows are components
    return eigvals, eigvecs, mean


def fit_pca(matrix, n_components: int) -> tuple[PcaModel, Embedding]:
    """Fit PCA and compute per-feature loadings on the component scores.

    Loadings are Pearson correlations between each original feature column and
    each component score, so a feature identical to a score has |loading| 1.
    """
    X, sample_ids = matrix_values(matrix)
    n, p = X.shape
    max_comp = min(n - 1, p)
    if not (1 <= n_components <= max_comp):
        raise ValueError(
            f"n_components must be in [1, {max_comp}] for {n} samples x {p} features, "
            f"got {n_components}"
        )
    eigvals, eigvecs, mean = _eigendecompose(X)
    total = eigvals.sum()
    if total <= 0:
        raise ValueError("data has zero total variance")
    components = _fix_signs(eigvecs[:n_components])
    evr = eigvals[:n_components] / total

    scores = (X - mean) @ components.T
    loadings = _score_correlations(X, scores)

    model = PcaModel(
        components=components,
        explained_variance_ratio=evr,
        loadings=loadings,
        mean=mean,
        eigenvalues=eigvals,
    )
    embedding = Embedding(
        coords=scores,
        method="pca",
        hyperparameters={"n_components": int(n_components)},
        diagnostics={"explained_variance_ratio": [float(v) for v in evr]},
        seed=0,
        sample_ids=sample_ids,
    )
    return model, embedding


def _score_correlations(X: np.ndarray, scores: np.ndarray) -> np.ndarray:
    n = X.shape[0]
    Xc = X - X.mean(axis=0)
    Sc = scores - scores.mean(axis=0)
    x_sd = Xc.std(axis=0)
    s_sd = Sc.std(axis=0)
    cov = (Xc.T @ Sc) / n
    denom = np.outer(x_sd, s_sd)
    loadings = np.zeros_like(cov)
    ok = denom > 0
    loadings[ok] = cov[ok] / denom[ok]
    return np.clip(loadings, -1.0, 1.0)


@dataclass(frozen=True)
class ParallelAnalysisResult:
    observed_eigenvalues: np.ndarray
    noise_percentile_eigenvalues: np.ndarray
    retained_count: int
    mc_reps: int
    percentile: float

    def __post_init__(self):
        expected = int(
            np.sum(self.observed_eigenvalues > self.noise_percentile_eigenvalues)
        )
        if expected != self.retained_count:
            raise ValueError("retained_count inconsistent with eigenvalue comparison")


def parallel_analysis(
    matrix, mc_reps: int = 100, percentile: float = 95.0, seed: int = 0
) -> ParallelAnalysisResult:
    """Horn's parallel analysis against standard-normal noise of the same shape.

    Per eigenvalue rank, the given percentile is taken across the Monte Carlo
    repetitions; components whose observed eigenvalue exceeds that percentile
    are retained.
    """
    if mc_reps < 1:
        raise ValueError(f"mc_reps must be >= 1, got {mc_reps}")
    if not (0.0 < percentile < 100.0):
        raise ValueError(f"percentile must be in (0, 100), got {percentile}")
    X, _ = matrix_values(matrix)
    n, p = X.shape
    observed, _, _ = _eigendecompose(X)

    rng = np.random.default_rng(seed)
    noise_eigs = np.empty((mc_reps, p))
    for r in range(mc_reps):
        noise = rng.standard_normal((n, p))
        noise_eigs[r], _, _ = _eigendecompose(noise)
    thresholds = np.percentile(noise_eigs, percentile, axis=0)

    retained = int(np.sum(observed > thresholds))
    return ParallelAnalysisResult(
        observed_eigenvalues=observed,
        noise_percentile_eigenvalues=thresholds,
        retained_count=retained,
        mc_reps=int(mc_reps),
        percentile=float(percentile),
    )


def select_informative_components(
    model: PcaModel, candidate_count: int | None = None, loading_threshold: float = 0.4
) -> list[int]:
    """Indices (EVR order) of leading components with a qualifying feature.

    A component qualifies when at least one feature has absolute loading at or
    above ``loading_threshold``.
    """
    if not (0.0 < loading_threshold <= 1.0):
        raise ValueError(
            f"loading_threshold must be in (0, 1], got {loading_threshold}"
        )
    available = model.n_components
    if candidate_count is None:
        candidate_count = available
    if not (1 <= candidate_count <= available):
        raise ValueError(
            f"candidate_count must be in [1, {available}], got {candidate_count}"
        )
    max_abs = np.abs(model.loadings[:, :candidate_count]).max(axis=0)
    return [i for i in range(candidate_count) if max_abs[i] >= loading_threshold]
