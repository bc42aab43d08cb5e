"""Local explanation of embedding axes and category frequency vectors.

Each embedding axis is explained by a kernel-weighted ridge regression from the
standardized features of an instance's neighborhood to that axis coordinate.
The default neighborhood is the nearest real dataset samples in embedding
space; a perturbation strategy (sample around the instance in feature space and
project into the embedding by inverse-distance k-NN interpolation) is available
via ``strategy="perturb"``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .cluster import ClusterAssignment
from .corpus import CATEGORIES, CategoryTaxonomy, FeatureMatrix

MIN_GROUP_SIZE = 5


@dataclass(frozen=True)
class AxisExplanation:
    weights: np.ndarray
    r2: float
    intercept: float

    def __post_init__(self):
        w = np.ascontiguousarray(self.weights, dtype=np.float64)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        if not (0.0 <= self.r2 <= 1.0):
            raise ValueError(f"r2 out of [0, 1]: {self.r2}")


@dataclass(frozen=True)
class LocalExplanation:
    instance_id: str
    neighborhood_ids: tuple[str, ...]
    per_axis: tuple[AxisExplanation, ...]
    top_features: tuple[tuple[str, ...], ...]
    feature_names: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "instance_id": self.instance_id,
            "neighborhood_ids": list(self.neighborhood_ids),
            "axes": [
                {
                    "axis": i + 1,
                    "r2": float(ax.r2),
                    "intercept": float(ax.intercept),
                    "top_features": [
                        {
                            "feature": name,
                            "weight": float(
                                ax.weights[self.feature_names.index(name)]
                            ),
                        }
                        for name in self.top_features[i]
                    ],
                }
                for i, ax in enumerate(self.per_axis)
            ],
        }


@dataclass(frozen=True)
class CategoryFrequencyVector:
    counts: np.ndarray
    instance_id: str

    def __post_init__(self):
        counts = np.ascontiguousarray(self.counts, dtype=np.int64)
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)
        if counts.shape != (len(CATEGORIES),):
            raise ValueError(f"frequency vector must have length {len(CATEGORIES)}")
        if (counts < 0).any():
            raise ValueError("frequency counts must be non-negative")

    def as_dict(self) -> dict:
        return {cat: int(c) for cat, c in zip(CATEGORIES, self.counts)}


@dataclass(frozen=True)
class CohortGroup:
    name: str
    label: str
    cluster: int
    sample_ids: tuple[str, ...]


@dataclass(frozen=True)
class ExplanationCohort:
    groups: tuple[CohortGroup, ...]

    def __post_init__(self):
        for g in self.groups:
            if len(g.sample_ids) < MIN_GROUP_SIZE:
                raise ValueError(
                    f"group {g.name!r} has {len(g.sample_ids)} samples; "
                    f"each group must contain at least {MIN_GROUP_SIZE}"
                )

    def group(self, name: str) -> CohortGroup:
        for g in self.groups:
            if g.name == name:
                return g
        raise KeyError(f"unknown cohort group {name!r}")


def select_explanation_cohort(
    assignment: ClusterAssignment,
    sample_ids,
    labels,
    requests,
    seed: int = 0,
) -> ExplanationCohort:
    """Randomly select samples per (label, cluster) request, without replacement.

    Each request is ``(label, cluster)`` or ``(label, cluster, count)`` with
    count defaulting to 10; an optional fourth element names the group. When
    fewer than requested but at least 5 samples exist, all are returned with a
    warning.
    """
    sample_ids = list(sample_ids)
    labels = list(labels)
    if not (len(sample_ids) == len(labels) == assignment.labels.shape[0]):
        raise ValueError("sample_ids, labels, and assignment sizes differ")
    rng = np.random.default_rng(seed)
    groups = []
    used_names = set()
    for req in requests:
        req = tuple(req)
        label, cluster = req[0], int(req[1])
        count = int(req[2]) if len(req) > 2 and req[2] is not None else 10
        name = req[3] if len(req) > 3 else f"{label}_c{cluster}"
        if name in used_names:
            raise ValueError(f"duplicate cohort group name {name!r}")
        used_names.add(name)

        pool = [
            i
            for i in range(len(sample_ids))
            if labels[i] == label and assignment.labels[i] == cluster
        ]
        if len(pool) < MIN_GROUP_SIZE:
            raise ValueError(
                f"only {len(pool)} samples with label {label!r} in cluster "
                f"{cluster}; each group must contain at least {MIN_GROUP_SIZE}"
            )
        if len(pool) < count:
            warnings.warn(
                f"requested {count} samples for group {name!r} but only "
                f"{len(pool)} available; returning all of them",
                stacklevel=2,
            )
            chosen = pool
        else:
            chosen = sorted(rng.choice(len(pool), size=count, replace=False).tolist())
            chosen = [pool[i] for i in chosen]
        groups.append(
            CohortGroup(
                name=name,
                label=label,
                cluster=cluster,
                sample_ids=tuple(sample_ids[i] for i in chosen),
            )
        )
    return ExplanationCohort(groups=tuple(groups))


def _weighted_ridge(
    X: np.ndarray, y: np.ndarray, weights: np.ndarray, ridge_lambda: float
) -> tuple[np.ndarray, float, float]:
    """Closed-form weighted ridge with an unpenalized intercept.

    Returns (coefficients, intercept, r2) where r2 is the weighted coefficient
    of determination clamped to [0, 1].
    """
    wsum = weights.sum()
    xbar = (weights[:, None] * X).sum(axis=0) / wsum
    ybar = float((weights * y).sum() / wsum)
    Xc = X - xbar
    yc = y - ybar

    A = Xc.T @ (weights[:, None] * Xc)
    A[np.diag_indices_from(A)] += ridge_lambda
    beta = np.linalg.solve(A, Xc.T @ (weights * yc))
    intercept = ybar - float(xbar @ beta)

    resid = y - (X @ beta + intercept)
    sse = float(weights @ (resid * resid))
    sst = float(weights @ (yc * yc))
    r2 = 1.0 - sse / sst if sst > 0 else 0.0
    return beta, intercept, min(max(r2, 0.0), 1.0)


def _top_by_weight(weights: np.ndarray, names, top_m: int) -> tuple[str, ...]:
    order = np.argsort(-np.abs(weights), kind="stable")
    return tuple(names[i] for i in order if abs(weights[i]) > 0)[:top_m]


def explain_local(
    matrix: FeatureMatrix,
    embedding,
    instance_id: str,
    neighborhood_size: int = 50,
    kernel_width: float | None = None,
    ridge_lambda: float = 1e-3,
    top_m: int = 5,
    strategy: str = "neighbors",
    n_perturb: int = 200,
    perturb_scale: float = 0.5,
    knn_k: int = 10,
    seed: int = 0,
) -> LocalExplanation:
    """Fit a weighted ridge surrogate per embedding axis around one instance.

    With the default strategy the surrogate is trained on the instance's
    nearest dataset samples in embedding space, weighted by
    exp(-d^2 / kernel_width^2) with kernel_width defaulting to the median
    neighbor distance. The ``"perturb"`` strategy instead samples Gaussian
    perturbations of the instance's features and projects them into the
    embedding by inverse-distance interpolation over its feature-space
    nearest neighbors.
    """
    if neighborhood_size < 10:
        raise ValueError(
            f"neighborhood_size must be >= 10, got {neighborhood_size}"
        )
    idx = matrix.sample_index(instance_id)
    coords = np.asarray(embedding.coords if hasattr(embedding, "coords") else embedding)
    if coords.shape[0] != matrix.n_samples:
        raise ValueError("embedding rows do not match matrix samples")
    if neighborhood_size > matrix.n_samples:
        raise ValueError(
            f"neighborhood_size {neighborhood_size} exceeds {matrix.n_samples} samples"
        )

    if strategy == "neighbors":
        d = np.sqrt(np.sum((coords - coords[idx]) ** 2, axis=1))
        order = np.argsort(d, kind="stable")[:neighborhood_size]
        X = matrix.values[order]
        Y = coords[order]
        dists = d[order]
        neighborhood_ids = tuple(matrix.sample_ids[i] for i in order)
    elif strategy == "perturb":
        rng = np.random.default_rng(seed)
        base = matrix.values[idx]
        X = base + rng.normal(0.0, perturb_scale, size=(n_perturb, base.size))
        X[0] = base  # keep the instance itself in the sample
        # Project each perturbation by inverse-distance interpolation over its
        # nearest dataset points in feature space.
        Y = np.empty((n_perturb, coords.shape[1]))
        dists = np.empty(n_perturb)
        for r in range(n_perturb):
            dd = np.sqrt(np.sum((matrix.values - X[r]) ** 2, axis=1))
            anchors = np.argsort(dd, kind="stable")[:knn_k]
            w = 1.0 / np.maximum(dd[anchors], 1e-12)
            Y[r] = (w[:, None] * coords[anchors]).sum(axis=0) / w.sum()
            dists[r] = np.sqrt(np.sum((X[r] - base) ** 2))
        feat_d = np.sqrt(np.sum((matrix.values - base) ** 2, axis=1))
        near = np.argsort(feat_d, kind="stable")[:neighborhood_size]
        neighborhood_ids = tuple(matrix.sample_ids[i] for i in near)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")

    if kernel_width is None:
        kernel_width = float(np.median(dists))
        if kernel_width <= 0:
            kernel_width = 1.0
    weights = np.exp(-(dists**2) / kernel_width**2)

    per_axis = []
    top_features = []
    for axis in range(Y.shape[1]):
        beta, intercept, r2 = _weighted_ridge(X, Y[:, axis], weights, ridge_lambda)
        per_axis.append(AxisExplanation(weights=beta, r2=r2, intercept=intercept))
        top_features.append(_top_by_weight(beta, matrix.feature_names, top_m))

    return LocalExplanation(
        instance_id=instance_id,
        neighborhood_ids=neighborhood_ids,
        per_axis=tuple(per_axis),
        top_features=tuple(top_features),
        feature_names=matrix.feature_names,
    )


def category_frequency_vector(
    explanation: LocalExplanation, taxonomy: CategoryTaxonomy
) -> CategoryFrequencyVector:
    """Count top features per category across all axes, with multiplicity."""
    counts = np.zeros(len(CATEGORIES), dtype=np.int64)
    cat_index = {cat: i for i, cat in enumerate(CATEGORIES)}
    for axis_features in explanation.top_features:
        for name in axis_features:
            cat = taxonomy.mapping.get(name)
            if cat is None:
                raise ValueError(f"uncategorized feature: {name}")
            counts[cat_index[cat]] += 1
    return CategoryFrequencyVector(counts=counts, instance_id=explanation.instance_id)
