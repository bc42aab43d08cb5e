"""Grid search over non-linear embedding hyperparameters by silhouette score."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..cluster import fit_kmeans, silhouette_score
from .base import Embedding
from .tsne import fit_tsne
from .umap import fit_umap

_FITTERS = {"tsne": fit_tsne, "umap": fit_umap}


@dataclass(frozen=True)
class TuneResult:
    best_params: dict
    best_embedding: Embedding
    #: (params, silhouette) per grid point, in grid order.
    scores: tuple[tuple[dict, float], ...]


def tune_embedding(
    matrix, method: str, grid: dict, k_eval: int = 4, seed: int = 0
) -> TuneResult:
    """Fit one embedding per grid point and keep the best silhouette at K=k_eval.

    ``grid`` maps hyperparameter names to value lists; the Cartesian product is
    scanned in order and ties are broken toward the earlier grid point.
    """
    if method not in _FITTERS:
        raise ValueError(f"method must be one of {tuple(_FITTERS)}, got {method!r}")
    if not grid or any(len(v) == 0 for v in grid.values()):
        raise ValueError("empty grid")
    fitter = _FITTERS[method]

    names = list(grid)
    combos = list(itertools.product(*(grid[name] for name in names)))
    scores: list[tuple[dict, float]] = []
    best_idx = None
    best_embedding = None
    for idx, combo in enumerate(combos):
        params = dict(zip(names, combo))
        embedding = fitter(matrix, seed=seed, **params)
        assignment = fit_kmeans(embedding, k_eval, seed=seed)
        score = silhouette_score(embedding, assignment.labels)
        scores.append((params, score))
        if best_idx is None or score > scores[best_idx][1]:
            best_idx = idx
            best_embedding = embedding

    return TuneResult(
        best_params=dict(scores[best_idx][0]),
        best_embedding=best_embedding,
        scores=tuple(scores),
    )
