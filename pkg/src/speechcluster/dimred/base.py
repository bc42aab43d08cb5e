"""Shared embedding container and serialization helpers."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

METHODS = ("pca", "lda", "tsne", "umap")


@dataclass(frozen=True)
class Embedding:
    """Low-dimensional coordinates plus the metadata needed to reproduce them."""

    coords: np.ndarray
    method: str
    hyperparameters: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)
    seed: int = 0
    sample_ids: tuple[str, ...] | None = None

    def __post_init__(self):
        coords = np.ascontiguousarray(self.coords, dtype=np.float64)
        coords.setflags(write=False)
        object.__setattr__(self, "coords", coords)
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r} (one of {METHODS})")
        if coords.ndim != 2:
            raise ValueError("coords must be a 2-D array")
        if not np.all(np.isfinite(coords)):
            raise ValueError(f"{self.method} produced non-finite coordinates")
        if self.sample_ids is not None and len(self.sample_ids) != coords.shape[0]:
            raise ValueError("sample_ids length does not match coords rows")
        if self.method in ("pca", "lda"):
            evr = np.asarray(
                self.diagnostics.get("explained_variance_ratio", []), dtype=float
            )
            if evr.size:
                if np.any(np.diff(evr) > 1e-9):
                    raise ValueError("explained variance ratios must be non-increasing")
                if evr.sum() > 1.0 + 1e-9:
                    raise ValueError("explained variance ratios sum above 1")

    @property
    def n_samples(self) -> int:
        return self.coords.shape[0]

    @property
    def n_components(self) -> int:
        return self.coords.shape[1]


def matrix_values(data) -> tuple[np.ndarray, tuple[str, ...] | None]:
    """Accept a FeatureMatrix or a plain array; return (values, sample_ids)."""
    if hasattr(data, "values") and hasattr(data, "sample_ids"):
        return np.asarray(data.values, dtype=np.float64), tuple(data.sample_ids)
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError("expected a 2-D samples x features array")
    return arr, None


def save_embedding(embedding: Embedding, csv_path, sidecar_path=None) -> None:
    """Write ``sample_id,comp_1,...,comp_d`` CSV plus a JSON metadata sidecar."""
    csv_path = Path(csv_path)
    ids = embedding.sample_ids or tuple(
        f"row{i}" for i in range(embedding.n_samples)
    )
    with csv_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["sample_id"] + [f"comp_{j + 1}" for j in range(embedding.n_components)]
        )
        for sid, row in zip(ids, embedding.coords):
            writer.writerow([sid, *(repr(float(v)) for v in row)])
    if sidecar_path is None:
        sidecar_path = csv_path.with_suffix(".json")
    sidecar = {
        "method": embedding.method,
        "hyperparameters": _jsonable(embedding.hyperparameters),
        "seed": int(embedding.seed),
        "diagnostics": _jsonable(embedding.diagnostics),
    }
    Path(sidecar_path).write_text(
        json.dumps(sidecar, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    return obj
