"""Linear discriminant analysis via the between/within scatter eigenproblem."""

from __future__ import annotations

import numpy as np
import scipy.linalg

from ..corpus import LABELS
from .base import Embedding, matrix_values
from .pca import _fix_signs

#: Within-class scatter condition number above which shrinkage is applied.
_SINGULAR_COND = 1e12
_SHRINKAGE = 1e-6


def _class_order(labels) -> list:
    """Distinct labels, canonical diagnosis order first, others alphabetical."""
    present = set(labels)
    ordered = [lab for lab in LABELS if lab in present]
    ordered += sorted(present - set(LABELS))
    return ordered


def fit_lda(matrix, labels, n_components: int | None = None) -> Embedding:
    """Project onto the directions maximizing between- over within-class scatter.

    The within-class scatter is regularized by ``1e-6 * trace(S_w)/p`` times
    the identity when numerically singular, which keeps the degenerate case of
    zero within-class spread well defined.
    """
    X, sample_ids = matrix_values(matrix)
    labels = list(labels)
    n, p = X.shape
    if len(labels) != n:
        raise ValueError(f"got {len(labels)} labels for {n} samples")
    classes = _class_order(labels)
    if len(classes) < 2:
        raise ValueError("need at least 2 distinct labels for LDA")
    counts = {c: labels.count(c) for c in classes}
    for c, cnt in counts.items():
        if cnt == 0:
            raise ValueError(f"class {c!r} has 0 samples")
    max_comp = len(classes) - 1
    if n_components is None:
        n_components = min(max_comp, p)
    if not (1 <= n_components <= max_comp):
        raise ValueError(
            f"n_components must be in [1, classes-1 = {max_comp}], got {n_components}"
        )

    overall = X.mean(axis=0)
    Sw = np.zeros((p, p))
    Sb = np.zeros((p, p))
    for c in classes:
        idx = [i for i, lab in enumerate(labels) if lab == c]
        Xc = X[idx]
        mu = Xc.mean(axis=0)
        d = Xc - mu
        Sw += d.T @ d
        offset = (mu - overall)[:, None]
        Sb += len(idx) * (offset @ offset.T)

    shrinkage_applied = False
    gamma = 0.0
    cond = np.linalg.cond(Sw)
    if not np.isfinite(cond) or cond > _SINGULAR_COND:
        trace = np.trace(Sw)
        gamma = _SHRINKAGE * (trace / p if trace > 0 else 1.0)
        Sw = Sw + gamma * np.eye(p)
        shrinkage_applied = True

    eigvals, eigvecs = scipy.linalg.eigh(Sb, Sw)
    order = np.argsort(eigvals)[::-1]
    eigvals = np.clip(eigvals[order], 0.0, None)
    eigvecs = eigvecs[:, order]

    W = _fix_signs(eigvecs[:, :n_components].T).T
    total = eigvals.sum()
    evr = eigvals[:n_components] / total if total > 0 else np.zeros(n_components)

    coords = (X - overall) @ W
    return Embedding(
        coords=coords,
        method="lda",
        hyperparameters={
            "n_components": int(n_components),
            "shrinkage_applied": shrinkage_applied,
            "gamma": float(gamma),
        },
        diagnostics={"explained_variance_ratio": [float(v) for v in evr]},
        seed=0,
        sample_ids=sample_ids,
    )
