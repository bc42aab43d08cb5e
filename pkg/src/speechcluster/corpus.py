"""Loading, validation, and preprocessing of labeled speech-feature matrices.

The canonical on-disk format is a UTF-8 CSV with header
``sample_id,subject_id,dataset,label,<feature...>`` plus a JSON object mapping
feature names to one of the nine feature categories.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

#: Canonical diagnosis labels, in reporting order.
LABELS = ("HC", "AD", "MCI", "Depr")

#: The nine feature categories used throughout the analysis.
CATEGORIES = (
    "acoustic",
    "syntactic complexity",
    "discourse mapping",
    "lexical complexity and richness",
    "information content units",
    "sentiment",
    "word finding difficulty",
    "coherence",
    "utterance cohesion",
)

_LABEL_BY_KEY = {name.lower(): name for name in LABELS}
_CATEGORY_BY_KEY = {name.lower(): name for name in CATEGORIES}

#: Columns with population std below this are treated as constant.
ZERO_VARIANCE_EPS = 1e-12


def normalize_label(raw: str) -> str:
    """Map a label string (case-insensitive) onto the canonical enum value."""
    name = _LABEL_BY_KEY.get(raw.strip().lower())
    if name is None:
        raise ValueError(
            f"unknown label {raw!r} (permitted labels: {', '.join(LABELS)})"
        )
    return name


def normalize_category(raw: str) -> str:
    """Map a category string (case-insensitive) onto one of the nine names."""
    name = _CATEGORY_BY_KEY.get(" ".join(raw.strip().lower().split()))
    if name is None:
        raise ValueError(
            f"unknown category {raw!r} (valid categories: {', '.join(CATEGORIES)})"
        )
    return name


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class FeatureMatrix:
    """A dense samples x features matrix with per-sample metadata.

    Immutable after construction; safe to share across parallel workers.
    """

    sample_ids: tuple[str, ...]
    subject_ids: tuple[str, ...]
    dataset_tags: tuple[str, ...]
    labels: tuple[str, ...]
    feature_names: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _readonly(self.values))
        n, p = self.values.shape
        for name, seq in (
            ("sample_ids", self.sample_ids),
            ("subject_ids", self.subject_ids),
            ("dataset_tags", self.dataset_tags),
            ("labels", self.labels),
        ):
            if len(seq) != n:
                raise ValueError(f"{name} has {len(seq)} entries for {n} rows")
        if len(self.feature_names) != p:
            raise ValueError(
                f"feature_names has {len(self.feature_names)} entries for {p} columns"
            )
        if len(set(self.sample_ids)) != n:
            seen = set()
            for sid in self.sample_ids:
                if sid in seen:
                    raise ValueError(f"duplicate sample_id {sid}")
                seen.add(sid)
        if len(set(self.feature_names)) != p:
            raise ValueError("feature names are not unique")
        for lab in self.labels:
            if lab not in LABELS:
                raise ValueError(
                    f"unknown label {lab!r} (permitted labels: {', '.join(LABELS)})"
                )
        if not np.all(np.isfinite(self.values)):
            bad = np.argwhere(~np.isfinite(self.values))[0]
            raise ValueError(
                f"non-finite value for feature {self.feature_names[bad[1]]!r} "
                f"in row {self.sample_ids[bad[0]]!r}"
            )

    @property
    def n_samples(self) -> int:
        return self.values.shape[0]

    @property
    def n_features(self) -> int:
        return self.values.shape[1]

    def sample_index(self, sample_id: str) -> int:
        try:
            return self.sample_ids.index(sample_id)
        except ValueError:
            raise KeyError(f"unknown sample_id {sample_id!r}") from None

    def select_features(self, names) -> "FeatureMatrix":
        """Restrict to the given feature names, preserving their given order."""
        idx = []
        for name in names:
            if name not in self.feature_names:
                raise KeyError(f"unknown feature {name!r}")
            idx.append(self.feature_names.index(name))
        return FeatureMatrix(
            sample_ids=self.sample_ids,
            subject_ids=self.subject_ids,
            dataset_tags=self.dataset_tags,
            labels=self.labels,
            feature_names=tuple(names),
            values=self.values[:, idx],
        )

    def select_samples(self, indices) -> "FeatureMatrix":
        """Restrict to the given row indices (in the given order)."""
        idx = list(indices)
        return FeatureMatrix(
            sample_ids=tuple(self.sample_ids[i] for i in idx),
            subject_ids=tuple(self.subject_ids[i] for i in idx),
            dataset_tags=tuple(self.dataset_tags[i] for i in idx),
            labels=tuple(self.labels[i] for i in idx),
            feature_names=self.feature_names,
            values=self.values[idx, :],
        )

    def restrict_labels(self, keep) -> "FeatureMatrix":
        keep = set(keep)
        idx = [i for i, lab in enumerate(self.labels) if lab in keep]
        return self.select_samples(idx)


@dataclass(frozen=True)
class CategoryTaxonomy:
    """Maps every feature name to one of the nine feature categories."""

    mapping: dict

    def __post_init__(self):
        normalized = {}
        for feat, cat in self.mapping.items():
            normalized[str(feat)] = normalize_category(cat)
        object.__setattr__(self, "mapping", normalized)

    def __len__(self) -> int:
        return len(self.mapping)

    def category_of(self, feature: str) -> str:
        cat = self.mapping.get(feature)
        if cat is None:
            raise KeyError(f"uncategorized feature: {feature}")
        return cat

    def features_in(self, categories, universe=None) -> tuple[str, ...]:
        """Feature names whose category lies in ``categories``.

        When ``universe`` is given, results are restricted to (and ordered by)
        that sequence of feature names.
        """
        cats = {normalize_category(c) for c in categories}
        names = universe if universe is not None else list(self.mapping)
        return tuple(f for f in names if self.category_of(f) in cats)

    def covers(self, matrix: FeatureMatrix) -> None:
        for feat in matrix.feature_names:
            if feat not in self.mapping:
                raise ValueError(f"uncategorized feature: {feat}")


@dataclass(frozen=True)
class PreprocessReport:
    """Record of every action taken by :func:`preprocess`."""

    dropped_constant: tuple[str, ...]
    #: (kept_feature, dropped_feature, pearson_r) per pruned pair.
    dropped_correlated: tuple[tuple[str, str, float], ...]
    means: dict = field(default_factory=dict)
    stds: dict = field(default_factory=dict)
    corr_threshold: float = 0.9

    def to_dict(self) -> dict:
        return {
            "dropped_constant": list(self.dropped_constant),
            "dropped_correlated": [
                {"kept": k, "dropped": d, "r": float(r)}
                for k, d, r in self.dropped_correlated
            ],
            "means": {k: float(v) for k, v in self.means.items()},
            "stds": {k: float(v) for k, v in self.stds.items()},
            "corr_threshold": float(self.corr_threshold),
        }


def load_matrix(path, schema: dict | None = None) -> FeatureMatrix:
    """Load a feature matrix CSV.

    ``schema`` optionally renames the four metadata columns, e.g.
    ``{"sample_id": "id", "label": "diagnosis"}``; unnamed keys keep their
    defaults. The remaining header columns are feature columns, in order.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"feature matrix file not found: {path}")
    colnames = {
        "sample_id": "sample_id",
        "subject_id": "subject_id",
        "dataset": "dataset",
        "label": "label",
    }
    if schema:
        for key, val in schema.items():
            if key not in colnames:
                raise ValueError(f"unknown schema key {key!r}")
            colnames[key] = val

    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"empty CSV file: {path}") from None
        meta_pos = {}
        for key, col in colnames.items():
            if col not in header:
                raise ValueError(f"missing required column {col!r} in {path}")
            meta_pos[key] = header.index(col)
        feature_cols = [
            (i, name) for i, name in enumerate(header) if i not in meta_pos.values()
        ]
        feature_names = tuple(name for _, name in feature_cols)

        sample_ids, subject_ids, tags, labels, rows = [], [], [], [], []
        seen = set()
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise ValueError(
                    f"line {lineno}: expected {len(header)} cells, got {len(row)}"
                )
            sid = row[meta_pos["sample_id"]]
            if sid in seen:
                raise ValueError(f"duplicate sample_id {sid}")
            seen.add(sid)
            sample_ids.append(sid)
            subject_ids.append(row[meta_pos["subject_id"]])
            tags.append(row[meta_pos["dataset"]])
            labels.append(normalize_label(row[meta_pos["label"]]))
            vals = np.empty(len(feature_cols), dtype=np.float64)
            for j, (col, name) in enumerate(feature_cols):
                cell = row[col].strip()
                try:
                    v = float(cell)
                except ValueError:
                    v = float("nan")
                if cell == "" or not np.isfinite(v):
                    raise ValueError(
                        f"non-numeric value {row[col]!r} for feature {name!r} "
                        f"in row {sid!r} (line {lineno})"
                    )
                vals[j] = v
            rows.append(vals)

    if not rows:
        raise ValueError(f"no data rows in {path}")
    return FeatureMatrix(
        sample_ids=tuple(sample_ids),
        subject_ids=tuple(subject_ids),
        dataset_tags=tuple(tags),
        labels=tuple(labels),
        feature_names=feature_names,
        values=np.vstack(rows),
    )


def load_category_map(path, matrix: FeatureMatrix | None = None) -> CategoryTaxonomy:
    """Load a feature -> category JSON object and validate matrix coverage."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"category map file not found: {path}")
    with path.open(encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise ValueError("category map must be a JSON object of feature -> category")
    taxonomy = CategoryTaxonomy(mapping=raw)
    if matrix is not None:
        taxonomy.covers(matrix)
    return taxonomy


def preprocess(
    matrix: FeatureMatrix, corr_threshold: float = 0.9
) -> tuple[FeatureMatrix, PreprocessReport]:
    """Drop constant columns, standardize, and prune correlated columns.

    Standardization uses the population (divide-by-n) standard deviation.
    Pairs with ``|pearson r| > corr_threshold`` are scanned in column order
    and the later column of each offending pair is dropped, so the surviving
    column order is a subsequence of the input order.
    """
    if not (0.0 < corr_threshold <= 1.0):
        raise ValueError(f"corr_threshold must be in (0, 1], got {corr_threshold}")
    X = matrix.values
    n = X.shape[0]
    mu = X.mean(axis=0)
    sigma = X.std(axis=0)  # population

    constant = sigma < ZERO_VARIANCE_EPS
    dropped_constant = tuple(
        name for name, c in zip(matrix.feature_names, constant) if c
    )
    keep = ~constant
    if not keep.any():
        raise ValueError("all feature columns are constant; nothing to preprocess")

    names = [name for name, k in zip(matrix.feature_names, keep) if k]
    Z = (X[:, keep] - mu[keep]) / sigma[keep]
    mu_kept = mu[keep]
    sigma_kept = sigma[keep]

    # Pearson r between standardized columns reduces to a dot product / n.
    corr = (Z.T @ Z) / n
    p = Z.shape[1]
    alive = np.ones(p, dtype=bool)
    dropped_correlated = []
    for i in range(p):
        if not alive[i]:
            continue
        for j in range(i + 1, p):
            if not alive[j]:
                continue
            r = corr[i, j]
            if abs(r) > corr_threshold:
                alive[j] = False
                dropped_correlated.append((names[i], names[j], float(r)))

    kept_idx = np.flatnonzero(alive)
    kept_names = tuple(names[i] for i in kept_idx)
    report = PreprocessReport(
        dropped_constant=dropped_constant,
        dropped_correlated=tuple(dropped_correlated),
        means={names[i]: float(mu_kept[i]) for i in kept_idx},
        stds={names[i]: float(sigma_kept[i]) for i in kept_idx},
        corr_threshold=corr_threshold,
    )
    out = FeatureMatrix(
        sample_ids=matrix.sample_ids,
        subject_ids=matrix.subject_ids,
        dataset_tags=matrix.dataset_tags,
        labels=matrix.labels,
        feature_names=kept_names,
        values=Z[:, kept_idx],
    )
    return out, report


def write_matrix_csv(matrix: FeatureMatrix, path) -> None:
    """Write a feature matrix back to the canonical CSV layout."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["sample_id", "subject_id", "dataset", "label", *matrix.feature_names]
        )
        for i in range(matrix.n_samples):
            writer.writerow(
                [
                    matrix.sample_ids[i],
                    matrix.subject_ids[i],
                    matrix.dataset_tags[i],
                    matrix.labels[i],
                    *(repr(float(v)) for v in matrix.values[i]),
                ]
            )
