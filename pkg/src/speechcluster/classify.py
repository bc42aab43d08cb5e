"""Feature-set ablation study: F (all), F_d (differentiator categories), and
F - F_d, each evaluated with an MLP under grouped 10-fold cross-validation.

Grouping is by subject so no subject's samples span train and test; folds are
dealt after a best-effort stratification of subjects by their majority label.
Standardization (and constant/correlated column removal) is refit on every
training fold so no test statistics leak into training.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import (
    CATEGORIES,
    ZERO_VARIANCE_EPS,
    CategoryTaxonomy,
    FeatureMatrix,
    normalize_category,
)
from .mlp import MlpClassifier, MlpConfig
from .stats import paired_t_test

STUDY_LABELS = ("AD", "MCI", "Depr")
FEATURE_SET_NAMES = ("F", "F_d", "F_minus_Fd")
METRICS = ("macro_precision", "macro_recall", "macro_f1", "accuracy")


@dataclass(frozen=True)
class FeatureSetSpec:
    name: str
    categories: tuple[str, ...]
    resolved_features: tuple[str, ...]


@dataclass(frozen=True)
class FoldResult:
    fold_index: int
    macro_precision: float
    macro_recall: float
    macro_f1: float
    accuracy: float
    test_subject_ids: tuple[str, ...]

    def metric(self, name: str) -> float:
        return float(getattr(self, name))


@dataclass(frozen=True)
class FeatureSetResult:
    spec: FeatureSetSpec
    folds: tuple[FoldResult, ...]
    mean: dict
    std: dict


@dataclass(frozen=True)
class ClassificationReport:
    per_set: dict
    #: ("A_vs_B", metric) -> p-value (None when the paired test is degenerate).
    pairwise_p: dict
    n_folds: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "n_folds": self.n_folds,
            "seed": self.seed,
            "feature_sets": {
                name: {
                    "categories": list(res.spec.categories),
                    "n_features": len(res.spec.resolved_features),
                    "mean": {k: float(v) for k, v in res.mean.items()},
                    "std": {k: float(v) for k, v in res.std.items()},
                    "folds": [
                        {
                            "fold": f.fold_index,
                            "macro_precision": f.macro_precision,
                            "macro_recall": f.macro_recall,
                            "macro_f1": f.macro_f1,
                            "accuracy": f.accuracy,
                            "test_subjects": list(f.test_subject_ids),
                        }
                        for f in res.folds
                    ],
                }
                for name, res in self.per_set.items()
            },
            "paired_t_p_values": {
                pair: {m: (None if p is None else float(p)) for m, p in d.items()}
                for pair, d in self.pairwise_p.items()
            },
        }


def build_feature_sets(
    taxonomy: CategoryTaxonomy, differentiators, feature_names=None
) -> tuple[FeatureSetSpec, FeatureSetSpec, FeatureSetSpec]:
    """F = all features; F_d = features in the differentiator categories;
    F - F_d = the complement. Order follows the feature universe."""
    diff = tuple(normalize_category(c) for c in differentiators)
    if not diff:
        raise ValueError("differentiators must be a non-empty category subset")
    universe = tuple(feature_names) if feature_names is not None else tuple(
        taxonomy.mapping
    )
    f_all = universe
    f_d = tuple(f for f in universe if taxonomy.category_of(f) in set(diff))
    f_rest = tuple(f for f in universe if f not in set(f_d))
    return (
        FeatureSetSpec(name="F", categories=tuple(CATEGORIES), resolved_features=f_all),
        FeatureSetSpec(name="F_d", categories=diff, resolved_features=f_d),
        FeatureSetSpec(
            name="F_minus_Fd",
            categories=tuple(c for c in CATEGORIES if c not in set(diff)),
            resolved_features=f_rest,
        ),
    )


def grouped_kfold_split(
    subject_ids, labels, n_folds: int = 10, seed: int = 0
) -> np.ndarray:
    """Assign every sample to a fold such that subjects never span folds.

    Subjects are stratified by majority label, shuffled by seed within each
    stratum, then dealt round-robin so fold subject counts stay balanced.
    Returns the fold index per sample.
    """
    subject_ids = list(subject_ids)
    labels = list(labels)
    if len(subject_ids) != len(labels):
        raise ValueError("subject_ids and labels lengths differ")
    subjects = list(dict.fromkeys(subject_ids))
    if len(subjects) < n_folds:
        raise ValueError(
            f"need at least {n_folds} distinct subjects, got {len(subjects)}"
        )

    majority = {}
    for subj in subjects:
        subj_labels = [lab for sid, lab in zip(subject_ids, labels) if sid == subj]
        counts = {}
        for lab in subj_labels:
            counts[lab] = counts.get(lab, 0) + 1
        majority[subj] = max(sorted(counts), key=lambda lab: counts[lab])

    rng = np.random.default_rng(seed)
    strata = sorted(set(majority.values()))
    dealt = []
    for stratum in strata:
        members = [s for s in subjects if majority[s] == stratum]
        order = rng.permutation(len(members))
        dealt.extend(members[i] for i in order)

    fold_of_subject = {subj: i % n_folds for i, subj in enumerate(dealt)}
    return np.asarray([fold_of_subject[s] for s in subject_ids], dtype=np.int64)


def _macro_metrics(y_true, y_pred, classes) -> dict:
    """Per-class precision/recall/F1 averaged without weights; zero divisions
    count as 0 for the affected class."""
    precisions, recalls, f1s = [], [], []
    correct = sum(1 for t, p in zip(y_true, y_pred) if t == p)
    for c in classes:
        tp = sum(1 for t, p in zip(y_true, y_pred) if t == c and p == c)
        fp = sum(1 for t, p in zip(y_true, y_pred) if t != c and p == c)
        fn = sum(1 for t, p in zip(y_true, y_pred) if t == c and p != c)
        prec = tp / (tp + fp) if tp + fp > 0 else 0.0
        rec = tp / (tp + fn) if tp + fn > 0 else 0.0
        f1 = 2 * prec * rec / (prec + rec) if prec + rec > 0 else 0.0
        precisions.append(prec)
        recalls.append(rec)
        f1s.append(f1)
    return {
        "macro_precision": float(np.mean(precisions)),
        "macro_recall": float(np.mean(recalls)),
        "macro_f1": float(np.mean(f1s)),
        "accuracy": correct / len(y_true),
    }


def _fold_preprocess(
    train: np.ndarray, test: np.ndarray, corr_threshold: float = 0.9
) -> tuple[np.ndarray, np.ndarray]:
    """Standardize and prune columns using training-fold statistics only."""
    mu = train.mean(axis=0)
    sigma = train.std(axis=0)
    keep = sigma >= ZERO_VARIANCE_EPS
    if not keep.any():
        raise ValueError("all training columns are constant in a fold")
    tr = (train[:, keep] - mu[keep]) / sigma[keep]
    te = (test[:, keep] - mu[keep]) / sigma[keep]

    corr = (tr.T @ tr) / tr.shape[0]
    p = tr.shape[1]
    alive = np.ones(p, dtype=bool)
    for i in range(p):
        if not alive[i]:
            continue
        for j in range(i + 1, p):
            if alive[j] and abs(corr[i, j]) > corr_threshold:
                alive[j] = False
    return tr[:, alive], te[:, alive]


def _derived_seed(seed: int, fs_idx: int, fold_idx: int) -> int:
    return int(
        np.random.default_rng([seed % 2**32, fs_idx, fold_idx]).integers(2**31)
    )


def evaluate_feature_set(
    matrix: FeatureMatrix,
    features,
    folds: np.ndarray,
    mlp: MlpConfig,
    seed: int,
    fs_idx: int = 0,
) -> tuple[FoldResult, ...]:
    """Train/evaluate one feature set across the given fold assignment."""
    sub = matrix.select_features(list(features))
    labels = list(sub.labels)
    classes = tuple(sorted(set(labels)))
    results = []
    for fold in range(int(folds.max()) + 1):
        test_idx = np.flatnonzero(folds == fold)
        train_idx = np.flatnonzero(folds != fold)
        train_labels = [labels[i] for i in train_idx]
        missing = [c for c in classes if c not in train_labels]
        if missing:
            raise ValueError(
                f"fold {fold}: training set is missing class(es) {missing}"
            )
        tr, te = _fold_preprocess(sub.values[train_idx], sub.values[test_idx])
        cfg = MlpConfig(
            hidden_layers=mlp.hidden_layers,
            learning_rate=mlp.learning_rate,
            l2=mlp.l2,
            batch_size=mlp.batch_size,
            max_epochs=mlp.max_epochs,
            early_stop_tol=mlp.early_stop_tol,
            patience=mlp.patience,
            seed=_derived_seed(seed, fs_idx, fold),
        )
        model = MlpClassifier(cfg).fit(tr, np.asarray(train_labels))
        pred = model.predict(te)
        metrics = _macro_metrics([labels[i] for i in test_idx], pred.tolist(), classes)
        results.append(
            FoldResult(
                fold_index=fold,
                test_subject_ids=tuple(
                    dict.fromkeys(sub.subject_ids[i] for i in test_idx)
                ),
                **metrics,
            )
        )
    return tuple(results)


def run_classification_study(
    matrix: FeatureMatrix,
    taxonomy: CategoryTaxonomy,
    differentiators,
    mlp: MlpConfig | None = None,
    n_folds: int = 10,
    seed: int = 0,
) -> ClassificationReport:
    """The full F / F_d / F - F_d study on the AD/MCI/Depr subset."""
    mlp = mlp or MlpConfig()
    study = matrix.restrict_labels(STUDY_LABELS)
    present = set(study.labels)
    if present != set(STUDY_LABELS):
        raise ValueError(
            f"classification study needs all of {STUDY_LABELS}, found {sorted(present)}"
        )
    taxonomy.covers(study)
    specs = build_feature_sets(
        taxonomy, differentiators, feature_names=study.feature_names
    )
    folds = grouped_kfold_split(study.subject_ids, study.labels, n_folds, seed)

    per_set = {}
    for fs_idx, spec in enumerate(specs):
        if not spec.resolved_features:
            raise ValueError(f"feature set {spec.name} resolved to no features")
        fold_results = evaluate_feature_set(
            study, spec.resolved_features, folds, mlp, seed, fs_idx
        )
        mean = {
            m: float(np.mean([f.metric(m) for f in fold_results])) for m in METRICS
        }
        std = {
            m: float(np.std([f.metric(m) for f in fold_results], ddof=1))
            for m in METRICS
        }
        per_set[spec.name] = FeatureSetResult(
            spec=spec, folds=fold_results, mean=mean, std=std
        )

    pairwise_p = {}
    names = list(per_set)
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            a, b = names[i], names[j]
            entry = {}
            for m in METRICS:
                va = [f.metric(m) for f in per_set[a].folds]
                vb = [f.metric(m) for f in per_set[b].folds]
                try:
                    entry[m] = paired_t_test(va, vb).p_value
                except ValueError:
                    entry[m] = None  # identical fold metrics: degenerate pairing
            pairwise_p[f"{a}_vs_{b}"] = entry

    return ClassificationReport(
        per_set=per_set, pairwise_p=pairwise_p, n_folds=n_folds, seed=seed
    )


def format_report_table(report: ClassificationReport) -> str:
    """Fixed-width text table: one row per feature set, mean +/- std per metric."""
    headers = ("Feature Set", "Precision", "Recall", "F1 Score", "Accuracy")
    rows = [headers]
    display = {"F": "F", "F_d": "F_d", "F_minus_Fd": "F-F_d"}
    for name, res in report.per_set.items():
        rows.append(
            (
                display.get(name, name),
                *(
                    f"{res.mean[m]:.2f} +/- {res.std[m]:.2f}"
                    for m in METRICS
                ),
            )
        )
    widths = [max(len(r[c]) for r in rows) for c in range(len(headers))]
    lines = []
    for i, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
        if i == 0:
            lines.append("-" * (sum(widths) + 2 * (len(widths) - 1)))
    return "\n".join(lines) + "\n"
