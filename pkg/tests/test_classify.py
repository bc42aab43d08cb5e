import numpy as np
import pytest

from speechcluster.classify import (
    _macro_metrics,
    build_feature_sets,
    evaluate_feature_set,
    grouped_kfold_split,
    run_classification_study,
)
from speechcluster.corpus import CATEGORIES, CategoryTaxonomy, FeatureMatrix
from speechcluster.mlp import MlpClassifier, MlpConfig
from speechcluster.synthgen import SyntheticSpec, generate_cohort

#: the differentiating categories reported for the dementia-vs-depression pair
AD_DEPR_DIFFERENTIATORS = (
    "acoustic",
    "discourse mapping",
    "lexical complexity and richness",
    "word finding difficulty",
    "coherence",
)


def study_cohort(seed=0, n_per=60, n_features=27):
    spec = SyntheticSpec(
        n_per_label={"AD": n_per, "MCI": n_per, "Depr": n_per},
        n_features=n_features,
        separation=8.0,
        subjects_per_sample_group=2,
        seed=seed,
        informative_categories=("acoustic", "coherence"),
    )
    return generate_cohort(spec)


class TestBuildFeatureSets:
    def _taxonomy(self):
        mapping = {}
        for i, cat in enumerate(CATEGORIES):
            mapping[f"feat_{i}a"] = cat
            mapping[f"feat_{i}b"] = cat
        return CategoryTaxonomy(mapping=mapping)

    def test_partition(self):
        tax = self._taxonomy()
        f, fd, rest = build_feature_sets(tax, AD_DEPR_DIFFERENTIATORS)
        assert set(fd.resolved_features) | set(rest.resolved_features) == set(
            f.resolved_features
        )
        assert set(fd.resolved_features) & set(rest.resolved_features) == set()
        assert len(fd.resolved_features) == 2 * len(AD_DEPR_DIFFERENTIATORS)

    def test_unknown_category(self):
        with pytest.raises(ValueError, match="prosody"):
            build_feature_sets(self._taxonomy(), ["prosody"])

    def test_empty_differentiators(self):
        with pytest.raises(ValueError):
            build_feature_sets(self._taxonomy(), [])


class TestGroupedSplit:
    def test_leave_one_subject_out(self):
        subjects = [f"p{i}" for i in range(10) for _ in range(2)]
        labels = ["AD", "MCI"] * 10
        folds = grouped_kfold_split(subjects, labels, n_folds=10, seed=0)
        assert sorted(np.bincount(folds).tolist()) == [2] * 10
        for fold in range(10):
            held = {subjects[i] for i in np.flatnonzero(folds == fold)}
            assert len(held) == 1

    def test_no_subject_spans_folds(self):
        rng = np.random.default_rng(1)
        for seed in range(100):
            n_subjects = int(rng.integers(12, 40))
            per = int(rng.integers(1, 4))
            subjects = [f"p{i}" for i in range(n_subjects) for _ in range(per)]
            labels = [
                ("AD", "MCI", "Depr")[i % 3]
                for i in range(n_subjects)
                for _ in range(per)
            ]
            folds = grouped_kfold_split(subjects, labels, n_folds=10, seed=seed)
            for subj in set(subjects):
                subj_folds = {
                    folds[i] for i in range(len(subjects)) if subjects[i] == subj
                }
                assert len(subj_folds) == 1

    def test_too_few_subjects(self):
        subjects = [f"p{i}" for i in range(5)]
        with pytest.raises(ValueError):
            grouped_kfold_split(subjects, ["AD"] * 5, n_folds=10, seed=0)

    def test_balanced_counts(self):
        subjects = [f"p{i}" for i in range(23)]
        labels = ["AD"] * 23
        folds = grouped_kfold_split(subjects, labels, n_folds=10, seed=3)
        counts = np.bincount(folds, minlength=10)
        assert counts.max() - counts.min() <= 1


class TestMacroMetrics:
    def test_against_confusion_matrix_oracle(self):
        rng = np.random.default_rng(2)
        classes = ("AD", "MCI", "Depr")
        for _ in range(50):
            n = int(rng.integers(5, 60))
            y_true = [classes[i] for i in rng.integers(0, 3, n)]
            y_pred = [classes[i] for i in rng.integers(0, 3, n)]
            got = _macro_metrics(y_true, y_pred, classes)

            # independent oracle via explicit confusion matrix
            idx = {c: i for i, c in enumerate(classes)}
            cm = np.zeros((3, 3))
            for t, p in zip(y_true, y_pred):
                cm[idx[t], idx[p]] += 1
            precs, recs, f1s = [], [], []
            for c in range(3):
                tp = cm[c, c]
                prec = tp / cm[:, c].sum() if cm[:, c].sum() else 0.0
                rec = tp / cm[c, :].sum() if cm[c, :].sum() else 0.0
                precs.append(prec)
                recs.append(rec)
                f1s.append(
                    2 * prec * rec / (prec + rec) if prec + rec else 0.0
                )
            assert got["macro_precision"] == pytest.approx(np.mean(precs))
            assert got["macro_recall"] == pytest.approx(np.mean(recs))
            assert got["macro_f1"] == pytest.approx(np.mean(f1s))
            assert got["accuracy"] == pytest.approx(np.trace(cm) / n)


class TestMlp:
    def test_learns_separable_data(self):
        rng = np.random.default_rng(3)
        X = np.vstack([rng.normal(-2, 0.5, (60, 4)), rng.normal(2, 0.5, (60, 4))])
        y = np.array(["a"] * 60 + ["b"] * 60)
        model = MlpClassifier(MlpConfig(seed=1)).fit(X, y)
        assert (model.predict(X) == y).mean() > 0.95

    def test_loss_mostly_non_increasing(self):
        rng = np.random.default_rng(4)
        X = rng.normal(size=(150, 6))
        y = (X[:, 0] + 0.3 * rng.normal(size=150) > 0).astype(int)
        model = MlpClassifier(MlpConfig(seed=2, max_epochs=100)).fit(X, y)
        curve = np.asarray(model.loss_curve_)
        assert len(curve) >= 10
        ok = np.sum(curve[1:] <= curve[:-1] + 1e-4)
        assert ok / (len(curve) - 1) >= 0.95

    def test_deterministic(self):
        rng = np.random.default_rng(5)
        X = rng.normal(size=(80, 5))
        y = (X[:, 1] > 0).astype(int)
        a = MlpClassifier(MlpConfig(seed=7)).fit(X, y)
        b = MlpClassifier(MlpConfig(seed=7)).fit(X, y)
        np.testing.assert_array_equal(a.predict_proba(X), b.predict_proba(X))
        assert a.loss_curve_ == b.loss_curve_


class TestStudy:
    def test_report_structure_and_leakage(self):
        matrix, taxonomy, _ = study_cohort(seed=6)
        report = run_classification_study(
            matrix, taxonomy, ("acoustic", "coherence"), n_folds=10, seed=4
        )
        assert set(report.per_set) == {"F", "F_d", "F_minus_Fd"}
        all_subjects = set(matrix.subject_ids)
        for res in report.per_set.values():
            assert len(res.folds) == 10
            seen = []
            for fold in res.folds:
                seen.extend(fold.test_subject_ids)
            assert sorted(seen) == sorted(set(seen))  # disjoint test subjects
            assert set(seen) == all_subjects
            for metric, value in res.mean.items():
                folds = [f.metric(metric) for f in res.folds]
                assert value == pytest.approx(np.mean(folds), abs=1e-9)

    def test_separable_cohort_directional_pattern(self):
        matrix, taxonomy, _ = study_cohort(seed=10, n_per=150, n_features=18)
        report = run_classification_study(
            matrix, taxonomy, ("acoustic", "coherence"), n_folds=10, seed=2
        )
        acc = {name: res.mean["accuracy"] for name, res in report.per_set.items()}
        assert acc["F_d"] >= 0.95
        assert acc["F"] >= 0.95  # the informative columns are inside F too
        assert acc["F_minus_Fd"] <= 0.60

    def test_missing_label_error(self):
        spec = SyntheticSpec(
            n_per_label={"AD": 20, "MCI": 20},
            n_features=18,
            seed=8,
        )
        matrix, taxonomy, _ = generate_cohort(spec)
        with pytest.raises(ValueError, match="needs all of"):
            run_classification_study(matrix, taxonomy, ("acoustic",), seed=0)

    def test_deterministic_report(self):
        matrix, taxonomy, _ = study_cohort(seed=9, n_per=30)
        a = run_classification_study(
            matrix, taxonomy, ("acoustic", "coherence"), n_folds=5, seed=2
        )
        b = run_classification_study(
            matrix, taxonomy, ("acoustic", "coherence"), n_folds=5, seed=2
        )
        assert a.to_dict() == b.to_dict()

    def test_label_shuffle_control(self):
        matrix, taxonomy, _ = study_cohort(seed=10, n_per=30)
        rng = np.random.default_rng(11)
        accs = []
        for rep in range(20):
            shuffled = FeatureMatrix(
                sample_ids=matrix.sample_ids,
                subject_ids=matrix.subject_ids,
                dataset_tags=matrix.dataset_tags,
                labels=tuple(
                    np.asarray(matrix.labels)[rng.permutation(matrix.n_samples)]
                ),
                feature_names=matrix.feature_names,
                values=matrix.values,
            )
            folds = grouped_kfold_split(
                shuffled.subject_ids, shuffled.labels, n_folds=5, seed=rep
            )
            results = evaluate_feature_set(
                shuffled,
                shuffled.feature_names,
                folds,
                MlpConfig(max_epochs=60),
                seed=rep,
            )
            accs.append(np.mean([f.accuracy for f in results]))
        mean = float(np.mean(accs))
        se = float(np.std(accs, ddof=1) / np.sqrt(len(accs)))
        assert abs(mean - 1 / 3) <= 3 * se
