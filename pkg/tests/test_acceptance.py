"""Acceptance suite: every criterion at its stated tolerance, one line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the per-criterion
PASS/FAIL lines as they complete.
"""

import itertools
import json
from contextlib import contextmanager

import numpy as np
import pytest

from speechcluster.classify import evaluate_feature_set, grouped_kfold_split
from speechcluster.cli import main
from speechcluster.cluster import fit_kmeans, optimal_k_elbow, silhouette_score
from speechcluster.corpus import FeatureMatrix
from speechcluster.dimred import fit_pca, fit_tsne, fit_umap, parallel_analysis
from speechcluster.dimred.base import Embedding
from speechcluster.dimred.tsne import conditional_probabilities, squared_distances
from speechcluster.dimred.umap import (
    knn_graph,
    membership_weights,
    smooth_knn_calibration,
)
from speechcluster.explain import explain_local
from speechcluster.mlp import MlpConfig
from speechcluster.stats import kruskal_wallis, mann_whitney, paired_t_test
from speechcluster.synthgen import SyntheticSpec, generate_cohort
from tests.test_classify import study_cohort
from tests.test_cluster import brute_force_silhouette
from tests.test_stats import brute_force_mw_p


@contextmanager
def criterion(number: int, description: str):
    try:
        yield
    except BaseException:
        print(f"\n[acceptance] criterion {number} ({description}): FAIL")
        raise
    print(f"\n[acceptance] criterion {number} ({description}): PASS")


def test_criterion_1_statistical_test_oracles():
    with criterion(1, "statistical-test oracles"):
        # Mann-Whitney exact p vs brute-force enumeration, exhaustively.
        for nx in range(1, 10):
            for ny in range(1, 10):
                if nx + ny > 10:
                    continue
                for combo in itertools.combinations(range(nx + ny), nx):
                    values = [float(v) for v in range(1, nx + ny + 1)]
                    x = [values[i] for i in combo]
                    y = [
                        values[i]
                        for i in range(nx + ny)
                        if i not in combo
                    ]
                    res = mann_whitney(x, y)
                    assert res.exact
                    assert res.p_value == pytest.approx(
                        brute_force_mw_p(x, y), abs=1e-12
                    )

        kw = kruskal_wallis([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
        assert kw.statistic == pytest.approx(7.2, abs=1e-9)
        assert kw.p_value == pytest.approx(0.0273, abs=1e-4)

        t = paired_t_test([2.0, 4.0, 6.0], [1.0, 2.0, 3.0])
        assert t.statistic == pytest.approx(3.4641, abs=1e-4)


def test_criterion_2_silhouette_oracle():
    with criterion(2, "silhouette oracle"):
        X = np.array([[0.0, 0.0], [0.0, 1.0], [10.0, 0.0], [10.0, 1.0]])
        assert silhouette_score(X, [0, 0, 1, 1]) == pytest.approx(0.9003, abs=1e-4)

        rng = np.random.default_rng(2024)
        for rep in range(100):
            n = 500 if rep < 2 else int(rng.integers(20, 120))
            k = int(rng.integers(2, 6))
            X = rng.normal(size=(n, 3))
            labels = rng.integers(0, k, size=n)
            labels[:2] = [0, 1]  # guarantee two clusters
            assert silhouette_score(X, labels) == pytest.approx(
                brute_force_silhouette(X, labels), abs=1e-12
            )


def test_criterion_3_pca_and_parallel_analysis():
    with criterion(3, "PCA reconstruction, EVR, parallel analysis"):
        rng = np.random.default_rng(0)
        X = rng.normal(size=(400, 30))
        X = (X - X.mean(axis=0)) / X.std(axis=0)
        model, emb = fit_pca(X, 30)
        recon = emb.coords @ model.components + model.mean
        assert np.linalg.norm(recon - X) < 1e-8

        rng = np.random.default_rng(1)
        G = np.column_stack(
            [rng.normal(0, 2.0, 10_000), rng.normal(0, 1.0, 10_000)]
        )
        model, _ = fit_pca(G, 2)
        np.testing.assert_allclose(
            model.explained_variance_ratio, [0.8, 0.2], atol=0.02
        )

        noise = np.random.default_rng(123).standard_normal((200, 50))
        pa = parallel_analysis(noise, mc_reps=100, percentile=95.0, seed=7)
        assert pa.retained_count <= 2


def test_criterion_4_tsne_umap_calibration():
    with criterion(4, "t-SNE/UMAP calibration and KL descent"):
        rng = np.random.default_rng(4)
        X = rng.normal(size=(150, 10))
        P, _ = conditional_probabilities(squared_distances(X), 30.0)
        for row in P:
            probs = row[row > 0]
            assert np.exp(-np.sum(probs * np.log(probs))) == pytest.approx(
                30.0, abs=1e-3
            )

        for k in (10, 50):
            _, dists = knn_graph(X, k)
            sigmas, rhos = smooth_knn_calibration(dists, k)
            sums = membership_weights(dists, sigmas, rhos).sum(axis=1)
            np.testing.assert_allclose(sums, np.log2(k), atol=1e-3)

        cohort = np.vstack(
            [
                rng.normal((0, 0, 0), 1.0, size=(100, 3)),
                rng.normal((18, 0, 0), 1.0, size=(100, 3)),
                rng.normal((0, 18, 0), 1.0, size=(100, 3)),
            ]
        )
        emb = fit_tsne(cohort, perplexity=30.0, seed=4, iterations=1000)
        trace = emb.diagnostics["kl_trace"]
        assert trace[1000] < trace[250]


def test_criterion_5_nonlinear_beats_linear_on_rolled_cohort():
    with criterion(5, "t-SNE/UMAP beat PCA on the rolled cohort"):
        spec = SyntheticSpec(
            n_per_label={"HC": 150, "AD": 150, "MCI": 150, "Depr": 150},
            n_features=36,
            separation=10.0,
            nonlinearity="swiss_roll_lift",
            subjects_per_sample_group=2,
            seed=11,
        )
        matrix, _, _ = generate_cohort(spec)

        _, pca_emb = fit_pca(matrix, 2)
        tsne_emb = fit_tsne(matrix, seed=11)  # perplexity 30, 1000 iterations
        umap_emb = fit_umap(matrix, seed=11)  # n_neighbors 50, min_dist 0.1

        sil = {}
        for name, emb in (
            ("pca", pca_emb),
            ("tsne", tsne_emb),
            ("umap", umap_emb),
        ):
            labels = fit_kmeans(emb, 4, seed=11).labels
            sil[name] = silhouette_score(emb, labels)
        assert sil["tsne"] >= sil["pca"] + 0.05
        assert sil["umap"] >= sil["pca"] + 0.05

        assert optimal_k_elbow(tsne_emb, range(2, 11), seed=11).chosen_k == 4
        assert optimal_k_elbow(umap_emb, range(2, 11), seed=11).chosen_k == 4


def test_criterion_6_lime_recovers_linear_map():
    with criterion(6, "local explanation recovers a known linear map"):
        rng = np.random.default_rng(6)
        X = rng.normal(size=(200, 8))
        coords = np.column_stack([4.0 * X[:, 2], -3.0 * X[:, 6]])
        matrix = FeatureMatrix(
            sample_ids=tuple(f"s{i}" for i in range(200)),
            subject_ids=tuple(f"p{i}" for i in range(200)),
            dataset_tags=("synth",) * 200,
            labels=("HC",) * 200,
            feature_names=tuple(f"f{j}" for j in range(8)),
            values=X,
        )
        emb = Embedding(
            coords=coords, method="tsne", sample_ids=matrix.sample_ids, seed=0
        )
        instances = rng.choice(200, size=20, replace=False)
        for idx in instances:
            expl = explain_local(
                matrix, emb, f"s{idx}", neighborhood_size=50
            )
            assert expl.top_features[0][0] == "f2"
            assert expl.top_features[1][0] == "f6"
            assert expl.per_axis[0].r2 >= 0.99
            assert expl.per_axis[1].r2 >= 0.99


def test_criterion_7_classification_study():
    from speechcluster.classify import run_classification_study

    with criterion(7, "feature-set ablation study"):
        matrix, taxonomy, _ = study_cohort(seed=10, n_per=150, n_features=18)
        report = run_classification_study(
            matrix, taxonomy, ("acoustic", "coherence"), n_folds=10, seed=2
        )

        # zero subject leakage, exhaustively across folds and feature sets
        folds = grouped_kfold_split(
            matrix.subject_ids, matrix.labels, n_folds=10, seed=2
        )
        subjects = np.asarray(matrix.subject_ids)
        for fold in range(10):
            train = set(subjects[folds != fold])
            test = set(subjects[folds == fold])
            assert not (train & test)
        for res in report.per_set.values():
            seen = []
            for f in res.folds:
                seen.extend(f.test_subject_ids)
            assert len(seen) == len(set(seen))
            assert set(seen) == set(subjects)

        acc = {name: res.mean["accuracy"] for name, res in report.per_set.items()}
        assert acc["F_d"] >= 0.95
        assert acc["F_minus_Fd"] <= 0.60

        # label-shuffled control stays at chance (three classes)
        small, _, _ = study_cohort(seed=10, n_per=30, n_features=18)
        rng = np.random.default_rng(11)
        accs = []
        for rep in range(20):
            shuffled = FeatureMatrix(
                sample_ids=small.sample_ids,
                subject_ids=small.subject_ids,
                dataset_tags=small.dataset_tags,
                labels=tuple(
                    np.asarray(small.labels)[rng.permutation(small.n_samples)]
                ),
                feature_names=small.feature_names,
                values=small.values,
            )
            shuffled_folds = grouped_kfold_split(
                shuffled.subject_ids, shuffled.labels, n_folds=5, seed=rep
            )
            results = evaluate_feature_set(
                shuffled,
                shuffled.feature_names,
                shuffled_folds,
                MlpConfig(max_epochs=60),
                seed=rep,
            )
            accs.append(np.mean([f.accuracy for f in results]))
        mean = float(np.mean(accs))
        se = float(np.std(accs, ddof=1) / np.sqrt(len(accs)))
        assert abs(mean - 1 / 3) <= 3 * se


def test_criterion_8_end_to_end_determinism(tmp_path):
    with criterion(8, "byte-identical end-to-end reruns"):
        data = tmp_path / "data"
        assert (
            main(
                [
                    "--seed",
                    "5",
                    "--out-dir",
                    str(data),
                    "synth",
                    "--n-per-label",
                    "40",
                    "--n-features",
                    "18",
                    "--separation",
                    "10",
                    "--nonlinearity",
                    "swiss_roll_lift",
                    "--informative-categories",
                    "acoustic",
                    "coherence",
                ]
            )
            == 0
        )
        out = tmp_path / "out"
        cfg = tmp_path / "config.txt"
        cfg.write_text(
            f'matrix_csv = "{data / "matrix.csv"}"\n'
            f'category_json = "{data / "categories.json"}"\n'
            "seed = 5\n"
            f'out_dir = "{out}"\n'
            "elbow_k_max = 8\n"
            "tsne_perplexity = 12.0\n"
            "tsne_iterations = 400\n"
            "umap_n_neighbors = 15\n"
            "umap_epochs = 200\n"
            "explain_neighborhood = 25\n"
            'cohort_requests = ["HC:majority:10", "AD:majority:10", "Depr:majority:10"]\n'
            'stats_pairs = ["AD|Depr", "AD|HC", "Depr|HC"]\n'
            'classify_differentiators = ["acoustic", "coherence"]\n'
            "classify_n_folds = 5\n"
            "mlp_max_epochs = 80\n"
        )
        assert main(["--config", str(cfg), "run-all"]) == 0
        first = {
            name: (out / name).read_bytes()
            for name in (
                "report.json",
                "embedding_pca.csv",
                "embedding_lda.csv",
                "embedding_tsne.csv",
                "embedding_umap.csv",
            )
        }
        report = json.loads(first["report.json"])
        assert set(report["methods"]) == {"pca", "lda", "tsne", "umap"}

        assert main(["--config", str(cfg), "run-all"]) == 0
        for name, blob in first.items():
            assert (out / name).read_bytes() == blob, f"{name} differs across reruns"
