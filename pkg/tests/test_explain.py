import numpy as np
import pytest

from speechcluster.cluster import ClusterAssignment
from speechcluster.corpus import CATEGORIES, CategoryTaxonomy, FeatureMatrix
from speechcluster.dimred.base import Embedding
from speechcluster.explain import (
    category_frequency_vector,
    explain_local,
    select_explanation_cohort,
)


def make_matrix(values, feature_names):
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    return FeatureMatrix(
        sample_ids=tuple(f"s{i}" for i in range(n)),
        subject_ids=tuple(f"p{i}" for i in range(n)),
        dataset_tags=("synth",) * n,
        labels=("HC",) * n,
        feature_names=tuple(feature_names),
        values=values,
    )


def linear_map_case(seed=0, n=120, p=6, coef=(3.0, -2.0)):
    """Embedding axes are exact multiples of two specific feature columns."""
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, p))
    coords = np.column_stack([coef[0] * X[:, 1], coef[1] * X[:, 4]])
    matrix = make_matrix(X, [f"f{j}" for j in range(p)])
    emb = Embedding(
        coords=coords, method="tsne", sample_ids=matrix.sample_ids, seed=0
    )
    return matrix, emb


class TestExplainLocal:
    def test_linear_map_recovered(self):
        matrix, emb = linear_map_case()
        expl = explain_local(matrix, emb, "s0", neighborhood_size=40)
        assert expl.top_features[0][0] == "f1"
        assert expl.top_features[1][0] == "f4"
        assert expl.per_axis[0].r2 >= 0.99
        assert expl.per_axis[1].r2 >= 0.99
        # recovered weights point in the right direction
        w0 = expl.per_axis[0].weights
        assert w0[1] > 0
        w1 = expl.per_axis[1].weights
        assert w1[4] < 0

    def test_constant_embedding_gives_zero_weights(self):
        rng = np.random.default_rng(1)
        X = rng.normal(size=(30, 4))
        coords = np.zeros((30, 2))
        matrix = make_matrix(X, [f"f{j}" for j in range(4)])
        emb = Embedding(
            coords=coords, method="tsne", sample_ids=matrix.sample_ids, seed=0
        )
        expl = explain_local(matrix, emb, "s3", neighborhood_size=20)
        for ax in expl.per_axis:
            np.testing.assert_array_equal(ax.weights, 0.0)
            assert ax.r2 == 0.0
        assert expl.top_features == ((), ())

    def test_neighborhood_size_validation(self):
        matrix, emb = linear_map_case()
        with pytest.raises(ValueError, match="neighborhood_size"):
            explain_local(matrix, emb, "s0", neighborhood_size=9)

    def test_unknown_instance(self):
        matrix, emb = linear_map_case()
        with pytest.raises(KeyError, match="unknown sample_id"):
            explain_local(matrix, emb, "nope")

    def test_ridge_limit_matches_ols(self):
        rng = np.random.default_rng(2)
        n, p = 50, 4
        X = rng.normal(size=(n, p))
        beta_true = np.array([1.0, -2.0, 0.5, 0.0])
        y = X @ beta_true + 0.01 * rng.normal(size=n)
        coords = np.column_stack([y, rng.normal(size=n)])
        matrix = make_matrix(X, [f"f{j}" for j in range(p)])
        emb = Embedding(
            coords=coords, method="tsne", sample_ids=matrix.sample_ids, seed=0
        )
        expl = explain_local(
            matrix, emb, "s0", neighborhood_size=n, kernel_width=1e6,
            ridge_lambda=1e-10,
        )
        # uniform weights + vanishing ridge = plain OLS
        Xd = np.column_stack([X, np.ones(n)])
        ols, *_ = np.linalg.lstsq(Xd, y, rcond=None)
        np.testing.assert_allclose(expl.per_axis[0].weights, ols[:p], atol=1e-6)

    def test_r2_recomputation(self):
        matrix, emb = linear_map_case(seed=3)
        expl = explain_local(matrix, emb, "s5", neighborhood_size=30)
        idx = matrix.sample_index("s5")
        d = np.sqrt(np.sum((emb.coords - emb.coords[idx]) ** 2, axis=1))
        order = np.argsort(d, kind="stable")[:30]
        kw = float(np.median(d[order]))
        weights = np.exp(-(d[order] ** 2) / kw**2)
        for axis, ax in enumerate(expl.per_axis):
            y = emb.coords[order, axis]
            yhat = matrix.values[order] @ ax.weights + ax.intercept
            ybar = (weights * y).sum() / weights.sum()
            sse = weights @ ((y - yhat) ** 2)
            sst = weights @ ((y - ybar) ** 2)
            assert ax.r2 == pytest.approx(1 - sse / sst, abs=1e-9)

    def test_perturb_strategy_recovers_direction(self):
        matrix, emb = linear_map_case(seed=4)
        expl = explain_local(
            matrix, emb, "s0", neighborhood_size=20, strategy="perturb", seed=7
        )
        assert expl.top_features[0][0] == "f1"


class TestCohortSelection:
    def _assignment(self, cluster_labels):
        labels = np.asarray(cluster_labels, dtype=np.int64)
        k = int(labels.max()) + 1
        centroids = np.zeros((k, 2))
        return ClusterAssignment(
            labels=labels, centroids=centroids, inertia=0.0, k=k, seed=0
        )

    def test_sampling_without_replacement(self):
        n = 25
        assignment = self._assignment([0] * n)
        ids = [f"s{i}" for i in range(n)]
        cohort = select_explanation_cohort(
            assignment, ids, ["HC"] * n, [("HC", 0, 10)], seed=1
        )
        group = cohort.groups[0]
        assert len(group.sample_ids) == 10
        assert len(set(group.sample_ids)) == 10

    def test_short_pool_returns_all_with_warning(self):
        assignment = self._assignment([0] * 7 + [1] * 3)
        ids = [f"s{i}" for i in range(10)]
        with pytest.warns(UserWarning, match="returning all"):
            cohort = select_explanation_cohort(
                assignment, ids, ["AD"] * 10, [("AD", 0, 10)], seed=2
            )
        assert len(cohort.groups[0].sample_ids) == 7

    def test_below_minimum_is_error(self):
        assignment = self._assignment([0] * 4 + [1] * 6)
        ids = [f"s{i}" for i in range(10)]
        with pytest.raises(ValueError, match="at least 5"):
            select_explanation_cohort(
                assignment, ids, ["Depr"] * 10, [("Depr", 0, 10)], seed=3
            )

    def test_seeded_reproducibility(self):
        assignment = self._assignment([0] * 30)
        ids = [f"s{i}" for i in range(30)]
        labels = ["HC"] * 30
        a = select_explanation_cohort(assignment, ids, labels, [("HC", 0, 10)], seed=9)
        b = select_explanation_cohort(assignment, ids, labels, [("HC", 0, 10)], seed=9)
        assert a.groups[0].sample_ids == b.groups[0].sample_ids


class TestFrequencyVector:
    def _taxonomy(self):
        return CategoryTaxonomy(
            mapping={
                "mfcc_0_mean": "acoustic",
                "f0_std": "acoustic",
                "brunet": "lexical complexity and richness",
            }
        )

    def _explanation(self, top):
        from speechcluster.explain import AxisExplanation, LocalExplanation

        names = ("mfcc_0_mean", "f0_std", "brunet")
        axes = tuple(
            AxisExplanation(weights=np.ones(3), r2=1.0, intercept=0.0) for _ in top
        )
        return LocalExplanation(
            instance_id="s0",
            neighborhood_ids=("s0",),
            per_axis=axes,
            top_features=tuple(tuple(t) for t in top),
            feature_names=names,
        )

    def test_counting_with_multiplicity(self):
        expl = self._explanation([("mfcc_0_mean", "f0_std"), ("brunet",)])
        vec = category_frequency_vector(expl, self._taxonomy())
        d = vec.as_dict()
        assert d["acoustic"] == 2
        assert d["lexical complexity and richness"] == 1
        assert sum(d.values()) == 3
        assert len(vec.counts) == 9

    def test_feature_in_both_axes_counts_twice(self):
        expl = self._explanation([("brunet",), ("brunet",)])
        vec = category_frequency_vector(expl, self._taxonomy())
        assert vec.as_dict()["lexical complexity and richness"] == 2

    def test_empty_top_lists(self):
        expl = self._explanation([(), ()])
        vec = category_frequency_vector(expl, self._taxonomy())
        assert vec.counts.sum() == 0

    def test_uncategorized_feature(self):
        expl = self._explanation([("mystery",)])
        with pytest.raises(ValueError, match="uncategorized feature: mystery"):
            category_frequency_vector(expl, self._taxonomy())

    def test_full_lists_sum(self):
        matrix_names = tuple(CATEGORIES)
        # one feature per category, top_m=2 over 2 axes with full lists
        from speechcluster.explain import AxisExplanation, LocalExplanation

        tax = CategoryTaxonomy(mapping={c: c for c in CATEGORIES})
        expl = LocalExplanation(
            instance_id="s0",
            neighborhood_ids=("s0",),
            per_axis=(
                AxisExplanation(weights=np.ones(9), r2=1.0, intercept=0.0),
                AxisExplanation(weights=np.ones(9), r2=1.0, intercept=0.0),
            ),
            top_features=(("acoustic", "sentiment"), ("coherence", "sentiment")),
            feature_names=matrix_names,
        )
        vec = category_frequency_vector(expl, tax)
        assert vec.counts.sum() == 2 * 2
