"""speechcluster: clustering, local explanation, and feature-set classification
of labeled clinical speech feature matrices."""

from .classify import (
    ClassificationReport,
    FeatureSetSpec,
    FoldResult,
    build_feature_sets,
    grouped_kfold_split,
    run_classification_study,
)
from .cluster import (
    ClusterAssignment,
    ElbowCurve,
    fit_kmeans,
    optimal_k_elbow,
    silhouette_score,
)
from .corpus import (
    CATEGORIES,
    LABELS,
    CategoryTaxonomy,
    FeatureMatrix,
    PreprocessReport,
    load_category_map,
    load_matrix,
    preprocess,
)
from .dimred import (
    Embedding,
    PcaModel,
    fit_lda,
    fit_pca,
    fit_tsne,
    fit_umap,
    parallel_analysis,
    select_informative_components,
    tune_embedding,
)
from .explain import (
    CategoryFrequencyVector,
    ExplanationCohort,
    LocalExplanation,
    category_frequency_vector,
    explain_local,
    select_explanation_cohort,
)
from .mlp import MlpClassifier, MlpConfig
from .pipeline import PipelineConfig, run_pipeline
from .stats import TestResult, kruskal_wallis, mann_whitney, paired_t_test
from .synthgen import SyntheticSpec, generate_cohort

__version__ = "0.1.0"

__all__ = [
    "CATEGORIES",
    "LABELS",
    "CategoryFrequencyVector",
    "CategoryTaxonomy",
    "ClassificationReport",
    "ClusterAssignment",
    "ElbowCurve",
    "Embedding",
    "ExplanationCohort",
    "FeatureMatrix",
    "FeatureSetSpec",
    "FoldResult",
    "LocalExplanation",
    "MlpClassifier",
    "MlpConfig",
    "PcaModel",
    "PipelineConfig",
    "PreprocessReport",
    "SyntheticSpec",
    "TestResult",
    "build_feature_sets",
    "category_frequency_vector",
    "explain_local",
    "fit_kmeans",
    "fit_lda",
    "fit_pca",
    "fit_tsne",
    "fit_umap",
    "generate_cohort",
    "grouped_kfold_split",
    "kruskal_wallis",
    "load_category_map",
    "load_matrix",
    "mann_whitney",
    "optimal_k_elbow",
    "paired_t_test",
    "parallel_analysis",
    "preprocess",
    "run_classification_study",
    "run_pipeline",
    "select_explanation_cohort",
    "select_informative_components",
    "silhouette_score",
    "tune_embedding",
]
