"""Linear (PCA, LDA) and non-linear (t-SNE, UMAP) dimensionality reduction."""

from .base import Embedding, save_embedding
from .lda import fit_lda
from .pca import (
    ParallelAnalysisResult,
    PcaModel,
    fit_pca,
    parallel_analysis,
    select_informative_components,
)
from .tsne import fit_tsne
from .tune import TuneResult, tune_embedding
from .umap import fit_umap

__all__ = [
    "Embedding",
    "ParallelAnalysisResult",
    "PcaModel",
    "TuneResult",
    "fit_lda",
    "fit_pca",
    "fit_tsne",
    "fit_umap",
    "parallel_analysis",
    "save_embedding",
    "select_informative_components",
    "tune_embedding",
]
