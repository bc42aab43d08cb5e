"""Configuration-driven orchestration of the full study.

A run executes: preprocess -> four embeddings (grid-tuned where a grid is
configured) -> K-Means elbow + silhouette per method -> cohort selection and
local explanations on the configured embedding -> category frequency vectors ->
Kruskal-Wallis and pairwise Mann-Whitney -> the F / F_d / F - F_d
classification study. Every artifact lands under the output directory and the
whole run is reproducible byte-for-byte from the config and seed.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from . import classify as classify_mod
from .cluster import fit_kmeans, optimal_k_elbow, silhouette_score
from .corpus import (
    CATEGORIES,
    LABELS,
    load_category_map,
    load_matrix,
    preprocess,
    write_matrix_csv,
)
from .dimred import (
    fit_lda,
    fit_pca,
    fit_tsne,
    fit_umap,
    parallel_analysis,
    save_embedding,
    select_informative_components,
    tune_embedding,
)
from .explain import (
    category_frequency_vector,
    explain_local,
    select_explanation_cohort,
)
from .mlp import MlpConfig
from .stats import ALPHA, kruskal_wallis, mann_whitney
from .svgplot import render_elbow_plot, render_embedding_plot, render_explanation_panel

STAGES = ("preprocess", "embed", "cluster", "explain", "stats", "classify", "report")


class ConfigError(ValueError):
    """Invalid configuration or unresolvable inputs (CLI exit code 2)."""


class PipelineStageError(RuntimeError):
    """A stage failed at runtime (CLI exit code 3)."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class PipelineConfig:
    matrix_csv: str = ""
    category_json: str = ""
    seed: int | None = None
    out_dir: str = "out"

    corr_threshold: float = 0.9
    methods: tuple = ("pca", "lda", "tsne", "umap")

    elbow_k_min: int = 2
    elbow_k_max: int = 10
    silhouette_k: int = 4
    kmeans_restarts: int = 10

    pca_components: int = 0  # 0: parallel analysis + loading selection
    pca_mc_reps: int = 100
    pca_percentile: float = 95.0
    pca_loading_threshold: float = 0.4
    lda_components: int = 0  # 0: classes - 1

    tsne_perplexity: float = 30.0
    tsne_iterations: int = 1000
    tsne_grid_perplexity: tuple = ()

    umap_n_neighbors: int = 50
    umap_min_dist: float = 0.1
    umap_epochs: int = 500
    umap_grid_n_neighbors: tuple = ()
    umap_grid_min_dist: tuple = ()

    explain_method: str = "tsne"
    explain_neighborhood: int = 50
    explain_top_m: int = 5
    explain_ridge_lambda: float = 1e-3
    #: "LABEL:CLUSTER[:COUNT[:NAME]]" with CLUSTER an id or "majority".
    cohort_requests: tuple = ("HC:majority:10", "AD:majority:10", "Depr:majority:10")
    #: "GROUP_A|GROUP_B" pairs referencing cohort group names.
    stats_pairs: tuple = ("AD|Depr", "AD|HC", "Depr|HC")

    classify_enabled: bool = True
    classify_n_folds: int = 10
    classify_differentiators: tuple = ()  # empty: data-driven from AD vs Depr
    mlp_hidden: tuple = (100,)
    mlp_learning_rate: float = 1e-3
    mlp_l2: float = 1e-4
    mlp_batch_size: int = 200
    mlp_max_epochs: int = 200

    def validate(self) -> None:
        if self.seed is None:
            raise ConfigError("seed is required (no wall-clock defaults)")
        if not self.matrix_csv:
            raise ConfigError("matrix_csv is required")
        if not Path(self.matrix_csv).exists():
            raise ConfigError(f"matrix file not found: {self.matrix_csv}")
        if not self.category_json:
            raise ConfigError("category_json is required")
        if not Path(self.category_json).exists():
            raise ConfigError(f"category map file not found: {self.category_json}")
        for m in self.methods:
            if m not in ("pca", "lda", "tsne", "umap"):
                raise ConfigError(f"unknown method {m!r}")
        if self.explain_method not in ("tsne", "umap"):
            raise ConfigError("explain_method must be 'tsne' or 'umap'")
        if self.explain_method not in self.methods:
            raise ConfigError(
                f"explain_method {self.explain_method!r} is not among methods"
            )
        if self.elbow_k_max - self.elbow_k_min + 1 < 3:
            raise ConfigError("elbow K range must contain at least 3 values")

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            out[f.name] = list(v) if isinstance(v, tuple) else v
        return out


def parse_flat_config(text: str) -> dict:
    """Parse the flat key = value config syntax.

    Values: quoted strings, bare words, integers, floats, true/false, and
    one-level arrays like ``[5, 30, 50]``.
    """
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        out[key.strip()] = _parse_value(value.strip(), lineno)
    return out


def _parse_value(token: str, lineno: int):
    if token.startswith("[") and token.endswith("]"):
        inner = token[1:-1].strip()
        if not inner:
            return []
        return [_parse_scalar(part.strip()) for part in inner.split(",")]
    return _parse_scalar(token)


def _parse_scalar(token: str):
    if len(token) >= 2 and token[0] == token[-1] and token[0] in "\"'":
        return token[1:-1]
    low = token.lower()
    if low == "true":
        return True
    if low == "false":
        return False
    try:
        return int(token)
    except ValueError:
        pass
    try:
        return float(token)
    except ValueError:
        pass
    return token


def load_config(path, overrides: dict | None = None) -> PipelineConfig:
    """Build a PipelineConfig from a config file plus CLI overrides (flags win)."""
    values = {}
    if path is not None:
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        values.update(parse_flat_config(path.read_text(encoding="utf-8")))
    if overrides:
        values.update({k: v for k, v in overrides.items() if v is not None})

    known = {f.name: f for f in fields(PipelineConfig)}
    kwargs = {}
    for key, val in values.items():
        if key not in known:
            raise ConfigError(f"unknown config key {key!r}")
        default = known[key].default
        if isinstance(default, tuple) or key in (
            "methods",
            "cohort_requests",
            "stats_pairs",
            "classify_differentiators",
            "mlp_hidden",
            "tsne_grid_perplexity",
            "umap_grid_n_neighbors",
            "umap_grid_min_dist",
        ):
            if isinstance(val, (list, tuple)):
                kwargs[key] = tuple(val)
            else:
                kwargs[key] = (val,)
        else:
            kwargs[key] = val
    return PipelineConfig(**kwargs)


def _parse_cohort_request(token: str) -> tuple:
    parts = str(token).split(":")
    if len(parts) < 2:
        raise ConfigError(
            f"cohort request {token!r} must look like LABEL:CLUSTER[:COUNT[:NAME]]"
        )
    label = parts[0]
    cluster = parts[1]
    count = int(parts[2]) if len(parts) > 2 and parts[2] else 10
    name = parts[3] if len(parts) > 3 else None
    return label, cluster, count, name


class _Manifest:
    def __init__(self, out_dir: Path):
        self.path = out_dir / "manifest.json"
        self.stages = {stage: "pending" for stage in STAGES}

    def mark(self, stage: str, state: str) -> None:
        self.stages[stage] = state
        self.path.write_text(
            json.dumps({"stages": self.stages}, indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )


def run_pipeline(config: PipelineConfig, through: str = "report") -> dict:
    """Run the study up to and including ``through``; returns the report dict."""
    if through not in STAGES:
        raise ConfigError(f"unknown stage {through!r}")
    config.validate()
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "figures").mkdir(exist_ok=True)
    manifest = _Manifest(out_dir)
    last = STAGES.index(through)
    state: dict = {"figures": [], "artifacts": []}

    runners = {
        "preprocess": _stage_preprocess,
        "embed": _stage_embed,
        "cluster": _stage_cluster,
        "explain": _stage_explain,
        "stats": _stage_stats,
        "classify": _stage_classify,
        "report": _stage_report,
    }
    for stage in STAGES[: last + 1]:
        try:
            runners[stage](config, out_dir, state)
        except (ConfigError, PipelineStageError):
            manifest.mark(stage, "failed")
            raise
        except Exception as exc:
            manifest.mark(stage, "failed")
            raise PipelineStageError(stage, exc) from exc
        manifest.mark(stage, "done")
    return state.get("report", {})


def _artifact(state: dict, out_dir: Path, path: Path) -> str:
    rel = str(path.relative_to(out_dir))
    state["artifacts"].append(rel)
    return rel


def _stage_preprocess(config: PipelineConfig, out_dir: Path, state: dict) -> None:
    matrix = load_matrix(config.matrix_csv)
    taxonomy = load_category_map(config.category_json, matrix)
    processed, report = preprocess(matrix, config.corr_threshold)

    state["raw_matrix"] = matrix
    state["taxonomy"] = taxonomy
    state["matrix"] = processed
    state["preprocess_report"] = report

    path = out_dir / "preprocess_report.json"
    payload = report.to_dict()
    payload.update(
        {
            "n_samples": matrix.n_samples,
            "n_features_in": matrix.n_features,
            "n_features_out": processed.n_features,
        }
    )
    path.write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    _artifact(state, out_dir, path)
    csv_path = out_dir / "preprocessed.csv"
    write_matrix_csv(processed, csv_path)
    _artifact(state, out_dir, csv_path)
    state["preprocess_summary"] = payload


def _auto_pca_components(config: PipelineConfig, matrix) -> tuple[int, dict]:
    """The component-count procedure: parallel analysis, then keep only leading
    components with at least one |loading| >= threshold."""
    pa = parallel_analysis(
        matrix,
        mc_reps=config.pca_mc_reps,
        percentile=config.pca_percentile,
        seed=config.seed,
    )
    candidates = max(pa.retained_count, 2)
    candidates = min(candidates, min(matrix.n_samples - 1, matrix.n_features))
    model, _ = fit_pca(matrix, candidates)
    informative = select_informative_components(
        model, candidates, config.pca_loading_threshold
    )
    n_comp = max(len(informative), 2)
    info = {
        "parallel_analysis_retained": pa.retained_count,
        "informative_components": len(informative),
        "n_components": n_comp,
    }
    return n_comp, info


def _stage_embed(config: PipelineConfig, out_dir: Path, state: dict) -> None:
    matrix = state["matrix"]
    embeddings = {}
    notes = {}
    for method in config.methods:
        if method == "pca":
            if config.pca_components > 0:
                n_comp = config.pca_components
                notes[method] = {"n_components": n_comp}
            else:
                n_comp, info = _auto_pca_components(config, matrix)
                notes[method] = info
            _, emb = fit_pca(matrix, n_comp)
        elif method == "lda":
            n_classes = len(set(matrix.labels))
            n_comp = config.lda_components or (n_classes - 1)
            emb = fit_lda(matrix, matrix.labels, n_comp)
            notes[method] = {"n_components": n_comp}
        elif method == "tsne":
            if config.tsne_grid_perplexity:
                result = tune_embedding(
                    matrix,
                    "tsne",
                    {"perplexity": list(config.tsne_grid_perplexity)},
                    k_eval=config.silhouette_k,
                    seed=config.seed,
                )
                emb = result.best_embedding
                notes[method] = {
                    "grid": [
                        {"params": p, "silhouette": s} for p, s in result.scores
                    ],
                    "best": result.best_params,
                }
            else:
                emb = fit_tsne(
                    matrix,
                    perplexity=config.tsne_perplexity,
                    seed=config.seed,
                    iterations=config.tsne_iterations,
                )
                notes[method] = {"perplexity": config.tsne_perplexity}
        else:  # umap
            grid = {}
            if config.umap_grid_n_neighbors:
                grid["n_neighbors"] = list(config.umap_grid_n_neighbors)
            if config.umap_grid_min_dist:
                grid["min_dist"] = list(config.umap_grid_min_dist)
            if grid:
                result = tune_embedding(
                    matrix, "umap", grid, k_eval=config.silhouette_k, seed=config.seed
                )
                emb = result.best_embedding
                notes[method] = {
                    "grid": [
                        {"params": p, "silhouette": s} for p, s in result.scores
                    ],
                    "best": result.best_params,
                }
            else:
                emb = fit_umap(
                    matrix,
                    n_neighbors=config.umap_n_neighbors,
                    min_dist=config.umap_min_dist,
                    seed=config.seed,
                    epochs=config.umap_epochs,
                )
                notes[method] = {
                    "n_neighbors": config.umap_n_neighbors,
                    "min_dist": config.umap_min_dist,
                }
        embeddings[method] = emb
        csv_path = out_dir / f"embedding_{method}.csv"
        save_embedding(emb, csv_path)
        _artifact(state, out_dir, csv_path)
        _artifact(state, out_dir, csv_path.with_suffix(".json"))
    state["embeddings"] = embeddings
    state["embed_notes"] = notes


def _stage_cluster(config: PipelineConfig, out_dir: Path, state: dict) -> None:
    matrix = state["matrix"]
    embeddings = state["embeddings"]
    clustering = {}
    for method, emb in embeddings.items():
        curve = optimal_k_elbow(
            emb,
            range(config.elbow_k_min, config.elbow_k_max + 1),
            seed=config.seed,
            restarts=config.kmeans_restarts,
        )
        assignment = fit_kmeans(
            emb, config.silhouette_k, seed=config.seed, restarts=config.kmeans_restarts
        )
        score = silhouette_score(emb, assignment.labels)
        clustering[method] = {
            "elbow": curve,
            "assignment": assignment,
            "silhouette": score,
        }

        path = out_dir / f"clusters_{method}.csv"
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["sample_id", "cluster"])
            for sid, lab in zip(matrix.sample_ids, assignment.labels):
                writer.writerow([sid, int(lab)])
        _artifact(state, out_dir, path)

        elbow_path = out_dir / f"elbow_{method}.json"
        elbow_path.write_text(
            json.dumps(
                {
                    "k_values": list(curve.k_values),
                    "inertias": list(curve.inertias),
                    "chosen_k": curve.chosen_k,
                },
                indent=2,
                sort_keys=True,
            )
            + "\n",
            encoding="utf-8",
        )
        _artifact(state, out_dir, elbow_path)
    state["clustering"] = clustering


def _resolve_cluster(token, label, assignment, labels) -> int:
    if isinstance(token, int) or (isinstance(token, str) and token.isdigit()):
        return int(token)
    if token == "majority":
        counts = {}
        for lab, cl in zip(labels, assignment.labels):
            if lab == label:
                counts[int(cl)] = counts.get(int(cl), 0) + 1
        if not counts:
            raise ValueError(f"no samples with label {label!r}")
        return max(sorted(counts), key=lambda c: counts[c])
    raise ConfigError(f"cluster must be an id or 'majority', got {token!r}")


def _stage_explain(config: PipelineConfig, out_dir: Path, state: dict) -> None:
    matrix = state["matrix"]
    emb = state["embeddings"][config.explain_method]
    assignment = state["clustering"][config.explain_method]["assignment"]
    taxonomy = state["taxonomy"]

    requests = []
    names = set()
    for token in config.cohort_requests:
        label, cluster_tok, count, name = _parse_cohort_request(token)
        cluster = _resolve_cluster(cluster_tok, label, assignment, matrix.labels)
        if name is None:
            name = label if label not in names else f"{label}_c{cluster}"
        if name in names:
            raise ConfigError(
                f"cohort group name {name!r} repeats; add an explicit :NAME"
            )
        names.add(name)
        requests.append((label, cluster, count, name))

    cohort = select_explanation_cohort(
        assignment, matrix.sample_ids, matrix.labels, requests, seed=config.seed
    )

    explanations = {}
    vectors = {}
    for group in cohort.groups:
        for sid in group.sample_ids:
            expl = explain_local(
                matrix,
                emb,
                sid,
                neighborhood_size=config.explain_neighborhood,
                ridge_lambda=config.explain_ridge_lambda,
                top_m=config.explain_top_m,
            )
            explanations[sid] = expl
            vectors[sid] = category_frequency_vector(expl, taxonomy)

    payload = {
        "method": config.explain_method,
        "groups": [
            {
                "name": g.name,
                "label": g.label,
                "cluster": g.cluster,
                "sample_ids": list(g.sample_ids),
            }
            for g in cohort.groups
        ],
        "explanations": {
            sid: {
                **expl.to_dict(),
                "frequency_vector": vectors[sid].as_dict(),
            }
            for sid, expl in explanations.items()
        },
    }
    path = out_dir / "explanations.json"
    path.write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    _artifact(state, out_dir, path)

    state["cohort"] = cohort
    state["explanations"] = explanations
    state["frequency_vectors"] = vectors


def _stage_stats(config: PipelineConfig, out_dir: Path, state: dict) -> None:
    cohort = state["cohort"]
    vectors = state["frequency_vectors"]

    def group_counts(group, cat_index: int) -> list:
        return [float(vectors[sid].counts[cat_index]) for sid in group.sample_ids]

    overall = {}
    for ci, cat in enumerate(CATEGORIES):
        groups = [group_counts(g, ci) for g in cohort.groups]
        try:
            res = kruskal_wallis(groups)
            overall[cat] = {
                "H": res.statistic,
                "p": res.p_value,
                "significant": res.significant,
            }
        except ValueError as exc:
            overall[cat] = {"error": str(exc)}

    pairs = {}
    for token in config.stats_pairs:
        parts = str(token).split("|")
        if len(parts) != 2:
            raise ConfigError(f"stats pair {token!r} must look like GROUP_A|GROUP_B")
        ga, gb = (cohort.group(p) for p in parts)
        row = {}
        for ci, cat in enumerate(CATEGORIES):
            res = mann_whitney(group_counts(ga, ci), group_counts(gb, ci))
            row[cat] = {
                "U": res.statistic,
                "p": res.p_value,
                "significant": res.significant,
            }
        pairs[f"{parts[0]}_vs_{parts[1]}"] = row

    table3 = {
        "alpha": ALPHA,
        "categories": list(CATEGORIES),
        "overall_kruskal_wallis": overall,
        "pairwise_mann_whitney": pairs,
    }
    path = out_dir / "table3.json"
    path.write_text(
        json.dumps(table3, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    _artifact(state, out_dir, path)
    state["stats_table"] = table3


def _differentiators(config: PipelineConfig, state: dict) -> tuple:
    if config.classify_differentiators:
        return tuple(config.classify_differentiators)
    pairs = state["stats_table"]["pairwise_mann_whitney"]
    cohort = state["cohort"]
    by_label = {}
    for key in pairs:
        a, b = key.split("_vs_")
        by_label[frozenset((cohort.group(a).label, cohort.group(b).label))] = key
    key = by_label.get(frozenset(("AD", "Depr")))
    if key is None:
        raise ValueError(
            "no AD vs Depr pair in stats_pairs; set classify_differentiators"
        )
    cats = [
        cat for cat, cell in pairs[key].items() if cell.get("significant", False)
    ]
    if not cats:
        raise ValueError(
            f"no significant categories in {key}; set classify_differentiators"
        )
    return tuple(cats)


def _stage_classify(config: PipelineConfig, out_dir: Path, state: dict) -> None:
    if not config.classify_enabled:
        state["classification"] = None
        return
    diff = _differentiators(config, state)
    mlp = MlpConfig(
        hidden_layers=tuple(int(h) for h in config.mlp_hidden),
        learning_rate=config.mlp_learning_rate,
        l2=config.mlp_l2,
        batch_size=config.mlp_batch_size,
        max_epochs=config.mlp_max_epochs,
        seed=config.seed,
    )
    report = classify_mod.run_classification_study(
        state["raw_matrix"],
        state["taxonomy"],
        diff,
        mlp=mlp,
        n_folds=config.classify_n_folds,
        seed=config.seed,
    )
    state["classification"] = report
    state["classify_differentiators_used"] = diff

    path = out_dir / "classification.json"
    payload = report.to_dict()
    payload["differentiators"] = list(diff)
    path.write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    _artifact(state, out_dir, path)

    table4 = out_dir / "table4.txt"
    table4.write_text(classify_mod.format_report_table(report), encoding="utf-8")
    _artifact(state, out_dir, table4)


def _stage_report(config: PipelineConfig, out_dir: Path, state: dict) -> None:
    matrix = state["matrix"]
    figures = []

    for method, emb in state["embeddings"].items():
        entry = state["clustering"][method]
        fig_labels = out_dir / "figures" / f"{method}_labels.svg"
        render_embedding_plot(
            emb, matrix.labels, fig_labels, title=f"{method}: diagnosis labels"
        )
        figures.append(str(fig_labels.relative_to(out_dir)))
        fig_clusters = out_dir / "figures" / f"{method}_clusters.svg"
        render_embedding_plot(
            emb,
            entry["assignment"].labels.tolist(),
            fig_clusters,
            title=f"{method}: K-Means clusters (K={config.silhouette_k})",
        )
        figures.append(str(fig_clusters.relative_to(out_dir)))
        fig_elbow = out_dir / "figures" / f"{method}_elbow.svg"
        render_elbow_plot(entry["elbow"], fig_elbow, title=f"{method}: elbow")
        figures.append(str(fig_elbow.relative_to(out_dir)))

    if state.get("cohort") is not None:
        first_group = state["cohort"].groups[0]
        instance = first_group.sample_ids[0]
        fig_expl = out_dir / "figures" / f"explanation_{instance}.svg"
        render_explanation_panel(
            state["explanations"][instance],
            state["embeddings"][config.explain_method],
            fig_expl,
        )
        figures.append(str(fig_expl.relative_to(out_dir)))

    methods_block = {}
    for method, emb in state["embeddings"].items():
        entry = state["clustering"][method]
        diagnostics = {
            k: v for k, v in emb.diagnostics.items() if not isinstance(v, list)
        }
        methods_block[method] = {
            "optimal_k": entry["elbow"].chosen_k,
            "optimal_k_is_4": entry["elbow"].chosen_k == 4,
            "silhouette_k": config.silhouette_k,
            "silhouette": entry["silhouette"],
            "embedding_csv": f"embedding_{method}.csv",
            "hyperparameters": _plain(emb.hyperparameters),
            "diagnostics": _plain(diagnostics),
            "notes": _plain(state["embed_notes"].get(method, {})),
        }

    classification = state.get("classification")
    report = {
        "seed": config.seed,
        "config": _plain(config.to_dict()),
        "preprocess": state["preprocess_summary"],
        "methods": methods_block,
        "stats": state.get("stats_table"),
        "classification": (
            None
            if classification is None
            else {
                "differentiators": list(state["classify_differentiators_used"]),
                **classification.to_dict(),
            }
        ),
        "figures": figures,
        "artifacts": state["artifacts"],
    }
    state["report"] = report

    path = out_dir / "report.json"
    path.write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )

    table2 = out_dir / "table2.txt"
    lines = [
        "Method  Optimal K == 4?  Silhouette (K = {k})".format(k=config.silhouette_k),
        "-" * 46,
    ]
    for method, block in methods_block.items():
        mark = "x" if block["optimal_k_is_4"] else "-"
        lines.append(
            f"{method:<6}  {mark:^15}  {block['silhouette']:.4f}"
        )
    table2.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj
