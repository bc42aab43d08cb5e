import json
from pathlib import Path

import numpy as np
import pytest

from speechcluster.cli import main
from speechcluster.pipeline import (
    ConfigError,
    PipelineStageError,
    load_config,
    parse_flat_config,
    run_pipeline,
)

CONFIG_TEMPLATE = """
matrix_csv = "{matrix}"
category_json = "{categories}"
seed = 5
out_dir = "{out}"
elbow_k_min = 2
elbow_k_max = 6
tsne_perplexity = 12.0
tsne_iterations = 300
umap_n_neighbors = 15
umap_epochs = 150
explain_neighborhood = 25
cohort_requests = ["HC:majority:10", "AD:majority:10", "Depr:majority:10"]
stats_pairs = ["AD|Depr", "AD|HC", "Depr|HC"]
classify_differentiators = ["acoustic", "coherence"]
classify_n_folds = 5
mlp_max_epochs = 80
"""


@pytest.fixture(scope="module")
def cohort_dir(tmp_path_factory):
    data = tmp_path_factory.mktemp("data")
    code = main(
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
            "--informative-categories",
            "acoustic",
            "coherence",
        ]
    )
    assert code == 0
    return data


def write_config(tmp_path, cohort_dir, out_name="out", extra="") -> Path:
    cfg = tmp_path / f"config_{out_name}.txt"
    cfg.write_text(
        CONFIG_TEMPLATE.format(
            matrix=cohort_dir / "matrix.csv",
            categories=cohort_dir / "categories.json",
            out=tmp_path / out_name,
        )
        + extra
    )
    return cfg


class TestConfigParsing:
    def test_flat_syntax(self):
        parsed = parse_flat_config(
            '# comment\na = 1\nb = 2.5\nc = "text"\nd = true\ne = [1, 2, 3]\nf = tsne\n'
        )
        assert parsed == {
            "a": 1,
            "b": 2.5,
            "c": "text",
            "d": True,
            "e": [1, 2, 3],
            "f": "tsne",
        }

    def test_unknown_key_rejected(self, tmp_path):
        cfg = tmp_path / "c.txt"
        cfg.write_text("definitely_not_a_key = 1\n")
        with pytest.raises(ConfigError, match="unknown config key"):
            load_config(cfg)

    def test_seed_required(self, tmp_path):
        cfg = tmp_path / "c.txt"
        cfg.write_text('matrix_csv = "x.csv"\ncategory_json = "y.json"\n')
        config = load_config(cfg)
        with pytest.raises(ConfigError, match="seed"):
            config.validate()

    def test_flag_overrides_win(self, tmp_path):
        cfg = tmp_path / "c.txt"
        cfg.write_text("seed = 1\nout_dir = \"a\"\n")
        config = load_config(cfg, {"seed": 9, "out_dir": None})
        assert config.seed == 9
        assert config.out_dir == "a"

    def test_missing_matrix_fails_validation_before_compute(
        self, tmp_path, cohort_dir
    ):
        cfg = write_config(tmp_path, cohort_dir)
        config = load_config(cfg)
        config.matrix_csv = str(tmp_path / "absent.csv")
        with pytest.raises(ConfigError, match="not found"):
            run_pipeline(config)
        assert not (tmp_path / "out" / "report.json").exists()


@pytest.fixture(scope="module")
def run_dir(tmp_path_factory, cohort_dir):
    tmp_path = tmp_path_factory.mktemp("run")
    cfg = write_config(tmp_path, cohort_dir)
    assert main(["--config", str(cfg), "run-all"]) == 0
    return tmp_path / "out"


class TestRunAll:
    def test_report_structure(self, run_dir):
        report = json.loads((run_dir / "report.json").read_text())
        assert set(report["methods"]) == {"pca", "lda", "tsne", "umap"}
        for method, block in report["methods"].items():
            assert -1.0 <= block["silhouette"] <= 1.0
            assert block["optimal_k_is_4"] == (block["optimal_k"] == 4)
        for cell in report["stats"]["pairwise_mann_whitney"]["AD_vs_Depr"].values():
            assert 0.0 <= cell["p"] <= 1.0

    def test_figures_exist(self, run_dir):
        report = json.loads((run_dir / "report.json").read_text())
        assert len(report["figures"]) >= 13
        for fig in report["figures"]:
            assert (run_dir / fig).exists()

    def test_artifacts_exist(self, run_dir):
        report = json.loads((run_dir / "report.json").read_text())
        for artifact in report["artifacts"]:
            assert (run_dir / artifact).exists()
        for name in ("table2.txt", "table3.json", "table4.txt", "manifest.json"):
            assert (run_dir / name).exists()

    def test_manifest_all_done(self, run_dir):
        manifest = json.loads((run_dir / "manifest.json").read_text())
        assert set(manifest["stages"].values()) == {"done"}

    def test_byte_identical_rerun(self, tmp_path_factory, cohort_dir, run_dir):
        first_report = (run_dir / "report.json").read_bytes()
        first_embeddings = {
            m: (run_dir / f"embedding_{m}.csv").read_bytes()
            for m in ("pca", "lda", "tsne", "umap")
        }
        tmp_path = tmp_path_factory.mktemp("rerun")
        cfg_text = (
            run_dir.parent / "config_out.txt"
        ).read_text()
        cfg = tmp_path / "config_out.txt"
        cfg.write_text(cfg_text)
        assert main(["--config", str(cfg), "run-all"]) == 0
        rerun_dir = run_dir  # same out dir as encoded in the config
        assert (rerun_dir / "report.json").read_bytes() == first_report
        for m, blob in first_embeddings.items():
            assert (rerun_dir / f"embedding_{m}.csv").read_bytes() == blob


class TestStagesAndErrors:
    def test_preprocess_only(self, tmp_path, cohort_dir):
        cfg = write_config(tmp_path, cohort_dir, out_name="pre")
        assert main(["--config", str(cfg), "preprocess"]) == 0
        out = tmp_path / "pre"
        assert (out / "preprocess_report.json").exists()
        assert (out / "preprocessed.csv").exists()
        assert not (out / "report.json").exists()
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["stages"]["preprocess"] == "done"
        assert manifest["stages"]["embed"] == "pending"

    def test_stage_error_exit_code_and_manifest(self, tmp_path, cohort_dir):
        # requesting a label that has almost no samples in its majority
        # cluster fails the explain stage after earlier stages succeeded
        cfg = write_config(
            tmp_path,
            cohort_dir,
            out_name="err",
            extra='cohort_requests = ["MCI:0:10"]\nexplain_method = "tsne"\n',
        )
        # make the request impossible: restrict to a cluster with < 5 MCI
        config = load_config(cfg)
        config.cohort_requests = ("MCI:99:10",)
        with pytest.raises(PipelineStageError) as err:
            run_pipeline(config)
        assert err.value.stage == "explain"
        manifest = json.loads(
            (tmp_path / "err" / "manifest.json").read_text()
        )
        assert manifest["stages"]["explain"] == "failed"
        assert manifest["stages"]["cluster"] == "done"

    def test_cli_exit_codes(self, tmp_path):
        assert main(["--config", str(tmp_path / "nope.txt"), "run-all"]) == 2
        cfg = tmp_path / "bad.txt"
        cfg.write_text("seed = 1\n")
        assert main(["--config", str(cfg), "run-all"]) == 2
