import numpy as np
import pytest

from rmkfilter.models.config import (
    GeneratorSpec,
    LinearKernel,
    PolynomialKernel,
    RBFKernel,
    RecursiveKernelConfig,
    StackingConfig,
)
from rmkfilter.models.experiment import BenchConfig, ExperimentConfig
from rmkfilter.models.results import RESULT_COLUMNS, ResultRow, ResultTable, format_params
from rmkfilter.models.series import SeriesDataset, sidecar_path
from rmkfilter.utils.errors import ConfigError, DataFileNotFoundError, SplitError


def test_dataset_save_load(tmp_path, small_dataset):
    path = small_dataset.save(tmp_path / "toy.csv")
    assert sidecar_path(path).exists()

    loaded = SeriesDataset.load(path)
    assert np.array_equal(loaded.x, small_dataset.x)
    assert np.array_equal(loaded.y, small_dataset.y)
    assert loaded.train_range == small_dataset.train_range
    assert loaded.test_range == small_dataset.test_range
    assert loaded.name == "toy"


def test_dataset_load_missing(tmp_path):
    with pytest.raises(DataFileNotFoundError):
        SeriesDataset.load(tmp_path / "nada.csv")


def test_dataset_split_errors():
    with pytest.raises(SplitError):
        SeriesDataset(x=np.zeros(5), y=np.zeros(4), train_end=2, val_end=3)
    with pytest.raises(SplitError):
        SeriesDataset(x=np.zeros(5), y=np.zeros(5), train_end=0, val_end=3)
    with pytest.raises(SplitError):
        SeriesDataset(x=np.zeros(5), y=np.zeros(5), train_end=4, val_end=3)
    data = SeriesDataset(x=np.zeros(5), y=np.zeros(5), train_end=3, val_end=3)
    assert not data.has_validation


def test_kernel_config_roundtrip():
    for base in (RBFKernel(0.7), LinearKernel(), PolynomialKernel(degree=3, offset=0.5)):
        cfg = RecursiveKernelConfig(base=base, taps=4, mu=0.3, embed_len=2)
        assert RecursiveKernelConfig.from_dict(cfg.to_dict()) == cfg


def test_kernel_config_validation():
    with pytest.raises(ConfigError):
        RecursiveKernelConfig(mu=0.0)
    with pytest.raises(ConfigError):
        RecursiveKernelConfig(mu=1.5)
    with pytest.raises(ConfigError):
        RecursiveKernelConfig(taps=0)
    with pytest.raises(ConfigError):
        RBFKernel(sigma=0.0)
    with pytest.raises(ConfigError):
        StackingConfig(mode="elastic")
    with pytest.raises(ConfigError):
        StackingConfig(mode="ridge", lambda2=-1.0)


def test_stacking_config_roundtrip():
    cfg = StackingConfig(mode="fixed", fixed_alpha=(0.5, 0.5))
    assert StackingConfig.from_dict(cfg.to_dict()) == cfg


def test_experiment_yaml_roundtrip(tmp_path):
    cfg = ExperimentConfig(
        generator=GeneratorSpec(task="narendra", n_train=30, n_val=10, n_test=10),
        models=["stacking", "klms"],
        params={"sigma": 0.5, "taps": 3},
        grid={"sigma": [0.5, 1.0]},
        seed=7,
    ).with_overrides()
    path = cfg.save(tmp_path / "exp.yaml")
    loaded = ExperimentConfig.load(path)

    assert loaded.to_dict() == cfg.to_dict()
    assert loaded.generator.seed == 7
    assert loaded.batch_models() == ["stacking"]
    assert loaded.online_models() == ["klms"]


def test_experiment_overrides_seed():
    cfg = ExperimentConfig(generator=GeneratorSpec(task="wiener"), seed=1)
    cfg.with_overrides(seed=42, output_dir="out")
    assert cfg.seed == 42 and cfg.generator.seed == 42
    assert cfg.output_dir == "out"


def test_experiment_requires_single_source():
    with pytest.raises(ConfigError):
        ExperimentConfig().require_source()
    both = ExperimentConfig(generator=GeneratorSpec(task="wiener"), dataset_path="x.csv")
    with pytest.raises(ConfigError):
        both.require_source()


def test_experiment_rejects_unknown_entries(tmp_path):
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"dataset": {"path": "a.csv"}, "modelos": ["stacking"]})
    with pytest.raises(ConfigError):
        ExperimentConfig(models=["svm"])
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"bench": {"sizes": [64, 32]}})

    bad = tmp_path / "bad.yaml"
    bad.write_text("- solo\n- una lista\n")
    with pytest.raises(ConfigError):
        ExperimentConfig.load(bad)
    with pytest.raises(ConfigError):
        ExperimentConfig.load(tmp_path / "missing.yaml")


def test_bench_defaults():
    bench = BenchConfig()
    assert bench.sizes == [256, 512, 1024, 2048]
    assert bench.repetitions == 5


def test_result_table_replaces_rows():
    table = ResultTable()
    table.add(ResultRow("mg", "stacking", -20.0, {"c": 1e-3}))
    table.add(ResultRow("mg", "stacking", -25.0, {"c": 1e-4}))
    table.add(ResultRow("mg", "rbf-embedding", -18.0))

    frame = table.to_frame()
    assert list(frame.columns) == RESULT_COLUMNS
    assert len(frame) == 2
    assert table.get("mg", "stacking").nmse_db == -25.0
    assert table.get("mg", "klms") is None


def test_format_params():
    assert format_params({"taps": 5, "c": 0.001, "base": "rbf"}) == "base=rbf;c=0.001;taps=5"
