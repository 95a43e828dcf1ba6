import json
import os

import pytest

from utils.config import CONFIG_FILE, Config, RunConfig, default_threads
from utils.errors import ConfigError


def write_config(data) -> None:
    with open(CONFIG_FILE, "w") as f:
        f.write(data if isinstance(data, str) else json.dumps(data))


def test_defaults():
    run = Config().run
    assert run == RunConfig(threads=default_threads())
    assert run.radius == 4096
    assert run.output == "text"
    assert run.archive_path is None


def test_singleton():
    assert Config() is Config()
    first = Config()
    Config.reset()
    assert Config() is not first


def test_file_layer_ignores_unknown_keys():
    write_config({"radius": 64, "output": "json", "bogus": 1})
    run = Config().run
    assert run.radius == 64
    assert run.output == "json"


def test_environment_beats_file(monkeypatch):
    write_config({"radius": 64, "quadrature_tol": 1e-4})
    monkeypatch.setenv("K3ML_RADIUS", "128")
    monkeypatch.setenv("K3ML_LOG_LEVEL", "debug")
    run = Config().run
    assert run.radius == 128
    assert run.quadrature_tol == 1e-4
    assert run.log_level == "DEBUG"


def test_overrides_beat_environment(monkeypatch):
    monkeypatch.setenv("K3ML_RADIUS", "128")
    config = Config()
    run = config.apply_overrides(radius=256, output=None)
    assert run.radius == 256
    assert run.output == "text"
    assert config.run is run


def test_archive_path_is_absolute(tmp_path):
    run = Config().apply_overrides(archive_path="runs.db")
    assert os.path.isabs(run.archive_path)
    assert run.archive_path == str(tmp_path / "runs.db")


@pytest.mark.parametrize(
    "bad",
    [
        {"radius": 0},
        {"threads": True},
        {"n_max": 2.0},
        {"quadrature_tol": 1.0},
        {"quadrature_tol": 0},
        {"output": "xml"},
        {"log_level": "LOUD"},
    ],
)
def test_run_config_validation(bad):
    with pytest.raises(ConfigError):
        RunConfig(**bad)


@pytest.mark.parametrize("content", ["{not json", "[1, 2]", '{"radius": 2.5}', '{"radius": "wide"}'])
def test_bad_config_file(content):
    write_config(content)
    with pytest.raises(ConfigError):
        Config()


def test_bad_environment_value(monkeypatch):
    monkeypatch.setenv("K3ML_N_MAX", "lots")
    with pytest.raises(ConfigError):
        Config()


def test_unknown_override():
    with pytest.raises(ConfigError):
        Config().apply_overrides(depth=3)


def test_save_and_reload():
    config = Config()
    config.apply_overrides(radius=512, output="csv", log_file="k3ml.log")
    config.save_config()
    with open(CONFIG_FILE) as f:
        assert "log_file" not in json.load(f)
    Config.reset()
    run = Config().run
    assert run.radius == 512
    assert run.output == "csv"
    assert run.log_file is None
