"""
Tests loading of configuration files and runner settings.
"""

import json

import pytest

from ..config import RunnerSettings, load_config, resolve_jobs
from ..exceptions import ConfigError
from ..models import AutodocBaseSettings, ExperimentSpec, GrowthConfig, GrowthModelEnum, TrafficRunConfig


def test_load_yaml(tmp_path):
    path = tmp_path / "growth.yaml"
    path.write_text("model: DTVCN\nn0: 6\nT: 40\nrng_seed: 3\n")

    cfg = load_config(str(path), GrowthConfig)
    assert cfg.model is GrowthModelEnum.dtvcn
    assert cfg.final_size == 46


def test_load_json_with_overrides(tmp_path):
    path = tmp_path / "growth.json"
    path.write_text(json.dumps({"model": "ba", "T": 10, "rng_seed": 1}))

    cfg = load_config(str(path), GrowthConfig, overrides={"rng_seed": 9, "T": None})
    assert cfg.rng_seed == 9
    assert cfg.T == 10


def test_load_dict():
    spec = load_config({"experiment": "structure_vs_n", "sizes": [30]}, ExperimentSpec)
    assert spec.sizes == [30]

    with pytest.raises(TypeError):
        load_config(5, ExperimentSpec)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="does not exist"):
        load_config(str(tmp_path / "nope.yaml"), GrowthConfig)


def test_unparsable_file(tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text("model: ba\nT: [1, 2\n")

    with pytest.raises(ConfigError) as exc:
        load_config(str(path), GrowthConfig)
    assert len(exc.value.diagnostics) == 1
    assert exc.value.diagnostics[0].startswith(f"{path}:")


def test_not_a_mapping(tmp_path):
    path = tmp_path / "list.yaml"
    path.write_text("- 1\n- 2\n")
    with pytest.raises(ConfigError, match="key-value document"):
        load_config(str(path), GrowthConfig)


def test_invalid_values_point_at_lines(tmp_path):
    path = tmp_path / "growth.yaml"
    path.write_text("model: tvcn\nn0: 5\nvartheta: 1.5\nunknown_key: 3\n")

    with pytest.raises(ConfigError, match="Invalid GrowthConfig") as exc:
        load_config(str(path), GrowthConfig)

    diagnostics = exc.value.diagnostics
    assert any(d.startswith(f"{path}:3: vartheta:") for d in diagnostics)
    assert any(d.startswith(f"{path}:4: unknown_key:") for d in diagnostics)


def test_cross_field_errors(tmp_path):
    path = tmp_path / "traffic.yaml"
    path.write_text("model: ba\nalpha: 0.1\nbeta: 0.5\nsteps: 100\nwarmup: 50\nwindow: 60\n")
    with pytest.raises(ConfigError, match="exceeds steps"):
        load_config(str(path), TrafficRunConfig)


def test_resolve_jobs(monkeypatch):
    monkeypatch.delenv("TVCNLAB_JOBS", raising=False)
    assert resolve_jobs(None) == 1
    assert resolve_jobs(3) == 3
    with pytest.raises(ConfigError, match="--jobs"):
        resolve_jobs(0)

    monkeypatch.setenv("TVCNLAB_JOBS", "2")
    assert resolve_jobs(5) == 2

    monkeypatch.setenv("TVCNLAB_JOBS", "zero")
    with pytest.raises(ConfigError, match="TVCNLAB_JOBS"):
        resolve_jobs(None)


def test_runner_settings(monkeypatch):
    assert issubclass(RunnerSettings, AutodocBaseSettings)
    assert "jobs" in RunnerSettings.__doc__

    monkeypatch.setenv("TVCNLAB_JOBS", "4")
    assert RunnerSettings().jobs == 4
    monkeypatch.delenv("TVCNLAB_JOBS")
    assert RunnerSettings().jobs is None
