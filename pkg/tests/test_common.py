import json
import logging

import numpy as np
import pytest

from giantwave.cli.handler import main
from giantwave.common.constants import EXIT_CONFIG, EXIT_IO, EXIT_NUMERIC, EXIT_OK
from giantwave.common.errors import (
    GiantWaveError,
    HistoryTooShort,
    NoConvergence,
    OutputError,
    StepTooCoarse,
    ValidationError,
    handle_errors,
)
from giantwave.common.logger import get_logger, log, set_level
from giantwave.common.utility_helpers import config_hash, json_dumps, load_json_file, require_fields, write_csv


def test_error_status_codes():
    assert ValidationError("bad").status == EXIT_CONFIG
    assert StepTooCoarse(10, 50).status == EXIT_CONFIG
    assert HistoryTooShort(t=5.0, horizon=4.0).status == EXIT_CONFIG
    assert NoConvergence("stuck").status == EXIT_NUMERIC
    assert OutputError("disk").status == EXIT_IO


def test_error_serializes_with_context():
    err = ValidationError("Missing n_points", handler="model", function="from_pi_units", field="n_points")
    body = err.to_dict()["error"]
    assert body["type"] == "ValidationError"
    assert body["handler"] == "model"
    assert body["field"] == "n_points"
    assert json.loads(str(err)) == err.to_dict()


def test_handle_errors_maps_exceptions_to_status():
    @handle_errors("test")
    def fail_with(exc):
        raise exc

    assert fail_with(ValidationError("bad")) == EXIT_CONFIG
    assert fail_with(PermissionError("denied")) == EXIT_IO
    assert fail_with(RuntimeError("boom")) == EXIT_NUMERIC
    assert fail_with.__name__ == "fail_with"


def test_json_dumps_handles_numpy_and_complex():
    payload = {"b": np.float64(1.5), "a": np.arange(3), "z": 1 + 2j, "n": np.int64(4)}
    decoded = json.loads(json_dumps(payload))
    assert decoded == {"a": [0, 1, 2], "b": 1.5, "n": 4, "z": {"re": 1.0, "im": 2.0}}
    assert list(decoded) == sorted(decoded)


def test_config_hash_ignores_key_order():
    assert config_hash({"a": 1, "b": [1, 2]}) == config_hash({"b": [1, 2], "a": 1})
    assert config_hash({"a": 1}) != config_hash({"a": 2})


def test_require_fields_names_first_missing():
    require_fields({"a": 1, "b": 0}, "a", "b")
    with pytest.raises(ValidationError) as exc:
        require_fields({"a": None}, "a", "b")
    assert exc.value.details["field"] == "a"


def test_load_json_file_errors(tmp_path):
    with pytest.raises(ValidationError):
        load_json_file(tmp_path / "missing.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    with pytest.raises(ValidationError):
        load_json_file(broken)
    listed = tmp_path / "list.json"
    listed.write_text("[1, 2]")
    with pytest.raises(ValidationError):
        load_json_file(listed)


def test_write_csv_keeps_full_precision(tmp_path):
    import pandas as pd

    value = 0.1 + 0.2
    path = write_csv(pd.DataFrame({"x": [value]}), tmp_path / "x.csv")
    assert pd.read_csv(path, float_precision="round_trip")["x"][0] == value


def test_base_error_is_exception():
    with pytest.raises(GiantWaveError):
        raise NoConvergence("no roots")


def test_module_loggers_share_one_handler():
    child = get_logger("/src/giantwave/dde/integrator.py")
    assert child.name == "giantwave.integrator"
    assert get_logger() is log
    assert not log.propagate
    assert len(log.handlers) == 1


def test_log_level_flag(capsys):
    level = log.level
    try:
        assert main(["--log-level", "debug", "presets"]) == EXIT_OK
        assert log.level == logging.DEBUG
    finally:
        set_level(logging.getLevelName(level))
