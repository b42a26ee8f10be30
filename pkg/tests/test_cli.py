import json

import pandas as pd
import pytest

from giantwave.cli.experiments import SCAN_COLUMNS, ExperimentKind, ExperimentSpec, GridRange, execute, run, scan
from giantwave.cli.handler import main
from giantwave.cli.presets import PRESET_TABLE_VERSION, PRESETS, get_preset, preset_table
from giantwave.common.constants import EXIT_CONFIG, EXIT_OK
from giantwave.common.errors import ValidationError
from giantwave.dde.trajectory import CSV_COLUMNS
from giantwave.model.config import MultiAtomConfig
from giantwave.spectral.classify import CaseLabel, classify

FAST = ["--steps-per-tau0", "50"]


def read_manifest(out):
    return json.loads((out / "manifest.json").read_text())


# ============================================
# Presets
# ============================================

def test_preset_lookup():
    assert get_preset("FIG2A") is PRESETS["fig2a"]
    with pytest.raises(ValidationError):
        get_preset("fig99")


def test_preset_table_is_serializable():
    table = preset_table()
    assert table["version"] == PRESET_TABLE_VERSION
    names = [p["name"] for p in table["presets"]]
    assert {"fig2a", "fig6b", "fig9b", "fig12d", "fig16b", "fig10h", "fig14d", "fig15"} <= set(names)
    assert all(p["caption"] for p in table["presets"])


def test_captions_carry_printed_parameters():
    assert get_preset("fig2c").caption == "k = 4, omega0*tau0 = 2.6234pi, Gamma*tau0 = 0.05pi"
    vary_ext, vary_dw = get_preset("fig11a"), get_preset("fig11c")
    assert "dw = 0.1Gamma; Gamma_ext = 0.1Gamma and Gamma_ext = 0.2Gamma" in vary_ext.caption
    assert "Gamma_ext = 0.1Gamma; dw = 0.1Gamma and dw = 0.2Gamma" in vary_dw.caption
    assert vary_dw.config.n_points == 6
    assert vary_dw.config.dephasing_ratio == vary_dw.config.gamma_ext_ratio == 0.1


@pytest.mark.parametrize("name, label", [
    ("fig2a", CaseLabel.ONE_MODE),
    ("fig5c", CaseLabel.ONE_MODE),
    ("fig6b", CaseLabel.TWO_MODE),
    ("fig8a", CaseLabel.TWO_MODE),
    ("fig8d", CaseLabel.TWO_MODE),
    ("fig9b", CaseLabel.THREE_MODE),
    ("fig12c", CaseLabel.THREE_MODE),
    ("fig16a", CaseLabel.THREE_MODE),
    ("fig10a", CaseLabel.DECAYING),
    ("fig14a", CaseLabel.DECAYING),
])
def test_preset_case_labels(name, label):
    assert classify(get_preset(name).config).case_label == label


def test_multi_atom_preset():
    preset = get_preset("fig15")
    assert preset.is_multi
    assert isinstance(preset.config, MultiAtomConfig)


# ============================================
# Specs
# ============================================

def test_spec_requires_one_source(tmp_path):
    with pytest.raises(ValidationError):
        ExperimentSpec.create(kind=ExperimentKind.DYNAMICS, out=tmp_path)
    with pytest.raises(ValidationError):
        ExperimentSpec.create(kind=ExperimentKind.DYNAMICS, out=tmp_path, preset="fig2a",
                              config={"n_points": 3, "omega0_tau0_pi": 2.0, "gamma_tau0_pi": 0.05})
    with pytest.raises(ValidationError):
        ExperimentSpec.create(kind=ExperimentKind.BOUND_STATE_SCAN, out=tmp_path)
    with pytest.raises(ValidationError):
        ExperimentSpec.create(kind=ExperimentKind.ENSEMBLE, out=tmp_path, preset="fig14a", n_traj=1)


def test_spec_horizon_in_gamma_units(tmp_path):
    spec = ExperimentSpec.create(kind=ExperimentKind.DYNAMICS, out=tmp_path, preset="fig2a", horizon_gamma_t=10.0)
    config = spec.system_config()
    assert spec.horizon(config.gamma_tau0) == pytest.approx(10.0 / config.gamma_tau0)
    with pytest.raises(ValidationError):
        ExperimentSpec.create(kind=ExperimentKind.DYNAMICS, out=tmp_path, preset="fig15").system_config()


def test_scan_entry_point_checks_kind(tmp_path):
    spec = ExperimentSpec.create(kind=ExperimentKind.POLES, out=tmp_path, preset="fig2a")
    assert scan(spec) == EXIT_CONFIG


# ============================================
# Runs
# ============================================

def test_presets_command(capsys):
    assert main(["presets"]) == EXIT_OK
    out = capsys.readouterr().out
    printed = json.loads(out[out.index("{"):])
    assert printed["version"] == PRESET_TABLE_VERSION


def test_figure_preset_run_is_reproducible(tmp_path):
    first, second = tmp_path / "a", tmp_path / "b"
    for out in (first, second):
        assert main(["run", "fig2a", "--out", str(out), "--horizon-gamma-t", "3", *FAST]) == EXIT_OK

    for name in ("trajectory.csv", "modes.json", "plateau.json"):
        assert (first / name).read_bytes() == (second / name).read_bytes()

    manifest = read_manifest(first)
    assert manifest["status"] == EXIT_OK
    assert manifest["kind"] == "FigurePreset"
    assert manifest["preset"] == "fig2a"
    assert manifest["config_hash"] == read_manifest(second)["config_hash"]
    assert set(manifest["artifacts"]) == {"trajectory.csv", "modes.json", "plateau.json"}
    assert {"numpy", "scipy", "pandas", "pydantic"} <= set(manifest["libraries"])

    frame = pd.read_csv(first / "trajectory.csv")
    assert [c for c in frame.columns if c != "gamma_t"] == CSV_COLUMNS
    assert frame["t_over_tau0"].iloc[0] == 0.0
    assert json.loads((first / "modes.json").read_text())["case_label"] == "OneMode"


def test_dynamics_from_config_file(tmp_path, config_file):
    path = config_file({"n_points": 2, "omega0_tau0_pi": 1.0, "gamma_tau0_pi": 0.1, "reflectivity": 0.9})
    out = tmp_path / "dyn"
    code = main(["run", "dynamics", "--config", str(path), "--out", str(out), "--horizon-gamma-t", "2",
                 "--stride", "5", *FAST])
    assert code == EXIT_OK
    assert len(pd.read_csv(out / "trajectory.csv")) > 1
    assert read_manifest(out)["spec"]["config"]["reflectivity"] == 0.9


def test_seed_changes_dephased_dynamics(tmp_path):
    outs = []
    for seed in ("1", "2"):
        out = tmp_path / seed
        assert main(["run", "dynamics", "--preset", "fig14a", "--out", str(out), "--seed", seed,
                     "--horizon-gamma-t", "2", *FAST]) == EXIT_OK
        outs.append(out / "trajectory.csv")
    assert outs[0].read_bytes() != outs[1].read_bytes()


def test_ensemble_run(tmp_path):
    out = tmp_path / "ens"
    code = main(["run", "ensemble", "--preset", "fig14a", "--out", str(out), "--ntraj", "6",
                 "--horizon-gamma-t", "2", "--stride", "10", *FAST])
    assert code == EXIT_OK
    frame = pd.read_csv(out / "ensemble.csv")
    assert {"t_over_tau0", "mean_abs2", "stderr"} <= set(frame.columns)
    plateau = json.loads((out / "plateau.json").read_text())
    assert plateau["n_traj"] == 6


def test_poles_run(tmp_path):
    out = tmp_path / "poles"
    assert main(["run", "poles", "--preset", "fig2c", "--out", str(out)]) == EXIT_OK
    poles = json.loads((out / "poles.json").read_text())["poles"]
    assert all(p["residual"] < 1e-10 for p in poles)
    assert any(abs(p["omega_tau0_pi"] - 8 / 3) < 1e-6 for p in poles)


def test_field_map_run(tmp_path):
    out = tmp_path / "field"
    code = main(["run", "fieldmap", "--preset", "fig2a", "--out", str(out), "--horizon-gamma-t", "1",
                 "--dx", "0.05", *FAST])
    assert code == EXIT_OK
    meta = json.loads((out / "field_map.json").read_text())
    assert meta["x_grid_over_x0"][-1] == pytest.approx(6.0)
    assert meta["norm_series"][0] == pytest.approx(1.0, abs=1e-12)
    assert len(meta["norm_series"]) == len(meta["t_grid_over_tau0"])
    values = pd.read_csv(out / "field_map.csv").iloc[:, 1:].to_numpy()
    assert (values >= 0).all()


def test_multi_atom_run(tmp_path):
    out = tmp_path / "array"
    assert main(["run", "fig15", "--out", str(out), "--horizon-gamma-t", "1", *FAST]) == EXIT_OK
    frame = pd.read_csv(out / "multi_atom.csv")
    assert list(frame.columns) == ["t_over_tau0", "abs2_q1", "abs2_q2", "abs2_total"]
    assert (frame["abs2_total"] <= 1.0 + 1e-9).all()


def test_scan_resumes_from_chunks(tmp_path):
    out = tmp_path / "scan"
    args = ["scan", "--n-points", "3", "--omega0-pi", "1.9", "2.1", "3", "--gamma-pi", "0.05", "0.05", "1",
            "--chunk-size", "1", "--out", str(out)]
    assert main(args) == EXIT_OK
    chunks = sorted(p.name for p in (out / "scan_chunks").iterdir())
    assert len(chunks) == 3
    table = pd.read_csv(out / "scan.csv")
    assert list(table.columns) == SCAN_COLUMNS
    assert list(table["case_label"]) == ["Decaying", "OneMode", "Decaying"]

    first = (out / "scan.csv").read_bytes()
    assert main(args) == EXIT_OK
    assert (out / "scan.csv").read_bytes() == first


def test_scan_does_not_reuse_chunks_from_another_grid(tmp_path):
    out = tmp_path / "scan"
    for omega in ("1.0", "2.0"):
        args = ["scan", "--n-points", "3", "--omega0-pi", omega, omega, "1", "--gamma-pi", "0.05", "0.05", "1",
                "--out", str(out)]
        assert main(args) == EXIT_OK
    table = pd.read_csv(out / "scan.csv")
    assert list(table["omega0_tau0_pi"]) == [2.0]
    assert len(list((out / "scan_chunks").iterdir())) == 2


@pytest.mark.parametrize("argv", [
    ["run", "nonsense", "--out", "{out}"],
    ["run", "dynamics", "--out", "{out}"],
    ["run", "dynamics", "--config", "{out}/missing.json", "--out", "{out}"],
    ["run", "fig2a", "--out", "{out}", "--steps-per-tau0", "10"],
    ["run", "fig2a", "--preset", "fig2b", "--out", "{out}"],
    ["run", "fig2a"],
    ["scan", "--n-points", "3", "--omega0-pi", "2", "2", "1", "--gamma-pi", "-0.05", "-0.05", "1", "--out", "{out}"],
])
def test_config_errors_exit_two(tmp_path, argv):
    argv = [a.replace("{out}", str(tmp_path / "bad")) for a in argv]
    assert main(argv) == EXIT_CONFIG


def test_failed_run_writes_manifest(tmp_path):
    out = tmp_path / "coarse"
    spec = ExperimentSpec.create(kind=ExperimentKind.DYNAMICS, out=out, preset="fig2a", steps_per_tau0=10)
    assert run(spec) == EXIT_CONFIG
    manifest = read_manifest(out)
    assert manifest["status"] == EXIT_CONFIG
    assert manifest["error"]["type"] == "StepTooCoarse"
    assert manifest["artifacts"] == []


def test_execute_returns_manifest(tmp_path):
    spec = ExperimentSpec.create(
        kind=ExperimentKind.BOUND_STATE_SCAN,
        out=tmp_path / "grid",
        scan_n_points=[2, 3],
        scan_omega0_pi=GridRange(start=1.0, stop=3.0, num=5),
        scan_gamma_pi=GridRange(start=0.05, stop=0.1, num=2),
    )
    manifest = execute(spec)
    assert manifest["artifacts"] == ["scan.csv"]
    assert len(pd.read_csv(tmp_path / "grid" / "scan.csv")) == 2 * 5 * 2
