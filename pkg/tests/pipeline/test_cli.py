import yaml
from typer.testing import CliRunner

from pipeline.paths import DATA_DIR, DEFAULT_MODEL_PATH
from pipeline.run import app

runner = CliRunner()


def write_trial(path, **extra):
    data = {"label": "HW", "model": str(DEFAULT_MODEL_PATH), "duration": 1.0, "schedule": {"signals": "HW"}, **extra}
    path.write_text(yaml.safe_dump(data), encoding="utf-8")
    return path


def test_simulate_writes_log(tmp_path):
    config = write_trial(tmp_path / "hw.yaml")
    result = runner.invoke(app, ["simulate", "--config", str(config), "--seed", "2", "--out", str(tmp_path / "out")])
    assert result.exit_code == 0, result.output
    assert (tmp_path / "out" / "HW.ticks.csv").exists()
    assert '"seed": 2' in (tmp_path / "out" / "HW.meta.json").read_text()


def test_simulate_rejects_bad_config(tmp_path):
    config = write_trial(tmp_path / "bad.yaml", timestep=0.003)
    result = runner.invoke(app, ["simulate", "--config", str(config), "--out", str(tmp_path)])
    assert result.exit_code != 0


def test_analyze_questionnaire(tmp_path):
    result = runner.invoke(
        app,
        [
            "analyze",
            "--questionnaire",
            str(DATA_DIR / "questionnaire_example.csv"),
            "--pre-post",
            str(DATA_DIR / "pre_post_example.csv"),
            "--out",
            str(tmp_path),
        ],
    )
    assert result.exit_code == 0, result.output
    for name in ("preference.csv", "block_weights.csv", "likert_trials.csv", "pre_post.json"):
        assert (tmp_path / name).exists()


def test_analyze_needs_input(tmp_path):
    result = runner.invoke(app, ["analyze", "--out", str(tmp_path)])
    assert result.exit_code != 0
