from analysis.ingest import read_questionnaire
from analysis.likert import likert_summary
from analysis.plot import plot_block_weights, plot_likert, plot_preference, plot_trials
from analysis.report import block_weights, questionnaire_report, trial_report
from analysis.votes import preference_scores
from pipeline.paths import DATA_DIR
from pipeline.simulate import run_trial


def test_questionnaire_figures_and_tables(tmp_path):
    table = read_questionnaire(DATA_DIR / "questionnaire_example.csv")
    assert plot_preference(preference_scores(table), tmp_path / "pref.png").endswith("pref.png")
    plot_block_weights(block_weights(table), tmp_path / "weights.png")
    plot_likert(likert_summary(table), tmp_path / "likert.png")
    paths = questionnaire_report(table, tmp_path / "tables")
    assert {"preference", "block_weights", "overall_weights", "order_votes", "likert_trials"} <= set(paths)
    for name in ("pref.png", "weights.png", "likert.png"):
        assert (tmp_path / name).stat().st_size > 0


def test_trial_figure_and_summary(short_trial, tmp_path):
    log = run_trial(short_trial("TR", duration=1.0))
    (figure,) = plot_trials([log], tmp_path)
    assert figure.endswith("TR.png")
    summary = trial_report([log], tmp_path)
    assert "peak_torso_yaw_offset" in open(summary).readline()
