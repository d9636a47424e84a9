from __future__ import annotations

import logging
from pathlib import Path
from typing import List, Optional

import typer
from dotenv import load_dotenv

from models.config import load_protocol_config, load_trial_config
from models.errors import ConfigurationError, InputError, TrialError
from pipeline.config import settings
from pipeline.log import read_trial_log, write_trial_log
from pipeline.paths import DEFAULT_PROTOCOL_PATH

app = typer.Typer(add_completion=False)
logger = logging.getLogger(__name__)


def _setup() -> None:
    load_dotenv()
    logging.basicConfig(level=settings.logging_level, format="%(levelname)s: %(message)s")


@app.command()
def simulate(
    config: Path = typer.Option(..., "--config", exists=True, dir_okay=False, help="Trial YAML file."),
    seed: Optional[int] = typer.Option(None, "--seed"),
    out: Optional[Path] = typer.Option(None, "--out", help="Output directory."),
) -> None:
    """Run one trial and write its log."""
    _setup()
    from pipeline.simulate import run_trial

    try:
        trial = load_trial_config(config)
        if seed is not None:
            trial = trial.model_copy(update={"seed": seed})
        log = run_trial(trial)
    except ConfigurationError as exc:
        raise typer.BadParameter(str(exc)) from exc
    write_trial_log(log, out or trial.output or settings.output_dir)


@app.command()
def block(
    config: Path = typer.Option(DEFAULT_PROTOCOL_PATH, "--config", exists=True, dir_okay=False),
    seed: int = typer.Option(0, "--seed", help="Seed for the trial order."),
    out: Optional[Path] = typer.Option(None, "--out"),
    only: Optional[int] = typer.Option(None, "--block", min=1, help="Run a single block (1-based)."),
    workers: Optional[int] = typer.Option(None, "--workers", min=1),
) -> None:
    """Run the protocol (or one block of it) in seeded random order."""
    _setup()
    from pipeline.block import run_block, run_protocol, write_block

    try:
        protocol = load_protocol_config(config)
        output_dir = out or protocol.defaults.output or settings.output_dir
        if only is None:
            results = run_protocol(protocol, seed, max_workers=workers)
        else:
            blocks = protocol.trial_configs()
            if only > len(blocks):
                raise typer.BadParameter(f"Protocol has {len(blocks)} blocks")
            results = [run_block(blocks[only - 1], seed, block_index=only, max_workers=workers)]
    except ConfigurationError as exc:
        raise typer.BadParameter(str(exc)) from exc
    except TrialError as exc:
        logger.error("%s", exc)
        raise typer.Exit(code=1) from exc
    for result in results:
        write_block(result, output_dir)


@app.command()
def analyze(
    logs: List[Path] = typer.Argument(None, help="Trial log files or stems."),
    questionnaire: Optional[Path] = typer.Option(None, "--questionnaire", exists=True, dir_okay=False),
    pre_post: Optional[Path] = typer.Option(None, "--pre-post", exists=True, dir_okay=False),
    out: Path = typer.Option(Path("analysis"), "--out"),
) -> None:
    """Trial summaries from logs and study metrics from questionnaire CSVs."""
    _setup()
    from analysis.ingest import read_pre_post, read_questionnaire
    from analysis.report import questionnaire_report, trial_report

    if not logs and questionnaire is None:
        raise typer.BadParameter("Give trial logs, --questionnaire, or both")
    try:
        if logs:
            trial_report([read_trial_log(p) for p in _unique_stems(logs)], out)
        if questionnaire is not None:
            table = read_questionnaire(questionnaire)
            extra = read_pre_post(pre_post) if pre_post is not None else None
            questionnaire_report(table, out, pre_post=extra)
    except InputError as exc:
        raise typer.BadParameter(str(exc)) from exc


@app.command()
def plot(
    logs: List[Path] = typer.Argument(None, help="Trial log files or stems."),
    questionnaire: Optional[Path] = typer.Option(None, "--questionnaire", exists=True, dir_okay=False),
    out: Path = typer.Option(Path("figures"), "--out"),
) -> None:
    """Render trial and questionnaire figures."""
    _setup()
    from analysis.ingest import read_questionnaire
    from analysis.likert import likert_summary
    from analysis.plot import plot_block_weights, plot_likert, plot_preference, plot_trials
    from analysis.report import block_weights
    from analysis.votes import preference_scores

    try:
        if logs:
            plot_trials([read_trial_log(p) for p in _unique_stems(logs)], out)
        if questionnaire is not None:
            table = read_questionnaire(questionnaire)
            plot_preference(preference_scores(table), out / "preference.png")
            plot_block_weights(block_weights(table), out / "block_weights.png")
            plot_likert(likert_summary(table), out / "likert.png")
    except InputError as exc:
        raise typer.BadParameter(str(exc)) from exc


def _unique_stems(paths: List[Path]) -> List[Path]:
    """Collapse ``x.ticks.csv`` / ``x.events.jsonl`` / ``x.meta.json`` to one entry per log."""
    seen: dict[str, Path] = {}
    for path in paths:
        name = path.name
        for suffix in (".ticks.csv", ".events.jsonl", ".meta.json"):
            if name.endswith(suffix):
                name = name[: -len(suffix)]
        seen.setdefault(str(path.with_name(name)), path.with_name(name))
    return list(seen.values())


if __name__ == "__main__":
    app()
