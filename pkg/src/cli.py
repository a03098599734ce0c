#!/usr/bin/env python3
"""
JNDM CLI - operate a democratic journal and simulate its mechanism.

Usage:
    jndm init                                      # Create journal.jnl
    jndm submit --author U1                        # Open a submission
    jndm review --submission S1 --reviewer R1 --vote accept
    jndm decide --now 3                            # Run a decision epoch
    jndm leaderboard --top 5                       # Lead reviewers
    jndm simulate --config sim.json --out run.jnl  # Seeded simulation
"""

import json
import logging
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Callable, Dict, Iterator, List, Optional, TypeVar

import typer
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

# Add src to path
sys.path.insert(0, str(Path(__file__).parent))

from config.config_loader import JndmConfig, generate_sample_config, load_config, load_document
from constants import (
    APP_DESCRIPTION,
    APP_NAME,
    APP_VERSION,
    DEFAULT_LEADERBOARD_SIZE,
    EXIT_DOMAIN_ERROR,
    EXIT_USAGE_ERROR,
    FLOAT_DECIMALS,
    OUTPUT_JSON,
)
from journal.core.errors import InvalidConfigError, JournalError, JournalExistsError
from journal.core.journal import DecisionRecord, Journal
from journal.core.labels import current_labels
from journal.decision.classifier import likelihood_ratio
from journal.decision.config import EngineConfig
from journal.decision.training import TrainingSet, build_training_set
from journal.reputation.precision import PrecisionRecord, lead_reviewers, reviewer_precision
from journal.reputation.pseudo import parse_reviewer_key
from journal.simulator import SimConfig, simulate as run_simulation
from journal.store.journal_file import JournalFile
from journal.store.replay import replay as replay_log, verify as verify_log
from utils.file_io import FileIOError, safe_write_json
from utils.serialization import canonical_json, format_probability, fraction_to_str

app = typer.Typer(help=f"{APP_NAME} - {APP_DESCRIPTION}")

# Global console for human output
console = Console(soft_wrap=True, highlight=False, markup=False)

logger = logging.getLogger(__name__)

T = TypeVar("T")

VOTES = {"accept": 1, "reject": 0, "1": 1, "0": 0}
OPINIONS = {"acceptable": 1, "unacceptable": 0, "1": 1, "0": 0}


# ==============================================================================
# Shared options
# ==============================================================================

def _journal_option() -> Any:
    return typer.Option(None, "--journal", "-j", help="Journal file (default: $JNDM_JOURNAL, then journal.jnl)")


def _format_option() -> Any:
    return typer.Option(None, "--format", "-f", help="Output format: 'human' or 'json'")


def _verbose_option() -> Any:
    return typer.Option(False, "--verbose", "-v", help="Debug logging")


def _now_option() -> Any:
    return typer.Option(None, "--now", help="Current epoch (default: the journal's current epoch)")


def _setup_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


def _fail(code: str, message: str, exit_code: int, output_format: Optional[str]) -> None:
    logger.error(f"{code}: {message}")
    if output_format == OUTPUT_JSON:
        typer.echo(json.dumps({"error": code, "message": message}), err=True)
    else:
        typer.echo(f"error: {code}: {message}", err=True)
    raise typer.Exit(exit_code)


@contextmanager
def _handle_errors(output_format: Optional[str]) -> Iterator[None]:
    """Map domain errors to a one-line message and an exit code."""
    try:
        yield
    except InvalidConfigError as e:
        _fail(e.code, e.message, EXIT_USAGE_ERROR, output_format)
    except JournalError as e:
        _fail(e.code, e.message, EXIT_DOMAIN_ERROR, output_format)
    except FileIOError as e:
        _fail("IO_ERROR", str(e), EXIT_DOMAIN_ERROR, output_format)


def _settings(journal: Optional[Path], output_format: Optional[str], verbose: bool, **engine: Any) -> JndmConfig:
    _setup_logging(verbose)
    return load_config(journal_path=journal, output_format=output_format, **engine)


def _emit_json(data: Any) -> None:
    typer.echo(json.dumps(data, ensure_ascii=False, sort_keys=True))


def _mutate(settings: JndmConfig, now: Optional[int], action: Callable[[Journal, int], T]) -> T:
    """
    Load the journal under its lock, run one operation and append its events.

    Nothing is written unless the operation succeeds.
    """
    journal_file = JournalFile(settings.journal_path)
    with journal_file.lock():
        journal = Journal.from_log(journal_file.load(), settings.engine)
        start = len(journal.log)
        result = action(journal, journal.state.epoch if now is None else now)
        journal_file.append(journal.log.since(start))
    return result


def _load(settings: JndmConfig) -> Journal:
    return Journal.from_log(JournalFile(settings.journal_path).load(), settings.engine)


def _binary(value: str, choices: Dict[str, int], name: str) -> int:
    try:
        return choices[value.lower()]
    except KeyError:
        raise typer.BadParameter(f"{name} must be one of: {', '.join(choices)}") from None


# ==============================================================================
# Journal lifecycle
# ==============================================================================

@app.command()
def init(
    journal: Optional[Path] = _journal_option(),
    output_format: Optional[str] = _format_option(),
    verbose: bool = _verbose_option(),
) -> None:
    """Create an empty journal file."""
    with _handle_errors(output_format):
        settings = _settings(journal, output_format, verbose)
        JournalFile(settings.journal_path).create()
        if settings.output_format == OUTPUT_JSON:
            _emit_json({"journal": str(settings.journal_path)})
        else:
            console.print(f"Initialized empty journal {settings.journal_path}")


@app.command()
def register(
    account: str = typer.Option(..., "--account", "-a", help="Account id"),
    now: Optional[int] = _now_option(),
    journal: Optional[Path] = _journal_option(),
    output_format: Optional[str] = _format_option(),
    verbose: bool = _verbose_option(),
) -> None:
    """Register an account (authors, reviewers and readers all need one)."""
    with _handle_errors(output_format):
        settings = _settings(journal, output_format, verbose)
        _mutate(settings, now, lambda j, t: j.register_account(account, t))
        if settings.output_format == OUTPUT_JSON:
            _emit_json({"account": account})
        else:
            console.print(f"Registered {account}")


@app.command()
def submit(
    author: str = typer.Option(..., "--author", "-a", help="Author account"),
    url: Optional[str] = typer.Option(None, "--url", help="Where the article lives"),
    review_window: Optional[int] = typer.Option(None, "--review-window", help="Epochs until the decision"),
    now: Optional[int] = _now_option(),
    journal: Optional[Path] = _journal_option(),
    output_format: Optional[str] = _format_option(),
    verbose: bool = _verbose_option(),
) -> None:
    """Submit an article for review."""
    with _handle_errors(output_format):
        settings = _settings(journal, output_format, verbose, review_window=review_window)

        def action(j: Journal, t: int) -> Any:
            submission_id = j.submit_article(author, t, url=url)
            return j.state.submissions[submission_id]

        submission = _mutate(settings, now, action)
        if settings.output_format == OUTPUT_JSON:
            _emit_json({"submission": submission.id, "decision_due_at": submission.decision_due_at})
        else:
            console.print(f"{submission.id} submitted, decision due at epoch {submission.decision_due_at}")


@app.command()
def resubmit(
    submission: str = typer.Option(..., "--submission", "-s", help="Submission rejected without prejudice"),
    now: Optional[int] = _now_option(),
    journal: Optional[Path] = _journal_option(),
    output_format: Optional[str] = _format_option(),
    verbose: bool = _verbose_option(),
) -> None:
    """Resubmit a submission that was rejected for lack of reviews."""
    with _handle_errors(output_format):
        settings = _settings(journal, output_format, verbose)

        def action(j: Journal, t: int) -> Any:
            return j.state.submissions[j.resubmit_article(submission, t)]

        created = _mutate(settings, now, action)
        if settings.output_format == OUTPUT_JSON:
            _emit_json({
                "submission": created.id,
                "predecessor": submission,
                "decision_due_at": created.decision_due_at,
            })
        else:
            console.print(
                f"{created.id} resubmits {submission}, decision due at epoch {created.decision_due_at}"
            )


@app.command()
def review(
    submission: str = typer.Option(..., "--submission", "-s", help="Submission id"),
    reviewer: str = typer.Option(..., "--reviewer", "-r", help="Reviewer account"),
    vote: Optional[str] = typer.Option(None, "--vote", help="accept or reject"),
    withdraw: bool = typer.Option(False, "--withdraw", help="Withdraw the reviewer's vote"),
    now: Optional[int] = _now_option(),
    journal: Optional[Path] = _journal_option(),
    output_format: Optional[str] = _format_option(),
    verbose: bool = _verbose_option(),
) -> None:
    """Record, replace or withdraw a review on an open submission."""
    if withdraw == (vote is not None):
        raise typer.BadParameter("give exactly one of --vote or --withdraw")
    value = None if withdraw else _binary(vote, VOTES, "--vote")

    with _handle_errors(output_format):
        settings = _settings(journal, output_format, verbose)
        if withdraw:
            _mutate(settings, now, lambda j, t: j.withdraw_review(submission, reviewer, t))
        else:
            _mutate(settings, now, lambda j, t: j.record_review(submission, reviewer, value, t))

        if settings.output_format == OUTPUT_JSON:
            _emit_json({"submission": submission, "reviewer": reviewer, "vote": value})
        elif withdraw:
            console.print(f"{reviewer} withdrew their review of {submission}")
        else:
            console.print(f"{reviewer} voted {'accept' if value else 'reject'} on {submission}")


@app.command()
def rate(
    article: str = typer.Option(..., "--article", "-a", help="Published article id"),
    reader: str = typer.Option(..., "--reader", "-r", help="Reader account"),
    opinion: str = typer.Option(..., "--opinion", help="acceptable or unacceptable"),
    now: Optional[int] = _now_option(),
    journal: Optional[Path] = _journal_option(),
    output_format: Optional[str] = _format_option(),
    verbose: bool = _verbose_option(),
) -> None:
    """Record or replace a reader's opinion of a published article."""
    value = _binary(opinion, OPINIONS, "--opinion")
    with _handle_errors(output_format):
        settings = _settings(journal, output_format, verbose)
        stored = _mutate(settings, now, lambda j, t: j.record_opinion(article, reader, value, t))

        if settings.output_format == OUTPUT_JSON:
            _emit_json({
                "article": article,
                "reader": reader,
                "opinion": value,
                "inconsistent": stored.inconsistent,
            })
        else:
            console.print(f"{reader} rated {article} {'acceptable' if value else 'unacceptable'}")
            if stored.inconsistent:
                console.print(f"warning: {reader} reviewed this article and voted the other way")


@app.command()
def queue(
    journal: Optional[Path] = _journal_option(),
    output_format: Optional[str] = _format_option(),
    verbose: bool = _verbose_option(),
) -> None:
    """List open submissions, closest to their decision first."""
    with _handle_errors(output_format):
        settings = _settings(journal, output_format, verbose)
        loaded = _load(settings)
        state = loaded.state
        entries = [
            {
                "submission": sid,
                "author": state.submissions[sid].author,
                "decision_due_at": state.submissions[sid].decision_due_at,
                "reviews": len(state.live_reviews(sid)),
            }
            for sid in loaded.review_queue()
        ]

        if settings.output_format == OUTPUT_JSON:
            _emit_json({"epoch": state.epoch, "queue": entries})
            return
        if not entries:
            console.print("No open submissions")
            return
        table = Table(title=f"Review queue (epoch {state.epoch})")
        for column in ("Submission", "Author", "Due", "Reviews"):
            table.add_column(column)
        for entry in entries:
            table.add_row(entry["submission"], entry["author"], str(entry["decision_due_at"]), str(entry["reviews"]))
        console.print(table)


def _factor_rows(record: DecisionRecord, training: TrainingSet, config: EngineConfig) -> List[Dict[str, Any]]:
    rows = []
    for factor in record.posterior.factors if record.posterior else ():
        ratio = likelihood_ratio(training, factor.reviewer, factor.vote, config)
        rows.append({
            "reviewer": str(factor.reviewer),
            "vote": factor.vote,
            "given_acceptable": fraction_to_str(factor.given_acceptable),
            "given_unacceptable": fraction_to_str(factor.given_unacceptable),
            "likelihood_ratio": fraction_to_str(ratio) if ratio is not None else None,
        })
    return rows


def _decision_json(record: DecisionRecord) -> Dict[str, Any]:
    posterior = record.posterior
    return {
        "submission": record.submission,
        "decision": record.decision,
        "status": record.status.value,
        "basis": record.basis.value,
        "article": record.article,
        "review_count": record.review_count,
        "posterior": fraction_to_str(posterior.exact) if posterior else None,
        "posterior_float": round(posterior.p_acceptable, 12) if posterior else None,
        "prior": fraction_to_str(posterior.prior) if posterior else None,
        "eligible": list(record.eligible_reviewers),
        "training_digest": record.training_digest,
        "degenerate": record.degenerate,
    }


@app.command()
def decide(
    now: Optional[int] = _now_option(),
    smoothing: Optional[str] = typer.Option(None, "--smoothing", help="frequency, paper-laplace or lidstone"),
    lidstone_lambda: Optional[str] = typer.Option(None, "--lambda", help="Lidstone lambda (e.g. 1/2)"),
    prior_mode: Optional[str] = typer.Option(None, "--prior-mode", help="frequency or smoothed"),
    threshold: Optional[str] = typer.Option(None, "--threshold", help="Publish iff posterior > threshold"),
    min_reviews: Optional[int] = typer.Option(None, "--min-reviews", help="Reviews needed for a decision"),
    min_prior_reviews: Optional[int] = typer.Option(None, "--min-prior-reviews", help="Reviewer eligibility"),
    pseudo_reviewers: Optional[bool] = typer.Option(None, "--pseudo-reviewers/--no-pseudo-reviewers"),
    cold_start: Optional[str] = typer.Option(None, "--cold-start", help="prior or review-majority"),
    explain: bool = typer.Option(False, "--explain", help="Show each reviewer's factors"),
    journal: Optional[Path] = _journal_option(),
    output_format: Optional[str] = _format_option(),
    verbose: bool = _verbose_option(),
) -> None:
    """Run a decision epoch: relabel, retrain and decide every due submission."""
    with _handle_errors(output_format):
        settings = _settings(
            journal, output_format, verbose,
            smoothing=smoothing,
            lidstone_lambda=lidstone_lambda,
            prior_mode=prior_mode,
            threshold=threshold,
            min_reviews=min_reviews,
            min_prior_reviews=min_prior_reviews,
            pseudo_reviewers=pseudo_reviewers,
            cold_start=cold_start,
        )
        config = settings.engine
        captured: Dict[str, Any] = {}

        def action(j: Journal, t: int) -> List[DecisionRecord]:
            captured["training"] = build_training_set(j.state, config.pseudo_reviewers)
            captured["now"] = t
            return j.run_decision_epoch(t, config)

        records = _mutate(settings, now, action)
        training = captured["training"]

        if settings.output_format == OUTPUT_JSON:
            decisions = []
            for record in records:
                entry = _decision_json(record)
                if explain:
                    entry["factors"] = _factor_rows(record, training, config)
                decisions.append(entry)
            _emit_json({"now": captured["now"], "decisions": decisions})
            return

        if not records:
            console.print(f"Epoch {captured['now']}: no submissions due")
        for record in records:
            line = f"{record.submission}: {record.decision}"
            if record.article:
                line += f" as {record.article}"
            line += f" (basis {record.basis.value}, {record.review_count} reviews"
            if record.posterior is not None:
                line += f", posterior {fraction_to_str(record.posterior.exact)} "
                line += f"({record.posterior.p_acceptable:.{FLOAT_DECIMALS}f})"
            line += ")"
            console.print(line)
            if explain and record.posterior is not None:
                console.print(f"  prior {format_probability(record.posterior.prior, FLOAT_DECIMALS)}")
                for row in _factor_rows(record, training, config):
                    console.print(
                        f"  {row['reviewer']} vote {row['vote']}: "
                        f"P(r|acc)={row['given_acceptable']} P(r|unacc)={row['given_unacceptable']} "
                        f"ratio={row['likelihood_ratio'] or 'undefined'}"
                    )


# ==============================================================================
# Reputation
# ==============================================================================

def _precision_json(key: Any, record: PrecisionRecord) -> Dict[str, Any]:
    return {
        "reviewer": str(key),
        "tp": record.tp,
        "fp": record.fp,
        "rated": record.rated,
        "precision": fraction_to_str(record.precision) if record.precision is not None else None,
    }


@app.command()
def leaderboard(
    top: int = typer.Option(DEFAULT_LEADERBOARD_SIZE, "--top", "-k", help="Number of reviewers"),
    min_rated: Optional[int] = typer.Option(None, "--min-rated", help="Rated accepts needed to be listed"),
    pseudo_reviewers: Optional[bool] = typer.Option(None, "--pseudo-reviewers/--no-pseudo-reviewers"),
    journal: Optional[Path] = _journal_option(),
    output_format: Optional[str] = _format_option(),
    verbose: bool = _verbose_option(),
) -> None:
    """Rank reviewers by the precision of their accept recommendations."""
    with _handle_errors(output_format):
        settings = _settings(
            journal, output_format, verbose, min_rated=min_rated, pseudo_reviewers=pseudo_reviewers,
        )
        state = _load(settings).state
        ranked = lead_reviewers(state, top, settings.engine.min_rated, settings.engine.pseudo_reviewers)

        if settings.output_format == OUTPUT_JSON:
            _emit_json({"leaderboard": [_precision_json(key, record) for key, record in ranked]})
            return
        if not ranked:
            console.print("No reviewer has a rated accept recommendation yet")
            return
        table = Table(title="Lead reviewers")
        for column in ("Rank", "Reviewer", "Precision", "TP", "FP"):
            table.add_column(column)
        for rank, (key, record) in enumerate(ranked, start=1):
            table.add_row(
                str(rank),
                str(key),
                format_probability(record.precision, FLOAT_DECIMALS),
                str(record.tp),
                str(record.fp),
            )
        console.print(table)


@app.command()
def precision(
    reviewer: str = typer.Option(..., "--reviewer", "-r", help="Reviewer id (R1 or R1@self-work)"),
    pseudo_reviewers: Optional[bool] = typer.Option(None, "--pseudo-reviewers/--no-pseudo-reviewers"),
    journal: Optional[Path] = _journal_option(),
    output_format: Optional[str] = _format_option(),
    verbose: bool = _verbose_option(),
) -> None:
    """Show one reviewer's precision."""
    with _handle_errors(output_format):
        settings = _settings(journal, output_format, verbose, pseudo_reviewers=pseudo_reviewers)
        state = _load(settings).state
        key = parse_reviewer_key(reviewer) if settings.engine.pseudo_reviewers else reviewer
        record = reviewer_precision(state, key, settings.engine.pseudo_reviewers)

        if settings.output_format == OUTPUT_JSON:
            _emit_json(_precision_json(key, record))
        elif record.precision is None:
            console.print(f"{key}: precision undefined (no rated accept recommendations)")
        else:
            console.print(f"{key}: precision {format_probability(record.precision, FLOAT_DECIMALS)} (tp={record.tp}, fp={record.fp})")


# ==============================================================================
# Simulation, replay and export
# ==============================================================================

@app.command()
def simulate(
    config_file: Path = typer.Option(..., "--config", "-c", help="Simulation config (JSON or YAML)"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write the event log here"),
    metrics_file: Optional[Path] = typer.Option(None, "--metrics", "-m", help="Write the metrics JSON here"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Override the configured seed"),
    force: bool = typer.Option(False, "--force", help="Overwrite an existing --out journal"),
    output_format: Optional[str] = _format_option(),
    verbose: bool = _verbose_option(),
) -> None:
    """Run a seeded simulation and print the final state digest."""
    with _handle_errors(output_format):
        settings = _settings(None, output_format, verbose)
        sim_config = SimConfig.from_dict(load_document(config_file))
        if seed is not None:
            sim_config = sim_config.with_seed(seed).validate()

        target = JournalFile(out) if out is not None else None
        if target is not None and target.exists() and not force:
            raise JournalExistsError(f"Refusing to overwrite existing journal: {out} (use --force)")

        result = run_simulation(sim_config)
        if target is not None:
            target.write_all(result.log, overwrite=force)
        if metrics_file is not None:
            safe_write_json(metrics_file, result.metrics.to_dict())

        if settings.output_format == OUTPUT_JSON:
            _emit_json({
                "digest": result.digest,
                "events": len(result.log),
                "metrics": result.metrics.to_dict(),
            })
        else:
            console.print(f"{len(result.log)} events, digest {result.digest}")
            for name, value in result.metrics.to_dict().items():
                console.print(f"  {name}: {json.dumps(value, sort_keys=True)}")


@app.command()
def replay(
    verify: bool = typer.Option(False, "--verify", help="Recompute every decision epoch and compare"),
    journal: Optional[Path] = _journal_option(),
    output_format: Optional[str] = _format_option(),
    verbose: bool = _verbose_option(),
) -> None:
    """Rebuild the journal state from its log and print the state digest."""
    with _handle_errors(output_format):
        settings = _settings(journal, output_format, verbose)
        log = JournalFile(settings.journal_path).load()
        digest = verify_log(log) if verify else replay_log(log).digest()

        if settings.output_format == OUTPUT_JSON:
            _emit_json({"digest": digest, "events": len(log), "verified": verify})
        else:
            console.print(digest)


@app.command()
def export(
    journal: Optional[Path] = _journal_option(),
    output_format: Optional[str] = _format_option(),
    verbose: bool = _verbose_option(),
) -> None:
    """Print the canonical journal state."""
    with _handle_errors(output_format):
        settings = _settings(journal, output_format, verbose)
        state = _load(settings).state

        if settings.output_format == OUTPUT_JSON:
            typer.echo(canonical_json({"digest": state.digest(), "state": state.canonical()}))
            return
        labels = current_labels(state)
        console.print(f"digest      {state.digest()}")
        console.print(f"epoch       {state.epoch}")
        console.print(f"accounts    {len(state.accounts)}")
        console.print(f"submissions {len(state.submissions)} ({len(state.open_submissions())} open)")
        console.print(f"articles    {len(state.articles)} ({sum(1 for label in labels.values() if label.is_labeled)} labeled)")


@app.command("config")
def show_config(
    sample: bool = typer.Option(False, "--sample", help="Print a commented sample .jndm.yaml"),
    journal: Optional[Path] = _journal_option(),
    output_format: Optional[str] = _format_option(),
    verbose: bool = _verbose_option(),
) -> None:
    """Show the effective configuration."""
    if sample:
        typer.echo(generate_sample_config(), nl=False)
        return
    with _handle_errors(output_format):
        settings = _settings(journal, output_format, verbose)
        effective = {
            "journal": str(settings.journal_path),
            "format": settings.output_format,
            "engine": settings.engine.to_dict(),
        }
        if settings.output_format == OUTPUT_JSON:
            _emit_json(effective)
        else:
            for key, value in effective.items():
                console.print(f"{key}: {json.dumps(value, sort_keys=True)}")


@app.command()
def version() -> None:
    """Show JNDM version."""
    console.print(f"{APP_NAME} v{APP_VERSION} - {APP_DESCRIPTION}")


def main() -> None:
    """Main entry point."""
    app()


if __name__ == "__main__":
    main()
