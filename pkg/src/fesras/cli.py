"""Command-line interface for the review toolchain.

Verbs: parse, generate, repo {list,add,export}, requirements, validate,
score, compare, serve. File formats are JSON throughout; see README for
examples of each.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import __version__
from .errors import FesrasError, MalformedStoryError
from .linking import KeywordRepository, link
from .model import SecurityProperty, SecuritySpecification, requirements_to_json_doc
from .parsing import DEFAULT_LEXICON, Lexicon, extract, parse_story
from .scoring import (
    AnswerKey,
    ReviewEntry,
    ReviewSubmission,
    parse_timestamp,
    score,
    validate,
)
from .service import DATA_DIR_ENV, create_app, resolve_data_dir
from .technique import ReadingTechnique, ReportForm, generate, render_markdown


def _fail(message: str, code: int = 1) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load_json(path: str | Path) -> dict:
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except FileNotFoundError:
        _fail(f"file not found: {path}")
    except json.JSONDecodeError as exc:
        _fail(f"invalid JSON in {path}: {exc}")


def _load_stories(path: str | Path, strict: bool):
    """Parse a stories file into (story, specifications) pairs."""
    data = _load_json(path)
    parsed = []
    for raw in data.get("stories", []):
        story_id = raw.get("id", f"US{len(parsed) + 1}")
        try:
            story = parse_story(raw["text"], story_id=story_id, strict=strict)
        except MalformedStoryError as exc:
            if strict:
                _fail(str(exc))
            click.echo(f"warning: skipping {story_id}: {exc}", err=True)
            continue
        specs = [
            SecuritySpecification(
                id=spec.get("id", f"SS{index + 1}"),
                story_id=story_id,
                text=spec["text"],
            )
            for index, spec in enumerate(raw.get("specifications", []))
        ]
        parsed.append((story, specs))
    return parsed


def _load_repo(path: str | None) -> KeywordRepository:
    if path is None:
        return KeywordRepository.default()
    try:
        return KeywordRepository.load(path)
    except FileNotFoundError:
        _fail(f"file not found: {path}")
    except FesrasError as exc:
        _fail(str(exc))


def _load_lexicon(path: str | None) -> Lexicon:
    if path is None:
        return DEFAULT_LEXICON
    return Lexicon.load(path)


@click.group()
@click.version_option(version=__version__, prog_name="fesras")
def main() -> None:
    """Review security-related aspects of agile requirements."""


@main.command("parse")
@click.option("--stories", "stories_file", required=True, type=click.Path())
@click.option("--lexicon", "lexicon_file", type=click.Path(), default=None)
@click.option("--lenient", is_flag=True, help="Warn instead of failing on bad stories.")
@click.option("--json", "as_json", is_flag=True, help="Emit machine-readable output.")
def parse_command(stories_file, lexicon_file, lenient, as_json) -> None:
    """Parse stories and show the extracted verbs and nouns."""
    lexicon = _load_lexicon(lexicon_file)
    results = []
    for story, _specs in _load_stories(stories_file, strict=not lenient):
        extraction = extract(story, lexicon)
        results.append({"story": story.to_dict(), "extraction": extraction.to_dict()})
    if as_json:
        click.echo(json.dumps(results, indent=2))
        return
    for item in results:
        story = item["story"]
        extraction = item["extraction"]
        click.echo(
            f"{story['id']}: role={story['role']!r} "
            f"verbs={extraction['verbs']} nouns={extraction['nouns']}"
        )


@main.command("generate")
@click.option("--stories", "stories_file", required=True, type=click.Path())
@click.option("--repo", "repo_file", type=click.Path(), default=None)
@click.option("--lexicon", "lexicon_file", type=click.Path(), default=None)
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--lenient", is_flag=True, help="Warn instead of failing on bad stories.")
def generate_command(stories_file, repo_file, lexicon_file, out_dir, lenient) -> None:
    """Generate a reading technique per story into the output directory."""
    repo = _load_repo(repo_file)
    lexicon = _load_lexicon(lexicon_file)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for story, specs in _load_stories(stories_file, strict=not lenient):
        extraction = extract(story, lexicon)
        linked = link(extraction, repo)
        technique = generate(story, specs, linked)
        technique.save(out / f"{story.id}.technique.json")
        (out / f"{story.id}.technique.md").write_text(
            render_markdown(technique), encoding="utf-8"
        )
        codes = "/".join(p.code for p in linked.ordered_properties())
        flag = " (fallback)" if linked.fallback_applied else ""
        click.echo(f"{story.id}: linked {codes}{flag}, {len(technique.requirements)} requirements")


@main.group("repo")
def repo_group() -> None:
    """Inspect or extend the keyword repository."""


@repo_group.command("list")
@click.option("--repo", "repo_file", type=click.Path(), default=None)
def repo_list(repo_file) -> None:
    repo = _load_repo(repo_file)
    for entry in repo.entries():
        codes = "/".join(sorted(p.code for p in entry.properties))
        click.echo(f"{entry.keyword:<20} {codes:<10} {entry.provenance}")


@repo_group.command("add")
@click.option("--repo", "repo_file", type=click.Path(), default=None)
@click.option("--keyword", required=True)
@click.option(
    "--properties",
    "property_codes",
    required=True,
    help="Comma-separated property codes, e.g. C,IA",
)
@click.option("--out", "out_file", required=True, type=click.Path())
def repo_add(repo_file, keyword, property_codes, out_file) -> None:
    repo = _load_repo(repo_file)
    try:
        properties = {
            SecurityProperty.from_code(code.strip())
            for code in property_codes.split(",")
            if code.strip()
        }
        repo = repo.add(keyword, properties)
    except (FesrasError, ValueError) as exc:
        _fail(str(exc))
    repo.save(out_file)
    click.echo(f"added {keyword!r}; repository written to {out_file}")


@repo_group.command("export")
@click.option("--repo", "repo_file", type=click.Path(), default=None)
@click.option("--out", "out_file", required=True, type=click.Path())
def repo_export(repo_file, out_file) -> None:
    repo = _load_repo(repo_file)
    repo.save(out_file)
    click.echo(f"{len(repo)} entries written to {out_file}")


@main.command("requirements")
@click.option("--out", "out_file", type=click.Path(), default=None)
def requirements_command(out_file) -> None:
    """Export the security requirement catalog as JSON."""
    doc = json.dumps(requirements_to_json_doc(), indent=2)
    if out_file:
        Path(out_file).write_text(doc + "\n", encoding="utf-8")
        click.echo(f"catalog written to {out_file}")
    else:
        click.echo(doc)


def _load_submission(report_file: str, techniques_dir: str) -> ReviewSubmission:
    data = _load_json(report_file)
    entries = []
    for review in data.get("reviews", []):
        story_id = review["story_id"]
        technique_path = Path(techniques_dir) / f"{story_id}.technique.json"
        if not technique_path.exists():
            _fail(f"no technique for {story_id} under {techniques_dir}")
        technique = ReadingTechnique.load(technique_path)
        entries.append(ReviewEntry(technique, ReportForm.from_dict(review["form"])))
    if not entries:
        _fail(f"{report_file} contains no reviews")
    return ReviewSubmission(
        entries=tuple(entries),
        started_at=parse_timestamp(data["started_at"]),
        ended_at=parse_timestamp(data["ended_at"]),
    )


@main.command("validate")
@click.option("--report", "report_file", required=True, type=click.Path())
@click.option("--techniques", "techniques_dir", required=True, type=click.Path())
def validate_command(report_file, techniques_dir) -> None:
    """Check a filled report against its techniques; exit 2 on findings."""
    submission = _load_submission(report_file, techniques_dir)
    findings = validate(submission)
    for finding in findings:
        click.echo(f"{finding.code} [{finding.story_id}]: {finding.message}")
    if findings:
        sys.exit(2)
    click.echo("report is valid")


@main.command("score")
@click.option("--report", "report_file", required=True, type=click.Path())
@click.option("--key", "key_file", required=True, type=click.Path())
@click.option("--techniques", "techniques_dir", required=True, type=click.Path())
@click.option(
    "--lenient",
    is_flag=True,
    help="Score even when validation findings are present.",
)
def score_command(report_file, key_file, techniques_dir, lenient) -> None:
    """Score a filled report against a seeded-defect answer key."""
    submission = _load_submission(report_file, techniques_dir)
    findings = validate(submission)
    if findings and not lenient:
        for finding in findings:
            click.echo(f"{finding.code} [{finding.story_id}]: {finding.message}", err=True)
        sys.exit(2)
    try:
        key = AnswerKey.load(key_file)
        result = score(submission, key)
    except (FesrasError, FileNotFoundError, ValueError) as exc:
        _fail(str(exc))
    click.echo(json.dumps(result.to_dict(), indent=2))


@main.command("compare")
@click.option("--scores", "scores_file", required=True, type=click.Path())
@click.option("--alpha", type=float, default=0.05, show_default=True)
@click.option(
    "--drop-outliers",
    is_flag=True,
    help="Discard inspectors who found less than 10% of the defects.",
)
@click.option("--json", "as_json", is_flag=True, help="Emit machine-readable output.")
def compare_command(scores_file, alpha, drop_outliers, as_json) -> None:
    """Compare two inspector groups per trial on effectiveness and efficiency."""
    from .stats import compare_trials, render_comparison_table

    data = _load_json(scores_file)
    trials = data.get("trials", data)
    try:
        report = compare_trials(trials, alpha=alpha, drop_outliers=drop_outliers)
    except (FesrasError, ValueError, KeyError) as exc:
        _fail(str(exc))
    if as_json:
        click.echo(json.dumps(report, indent=2))
    else:
        click.echo(render_comparison_table(report))


@main.command("serve")
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option(
    "--data",
    "data_dir",
    type=click.Path(),
    default=None,
    help=f"Data directory (default ${DATA_DIR_ENV} or ./fesras-data).",
)
@click.option("--static", "static_dir", type=click.Path(), default=None)
@click.option("--cap-minutes", type=float, default=60.0, show_default=True)
def serve_command(port, host, data_dir, static_dir, cap_minutes) -> None:
    """Run the review session service."""
    import uvicorn

    base = resolve_data_dir(data_dir)
    app = create_app(base, cap_minutes=cap_minutes, static_dir=static_dir)
    click.echo(f"serving on http://{host}:{port} (data: {base})")
    uvicorn.run(app, host=host, port=port, log_level="info")


if __name__ == "__main__":
    main()
