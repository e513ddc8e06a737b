"""Command line interface.

Subcommands: ingest, derive, interview, react, card, audit, serve,
export. Configuration precedence is flags > VOCP_* environment variables
> --config file > defaults.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .config import ServiceConfig, load_config
from .engine import Engine
from .errors import VocPersonaError
from .reactions import ReactionStimulus


def _build_config(ctx: click.Context, **overrides) -> ServiceConfig:
    root = ctx.obj or {}
    merged = {**root.get("overrides", {}), **overrides}
    return load_config(merged, config_file=root.get("config_file"))


def _engine(ctx: click.Context, **overrides) -> Engine:
    return Engine(_build_config(ctx, **overrides))


class _DomainGroup(click.Group):
    """Maps domain errors to exit code 1 with a stderr diagnostic."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except VocPersonaError as exc:
            raise click.ClickException(f"({exc.code}) {exc.message}") from exc


@click.group(cls=_DomainGroup)
@click.option("--data-dir", type=click.Path(path_type=Path), default=None,
              help="State directory (default ./vocp-data or VOCP_DATA_DIR).")
@click.option("--config", "config_file", type=click.Path(path_type=Path),
              default=None, help="JSON config file.")
@click.pass_context
def main(ctx, data_dir, config_file):
    """Evidence-grounded synthetic personas over voice-of-customer data."""
    ctx.obj = {
        "overrides": {"data_dir": data_dir} if data_dir else {},
        "config_file": config_file,
    }


@main.command()
@click.argument("feed", type=click.Path(path_type=Path))
@click.option("--corpus-id", default=None,
              help="Explicit corpus id (default: content hash).")
@click.option("--collection-method", "collection_methods", multiple=True,
              help="Collection method metadata, repeatable.")
@click.option("--platform", "platforms", multiple=True,
              help="Source platform metadata, repeatable.")
@click.pass_context
def ingest(ctx, feed, corpus_id, collection_methods, platforms):
    """Ingest a JSONL artifact feed."""
    if not feed.exists():
        raise click.ClickException(f"file not found: {feed}")
    engine = _engine(ctx)
    corpus, diagnostics = engine.ingest(
        feed.read_text(encoding="utf-8").splitlines(),
        corpus_id,
        collection_methods=list(collection_methods) or ["unspecified"],
        platforms=list(platforms) or ["unspecified"],
    )
    for diagnostic in diagnostics:
        click.echo(f"skipped {diagnostic}", err=True)
    stats = engine.stats(corpus.corpus_id)
    click.echo(f"corpus {corpus.corpus_id}: {corpus.message_count} artifacts "
               f"from {corpus.author_count} authors "
               f"across {len(stats.channel_counts)} channels")
    click.echo(corpus.corpus_id)


@main.command()
@click.argument("corpus_id")
@click.pass_context
def derive(ctx, corpus_id):
    """Cluster topics and derive persona segments for a corpus."""
    engine = _engine(ctx)
    personas = engine.derive(corpus_id)
    for persona in personas:
        gaps = ", ".join(persona.gaps) if persona.gaps else "none"
        click.echo(f"{persona.persona_id}  {persona.name:<20} "
                   f"messages={persona.message_count:<5} "
                   f"users={persona.user_count:<4} gaps: {gaps}")


def _render_turn(turn) -> str:
    lines = []
    response = turn.response
    if response.kind == "abstained":
        lines.append(f"[abstained] {response.abstain_note}")
    else:
        for claim in response.claims:
            cites = ", ".join(claim.citations)
            lines.append(f"{claim.text}  [{cites}; support {claim.support_score:.2f}]")
    return "\n".join(lines)


@main.command()
@click.argument("persona_id")
@click.option("--session-id", default=None, help="Resume an existing session.")
@click.pass_context
def interview(ctx, persona_id, session_id):
    """Interactive interview REPL; reads questions from stdin."""
    engine = _engine(ctx)
    if session_id:
        session = engine.session(session_id)
    else:
        session = engine.open_session(persona_id, "interview")
    interactive = sys.stdin.isatty()
    if interactive:
        click.echo(f"session {session.session_id} with {persona_id}; "
                   "empty line or EOF ends the interview.")
    while True:
        if interactive:
            click.echo("> ", nl=False)
        line = sys.stdin.readline()
        if not line:
            break
        line = line.strip()
        if not line:
            if interactive:
                break
            continue
        turn = engine.message(session.session_id, line)
        click.echo(_render_turn(turn))
    summary = engine.summary(session.session_id)
    click.echo(f"session {session.session_id}: {len(summary.turns)} turns, "
               f"{len(summary.sources)} distinct sources cited", err=True)


@main.command()
@click.argument("persona_id")
@click.argument("stimulus_file", type=click.Path(path_type=Path))
@click.option("--session-id", default=None, help="Record into this session.")
@click.pass_context
def react(ctx, persona_id, stimulus_file, session_id):
    """Simulate persona reactions to a design stimulus document."""
    if not stimulus_file.exists():
        raise click.ClickException(f"file not found: {stimulus_file}")
    raw = json.loads(stimulus_file.read_text(encoding="utf-8"))
    stimulus = ReactionStimulus(
        kind=raw["kind"], title=raw.get("title", ""), content=raw["content"],
    )
    engine = _engine(ctx)
    if session_id is None:
        session_id = engine.open_session(persona_id, "reaction").session_id
    report = engine.react(session_id, stimulus)
    for facet in report.facets:
        cites = ", ".join(facet.citations) if facet.citations else "-"
        click.echo(f"[{facet.stance:<11}] polarity {facet.polarity:+.2f}  "
                   f"{facet.facet}  ({cites})")
    click.echo(report.overall_note)


@main.command()
@click.argument("persona_id")
@click.option("--format", "fmt", type=click.Choice(["json", "markdown", "md"]),
              default="json")
@click.option("--output", type=click.Path(path_type=Path), default=None,
              help="Write to a file instead of stdout.")
@click.option("--figures-dir", type=click.Path(path_type=Path), default=None,
              help="Also render coverage/volume figures and CSV here.")
@click.pass_context
def card(ctx, persona_id, fmt, output, figures_dir):
    """Render a Persona Provenance Card."""
    engine = _engine(ctx)
    rendered = engine.rendered_card(persona_id, fmt)
    if output:
        output.write_text(rendered)
        click.echo(f"wrote {output}", err=True)
    else:
        click.echo(rendered, nl=False)
    if figures_dir:
        from .figures import render_report_figures

        persona, handle = engine.persona(persona_id)
        built = engine.card(persona_id)
        paths = render_report_figures(built, persona, handle.corpus, figures_dir)
        for path in paths:
            click.echo(f"wrote {path}", err=True)


@main.command()
@click.argument("transcript", type=click.Path(path_type=Path))
@click.option("--corpus-id", default=None,
              help="Corpus to verify against (default: resolve via session).")
@click.pass_context
def audit(ctx, transcript, corpus_id):
    """Re-run grounding verification over a stored session transcript."""
    if not transcript.exists():
        raise click.ClickException(f"file not found: {transcript}")
    engine = _engine(ctx)
    results = engine.audit_transcript(transcript, corpus_id)
    failures = 0
    for turn_index, report in results:
        if report is None:
            click.echo(f"turn {turn_index}: nothing to verify")
            continue
        status = "pass" if report.overall_pass else "FAIL"
        click.echo(f"turn {turn_index}: {status} "
                   f"({len(report.claims)} claims, "
                   f"{report.redacted_count} ungrounded)")
        for claim in report.claims:
            if not claim.grounded:
                failures += 1
                click.echo(f"  ungrounded: {claim.claim_text!r} "
                           f"(support {claim.max_support:.3f})")
    if failures:
        raise click.ClickException(f"{failures} ungrounded claim(s)")


@main.command()
@click.option("--listen", default=None, help="host:port to bind.")
@click.pass_context
def serve(ctx, listen):
    """Run the HTTP gateway."""
    from .service import serve as run_server

    engine = _engine(ctx, listen=listen)
    run_server(engine)


@main.command()
@click.argument("corpus_id")
@click.option("--output", type=click.Path(path_type=Path), default=None)
@click.pass_context
def export(ctx, corpus_id, output):
    """Export a corpus back to the JSONL artifact schema."""
    engine = _engine(ctx)
    lines = "\n".join(engine.export(corpus_id)) + "\n"
    if output:
        output.write_text(lines)
        click.echo(f"wrote {output}", err=True)
    else:
        click.echo(lines, nl=False)


if __name__ == "__main__":
    main()
