"""Voice-of-customer corpus ingestion: parsing, validation, dedup, stats.

Artifacts arrive as line-delimited JSON (one object per line). Records
that fail validation are skipped with a per-line diagnostic rather than
failing the batch, because real VoC feeds are dirty. Duplicates by id are
dropped, first occurrence wins.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Iterable, Iterator, Sequence

from .errors import BadTimestamp, EmptyCorpus, EmptyText, MissingField, VocPersonaError

JSONL_FIELDS = ("id", "author_id", "channel", "created_at", "text",
                "media_transcript", "lang")

_REQUIRED_FIELDS = ("id", "author_id", "channel", "created_at", "text")


def parse_rfc3339(value: str) -> datetime:
    """Parse an RFC 3339 instant into an aware UTC datetime."""
    if not isinstance(value, str):
        raise BadTimestamp(f"timestamp is not a string: {value!r}")
    norm = value.strip()
    # Python 3.10's fromisoformat rejects the Z suffix and lowercase t/z.
    if norm.endswith(("Z", "z")):
        norm = norm[:-1] + "+00:00"
    if len(norm) > 10 and norm[10] in ("t", " "):
        norm = norm[:10] + "T" + norm[11:]
    try:
        parsed = datetime.fromisoformat(norm)
    except ValueError:
        raise BadTimestamp(f"not an RFC 3339 timestamp: {value!r}") from None
    if parsed.tzinfo is None:
        raise BadTimestamp(f"timestamp lacks a UTC offset: {value!r}")
    return parsed.astimezone(timezone.utc)


def format_rfc3339(value: datetime) -> str:
    """Canonical UTC rendering with a Z suffix."""
    value = value.astimezone(timezone.utc)
    if value.microsecond:
        return value.strftime("%Y-%m-%dT%H:%M:%S.%f") + "Z"
    return value.strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass(frozen=True)
class VocArtifact:
    """One evidence item: a post, ticket, review, or transcript."""

    id: str
    author_id: str
    channel: str
    created_at: datetime
    text: str
    media_transcript: str | None = None
    lang: str | None = None

    def retrievable_text(self) -> str:
        """Text plus media transcript; transcripts are evidence on equal footing."""
        if self.media_transcript and self.media_transcript.strip():
            return f"{self.text}\n\n{self.media_transcript.strip()}"
        return self.text

    def to_record(self) -> dict:
        record = {
            "id": self.id,
            "author_id": self.author_id,
            "channel": self.channel,
            "created_at": format_rfc3339(self.created_at),
            "text": self.text,
        }
        if self.media_transcript is not None:
            record["media_transcript"] = self.media_transcript
        if self.lang is not None:
            record["lang"] = self.lang
        return record


@dataclass(frozen=True)
class Corpus:
    """An ingested, deduplicated artifact collection with derived metadata."""

    corpus_id: str
    artifacts: tuple[VocArtifact, ...]
    channels: frozenset[str]
    temporal_range: tuple[datetime, datetime]
    author_count: int
    message_count: int
    collection_methods: tuple[str, ...] = ("unspecified",)
    platforms: tuple[str, ...] = ("unspecified",)

    def artifact_by_id(self, artifact_id: str) -> VocArtifact:
        artifact = self._by_id().get(artifact_id)
        if artifact is None:
            raise KeyError(artifact_id)
        return artifact

    def _by_id(self) -> dict[str, VocArtifact]:
        cached = getattr(self, "_id_map", None)
        if cached is None:
            cached = {a.id: a for a in self.artifacts}
            object.__setattr__(self, "_id_map", cached)
        return cached


@dataclass
class CorpusStats:
    """Exact partitions of the corpus for provenance and reporting."""

    channel_counts: dict[str, int]
    author_counts: dict[str, int]
    monthly_counts: dict[str, int] = field(default_factory=dict)


@dataclass
class LineDiagnostic:
    """One skipped input line: where and why."""

    line_number: int
    error: str

    def __str__(self) -> str:
        return f"line {self.line_number}: {self.error}"


def parse_artifact_record(line: str) -> VocArtifact:
    """Parse one JSONL record into a VocArtifact.

    Unknown fields are ignored; text is trimmed. Raises MissingField,
    BadTimestamp, or EmptyText on invalid records.
    """
    try:
        raw = json.loads(line)
    except json.JSONDecodeError as exc:
        raise VocPersonaError(f"invalid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise VocPersonaError("record is not a JSON object")
    for name in _REQUIRED_FIELDS:
        if name not in raw or raw[name] is None:
            raise MissingField(name)
    text = str(raw["text"]).strip()
    if not text:
        raise EmptyText("text is empty after trimming")
    transcript = raw.get("media_transcript")
    lang = raw.get("lang")
    return VocArtifact(
        id=str(raw["id"]),
        author_id=str(raw["author_id"]),
        channel=str(raw["channel"]),
        created_at=parse_rfc3339(raw["created_at"]),
        text=text,
        media_transcript=str(transcript) if transcript is not None else None,
        lang=str(lang) if lang is not None else None,
    )


def ingest_corpus(
    records: Sequence[VocArtifact],
    corpus_id: str,
    collection_methods: Sequence[str] = ("unspecified",),
    platforms: Sequence[str] = ("unspecified",),
) -> Corpus:
    """Build a Corpus from parsed records.

    Duplicates by id are dropped, first occurrence wins, input order
    preserved. Raises EmptyCorpus when no records survive.
    """
    seen: dict[str, VocArtifact] = {}
    ordered: list[VocArtifact] = []
    for record in records:
        if record.id in seen:
            continue
        seen[record.id] = record
        ordered.append(record)
    if not ordered:
        raise EmptyCorpus(f"no valid records for corpus {corpus_id!r}")
    timestamps = [a.created_at for a in ordered]
    return Corpus(
        corpus_id=corpus_id,
        artifacts=tuple(ordered),
        channels=frozenset(a.channel for a in ordered),
        temporal_range=(min(timestamps), max(timestamps)),
        author_count=len({a.author_id for a in ordered}),
        message_count=len(ordered),
        collection_methods=tuple(collection_methods),
        platforms=tuple(platforms),
    )


def ingest_jsonl(
    lines: Iterable[str],
    corpus_id: str,
    collection_methods: Sequence[str] = ("unspecified",),
    platforms: Sequence[str] = ("unspecified",),
) -> tuple[Corpus, list[LineDiagnostic]]:
    """Parse a JSONL feed, skipping bad lines with diagnostics."""
    records: list[VocArtifact] = []
    diagnostics: list[LineDiagnostic] = []
    for number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            records.append(parse_artifact_record(line))
        except VocPersonaError as exc:
            diagnostics.append(LineDiagnostic(number, exc.message))
    corpus = ingest_corpus(records, corpus_id, collection_methods, platforms)
    return corpus, diagnostics


def export_jsonl(corpus: Corpus) -> Iterator[str]:
    """Yield one JSONL line per artifact, in the ingest schema."""
    for artifact in corpus.artifacts:
        yield json.dumps(artifact.to_record(), ensure_ascii=False)


def corpus_stats(corpus: Corpus) -> CorpusStats:
    """Per-channel counts, per-author counts, monthly temporal histogram."""
    channel_counts: dict[str, int] = {}
    author_counts: dict[str, int] = {}
    monthly_counts: dict[str, int] = {}
    for artifact in corpus.artifacts:
        channel_counts[artifact.channel] = channel_counts.get(artifact.channel, 0) + 1
        author_counts[artifact.author_id] = author_counts.get(artifact.author_id, 0) + 1
        month = artifact.created_at.strftime("%Y-%m")
        monthly_counts[month] = monthly_counts.get(month, 0) + 1
    return CorpusStats(
        channel_counts=dict(sorted(channel_counts.items())),
        author_counts=dict(sorted(author_counts.items())),
        monthly_counts=dict(sorted(monthly_counts.items())),
    )
