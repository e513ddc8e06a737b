"""Persona Provenance Cards: four-section documentation per persona.

Every number on a card is recomputed from the ground data at build time,
never copied from the persona record and never produced by generation.
Cards are derived artifacts: rebuilding one cannot change persona or
corpus state.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Callable

from .corpus import Corpus, format_rfc3339, parse_rfc3339
from .errors import CorpusMismatch, UnknownPersona
from .personas import FALLBACK_LABEL, PersonaSegment
from .text import content_words

# Honest defaults for the model-specification risk section; deployers
# extend this list, never shrink it to empty.
BASELINE_RISKS = (
    "Responses may extrapolate beyond the retrieved evidence.",
    "VoC channels carry sampling bias; vocal users are over-represented.",
    "Segment statistics are not representative of the full user base.",
)


@dataclass(frozen=True)
class ProvenanceCard:
    persona_id: str
    data_provenance: dict
    model_specifications: dict
    segment_metrics: dict
    topic_coverage: dict
    generated_at: datetime

    def to_record(self) -> dict:
        return {
            "persona_id": self.persona_id,
            "data_provenance": self.data_provenance,
            "model_specifications": self.model_specifications,
            "segment_metrics": self.segment_metrics,
            "topic_coverage": self.topic_coverage,
            "generated_at": format_rfc3339(self.generated_at),
        }


def build_card(
    persona: PersonaSegment,
    corpus: Corpus,
    model_info: str,
    min_evidence: int = 5,
    clock: Callable[[], datetime] | None = None,
) -> ProvenanceCard:
    """Populate all four card sections from ground data.

    Counts, ranges, and coverage are recomputed over the persona's member
    artifacts. Raises CorpusMismatch when a member id is missing from the
    corpus, UnknownPersona when the persona has no members at all.
    """
    if not persona.member_ids:
        raise UnknownPersona(
            f"persona {persona.persona_id} has no member artifacts attached"
        )
    try:
        members = [corpus.artifact_by_id(i) for i in persona.member_ids]
    except KeyError as exc:
        raise CorpusMismatch(
            f"persona {persona.persona_id} references artifact {exc.args[0]!r} "
            f"not present in corpus {corpus.corpus_id}"
        ) from None
    timestamps = [m.created_at for m in members]
    coverage = _recount_coverage(persona, corpus)
    covered = [[label, count] for label, count in coverage.items()
               if count >= min_evidence]
    gaps = [label for label, count in coverage.items() if count < min_evidence]
    now = clock() if clock else datetime.now(timezone.utc)
    return ProvenanceCard(
        persona_id=persona.persona_id,
        data_provenance={
            "channels": sorted({m.channel for m in members}),
            "platforms": list(corpus.platforms),
            "collection_methods": list(corpus.collection_methods),
            "temporal_range": [
                format_rfc3339(min(timestamps)),
                format_rfc3339(max(timestamps)),
            ],
        },
        model_specifications={
            "backend": model_info,
            "risks": list(BASELINE_RISKS),
        },
        segment_metrics={
            "user_count": len({m.author_id for m in members}),
            "message_count": len(members),
        },
        topic_coverage={"covered": covered, "gaps": gaps},
        generated_at=now,
    )


def _recount_coverage(persona: PersonaSegment, corpus: Corpus) -> dict[str, int]:
    """Independent recount of the label partition over member artifacts."""
    counts = {term: 0 for term in persona.summary_terms}
    fallback = 0
    for artifact_id in persona.member_ids:
        words = content_words(corpus.artifact_by_id(artifact_id).retrievable_text())
        for term in persona.summary_terms:
            if term in words:
                counts[term] += 1
                break
        else:
            fallback += 1
    if fallback or not counts:
        counts[FALLBACK_LABEL] = fallback
    return counts


def render_card(card: ProvenanceCard, format: str = "json") -> str:
    """Render a card as schema-stable JSON or four-section markdown."""
    if format == "json":
        return json.dumps(card.to_record(), indent=2, sort_keys=True,
                          ensure_ascii=False) + "\n"
    if format in ("markdown", "md"):
        return _render_markdown(card)
    raise ValueError(f"unknown card format: {format!r}")


def parse_card(text: str) -> ProvenanceCard:
    raw = json.loads(text)
    return ProvenanceCard(
        persona_id=raw["persona_id"],
        data_provenance=raw["data_provenance"],
        model_specifications=raw["model_specifications"],
        segment_metrics=raw["segment_metrics"],
        topic_coverage=raw["topic_coverage"],
        generated_at=parse_rfc3339(raw["generated_at"]),
    )


def _render_markdown(card: ProvenanceCard) -> str:
    prov = card.data_provenance
    metrics = card.segment_metrics
    coverage = card.topic_coverage
    lines = [
        f"# Persona Provenance Card: {card.persona_id}",
        "",
        f"Generated at {format_rfc3339(card.generated_at)}.",
        "",
        "## Data Provenance",
        "",
        f"- Channels: {', '.join(prov['channels'])}",
        f"- Platforms: {', '.join(prov['platforms'])}",
        f"- Collection methods: {', '.join(prov['collection_methods'])}",
        f"- Temporal range: {prov['temporal_range'][0]} to {prov['temporal_range'][1]}",
        "",
        "## Model Specifications",
        "",
        f"- Backend: {card.model_specifications['backend']}",
        "- Known risks:",
    ]
    lines += [f"  - {risk}" for risk in card.model_specifications["risks"]]
    lines += [
        "",
        "## Segment Metrics",
        "",
        f"- Users grounding this persona: {metrics['user_count']}",
        f"- Messages grounding this persona: {metrics['message_count']}",
        "",
        "## Topic Coverage",
        "",
    ]
    if coverage["covered"]:
        lines.append("Covered topics:")
        lines += [f"- {label}: {count} artifacts"
                  for label, count in coverage["covered"]]
    else:
        lines.append("No covered topics meet the evidence threshold.")
    lines.append("")
    if coverage["gaps"]:
        lines.append("Documented gaps (insufficient evidence):")
        lines += [f"- {label}" for label in coverage["gaps"]]
    else:
        lines.append("No documented gaps")
    lines.append("")
    return "\n".join(lines)
