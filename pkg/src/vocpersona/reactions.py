"""Reaction simulation: per-facet, evidence-cited persona stances.

A design stimulus is decomposed into facet sentences; each facet runs the
same retrieval and sufficiency gate as an interview question, so a facet
comes back no_evidence exactly when the equivalent question would abstain.
Stance is scored from the fixed sentiment lexicon over qualifying
evidence, never from generation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .conversation import ABSTAIN, TurnConfig, sufficiency_gate
from .corpus import Corpus
from .errors import NoFacets, VocPersonaError
from .index import VectorIndex
from .lexicon import text_polarity
from .personas import PersonaSegment
from .text import split_sentences

STIMULUS_KINDS = (
    "feature_idea", "mockup_text", "problem_statement", "social_post",
    "landing_copy",
)

SUPPORTIVE = "supportive"
CRITICAL = "critical"
MIXED = "mixed"
NO_EVIDENCE = "no_evidence"

# Symmetric dead band around zero maps to "mixed".
POLARITY_BAND = 0.1


@dataclass(frozen=True)
class ReactionStimulus:
    kind: str
    title: str
    content: str

    def __post_init__(self):
        if self.kind not in STIMULUS_KINDS:
            raise VocPersonaError(
                f"stimulus kind must be one of {STIMULUS_KINDS}, got {self.kind!r}"
            )
        # Whitespace-only content passes construction and surfaces as
        # NoFacets at extraction time.
        if not self.content:
            raise VocPersonaError("stimulus content is empty")


@dataclass(frozen=True)
class FacetReaction:
    facet: str
    stance: str
    polarity: float
    citations: tuple[str, ...]

    def to_record(self) -> dict:
        return {
            "facet": self.facet,
            "stance": self.stance,
            "polarity": self.polarity,
            "citations": list(self.citations),
        }


@dataclass(frozen=True)
class ReactionReport:
    persona_id: str
    stimulus_kind: str
    stimulus_title: str
    facets: tuple[FacetReaction, ...]
    overall_note: str

    def to_record(self) -> dict:
        return {
            "persona_id": self.persona_id,
            "stimulus_kind": self.stimulus_kind,
            "stimulus_title": self.stimulus_title,
            "facets": [f.to_record() for f in self.facets],
            "overall_note": self.overall_note,
        }


def extract_facets(stimulus: ReactionStimulus) -> list[str]:
    """One facet per sentence of the stimulus content."""
    facets = split_sentences(stimulus.content)
    if not facets:
        raise NoFacets("stimulus content yields no facets")
    return facets


def stance_for(polarity: float) -> str:
    if polarity > POLARITY_BAND:
        return SUPPORTIVE
    if polarity < -POLARITY_BAND:
        return CRITICAL
    return MIXED


def simulate_reaction(
    persona: PersonaSegment,
    stimulus: ReactionStimulus,
    config: TurnConfig,
    *,
    corpus: Corpus,
    index: VectorIndex,
) -> ReactionReport:
    """Per-facet reaction with the interview gate and lexicon stance.

    Facets with insufficient evidence come back as no_evidence with no
    citations; otherwise polarity is the mean per-text lexicon polarity of
    the qualifying evidence, and citations are the qualifying artifacts.
    """
    from .conversation import retrieve_bundle

    facets: list[FacetReaction] = []
    for position, facet in enumerate(extract_facets(stimulus)):
        bundle = retrieve_bundle(
            facet, persona, corpus, index, config.k,
            bundle_id=f"react-{persona.persona_id}-{position}",
        )
        if sufficiency_gate(bundle, config.tau_evidence, config.n_min) == ABSTAIN:
            facets.append(FacetReaction(
                facet=facet, stance=NO_EVIDENCE, polarity=0.0, citations=(),
            ))
            continue
        qualifying = [
            (artifact, score) for artifact, score in bundle.items
            if score >= config.tau_evidence
        ]
        polarities = [
            text_polarity(artifact.retrievable_text()) for artifact, _ in qualifying
        ]
        polarity = round(sum(polarities) / len(polarities), 12)
        facets.append(FacetReaction(
            facet=facet,
            stance=stance_for(polarity),
            polarity=polarity,
            citations=tuple(artifact.id for artifact, _ in qualifying),
        ))
    with_evidence = sum(1 for f in facets if f.stance != NO_EVIDENCE)
    note = (
        f"{with_evidence} of {len(facets)} facets supported by evidence "
        f"from persona {persona.name}."
    )
    return ReactionReport(
        persona_id=persona.persona_id,
        stimulus_kind=stimulus.kind,
        stimulus_title=stimulus.title,
        facets=tuple(facets),
        overall_note=note,
    )
