"""Per-turn conversation pipeline: retrieve, gate, generate or abstain,
attribute, verify, record.

Every turn retrieves evidence scoped to the persona's member artifacts,
independently of prior turns. The sufficiency gate decides answer vs
abstain before any generation happens; generated claims are then verified
against their citations and ungrounded ones are redacted. A response that
loses all claims to redaction converts to an abstention.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Callable

from .corpus import Corpus, VocArtifact
from .embedding import cosine_similarity, embed_text, quantize_score
from .errors import EmptyMessage, SessionClosed
from .generation import GenerationBackend, GenerationRequest
from .index import VectorIndex, query_top_k
from .personas import PersonaSegment
from .verify import VerificationReport, verify_response

logger = logging.getLogger(__name__)

PROCEED = "proceed"
ABSTAIN = "abstain"

ANSWERED = "answered"
ABSTAINED = "abstained"

ABSTAIN_TEMPLATE = (
    "I don't have enough evidence to speak to that. I can speak to: {labels}."
)

MAX_ABSTAIN_LABELS = 3


@dataclass(frozen=True)
class TurnConfig:
    k: int = 8
    tau_evidence: float = 0.35
    n_min: int = 3
    tau_ground: float = 0.55


@dataclass(frozen=True)
class EvidenceBundle:
    """Ranked artifacts retrieved for one turn, scoped to the persona."""

    bundle_id: str
    items: tuple[tuple[VocArtifact, float], ...]
    query_echo: str
    retrieved_at: datetime

    def ids(self) -> tuple[str, ...]:
        return tuple(artifact.id for artifact, _ in self.items)

    def ids_scores(self) -> list[list]:
        return [[artifact.id, score] for artifact, score in self.items]


@dataclass(frozen=True)
class Claim:
    text: str
    citations: tuple[str, ...]
    support_score: float

    def to_record(self) -> dict:
        return {
            "text": self.text,
            "citations": list(self.citations),
            "support_score": self.support_score,
        }


@dataclass(frozen=True)
class PersonaResponse:
    kind: str  # ANSWERED or ABSTAINED
    claims: tuple[Claim, ...]
    abstain_note: str | None
    bundle_ref: str


@dataclass(frozen=True)
class Turn:
    turn_index: int
    message: str
    response: PersonaResponse
    bundle: EvidenceBundle

    def to_record(self) -> dict:
        return {
            "turn_index": self.turn_index,
            "message": self.message,
            "response": {
                "kind": self.response.kind,
                "claims": [c.to_record() for c in self.response.claims],
                "abstain_note": self.response.abstain_note,
            },
            "bundle": {"ids_scores": self.bundle.ids_scores()},
        }


@dataclass
class Session:
    session_id: str
    persona_id: str
    mode: str
    created_at: datetime
    turns: list[Turn] = field(default_factory=list)
    # Monotone index across interview and reaction turns; survives restarts.
    turn_counter: int = 0
    closed: bool = False

    def next_turn_index(self) -> int:
        return self.turn_counter

    def record_turn(self, turn: Turn) -> None:
        self.turns.append(turn)
        self.turn_counter += 1


def sufficiency_gate(bundle: EvidenceBundle, tau_evidence: float, n_min: int) -> str:
    """PROCEED iff at least n_min items score at or above tau_evidence."""
    qualifying = sum(1 for _, score in bundle.items if score >= tau_evidence)
    return PROCEED if qualifying >= n_min else ABSTAIN


def retrieve_bundle(
    message: str,
    persona: PersonaSegment,
    corpus: Corpus,
    index: VectorIndex,
    k: int,
    bundle_id: str,
    retrieved_at: datetime | None = None,
) -> EvidenceBundle:
    """Top-k retrieval scoped to the persona's member artifacts."""
    ranked = query_top_k(index, embed_text(message), k, scope=set(persona.member_ids))
    return EvidenceBundle(
        bundle_id=bundle_id,
        items=tuple((corpus.artifact_by_id(i), score) for i, score in ranked),
        query_echo=message,
        retrieved_at=retrieved_at or datetime.now(timezone.utc),
    )


def nearest_coverage_labels(persona: PersonaSegment, message: str,
                            limit: int = MAX_ABSTAIN_LABELS) -> list[str]:
    """Covered topic labels whose term embeddings sit closest to the message.

    Labels documented as gaps are excluded; the note offers topics the
    persona can actually speak to.
    """
    candidates = [label for label in persona.coverage if label not in persona.gaps]
    if not candidates:
        candidates = list(persona.coverage)
    message_vec = embed_text(message)
    scored = sorted(
        (-quantize_score(cosine_similarity(embed_text(label), message_vec)), label)
        for label in candidates
    )
    return [label for _, label in scored[:limit]]


def abstain_note_for(persona: PersonaSegment, message: str) -> str:
    labels = nearest_coverage_labels(persona, message)
    return ABSTAIN_TEMPLATE.format(labels=", ".join(labels))


def answer_turn(
    session: Session,
    message: str,
    config: TurnConfig,
    *,
    persona: PersonaSegment,
    corpus: Corpus,
    index: VectorIndex,
    backend: GenerationBackend,
    clock: Callable[[], datetime] | None = None,
) -> Turn:
    """Run the full turn pipeline and append the result to the session.

    Raises EmptyMessage on blank input and SessionClosed on a closed
    session; backend failures propagate before anything is recorded, so a
    failed turn leaves no trace in the transcript.
    """
    if not message or not message.strip():
        raise EmptyMessage("turn message is empty")
    if session.closed:
        raise SessionClosed(f"session {session.session_id} is closed")
    message = message.strip()
    turn_index = session.next_turn_index()
    bundle = retrieve_bundle(
        message, persona, corpus, index, config.k,
        bundle_id=f"{session.session_id}-b{turn_index:04d}",
        retrieved_at=clock() if clock else None,
    )
    if sufficiency_gate(bundle, config.tau_evidence, config.n_min) == ABSTAIN:
        response = PersonaResponse(
            kind=ABSTAINED,
            claims=(),
            abstain_note=abstain_note_for(persona, message),
            bundle_ref=bundle.bundle_id,
        )
    else:
        draft = backend.generate(GenerationRequest(
            persona=persona, question=message, evidence=bundle, mode=session.mode,
        ))
        for sentence in draft.rejected:
            logger.warning(
                "session %s turn %d: backend sentence cited unknown id %r, redacted",
                session.session_id, turn_index, sentence.evidence_id,
            )
        claims = tuple(
            Claim(text=s.text, citations=(s.evidence_id,), support_score=0.0)
            for s in draft.sentences
        )
        response = _verify_and_redact(
            session, turn_index, claims, bundle, config.tau_ground, persona, message,
        )
    turn = Turn(turn_index=turn_index, message=message,
                response=response, bundle=bundle)
    session.record_turn(turn)
    return turn


def _verify_and_redact(
    session: Session,
    turn_index: int,
    claims: tuple[Claim, ...],
    bundle: EvidenceBundle,
    tau_ground: float,
    persona: PersonaSegment,
    message: str,
) -> PersonaResponse:
    probe = PersonaResponse(kind=ANSWERED, claims=claims, abstain_note=None,
                            bundle_ref=bundle.bundle_id)
    report = verify_response(probe, bundle, tau_ground)
    kept: list[Claim] = []
    for claim, checked in zip(claims, report.claims):
        if not checked.grounded:
            logger.warning(
                "session %s turn %d: redacted ungrounded claim %r (support %.3f)",
                session.session_id, turn_index, claim.text, checked.max_support,
            )
            continue
        kept.append(Claim(
            text=claim.text,
            citations=claim.citations,
            support_score=checked.max_support,
        ))
    if not kept:
        return PersonaResponse(
            kind=ABSTAINED,
            claims=(),
            abstain_note=abstain_note_for(persona, message),
            bundle_ref=bundle.bundle_id,
        )
    return PersonaResponse(kind=ANSWERED, claims=tuple(kept), abstain_note=None,
                           bundle_ref=bundle.bundle_id)


@dataclass(frozen=True)
class ConversationSummary:
    """Post-hoc summary: every claim with its citations, plus all sources."""

    session_id: str
    persona_id: str
    turns: tuple[dict, ...]
    sources: tuple[str, ...]

    def to_record(self) -> dict:
        return {
            "session_id": self.session_id,
            "persona_id": self.persona_id,
            "turns": [dict(t) for t in self.turns],
            "sources": list(self.sources),
        }


def summarize_session(session: Session) -> ConversationSummary:
    """Summary covering 100% of recorded claims; sources id-sorted."""
    turns = []
    sources: set[str] = set()
    for turn in session.turns:
        claims = [c.to_record() for c in turn.response.claims]
        for claim in turn.response.claims:
            sources.update(claim.citations)
        turns.append({
            "turn_index": turn.turn_index,
            "question": turn.message,
            "kind": turn.response.kind,
            "claims": claims,
            "abstain_note": turn.response.abstain_note,
        })
    return ConversationSummary(
        session_id=session.session_id,
        persona_id=session.persona_id,
        turns=tuple(turns),
        sources=tuple(sorted(sources)),
    )


def audit_turn_record(
    record: dict,
    corpus: Corpus,
    tau_ground: float,
) -> VerificationReport | None:
    """Re-run grounding verification over one stored transcript record.

    Returns None for abstained turns (nothing to verify).
    """
    response_raw = record["response"]
    if response_raw["kind"] == ABSTAINED:
        return None
    claims = tuple(
        Claim(text=c["text"], citations=tuple(c["citations"]),
              support_score=c["support_score"])
        for c in response_raw["claims"]
    )
    items = tuple(
        (corpus.artifact_by_id(artifact_id), score)
        for artifact_id, score in record["bundle"]["ids_scores"]
    )
    bundle = EvidenceBundle(
        bundle_id=f"audit-{record['turn_index']}",
        items=items,
        query_echo=record["message"],
        retrieved_at=datetime.now(timezone.utc),
    )
    probe = PersonaResponse(kind=ANSWERED, claims=claims, abstain_note=None,
                            bundle_ref=bundle.bundle_id)
    return verify_response(probe, bundle, tau_ground)
