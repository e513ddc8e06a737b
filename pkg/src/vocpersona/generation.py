"""Generation backends that compose persona responses from evidence.

The reference backend is extractive, not abstractive: it lifts the best
matching evidence sentences verbatim into a fixed first-person template,
so every emitted sentence is evidence-bounded by construction and the
test suite runs with no network and no model weights. An external backend
speaking the wire contract below can be plugged in per deployment.
"""

from __future__ import annotations

import json
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Callable, Protocol

from .embedding import cosine_similarity, embed_text, quantize_score
from .errors import BackendUnavailable, MalformedBackendReply, NoUsableSentence
from .personas import PersonaSegment
from .text import split_sentences

if TYPE_CHECKING:
    from .conversation import EvidenceBundle

MODES = ("interview", "reaction")

MAX_SENTENCES = 3

FIRST_PERSON_TEMPLATE = "From my experience: {sentence}"

# Hard instruction sent to external backends, verbatim.
BACKEND_INSTRUCTION = (
    "Respond only using the numbered evidence; cite evidence ids; "
    "say you don't know otherwise."
)


@dataclass(frozen=True)
class GenerationRequest:
    persona: PersonaSegment
    question: str
    evidence: "EvidenceBundle"
    mode: str = "interview"


@dataclass(frozen=True)
class DraftSentence:
    text: str
    evidence_id: str


@dataclass
class DraftResponse:
    """Sentences each tagged with the single evidence artifact they cite."""

    sentences: list[DraftSentence]
    # External-backend sentences citing ids outside the bundle, kept for
    # the audit log; never emitted.
    rejected: list[DraftSentence] = field(default_factory=list)


class GenerationBackend(Protocol):
    name: str
    version: str

    def generate(self, request: GenerationRequest) -> DraftResponse: ...


class ExtractiveBackend:
    """Deterministic extractive composition from the evidence bundle.

    Pure function of (persona, question, evidence): splits each evidence
    artifact into sentences, scores each sentence against the question by
    cosine, and emits the top three under the first-person template.
    Ordering is score descending, artifact id ascending, sentence position
    ascending.
    """

    name = "extractive-reference"
    version = "1"

    def generate(self, request: GenerationRequest) -> DraftResponse:
        question_vec = embed_text(request.question)
        candidates: list[tuple[float, str, int, str]] = []
        for artifact, _score in request.evidence.items:
            sentences = split_sentences(artifact.retrievable_text())
            for position, sentence in enumerate(sentences):
                score = quantize_score(
                    cosine_similarity(embed_text(sentence), question_vec)
                )
                candidates.append((score, artifact.id, position, sentence))
        if not candidates:
            raise NoUsableSentence("no evidence text splits into sentences")
        candidates.sort(key=lambda c: (-c[0], c[1], c[2]))
        selected = candidates[:MAX_SENTENCES]
        return DraftResponse(sentences=[
            DraftSentence(
                text=FIRST_PERSON_TEMPLATE.format(sentence=sentence),
                evidence_id=artifact_id,
            )
            for _, artifact_id, _, sentence in selected
        ])

    def describe(self) -> str:
        return f"{self.name}/{self.version}"


def _default_transport(url: str, body: bytes, timeout: float) -> bytes:
    request = urllib.request.Request(
        url, data=body, headers={"Content-Type": "application/json"}, method="POST",
    )
    with urllib.request.urlopen(request, timeout=timeout) as reply:
        return reply.read()


class ExternalBackend:
    """HTTP generation backend honoring the vendor-neutral wire contract.

    Request body fields: persona, evidence (numbered, id + text), question,
    mode, instruction. Reply: {"sentences": [{"text", "evidence_id"}]}.
    Sentences citing ids outside the bundle are rejected for redaction.
    """

    name = "external"

    def __init__(self, endpoint: str, timeout: float = 30.0,
                 transport: Callable[[str, bytes, float], bytes] | None = None):
        self.endpoint = endpoint
        self.timeout = timeout
        self.version = endpoint
        self._transport = transport or _default_transport

    def generate(self, request: GenerationRequest) -> DraftResponse:
        body = json.dumps({
            "persona": {
                "persona_id": request.persona.persona_id,
                "name": request.persona.name,
                "summary_terms": list(request.persona.summary_terms),
            },
            "evidence": [
                {"n": n, "id": artifact.id, "text": artifact.retrievable_text()}
                for n, (artifact, _score) in enumerate(request.evidence.items, start=1)
            ],
            "question": request.question,
            "mode": request.mode,
            "instruction": BACKEND_INSTRUCTION,
        }).encode("utf-8")
        try:
            raw = self._transport(self.endpoint, body, self.timeout)
        except (urllib.error.URLError, OSError, TimeoutError) as exc:
            raise BackendUnavailable(f"backend at {self.endpoint}: {exc}") from exc
        try:
            reply = json.loads(raw)
            sentences = reply["sentences"]
            parsed = [
                DraftSentence(text=str(item["text"]),
                              evidence_id=str(item["evidence_id"]))
                for item in sentences
            ]
        except (ValueError, KeyError, TypeError) as exc:
            raise MalformedBackendReply(f"cannot parse backend reply: {exc}") from exc
        bundle_ids = {artifact.id for artifact, _ in request.evidence.items}
        accepted = [s for s in parsed if s.evidence_id in bundle_ids]
        rejected = [s for s in parsed if s.evidence_id not in bundle_ids]
        return DraftResponse(sentences=accepted, rejected=rejected)

    def describe(self) -> str:
        return f"{self.name}:{self.endpoint}"
