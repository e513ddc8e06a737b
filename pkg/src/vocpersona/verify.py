"""Post-hoc grounding verification of persona claims.

Each claim is scored against the artifacts it cites (only those): the
score is the max of lexical overlap and mapped semantic similarity, so
verbatim reuse and paraphrase are both caught cheaply. Note the semantic
floor: an orthogonal claim still maps to 0.5, which is why the default
grounding threshold sits above it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from .corpus import VocArtifact
from .embedding import cosine_similarity, embed_text, quantize_score
from .errors import UnknownCitation
from .text import content_words, jaccard, split_sentences

if TYPE_CHECKING:
    from .conversation import EvidenceBundle, PersonaResponse

DEFAULT_TAU_GROUND = 0.55


def segment_claims(text: str) -> list[str]:
    """Claim sentences, under the same splitting rules as generation."""
    return split_sentences(text)


def support_score(claim: str, artifact: VocArtifact) -> float:
    """Support for a claim by one artifact, in [0, 1].

    max(Jaccard of content-word sets, cosine mapped from [-1, 1] to
    [0, 1]). The mapped cosine of orthogonal texts is 0.5.
    """
    body = artifact.retrievable_text()
    lexical = jaccard(content_words(claim), content_words(body))
    semantic = (cosine_similarity(embed_text(claim), embed_text(body)) + 1.0) / 2.0
    return quantize_score(max(lexical, semantic))


@dataclass(frozen=True)
class ClaimVerification:
    claim_text: str
    max_support: float
    grounded: bool
    best_artifact_id: str

    def to_record(self) -> dict:
        return {
            "claim_text": self.claim_text,
            "max_support": self.max_support,
            "grounded": self.grounded,
            "best_artifact_id": self.best_artifact_id,
        }


@dataclass(frozen=True)
class VerificationReport:
    claims: tuple[ClaimVerification, ...]
    overall_pass: bool
    redacted_count: int
    tau_ground: float

    def to_record(self) -> dict:
        return {
            "claims": [c.to_record() for c in self.claims],
            "overall_pass": self.overall_pass,
            "redacted_count": self.redacted_count,
            "tau_ground": self.tau_ground,
        }


def verify_response(
    response: "PersonaResponse",
    bundle: "EvidenceBundle",
    tau_ground: float = DEFAULT_TAU_GROUND,
) -> VerificationReport:
    """Score every claim against its cited artifacts only.

    A claim is grounded when its max support meets tau_ground; the report
    passes iff all claims are grounded (abstentions pass vacuously).
    Raises UnknownCitation when a claim cites an id outside the bundle.
    """
    by_id = {artifact.id: artifact for artifact, _ in bundle.items}
    checked: list[ClaimVerification] = []
    for claim in response.claims:
        best_score = -1.0
        best_id = ""
        for cited in claim.citations:
            artifact = by_id.get(cited)
            if artifact is None:
                raise UnknownCitation(
                    f"claim cites {cited!r} which is not in the evidence bundle"
                )
            score = support_score(claim.text, artifact)
            # Ties resolve to the lowest artifact id for determinism.
            if score > best_score or (score == best_score and cited < best_id):
                best_score, best_id = score, cited
        checked.append(ClaimVerification(
            claim_text=claim.text,
            max_support=best_score,
            grounded=best_score >= tau_ground,
            best_artifact_id=best_id,
        ))
    ungrounded = sum(1 for c in checked if not c.grounded)
    return VerificationReport(
        claims=tuple(checked),
        overall_pass=ungrounded == 0,
        redacted_count=ungrounded,
        tau_ground=tau_ground,
    )
