"""Evidence-grounded synthetic personas over voice-of-customer data.

Personas answer only from retrieved artifacts, abstain when evidence is
insufficient, attribute every claim to its sources, and document
themselves via Persona Provenance Cards.
"""

from .config import ServiceConfig, load_config
from .conversation import (
    EvidenceBundle,
    PersonaResponse,
    Session,
    TurnConfig,
    answer_turn,
    sufficiency_gate,
    summarize_session,
)
from .corpus import Corpus, VocArtifact, corpus_stats, ingest_corpus, parse_artifact_record
from .embedding import cosine_similarity, embed_text
from .engine import Engine
from .generation import ExternalBackend, ExtractiveBackend
from .index import VectorIndex, build_index, query_top_k
from .personas import PersonaSegment, TopicCluster, cluster_topics, derive_personas
from .provenance import ProvenanceCard, build_card, render_card
from .reactions import ReactionReport, ReactionStimulus, simulate_reaction
from .verify import VerificationReport, segment_claims, support_score, verify_response

__version__ = "0.1.0"

__all__ = [
    "Corpus",
    "Engine",
    "EvidenceBundle",
    "ExternalBackend",
    "ExtractiveBackend",
    "PersonaResponse",
    "PersonaSegment",
    "ProvenanceCard",
    "ReactionReport",
    "ReactionStimulus",
    "ServiceConfig",
    "Session",
    "TopicCluster",
    "TurnConfig",
    "VectorIndex",
    "VerificationReport",
    "VocArtifact",
    "answer_turn",
    "build_card",
    "build_index",
    "cluster_topics",
    "corpus_stats",
    "cosine_similarity",
    "derive_personas",
    "embed_text",
    "ingest_corpus",
    "load_config",
    "parse_artifact_record",
    "query_top_k",
    "render_card",
    "segment_claims",
    "simulate_reaction",
    "sufficiency_gate",
    "summarize_session",
    "support_score",
    "verify_response",
]
