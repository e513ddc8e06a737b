"""Storage layout and the operation surface shared by CLI and HTTP.

All state lives in flat files under one data directory:

    data_dir/
      corpora/<corpus_id>/artifacts.jsonl   append-only record log
      corpora/<corpus_id>/corpus.json       ingest-time metadata
      corpora/<corpus_id>/index.vec         embedding sidecar
      corpora/<corpus_id>/clusters.json     topic clusters (members, centroids)
      corpora/<corpus_id>/personas.json     persona segments
      sessions/<session_id>.meta.json
      sessions/<session_id>.jsonl           transcript, one record per turn

The in-memory catalog is rebuilt from disk at startup. Corpora are
immutable once ingested; sessions are append-only; a second concurrent
turn on one session is rejected as Busy.
"""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Iterable, Iterator, Sequence

from .config import ServiceConfig
from .conversation import (
    ConversationSummary,
    Session,
    Turn,
    answer_turn,
    audit_turn_record,
    summarize_session,
)
from .corpus import (
    Corpus,
    LineDiagnostic,
    corpus_stats,
    export_jsonl,
    format_rfc3339,
    ingest_jsonl,
    parse_rfc3339,
)
from .errors import (
    Busy,
    UnknownCorpus,
    UnknownPersona,
    UnknownSession,
    VocPersonaError,
)
from .generation import ExternalBackend, ExtractiveBackend, GenerationBackend
from .index import VectorIndex, build_index, load_index, save_index
from .personas import (
    PersonaSegment,
    TopicCluster,
    cluster_topics,
    derive_personas,
    dump_clusters,
    dump_personas,
    load_clusters,
    load_personas,
)
from .provenance import ProvenanceCard, build_card, render_card
from .reactions import ReactionReport, ReactionStimulus, simulate_reaction
from .verify import VerificationReport


@dataclass
class CorpusHandle:
    corpus: Corpus
    index: VectorIndex | None = None
    clusters: list[TopicCluster] | None = None
    personas: list[PersonaSegment] | None = None


class Engine:
    """Single-process coordinator over one data directory."""

    def __init__(
        self,
        config: ServiceConfig,
        clock: Callable[[], datetime] | None = None,
    ):
        self.config = config.validate()
        self.data_dir = Path(config.data_dir)
        self.clock = clock or (lambda: datetime.now(timezone.utc))
        self.backend = self._make_backend()
        self._corpora: dict[str, CorpusHandle] = {}
        self._sessions: dict[str, Session] = {}
        self._session_corpus: dict[str, str] = {}
        self._turn_locks: dict[str, threading.Lock] = {}
        self._ingest_lock = threading.Lock()
        try:
            (self.data_dir / "corpora").mkdir(parents=True, exist_ok=True)
            (self.data_dir / "sessions").mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise VocPersonaError(f"data_dir not writable: {exc}") from exc
        self._load_catalog()

    def _make_backend(self) -> GenerationBackend:
        if self.config.backend == "external":
            return ExternalBackend(self.config.backend_endpoint)
        return ExtractiveBackend()

    # --- catalog ---

    def _corpus_dir(self, corpus_id: str) -> Path:
        return self.data_dir / "corpora" / corpus_id

    def _load_catalog(self) -> None:
        for meta_path in sorted(self.data_dir.glob("corpora/*/corpus.json")):
            meta = json.loads(meta_path.read_text())
            corpus_dir = meta_path.parent
            lines = (corpus_dir / "artifacts.jsonl").read_text().splitlines()
            corpus, _ = ingest_jsonl(
                lines, meta["corpus_id"],
                collection_methods=meta.get("collection_methods", ["unspecified"]),
                platforms=meta.get("platforms", ["unspecified"]),
            )
            handle = CorpusHandle(corpus=corpus)
            index_path = corpus_dir / "index.vec"
            if index_path.exists():
                handle.index = load_index(index_path)
            clusters_path = corpus_dir / "clusters.json"
            personas_path = corpus_dir / "personas.json"
            if clusters_path.exists():
                handle.clusters = load_clusters(clusters_path.read_text())
            if personas_path.exists() and handle.clusters is not None:
                handle.personas = load_personas(
                    personas_path.read_text(), handle.clusters,
                )
            self._corpora[corpus.corpus_id] = handle
        for meta_path in sorted(self.data_dir.glob("sessions/*.meta.json")):
            meta = json.loads(meta_path.read_text())
            session = Session(
                session_id=meta["session_id"],
                persona_id=meta["persona_id"],
                mode=meta["mode"],
                created_at=parse_rfc3339(meta["created_at"]),
            )
            transcript = meta_path.parent / f"{meta['session_id']}.jsonl"
            if transcript.exists():
                self._rehydrate_turns(session, transcript)
            self._sessions[session.session_id] = session

    def _rehydrate_turns(self, session: Session, transcript: Path) -> None:
        """Rebuild in-memory turns from the persisted transcript."""
        from .conversation import Claim, EvidenceBundle, PersonaResponse

        try:
            _, handle = self.persona(session.persona_id)
        except UnknownPersona:
            # Orphaned session (corpus gone or never derived): keep the
            # transcript untouched, only advance the counter.
            count = sum(1 for line in transcript.read_text().splitlines()
                        if line.strip())
            session.turn_counter = count
            return
        for line in transcript.read_text().splitlines():
            if not line.strip():
                continue
            record = json.loads(line)
            if record.get("kind") == "reaction":
                session.turn_counter = max(session.turn_counter,
                                           record["turn_index"] + 1)
                continue
            raw = record["response"]
            response = PersonaResponse(
                kind=raw["kind"],
                claims=tuple(
                    Claim(text=c["text"], citations=tuple(c["citations"]),
                          support_score=c["support_score"])
                    for c in raw["claims"]
                ),
                abstain_note=raw["abstain_note"],
                bundle_ref=f"{session.session_id}-b{record['turn_index']:04d}",
            )
            bundle = EvidenceBundle(
                bundle_id=response.bundle_ref,
                items=tuple(
                    (handle.corpus.artifact_by_id(artifact_id), score)
                    for artifact_id, score in record["bundle"]["ids_scores"]
                ),
                query_echo=record["message"],
                retrieved_at=session.created_at,
            )
            session.turns.append(Turn(
                turn_index=record["turn_index"],
                message=record["message"],
                response=response,
                bundle=bundle,
            ))
            session.turn_counter = max(session.turn_counter,
                                       record["turn_index"] + 1)

    # --- ingestion ---

    def ingest(
        self,
        lines: Iterable[str],
        corpus_id: str | None = None,
        collection_methods: Sequence[str] = ("unspecified",),
        platforms: Sequence[str] = ("unspecified",),
    ) -> tuple[Corpus, list[LineDiagnostic]]:
        """Ingest a JSONL feed and persist the record log."""
        material = list(lines)
        if corpus_id is None:
            digest = hashlib.sha256("\n".join(material).encode("utf-8"))
            corpus_id = "c" + digest.hexdigest()[:10]
        with self._ingest_lock:
            corpus, diagnostics = ingest_jsonl(
                material, corpus_id,
                collection_methods=collection_methods, platforms=platforms,
            )
            corpus_dir = self._corpus_dir(corpus_id)
            corpus_dir.mkdir(parents=True, exist_ok=True)
            log = "\n".join(export_jsonl(corpus))
            (corpus_dir / "artifacts.jsonl").write_text(log + "\n")
            (corpus_dir / "corpus.json").write_text(json.dumps({
                "corpus_id": corpus_id,
                "collection_methods": list(collection_methods),
                "platforms": list(platforms),
            }, indent=2) + "\n")
            self._corpora[corpus_id] = CorpusHandle(corpus=corpus)
        return corpus, diagnostics

    def corpus(self, corpus_id: str) -> Corpus:
        return self._handle(corpus_id).corpus

    def corpus_ids(self) -> list[str]:
        return sorted(self._corpora)

    def export(self, corpus_id: str) -> Iterator[str]:
        return export_jsonl(self._handle(corpus_id).corpus)

    def stats(self, corpus_id: str):
        return corpus_stats(self._handle(corpus_id).corpus)

    def _handle(self, corpus_id: str) -> CorpusHandle:
        handle = self._corpora.get(corpus_id)
        if handle is None:
            raise UnknownCorpus(f"no corpus {corpus_id!r}")
        return handle

    # --- derivation ---

    def ensure_index(self, corpus_id: str) -> VectorIndex:
        handle = self._handle(corpus_id)
        if handle.index is None:
            handle.index, _ = build_index(handle.corpus)
            save_index(handle.index, self._corpus_dir(corpus_id) / "index.vec")
        return handle.index

    def derive(self, corpus_id: str) -> list[PersonaSegment]:
        """Cluster topics and derive personas; persists all artifacts."""
        handle = self._handle(corpus_id)
        index = self.ensure_index(corpus_id)
        clusters = cluster_topics(index, self.config.tau_cluster)
        personas = derive_personas(
            clusters, handle.corpus,
            min_cluster_size=self.config.min_cluster_size,
            min_evidence=self.config.min_evidence,
        )
        corpus_dir = self._corpus_dir(corpus_id)
        (corpus_dir / "clusters.json").write_text(dump_clusters(clusters))
        (corpus_dir / "personas.json").write_text(dump_personas(personas))
        handle.clusters = clusters
        handle.personas = personas
        return personas

    def personas(self) -> list[PersonaSegment]:
        out: list[PersonaSegment] = []
        for corpus_id in sorted(self._corpora):
            handle = self._corpora[corpus_id]
            out.extend(handle.personas or [])
        return out

    def persona(self, persona_id: str) -> tuple[PersonaSegment, CorpusHandle]:
        for handle in self._corpora.values():
            for persona in handle.personas or []:
                if persona.persona_id == persona_id:
                    return persona, handle
        raise UnknownPersona(f"no persona {persona_id!r}")

    # --- sessions ---

    def open_session(self, persona_id: str, mode: str = "interview") -> Session:
        persona, handle = self.persona(persona_id)
        ordinal = len(self._sessions)
        session_id = f"s{ordinal:04d}"
        while session_id in self._sessions:
            ordinal += 1
            session_id = f"s{ordinal:04d}"
        session = Session(
            session_id=session_id,
            persona_id=persona_id,
            mode=mode,
            created_at=self.clock(),
        )
        self._sessions[session_id] = session
        self._session_corpus[session_id] = handle.corpus.corpus_id
        meta = {
            "session_id": session_id,
            "persona_id": persona_id,
            "mode": mode,
            "created_at": format_rfc3339(session.created_at),
        }
        (self.data_dir / "sessions" / f"{session_id}.meta.json").write_text(
            json.dumps(meta, indent=2) + "\n"
        )
        return session

    def session(self, session_id: str) -> Session:
        session = self._sessions.get(session_id)
        if session is None:
            raise UnknownSession(f"no session {session_id!r}")
        return session

    def _transcript_path(self, session_id: str) -> Path:
        return self.data_dir / "sessions" / f"{session_id}.jsonl"

    def _session_scope(self, session_id: str):
        session = self.session(session_id)
        persona, handle = self.persona(session.persona_id)
        index = self.ensure_index(handle.corpus.corpus_id)
        return session, persona, handle.corpus, index

    def _turn_lock(self, session_id: str) -> threading.Lock:
        return self._turn_locks.setdefault(session_id, threading.Lock())

    def message(self, session_id: str, text: str) -> Turn:
        """Run one interview turn; rejects concurrent turns with Busy."""
        lock = self._turn_lock(session_id)
        if not lock.acquire(blocking=False):
            raise Busy(f"session {session_id} already has a turn in flight")
        try:
            session, persona, corpus, index = self._session_scope(session_id)
            turn = answer_turn(
                session, text, self.config.turn_config(),
                persona=persona, corpus=corpus, index=index,
                backend=self.backend, clock=self.clock,
            )
            self._append_record(session_id, turn.to_record())
            return turn
        finally:
            lock.release()

    def react(self, session_id: str, stimulus: ReactionStimulus) -> ReactionReport:
        """Run a reaction simulation and record it as a reaction turn."""
        lock = self._turn_lock(session_id)
        if not lock.acquire(blocking=False):
            raise Busy(f"session {session_id} already has a turn in flight")
        try:
            session, persona, corpus, index = self._session_scope(session_id)
            report = simulate_reaction(
                persona, stimulus, self.config.turn_config(),
                corpus=corpus, index=index,
            )
            record = {
                "turn_index": session.next_turn_index(),
                "kind": "reaction",
                "stimulus": {"kind": stimulus.kind, "title": stimulus.title,
                             "content": stimulus.content},
                "report": report.to_record(),
            }
            session.turn_counter += 1
            self._append_record(session_id, record)
            return report
        finally:
            lock.release()

    def _append_record(self, session_id: str, record: dict) -> None:
        path = self._transcript_path(session_id)
        with open(path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")

    def summary(self, session_id: str) -> ConversationSummary:
        return summarize_session(self.session(session_id))

    # --- provenance ---

    def card(self, persona_id: str) -> ProvenanceCard:
        persona, handle = self.persona(persona_id)
        return build_card(
            persona, handle.corpus, model_info=self.backend.describe(),
            min_evidence=self.config.min_evidence, clock=self.clock,
        )

    def rendered_card(self, persona_id: str, format: str = "json") -> str:
        return render_card(self.card(persona_id), format)

    # --- audit ---

    def audit_transcript(
        self, transcript_path: Path, corpus_id: str | None = None,
    ) -> list[tuple[int, VerificationReport | None]]:
        """Re-run grounding verification over a stored transcript file."""
        transcript_path = Path(transcript_path)
        if corpus_id is None:
            session_id = transcript_path.name.removesuffix(".jsonl")
            if session_id in self._sessions:
                corpus_id = self._session_corpus.get(session_id) or \
                    self._corpus_of_persona(self._sessions[session_id].persona_id)
        if corpus_id is None:
            raise UnknownCorpus(
                "cannot resolve corpus for transcript; pass corpus_id"
            )
        corpus = self._handle(corpus_id).corpus
        results: list[tuple[int, VerificationReport | None]] = []
        for line in transcript_path.read_text().splitlines():
            if not line.strip():
                continue
            record = json.loads(line)
            if record.get("kind") == "reaction":
                results.append((record["turn_index"], None))
                continue
            report = audit_turn_record(record, corpus, self.config.tau_ground)
            results.append((record["turn_index"], report))
        return results

    def _corpus_of_persona(self, persona_id: str) -> str:
        _, handle = self.persona(persona_id)
        return handle.corpus.corpus_id
