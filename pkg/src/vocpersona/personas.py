"""Topic identification and persona derivation.

Leader clustering over artifact vectors: fully deterministic, no seeds,
order-stable. Artifacts are visited in id-ascending order and joined to
the highest-similarity existing cluster at or above the threshold, else
they seed a new cluster. Each qualifying cluster becomes one persona
segment with metrics, topic coverage, and documented gaps.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .corpus import Corpus
from .embedding import quantize_score
from .errors import EmptyIndex, NoPersonas, VocPersonaError
from .index import VectorIndex
from .text import content_words

MAX_LABEL_TERMS = 5

# Bucket for member artifacts that match none of the cluster's label terms
# (or for clusters whose texts are all stopwords). Keeps coverage an exact
# partition of the member set.
FALLBACK_LABEL = "general"


@dataclass
class TopicCluster:
    cluster_id: str
    centroid: np.ndarray
    member_ids: tuple[str, ...]
    label_terms: tuple[str, ...] = ()


@dataclass
class PersonaSegment:
    persona_id: str
    name: str
    cluster_ids: tuple[str, ...]
    summary_terms: tuple[str, ...]
    user_count: int
    message_count: int
    coverage: dict[str, int]
    gaps: tuple[str, ...]
    # Operational scope for retrieval; not part of the persisted schema.
    member_ids: tuple[str, ...] = field(default=(), repr=False)

    def to_record(self) -> dict:
        return {
            "persona_id": self.persona_id,
            "name": self.name,
            "cluster_ids": list(self.cluster_ids),
            "summary_terms": list(self.summary_terms),
            "user_count": self.user_count,
            "message_count": self.message_count,
            "coverage": dict(self.coverage),
            "gaps": list(self.gaps),
        }


@dataclass(frozen=True)
class AssignmentStep:
    """One step of the clustering replay trace, for audits."""

    artifact_id: str
    cluster_id: str
    similarity: float
    opened_new_cluster: bool


def _cluster(index: VectorIndex, tau_cluster: float):
    if not 0.0 < tau_cluster < 1.0:
        raise VocPersonaError(f"tau_cluster must be in (0, 1), got {tau_cluster}")
    if len(index) == 0:
        raise EmptyIndex("cannot cluster an empty index")
    sums: list[np.ndarray] = []
    centroids: list[np.ndarray] = []
    members: list[list[str]] = []
    trace: list[AssignmentStep] = []
    for artifact_id in sorted(index.ids):
        vec = index.vector(artifact_id)
        target = -1
        best = -2.0
        for i, centroid in enumerate(centroids):
            sim = quantize_score(float(np.dot(centroid, vec)))
            # Strictly greater keeps ties on the earliest-created cluster.
            if sim >= tau_cluster and sim > best:
                target = i
                best = sim
        if target < 0:
            sums.append(vec.copy())
            centroids.append(vec.copy())
            members.append([artifact_id])
            trace.append(AssignmentStep(artifact_id, f"t{len(sums) - 1:03d}", 1.0, True))
            continue
        members[target].append(artifact_id)
        sums[target] += vec
        centroids[target] = sums[target] / np.linalg.norm(sums[target])
        trace.append(AssignmentStep(artifact_id, f"t{target:03d}", best, False))
    clusters = [
        TopicCluster(
            cluster_id=f"t{i:03d}",
            centroid=centroids[i],
            member_ids=tuple(members[i]),
        )
        for i in range(len(members))
    ]
    return clusters, trace


def cluster_topics(index: VectorIndex, tau_cluster: float) -> list[TopicCluster]:
    """Deterministic leader clustering of all indexed artifacts."""
    clusters, _ = _cluster(index, tau_cluster)
    return clusters


def cluster_trace(index: VectorIndex, tau_cluster: float) -> list[AssignmentStep]:
    """Replayable assignment trace: similarity to the then-current centroid."""
    _, trace = _cluster(index, tau_cluster)
    return trace


def label_cluster(cluster: TopicCluster, corpus: Corpus) -> tuple[str, ...]:
    """Top content words ranked by in-cluster vs rest-of-corpus contrast.

    Score per word is document frequency within the cluster divided by
    (1 + document frequency elsewhere); ties break alphabetically.
    """
    member_set = set(cluster.member_ids)
    df_in: dict[str, int] = {}
    df_out: dict[str, int] = {}
    for artifact in corpus.artifacts:
        words = content_words(artifact.retrievable_text())
        counter = df_in if artifact.id in member_set else df_out
        for word in words:
            counter[word] = counter.get(word, 0) + 1
    ranked = sorted(
        df_in.items(),
        key=lambda item: (-(item[1] / (1 + df_out.get(item[0], 0))), item[0]),
    )
    return tuple(word for word, _ in ranked[:MAX_LABEL_TERMS])


def _coverage(cluster: TopicCluster, corpus: Corpus) -> dict[str, int]:
    """Partition member artifacts by their highest-ranked matching label."""
    counts = {term: 0 for term in cluster.label_terms}
    fallback = 0
    for artifact_id in cluster.member_ids:
        words = content_words(corpus.artifact_by_id(artifact_id).retrievable_text())
        for term in cluster.label_terms:
            if term in words:
                counts[term] += 1
                break
        else:
            fallback += 1
    if fallback or not counts:
        counts[FALLBACK_LABEL] = fallback
    return counts


def derive_personas(
    clusters: Sequence[TopicCluster],
    corpus: Corpus,
    min_cluster_size: int = 5,
    min_evidence: int = 5,
) -> list[PersonaSegment]:
    """One persona per cluster that meets the size threshold.

    Persona names are the top label term, title-cased, with an ordinal
    suffix on collision. Coverage counts are an exact partition of the
    member artifacts; labels below min_evidence are documented as gaps.
    """
    qualifying = [c for c in clusters if len(c.member_ids) >= min_cluster_size]
    if not qualifying:
        raise NoPersonas(
            f"no cluster has at least {min_cluster_size} members"
        )
    personas: list[PersonaSegment] = []
    name_counts: dict[str, int] = {}
    for ordinal, cluster in enumerate(qualifying):
        if not cluster.label_terms:
            cluster.label_terms = label_cluster(cluster, corpus)
        base_name = (cluster.label_terms[0] if cluster.label_terms
                     else FALLBACK_LABEL).title()
        name_counts[base_name] = name_counts.get(base_name, 0) + 1
        name = base_name if name_counts[base_name] == 1 else \
            f"{base_name} {name_counts[base_name]}"
        coverage = _coverage(cluster, corpus)
        authors = {
            corpus.artifact_by_id(a).author_id for a in cluster.member_ids
        }
        personas.append(PersonaSegment(
            persona_id=f"{corpus.corpus_id}-p{ordinal:03d}",
            name=name,
            cluster_ids=(cluster.cluster_id,),
            summary_terms=cluster.label_terms,
            user_count=len(authors),
            message_count=len(cluster.member_ids),
            coverage=coverage,
            gaps=tuple(label for label, count in coverage.items()
                       if count < min_evidence),
            member_ids=cluster.member_ids,
        ))
    return personas


def topic_coverage(persona: PersonaSegment, query_label: str) -> int:
    """Coverage count for a label; 0 when the label is unknown."""
    return persona.coverage.get(query_label, 0)


def dump_personas(personas: Sequence[PersonaSegment]) -> str:
    """Serialize persona segments for personas.json."""
    return json.dumps([p.to_record() for p in personas],
                      indent=2, ensure_ascii=False) + "\n"


def dump_clusters(clusters: Sequence[TopicCluster]) -> str:
    records = [
        {
            "cluster_id": c.cluster_id,
            "member_ids": list(c.member_ids),
            "label_terms": list(c.label_terms),
            "centroid": [float(x) for x in c.centroid],
        }
        for c in clusters
    ]
    return json.dumps(records, indent=2, ensure_ascii=False) + "\n"


def load_clusters(text: str) -> list[TopicCluster]:
    return [
        TopicCluster(
            cluster_id=r["cluster_id"],
            centroid=np.array(r["centroid"], dtype=np.float64),
            member_ids=tuple(r["member_ids"]),
            label_terms=tuple(r["label_terms"]),
        )
        for r in json.loads(text)
    ]


def load_personas(text: str, clusters: Sequence[TopicCluster]) -> list[PersonaSegment]:
    """Rehydrate persona segments, resolving member scope via clusters."""
    by_id = {c.cluster_id: c for c in clusters}
    personas = []
    for r in json.loads(text):
        member_ids: list[str] = []
        for cluster_id in r["cluster_ids"]:
            member_ids.extend(by_id[cluster_id].member_ids)
        personas.append(PersonaSegment(
            persona_id=r["persona_id"],
            name=r["name"],
            cluster_ids=tuple(r["cluster_ids"]),
            summary_terms=tuple(r["summary_terms"]),
            user_count=r["user_count"],
            message_count=r["message_count"],
            coverage={k: int(v) for k, v in r["coverage"].items()},
            gaps=tuple(r["gaps"]),
            member_ids=tuple(member_ids),
        ))
    return personas
