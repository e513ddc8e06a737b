"""Leader clustering, labeling, and persona derivation."""

from datetime import datetime, timedelta, timezone

import numpy as np
import pytest

from vocpersona.corpus import VocArtifact, ingest_corpus
from vocpersona.embedding import DIM, bucket, trigrams
from vocpersona.errors import EmptyIndex, NoPersonas, VocPersonaError
from vocpersona.index import VectorIndex, build_index
from vocpersona.personas import (
    cluster_topics,
    cluster_trace,
    derive_personas,
    dump_clusters,
    dump_personas,
    label_cluster,
    load_clusters,
    load_personas,
    topic_coverage,
)

# Two groups verified cross-orthogonal (bucket-disjoint) by the embedder
# oracle in the test below before the cluster-count assertion.
GROUP_A = ("battery drains fast", "battery drains fast overnight",
           "battery drains fast always")
GROUP_B = ("screen cracked easily", "my screen cracked easily",
           "this screen cracked easily")

_BASE = datetime(2024, 3, 1, tzinfo=timezone.utc)


def corpus_of(texts, authors=None, corpus_id="c1"):
    records = [
        VocArtifact(
            id=f"a{i:03d}",
            author_id=(authors[i] if authors else f"u{i}"),
            channel="social",
            created_at=_BASE + timedelta(days=i),
            text=text,
        )
        for i, text in enumerate(texts)
    ]
    return ingest_corpus(records, corpus_id)


def indexed(texts, **kwargs):
    corpus = corpus_of(texts, **kwargs)
    index, _ = build_index(corpus)
    return corpus, index


class TestClusterTopics:
    def test_empty_index_rejected(self):
        empty = VectorIndex([], np.empty((0, DIM)))
        with pytest.raises(EmptyIndex):
            cluster_topics(empty, 0.5)

    def test_tau_out_of_range(self):
        _, index = indexed(["some text here"])
        for bad in (0.0, 1.0, -0.2, 3.0):
            with pytest.raises(VocPersonaError):
                cluster_topics(index, bad)

    def test_identical_texts_single_cluster(self):
        _, index = indexed(["battery drains fast"] * 7)
        clusters = cluster_topics(index, 0.5)
        assert len(clusters) == 1
        assert len(clusters[0].member_ids) == 7

    def test_orthogonal_groups_two_clusters(self):
        texts = list(GROUP_A) + list(GROUP_B)
        # Oracle first: every cross pair must be bucket-disjoint.
        for a in GROUP_A:
            for b in GROUP_B:
                buckets_a = {bucket(g) for g in trigrams(a)}
                buckets_b = {bucket(g) for g in trigrams(b)}
                assert not (buckets_a & buckets_b)
        _, index = indexed(texts)
        clusters = cluster_topics(index, 0.5)
        assert len(clusters) == 2
        member_sets = [set(c.member_ids) for c in clusters]
        assert {"a000", "a001", "a002"} in member_sets
        assert {"a003", "a004", "a005"} in member_sets

    def test_determinism(self):
        texts = list(GROUP_A) + list(GROUP_B)
        _, index = indexed(texts)
        first = cluster_topics(index, 0.5)
        second = cluster_topics(index, 0.5)
        assert [c.cluster_id for c in first] == [c.cluster_id for c in second]
        assert [c.member_ids for c in first] == [c.member_ids for c in second]
        for a, b in zip(first, second):
            assert a.centroid.tobytes() == b.centroid.tobytes()

    def test_assignment_trace_respects_threshold(self):
        texts = list(GROUP_A) * 2 + list(GROUP_B)
        _, index = indexed(texts)
        tau = 0.5
        for step in cluster_trace(index, tau):
            assert step.similarity >= tau

    def test_clusters_partition_index(self):
        texts = list(GROUP_A) + list(GROUP_B) + ["zebra xylophone jazz"]
        _, index = indexed(texts)
        clusters = cluster_topics(index, 0.5)
        seen = [m for c in clusters for m in c.member_ids]
        assert sorted(seen) == sorted(index.ids)
        assert len(seen) == len(set(seen))


class TestLabelCluster:
    def test_distinctive_term_ranks_first(self):
        texts = list(GROUP_A) + list(GROUP_B)
        corpus, index = indexed(texts)
        clusters = cluster_topics(index, 0.5)
        battery_cluster = next(c for c in clusters if "a000" in c.member_ids)
        labels = label_cluster(battery_cluster, corpus)
        # battery/drains/fast all tie at full in-cluster frequency and zero
        # outside; the alphabetical tie-break puts battery first.
        assert labels[0] == "battery"
        assert set(labels[:3]) == {"battery", "drains", "fast"}

    def test_all_stopword_texts_empty_labels(self):
        corpus, index = indexed(["the and of which", "was were being the"])
        clusters = cluster_topics(index, 0.5)
        for cluster in clusters:
            assert label_cluster(cluster, corpus) == ()

    def test_tie_broken_alphabetically(self):
        # One artifact, two content words: identical frequency ratios.
        corpus, index = indexed(["zeta alpha"])
        clusters = cluster_topics(index, 0.5)
        labels = label_cluster(clusters[0], corpus)
        assert labels == ("alpha", "zeta")

    def test_at_most_five_terms(self):
        corpus, index = indexed(["one two three four five six seven eight"])
        clusters = cluster_topics(index, 0.5)
        assert len(label_cluster(clusters[0], corpus)) == 5


class TestDerivePersonas:
    def test_counts(self):
        texts = ["battery drains fast today"] * 12
        authors = [f"u{i % 3}" for i in range(12)]
        corpus, index = indexed(texts, authors=authors)
        clusters = cluster_topics(index, 0.5)
        personas = derive_personas(clusters, corpus, min_cluster_size=5,
                                   min_evidence=5)
        assert len(personas) == 1
        assert personas[0].user_count == 3
        assert personas[0].message_count == 12

    def test_no_personas_below_threshold(self):
        corpus, index = indexed(list(GROUP_A))
        clusters = cluster_topics(index, 0.5)
        with pytest.raises(NoPersonas):
            derive_personas(clusters, corpus, min_cluster_size=5, min_evidence=5)

    def test_gap_labels_below_min_evidence(self):
        texts = ["battery drains fast while roaming"] * 2 + \
                ["battery drains fast"] * 8
        corpus, index = indexed(texts)
        clusters = cluster_topics(index, 0.5)
        personas = derive_personas(clusters, corpus, min_cluster_size=5,
                                   min_evidence=5)
        persona = personas[0]
        assert sum(persona.coverage.values()) == persona.message_count
        for label in persona.gaps:
            assert persona.coverage[label] < 5
        for label, count in persona.coverage.items():
            if count < 5:
                assert label in persona.gaps

    def test_name_collision_gets_ordinal(self):
        texts = list(GROUP_A) * 2 + list(GROUP_B) * 2
        corpus, index = indexed(texts)
        clusters = cluster_topics(index, 0.5)
        # Rewrite both clusters' labels to force a collision.
        for cluster in clusters:
            cluster.label_terms = ("battery",)
        personas = derive_personas(clusters, corpus, min_cluster_size=2,
                                   min_evidence=1)
        assert [p.name for p in personas] == ["Battery", "Battery 2"]

    def test_member_sets_disjoint(self):
        texts = list(GROUP_A) * 3 + list(GROUP_B) * 3
        corpus, index = indexed(texts)
        personas = derive_personas(cluster_topics(index, 0.5), corpus,
                                   min_cluster_size=2, min_evidence=1)
        assert len(personas) == 2
        assert not (set(personas[0].member_ids) & set(personas[1].member_ids))

    def test_user_count_never_exceeds_messages(self):
        texts = list(GROUP_A) * 4
        corpus, index = indexed(texts)
        personas = derive_personas(cluster_topics(index, 0.5), corpus,
                                   min_cluster_size=2, min_evidence=1)
        for persona in personas:
            assert persona.user_count <= persona.message_count


class TestTopicCoverage:
    def test_lookup_and_default(self):
        texts = ["battery drains fast"] * 7
        corpus, index = indexed(texts)
        personas = derive_personas(cluster_topics(index, 0.5), corpus,
                                   min_cluster_size=5, min_evidence=5)
        persona = personas[0]
        assert topic_coverage(persona, "battery") == persona.coverage["battery"]
        assert topic_coverage(persona, "nonexistent") == 0

    def test_sum_equals_message_count(self):
        texts = list(GROUP_A) * 4
        corpus, index = indexed(texts)
        personas = derive_personas(cluster_topics(index, 0.5), corpus,
                                   min_cluster_size=2, min_evidence=1)
        for persona in personas:
            total = sum(topic_coverage(persona, label)
                        for label in persona.coverage)
            assert total == persona.message_count


class TestPersistence:
    def test_round_trip(self):
        texts = list(GROUP_A) * 2 + list(GROUP_B) * 2
        corpus, index = indexed(texts)
        clusters = cluster_topics(index, 0.5)
        personas = derive_personas(clusters, corpus, min_cluster_size=2,
                                   min_evidence=1)
        clusters_back = load_clusters(dump_clusters(clusters))
        personas_back = load_personas(dump_personas(personas), clusters_back)
        assert [c.member_ids for c in clusters_back] == \
            [c.member_ids for c in clusters]
        for a, b in zip(clusters, clusters_back):
            assert a.centroid.tobytes() == b.centroid.tobytes()
        assert personas_back == personas

    def test_dump_is_stable(self):
        texts = list(GROUP_A) * 2
        corpus, index = indexed(texts)
        clusters = cluster_topics(index, 0.5)
        personas = derive_personas(clusters, corpus, min_cluster_size=2,
                                   min_evidence=1)
        assert dump_personas(personas) == dump_personas(personas)
