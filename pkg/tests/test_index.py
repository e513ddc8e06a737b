"""Exact top-k index against a brute-force linear-scan oracle."""

import random
from datetime import datetime, timedelta, timezone

import numpy as np
import pytest

from vocpersona.corpus import VocArtifact, ingest_corpus
from vocpersona.embedding import embed_text
from vocpersona.errors import DimensionMismatch
from vocpersona.index import build_index, load_index, query_top_k, save_index

_VOCAB = (
    "battery screen shipping refund camera audio keyboard login update price "
    "support warranty display charger cable delivery package return invoice app "
    "crash freeze lag glitch bright dim loud quiet fast slow broken solid cheap "
    "premium sturdy flimsy smooth rough early late missing extra"
).split()


def synth_texts(n, seed):
    rng = random.Random(seed)
    return [" ".join(rng.choices(_VOCAB, k=rng.randint(4, 10))) for _ in range(n)]


def synth_corpus(n, seed, corpus_id="synth"):
    base = datetime(2024, 1, 1, tzinfo=timezone.utc)
    records = [
        VocArtifact(
            id=f"a{i:05d}",
            author_id=f"u{i % 97}",
            channel="social",
            created_at=base + timedelta(hours=i),
            text=text,
        )
        for i, text in enumerate(synth_texts(n, seed))
    ]
    return ingest_corpus(records, corpus_id)


def linear_scan_oracle(index, query, k, scope=None):
    """Independent reference: score every vector, full sort, slice.

    Scores are quantized to the documented 12 decimals, like the index
    contract, so equal true cosines tie exactly under any float summation
    order.
    """
    ids = index.ids if scope is None else [i for i in index.ids if i in scope]
    pairs = [(artifact_id, round(float(np.dot(index.vector(artifact_id), query)), 12))
             for artifact_id in ids]
    pairs.sort(key=lambda p: (-p[1], p[0]))
    return pairs[:k]


@pytest.fixture(scope="module")
def small_index():
    index, diagnostics = build_index(synth_corpus(60, seed=7))
    assert diagnostics == []
    return index


class TestBuild:
    def test_cardinality(self):
        corpus = synth_corpus(3, seed=1)
        index, _ = build_index(corpus)
        assert len(index) == 3
        assert set(index.ids) == {a.id for a in corpus.artifacts}

    def test_rebuild_identical(self):
        corpus = synth_corpus(20, seed=2)
        first, _ = build_index(corpus)
        second, _ = build_index(corpus)
        for artifact_id in first.ids:
            assert first.vector(artifact_id).tobytes() == second.vector(artifact_id).tobytes()

    def test_whitespace_artifact_skipped_with_diagnostic(self):
        corpus = synth_corpus(4, seed=3)
        blank = VocArtifact(
            id="blank01", author_id="u0", channel="social",
            created_at=datetime(2024, 1, 1, tzinfo=timezone.utc), text="   ",
        )
        patched = ingest_corpus(list(corpus.artifacts) + [blank], "patched")
        index, diagnostics = build_index(patched)
        assert len(index) == 4
        assert "blank01" not in index
        assert len(diagnostics) == 1
        assert "blank01" in diagnostics[0].error


class TestQuery:
    def test_k_zero(self, small_index):
        assert query_top_k(small_index, embed_text("battery"), 0) == []

    def test_singleton_scope(self, small_index):
        only = small_index.ids[5]
        got = query_top_k(small_index, embed_text("anything at all"), 3, scope={only})
        assert [i for i, _ in got] == [only]

    def test_k_covers_scope(self, small_index):
        scope = set(small_index.ids[:10])
        got = query_top_k(small_index, embed_text("refund"), 50, scope=scope)
        assert len(got) == 10
        assert {i for i, _ in got} == scope
        assert got == linear_scan_oracle(small_index, embed_text("refund"), 50, scope)

    def test_tie_break_by_id_ascending(self):
        # Duplicate texts embed identically, so scores tie exactly.
        base = datetime(2024, 1, 1, tzinfo=timezone.utc)
        records = [
            VocArtifact(id=i, author_id="u", channel="c", created_at=base,
                        text="identical text here")
            for i in ["b2", "a1", "c3"]
        ]
        index, _ = build_index(ingest_corpus(records, "ties"))
        got = query_top_k(index, embed_text("identical text here"), 3)
        assert [i for i, _ in got] == ["a1", "b2", "c3"]

    def test_dimension_mismatch(self, small_index):
        with pytest.raises(DimensionMismatch):
            query_top_k(small_index, np.ones(5), 3)

    def test_matches_oracle_1000_queries(self):
        index, _ = build_index(synth_corpus(1000, seed=11))
        queries = synth_texts(1000, seed=13)
        for text in queries:
            q = embed_text(text)
            assert query_top_k(index, q, 8) == linear_scan_oracle(index, q, 8)

    def test_scoped_matches_oracle(self):
        index, _ = build_index(synth_corpus(300, seed=17))
        rng = random.Random(19)
        for text in synth_texts(50, seed=23):
            scope = set(rng.sample(index.ids, 40))
            q = embed_text(text)
            assert query_top_k(index, q, 8, scope) == linear_scan_oracle(index, q, 8, scope)


class TestPersistence:
    def test_round_trip(self, small_index, tmp_path):
        path = tmp_path / "index.vec"
        save_index(small_index, path)
        loaded = load_index(path)
        assert loaded.ids == small_index.ids
        for artifact_id in small_index.ids:
            assert loaded.vector(artifact_id).tobytes() == \
                small_index.vector(artifact_id).tobytes()
        q = embed_text("keyboard feels mushy")
        assert query_top_k(loaded, q, 8) == query_top_k(small_index, q, 8)

    def test_rejects_foreign_file(self, tmp_path):
        path = tmp_path / "junk.vec"
        path.write_bytes(b"not an index")
        with pytest.raises(ValueError):
            load_index(path)
