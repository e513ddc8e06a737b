"""Shared fixtures: the planted-topic corpus, derived personas, and the
seeded ungrounded-mutation generator."""

import random
from datetime import datetime, timezone

import pytest

from vocpersona.embedding import bucket, cosine_similarity, embed_text, trigrams
from vocpersona.fixtures import FIXTURE_SEED, fixture_corpus, persona_by_topic
from vocpersona.index import build_index
from vocpersona.personas import cluster_topics, derive_personas

FIXED_NOW = datetime(2024, 7, 15, 12, 0, 0, tzinfo=timezone.utc)


def fixed_clock():
    return FIXED_NOW


@pytest.fixture(scope="session")
def planted():
    """Corpus, index, personas, and topic map for the planted fixture."""
    corpus = fixture_corpus()
    index, diagnostics = build_index(corpus)
    assert diagnostics == []
    clusters = cluster_topics(index, 0.5)
    personas = derive_personas(clusters, corpus, min_cluster_size=5,
                               min_evidence=5)
    return {
        "corpus": corpus,
        "index": index,
        "clusters": clusters,
        "personas": personas,
        "by_topic": persona_by_topic(personas),
    }


# Nonsense vocabulary for ungrounded-claim injections. Words are filtered
# per target artifact so the final claim shares no trigram buckets worth
# of weight: near-zero overlap is verified, not assumed.
NONSENSE_VOCAB = (
    "quokka zyzzyva fjord sphinx kudzu vortex jinx krypton waltz quartz "
    "zephyr onyx lynx gizmo yucca pylon oxbow juju zigzag kazoo banjo "
    "igloo llama ninja sushi tofu yoyo echo aura"
).split()


def make_ungrounded_claim(artifact, rng: random.Random, max_cosine=0.06) -> str:
    """Seeded nonsense sentence verified to have near-zero overlap with
    the artifact it will cite: token-shuffled words individually
    bucket-disjoint from the artifact, with the assembled sentence's
    cosine checked below max_cosine."""
    body = artifact.retrievable_text()
    art_buckets = {bucket(g) for g in trigrams(body)}
    art_vec = embed_text(body)
    pool = [w for w in NONSENSE_VOCAB
            if not ({bucket(g) for g in trigrams(w)} & art_buckets)]
    for _ in range(100):
        words = rng.sample(pool, k=min(4, len(pool)))
        rng.shuffle(words)
        candidate = " ".join(words) + "."
        if cosine_similarity(embed_text(candidate), art_vec) < max_cosine:
            return candidate
    raise AssertionError(
        f"could not build an ungrounded claim for artifact {artifact.id}"
    )


def seeded_mutations(corpus, n, seed=FIXTURE_SEED):
    """n (artifact, nonsense claim) pairs with pre-verified near-zero overlap."""
    rng = random.Random(seed * 7 + 5)
    out = []
    for _ in range(n):
        artifact = rng.choice(corpus.artifacts)
        out.append((artifact, make_ungrounded_claim(artifact, rng)))
    return out
