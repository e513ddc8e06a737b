"""Seeded synthetic corpora for tests, demos, and acceptance checks.

The fixture corpus plants three dense topics (battery, screen, shipping)
that derive into three personas, plus two sparse gap topics (warranty,
invoice) carried by two artifacts each. Gap artifacts blend their host
topic's vocabulary so they join the host cluster, but two artifacts can
never satisfy the default sufficiency gate (n_min = 3), so questions
about a gap topic abstain while covered questions answer.

Everything is a pure function of the seed; identical seeds yield
byte-identical corpora.
"""

from __future__ import annotations

import random
from datetime import datetime, timedelta, timezone

from .corpus import Corpus, VocArtifact, ingest_corpus

FIXTURE_SEED = 20240601

_BASE_TIME = datetime(2024, 1, 3, 8, 0, tzinfo=timezone.utc)

_CHANNELS = ("social", "review", "support_ticket", "forum")

TOPIC_SENTENCES = {
    "battery": (
        "My battery drains so fast.",
        "The battery drains very fast after charging.",
        "Charging takes ages and the battery still drains fast.",
        "The power drains fast with this battery.",
        "Power drains so fast on this battery after charging.",
        "Battery drains fast overnight.",
        "This battery drains fast even after charging all night.",
        "The battery drains fast and the power is gone by noon.",
    ),
    "screen": (
        "The screen cracked easily.",
        "My screen cracked easily after a week.",
        "This screen cracked easily in my pocket.",
        "The screen cracked easily at low brightness.",
        "Screen cracked easily and the display is dim.",
        "The screen cracked easily and looks dim.",
        "My screen cracked easily right out of the box.",
        "The screen cracked easily twice.",
    ),
    "shipping": (
        "The shipping took two weeks.",
        "Shipping took forever and the package arrived late.",
        "Shipping took so long because the delivery was delayed.",
        "The shipping took weeks and the package arrived late.",
        "Shipping took two weeks and the delivery was delayed.",
        "My package arrived late and shipping took weeks.",
        "Shipping took ages and the package arrived damaged.",
        "The shipping took so long this time.",
    ),
}

TOPIC_QUESTIONS = {
    "battery": (
        "Does the battery drain fast?",
        "How fast does the battery drain after charging?",
        "Is the battery draining overnight?",
        "Does charging fix the battery drains?",
        "Is the power draining fast on this battery?",
        "Why does my battery drain so fast?",
        "Does the battery drain fast even after charging?",
        "Is the battery power gone by noon?",
    ),
    "screen": (
        "Has the screen cracked easily?",
        "Did your screen crack easily too?",
        "Is the screen cracked after a week?",
        "Why has the screen cracked so easily?",
        "Has this screen cracked easily in a pocket?",
        "Is the screen cracked and dim?",
        "Did the screen crack easily out of the box?",
        "Has the screen cracked easily twice?",
    ),
    "shipping": (
        "Did the shipping take two weeks?",
        "Has the package arrived late?",
        "Why did shipping take so long?",
        "Was the delivery delayed and the package late?",
        "Did shipping take weeks for you?",
        "Did the package arrive damaged?",
        "Has your package arrived late too?",
        "Did the shipping take forever?",
    ),
}

# Two artifacts per gap topic, embedded in a host topic cluster. The host
# prefix keeps them inside the host cluster; the gap vocabulary appears
# nowhere else in the corpus.
GAP_TOPICS = {
    "warranty": {
        "host": "battery",
        "sentences": (
            "My battery drains so fast after charging. My warranty claim got denied.",
            "The battery drains very fast after charging. No warranty coverage applied.",
        ),
        "questions": (
            "Was your warranty claim denied?",
            "Does warranty coverage include repairs?",
            "How do I file a warranty claim?",
            "Who approves warranty claims?",
            "Is warranty paperwork required when filing a claim?",
            "Can a denied warranty claim be appealed?",
        ),
    },
    "invoice": {
        "host": "shipping",
        "sentences": (
            "Shipping took forever and the package arrived late. My invoice total is wrong.",
            "The delivery was delayed and shipping took weeks. My invoice shows a double charge.",
        ),
        "questions": (
            "Is my invoice total wrong?",
            "Why does my invoice show a double charge?",
            "Can an invoice error be corrected?",
            "Who fixes an incorrect invoice?",
            "Was my invoice billed twice?",
            "Where can I dispute an invoice charge?",
        ),
    },
}

QUESTION_SUFFIXES = ("", " Be honest.", " Genuinely curious.", " No rush.")

TOPIC_ARTIFACT_COUNT = 98


def fixture_records(seed: int = FIXTURE_SEED) -> list[VocArtifact]:
    rng = random.Random(seed)
    records: list[VocArtifact] = []
    counter = 0

    def add(text: str, topic_tag: str):
        nonlocal counter
        records.append(VocArtifact(
            id=f"fx{counter:04d}",
            author_id=f"{topic_tag}-u{rng.randint(0, 23):02d}",
            channel=_CHANNELS[counter % len(_CHANNELS)],
            created_at=_BASE_TIME + timedelta(hours=13 * counter),
            text=text,
        ))
        counter += 1

    for topic, pool in TOPIC_SENTENCES.items():
        for _ in range(TOPIC_ARTIFACT_COUNT):
            first = rng.choice(pool)
            if rng.random() < 0.5:
                second = rng.choice(pool)
                text = first if second == first else f"{first} {second}"
            else:
                text = first
            add(text, topic)
    # Gap artifacts go last so their host clusters are well established
    # before they are assigned.
    for gap in GAP_TOPICS.values():
        for sentence in gap["sentences"]:
            add(sentence, gap["host"])
    return records


def fixture_corpus(seed: int = FIXTURE_SEED, corpus_id: str = "fixture") -> Corpus:
    """The standard planted-topic corpus (~300 artifacts)."""
    return ingest_corpus(
        fixture_records(seed), corpus_id,
        collection_methods=("synthetic fixture generator",),
        platforms=("fixture",),
    )


def topic_anchor_ids() -> dict[str, str]:
    """First artifact id of each planted topic, for mapping personas back
    to the topic they were planted from."""
    return {
        topic: f"fx{i * TOPIC_ARTIFACT_COUNT:04d}"
        for i, topic in enumerate(TOPIC_SENTENCES)
    }


def persona_by_topic(personas) -> dict:
    """Map planted topic name -> derived persona, via anchor membership."""
    anchors = topic_anchor_ids()
    out = {}
    for topic, anchor in anchors.items():
        for persona in personas:
            if anchor in persona.member_ids:
                out[topic] = persona
                break
    return out


def covered_questions(n: int, seed: int = FIXTURE_SEED) -> list[tuple[str, str]]:
    """(topic, question) pairs targeting the planted covered topics."""
    rng = random.Random(seed * 3 + 1)
    topics = list(TOPIC_QUESTIONS)
    out = []
    for i in range(n):
        topic = topics[i % len(topics)]
        question = rng.choice(TOPIC_QUESTIONS[topic]) + rng.choice(QUESTION_SUFFIXES)
        out.append((topic, question))
    return out


def gap_questions(n: int, seed: int = FIXTURE_SEED) -> list[tuple[str, str]]:
    """(host topic, question) pairs targeting the planted gap topics."""
    rng = random.Random(seed * 3 + 2)
    gaps = list(GAP_TOPICS)
    out = []
    for i in range(n):
        gap = gaps[i % len(gaps)]
        spec = GAP_TOPICS[gap]
        question = rng.choice(spec["questions"]) + rng.choice(QUESTION_SUFFIXES)
        out.append((spec["host"], question))
    return out


_SYNTH_VOCAB = (
    "battery screen shipping refund camera audio keyboard login update price "
    "support warranty display charger cable delivery package return invoice "
    "app crash freeze lag glitch bright dim loud quiet fast slow broken solid "
    "cheap premium sturdy flimsy smooth rough early late missing extra account "
    "billing subscription cancel renew trial upgrade downgrade sync backup "
    "export import search filter sort notify badge widget theme font layout"
).split()


def synthetic_corpus(n: int, seed: int, corpus_id: str = "synth") -> Corpus:
    """Unstructured word-soup corpus for retrieval-scale checks."""
    rng = random.Random(seed)
    records = [
        VocArtifact(
            id=f"s{i:06d}",
            author_id=f"u{i % 211}",
            channel=_CHANNELS[i % len(_CHANNELS)],
            created_at=_BASE_TIME + timedelta(minutes=29 * i),
            text=" ".join(rng.choices(_SYNTH_VOCAB, k=rng.randint(4, 12))),
        )
        for i in range(n)
    ]
    return ingest_corpus(records, corpus_id)


def synthetic_queries(n: int, seed: int) -> list[str]:
    rng = random.Random(seed)
    return [" ".join(rng.choices(_SYNTH_VOCAB, k=rng.randint(3, 9)))
            for _ in range(n)]
