"""Shared text primitives: tokenization, stopwords, sentence splitting.

The sentence splitter here is the single definition used by generation,
claim verification, and stimulus facet extraction, so that a "claim" means
the same thing everywhere.
"""

from __future__ import annotations

import re

# Fixed built-in English stopword list. Shipped in-repo so that label
# ranking and overlap scores are reproducible across deployments.
STOPWORDS = frozenset("""
a about above after again against all am an and any are aren't as at be
because been before being below between both but by can cannot could
couldn't did didn't do does doesn't doing don't down during each few for
from further had hadn't has hasn't have haven't having he her here hers
herself him himself his how i if in into is isn't it its itself just me
more most mustn't my myself no nor not of off on once only or other ought
our ours ourselves out over own same shan't she should shouldn't so some
such than that the their theirs them themselves then there these they
this those through to too under until up very was wasn't we were weren't
what when where which while who whom why will with won't would wouldn't
you your yours yourself yourselves
""".split())

_WORD_RE = re.compile(r"[a-z0-9']+")

# Sentence terminators followed by whitespace or end of text.
_SENTENCE_BOUNDARY = re.compile(r"(?<=[.!?])(?=\s|$)")

_MIN_FRAGMENT_LEN = 3


def tokens(text: str) -> list[str]:
    """Lowercased word tokens, in order of appearance."""
    return _WORD_RE.findall(text.lower())


def content_words(text: str) -> set[str]:
    """Distinct lowercased tokens with stopwords removed."""
    return {t for t in tokens(text) if t not in STOPWORDS}


def split_sentences(text: str) -> list[str]:
    """Split text into sentences on ".", "!", "?" at a whitespace boundary.

    Each piece is trimmed. Unterminated trailing fragments shorter than
    three characters are dropped; pieces that end in a terminator are kept
    regardless of length ("A. B!" splits to ["A.", "B!"], while a bare
    "ok" yields nothing).
    """
    out = []
    for piece in _SENTENCE_BOUNDARY.split(text):
        piece = piece.strip()
        if not piece:
            continue
        if piece[-1] in ".!?" or len(piece) >= _MIN_FRAGMENT_LEN:
            out.append(piece)
    return out


def jaccard(a: set[str], b: set[str]) -> float:
    """Jaccard overlap of two sets; 0.0 when the union is empty."""
    if not a and not b:
        return 0.0
    union = a | b
    return len(a & b) / len(union)
