"""Deterministic reference text embedder.

Hashed character-trigram bag: each lowercased trigram is hashed with
64-bit FNV-1a into one of DIM buckets, weighted by term frequency, then
L2-normalized. Byte-identical inputs produce byte-identical vectors, with
no model download and no seeds. Production embedders can substitute
behind the same contract.
"""

from __future__ import annotations

import re

import numpy as np

from .errors import DimensionMismatch, EmptyText

DIM = 256

# Retrieval and support scores are quantized to this many decimals before
# ranking or comparison. Sub-ulp differences between equally valid float
# summation orders (BLAS matvec vs scalar dot, across platforms) must never
# change an ordering; 1e-12 is far below any true score gap between
# distinct trigram bags at corpus scale.
SCORE_DECIMALS = 12

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_U64 = (1 << 64) - 1

_WS_RE = re.compile(r"\s+")


def _fnv1a_64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * _FNV_PRIME) & _U64
    return h


def trigrams(text: str) -> list[str]:
    """Character trigrams of the lowercased, whitespace-collapsed text.

    Texts shorter than three characters yield the whole text as a single
    token so that every non-empty input embeds to a non-zero vector.
    """
    norm = _WS_RE.sub(" ", text.strip().lower())
    if len(norm) < 3:
        return [norm]
    return [norm[i:i + 3] for i in range(len(norm) - 2)]


def bucket(trigram: str) -> int:
    """Index of the hash bucket a trigram falls into."""
    return _fnv1a_64(trigram.encode("utf-8")) % DIM


def embed_text(text: str) -> np.ndarray:
    """Embed non-empty text into a unit vector of dimension DIM."""
    if not text or not text.strip():
        raise EmptyText("cannot embed empty text")
    vec = np.zeros(DIM, dtype=np.float64)
    for gram in trigrams(text):
        vec[bucket(gram)] += 1.0
    return vec / np.linalg.norm(vec)


def quantize_score(value: float) -> float:
    """Round a similarity score for platform-stable ordering."""
    return round(value, SCORE_DECIMALS)


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine of two embedding vectors; plain dot product for unit vectors."""
    if a.shape != (DIM,) or b.shape != (DIM,):
        raise DimensionMismatch(
            f"expected vectors of dimension {DIM}, got {a.shape} and {b.shape}"
        )
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a, b) / (na * nb))
