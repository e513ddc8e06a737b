"""Exact top-k cosine index over artifact vectors.

No approximate search: corpora at the target scale do not need it, and an
exact scan keeps results oracle-checkable. The index is sealed after build
and safe to share across concurrent readers.
"""

from __future__ import annotations

import struct
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .corpus import Corpus, LineDiagnostic
from .embedding import DIM, SCORE_DECIMALS, embed_text
from .errors import DimensionMismatch, EmptyText

_MAGIC = b"VOCIDX1\n"


class VectorIndex:
    """Immutable mapping of artifact id -> unit embedding vector."""

    def __init__(self, ids: Sequence[str], matrix: np.ndarray):
        if matrix.ndim != 2 or matrix.shape[1] != DIM:
            raise DimensionMismatch(f"index matrix must be (n, {DIM})")
        if len(ids) != matrix.shape[0]:
            raise ValueError("ids and matrix row count differ")
        self._ids = tuple(ids)
        self._matrix = matrix
        self._matrix.setflags(write=False)
        self._row_of = {artifact_id: row for row, artifact_id in enumerate(self._ids)}
        # Rank of each row when ids are sorted ascending; used to break
        # score ties deterministically.
        order = sorted(range(len(self._ids)), key=lambda r: self._ids[r])
        self._id_rank = np.empty(len(self._ids), dtype=np.int64)
        for rank, row in enumerate(order):
            self._id_rank[row] = rank

    def __len__(self) -> int:
        return len(self._ids)

    def __contains__(self, artifact_id: str) -> bool:
        return artifact_id in self._row_of

    @property
    def ids(self) -> tuple[str, ...]:
        return self._ids

    def vector(self, artifact_id: str) -> np.ndarray:
        return self._matrix[self._row_of[artifact_id]]


def build_index(corpus: Corpus) -> tuple[VectorIndex, list[LineDiagnostic]]:
    """Embed every artifact exactly once and seal the index.

    Artifacts whose retrievable text is empty are skipped with a
    diagnostic instead of failing the build.
    """
    ids: list[str] = []
    rows: list[np.ndarray] = []
    diagnostics: list[LineDiagnostic] = []
    for position, artifact in enumerate(corpus.artifacts, start=1):
        try:
            rows.append(embed_text(artifact.retrievable_text()))
        except EmptyText:
            diagnostics.append(
                LineDiagnostic(position, f"artifact {artifact.id!r}: empty text, skipped")
            )
            continue
        ids.append(artifact.id)
    matrix = np.vstack(rows) if rows else np.empty((0, DIM), dtype=np.float64)
    return VectorIndex(ids, matrix), diagnostics


def query_top_k(
    index: VectorIndex,
    query: np.ndarray,
    k: int,
    scope: Iterable[str] | None = None,
) -> list[tuple[str, float]]:
    """Exact top-k by cosine within scope.

    Results are ordered by score descending, artifact id ascending on
    ties; fewer than k are returned when the scope is smaller. k == 0
    yields an empty list. Scores are quantized to SCORE_DECIMALS so the
    ordering is identical across summation orders and platforms.
    """
    if query.shape != (DIM,):
        raise DimensionMismatch(f"query must have dimension {DIM}")
    if k <= 0 or len(index) == 0:
        return []
    if scope is None:
        rows = np.arange(len(index))
    else:
        rows = np.array(
            sorted(index._row_of[i] for i in scope if i in index._row_of),
            dtype=np.int64,
        )
        if rows.size == 0:
            return []
    scores = np.round(index._matrix[rows] @ query, SCORE_DECIMALS)
    # lexsort: primary key last -> sort by -score, ties by ascending id rank.
    order = np.lexsort((index._id_rank[rows], -scores))[:k]
    return [(index._ids[rows[i]], float(scores[i])) for i in order]


def save_index(index: VectorIndex, path: Path) -> None:
    """Persist as a binary sidecar: magic, (DIM, count), then id + float rows."""
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<II", DIM, len(index)))
        for artifact_id in index.ids:
            encoded = artifact_id.encode("utf-8")
            fh.write(struct.pack("<H", len(encoded)))
            fh.write(encoded)
            fh.write(index.vector(artifact_id).astype("<f8").tobytes())


def load_index(path: Path) -> VectorIndex:
    with open(path, "rb") as fh:
        if fh.read(len(_MAGIC)) != _MAGIC:
            raise ValueError(f"{path} is not an index sidecar")
        dim, count = struct.unpack("<II", fh.read(8))
        if dim != DIM:
            raise DimensionMismatch(f"sidecar dimension {dim} != {DIM}")
        ids: list[str] = []
        matrix = np.empty((count, DIM), dtype=np.float64)
        for row in range(count):
            (id_len,) = struct.unpack("<H", fh.read(2))
            ids.append(fh.read(id_len).decode("utf-8"))
            matrix[row] = np.frombuffer(fh.read(8 * DIM), dtype="<f8")
    return VectorIndex(ids, matrix)
