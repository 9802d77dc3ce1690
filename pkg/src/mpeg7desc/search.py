"""Exact linear-scan k-NN over descriptor collections."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cld import CldWeights, cld_distances
from .descriptor_io import Kind, SynsetFile
from .ehd import ehd_distances
from .errors import DimensionMismatch, DuplicateId, KindMismatch


@dataclass(frozen=True, eq=False)
class DescriptorIndex:
    kind: Kind
    ids: list[str]
    values: np.ndarray  # (n, kind.dim) uint8
    synsets: list[str] = field(default_factory=list)
    # rank of each id in lexicographic order, used as the tie-break key
    id_rank: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.values.shape != (len(self.ids), self.kind.dim):
            raise DimensionMismatch(
                f"values shape {self.values.shape} for {len(self.ids)} {self.kind.name} entries"
            )
        if self.id_rank is None:
            rank = np.empty(len(self.ids), dtype=np.int64)
            rank[np.argsort(np.array(self.ids, dtype=object), kind="stable")] = np.arange(len(self.ids))
            object.__setattr__(self, "id_rank", rank)

    def __len__(self) -> int:
        return len(self.ids)


def build_index(files: list[SynsetFile], kind: Kind | None = None) -> DescriptorIndex:
    """Concatenate synset files of one kind; image ids must be globally unique."""
    kinds = {f.kind for f in files}
    if kind is not None:
        kinds.add(kind)
    if len(kinds) > 1:
        raise KindMismatch(f"mixed descriptor kinds: {sorted(k.name for k in kinds)}")
    if not kinds:
        raise ValueError("cannot infer the kind of an empty index; pass kind=")
    kind = kinds.pop()

    ids, rows, owner = [], [], {}
    for f in files:
        for rec in f.records:
            if rec.image_id in owner:
                raise DuplicateId(
                    f"{rec.image_id!r} appears in {owner[rec.image_id]} and {f.synset_id}"
                )
            owner[rec.image_id] = f.synset_id
            ids.append(rec.image_id)
            rows.append(rec.values)
    values = np.array(rows, dtype=np.uint8).reshape(len(ids), kind.dim)
    return DescriptorIndex(kind, ids, values, [f.synset_id for f in files])


@dataclass(frozen=True)
class QueryResult:
    hits: list[tuple[str, float]]

    def __len__(self):
        return len(self.hits)

    def __iter__(self):
        return iter(self.hits)


def distances(index: DescriptorIndex, query, weights: CldWeights | None = None) -> np.ndarray:
    q = np.asarray(query)
    if q.shape != (index.kind.dim,):
        raise DimensionMismatch(f"query has shape {q.shape}, index expects ({index.kind.dim},)")
    if index.kind is Kind.CLD:
        return cld_distances(index.values, q, weights)
    return ehd_distances(index.values, q)


def knn_query(index: DescriptorIndex, query, k: int,
              weights: CldWeights | None = None) -> QueryResult:
    """The ``k`` nearest entries, ascending distance, ties by image_id."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if len(index) == 0:
        return QueryResult([])
    d = distances(index, query, weights)
    order = np.lexsort((index.id_rank, d))[:k]
    return QueryResult([(index.ids[i], float(d[i])) for i in order])
