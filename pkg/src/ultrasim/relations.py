"""Exact algebra of binary relations on a finite indexed point set.

Relations are stored as dense boolean adjacency matrices, partitions as dense
block-id arrays.  Everything is immutable after construction and every
operation is a pure function, so values can be shared freely.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError

__all__ = [
    "Relation",
    "RelationReport",
    "Partition",
    "PairPartition",
    "compose",
    "transitive_closure",
    "classify",
    "partition_from_equivalence",
    "equivalence_from_partition",
    "refines",
    "tensor_partition",
]


def _bool_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a.astype(np.uint8) @ b.astype(np.uint8)).astype(bool)


def _first_pair(mask: np.ndarray) -> tuple[int, int] | None:
    """Lexicographically least True position of a 2-d boolean mask."""
    hits = np.argwhere(mask)
    if hits.size == 0:
        return None
    x, y = hits[0]
    return int(x), int(y)


def _frozen(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class Relation:
    """A binary relation on points 0..n-1, as an n-by-n boolean table."""

    adjacency: np.ndarray

    def __post_init__(self):
        arr = np.array(self.adjacency, dtype=bool)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise InputError(f"adjacency must be square, got shape {arr.shape}")
        if arr.shape[0] == 0:
            raise InputError("relation needs a positive point count")
        object.__setattr__(self, "adjacency", _frozen(arr))

    @property
    def size(self) -> int:
        return self.adjacency.shape[0]

    @classmethod
    def from_pairs(cls, size: int, pairs: Iterable[tuple[int, int]]) -> "Relation":
        arr = np.zeros((size, size), dtype=bool)
        for x, y in pairs:
            arr[x, y] = True
        return cls(arr)

    @classmethod
    def identity(cls, size: int) -> "Relation":
        return cls(np.eye(size, dtype=bool))

    @classmethod
    def empty(cls, size: int) -> "Relation":
        return cls(np.zeros((size, size), dtype=bool))

    def pairs(self) -> list[tuple[int, int]]:
        return [(int(x), int(y)) for x, y in np.argwhere(self.adjacency)]

    def __contains__(self, pair: tuple[int, int]) -> bool:
        x, y = pair
        return bool(self.adjacency[x, y])

    def __or__(self, other: "Relation") -> "Relation":
        if self.size != other.size:
            raise InputError("size mismatch")
        return Relation(self.adjacency | other.adjacency)

    def transpose(self) -> "Relation":
        return Relation(self.adjacency.T.copy())

    def issubset(self, other: "Relation") -> bool:
        return self.size == other.size and bool(
            (~self.adjacency | other.adjacency).all()
        )

    def __eq__(self, other):
        if not isinstance(other, Relation):
            return NotImplemented
        return self.size == other.size and bool(
            (self.adjacency == other.adjacency).all()
        )

    def __hash__(self):
        return hash((self.size, self.adjacency.tobytes()))

    def __repr__(self):
        return f"Relation({self.size}, {self.pairs()!r})"


def compose(r: Relation, s: Relation) -> Relation:
    """Relational composition: (x, y) present iff some z has (x, z) in r and (z, y) in s."""
    if r.size != s.size:
        raise InputError(f"size mismatch: {r.size} vs {s.size}")
    return Relation(_bool_matmul(r.adjacency, s.adjacency))


def transitive_closure(r: Relation) -> Relation:
    """Smallest transitive relation containing r (Warshall fixpoint)."""
    adj = r.adjacency.copy()
    n = r.size
    for k in range(n):
        adj |= adj[:, k : k + 1] & adj[k : k + 1, :]
    return Relation(adj)


@dataclass(frozen=True)
class RelationReport:
    """Property flags for a relation, with the least failing pair for each false flag."""

    reflexive: bool
    symmetric: bool
    transitive: bool
    antisymmetric: bool
    reflexive_witness: tuple[int, int] | None = None
    symmetric_witness: tuple[int, int] | None = None
    transitive_witness: tuple[int, int] | None = None
    antisymmetric_witness: tuple[int, int] | None = None

    @property
    def is_equivalence(self) -> bool:
        return self.reflexive and self.symmetric and self.transitive

    @property
    def is_partial_order(self) -> bool:
        return self.reflexive and self.antisymmetric and self.transitive


def classify(r: Relation) -> RelationReport:
    """Check reflexivity, symmetry, transitivity and antisymmetry.

    Witnesses: the missing diagonal point (x, x); the least (x, y) in r with
    (y, x) absent; the least absent (x, y) reachable through some middle
    point; the least x != y present in both directions.
    """
    adj = r.adjacency
    n = r.size
    diag = np.diagonal(adj)
    refl_w = None
    if not diag.all():
        x = int(np.flatnonzero(~diag)[0])
        refl_w = (x, x)
    sym_w = _first_pair(adj & ~adj.T)
    off = ~np.eye(n, dtype=bool)
    anti_w = _first_pair(adj & adj.T & off)
    trans_w = _first_pair(_bool_matmul(adj, adj) & ~adj)
    return RelationReport(
        reflexive=refl_w is None,
        symmetric=sym_w is None,
        transitive=trans_w is None,
        antisymmetric=anti_w is None,
        reflexive_witness=refl_w,
        symmetric_witness=sym_w,
        transitive_witness=trans_w,
        antisymmetric_witness=anti_w,
    )


@dataclass(frozen=True, eq=False)
class Partition:
    """A partition of points 0..n-1 into blocks.

    Block ids are dense and canonical: block b is the one whose least member
    precedes the least member of block b+1.
    """

    block_of: np.ndarray

    def __post_init__(self):
        arr = np.array(self.block_of, dtype=np.int64)
        if arr.ndim != 1 or arr.shape[0] == 0:
            raise InputError("block_of must be a nonempty 1-d array")
        seen: list[int] = []
        for b in arr:
            if b not in seen:
                if int(b) != len(seen):
                    raise InputError(
                        "block ids must be dense and ordered by least member"
                    )
                seen.append(int(b))
        object.__setattr__(self, "block_of", _frozen(arr))

    @property
    def size(self) -> int:
        return self.block_of.shape[0]

    @property
    def block_count(self) -> int:
        return int(self.block_of.max()) + 1

    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.block_count)]
        for x, b in enumerate(self.block_of):
            out[int(b)].append(x)
        return out

    @classmethod
    def from_blocks(cls, blocks: Sequence[Iterable[int]], size: int | None = None) -> "Partition":
        members = [sorted(set(block)) for block in blocks]
        flat = [x for block in members for x in block]
        if size is None:
            size = len(flat)
        if sorted(flat) != list(range(size)):
            raise InputError("blocks must partition 0..n-1")
        members.sort(key=lambda block: block[0])
        arr = np.zeros(size, dtype=np.int64)
        for b, block in enumerate(members):
            for x in block:
                arr[x] = b
        return cls(arr)

    @classmethod
    def singletons(cls, size: int) -> "Partition":
        return cls(np.arange(size, dtype=np.int64))

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return self.size == other.size and bool((self.block_of == other.block_of).all())

    def __hash__(self):
        return hash((self.size, self.block_of.tobytes()))

    def __repr__(self):
        return f"Partition({self.blocks()!r})"


def partition_from_equivalence(r: Relation) -> Partition:
    """Blocks are the equivalence classes of r, ids assigned by least member."""
    report = classify(r)
    if not report.is_equivalence:
        raise InputError(
            f"relation is not an equivalence: {report}", details=report
        )
    n = r.size
    block_of = np.full(n, -1, dtype=np.int64)
    next_id = 0
    for x in range(n):
        if block_of[x] < 0:
            block_of[r.adjacency[x]] = next_id
            next_id += 1
    return Partition(block_of)


def equivalence_from_partition(p: Partition) -> Relation:
    """The equivalence relation whose classes are p's blocks."""
    bo = p.block_of
    return Relation(bo[:, None] == bo[None, :])


def _labels_refine(fine: np.ndarray, coarse: np.ndarray) -> bool:
    """True iff every fine-label class is contained in a single coarse-label class."""
    seen: dict[int, int] = {}
    for f, c in zip(fine.tolist(), coarse.tolist()):
        if f in seen:
            if seen[f] != c:
                return False
        else:
            seen[f] = c
    return True


def refines(p1: Partition, p2: Partition) -> bool:
    """True iff every block of p1 is contained in some block of p2."""
    if p1.size != p2.size:
        raise InputError("size mismatch")
    return _labels_refine(p1.block_of, p2.block_of)


@dataclass(frozen=True, eq=False)
class PairPartition:
    """A partition of the n*n ordered point pairs; block_of[x, y] is the block id."""

    block_of: np.ndarray

    def __post_init__(self):
        arr = np.array(self.block_of, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise InputError("block_of must be square and nonempty")
        ids = np.unique(arr)
        if ids[0] != 0 or ids[-1] != ids.size - 1:
            raise InputError("pair-partition block ids must be dense from 0")
        object.__setattr__(self, "block_of", _frozen(arr))

    @property
    def size(self) -> int:
        return self.block_of.shape[0]

    @property
    def block_count(self) -> int:
        return int(self.block_of.max()) + 1

    def block_pairs(self, block: int) -> list[tuple[int, int]]:
        return [(int(x), int(y)) for x, y in np.argwhere(self.block_of == block)]

    def refines(self, other: "PairPartition") -> bool:
        if self.size != other.size:
            raise InputError("size mismatch")
        return _labels_refine(self.block_of.ravel(), other.block_of.ravel())

    def __eq__(self, other):
        if not isinstance(other, PairPartition):
            return NotImplemented
        return self.size == other.size and bool((self.block_of == other.block_of).all())

    def __hash__(self):
        return hash((self.size, self.block_of.tobytes()))


def tensor_partition(p: Partition) -> PairPartition:
    """Partition of ordered pairs induced by p.

    Block 0 collects every within-block pair (the union of the blocks'
    Cartesian squares); each ordered pair (j1, j2) of distinct blocks
    contributes the block X_j1 x X_j2, numbered in (j1, j2) order.  Block
    count is therefore 1 + b*(b-1).
    """
    bo = p.block_of
    b = p.block_count
    j1 = bo[:, None]
    j2 = bo[None, :]
    cross = 1 + j1 * (b - 1) + np.where(j2 < j1, j2, j2 - 1)
    return PairPartition(np.where(j1 == j2, 0, cross))
