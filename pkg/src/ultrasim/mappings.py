"""Finite symmetric value tables and their combinatorial invariants.

A :class:`FiniteMapping` assigns an opaque value label to every ordered pair
of points.  The checks in this module decide the structural properties that
govern whether such a table can be realized as a distance function: symmetry,
a constant diagonal, coherence with the diagonal value's fiber, absence of
scalene triples, and the shape of the value relation extracted from isosceles
triples.  Refutations are returned as :class:`Certificate` values that can be
re-checked against the mapping that produced them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import ClassVar, Iterable, Sequence

import numpy as np

from .errors import InputError
from .relations import (
    PairPartition,
    Relation,
    classify,
    compose,
    partition_from_equivalence,
    tensor_partition,
    transitive_closure,
    _first_pair,
    _frozen,
)

__all__ = [
    "canonical_label",
    "FiniteMapping",
    "validate",
    "Certificate",
    "Asymmetry",
    "NonConstantDiagonal",
    "NonCoherentQuadruple",
    "ScaleneTriple",
    "UCycle",
    "FiberNotDiagonal",
    "FiberNotEquivalence",
    "ValueRelation",
    "is_symmetric",
    "fiber",
    "fiber_partition",
    "diagonal_value",
    "is_coherent_direct",
    "is_coherent_composition",
    "is_coherent_refinement",
    "scalene_triple",
    "scalene_triples",
    "u_relation",
]

COHERENCE_VARIANTS = ("two-sided", "left", "right", "either")


def canonical_label(value) -> str:
    """Canonical string form of a value label.

    Numeric inputs (and numeric-looking strings) collapse to an exact rational
    rendering, so ``"1.50"``, ``"3/2"`` and ``Fraction(3, 2)`` all become
    ``"3/2"``.  Anything else is kept verbatim as an opaque label.  Floats are
    read through ``repr``, so ``0.1`` means one tenth, not its binary image.
    """
    if isinstance(value, bool):
        raise InputError(f"bool is not a usable value label: {value!r}")
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return str(Fraction(repr(value)))
    if isinstance(value, str):
        try:
            return str(Fraction(value))
        except (ValueError, ZeroDivisionError):
            return value
    raise InputError(f"unsupported value label type: {type(value).__name__}")


@dataclass(frozen=True, eq=False)
class FiniteMapping:
    """An n-by-n table of value labels over named points.

    ``table`` holds indices into ``values``; every value label occurs in the
    table (the label list is exactly the table's range), labels and point
    names are distinct, and n >= 1.
    """

    points: tuple[str, ...]
    values: tuple[str, ...]
    table: np.ndarray

    def __post_init__(self):
        points = tuple(self.points)
        values = tuple(self.values)
        if len(points) == 0:
            raise InputError("a mapping needs at least one point")
        if len(set(points)) != len(points):
            dup = next(p for p in points if points.count(p) > 1)
            raise InputError(f"duplicate point name: {dup!r}")
        if any(not isinstance(p, str) or p == "" for p in points):
            raise InputError("point names must be nonempty strings")
        if len(set(values)) != len(values):
            dup = next(v for v in values if values.count(v) > 1)
            raise InputError(f"duplicate value label: {dup!r}")
        arr = np.array(self.table, dtype=np.int64)
        n = len(points)
        if arr.shape != (n, n):
            raise InputError(f"table must be {n}x{n}, got {arr.shape}")
        if arr.size and (arr.min() < 0 or arr.max() >= len(values)):
            bad = _first_pair((arr < 0) | (arr >= len(values)))
            raise InputError(f"value index out of range at {bad}")
        used = np.zeros(len(values), dtype=bool)
        used[arr.ravel()] = True
        if not used.all():
            unused = values[int(np.flatnonzero(~used)[0])]
            raise InputError(f"unused value label: {unused!r}")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "table", _frozen(arr))
        object.__setattr__(
            self, "_value_index", {v: i for i, v in enumerate(values)}
        )

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def k(self) -> int:
        return len(self.values)

    def value_index(self, label: str) -> int:
        try:
            return self._value_index[label]
        except KeyError:
            raise InputError(f"unknown value label: {label!r}") from None

    def value_at(self, x: int, y: int) -> str:
        return self.values[int(self.table[x, y])]

    def label_rows(self) -> list[list[str]]:
        return [[self.values[int(v)] for v in row] for row in self.table]

    @classmethod
    def from_labels(
        cls,
        points: Sequence[str],
        rows: Sequence[Sequence],
        values: Sequence | None = None,
    ) -> "FiniteMapping":
        """Build a mapping from a table of labels, canonicalizing numerics.

        When ``values`` is omitted the label list is inferred in first
        occurrence (row-major) order.
        """
        canon_rows = [[canonical_label(v) for v in row] for row in rows]
        if values is None:
            ordered: list[str] = []
            seen = set()
            for row in canon_rows:
                for v in row:
                    if v not in seen:
                        seen.add(v)
                        ordered.append(v)
            values = ordered
        else:
            values = [canonical_label(v) for v in values]
        index = {v: i for i, v in enumerate(values)}
        if len(index) != len(values):
            raise InputError("duplicate value label after canonicalization")
        n = len(points)
        if len(canon_rows) != n or any(len(row) != n for row in canon_rows):
            raise InputError(f"table must be {n}x{n}")
        table = np.zeros((n, n), dtype=np.int64)
        for x, row in enumerate(canon_rows):
            for y, v in enumerate(row):
                if v not in index:
                    raise InputError(f"table entry {v!r} not in value list")
                table[x, y] = index[v]
        return cls(tuple(points), tuple(values), table)

    def __eq__(self, other):
        if not isinstance(other, FiniteMapping):
            return NotImplemented
        return (
            self.points == other.points
            and self.values == other.values
            and bool((self.table == other.table).all())
        )

    def __hash__(self):
        return hash((self.points, self.values, self.table.tobytes()))

    def __repr__(self):
        return f"FiniteMapping(points={self.points!r}, values={self.values!r})"


def validate(points, values, table) -> FiniteMapping:
    """Construct a mapping from raw parts, raising InputError on the first violation."""
    return FiniteMapping(tuple(points), tuple(values), table)


# ---------------------------------------------------------------------------
# Certificates


@dataclass(frozen=True)
class Certificate:
    """A refutation witness, re-checkable against the mapping it came from."""

    kind: ClassVar[str] = "certificate"

    def verify(self, m: FiniteMapping) -> bool:
        raise NotImplementedError

    def payload(self) -> dict:
        return {k: v for k, v in self.__dict__.items()}

    def to_json(self) -> dict:
        doc = {"certificate": self.kind}
        doc.update(self.payload())
        return doc


@dataclass(frozen=True)
class Asymmetry(Certificate):
    """Points x, y with table[x, y] != table[y, x]."""

    x: int
    y: int
    kind: ClassVar[str] = "asymmetry"

    def verify(self, m: FiniteMapping) -> bool:
        return m.table[self.x, self.y] != m.table[self.y, self.x]


@dataclass(frozen=True)
class NonConstantDiagonal(Certificate):
    """Points x, y with table[x, x] != table[y, y]."""

    x: int
    y: int
    kind: ClassVar[str] = "non-constant-diagonal"

    def verify(self, m: FiniteMapping) -> bool:
        return m.table[self.x, self.x] != m.table[self.y, self.y]


@dataclass(frozen=True)
class NonCoherentQuadruple(Certificate):
    """Pairs (x1, x2) and (x3, x4) in the a0-fiber whose cross values differ.

    Substituting x2 for x1 and x4 for x3 changes the observed value from
    value_a to value_b, so the mapping is not coherent at a0.
    """

    x1: int
    x2: int
    x3: int
    x4: int
    value_a: str
    value_b: str
    a0: str
    kind: ClassVar[str] = "non-coherent-quadruple"

    def verify(self, m: FiniteMapping) -> bool:
        return (
            m.value_at(self.x1, self.x2) == self.a0
            and m.value_at(self.x3, self.x4) == self.a0
            and m.value_at(self.x1, self.x3) == self.value_a
            and m.value_at(self.x2, self.x4) == self.value_b
            and self.value_a != self.value_b
        )


@dataclass(frozen=True)
class ScaleneTriple(Certificate):
    """Three points whose three side values are pairwise distinct."""

    x1: int
    x2: int
    x3: int
    kind: ClassVar[str] = "scalene-triple"

    def verify(self, m: FiniteMapping) -> bool:
        a = m.table[self.x1, self.x2]
        b = m.table[self.x2, self.x3]
        c = m.table[self.x1, self.x3]
        return len({self.x1, self.x2, self.x3}) == 3 and len({int(a), int(b), int(c)}) == 3


@dataclass(frozen=True)
class UCycle(Certificate):
    """Distinct value labels forming a cycle in the transitive closure of the value relation."""

    labels: tuple[str, ...]
    kind: ClassVar[str] = "u-cycle"

    def verify(self, m: FiniteMapping) -> bool:
        if len(self.labels) < 2 or len(set(self.labels)) != len(self.labels):
            return False
        vr = u_relation(m)
        closed = transitive_closure(vr.relation)
        idx = [m.value_index(lbl) for lbl in self.labels]
        ring = list(zip(idx, idx[1:] + idx[:1]))
        return all(bool(closed.adjacency[i, j]) for i, j in ring)


@dataclass(frozen=True)
class FiberNotDiagonal(Certificate):
    """Distinct points x, y whose value equals the diagonal value a0."""

    x: int
    y: int
    a0: str
    kind: ClassVar[str] = "fiber-not-diagonal"

    def verify(self, m: FiniteMapping) -> bool:
        return self.x != self.y and m.value_at(self.x, self.y) == self.a0


@dataclass(frozen=True)
class FiberNotEquivalence(Certificate):
    """The a0-fiber fails reflexivity or symmetry at the witness pair."""

    a0: str
    failed: str  # 'reflexive' or 'symmetric'
    x: int
    y: int
    kind: ClassVar[str] = "fiber-not-equivalence"

    def verify(self, m: FiniteMapping) -> bool:
        if self.failed == "reflexive":
            return self.x == self.y and m.value_at(self.x, self.x) != self.a0
        if self.failed == "symmetric":
            return (
                m.value_at(self.x, self.y) == self.a0
                and m.value_at(self.y, self.x) != self.a0
            )
        return False


# ---------------------------------------------------------------------------
# Structural checks


def is_symmetric(m: FiniteMapping):
    """True, or an Asymmetry certificate for the least unordered pair."""
    bad = _first_pair(m.table != m.table.T)
    if bad is None:
        return True
    return Asymmetry(*bad)


def fiber(m: FiniteMapping, label: str) -> Relation:
    """The relation of point pairs whose table entry is ``label``."""
    return Relation(m.table == m.value_index(label))


def fiber_partition(m: FiniteMapping) -> PairPartition:
    """Partition of the ordered pairs by value; block ids are the value indices."""
    return PairPartition(m.table.copy())


def diagonal_value(m: FiniteMapping):
    """The constant diagonal label, or a NonConstantDiagonal certificate."""
    diag = np.diagonal(m.table)
    differs = diag != diag[0]
    if differs.any():
        return NonConstantDiagonal(0, int(np.flatnonzero(differs)[0]))
    return m.values[int(diag[0])]


def _least_quadruple(m: FiniteMapping, a0_idx: int, rows: Iterable[int]):
    """Least (x1, x2, x3, x4) violating coherence, scanning x1 over ``rows``.

    For each fiber pair (x1, x2) in index order, the inner mask finds the
    least fiber pair (x3, x4) with table[x1, x3] != table[x2, x4].
    """
    table = m.table
    in_fiber = table == a0_idx
    for x1 in rows:
        for x2 in np.flatnonzero(in_fiber[x1]):
            diff = in_fiber & (table[x1][:, None] != table[int(x2)][None, :])
            hit = _first_pair(diff)
            if hit is not None:
                x3, x4 = hit
                return NonCoherentQuadruple(
                    int(x1),
                    int(x2),
                    x3,
                    x4,
                    value_a=m.value_at(int(x1), x3),
                    value_b=m.value_at(int(x2), x4),
                    a0=m.values[a0_idx],
                )
    return None


def is_coherent_direct(m: FiniteMapping, a0: str):
    """Coherence at a0 by definition: substituting fiber-equivalent points never changes a value.

    Returns True, a FiberNotEquivalence certificate when the a0-fiber fails
    reflexivity or symmetry, or the least NonCoherentQuadruple otherwise.  A
    reflexive and symmetric but non-transitive fiber always yields a
    quadruple (take the missing pair against a diagonal pair), so fiber
    transitivity needs no separate certificate.
    """
    a0_idx = m.value_index(a0)
    in_fiber = m.table == a0_idx
    diag = np.diagonal(in_fiber)
    if not diag.all():
        x = int(np.flatnonzero(~diag)[0])
        return FiberNotEquivalence(a0, "reflexive", x, x)
    asym = _first_pair(in_fiber & ~in_fiber.T)
    if asym is not None:
        return FiberNotEquivalence(a0, "symmetric", *asym)

    fiber_rel = Relation(in_fiber)
    report = classify(fiber_rel)
    if report.transitive:
        # Fast path: coherence holds iff each cross-class block is constant.
        part = partition_from_equivalence(fiber_rel)
        blocks = part.blocks()
        bad_first = sorted(
            {
                j1
                for j1 in range(len(blocks))
                for j2 in range(len(blocks))
                if j1 != j2
                and np.unique(m.table[np.ix_(blocks[j1], blocks[j2])]).size > 1
            }
        )
        if not bad_first:
            return True
        rows = sorted(x for j in bad_first for x in blocks[j])
    else:
        rows = range(m.n)
    quad = _least_quadruple(m, a0_idx, rows)
    if quad is None:
        raise AssertionError("coherence violation vanished during witness scan")
    return quad


def is_coherent_composition(m: FiniteMapping, a0: str, variant: str = "two-sided") -> bool:
    """Coherence at a0 via fiber-composition identities.

    With R the a0-fiber, the variants test, for every value b with fiber F:
    ``two-sided``: F == R;F;R, ``left``: F == R;F, ``right``: F == F;R,
    ``either``: per value, at least one of left/right.  False when R is not
    an equivalence relation.
    """
    if variant not in COHERENCE_VARIANTS:
        raise InputError(f"unknown variant {variant!r}, expected one of {COHERENCE_VARIANTS}")
    r = fiber(m, a0)
    if not classify(r).is_equivalence:
        return False
    for label in m.values:
        fb = fiber(m, label)
        if variant == "two-sided":
            ok = compose(compose(r, fb), r) == fb
        elif variant == "left":
            ok = compose(r, fb) == fb
        elif variant == "right":
            ok = compose(fb, r) == fb
        else:
            ok = compose(r, fb) == fb or compose(fb, r) == fb
        if not ok:
            return False
    return True


def is_coherent_refinement(m: FiniteMapping, a0: str) -> bool:
    """Coherence at a0 via partitions: the pair partition induced by the
    fiber's classes must refine the partition of pairs by value.  False when
    the fiber is not an equivalence relation."""
    r = fiber(m, a0)
    if not classify(r).is_equivalence:
        return False
    part = partition_from_equivalence(r)
    return tensor_partition(part).refines(fiber_partition(m))


def scalene_triple(m: FiniteMapping):
    """Least triple x1 < x2 < x3 whose three side values are pairwise distinct, else None."""
    table = m.table
    n = m.n
    for x1 in range(n - 2):
        a = table[x1]  # a[x2] = value(x1, x2); also value(x1, x3) by column
        distinct = (
            (a[:, None] != table) & (table != a[None, :]) & (a[:, None] != a[None, :])
        )
        upper = np.triu(np.ones((n, n), dtype=bool), k=1)
        upper[: x1 + 1, :] = False
        hit = _first_pair(distinct & upper)
        if hit is not None:
            return ScaleneTriple(x1, hit[0], hit[1])
    return None


def scalene_triples(m: FiniteMapping) -> list[ScaleneTriple]:
    """All scalene triples in lexicographic order."""
    out = []
    n = m.n
    t = m.table
    for x1 in range(n - 2):
        for x2 in range(x1 + 1, n - 1):
            for x3 in range(x2 + 1, n):
                if len({int(t[x1, x2]), int(t[x2, x3]), int(t[x1, x3])}) == 3:
                    out.append(ScaleneTriple(x1, x2, x3))
    return out


@dataclass(frozen=True)
class ValueRelation:
    """A relation on a mapping's value labels."""

    values: tuple[str, ...]
    relation: Relation

    def __post_init__(self):
        if len(self.values) != self.relation.size:
            raise InputError("value list and relation size disagree")

    def pairs(self) -> set[tuple[str, str]]:
        return {(self.values[x], self.values[y]) for x, y in self.relation.pairs()}

    def __contains__(self, pair: tuple[str, str]) -> bool:
        v1, v2 = pair
        return (self.values.index(v1), self.values.index(v2)) in self.relation


def u_relation(m: FiniteMapping) -> ValueRelation:
    """The base-precedes-legs relation on values.

    (v1, v2) is present iff some triple of points x1, x2, x3 has
    table[x1, x3] = v1 and table[x1, x2] = table[x2, x3] = v2.  The points
    need NOT be distinct: degenerate triples such as (y, x, y) are included
    deliberately, which is what forces (diagonal value, v) into the relation
    for every value v.  Requires a symmetric mapping.
    """
    sym = is_symmetric(m)
    if sym is not True:
        raise InputError(f"u_relation needs a symmetric mapping: {sym}")
    n, k = m.n, m.k
    table = m.table
    adj = np.zeros((k, k), dtype=bool)
    for x2 in range(n):
        legs_in = table[:, x2]  # value(x1, x2)
        legs_out = table[x2, :]  # value(x2, x3)
        equal_legs = legs_in[:, None] == legs_out[None, :]
        bases = table[equal_legs]
        legs = np.broadcast_to(legs_in[:, None], (n, n))[equal_legs]
        adj[bases, legs] = True
    return ValueRelation(m.values, Relation(adj))
