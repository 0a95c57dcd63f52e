"""Finite posets, linear extensions and order embeddings.

The central construction is :func:`minimal_order`: the transitive closure of
a mapping's base-precedes-legs value relation plus the diagonal.  When that
closure is antisymmetric it is the weakest partial order on the value set
under which the mapping is a poset-valued pseudoultrametric; otherwise a
shortest value cycle is returned as a certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import InputError
from .mappings import FiniteMapping, UCycle, u_relation
from .relations import Relation, classify, transitive_closure, _first_pair, _frozen

__all__ = [
    "FinitePoset",
    "ValueMap",
    "smallest_element",
    "minimal_order",
    "linear_extension",
    "embed_ranks",
    "is_isotone",
    "is_order_isomorphism",
    "order_extensions_oracle",
    "poset_to_doc",
    "poset_from_doc",
]


@dataclass(frozen=True, eq=False)
class FinitePoset:
    """A finite partial order over a tuple of labels, as a k-by-k <= table."""

    elements: tuple[str, ...]
    leq: np.ndarray

    def __post_init__(self):
        elements = tuple(self.elements)
        if len(elements) == 0:
            raise InputError("a poset needs at least one element")
        if len(set(elements)) != len(elements):
            raise InputError("duplicate poset element")
        arr = np.array(self.leq, dtype=bool)
        if arr.shape != (len(elements), len(elements)):
            raise InputError(
                f"leq table must be {len(elements)}x{len(elements)}, got {arr.shape}"
            )
        report = classify(Relation(arr))
        if not report.is_partial_order:
            raise InputError(
                f"leq table is not a partial order: {report}", details=report
            )
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "leq", _frozen(arr))
        object.__setattr__(self, "_index", {e: i for i, e in enumerate(elements)})

    @property
    def k(self) -> int:
        return len(self.elements)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise InputError(f"unknown poset element: {label!r}") from None

    def leq_pair(self, a: str, b: str) -> bool:
        return bool(self.leq[self.index(a), self.index(b)])

    def is_total(self) -> bool:
        return bool((self.leq | self.leq.T).all())

    def strict_pairs(self) -> list[tuple[str, str]]:
        off = self.leq & ~np.eye(self.k, dtype=bool)
        return [(self.elements[x], self.elements[y]) for x, y in np.argwhere(off)]

    @classmethod
    def from_pairs(
        cls, elements: Sequence[str], pairs: Iterable[tuple[str, str]]
    ) -> "FinitePoset":
        """Build from <= pairs (labels).  Reflexive pairs are implied and the
        given pairs are closed transitively, so cover relations are accepted."""
        elements = tuple(elements)
        index = {e: i for i, e in enumerate(elements)}
        k = len(elements)
        arr = np.eye(k, dtype=bool)
        for a, b in pairs:
            if a not in index or b not in index:
                missing = a if a not in index else b
                raise InputError(f"pair references unknown element: {missing!r}")
            arr[index[a], index[b]] = True
        closed = transitive_closure(Relation(arr))
        return cls(elements, closed.adjacency.copy())

    def restricted_to(self, labels: Sequence[str]) -> "FinitePoset":
        """The subposet on the given labels, in the given order."""
        idx = [self.index(label) for label in labels]
        return FinitePoset(tuple(labels), self.leq[np.ix_(idx, idx)].copy())

    def __eq__(self, other):
        if not isinstance(other, FinitePoset):
            return NotImplemented
        return self.elements == other.elements and bool((self.leq == other.leq).all())

    def __hash__(self):
        return hash((self.elements, self.leq.tobytes()))

    def __repr__(self):
        return f"FinitePoset({self.elements!r}, pairs={self.strict_pairs()!r})"


def poset_to_doc(p: FinitePoset) -> dict:
    """JSON document form: elements plus the strict <= pairs."""
    return {"elements": list(p.elements), "leq_pairs": [list(pair) for pair in p.strict_pairs()]}


def poset_from_doc(doc: dict) -> FinitePoset:
    if not isinstance(doc, dict) or "elements" not in doc or "leq_pairs" not in doc:
        raise InputError("poset document needs 'elements' and 'leq_pairs'")
    elements = doc["elements"]
    if not isinstance(elements, list) or not all(isinstance(e, str) for e in elements):
        raise InputError("poset elements must be a list of strings")
    pairs = []
    for pair in doc["leq_pairs"]:
        if not (isinstance(pair, list) and len(pair) == 2):
            raise InputError(f"malformed leq pair: {pair!r}")
        pairs.append((pair[0], pair[1]))
    return FinitePoset.from_pairs(elements, pairs)


def smallest_element(p: FinitePoset) -> str | None:
    """The unique element below every other, or None."""
    below_all = p.leq.all(axis=1)
    hits = np.flatnonzero(below_all)
    if hits.size == 0:
        return None
    return p.elements[int(hits[0])]


def minimal_order(m: FiniteMapping):
    """The weakest value order compatible with the mapping's isosceles structure.

    Computes the transitive closure of the base-precedes-legs value relation
    and adds the diagonal.  Returns the resulting FinitePoset when the
    closure is antisymmetric, else a UCycle certificate listing a shortest
    (two-element) value cycle.
    """
    vr = u_relation(m)
    closed = transitive_closure(vr.relation)
    k = closed.size
    off = ~np.eye(k, dtype=bool)
    mutual = closed.adjacency & closed.adjacency.T & off
    hit = _first_pair(mutual)
    if hit is not None:
        return UCycle((m.values[hit[0]], m.values[hit[1]]))
    return FinitePoset(m.values, closed.adjacency | np.eye(k, dtype=bool))


def linear_extension(p: FinitePoset) -> list[str]:
    """A deterministic total order containing p.

    Kahn elimination: repeatedly remove the lexicographically least label
    among the currently minimal elements.
    """
    k = p.k
    strict = p.leq & ~np.eye(k, dtype=bool)
    indegree = strict.sum(axis=0)
    by_label = sorted(range(k), key=lambda i: p.elements[i])
    removed = np.zeros(k, dtype=bool)
    out: list[str] = []
    for _ in range(k):
        pick = next(i for i in by_label if not removed[i] and indegree[i] == 0)
        out.append(p.elements[pick])
        removed[pick] = True
        indegree -= strict[pick]
    return out


@dataclass(frozen=True)
class ValueMap:
    """A total function between label sets, stored as an association list."""

    entries: tuple[tuple[str, Any], ...]

    def __post_init__(self):
        keys = [k for k, _ in self.entries]
        if len(set(keys)) != len(keys):
            dup = next(k for k in keys if keys.count(k) > 1)
            raise InputError(f"duplicate source label: {dup!r}")

    @classmethod
    def from_dict(cls, mapping: dict) -> "ValueMap":
        return cls(tuple(mapping.items()))

    def as_dict(self) -> dict:
        return dict(self.entries)

    def __call__(self, key: str):
        for k, v in self.entries:
            if k == key:
                return v
        raise InputError(f"label not in map: {key!r}")

    def source(self) -> tuple[str, ...]:
        return tuple(k for k, _ in self.entries)

    def targets(self) -> tuple:
        return tuple(v for _, v in self.entries)

    def is_injective(self) -> bool:
        targets = self.targets()
        return len(set(targets)) == len(targets)

    def inverted(self) -> "ValueMap":
        if not self.is_injective():
            raise InputError("cannot invert a non-injective map")
        return ValueMap(tuple((v, k) for k, v in self.entries))


def embed_ranks(total: Sequence[str], bottom: str) -> ValueMap:
    """Integer ranks along a total order: bottom gets 0, the i-th label gets i.

    The ranks are nonnegative rationals (Fractions), strictly increasing
    along ``total``; ``bottom`` must be the first label.
    """
    total = list(total)
    if not total:
        raise InputError("empty order")
    if total[0] != bottom:
        raise InputError(f"bottom {bottom!r} must come first, got {total[0]!r}")
    if len(set(total)) != len(total):
        raise InputError("labels in the total order must be distinct")
    return ValueMap(tuple((label, Fraction(i)) for i, label in enumerate(total)))


def _check_total_into(f: ValueMap, p: FinitePoset, l: FinitePoset) -> None:
    if set(f.source()) != set(p.elements):
        raise InputError("map must be total on the source poset's elements")
    for v in f.targets():
        if v not in l._index:
            raise InputError(f"map target not in codomain poset: {v!r}")


def is_isotone(f: ValueMap, p: FinitePoset, l: FinitePoset):
    """True, or the least source pair (a, b) with a <= b but f(a) !<= f(b)."""
    _check_total_into(f, p, l)
    for i, a in enumerate(p.elements):
        for j, b in enumerate(p.elements):
            if p.leq[i, j] and not l.leq_pair(f(a), f(b)):
                return (a, b)
    return True


def is_order_isomorphism(f: ValueMap, p: FinitePoset, l: FinitePoset):
    """True iff f is a bijective isotone map with isotone inverse.

    Failure witnesses: ('not-bijective', label-or-None), ('forward', (a, b)),
    or ('inverse', (a, b)).
    """
    _check_total_into(f, p, l)
    if not f.is_injective():
        targets = list(f.targets())
        dup = next(t for t in targets if targets.count(t) > 1)
        return ("not-bijective", dup)
    if set(f.targets()) != set(l.elements):
        missing = next(e for e in l.elements if e not in set(f.targets()))
        return ("not-bijective", missing)
    fwd = is_isotone(f, p, l)
    if fwd is not True:
        return ("forward", fwd)
    back = is_isotone(f.inverted(), l, p)
    if back is not True:
        return ("inverse", back)
    return True


def order_extensions_oracle(p: FinitePoset, cap: int = 8) -> list[list[str]]:
    """Every linear extension of p, by exhaustive enumeration (k <= cap)."""
    if p.k > cap:
        raise InputError(f"poset too large for exhaustive enumeration: {p.k} > {cap}")
    strict = p.leq & ~np.eye(p.k, dtype=bool)
    out: list[list[str]] = []
    prefix: list[int] = []
    remaining = set(range(p.k))

    def grow():
        if not remaining:
            out.append([p.elements[i] for i in prefix])
            return
        for i in sorted(remaining):
            if not any(strict[j, i] for j in remaining if j != i):
                remaining.remove(i)
                prefix.append(i)
                grow()
                prefix.pop()
                remaining.add(i)

    grow()
    return out
