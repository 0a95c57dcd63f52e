"""Deciders: realize a value table as a (pseudo)ultrametric or refute it.

The realization pipeline checks, in order: symmetry, constant diagonal,
coherence at the diagonal value, (for ultrametrics) the diagonal value
occurring only on the diagonal, absence of scalene triples, and antisymmetry
of the closed value relation.  The first failure is returned as a
certificate; on success the minimal value order is linearly extended,
embedded as integer ranks with the diagonal value at 0, and the rank matrix
is returned.  Any strictly increasing re-scaling of the ranks would do
equally well; ranks are fixed for reproducibility.

Also here: validators for poset-valued pseudoultrametrics, ultrametrics and
ultrametric distances, transfer of a table along an isotone bottom-preserving
value map, the canonical chain construction, and the closed-ball analysis of
realized ultrametric matrices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import InputError
from .mappings import (
    Certificate,
    FiberNotDiagonal,
    FiniteMapping,
    UCycle,
    ValueRelation,
    canonical_label,
    diagonal_value,
    is_coherent_direct,
    is_symmetric,
    scalene_triple,
    u_relation,
)
from .orders import (
    FinitePoset,
    ValueMap,
    embed_ranks,
    is_isotone,
    linear_extension,
    minimal_order,
    smallest_element,
)
from .relations import Relation, _first_pair

__all__ = [
    "Realization",
    "AnalysisReport",
    "QViolation",
    "realize_pseudoultrametric",
    "realize_ultrametric",
    "analyze",
    "strong_triangle_violations",
    "validate_realization",
    "realization_from_matrix",
    "mapping_from_realization",
    "is_q_pseudoultrametric",
    "is_q_ultrametric",
    "is_ultrametric_distance",
    "compose_isotone",
    "check_ultrametric_preserving",
    "two_point_mapping",
    "canonical_chain_ultrametric",
    "closed_balls",
    "u_via_balls",
]

PSEUDO = "pseudoultrametric"
ULTRA = "ultrametric"


@dataclass(frozen=True)
class Realization:
    """A rational distance matrix realizing a mapping, plus the value ranks used."""

    assignment: ValueMap
    matrix: tuple[tuple[Fraction, ...], ...]
    kind: str

    @property
    def n(self) -> int:
        return len(self.matrix)

    def distances(self) -> list[Fraction]:
        return sorted({d for row in self.matrix for d in row})

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "assignment": {k: _format_rational(v) for k, v in self.assignment.entries},
            "matrix": [[_format_rational(d) for d in row] for row in self.matrix],
        }


def _format_rational(q: Fraction) -> str:
    return str(q)


def strong_triangle_violations(
    matrix: Sequence[Sequence[Fraction]],
) -> list[tuple[int, int, int]]:
    """All (x, y, z) with d(x, y) > max(d(x, z), d(z, y)).

    Deliberately a plain triple loop over exact rationals, independent of the
    realization pipeline, so it can serve as a post-hoc checker.
    """
    n = len(matrix)
    bad = []
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if matrix[x][y] > max(matrix[x][z], matrix[z][y]):
                    bad.append((x, y, z))
    return bad


def validate_realization(r: Realization, mapping: FiniteMapping | None = None):
    """Re-check every invariant of a realization; True or a reason string.

    With ``mapping`` given, also checks that the matrix is exactly the value
    assignment applied to the mapping's table.
    """
    n = r.n
    if any(len(row) != n for row in r.matrix):
        return "matrix is not square"
    for x in range(n):
        if r.matrix[x][x] != 0:
            return f"nonzero diagonal at {x}"
        for y in range(n):
            d = r.matrix[x][y]
            if d < 0:
                return f"negative distance at ({x}, {y})"
            if d != r.matrix[y][x]:
                return f"asymmetric at ({x}, {y})"
            if r.kind == ULTRA and x != y and d == 0:
                return f"zero off the diagonal at ({x}, {y})"
    bad = strong_triangle_violations(r.matrix)
    if bad:
        return f"strong triangle inequality fails at {bad[0]}"
    if not r.assignment.is_injective():
        return "value assignment is not injective"
    if mapping is not None:
        if set(r.assignment.source()) != set(mapping.values):
            return "assignment domain differs from the mapping's values"
        for x in range(n):
            for y in range(n):
                if r.matrix[x][y] != r.assignment(mapping.value_at(x, y)):
                    return f"matrix disagrees with assignment at ({x}, {y})"
    return True


def realization_from_matrix(rows: Sequence[Sequence], kind: str = ULTRA) -> Realization:
    """Wrap an explicit rational matrix as a validated Realization."""
    matrix = tuple(tuple(Fraction(v) for v in row) for row in rows)
    labels = sorted({d for row in matrix for d in row})
    assignment = ValueMap(tuple((canonical_label(d), d) for d in labels))
    r = Realization(assignment, matrix, kind)
    ok = validate_realization(r)
    if ok is not True:
        raise InputError(f"not a valid {kind}: {ok}")
    return r


def mapping_from_realization(r: Realization) -> FiniteMapping:
    """The realized matrix viewed as a mapping with canonical rational labels."""
    points = tuple(f"p{i}" for i in range(r.n))
    rows = [[canonical_label(d) for d in row] for row in r.matrix]
    return FiniteMapping.from_labels(points, rows)


def _realize(m: FiniteMapping, kind: str):
    sym = is_symmetric(m)
    if sym is not True:
        return sym
    diag = diagonal_value(m)
    if isinstance(diag, Certificate):
        return diag
    coherent = is_coherent_direct(m, diag)
    if coherent is not True:
        return coherent
    if kind == ULTRA:
        a0_idx = m.value_index(diag)
        off_fiber = (m.table == a0_idx) & ~np.eye(m.n, dtype=bool)
        hit = _first_pair(off_fiber)
        if hit is not None:
            return FiberNotDiagonal(hit[0], hit[1], a0=diag)
    scalene = scalene_triple(m)
    if scalene is not None:
        return scalene
    order = minimal_order(m)
    if isinstance(order, UCycle):
        return order
    total = linear_extension(order)
    assignment = embed_ranks(total, diag)
    rank_of = np.zeros(m.k, dtype=np.int64)
    for label, rank in assignment.entries:
        rank_of[m.value_index(label)] = int(rank)
    ranks = rank_of[m.table]
    matrix = tuple(tuple(Fraction(int(v)) for v in row) for row in ranks)
    return Realization(assignment, matrix, kind)


def realize_pseudoultrametric(m: FiniteMapping):
    """A Realization whose matrix is a pseudoultrametric combinatorially
    similar to m (identity on points, ranks on values), or the first
    certificate refuting the possibility."""
    return _realize(m, PSEUDO)


def realize_ultrametric(m: FiniteMapping):
    """As realize_pseudoultrametric, plus the requirement that the diagonal
    value occurs nowhere off the diagonal."""
    return _realize(m, ULTRA)


@dataclass(frozen=True)
class AnalysisReport:
    """Everything the pipeline learned about one mapping.

    Stages that could not run (their prerequisite failed) are None.  In full
    mode the scalene and value-order stages are computed even after an
    earlier failure, whenever the mapping is symmetric.
    """

    symmetric: object
    diagonal: object
    coherent: object
    scalene: object
    u_pairs: list | None
    minimal: object
    pseudoultrametric: object
    ultrametric: object
    full: bool = False

    def to_json(self) -> dict:
        def enc(v):
            if v is True or v is None or isinstance(v, (str, bool)):
                return v
            if isinstance(v, Certificate):
                return v.to_json()
            if isinstance(v, Realization):
                return v.to_json()
            if isinstance(v, FinitePoset):
                from .orders import poset_to_doc

                return poset_to_doc(v)
            return v

        def verdict(v):
            if isinstance(v, Realization):
                return {"verdict": "yes", "realization": v.to_json()}
            return {"verdict": "no", "certificate": v.to_json()}

        return {
            "symmetric": self.symmetric is True,
            "symmetry_certificate": enc(None if self.symmetric is True else self.symmetric),
            "diagonal_value": enc(self.diagonal),
            "coherent": enc(self.coherent),
            "scalene": enc(self.scalene),
            "u_relation": self.u_pairs,
            "minimal_order": enc(self.minimal),
            "pseudoultrametric": verdict(self.pseudoultrametric),
            "ultrametric": verdict(self.ultrametric),
        }


def analyze(m: FiniteMapping, full: bool = False) -> AnalysisReport:
    """Run the whole pipeline and collect per-stage outcomes plus both verdicts."""
    sym = is_symmetric(m)
    diag = diagonal_value(m)
    coherent = None
    if sym is True and not isinstance(diag, Certificate):
        coherent = is_coherent_direct(m, diag)
    scalene = None
    u_pairs = None
    minimal = None
    symmetric_enough = sym is True
    pipeline_alive = symmetric_enough and not isinstance(diag, Certificate) and coherent is True
    if symmetric_enough and (full or pipeline_alive):
        scalene = scalene_triple(m)
        u_pairs = sorted(u_relation(m).pairs())
        minimal = minimal_order(m)
    return AnalysisReport(
        symmetric=sym,
        diagonal=diag,
        coherent=coherent,
        scalene=scalene,
        u_pairs=[list(p) for p in u_pairs] if u_pairs is not None else None,
        minimal=minimal,
        pseudoultrametric=realize_pseudoultrametric(m),
        ultrametric=realize_ultrametric(m),
        full=full,
    )


# ---------------------------------------------------------------------------
# Poset-valued validators


@dataclass(frozen=True)
class QViolation:
    """Why a table fails a poset-valued validator.

    kind: 'asymmetric' (pair), 'diagonal' (point), 'fiber' (off-diagonal pair
    at the bottom value), 'triple' (no admissible isosceles permutation), or
    'cut' (transitivity of the level set at ``gamma`` fails on the triple).
    """

    kind: str
    points: tuple[int, ...]
    gamma: str | None = None


def _embedded_indices(m: FiniteMapping, q: FinitePoset, embed: ValueMap) -> np.ndarray:
    if set(embed.source()) != set(m.values):
        raise InputError("embedding must be total on the mapping's values")
    target = np.zeros(m.k, dtype=np.int64)
    for label in m.values:
        target[m.value_index(label)] = q.index(embed(label))
    return target


def _bottom_index(q: FinitePoset) -> int:
    q0 = smallest_element(q)
    if q0 is None:
        raise InputError("poset has no smallest element")
    return q.index(q0)


_TRIPLE_PERMS = tuple(itertools.permutations(range(3)))


def _triple_ok(d: np.ndarray, leq: np.ndarray, x: int, y: int, z: int) -> bool:
    pts = (x, y, z)
    for i1, i2, i3 in _TRIPLE_PERMS:
        a, b, c = pts[i1], pts[i2], pts[i3]
        if d[a, b] == d[b, c] and leq[d[a, c], d[a, b]]:
            return True
    return False


def is_q_pseudoultrametric(m: FiniteMapping, q: FinitePoset, embed: ValueMap):
    """True iff embed(table) is a pseudoultrametric valued in the poset q.

    Checks symmetry, bottom on the diagonal, and that every triple admits a
    permutation with equal legs and base below legs.  Returns True or the
    first QViolation in scan order.
    """
    q0 = _bottom_index(q)
    tgt = _embedded_indices(m, q, embed)
    d = tgt[m.table]
    asym = _first_pair(d != d.T)
    if asym is not None:
        return QViolation("asymmetric", asym)
    bad_diag = np.flatnonzero(np.diagonal(d) != q0)
    if bad_diag.size:
        return QViolation("diagonal", (int(bad_diag[0]),))
    n = m.n
    for x in range(n - 2):
        for y in range(x + 1, n - 1):
            for z in range(y + 1, n):
                if not _triple_ok(d, q.leq, x, y, z):
                    return QViolation("triple", (x, y, z))
    return True


def is_q_ultrametric(m: FiniteMapping, q: FinitePoset, embed: ValueMap):
    """As is_q_pseudoultrametric, plus: the bottom value occurs only on the diagonal."""
    q0 = _bottom_index(q)
    tgt = _embedded_indices(m, q, embed)
    d = tgt[m.table]
    hit = _first_pair((d == q0) & ~np.eye(m.n, dtype=bool))
    if hit is not None:
        return QViolation("fiber", hit)
    return is_q_pseudoultrametric(m, q, embed)


def is_ultrametric_distance(m: FiniteMapping, q: FinitePoset, embed: ValueMap):
    """The Priess-Crampe/Ribenboim axioms for a poset-valued distance.

    Symmetric; bottom exactly on the diagonal; and for every level gamma the
    set of pairs at distance <= gamma is transitive.  Returns True or the
    first QViolation.
    """
    q0 = _bottom_index(q)
    tgt = _embedded_indices(m, q, embed)
    d = tgt[m.table]
    asym = _first_pair(d != d.T)
    if asym is not None:
        return QViolation("asymmetric", asym)
    bad_diag = np.flatnonzero(np.diagonal(d) != q0)
    if bad_diag.size:
        return QViolation("diagonal", (int(bad_diag[0]),))
    hit = _first_pair((d == q0) & ~np.eye(m.n, dtype=bool))
    if hit is not None:
        return QViolation("fiber", hit)
    n = m.n
    leq = q.leq
    for x in range(n - 2):
        for y in range(x + 1, n - 1):
            for z in range(y + 1, n):
                sides = ((d[x, y], d[y, z], d[x, z]),
                         (d[y, z], d[x, z], d[x, y]),
                         (d[x, z], d[x, y], d[y, z]))
                for gi in range(q.k):
                    for d1, d2, d3 in sides:
                        if leq[d1, gi] and leq[d2, gi] and not leq[d3, gi]:
                            return QViolation("cut", (x, y, z), gamma=q.elements[gi])
    return True


def compose_isotone(
    f: ValueMap, m: FiniteMapping, q: FinitePoset, l: FinitePoset
) -> FiniteMapping:
    """Relabel m's values through f: Q -> L.

    Requires f isotone with f(bottom of Q) = bottom of L; the result is then
    an L-pseudoultrametric whenever m was a Q-pseudoultrametric.
    """
    iso = is_isotone(f, q, l)
    if iso is not True:
        raise InputError(f"map is not isotone at {iso}")
    q0 = smallest_element(q)
    l0 = smallest_element(l)
    if q0 is None or l0 is None:
        raise InputError("both posets need a smallest element")
    if f(q0) != l0:
        raise InputError(f"map sends bottom {q0!r} to {f(q0)!r}, not {l0!r}")
    for v in m.values:
        if v not in set(q.elements):
            raise InputError(f"mapping value {v!r} is not an element of the source poset")
    new_rows = [[f(v) for v in row] for row in m.label_rows()]
    return FiniteMapping.from_labels(m.points, new_rows)


def check_ultrametric_preserving(f: ValueMap, q: FinitePoset, l: FinitePoset):
    """True iff composing with f sends every Q-ultrametric to an L-ultrametric.

    Exactly: f isotone and f(x) = bottom of L iff x = bottom of Q.  Failure
    witnesses: ('not-isotone', (a, b)) or ('kernel', label).
    """
    iso = is_isotone(f, q, l)
    if iso is not True:
        return ("not-isotone", iso)
    q0 = smallest_element(q)
    l0 = smallest_element(l)
    if q0 is None or l0 is None:
        raise InputError("both posets need a smallest element")
    for label in q.elements:
        if (f(label) == l0) != (label == q0):
            return ("kernel", label)
    return True


def two_point_mapping(bottom: str, side: str) -> FiniteMapping:
    """The two-point table with the given diagonal and off-diagonal labels."""
    if bottom == side:
        raise InputError("bottom and side labels must differ")
    return FiniteMapping.from_labels(
        ("p0", "p1"), [[bottom, side], [side, bottom]]
    )


def canonical_chain_ultrametric(chain: Sequence[str]):
    """The chain-valued ultrametric on the chain itself.

    Points are the chain elements; the distance of two distinct points is the
    larger of the two, and the bottom sits on the diagonal.  The table's
    range is the whole chain and its minimal value order is exactly the
    chain order.  Returns (mapping, chain poset).
    """
    labels = [canonical_label(c) for c in chain]
    if not labels:
        raise InputError("empty chain")
    if len(set(labels)) != len(labels):
        raise InputError("chain labels must be distinct")
    k = len(labels)
    rows = [
        [labels[0] if i == j else labels[max(i, j)] for j in range(k)]
        for i in range(k)
    ]
    mapping = FiniteMapping.from_labels(labels, rows, values=labels)
    leq = np.zeros((k, k), dtype=bool)
    for i in range(k):
        for j in range(i, k):
            leq[i, j] = True
    poset = FinitePoset(tuple(labels), leq)
    return mapping, poset


# ---------------------------------------------------------------------------
# Closed-ball structure of realized matrices


def closed_balls(r: Realization) -> list[tuple[frozenset[int], Fraction]]:
    """All distinct closed balls of the realized matrix, with their diameters.

    A ball is {x : d(x, c) <= radius} for a point c and an occurring
    distance; the diameter is the largest distance within the ball.  Sorted
    by (diameter, members) for determinism.
    """
    n = r.n
    radii = r.distances()
    seen: dict[frozenset[int], Fraction] = {}
    for c in range(n):
        for radius in radii:
            members = frozenset(
                y for y in range(n) if r.matrix[c][y] <= radius
            )
            if members not in seen:
                diam = max(
                    (r.matrix[x][y] for x in members for y in members),
                    default=Fraction(0),
                )
                seen[members] = diam
    return sorted(seen.items(), key=lambda kv: (kv[1], sorted(kv[0])))


def u_via_balls(r: Realization) -> ValueRelation:
    """The base-precedes-legs relation recovered from ball containments.

    (r1, r2) with r1 < r2 is present iff some ball of diameter r1 sits inside
    a ball of diameter r2.  (0, 0) is always present (singleton balls).  A
    nonzero (r, r) needs more than nesting, since nested balls of equal
    diameter coincide: it is present iff some ball of diameter r splits into
    at least three parts under the strictly-below-r equivalence, i.e. the
    ball holds three points pairwise at distance r.
    """
    dists = r.distances()
    labels = tuple(canonical_label(d) for d in dists)
    index = {d: i for i, d in enumerate(dists)}
    k = len(dists)
    adj = np.zeros((k, k), dtype=bool)
    balls = closed_balls(r)
    for b1, d1 in balls:
        for b2, d2 in balls:
            if b1 <= b2 and (d1 < d2 or d1 == d2 == 0):
                adj[index[d1], index[d2]] = True
    for members, diam in balls:
        if diam == 0:
            continue
        pts = sorted(members)
        parts: list[int] = []
        part_of: dict[int, int] = {}
        for x in pts:
            for y in pts:
                if y in part_of and r.matrix[x][y] < diam:
                    part_of[x] = part_of[y]
                    break
            else:
                part_of[x] = len(parts)
                parts.append(x)
        if len(parts) >= 3:
            adj[index[diam], index[diam]] = True
    return ValueRelation(labels, Relation(adj))
