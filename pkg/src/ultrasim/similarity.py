"""Deciders for combinatorial and weak similarity of two value tables.

Two mappings are combinatorially similar when a point bijection g and a value
bijection f turn one table into the other: b[x, y] = f(a[g(x), g(y)]).  Weak
similarity additionally requires f to be an isomorphism of the supplied value
orders.  The search explores point bijections in lexicographic order with the
value bijection forced pointwise, pruned by invariant profiles (value
frequencies, then a point/value color refinement run jointly on both tables);
the pruning never loses witnesses, so the first assignment found is the
lexicographically least one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .mappings import FiniteMapping
from .orders import FinitePoset, ValueMap

__all__ = [
    "SimilarityWitness",
    "BudgetExceeded",
    "CoincidenceReport",
    "combinatorially_similar",
    "weakly_similar",
    "verify_witness",
    "similarity_coincidence_check",
]


@dataclass(frozen=True)
class SimilarityWitness:
    """A checked pair of bijections relating two mappings.

    ``g[i]`` is the a-point index matched to b-point i; ``f`` maps each
    a-value label to a b-value label.
    """

    g: tuple[int, ...]
    f: tuple[tuple[str, str], ...]
    kind: str

    def f_dict(self) -> dict[str, str]:
        return dict(self.f)

    def g_labels(self, a: FiniteMapping, b: FiniteMapping) -> dict[str, str]:
        return {b.points[i]: a.points[j] for i, j in enumerate(self.g)}

    def to_json(self, a: FiniteMapping, b: FiniteMapping) -> dict:
        return {"g": self.g_labels(a, b), "f": self.f_dict(), "kind": self.kind}

    def inverted(self) -> "SimilarityWitness":
        inv_g = [0] * len(self.g)
        for i, j in enumerate(self.g):
            inv_g[j] = i
        return SimilarityWitness(
            tuple(inv_g), tuple((v, k) for k, v in self.f), self.kind
        )


@dataclass(frozen=True)
class BudgetExceeded:
    """Search gave up before covering the space: the answer is unknown, not 'no'."""

    nodes: int


@dataclass(frozen=True)
class CoincidenceReport:
    combinatorial: object
    weak: object

    @property
    def agree(self) -> bool:
        return isinstance(self.combinatorial, SimilarityWitness) == isinstance(
            self.weak, SimilarityWitness
        )


def verify_witness(w: SimilarityWitness, a: FiniteMapping, b: FiniteMapping) -> bool:
    """Re-check b[x, y] == f(a[g(x), g(y)]) over all pairs, plus bijectivity."""
    n = a.n
    if sorted(w.g) != list(range(n)) or b.n != n:
        return False
    f = w.f_dict()
    if sorted(f.keys()) != sorted(a.values) or sorted(f.values()) != sorted(b.values):
        return False
    for x in range(n):
        for y in range(n):
            if b.value_at(x, y) != f[a.value_at(w.g[x], w.g[y])]:
                return False
    return True


def _value_profiles(m: FiniteMapping) -> list[tuple[int, int]]:
    """Per value: (total occurrences, diagonal occurrences) - invariant data."""
    total = np.bincount(m.table.ravel(), minlength=m.k)
    diag = np.bincount(np.diagonal(m.table), minlength=m.k)
    return [(int(t), int(d)) for t, d in zip(total, diag)]


def _joint_color_refinement(a: FiniteMapping, b: FiniteMapping):
    """Stable point and value colors computed jointly, comparable across a and b.

    Colors only use structure preserved by any similarity, so points (values)
    that some witness matches always share a color.
    """
    intern: dict = {}

    def code(obj) -> int:
        return intern.setdefault(obj, len(intern))

    def init_values(m):
        return [code(("v", p)) for p in _value_profiles(m)]

    def init_points(m, vc):
        out = []
        for x in range(m.n):
            row = sorted(vc[v] for v in m.table[x])
            out.append(code(("p", vc[m.table[x, x]], tuple(row))))
        return out

    vc_a, vc_b = init_values(a), init_values(b)
    pc_a, pc_b = init_points(a, vc_a), init_points(b, vc_b)

    def refine_values(m, vc, pc):
        out = []
        for v in range(m.k):
            xs, ys = np.nonzero(m.table == v)
            ends = sorted((pc[x], pc[y]) for x, y in zip(xs, ys))
            out.append(code(("v", vc[v], tuple(ends))))
        return out

    def refine_points(m, vc, pc):
        out = []
        for x in range(m.n):
            seen = sorted((vc[m.table[x, y]], pc[y]) for y in range(m.n))
            out.append(code(("p", pc[x], vc[m.table[x, x]], tuple(seen))))
        return out

    while True:
        before = len(set(pc_a)) + len(set(vc_a)) + len(set(pc_b)) + len(set(vc_b))
        vc_a, vc_b = refine_values(a, vc_a, pc_a), refine_values(b, vc_b, pc_b)
        pc_a, pc_b = refine_points(a, vc_a, pc_a), refine_points(b, vc_b, pc_b)
        after = len(set(pc_a)) + len(set(vc_a)) + len(set(pc_b)) + len(set(vc_b))
        if after == before:
            return pc_a, vc_a, pc_b, vc_b


def _search(
    a: FiniteMapping,
    b: FiniteMapping,
    budget: int | None,
    order_pair: tuple[FinitePoset, FinitePoset] | None,
):
    kind = "weak" if order_pair is not None else "combinatorial"
    if a.n != b.n or a.k != b.k:
        return None
    if sorted(_value_profiles(a)) != sorted(_value_profiles(b)):
        return None
    pc_a, vc_a, pc_b, vc_b = _joint_color_refinement(a, b)
    if sorted(pc_a) != sorted(pc_b) or sorted(vc_a) != sorted(vc_b):
        return None

    n, k = a.n, a.k
    ta, tb = a.table, b.table
    if order_pair is not None:
        pa, pb = order_pair
        leq_a = np.zeros((k, k), dtype=bool)
        leq_b = np.zeros((k, k), dtype=bool)
        for i, u in enumerate(a.values):
            for j, v in enumerate(a.values):
                leq_a[i, j] = pa.leq_pair(u, v)
        for i, u in enumerate(b.values):
            for j, v in enumerate(b.values):
                leq_b[i, j] = pb.leq_pair(u, v)

    g = [-1] * n  # b-point -> a-point
    used = [False] * n
    fmap = [-1] * k  # a-value index -> b-value index
    rmap = [-1] * k
    nodes = 0
    out_of_budget = False

    def bind(av: int, bv: int, trail: list[int]) -> bool:
        if fmap[av] >= 0:
            return fmap[av] == bv
        if rmap[bv] >= 0:
            return False
        if vc_a[av] != vc_b[bv]:
            return False
        if order_pair is not None:
            for other in range(k):
                if fmap[other] >= 0:
                    if leq_a[av, other] != leq_b[bv, fmap[other]]:
                        return False
                    if leq_a[other, av] != leq_b[fmap[other], bv]:
                        return False
        fmap[av] = bv
        rmap[bv] = av
        trail.append(av)
        return True

    def place(i: int, p: int, trail: list[int]) -> bool:
        for j in range(i):
            if not bind(int(ta[g[j], p]), int(tb[j, i]), trail):
                return False
            if not bind(int(ta[p, g[j]]), int(tb[i, j]), trail):
                return False
        return bind(int(ta[p, p]), int(tb[i, i]), trail)

    def unbind(trail: list[int]) -> None:
        for av in trail:
            rmap[fmap[av]] = -1
            fmap[av] = -1

    def backtrack(i: int):
        nonlocal nodes, out_of_budget
        if i == n:
            return tuple(g)
        for p in range(n):
            if used[p] or pc_a[p] != pc_b[i]:
                continue
            nodes += 1
            if budget is not None and nodes > budget:
                out_of_budget = True
                return None
            trail: list[int] = []
            if place(i, p, trail):
                g[i] = p
                used[p] = True
                found = backtrack(i + 1)
                if found is not None:
                    return found
                used[p] = False
                g[i] = -1
                if out_of_budget:
                    unbind(trail)
                    return None
            unbind(trail)
        return None

    found = backtrack(0)
    if found is not None:
        f = tuple(
            (a.values[av], b.values[fmap[av]]) for av in range(k)
        )
        return SimilarityWitness(found, f, kind)
    if out_of_budget:
        return BudgetExceeded(nodes)
    return None


def combinatorially_similar(a: FiniteMapping, b: FiniteMapping, budget: int | None = None):
    """Least witness making b a relabeling of a, None when impossible, or
    BudgetExceeded when the node cap ran out before the search completed."""
    return _search(a, b, budget, None)


def weakly_similar(
    a: FiniteMapping,
    pa: FinitePoset,
    b: FiniteMapping,
    pb: FinitePoset,
    budget: int | None = None,
):
    """As combinatorially_similar, with the value bijection further required
    to be an isomorphism of the orders pa (on a's values) and pb (on b's).

    When pa is a total order there is at most one admissible value bijection,
    the strictly increasing one."""
    if set(pa.elements) != set(a.values):
        raise InputError("first order must be on the first mapping's values")
    if set(pb.elements) != set(b.values):
        raise InputError("second order must be on the second mapping's values")
    return _search(a, b, budget, (pa, pb))


def similarity_coincidence_check(a: FiniteMapping, b: FiniteMapping) -> CoincidenceReport:
    """Run both deciders with each mapping's minimal value order attached.

    Both mappings must have a well-defined minimal order and be poset-valued
    pseudoultrametrics under it; the two verdicts then agree, and the report
    carries both outcomes.
    """
    from .decision import is_q_pseudoultrametric
    from .mappings import UCycle
    from .orders import minimal_order

    orders = []
    for m in (a, b):
        mo = minimal_order(m)
        if isinstance(mo, UCycle):
            raise InputError(f"mapping has no minimal order: {mo}")
        identity = ValueMap(tuple((v, v) for v in m.values))
        ok = is_q_pseudoultrametric(m, mo, identity)
        if ok is not True:
            raise InputError(f"mapping is not a pseudoultrametric under its minimal order: {ok}")
        orders.append(mo)
    comb = combinatorially_similar(a, b)
    weak = weakly_similar(a, orders[0], b, orders[1])
    report = CoincidenceReport(comb, weak)
    if not report.agree:
        raise AssertionError(
            "combinatorial and weak similarity disagreed on minimal-order pseudoultrametrics"
        )
    return report
