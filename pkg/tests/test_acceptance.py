"""Acceptance suite: one test per headline criterion, each printing a verdict line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines alongside pytest's own pass/fail report.
"""

import itertools
import json
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from ultrasim import (
    FinitePoset,
    FiniteMapping,
    Realization,
    ScaleneTriple,
    SimilarityWitness,
    UCycle,
    ValueMap,
    canonical_chain_ultrametric,
    check_ultrametric_preserving,
    combinatorially_similar,
    compose_isotone,
    is_coherent_composition,
    is_coherent_direct,
    is_coherent_refinement,
    is_q_pseudoultrametric,
    is_q_ultrametric,
    is_ultrametric_distance,
    mapping_from_realization,
    minimal_order,
    realization_from_matrix,
    realize_pseudoultrametric,
    realize_ultrametric,
    scalene_triple,
    smallest_element,
    strong_triangle_violations,
    two_point_mapping,
    u_relation,
    u_via_balls,
    validate_realization,
    verify_witness,
    weakly_similar,
)
from ultrasim.cli import main, parse_mapping_document
from ultrasim.mappings import COHERENCE_VARIANTS

from oracles import (
    all_poset_matrices,
    mapping_from_levels,
    random_symmetric_mapping,
    random_ultrametric_levels,
    realize_oracle,
    transform_mapping,
    triple_condition_fast,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def report(num: int, text: str) -> None:
    print(f"ACCEPTANCE {num:02d} PASS: {text}")


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def identity_embed(m: FiniteMapping) -> ValueMap:
    return ValueMap(tuple((v, v) for v in m.values))


def test_criterion_01_two_scale_fixture_cycle(capsys):
    """Four-point all-isosceles fixture: realize exits 1 with the {h, p} cycle."""
    path = str(FIXTURES / "isosceles_two_scale.json")
    code, doc = run_cli(capsys, "realize", path, "--kind", "pseudo")
    assert code == 1
    assert doc["certificate"] == "u-cycle"
    assert set(doc["labels"]) == {"h", "p"}
    mapping, _ = parse_mapping_document(json.loads(Path(path).read_text()))
    assert scalene_triple(mapping) is None
    report(1, "two-scale fixture refuted by the {h,p} value cycle; no scalene triple")


def test_criterion_02_pseudolinear_quadruples(capsys):
    """Equilateral quadruple realizes (checker-clean); s != t gives a scalene triple."""
    code, doc = run_cli(capsys, "realize", str(FIXTURES / "equilateral_plq.json"), "--kind", "ultra")
    assert code == 0
    matrix = [[Fraction(v) for v in row] for row in doc["matrix"]]
    assert len(strong_triangle_violations(matrix)) == 0  # all 64 triples
    checked = 0
    for s, t in [("1", "2"), ("1", "3"), ("2", "5"), ("3", "4")]:
        total = str(int(s) + int(t))
        quad = FiniteMapping.from_labels(
            ("x1", "x2", "x3", "x4"),
            [
                ["0", s, total, t],
                [s, "0", t, total],
                [total, t, "0", s],
                [t, total, s, "0"],
            ],
        )
        cert = realize_ultrametric(quad)
        assert isinstance(cert, ScaleneTriple)
        assert cert.verify(quad)
        checked += 1
    report(2, f"equilateral quadruple realized with 0/64 violations; {checked} uneven ones refuted")


def _exhaustive_constant_diagonal_tables():
    """Every symmetric constant-diagonal table on 4 points over <= 3 values,
    modulo relabeling of the two non-diagonal values."""
    pair_slots = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    for assignment in itertools.product(range(3), repeat=6):
        first_one = next((i for i, v in enumerate(assignment) if v == 1), None)
        first_two = next((i for i, v in enumerate(assignment) if v == 2), None)
        if first_two is not None and (first_one is None or first_two < first_one):
            continue  # canonical representative only
        table = [["d"] * 4 for _ in range(4)]
        names = {0: "d", 1: "u", 2: "w"}
        for (x, y), v in zip(pair_slots, assignment):
            table[x][y] = table[y][x] = names[v]
        yield FiniteMapping.from_labels(("p0", "p1", "p2", "p3"), table)


def test_criterion_03_realize_matches_ordering_oracle():
    """Decider verdicts match the brute-force ordering oracle, exhaustively and at random."""
    exhaustive = 0
    for m in _exhaustive_constant_diagonal_tables():
        for kind, run in (("pseudo", realize_pseudoultrametric), ("ultra", realize_ultrametric)):
            got = run(m)
            assert isinstance(got, Realization) == realize_oracle(m, kind)
            if isinstance(got, Realization):
                assert validate_realization(got, m) is True
        exhaustive += 1
    rng = np.random.default_rng(3)
    for _ in range(2000):
        n = int(rng.integers(1, 7))
        k = int(rng.integers(1, 5))
        if rng.random() < 0.45:
            m = mapping_from_levels(random_ultrametric_levels(rng, n, k))
        else:
            m = random_symmetric_mapping(rng, n, k)
        for kind, run in (("pseudo", realize_pseudoultrametric), ("ultra", realize_ultrametric)):
            got = run(m)
            assert isinstance(got, Realization) == realize_oracle(m, kind)
            if isinstance(got, Realization):
                assert validate_realization(got, m) is True
            else:
                assert got.verify(m)
    report(3, f"oracle agreement on {exhaustive} exhaustive + 2000 random instances, both kinds")


def test_criterion_04_coherence_formulations_agree():
    """Direct, four composition variants and the refinement check always agree."""

    def all_agree(m, a0):
        direct = is_coherent_direct(m, a0) is True
        outcomes = {direct}
        outcomes.update(
            is_coherent_composition(m, a0, variant) for variant in COHERENCE_VARIANTS
        )
        outcomes.add(is_coherent_refinement(m, a0))
        assert len(outcomes) == 1, f"coherence formulations disagree on {m} at {a0}"

    exhaustive = 0
    for n in (1, 2, 3):
        slots = [(x, y) for x in range(n) for y in range(x, n)]
        for assignment in itertools.product(range(3), repeat=len(slots)):
            table = [[0] * n for _ in range(n)]
            for (x, y), v in zip(slots, assignment):
                table[x][y] = table[y][x] = v
            used = sorted({v for row in table for v in row})
            renum = {v: i for i, v in enumerate(used)}
            rows = [[f"v{renum[v]}" for v in row] for row in table]
            m = FiniteMapping.from_labels(tuple(f"p{i}" for i in range(n)), rows)
            for a0 in m.values:
                all_agree(m, a0)
                exhaustive += 1
    rng = np.random.default_rng(4)
    for _ in range(1000):
        n = int(rng.integers(1, 7))
        k = int(rng.integers(1, 5))
        m = random_symmetric_mapping(rng, n, k, constant_diagonal=bool(rng.integers(0, 2)))
        a0 = m.values[int(rng.integers(0, m.k))]
        all_agree(m, a0)
    report(4, f"six coherence formulations agree on {exhaustive} exhaustive + 1000 random instances")


def test_criterion_05_ball_characterization():
    """On random finite ultrametric spaces the ball-derived value relation is exact."""
    rng = np.random.default_rng(5)
    for _ in range(1000):
        n = int(rng.integers(1, 13))
        levels = random_ultrametric_levels(rng, n, int(rng.integers(1, 7)))
        r = realization_from_matrix(
            [[Fraction(int(v)) for v in row] for row in levels], kind="ultrametric"
        )
        assert u_via_balls(r).pairs() == u_relation(mapping_from_realization(r)).pairs()
    report(5, "u-relation equals ball-containment relation on 1000 random ultrametric spaces")


def _admissible_fast(leq: np.ndarray, a0: int, side_multisets) -> bool:
    if not leq[a0].all():
        return False  # a0 must be the bottom
    return triple_condition_fast(side_multisets, leq, a0)


def test_criterion_06_minimal_order_minimality():
    """The minimal value order is admissible and contained in every admissible order."""
    rng = np.random.default_rng(6)
    checked = 0
    cross_checked = 0
    while checked < 200:
        n = int(rng.integers(2, 7))
        m = mapping_from_levels(random_ultrametric_levels(rng, n, int(rng.integers(1, 5))))
        if m.k > 5:
            continue
        checked += 1
        order = minimal_order(m)
        assert isinstance(order, FinitePoset)
        embed = identity_embed(m)
        assert is_q_pseudoultrametric(m, order, embed) is True  # itself admissible
        a0 = m.value_index("0")
        d = m.table
        multisets = {
            (int(d[x, y]), int(d[y, z]), int(d[x, z]))
            for x in range(n)
            for y in range(x + 1, n)
            for z in range(y + 1, n)
        }
        candidates = all_poset_matrices(m.k)
        admissible = 0
        for idx, leq in enumerate(candidates):
            ok = _admissible_fast(leq, a0, multisets)
            if ok:
                admissible += 1
                assert (~order.leq | leq).all(), "minimal order not contained in admissible order"
            if idx % 97 == 0:  # spot-check the fast predicate against the validator
                candidate = FinitePoset(m.values, leq.copy())
                if smallest_element(candidate) is None:
                    assert not ok
                else:
                    assert ok == (is_q_pseudoultrametric(m, candidate, embed) is True)
                cross_checked += 1
        assert admissible >= 1
    report(6, f"minimality verified for 200 mappings ({cross_checked} validator cross-checks)")


def test_criterion_07_similarity_coincidence():
    """Combinatorial and weak deciders agree on minimal-order pseudoultrametrics."""
    rng = np.random.default_rng(7)
    yes = no = 0
    for trial in range(500):
        n = int(rng.integers(2, 6))
        a = mapping_from_levels(random_ultrametric_levels(rng, n, 3))
        if trial % 2:
            perm = tuple(int(i) for i in rng.permutation(a.n))
            relabel = {v: f"y{i}" for i, v in enumerate(a.values)}
            b = transform_mapping(a, perm, relabel)
        else:
            b = mapping_from_levels(random_ultrametric_levels(rng, n, 3), prefix="y")
        pa, pb = minimal_order(a), minimal_order(b)
        embed_a, embed_b = identity_embed(a), identity_embed(b)
        assert is_q_pseudoultrametric(a, pa, embed_a) is True
        assert is_q_pseudoultrametric(b, pb, embed_b) is True
        comb = combinatorially_similar(a, b)
        weak = weakly_similar(a, pa, b, pb)
        assert isinstance(comb, SimilarityWitness) == isinstance(weak, SimilarityWitness)
        if isinstance(comb, SimilarityWitness):
            yes += 1
            assert verify_witness(comb, a, b)
            assert verify_witness(weak, a, b)
        else:
            no += 1
    assert yes >= 100 and no >= 100
    report(7, f"deciders agree on 500 random pairs ({yes} similar, {no} dissimilar)")


def test_criterion_08_canonical_chain_round_trip(capsys, tmp_path):
    """chain k piped through minimal-order reproduces the chain, for k = 1..64."""
    for k in range(1, 65):
        code, doc = run_cli(capsys, "chain", str(k))
        assert code == 0
        assert sorted(doc["values"]) == sorted(str(i) for i in range(k))
        path = tmp_path / f"chain{k}.json"
        path.write_text(json.dumps(doc))
        code, order_doc = run_cli(capsys, "minimal-order", str(path))
        assert code == 0
        assert order_doc == doc["poset"]
    report(8, "chain(k) | minimal-order is the identity for k = 1..64, with full range")


def _random_bottomed_poset(rng, k: int) -> FinitePoset:
    mats = all_poset_matrices(k)
    while True:
        leq = mats[int(rng.integers(0, len(mats)))]
        p = FinitePoset(tuple(f"q{i}" for i in range(k)), leq.copy())
        bottom = smallest_element(p)
        if bottom is not None:
            if bottom != p.elements[0]:
                order = [bottom] + [e for e in p.elements if e != bottom]
                idx = [p.index(e) for e in order]
                leq2 = leq[np.ix_(idx, idx)].copy()
                p = FinitePoset(tuple(f"q{i}" for i in range(k)), leq2)
            return p


def _random_chain_from_bottom(rng, p: FinitePoset, length: int) -> list[str]:
    chain = [p.elements[0]]
    while len(chain) < length:
        last = p.index(chain[-1])
        above = [
            j
            for j in range(p.k)
            if p.leq[last, j] and j != last and p.elements[j] not in chain
        ]
        if not above:
            break
        chain.append(p.elements[int(rng.choice(above))])
    return chain


def _random_isotone_bottom_preserving(rng, q: FinitePoset, l: FinitePoset) -> ValueMap:
    topo = sorted(range(q.k), key=lambda i: int(q.leq[:, i].sum()))
    for _ in range(4):
        out: dict[str, str] = {q.elements[0]: l.elements[0]}
        feasible = True
        for i in topo:
            label = q.elements[i]
            if label in out:
                continue
            below = [q.elements[j] for j in range(q.k) if q.leq[j, i] and j != i]
            candidates = [
                m
                for m in range(l.k)
                if all(l.leq[l.index(out[b]), m] for b in below if b in out)
            ]
            if not candidates:
                feasible = False
                break
            out[label] = l.elements[int(rng.choice(candidates))]
        if feasible:
            return ValueMap(tuple((e, out[e]) for e in q.elements))
    return ValueMap(tuple((e, l.elements[0]) for e in q.elements))


def test_criterion_09_isotone_transfer():
    """Transfers along isotone bottom-preserving maps stay pseudoultrametrics;
    kernel violations are witnessed by the two-point counterexample."""
    rng = np.random.default_rng(9)
    kernel_violations = 0
    for _ in range(500):
        kq = int(rng.integers(2, 6))
        kl = int(rng.integers(2, 6))
        q = _random_bottomed_poset(rng, kq)
        l = _random_bottomed_poset(rng, kl)
        chain = _random_chain_from_bottom(rng, q, int(rng.integers(2, kq + 1)))
        levels = random_ultrametric_levels(rng, int(rng.integers(2, 6)), len(chain) - 1)
        rows = [[chain[int(v)] for v in row] for row in levels]
        m = FiniteMapping.from_labels(tuple(f"p{i}" for i in range(levels.shape[0])), rows)
        assert is_q_pseudoultrametric(m, q, identity_embed(m)) is True
        f = _random_isotone_bottom_preserving(rng, q, l)
        out = compose_isotone(f, m, q, l)
        assert is_q_pseudoultrametric(out, l, identity_embed(out)) is True

        verdict = check_ultrametric_preserving(f, q, l)
        if verdict is True:
            image = compose_isotone(f, m, q, l)
            if is_q_ultrametric(m, q, identity_embed(m)) is True:
                assert is_q_ultrametric(image, l, identity_embed(image)) is True
        else:
            tag, offending = verdict
            assert tag == "kernel"
            kernel_violations += 1
            counterexample = two_point_mapping(q.elements[0], offending)
            assert is_q_ultrametric(counterexample, q, identity_embed(counterexample)) is True
            image = compose_isotone(f, counterexample, q, l)
            assert is_q_ultrametric(image, l, identity_embed(image)) is not True
    assert kernel_violations >= 50
    report(9, f"500 transfers validated; {kernel_violations} kernel violations refuted by two-point images")


def test_criterion_10_distance_but_not_poset_ultrametric(capsys):
    """The antichain-valued fixture is an ultrametric distance yet not a poset ultrametric."""
    path = str(FIXTURES / "antichain_distance.json")
    code, doc = run_cli(capsys, "validate-q", path, "--kind", "distance")
    assert code == 0 and doc["valid"] is True
    code, doc = run_cli(capsys, "validate-q", path, "--kind", "ultra")
    assert code == 1 and doc["valid"] is False
    mapping, poset = parse_mapping_document(json.loads(Path(path).read_text()))
    embed = identity_embed(mapping)
    assert is_ultrametric_distance(mapping, poset, embed) is True
    assert is_q_ultrametric(mapping, poset, embed) is not True
    report(10, "antichain fixture passes the distance axioms and fails the poset-ultrametric test")
