import numpy as np
import pytest

from ultrasim import (
    BudgetExceeded,
    FinitePoset,
    FiniteMapping,
    Realization,
    SimilarityWitness,
    combinatorially_similar,
    minimal_order,
    realize_ultrametric,
    similarity_coincidence_check,
    verify_witness,
    weakly_similar,
)

from oracles import (
    mapping_from_levels,
    random_symmetric_mapping,
    random_ultrametric_levels,
    similarity_oracle,
    transform_mapping,
)


def random_relabeled_copy(rng, m, prefix="y"):
    perm = tuple(int(i) for i in rng.permutation(m.n))
    f = {v: f"{prefix}{i}" for i, v in enumerate(m.values)}
    return transform_mapping(m, perm, f, prefix=prefix), perm, f


class TestCombinatorial:
    def test_identity_witness(self, equilateral_quadruple):
        w = combinatorially_similar(equilateral_quadruple, equilateral_quadruple)
        assert isinstance(w, SimilarityWitness)
        assert w.g == (0, 1, 2, 3)
        assert all(u == v for u, v in w.f)
        assert verify_witness(w, equilateral_quadruple, equilateral_quadruple)

    def test_relabeled_copies_found(self, rng):
        for _ in range(30):
            n = int(rng.integers(1, 6))
            k = int(rng.integers(1, 4))
            m = random_symmetric_mapping(rng, n, k)
            other, _, _ = random_relabeled_copy(rng, m)
            w = combinatorially_similar(m, other)
            assert isinstance(w, SimilarityWitness)
            assert verify_witness(w, m, other)

    def test_two_scale_fixture_never_matches_an_ultrametric(self, rng, isosceles_two_scale):
        for _ in range(10):
            m = mapping_from_levels(random_ultrametric_levels(rng, 4, 4))
            if m.k != isosceles_two_scale.k:
                continue
            r = realize_ultrametric(m)
            assert isinstance(r, Realization)
            assert combinatorially_similar(isosceles_two_scale, m) is None

    def test_pruned_search_agrees_with_bruteforce(self, rng):
        agree_yes = 0
        for trial in range(500):
            n = int(rng.integers(1, 7))
            k = int(rng.integers(1, 4))
            a = random_symmetric_mapping(rng, n, k)
            if trial % 2:
                b, _, _ = random_relabeled_copy(rng, a)
            else:
                b = random_symmetric_mapping(rng, n, k)
            expected = similarity_oracle(a, b)
            got = combinatorially_similar(a, b)
            if expected is None:
                assert got is None
            else:
                assert isinstance(got, SimilarityWitness)
                assert got.g == expected[0]  # same lexicographically least witness
                assert got.f_dict() == expected[1]
                agree_yes += 1
        assert agree_yes > 100

    def test_budget_exhaustion_is_reported(self, rng):
        m = mapping_from_levels(random_ultrametric_levels(rng, 8, 2))
        other, _, _ = random_relabeled_copy(rng, m)
        out = combinatorially_similar(m, other, budget=1)
        assert isinstance(out, BudgetExceeded)

    def test_symmetry_by_witness_inversion(self, rng):
        for _ in range(20):
            a = random_symmetric_mapping(rng, int(rng.integers(1, 6)), 3)
            b, _, _ = random_relabeled_copy(rng, a)
            w = combinatorially_similar(a, b)
            assert w is not None
            assert verify_witness(w.inverted(), b, a)

    def test_transitivity_by_witness_composition(self, rng):
        for _ in range(20):
            a = random_symmetric_mapping(rng, int(rng.integers(1, 6)), 3)
            b, _, _ = random_relabeled_copy(rng, a, prefix="y")
            c, _, _ = random_relabeled_copy(rng, b, prefix="w")
            ab = combinatorially_similar(a, b)
            bc = combinatorially_similar(b, c)
            assert ab is not None and bc is not None
            g = tuple(ab.g[i] for i in bc.g)
            f_bc = bc.f_dict()
            f = tuple((u, f_bc[v]) for u, v in ab.f)
            composed = SimilarityWitness(g, f, "combinatorial")
            assert verify_witness(composed, a, c)


class TestWeak:
    def test_weak_requires_order_isomorphism(self, rng):
        # same table twice, but the value orders disagree
        m = mapping_from_levels(random_ultrametric_levels(rng, 4, 2))
        other, _, f = random_relabeled_copy(rng, m)
        pa = minimal_order(m)
        pb_good = minimal_order(other)
        assert isinstance(pa, FinitePoset) and isinstance(pb_good, FinitePoset)
        w = weakly_similar(m, pa, other, pb_good)
        assert isinstance(w, SimilarityWitness)
        assert w.kind == "weak"
        # flip the second order upside down: no order isomorphism remains
        flipped = FinitePoset(pb_good.elements, pb_good.leq.T.copy())
        assert weakly_similar(m, pa, other, flipped) is None

    def test_weak_implies_combinatorial(self, rng):
        found = 0
        for _ in range(60):
            a = mapping_from_levels(random_ultrametric_levels(rng, int(rng.integers(2, 6)), 3))
            b, _, _ = random_relabeled_copy(rng, a)
            pa, pb = minimal_order(a), minimal_order(b)
            w = weakly_similar(a, pa, b, pb)
            if isinstance(w, SimilarityWitness):
                found += 1
                assert isinstance(
                    combinatorially_similar(a, b), SimilarityWitness
                )
        assert found > 30

    def test_totally_ordered_values_leave_one_candidate_bijection(self, rng):
        from ultrasim import canonical_chain_ultrametric

        a, pa = canonical_chain_ultrametric(["0", "1", "2", "3"])
        assert pa.is_total()
        b, _, f = random_relabeled_copy(rng, a)
        pb = minimal_order(b)
        w = weakly_similar(a, pa, b, pb)
        assert isinstance(w, SimilarityWitness)
        assert w.f_dict() == f  # forced: the unique increasing bijection


class TestCoincidence:
    def test_agreement_on_minimal_order_pseudoultrametrics(self, rng):
        yes = no = 0
        for trial in range(150):
            n = int(rng.integers(2, 6))
            a = mapping_from_levels(random_ultrametric_levels(rng, n, 3))
            if trial % 2:
                b, _, _ = random_relabeled_copy(rng, a)
            else:
                b = mapping_from_levels(random_ultrametric_levels(rng, n, 3), prefix="y")
            report = similarity_coincidence_check(a, b)
            assert report.agree
            if isinstance(report.combinatorial, SimilarityWitness):
                yes += 1
                assert verify_witness(report.combinatorial, a, b)
                assert verify_witness(report.weak, a, b)
            else:
                no += 1
        assert yes > 20 and no > 20
