import numpy as np
import pytest

from flexsky import EmptyRegionError, WeightPolytope, parse_constraints
from flexsky.dominance import dominance_count, f_dominates, pareto_dominates
from flexsky.oracle import OracleConfig, oracle_f_dominates

from helpers import make_relation, r0, region_through, schema, w1_ge_w2


class TestParetoDominates:
    def test_strictly_better_everywhere(self):
        assert pareto_dominates((0.2, 0.3), (0.4, 0.5)) is True

    def test_incomparable_pair(self):
        assert pareto_dominates((0.2, 0.5), (0.4, 0.3)) is False
        assert pareto_dominates((0.4, 0.3), (0.2, 0.5)) is False

    def test_equal_vectors_do_not_dominate(self):
        assert pareto_dominates((0.3, 0.3), (0.3, 0.3)) is False

    def test_weakly_better_with_one_strict(self):
        assert pareto_dominates((0.2, 0.3), (0.2, 0.4)) is True

    def test_arity_mismatch(self):
        with pytest.raises(ValueError, match="arity"):
            pareto_dominates((0.1,), (0.1, 0.2))

    def test_asymmetry_on_random_pairs(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            t, s = rng.random(3), rng.random(3)
            assert not (pareto_dominates(t, s) and pareto_dominates(s, t))

    def test_transitivity_on_random_triples(self):
        rng = np.random.default_rng(1)
        checked = 0
        for _ in range(3000):
            a, b, c = rng.random(2), rng.random(2), rng.random(2)
            if pareto_dominates(a, b) and pareto_dominates(b, c):
                assert pareto_dominates(a, c)
                checked += 1
        assert checked > 50


class TestFDominates:
    def test_dominates_with_strict_witness(self):
        verdict = f_dominates(np.array([0.2, 0.5]), np.array([0.4, 0.4]), w1_ge_w2())
        assert verdict.dominates is True
        assert verdict.witness.tolist() == [1.0, 0.0]

    def test_refuted_by_the_balanced_vertex(self):
        verdict = f_dominates(np.array([0.3, 0.6]), np.array([0.4, 0.4]), w1_ge_w2())
        assert verdict.dominates is False
        assert verdict.witness.tolist() == [0.5, 0.5]
        delta = np.array([0.3, 0.6]) - np.array([0.4, 0.4])
        assert float(verdict.witness @ delta) == pytest.approx(0.05)

    def test_no_witness_when_scores_tie_everywhere(self):
        # on the w1 = w2 segment of the full simplex these two always tie
        polytope = WeightPolytope(2, parse_constraints("w_a1 = 0.5", schema(2)))
        verdict = f_dominates(np.array([0.2, 0.4]), np.array([0.4, 0.2]), polytope)
        assert verdict.dominates is False
        assert verdict.witness is None

    def test_full_simplex_equals_pareto(self):
        rng = np.random.default_rng(2)
        simplex = WeightPolytope.full_simplex(3)
        for _ in range(300):
            t, s = rng.random(3), rng.random(3)
            assert f_dominates(t, s, simplex).dominates == pareto_dominates(t, s)

    def test_pareto_implies_region_dominance(self):
        rng = np.random.default_rng(3)
        done = 0
        while done < 100:
            d = int(rng.integers(2, 5))
            t, s = rng.random(d), rng.random(d)
            if not pareto_dominates(t, s):
                continue
            polytope, _, _ = region_through(rng, d, int(rng.integers(0, 4)))
            assert f_dominates(t, s, polytope).dominates is True
            done += 1

    def test_never_both_directions(self):
        rng = np.random.default_rng(4)
        for _ in range(100):
            d = int(rng.integers(2, 5))
            polytope, _, _ = region_through(rng, d, int(rng.integers(0, 4)))
            t, s = rng.random(d), rng.random(d)
            assert not (
                f_dominates(t, s, polytope).dominates and f_dominates(s, t, polytope).dominates
            )

    def test_empty_region_raises(self):
        empty = WeightPolytope(2, parse_constraints("w_a1 >= 0.8\nw_a2 >= 0.8", schema(2)))
        with pytest.raises(EmptyRegionError):
            f_dominates(np.array([0.1, 0.1]), np.array([0.2, 0.2]), empty)

    def test_oracle_agreement_on_random_triples(self):
        rng = np.random.default_rng(5)
        cfg = OracleConfig(sample_count=2000, seed=7)
        for trial in range(60):
            d = int(rng.integers(2, 5))
            polytope, _, _ = region_through(rng, d, int(rng.integers(0, 4)))
            t, s = rng.random(d), rng.random(d)
            verdict = f_dominates(t, s, polytope)
            sampled = oracle_f_dominates(t, s, polytope, cfg)
            assert verdict.dominates == sampled, trial
            if not verdict.dominates and verdict.witness is not None:
                assert polytope.contains(verdict.witness, tol=1e-7)
                assert float(verdict.witness @ (t - s)) > 1e-9


class TestDominanceCount:
    def test_skyline_member_has_zero_count(self):
        view = r0().distinct
        assert dominance_count(np.array([0.2, 0.3]), view) == 0

    def test_fully_dominated_counts_all(self):
        view = r0().distinct
        assert dominance_count(np.array([0.9, 0.9]), view) == 3

    def test_full_simplex_count_matches_pareto(self):
        rng = np.random.default_rng(6)
        rel = make_relation(rng.random((40, 3)))
        view = rel.distinct
        simplex = WeightPolytope.full_simplex(3)
        for row in range(0, 40, 7):
            v = view.vectors[row]
            assert dominance_count(v, view) == dominance_count(v, view, simplex)

    def test_region_count_at_least_pareto_count(self):
        rng = np.random.default_rng(7)
        rel = make_relation(rng.random((30, 2)))
        view = rel.distinct
        polytope, _, _ = region_through(rng, 2, 2)
        for row in range(0, 30, 5):
            v = view.vectors[row]
            assert dominance_count(v, view, polytope) >= dominance_count(v, view)

    def test_vector_must_belong_to_the_view(self):
        view = r0().distinct
        with pytest.raises(ValueError, match="does not occur"):
            dominance_count(np.array([0.123, 0.456]), view)
