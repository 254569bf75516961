#!/usr/bin/env python3
"""
Tests for the Fréchet query engine
Tests the exact baseline, one-sided decisions, value sandwiches, subcurves and zero-count audits.
"""

from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from engine.curve_index import CurveIndex
from engine.curve_model import build_curve
from engine.frechet_engine import _move_rho_star, audit_zero_bound, decide, exact_discrete_frechet, value, zero_bound
from engine.generators import graph_walk, line_points, random_graph, random_walk_points, retrace_points
from engine.metric_oracles import euclidean_oracle, graph_oracle, perturbed_oracle
from test_utils import random_pair
from utils.errors import BudgetExceededError, ContractViolation
from utils.types import CurveEnd, QueryAudit, QueryParams, Verdict

EPSILONS = (0.1, 0.5, 0.9)


@pytest.fixture
def segment(line_oracle):
    """P = (0), (10) in R^1"""
    return build_curve([(0.0,), (10.0,)], line_oracle)


class TestExactDiscreteFrechet:
    """Tests for the O(nm) dynamic program"""

    def test_identical_curves(self, square_curve, plane):
        """Test D_F(P, P) = 0"""
        assert exact_discrete_frechet(square_curve, square_curve, plane) == 0.0

    def test_single_column(self, segment, line_oracle):
        """Test a one-vertex Q must meet both ends of P"""
        q = build_curve([(0.0,)], line_oracle)
        assert exact_discrete_frechet(segment, q, line_oracle) == 10.0

    def test_midpoint(self, segment, line_oracle):
        """Test Q at the midpoint is 5 away from both ends"""
        q = build_curve([(5.0,)], line_oracle)
        assert exact_discrete_frechet(segment, q, line_oracle) == 5.0

    def test_symmetric(self, rng, plane):
        """Test the distance does not depend on argument order"""
        p = build_curve(random_walk_points(12, 2, seed=1), plane)
        q = build_curve(random_walk_points(9, 2, seed=2), plane)
        assert exact_discrete_frechet(p, q, plane) == exact_discrete_frechet(q, p, plane)

    def test_budget(self, square_curve, plane):
        """Test n·m above the budget is refused"""
        with pytest.raises(BudgetExceededError):
            exact_discrete_frechet(square_curve, square_curve, plane, budget=15)
        assert exact_discrete_frechet(square_curve, square_curve, plane, budget=16) == 0.0

    def test_budget_from_config(self, square_curve, plane, monkeypatch):
        """Test the default budget comes from PFRECHET_EXACT_BUDGET"""
        from utils.read_config import invalidate_config_cache

        monkeypatch.setenv("PFRECHET_EXACT_BUDGET", "10")
        invalidate_config_cache()
        with pytest.raises(BudgetExceededError):
            exact_discrete_frechet(square_curve, square_curve, plane)

    def test_needs_exact_oracle(self, square_curve, plane):
        """Test a perturbed oracle is refused"""
        with pytest.raises(ContractViolation):
            exact_discrete_frechet(square_curve, square_curve, perturbed_oracle(plane, 0.01, seed=0))


class TestDecide:
    """Tests for the one-sided decision"""

    def test_identical_curves(self, square_curve, plane):
        """Test P = Q is AT_MOST for any positive ρ"""
        index = CurveIndex.build(square_curve, plane)
        for rho in (1e-6, 0.5, 3.0):
            assert decide(index, square_curve, QueryParams(0.5, rho)).verdict is Verdict.AT_MOST

    def test_far_query(self, segment, line_oracle):
        """Test D = 10 is GREATER_THAN at ρ = 5 and AT_MOST at ρ = 20"""
        index = CurveIndex.build(segment, line_oracle)
        q = build_curve([(0.0,)], line_oracle)
        assert decide(index, q, QueryParams(0.1, 5.0)).verdict is Verdict.GREATER_THAN
        assert decide(index, q, QueryParams(0.1, 20.0)).verdict is Verdict.AT_MOST

    def test_rho_zero(self, square_curve, plane):
        """Test ρ = 0 is exact-threshold reachability"""
        index = CurveIndex.build(square_curve, plane)
        assert decide(index, square_curve, QueryParams(0.5, 0.0)).at_most
        shifted = build_curve([(x + 0.1, y) for x, y in square_curve.points], plane)
        assert not decide(index, shifted, QueryParams(0.5, 0.0)).at_most

    def test_audit_counters(self, square_curve, plane):
        """Test a run reports pushes, oracle calls and tree visits"""
        index = CurveIndex.build(square_curve, plane)
        audit = decide(index, square_curve, QueryParams(0.5, 0.1)).audit
        assert audit.cells_pushed >= 4
        assert audit.oracle_calls >= audit.cells_pushed
        assert audit.decisions == 1
        assert audit.simplified_vertices == 4

    def test_invalid_parameters(self, square_curve, plane):
        """Test bad ε, missing ρ and a too coarse oracle"""
        index = CurveIndex.build(square_curve, plane)
        with pytest.raises(ContractViolation):
            QueryParams(1.0, 1.0)
        with pytest.raises(ContractViolation):
            decide(index, square_curve, QueryParams(0.5))
        with pytest.raises(ContractViolation):
            decide(index, square_curve, QueryParams(0.5, 1.0), perturbed_oracle(plane, 0.1, seed=0))
        with pytest.raises(ContractViolation):
            decide(index, square_curve, QueryParams(0.5, 1.0, 3, 2))

    def test_one_sided_contract(self, rng):
        """Test 500 random instances against the exact distance at ρ ∈ {D/2, D, 2D}"""
        for _ in range(500):
            oracle, p, q = random_pair(rng)
            epsilon = float(rng.choice(EPSILONS))
            d = exact_discrete_frechet(p, q, oracle)
            index = CurveIndex.build(p, oracle)
            for rho in (0.5 * d, d, 2.0 * d):
                outcome = decide(index, q, QueryParams(epsilon, rho))
                if outcome.at_most:
                    assert d <= (1 + epsilon) * rho + 1e-9
                else:
                    assert d > rho - 1e-9

    def test_one_sided_contract_perturbed(self, rng):
        """Test the contract still holds through a (1+ε/6)-approximate oracle"""
        for _ in range(100):
            oracle, p, q = random_pair(rng, max_n=16, max_m=16)
            epsilon = float(rng.choice(EPSILONS))
            d = exact_discrete_frechet(p, q, oracle)
            index = CurveIndex.build(p, oracle)
            for seed in range(5):
                perceived = perturbed_oracle(oracle, epsilon / 6.0, seed)
                for rho in (0.5 * d, d, 2.0 * d):
                    outcome = decide(index, q, QueryParams(epsilon, rho), perceived)
                    if outcome.at_most:
                        assert d <= (1 + epsilon) * rho + 1e-9
                    else:
                        assert d > rho - 1e-9

    def test_rho_ladder(self, rng):
        """Test once a ladder of ρ answers AT_MOST, every larger rung does too"""
        for _ in range(200):
            oracle, p, q = random_pair(rng, max_n=24, max_m=24)
            epsilon = float(rng.choice(EPSILONS))
            d = exact_discrete_frechet(p, q, oracle)
            if d == 0.0:
                continue
            index = CurveIndex.build(p, oracle)
            verdicts = [decide(index, q, QueryParams(epsilon, float(rho))).at_most for rho in np.geomspace(d / 4, 4 * d, 17)]
            assert all(verdicts[verdicts.index(True) :])


class TestValue:
    """Tests for the (1±ε) value query"""

    def test_identical_curves(self, rng, plane):
        """Test ν(P, P) = 0"""
        p = build_curve(random_walk_points(20, 2, seed=3), plane)
        result = value(CurveIndex.build(p, plane), p, QueryParams(0.5))
        assert result.nu == pytest.approx(0.0, abs=1e-9)
        assert result.lam == 0.0

    def test_single_vertex_curves(self, line_oracle):
        """Test n = m = 1 returns the point distance"""
        p = build_curve([(2.0,)], line_oracle)
        q = build_curve([(5.0,)], line_oracle)
        result = value(CurveIndex.build(p, line_oracle), q, QueryParams(0.5))
        assert 0.5 * 3.0 <= result.nu <= 1.5 * 3.0

    def test_midpoint_example(self, segment, line_oracle):
        """Test P = (0), (10) against Q = (5)"""
        q = build_curve([(5.0,)], line_oracle)
        result = value(CurveIndex.build(segment, line_oracle), q, QueryParams(0.1))
        assert 4.5 <= result.nu <= 5.5
        assert result.case in ("interval", "gap", "beyond")
        assert result.C == pytest.approx(5.0 / 1.05)

    def test_sandwich(self, rng):
        """Test ν ∈ [(1−ε)D, (1+ε)D] on 500 random instances"""
        for _ in range(500):
            oracle, p, q = random_pair(rng)
            epsilon = float(rng.choice(EPSILONS))
            d = exact_discrete_frechet(p, q, oracle)
            result = value(CurveIndex.build(p, oracle), q, QueryParams(epsilon))
            assert (1 - epsilon) * d - 1e-9 <= result.nu <= (1 + epsilon) * d + 1e-9
            assert result.audit.rho_star_monotone

    def test_sandwich_perturbed(self, rng):
        """Test the sandwich through a perturbed oracle"""
        for _ in range(100):
            oracle, p, q = random_pair(rng, max_n=16, max_m=16)
            epsilon = float(rng.choice(EPSILONS))
            d = exact_discrete_frechet(p, q, oracle)
            perceived = perturbed_oracle(oracle, epsilon / 6.0, int(rng.integers(1000)))
            result = value(CurveIndex.build(p, oracle), q, QueryParams(epsilon), perceived)
            assert (1 - epsilon) * d - 1e-9 <= result.nu <= (1 + epsilon) * d + 1e-9

    def test_threshold_only_rises(self, rng):
        """Test the refinement raises ρ* on some instances and never lowers it"""
        raises = 0
        for _ in range(100):
            oracle, p, q = random_pair(rng, max_n=24, max_m=24)
            result = value(CurveIndex.build(p, oracle), q, QueryParams(float(rng.choice(EPSILONS))))
            assert result.audit.rho_star_monotone
            raises += result.audit.rho_star_raises
        assert raises > 0

    def test_threshold_decrease_flagged(self):
        """Test moving ρ* down clears the monotone flag"""
        audit = QueryAudit()
        assert _move_rho_star(audit, 2.0, 3.0) == 3.0
        assert audit.rho_star_raises == 1 and audit.rho_star_monotone
        assert _move_rho_star(audit, 3.0, 1.5) == 1.5
        assert not audit.rho_star_monotone

    def test_lambda_certified(self, rng):
        """Test λ stays below the distance and the bracket stays ordered"""
        for _ in range(100):
            oracle, p, q = random_pair(rng)
            epsilon = float(rng.choice(EPSILONS))
            d = exact_discrete_frechet(p, q, oracle)
            result = value(CurveIndex.build(p, oracle), q, QueryParams(epsilon))
            assert result.lam <= d + 1e-9
            assert result.bracket[0] <= result.lam <= result.bracket[1]

    def test_endpoints_cached_per_epsilon(self, rng, plane):
        """Test repeated queries reuse the scaled endpoints until the curve changes"""
        index = CurveIndex.build(build_curve(random_walk_points(50, 2, seed=9), plane), plane)
        q = build_curve(random_walk_points(5, 2, seed=10), plane)
        value(index, q, QueryParams(0.5))
        cached = index.frechet_endpoints(0.5)
        value(index, q, QueryParams(0.5))
        assert index.frechet_endpoints(0.5) is cached
        index.truncate(CurveEnd.TAIL)
        assert index.frechet_endpoints(0.5) is not cached

    def test_subcurve(self, rng, plane):
        """Test subcurve queries against the extracted subcurve"""
        p = build_curve(random_walk_points(30, 2, seed=12), plane)
        index = CurveIndex.build(p, plane)
        for _ in range(40):
            i = int(rng.integers(1, 31))
            j = int(rng.integers(i, 31))
            q = build_curve(random_walk_points(int(rng.integers(1, 12)), 2, seed=int(rng.integers(1000))), plane)
            sub = p.subcurve(i, j)
            d = exact_discrete_frechet(sub, q, plane)
            epsilon = float(rng.choice(EPSILONS))

            result = value(index, q, QueryParams(epsilon, None, i, j))
            assert (1 - epsilon) * d - 1e-9 <= result.nu <= (1 + epsilon) * d + 1e-9

            fresh = CurveIndex.build(sub, plane)
            for rho in (0.5 * d, d, 2.0 * d):
                ranged = decide(index, q, QueryParams(epsilon, rho, i, j))
                extracted = decide(fresh, q, QueryParams(epsilon, rho))
                assert ranged.verdict is extracted.verdict
                assert ranged.audit.cells_pushed == extracted.audit.cells_pushed


class TestZeroBound:
    """Tests for the zero-count audit"""

    def test_bound_formula(self):
        """Test 8·(c·k/ε)·m"""
        assert zero_bound(2.0, 6, 0.5, 1) == 192.0
        assert zero_bound(10.0, 6, 0.5, 3) == 2880.0

    def test_line_decisions(self, rng, plane):
        """Test decisions on a straight line push at most 192m cells at ε = 0.5"""
        p = build_curve(line_points(400, 2, length=10.0), plane)
        index = CurveIndex.build(p, plane)
        for m in (1, 5, 20):
            q = build_curve([(float(x), float(y)) for x, y in rng.uniform([0, -0.5], [10, 0.5], size=(m, 2))], plane)
            for rho in (0.01, 0.3, 1.0, 5.0, 20.0):
                audit = decide(index, q, QueryParams(0.5, rho)).audit
                report = audit_zero_bound(audit, 2.0, 6, 0.5, m)
                assert report.holds
                assert report.bound == 192.0 * m

    def test_line_values(self, rng, plane):
        """Test the refinement pass of value queries stays within the k = 24 bound"""
        p = build_curve(line_points(400, 2, length=10.0), plane)
        index = CurveIndex.build(p, plane)
        for epsilon in EPSILONS:
            q = build_curve(line_points(16, 2, length=10.0), plane)
            q = build_curve([(x, y + 0.2) for x, y in q.points], plane)
            result = value(index, q, QueryParams(epsilon))
            assert audit_zero_bound(result.audit, 2.0, 24, epsilon, q.n).holds

    def test_retrace_decisions(self, rng, line_oracle):
        """Test a curve retracing a unit segment five times stays within 960m"""
        p = build_curve(retrace_points(5, 9), line_oracle)
        index = CurveIndex.build(p, line_oracle)
        q = build_curve([(float(x),) for x in np.linspace(0.0, 1.0, 7)], line_oracle)
        for rho in (0.01, 0.1, 0.5, 2.0):
            audit = decide(index, q, QueryParams(0.5, rho)).audit
            assert audit_zero_bound(audit, 10.0, 6, 0.5, q.n).holds


class TestConcurrentQueries:
    """Tests for queries sharing one index across threads"""

    def test_graph_queries_match_sequential(self, rng):
        """Test decisions and values from a thread pool equal a sequential run"""
        graph = random_graph(80, extra_edges=40, seed=5)
        oracle = graph_oracle(graph, cache_size=8)
        index = CurveIndex.build(build_curve(graph_walk(graph, 60, seed=6), oracle), oracle)
        queries = [build_curve(graph_walk(graph, int(rng.integers(1, 20)), seed=100 + k), oracle) for k in range(24)]
        jobs = [(q, rho) for q in queries for rho in (1.0, 4.0, 16.0)]

        def run(job):
            q, rho = job
            outcome = decide(index, q, QueryParams(0.5, rho))
            return outcome.verdict, outcome.audit.cells_pushed, value(index, q, QueryParams(0.5)).nu

        sequential = [run(job) for job in jobs]
        with ThreadPoolExecutor(max_workers=8) as pool:
            concurrent = list(pool.map(run, jobs))
        assert concurrent == sequential
