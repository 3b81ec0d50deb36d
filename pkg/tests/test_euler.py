"""
Tests for the wall-crossing Euler class engine.
"""

import random
import threading
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from itertools import combinations_with_replacement

import pytest

from wallcross.data_structures.multipoly import MultiPoly, monomials_of_degree
from wallcross.models.error_codes import PreconditionError, ValidationError
from wallcross.models.problems import ToricProblem
from wallcross.models.weights import WeightSystem
from wallcross.monitoring.metrics import INVARIANCE_CHECKS, MEMO_HITS, MEMO_MISSES
from wallcross.services.euler_service import WallCrossingEngine
from wallcross.services.selftest_service import PATH_SYSTEMS
from wallcross.services.weight_combinatorics import enumerate_walls

from .utils import monomial, toric


def random_top_class(rng, problem):
    terms = {}
    for exponent in monomials_of_degree(problem.k, problem.selection_degree):
        terms[exponent] = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    return MultiPoly(problem.k, terms)


class TestProjectiveSpaces:
    @pytest.mark.parametrize("n", range(2, 9))
    def test_top_power(self, engine, n):
        problem = toric([(1,)], [n], (1,))
        assert engine.euler_class(problem, monomial(n - 1)) == 1

    @pytest.mark.parametrize("n", range(2, 6))
    def test_negative_weight_and_level(self, engine, n):
        problem = toric([(-1,)], [n], (-1,))
        assert engine.euler_class(problem, monomial(n - 1)) == (-1) ** (n - 1)

    def test_level_outside_the_cone(self, engine):
        problem = toric([(1,)], [3], (-1,))
        assert engine.euler_class(problem, monomial(2)) == 0

    def test_wrong_degree(self, engine):
        problem = toric([(1,)], [3], (1,))
        assert engine.euler_class(problem, monomial(1)) == 0
        assert engine.euler_class(problem, monomial(3)) == 0

    def test_weighted(self, engine):
        for n in range(1, 5):
            for scales in combinations_with_replacement(range(1, 5), n):
                problem = toric([(s,) for s in scales], [1] * n, (1,))
                expected = Fraction(1)
                for s in scales:
                    expected /= s
                assert engine.euler_class(problem, monomial(n - 1)) == expected, scales


class TestProducts:
    @pytest.mark.parametrize("a", range(1, 4))
    @pytest.mark.parametrize("b", range(1, 4))
    def test_single_monomial_survives(self, engine, product_system, a, b):
        problem = ToricProblem(ws=product_system(a, b), tau=(Fraction(1), Fraction(1)))
        table = engine.euler_table(problem)
        assert set(table) == set(monomials_of_degree(2, a + b))
        for exponent, value in table.items():
            assert value == (1 if exponent == (a, b) else 0), exponent


class TestThreeWeights:
    def test_below_diagonal(self, engine, three_weights):
        problem = ToricProblem(ws=three_weights, tau=(Fraction(2), Fraction(1)))
        assert engine.euler_class(problem, monomial(1, 0)) == 0
        assert engine.euler_class(problem, monomial(0, 1)) == 1

    def test_above_diagonal(self, engine, three_weights):
        problem = ToricProblem(ws=three_weights, tau=(Fraction(1, 2), Fraction(3, 2)))
        assert engine.euler_class(problem, monomial(1, 0)) == 1
        assert engine.euler_class(problem, monomial(0, 1)) == 0

    @pytest.mark.parametrize("scale", [Fraction(1, 5), 3, 11])
    def test_constant_on_chambers(self, engine, three_weights, scale):
        problem = ToricProblem(ws=three_weights, tau=(2 * Fraction(scale), Fraction(scale)))
        assert engine.euler_class(problem, monomial(0, 1)) == 1

    def test_other_degrees_are_ignored(self, engine, three_weights):
        problem = ToricProblem(ws=three_weights, tau=(Fraction(2), Fraction(1)))
        x = monomial(0, 1) + 7 * monomial(2, 0) - 3 + monomial(1, 1) * monomial(0, 2)
        assert engine.euler_class(problem, x) == 1

    def test_orientation_sign(self, engine, three_weights):
        problem = ToricProblem(ws=three_weights, tau=(Fraction(2), Fraction(1)), orientation_sign=-1)
        assert engine.euler_class(problem, monomial(0, 1)) == -1

    def test_on_wall_level(self, engine, three_weights):
        problem = ToricProblem(ws=three_weights, tau=(Fraction(1), Fraction(1)))
        with pytest.raises(PreconditionError) as exc:
            engine.euler_class(problem, monomial(0, 1))
        assert exc.value.field == "tau"


class TestWallCrossingDifference:
    # (wall index, tau0, eta, value on x1, value on x2)
    CASES = [
        (0, (1, 0), (0, 1), 0, 1),
        (1, (0, 1), (1, 0), 1, 0),
        (2, (1, 1), (1, -1), -1, 1),
    ]

    @pytest.mark.parametrize("index,tau0,eta,on_x1,on_x2", CASES)
    def test_values(self, engine, three_weights, index, tau0, eta, on_x1, on_x2):
        wall = enumerate_walls(three_weights)[index]
        tau0 = tuple(Fraction(t) for t in tau0)
        assert engine.wall_crossing_difference(three_weights, wall, tau0, eta, monomial(1, 0)) == on_x1
        assert engine.wall_crossing_difference(three_weights, wall, tau0, eta, monomial(0, 1)) == on_x2

    @pytest.mark.parametrize("index,tau0,eta,on_x1,on_x2", CASES)
    def test_matches_jump_across_wall(self, engine, three_weights, index, tau0, eta, on_x1, on_x2):
        wall = enumerate_walls(three_weights)[index]
        step = [Fraction(e, 4) for e in eta]
        after = ToricProblem(ws=three_weights, tau=tuple(t + s for t, s in zip(tau0, step)))
        before = ToricProblem(ws=three_weights, tau=tuple(t - s for t, s in zip(tau0, step)))
        for x in (monomial(1, 0), monomial(0, 1)):
            jump = engine.euler_class(after, x) - engine.euler_class(before, x)
            assert engine.wall_crossing_difference(three_weights, wall, tau0, eta, x) == jump

    def test_reversed_direction_negates(self, engine, three_weights):
        wall = enumerate_walls(three_weights)[2]
        tau0 = (Fraction(1), Fraction(1))
        forward = engine.wall_crossing_difference(three_weights, wall, tau0, (1, -1), monomial(0, 1))
        backward = engine.wall_crossing_difference(three_weights, wall, tau0, (-1, 1), monomial(0, 1))
        assert backward == -forward

    @pytest.mark.parametrize("n", [1, 2, 4])
    def test_rank_one_origin(self, engine, n):
        ws = WeightSystem.from_lists([(1,)], [n])
        wall = enumerate_walls(ws)[0]
        assert engine.wall_crossing_difference(ws, wall, (Fraction(0),), (1,), monomial(n - 1)) == 1

    def test_point_on_several_walls(self, engine, three_weights):
        wall = enumerate_walls(three_weights)[0]
        with pytest.raises(PreconditionError):
            engine.wall_crossing_difference(three_weights, wall, (0, 0), (1, 1), monomial(0, 1))

    def test_tangent_direction(self, engine, three_weights):
        wall = enumerate_walls(three_weights)[0]
        with pytest.raises(PreconditionError) as exc:
            engine.wall_crossing_difference(three_weights, wall, (1, 0), (1, 0), monomial(0, 1))
        assert exc.value.field == "eta"

    def test_point_off_the_wall(self, engine, three_weights):
        wall = enumerate_walls(three_weights)[0]
        with pytest.raises(PreconditionError):
            engine.wall_crossing_difference(three_weights, wall, (2, 1), (0, 1), monomial(0, 1))

    def test_class_dimension_mismatch(self, engine, three_weights):
        wall = enumerate_walls(three_weights)[0]
        with pytest.raises(ValidationError):
            engine.wall_crossing_difference(three_weights, wall, (1, 0), (0, 1), monomial(1))


class TestPathIndependence:
    @pytest.mark.slow
    @pytest.mark.parametrize("weights,mults,tau", PATH_SYSTEMS)
    def test_seeds_agree(self, weights, mults, tau):
        problem = toric(weights, mults, tau)
        reference = WallCrossingEngine(seed=0, retries=25, memoize=True).euler_table(problem)
        rng = random.Random(sum(mults))
        for seed in range(1, 20):
            x = random_top_class(rng, problem)
            expected = sum(c * reference[e] for e, c in x.items())
            engine = WallCrossingEngine(seed=seed, retries=25, memoize=False)
            assert engine.euler_class(problem, x) == expected, seed

    @pytest.mark.parametrize("weights,mults,tau", PATH_SYSTEMS[:2])
    def test_scaling_the_level(self, engine, weights, mults, tau):
        problem = toric(weights, mults, tau)
        scaled = toric(weights, mults, [Fraction(5, 3) * t for t in tau])
        assert engine.euler_table(problem) == engine.euler_table(scaled)


class TestDegenerateInputs:
    def test_empty_system(self, engine):
        problem = toric([(1, 0), (0, 1)], [0, 0], (1, 1))
        assert engine.euler_class(problem, MultiPoly.constant(2, 1)) == 0

    def test_empty_system_at_origin(self, engine):
        problem = toric([(1, 0), (0, 1)], [0, 0], (0, 0))
        with pytest.raises(PreconditionError):
            engine.euler_class(problem, MultiPoly.constant(2, 1))

    def test_point(self, engine):
        problem = ToricProblem(ws=WeightSystem(0, ()), tau=())
        assert engine.euler_class(problem, MultiPoly.constant(0, 3)) == 3

    def test_level_on_the_only_wall(self, engine):
        problem = toric([(1, 0)], [1], (1, 0))
        with pytest.raises(PreconditionError):
            engine.euler_class(problem, MultiPoly.constant(2, 1))

    def test_improper_system(self, engine):
        problem = toric([(1,), (-1,)], [1, 1], (1,))
        with pytest.raises(PreconditionError) as exc:
            engine.euler_class(problem, monomial(1))
        assert exc.value.field == "weights"

    def test_class_dimension_mismatch(self, engine, cp2):
        with pytest.raises(ValidationError):
            engine.euler_class(ToricProblem(ws=cp2, tau=(Fraction(1),)), monomial(1, 1))


class TestMemoization:
    def test_hits_on_repeat(self, engine, three_weights, fresh_metrics):
        problem = ToricProblem(ws=three_weights, tau=(Fraction(2), Fraction(1)))
        engine.euler_class(problem, monomial(0, 1))
        misses = fresh_metrics.get_count(MEMO_MISSES)
        assert misses > 0
        assert engine.cache_size > 0
        assert engine.euler_class(problem, monomial(0, 1)) == 1
        assert fresh_metrics.get_count(MEMO_HITS) >= 1
        assert fresh_metrics.get_count(MEMO_MISSES) == misses

    def test_clear_cache(self, engine, three_weights):
        problem = ToricProblem(ws=three_weights, tau=(Fraction(2), Fraction(1)))
        engine.euler_class(problem, monomial(0, 1))
        engine.clear_cache()
        assert engine.cache_size == 0

    def test_disabled(self, three_weights, fresh_metrics):
        engine = WallCrossingEngine(seed=0, retries=25, memoize=False)
        problem = ToricProblem(ws=three_weights, tau=(Fraction(2), Fraction(1)))
        assert engine.euler_class(problem, monomial(0, 1)) == 1
        assert engine.euler_class(problem, monomial(0, 1)) == 1
        assert engine.cache_size == 0
        assert fresh_metrics.get_count(MEMO_HITS) == 0

    def test_concurrent_callers_compute_each_entry_once(self, engine, three_weights, monkeypatch):
        problem = ToricProblem(ws=three_weights, tau=(Fraction(2), Fraction(1)))
        calls = Counter()
        calls_lock = threading.Lock()
        evaluate_uncached = engine._evaluate_uncached

        def slow_evaluate(p, x, seed, reduced, trace):
            with calls_lock:
                calls[engine._memo_key(p, x, seed)] += 1
            time.sleep(0.02)
            return evaluate_uncached(p, x, seed, reduced, trace)

        monkeypatch.setattr(engine, "_evaluate_uncached", slow_evaluate)
        with ThreadPoolExecutor(max_workers=8) as pool:
            values = list(pool.map(lambda _: engine.euler_class(problem, monomial(0, 1)), range(8)))
        assert values == [1] * 8
        assert calls
        assert max(calls.values()) == 1
        assert engine.cache_size == len(calls)

    def test_failed_entry_is_not_cached(self, engine, fresh_metrics):
        problem = toric([(1, 0)], [1], (1, 0))
        for _ in range(2):
            with pytest.raises(PreconditionError):
                engine.euler_class(problem, MultiPoly.constant(2, 1))
        assert engine.cache_size == 0
        assert fresh_metrics.get_count(MEMO_HITS) == 0

    def test_invariance_checks_are_counted(self, engine, three_weights, fresh_metrics):
        problem = ToricProblem(ws=three_weights, tau=(Fraction(2), Fraction(1)))
        engine.euler_class(problem, monomial(0, 1))
        assert fresh_metrics.get_count(INVARIANCE_CHECKS) > 0


class TestTraceAndTable:
    def test_trace(self, engine, three_weights):
        problem = ToricProblem(ws=three_weights, tau=(Fraction(2), Fraction(1)))
        value, tree = engine.euler_trace(problem, monomial(0, 1))
        assert value == 1
        assert tree.value == 1
        assert tree.k == 2
        assert len(tree.children) == 1
        child = tree.children[0]
        assert child.k == 1
        assert child.crossing is not None
        assert child.crossing.wall.index_set == (0,)
        assert tree.count_nodes() == len(tree.flatten()) >= 2
        data = tree.to_dict()
        assert data["value"] == "1"
        assert data["crossings"][0]["wall"] == [1]

    def test_table(self, engine, cp2, three_weights):
        assert engine.euler_table(ToricProblem(ws=cp2, tau=(Fraction(1),))) == {(2,): 1}
        table = engine.euler_table(ToricProblem(ws=three_weights, tau=(Fraction(2), Fraction(1))))
        assert table == {(1, 0): 0, (0, 1): 1}


class TestParallel:
    async def test_matches_serial(self, engine):
        problem = toric(*PATH_SYSTEMS[2])
        x = monomial(1, 0, 0) + 2 * monomial(0, 1, 0) - monomial(0, 0, 1)
        serial = engine.euler_class(problem, x)
        parallel = await engine.euler_class_parallel(
            problem,
            x,
            max_workers=2,
            executor_factory=lambda count: ThreadPoolExecutor(max_workers=count),
        )
        assert parallel == serial

    async def test_rank_one_falls_back(self, engine, cp2):
        problem = ToricProblem(ws=cp2, tau=(Fraction(1),))
        assert await engine.euler_class_parallel(problem, monomial(2)) == 1
