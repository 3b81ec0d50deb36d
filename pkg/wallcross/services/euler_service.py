"""
Euler classes of toric quotients by wall crossing.

The value of a class x on the quotient at a regular level tau is zero in any
chamber outside the moment cone. Walking a generic straight path from such a
chamber to tau, each wall crossed changes the value by the Euler class of a
rank k - 1 problem: the weights of the wall at the crossing point, applied to
the total residue pushdown of x along the wall's normal e1. Rank one problems
are evaluated in closed form, rank zero problems are points.

Sign convention: the value on the complex projective space {weight (1),
multiplicity n} at tau > 0 sends x1^(n-1) to +1; crossings are always taken
in the e1 direction.
"""

import asyncio
import logging
import threading
from concurrent.futures import Executor, Future, ProcessPoolExecutor
from fractions import Fraction
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

from ..data_structures.multipoly import Exponent, MultiPoly, monomials_of_degree
from ..data_structures.zpoly import restrict_off_direction, substitute_line, total_residue
from ..interfaces.euler_interface import EulerEngineInterface
from ..models.error_codes import (
    EngineInvariantError,
    PreconditionError,
    ValidationError,
    WallcrossError,
)
from ..models.problems import CrossingTrace, ReducedProblem, ToricProblem
from ..models.walls import CrossingEvent, LevelKind, Wall
from ..models.weights import WeightEntry, WeightSystem
from ..monitoring import tracker
from ..monitoring.logger import MonitoringLogger
from ..monitoring.metrics import (
    CROSSINGS_EVALUATED,
    INVARIANCE_CHECKS,
    MEMO_HITS,
    MEMO_MISSES,
    metrics,
)
from ..utils.environment import get_default_seed, get_max_workers, get_memoize, get_path_retries
from ..utils.exact_linalg import hermite_extend, transpose_apply
from ..utils.rationals import format_rational, pairing
from .localization_service import weight_factors
from .weight_combinatorics import check_proper, classify_level, find_walls_containing, plan_path

logger = logging.getLogger(__name__)
events_log = MonitoringLogger(__name__)


class WallCrossingEngine(EulerEngineInterface):
    """Evaluates Euler classes with an optional shared memo table"""

    def __init__(
        self,
        seed: Optional[int] = None,
        retries: Optional[int] = None,
        memoize: Optional[bool] = None,
    ):
        """Initialize the engine

        Args:
            seed: Default path planning seed (configuration default if None)
            retries: Path planning retry budget (configuration default if None)
            memoize: Cache recursive evaluations (configuration default if None)
        """
        self.seed = seed
        self.retries = retries
        self.memoize = memoize
        self._memo: Dict[Hashable, Fraction] = {}
        # entries being computed; other callers wait on the owner's future
        self._pending: Dict[Hashable, "Future[Fraction]"] = {}
        self._memo_lock = threading.Lock()

    # -- Settings -------------------------------------------------------------

    def _seed(self, seed: Optional[int]) -> int:
        if seed is not None:
            return seed
        return self.seed if self.seed is not None else get_default_seed()

    def _retries(self) -> int:
        return self.retries if self.retries is not None else get_path_retries()

    def _memoizing(self) -> bool:
        return self.memoize if self.memoize is not None else get_memoize()

    def clear_cache(self) -> None:
        with self._memo_lock:
            self._memo.clear()

    @property
    def cache_size(self) -> int:
        return len(self._memo)

    # -- Reduction ------------------------------------------------------------

    def reduce_at_crossing(
        self, ws: WeightSystem, event: CrossingEvent, x: MultiPoly
    ) -> ReducedProblem:
        """Build the rank k - 1 problem and pushed class for one crossing.

        The class is pushed down by the total residue over the weights off the
        wall, then written in coordinates xi = U xi' with U = hermite_extend(e1)
        and freed of its last variable. Wall weights and the crossing point
        are expressed in the same coordinates.

        Raises:
            EngineInvariantError: If the pushed class is not e1-invariant
        """
        e1 = event.e1
        index_set = event.wall.index_set
        for i in index_set:
            if pairing(ws.entries[i].weight, e1) != 0:
                raise EngineInvariantError(f"wall weight {i + 1} does not annihilate e1", "e1")
        pushed = total_residue(substitute_line(x, e1), weight_factors(ws, e1, skip=index_set))
        restricted = restrict_off_direction(pushed, e1)
        metrics.increment(INVARIANCE_CHECKS)

        unimodular = hermite_extend(e1)
        entries = []
        for i in index_set:
            image = transpose_apply(unimodular, ws.entries[i].weight)
            entries.append(WeightEntry(tuple(int(v) for v in image[:-1]), ws.entries[i].multiplicity))
        point = transpose_apply(unimodular, event.point)
        if point[-1] != 0:
            raise EngineInvariantError("crossing point does not annihilate e1", "tau")
        child = ToricProblem(
            ws=WeightSystem(ws.k - 1, tuple(entries)),
            tau=tuple(Fraction(v) for v in point[:-1]),
        )
        return ReducedProblem(
            crossing=event, child=child, pushed_class=restricted, change_of_basis=unimodular
        )

    # -- Evaluation -----------------------------------------------------------

    def _memo_key(self, problem: ToricProblem, x: MultiPoly, seed: int) -> Hashable:
        return (problem.ws.canonical_key(), problem.tau, problem.orientation_sign, x, seed)

    def _evaluate(
        self,
        problem: ToricProblem,
        x: MultiPoly,
        seed: int,
        reduced: bool,
        trace: bool,
    ) -> Tuple[Fraction, Optional[CrossingTrace]]:
        if x.k != problem.k:
            raise ValidationError(f"class is in {x.k} variables, expected {problem.k}", "class")
        if self._memoizing() and not trace:
            return self._evaluate_memoized(problem, x, seed, reduced), None

        value, children, note = self._evaluate_uncached(problem, x, seed, reduced, trace)
        value *= problem.orientation_sign
        node = None
        if trace:
            node = CrossingTrace(
                k=problem.k,
                weights=tuple(problem.ws.weights),
                multiplicities=tuple(problem.ws.multiplicities),
                tau=problem.tau,
                pushed_class=x.render(),
                value=value,
                children=tuple(children),
                note=note,
            )
        return value, node

    def _evaluate_memoized(
        self, problem: ToricProblem, x: MultiPoly, seed: int, reduced: bool
    ) -> Fraction:
        """Look up or compute one memo entry; each key is computed by one caller only"""
        key = self._memo_key(problem, x, seed)
        with self._memo_lock:
            cached = self._memo.get(key)
            pending = self._pending.get(key) if cached is None else None
            owner = cached is None and pending is None
            if owner:
                pending = self._pending[key] = Future()
        if cached is not None:
            metrics.increment(MEMO_HITS)
            return cached
        if not owner:
            metrics.increment(MEMO_HITS)
            return pending.result()

        metrics.increment(MEMO_MISSES)
        try:
            value, _, _ = self._evaluate_uncached(problem, x, seed, reduced, False)
            value *= problem.orientation_sign
        except BaseException as e:
            with self._memo_lock:
                del self._pending[key]
            pending.set_exception(e)
            raise
        with self._memo_lock:
            self._memo[key] = value
            del self._pending[key]
        pending.set_result(value)
        return value

    def _evaluate_uncached(
        self,
        problem: ToricProblem,
        x: MultiPoly,
        seed: int,
        reduced: bool,
        trace: bool,
    ) -> Tuple[Fraction, List[CrossingTrace], str]:
        ws, tau, k = problem.ws, problem.tau, problem.k
        n = ws.total_multiplicity
        failure = EngineInvariantError if reduced else PreconditionError

        if k == 0:
            value = x.constant_term() if n == 0 else Fraction(0)
            return value, [], "point"
        if ws.is_empty():
            if all(t == 0 for t in tau):
                raise failure("non-regular tau (tau = 0 for an empty system)", "tau")
            return Fraction(0), [], "empty level set"
        if check_proper(ws) is None:
            raise failure("weight system is not proper", "weights")
        level = classify_level(ws, tau)
        if level.kind == LevelKind.OUTSIDE_CONE:
            return Fraction(0), [], "outside the moment cone"
        if not level.is_regular:
            raise failure(f"non-regular tau ({level.render()})", "tau")
        if n < k:
            return Fraction(0), [], "n < k"
        part = x.homogeneous_part(n - k)
        if part.is_zero():
            return Fraction(0), [], "no part in degree n - k"

        if k == 1:
            e1 = (1,) if tau[0] > 0 else (-1,)
            residue = total_residue(substitute_line(part, e1), weight_factors(ws, e1))
            if not residue.is_constant():
                raise EngineInvariantError("rank one residue is not a constant", "class")
            return residue.constant_term(), [], f"rank one residue, e1={list(e1)}"

        plan = plan_path(ws, tau, seed, self._retries())
        total = Fraction(0)
        children: List[CrossingTrace] = []
        for event in plan.events:
            reduction = self.reduce_at_crossing(ws, event, part)
            child_value, child_node = self._evaluate(
                reduction.child, reduction.pushed_class, seed, reduced=True, trace=trace
            )
            metrics.increment(CROSSINGS_EVALUATED)
            events_log.debug(
                "Crossed wall",
                k=k,
                wall=[i + 1 for i in event.wall.index_set],
                parameter=format_rational(event.parameter),
                e1=list(event.e1),
                subtotal=format_rational(child_value),
            )
            total += event.sign * child_value
            if child_node is not None:
                children.append(_attach_crossing(child_node, event))
        return total, children, f"{len(plan.events)} crossings"

    # -- Public operations ----------------------------------------------------

    def euler_class(self, problem: ToricProblem, x: MultiPoly, seed: Optional[int] = None) -> Fraction:
        """Value of the Euler class of the quotient on x.

        Args:
            problem: Weight system and regular level
            x: Class; only its homogeneous part of degree n - k contributes
            seed: Path planning seed

        Returns:
            Exact rational value

        Raises:
            PreconditionError: Non-regular tau, improper system, path planning failure
            EngineInvariantError: A reduced class or problem failed its checks
        """
        seed = self._seed(seed)
        with tracker.track("euler_class", k=problem.k):
            value, _ = self._evaluate(problem, x, seed, reduced=False, trace=False)
        events_log.info(
            "Evaluated Euler class", k=problem.k, n=problem.ws.total_multiplicity, value=format_rational(value)
        )
        return value

    def euler_trace(
        self, problem: ToricProblem, x: MultiPoly, seed: Optional[int] = None
    ) -> Tuple[Fraction, CrossingTrace]:
        seed = self._seed(seed)
        value, node = self._evaluate(problem, x, seed, reduced=False, trace=True)
        assert node is not None
        return value, node

    def euler_table(self, problem: ToricProblem, seed: Optional[int] = None) -> Dict[Exponent, Fraction]:
        """Values on all monomials of degree n - k, keyed by exponent"""
        degree = problem.selection_degree
        table: Dict[Exponent, Fraction] = {}
        for exponent in monomials_of_degree(problem.k, degree):
            table[exponent] = self.euler_class(problem, MultiPoly.monomial(exponent), seed)
        return table

    def crossing_event(
        self, ws: WeightSystem, wall: Wall, tau0: Sequence[Fraction], eta: Sequence[Fraction]
    ) -> CrossingEvent:
        """Validate crossing data and fix the sign of e1 by eta"""
        if len(tau0) != ws.k or len(eta) != ws.k:
            raise ValidationError(f"tau and eta must have dimension {ws.k}", "tau")
        tau0 = tuple(Fraction(v) for v in tau0)
        containing = find_walls_containing(ws, tau0)
        if wall not in containing:
            raise PreconditionError("tau0 is not in the cone of the wall", "tau")
        if len(containing) > 1:
            raise PreconditionError("tau0 lies on more than one wall", "tau")
        rate = pairing(eta, wall.normal)
        if rate == 0:
            raise PreconditionError("eta is tangent to the wall", "eta")
        e1 = wall.normal if rate > 0 else tuple(-v for v in wall.normal)
        return CrossingEvent(parameter=Fraction(0), wall=wall, point=tau0, e1=e1, sign=1)

    def wall_crossing_difference(
        self,
        ws: WeightSystem,
        wall: Wall,
        tau0: Sequence[Fraction],
        eta: Sequence[Fraction],
        x: MultiPoly,
        seed: Optional[int] = None,
    ) -> Fraction:
        if x.k != ws.k:
            raise ValidationError(f"class is in {x.k} variables, expected {ws.k}", "class")
        if check_proper(ws) is None:
            raise PreconditionError("weight system is not proper", "weights")
        event = self.crossing_event(ws, wall, tau0, eta)
        part = x.homogeneous_part(ws.total_multiplicity - ws.k)
        if part.is_zero():
            return Fraction(0)
        reduction = self.reduce_at_crossing(ws, event, part)
        value, _ = self._evaluate(
            reduction.child, reduction.pushed_class, self._seed(seed), reduced=True, trace=False
        )
        return value

    async def euler_class_parallel(
        self,
        problem: ToricProblem,
        x: MultiPoly,
        seed: Optional[int] = None,
        max_workers: Optional[int] = None,
        executor_factory: Optional[Callable[[Optional[int]], Executor]] = None,
    ) -> Fraction:
        """euler_class with the top-level crossings evaluated in a worker pool.

        Results are summed in path order, so they match euler_class exactly.
        """
        seed = self._seed(seed)
        workers = max_workers if max_workers is not None else get_max_workers()
        ws = problem.ws
        n = ws.total_multiplicity
        simple = (
            problem.k <= 1
            or ws.is_empty()
            or n < problem.k
            or classify_level(ws, problem.tau).kind == LevelKind.OUTSIDE_CONE
        )
        if simple:
            return self.euler_class(problem, x, seed)
        if check_proper(ws) is None:
            raise PreconditionError("weight system is not proper", "weights")
        part = x.homogeneous_part(n - problem.k)
        if part.is_zero():
            return Fraction(0)
        plan = plan_path(ws, problem.tau, seed, self._retries())
        reductions = [self.reduce_at_crossing(ws, event, part) for event in plan.events]
        factory = executor_factory or (lambda count: ProcessPoolExecutor(max_workers=count))
        loop = asyncio.get_running_loop()
        with factory(workers) as pool:
            futures = [
                loop.run_in_executor(
                    pool,
                    evaluate_reduced,
                    reduction.child,
                    reduction.pushed_class,
                    seed,
                    self._retries(),
                )
                for reduction in reductions
            ]
            values = await asyncio.gather(*futures)
        total = Fraction(0)
        for event, value in zip(plan.events, values):
            total += event.sign * value
        metrics.increment(CROSSINGS_EVALUATED, len(values))
        return total * problem.orientation_sign


def _attach_crossing(node: CrossingTrace, event: CrossingEvent) -> CrossingTrace:
    return CrossingTrace(
        k=node.k,
        weights=node.weights,
        multiplicities=node.multiplicities,
        tau=node.tau,
        pushed_class=node.pushed_class,
        value=node.value,
        crossing=event,
        children=node.children,
        note=node.note,
    )


def evaluate_reduced(child: ToricProblem, pushed: MultiPoly, seed: int, retries: int) -> Fraction:
    """Worker entry point: evaluate a reduced problem in a fresh engine"""
    worker = WallCrossingEngine(seed=seed, retries=retries)
    try:
        value, _ = worker._evaluate(child, pushed, seed, reduced=True, trace=False)
    except WallcrossError:
        logger.exception("Reduced problem failed in worker")
        raise
    return value


# Shared engine used by the module-level helpers and the command line driver
engine = WallCrossingEngine()


def euler_class(problem: ToricProblem, x: MultiPoly, seed: Optional[int] = None) -> Fraction:
    return engine.euler_class(problem, x, seed)


def euler_trace(
    problem: ToricProblem, x: MultiPoly, seed: Optional[int] = None
) -> Tuple[Fraction, CrossingTrace]:
    return engine.euler_trace(problem, x, seed)


def euler_table(problem: ToricProblem, seed: Optional[int] = None) -> Dict[Exponent, Fraction]:
    return engine.euler_table(problem, seed)


def wall_crossing_difference(
    ws: WeightSystem,
    wall: Wall,
    tau0: Sequence[Fraction],
    eta: Sequence[Fraction],
    x: MultiPoly,
    seed: Optional[int] = None,
) -> Fraction:
    return engine.wall_crossing_difference(ws, wall, tau0, eta, x, seed)


async def euler_class_parallel(
    problem: ToricProblem,
    x: MultiPoly,
    seed: Optional[int] = None,
    max_workers: Optional[int] = None,
) -> Fraction:
    return await engine.euler_class_parallel(problem, x, seed, max_workers)
