"""
Chamber structure of a weight system.

Properness certificates, wall enumeration, classification of levels and
generic straight paths from outside the moment cone to a regular level,
together with the walls those paths cross.
"""

import logging
import random
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

from sortedcontainers import SortedKeyList

from ..models.error_codes import PreconditionError, ValidationError
from ..models.walls import CrossingEvent, LevelClass, LevelKind, PathPlan, Wall
from ..models.weights import WeightSystem
from ..monitoring import tracker
from ..monitoring.metrics import PATH_RETRIES, PATHS_PLANNED, metrics
from ..monitoring.logger import MonitoringLogger
from ..utils.environment import get_path_retries
from ..utils.exact_linalg import (
    determinant,
    find_strictly_negative,
    primitive_normal,
    rank,
    solve_linear,
    solve_nonneg_combination,
)
from ..utils.rationals import IntegerVector, RationalVector, pairing

logger = logging.getLogger(__name__)
events_log = MonitoringLogger(__name__)

# Perturbation denominators start here and grow by PERTURBATION_STEP per retry
PERTURBATION_BASE = 7
PERTURBATION_STEP = 4


def _check_level(ws: WeightSystem, tau: Sequence[Fraction]) -> RationalVector:
    if len(tau) != ws.k:
        raise ValidationError(f"tau has dimension {len(tau)}, expected {ws.k}", "tau")
    return tuple(Fraction(x) for x in tau)


def check_proper(ws: WeightSystem, include_empty: bool = False) -> Optional[IntegerVector]:
    """Find xi with <w, xi> < 0 for every weight of positive multiplicity.

    Args:
        ws: Weight system
        include_empty: Also require it for entries of multiplicity zero

    Returns:
        An integer certificate, or None if the system is not proper
    """
    vectors = ws.weights if include_empty else ws.active_weights
    return find_strictly_negative(vectors, ws.k)


def moment_map(ws: WeightSystem, amplitudes: Sequence[Fraction]) -> RationalVector:
    """Moment map image sum(a_nu * w_nu) with a_nu = |v_nu|^2 in units of 1/pi.

    Raises:
        ValidationError: On a negative amplitude, or a nonzero one on an empty summand
    """
    if len(amplitudes) != len(ws.entries):
        raise ValidationError(
            f"{len(amplitudes)} amplitudes for {len(ws.entries)} entries", "amplitudes"
        )
    image = [Fraction(0)] * ws.k
    for i, (entry, a) in enumerate(zip(ws.entries, amplitudes)):
        a = Fraction(a)
        if a < 0:
            raise ValidationError("squared norms are nonnegative", f"amplitudes[{i}]")
        if a and entry.multiplicity == 0:
            raise ValidationError("entry has multiplicity zero", f"amplitudes[{i}]")
        for j in range(ws.k):
            image[j] += a * entry.weight[j]
    return tuple(image)


def quotient_dimension(ws: WeightSystem) -> int:
    """Real dimension 2n - 2k of a regular quotient"""
    return 2 * ws.total_multiplicity - 2 * ws.k


@lru_cache(maxsize=512)
def _walls_for(ws: WeightSystem) -> Tuple[Wall, ...]:
    k = ws.k
    if k == 0:
        return ()
    if k == 1:
        return (Wall(index_set=(), normal=(1,), span_rank=0),)
    active = ws.active_indices
    seen = set()
    walls = []
    for subset in combinations(active, k - 1):
        vectors = [ws.entries[i].weight for i in subset]
        if rank(vectors) != k - 1:
            continue
        normal = primitive_normal(vectors, k)
        if normal in seen:
            continue
        seen.add(normal)
        index_set = tuple(
            i for i, entry in enumerate(ws.entries) if pairing(entry.weight, normal) == 0
        )
        walls.append(Wall(index_set=index_set, normal=normal, span_rank=k - 1))
    walls.sort(key=lambda wall: wall.index_set)
    logger.debug(f"Enumerated {len(walls)} walls for rank {k} system")
    return tuple(walls)


def enumerate_walls(ws: WeightSystem) -> List[Wall]:
    """All distinct walls of the system.

    Hyperplanes are spanned by (k-1)-subsets of weights with positive
    multiplicity; each index set is completed with every entry on the
    hyperplane. For k = 1 the only wall is the origin with empty index set.
    """
    return list(_walls_for(ws))


def wall_contains(ws: WeightSystem, wall: Wall, point: Sequence[Fraction]) -> bool:
    """True iff point lies in the cone of the wall's weights"""
    if pairing(point, wall.normal) != 0:
        return False
    generators = [
        ws.entries[i].weight for i in wall.index_set if ws.entries[i].multiplicity > 0
    ]
    return solve_nonneg_combination(generators, point) is not None


def find_walls_containing(ws: WeightSystem, point: Sequence[Fraction]) -> List[Wall]:
    return [wall for wall in _walls_for(ws) if wall_contains(ws, wall, point)]


def _is_super_regular(ws: WeightSystem, tau: RationalVector) -> bool:
    distinct = sorted(set(ws.active_weights))
    for basis in combinations(distinct, ws.k):
        det = determinant([list(w) for w in basis])
        if det == 0:
            continue
        columns = [[basis[j][i] for j in range(ws.k)] for i in range(ws.k)]
        coefficients = solve_linear(columns, tau)
        if coefficients is None or any(c < 0 for c in coefficients):
            continue
        if abs(det) != 1:
            return False
    return True


def classify_level(ws: WeightSystem, tau: Sequence[Fraction]) -> LevelClass:
    """Classify tau against the chamber structure.

    Returns:
        outside_cone when tau is not a nonnegative combination of the weights;
        on_wall (with the wall) when tau lies in a wall's cone; singular when
        it is in the cone but the weights do not span; otherwise regular,
        upgraded to super_regular when every basis of weights whose cone
        contains tau generates the lattice
    """
    tau = _check_level(ws, tau)
    if solve_nonneg_combination(ws.active_weights, tau) is None:
        return LevelClass(LevelKind.OUTSIDE_CONE)
    walls = find_walls_containing(ws, tau)
    if walls:
        return LevelClass(LevelKind.ON_WALL, walls[0])
    if rank(ws.active_weights) < ws.k:
        return LevelClass(LevelKind.SINGULAR)
    if _is_super_regular(ws, tau):
        return LevelClass(LevelKind.SUPER_REGULAR)
    return LevelClass(LevelKind.REGULAR)


def _perturbation(rng: random.Random, k: int, attempt: int) -> List[Fraction]:
    bound = PERTURBATION_BASE + PERTURBATION_STEP * attempt
    vector = []
    for _ in range(k):
        q = rng.randint(1, bound)
        vector.append(Fraction(rng.randint(-q, q), q * bound))
    return vector


def _crossings_along(
    ws: WeightSystem, start: RationalVector, tau: RationalVector
) -> Optional[List[CrossingEvent]]:
    """Crossing events on the segment start -> tau, or None if it is not generic"""
    direction = tuple(b - a for a, b in zip(start, tau))
    walls = _walls_for(ws)
    events = SortedKeyList(key=lambda event: event.parameter)
    for wall in walls:
        rate = pairing(direction, wall.normal)
        offset = pairing(start, wall.normal)
        if rate == 0:
            if offset == 0:
                logger.debug(f"Segment lies in the hyperplane of wall {wall.render()}")
                return None
            continue
        t = -offset / rate
        if t < 0 or t > 1:
            continue
        point = tuple(a + t * d for a, d in zip(start, direction))
        if not wall_contains(ws, wall, point):
            continue
        if t == 0 or t == 1:
            logger.debug(f"Segment endpoint lies on wall {wall.render()}")
            return None
        e1 = wall.normal if rate > 0 else tuple(-x for x in wall.normal)
        events.add(CrossingEvent(parameter=t, wall=wall, point=point, e1=e1, sign=1))

    parameters = [event.parameter for event in events]
    if len(set(parameters)) != len(parameters):
        logger.debug("Two crossings share a parameter")
        return None
    for event in events:
        if len(find_walls_containing(ws, event.point)) != 1:
            logger.debug(f"Crossing point {event.point} lies on several walls")
            return None
    return list(events)


def plan_path(
    ws: WeightSystem,
    tau: Sequence[Fraction],
    seed: int = 0,
    retries: Optional[int] = None,
) -> PathPlan:
    """Plan a generic straight path from outside the moment cone to tau.

    The outside endpoint is -sum(n_nu * w_nu) plus a seeded rational
    perturbation; perturbations are redrawn until the segment crosses every
    wall transversally at distinct parameters and through single walls.

    Args:
        ws: Weight system
        tau: Regular level
        seed: Seed of the perturbation generator
        retries: Attempt budget; defaults to the configured WALLCROSS_RETRIES

    Returns:
        The endpoint and the crossings ordered by parameter

    Raises:
        PreconditionError: If tau is not regular, the system is not proper,
            or no generic path was found within the budget
    """
    tau = _check_level(ws, tau)
    level = classify_level(ws, tau)
    if not level.is_regular:
        raise PreconditionError(f"non-regular tau ({level.render()})", "tau")
    certificate = check_proper(ws)
    if certificate is None:
        raise PreconditionError("weight system is not proper", "weights")
    budget = retries if retries is not None else get_path_retries()

    base = [Fraction(0)] * ws.k
    for entry in ws.entries:
        for j in range(ws.k):
            base[j] -= entry.multiplicity * entry.weight[j]

    rng = random.Random(seed)
    with tracker.track("plan_path", k=ws.k):
        for attempt in range(budget):
            shift = _perturbation(rng, ws.k, attempt)
            start = tuple(b + s for b, s in zip(base, shift))
            if pairing(start, certificate) <= 0:
                metrics.increment(PATH_RETRIES)
                continue
            events = _crossings_along(ws, start, tau)
            if events is None:
                metrics.increment(PATH_RETRIES)
                continue
            metrics.increment(PATHS_PLANNED)
            events_log.debug(
                "Planned path", k=ws.k, crossings=len(events), attempts=attempt + 1
            )
            return PathPlan(endpoint=start, tau=tau, events=tuple(events), attempts=attempt + 1)
    raise PreconditionError(f"path planning failed after {budget} retries", "seed")
