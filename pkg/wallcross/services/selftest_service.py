"""
Built-in invariant suites for the selftest command.

Each suite checks an exact identity on a handful of small systems and
reports how many checks ran and which failed.
"""

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import comb, prod
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from ..data_structures.multipoly import MultiPoly, monomials_of_degree
from ..data_structures.zpoly import ZPoly, total_residue
from ..models.error_codes import WallcrossError
from ..models.problems import ToricProblem, VortexProblem
from ..models.walls import LevelKind
from ..models.weights import WeightSystem
from .euler_service import WallCrossingEngine
from .vortex_service import VortexService
from .weight_combinatorics import classify_level, enumerate_walls, wall_contains

logger = logging.getLogger(__name__)

# (weights, multiplicities, regular level) triples swept over PATH_SEEDS
PATH_SYSTEMS: List[Tuple[List[Tuple[int, ...]], List[int], Tuple[int, ...]]] = [
    ([(1, 0), (0, 1), (1, 1)], [1, 2, 1], (3, 2)),
    ([(1, 0), (1, 2), (0, 1)], [2, 1, 1], (2, 3)),
    ([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)], [1, 1, 1, 1], (3, 2, 1)),
    ([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0)], [2, 1, 1, 1], (3, 2, 1)),
    ([(1, 0), (0, 1), (1, 1), (1, 2)], [1, 1, 2, 1], (3, 4)),
]
PATH_SEEDS = range(20)


@dataclass
class SuiteResult:
    """Outcome of one suite"""
    name: str
    checks: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def expect(self, condition: bool, description: str) -> None:
        self.checks += 1
        if not condition:
            self.failures.append(description)

    def render(self) -> str:
        status = "ok" if self.passed else f"FAILED ({len(self.failures)})"
        return f"{self.name}: {status} [{self.checks} checks]"


def per_pole_residue_sum(numerator: Sequence[Fraction], poles: Dict[Fraction, int]) -> Fraction:
    """Sum of residues of N(z) / prod (z - p)^m, pole by pole.

    Around each pole p the other factors are expanded in u = z - p and the
    u^(m-1) coefficient of their product with N(p + u) is read off.
    """
    total = Fraction(0)
    for p, m in poles.items():
        order = m - 1
        shifted = [
            sum(
                Fraction(c) * comb(j, i) * p ** (j - i)
                for j, c in enumerate(numerator)
                if j >= i
            )
            for i in range(order + 1)
        ]
        series = shifted
        for q, mq in poles.items():
            if q == p:
                continue
            gap = p - q
            factor = [
                (-1) ** r * comb(mq + r - 1, r) / gap ** (mq + r) for r in range(order + 1)
            ]
            series = [
                sum(series[i] * factor[r - i] for i in range(r + 1)) for r in range(order + 1)
            ]
        total += series[order]
    return total


class SelfTestService:
    """Runs the invariant suites against fresh engines"""

    def __init__(self, seed: int = 0):
        self.seed = seed
        self.euler = WallCrossingEngine(seed=seed)
        self.vortex = VortexService(self.euler)

    def _chi(self, ws: WeightSystem, tau: Sequence[Fraction], x: MultiPoly, seed: Optional[int] = None) -> Fraction:
        return self.euler.euler_class(ToricProblem(ws=ws, tau=tuple(Fraction(t) for t in tau)), x, seed)

    def projective_spaces(self) -> SuiteResult:
        result = SuiteResult("projective_spaces")
        for n in range(2, 9):
            ws = WeightSystem.from_lists([(1,)], [n])
            value = self._chi(ws, (1,), MultiPoly.monomial((n - 1,)))
            result.expect(value == 1, f"CP^{n - 1}: got {value}")
        return result

    def weighted_projective_spaces(self) -> SuiteResult:
        result = SuiteResult("weighted_projective_spaces")
        for n in range(1, 4):
            for weights in product(range(1, 4), repeat=n):
                ws = WeightSystem.from_lists([(w,) for w in weights])
                value = self._chi(ws, (1,), MultiPoly.monomial((n - 1,)))
                expected = Fraction(1, prod(weights))
                result.expect(value == expected, f"weights {weights}: got {value}")
        return result

    def products(self) -> SuiteResult:
        result = SuiteResult("products")
        for a, b in product(range(1, 3), repeat=2):
            ws = WeightSystem.from_lists([(1, 0), (0, 1)], [a + 1, b + 1])
            for exponent in monomials_of_degree(2, a + b):
                value = self._chi(ws, (1, 1), MultiPoly.monomial(exponent))
                expected = 1 if exponent == (a, b) else 0
                result.expect(value == expected, f"CP^{a} x CP^{b} {exponent}: got {value}")
        return result

    def crossing_identity(self) -> SuiteResult:
        result = SuiteResult("crossing_identity")
        ws = WeightSystem.from_lists([(1, 0), (0, 1), (1, 1)])
        half = Fraction(1, 2)
        for wall in enumerate_walls(ws):
            generator = ws.entries[wall.index_set[0]].weight
            tau0 = tuple(Fraction(v) for v in generator)
            eta = (Fraction(wall.normal[0]), Fraction(wall.normal[1]))
            plus = tuple(t + half * e for t, e in zip(tau0, eta))
            minus = tuple(t - half * e for t, e in zip(tau0, eta))
            for exponent in monomials_of_degree(2, 1):
                x = MultiPoly.monomial(exponent)
                jump = self._value_or_zero(ws, plus, x) - self._value_or_zero(ws, minus, x)
                difference = self.euler.wall_crossing_difference(ws, wall, tau0, eta, x)
                result.expect(jump == difference, f"wall {wall.render()} {exponent}")
        return result

    def _value_or_zero(self, ws: WeightSystem, tau: Sequence[Fraction], x: MultiPoly) -> Fraction:
        if classify_level(ws, tau).kind == LevelKind.OUTSIDE_CONE:
            return Fraction(0)
        return self._chi(ws, tau, x)

    def path_independence(self) -> SuiteResult:
        result = SuiteResult("path_independence")
        for weights, mults, tau in PATH_SYSTEMS:
            problem = ToricProblem(
                ws=WeightSystem.from_lists(weights, mults),
                tau=tuple(Fraction(t) for t in tau),
            )
            reference = self.euler.euler_table(problem, PATH_SEEDS[0])
            for seed in PATH_SEEDS[1:]:
                table = self.euler.euler_table(problem, seed)
                differing = [e for e in reference if table[e] != reference[e]]
                result.expect(not differing, f"{weights} seed {seed}: differs on {differing}")
        return result

    def residue_oracle(self) -> SuiteResult:
        result = SuiteResult("residue_oracle")
        rng = random.Random(self.seed)
        for _ in range(25):
            count = rng.randint(1, 4)
            poles: Dict[Fraction, int] = {}
            while len(poles) < count:
                poles[Fraction(rng.randint(-6, 6), rng.randint(1, 3))] = rng.randint(1, 3)
            total = sum(poles.values())
            numerator = [Fraction(rng.randint(-4, 4)) for _ in range(rng.randint(1, total + 2))]
            z_numerator = ZPoly(0, [MultiPoly.constant(0, c) for c in numerator])
            factors = [
                (ZPoly(0, [MultiPoly.constant(0, -p), MultiPoly.constant(0, 1)]), m)
                for p, m in poles.items()
            ]
            engine_value = total_residue(z_numerator, factors).constant_term()
            oracle_value = per_pole_residue_sum(numerator, poles)
            result.expect(engine_value == oracle_value, f"poles {poles}: {engine_value} != {oracle_value}")
        return result

    def vortex_cp1(self) -> SuiteResult:
        result = SuiteResult("vortex_cp1")
        target = WeightSystem.from_lists([(1,), (1,)])
        for d in range(0, 4):
            vp = VortexProblem(target, (Fraction(1),), (d,), MultiPoly.monomial((2 * d + 1,)))
            value = self.vortex.vortex_invariant(vp, self.seed)
            result.expect(value == 1, f"kappa={d}: got {value}")
        vp = VortexProblem(target, (Fraction(1),), (-1,), MultiPoly.monomial((0,)))
        result.expect(self.vortex.vortex_invariant(vp, self.seed) == 0, "kappa=-1 not zero")
        return result

    def classification(self) -> SuiteResult:
        result = SuiteResult("classification")
        ws = WeightSystem.from_lists([(1, 0), (0, 1), (1, 1)])
        walls = enumerate_walls(ws)
        for a, b in product(range(-2, 3), repeat=2):
            for scale in (1, 2):
                tau = (Fraction(a, scale), Fraction(b, scale))
                on_wall = classify_level(ws, tau).kind == LevelKind.ON_WALL
                in_union = any(wall_contains(ws, wall, tau) for wall in walls)
                result.expect(on_wall == in_union, f"tau={tau}")
        return result

    def suites(self) -> Dict[str, Callable[[], SuiteResult]]:
        return {
            "projective_spaces": self.projective_spaces,
            "weighted_projective_spaces": self.weighted_projective_spaces,
            "products": self.products,
            "crossing_identity": self.crossing_identity,
            "path_independence": self.path_independence,
            "residue_oracle": self.residue_oracle,
            "vortex_cp1": self.vortex_cp1,
            "classification": self.classification,
        }

    def run(self, names: Sequence[str] = ()) -> List[SuiteResult]:
        """Run the named suites (all by default); engine errors count as failures"""
        available = self.suites()
        selected = list(names) or list(available)
        results = []
        for name in selected:
            if name not in available:
                results.append(SuiteResult(name, failures=["unknown suite"]))
                continue
            try:
                outcome = available[name]()
            except WallcrossError as e:
                logger.error(f"Suite {name} raised {e}")
                outcome = SuiteResult(name, checks=1, failures=[str(e)])
            results.append(outcome)
        return results


def run_selftest(seed: int = 0, names: Sequence[str] = ()) -> Tuple[bool, List[SuiteResult]]:
    results = SelfTestService(seed).run(names)
    return all(r.passed for r in results), results
