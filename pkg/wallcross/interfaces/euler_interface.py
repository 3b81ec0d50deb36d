"""
Euler class engine interface.

This module defines the contract for computing integrals of classes over
toric quotients, including the wall-crossing difference and the traced and
tabulated variants used by the command line driver.
"""

from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

from ..data_structures.multipoly import Exponent, MultiPoly
from ..models.problems import CrossingTrace, ToricProblem
from ..models.walls import Wall
from ..models.weights import WeightSystem


class EulerEngineInterface(ABC):
    """Interface for Euler class computations."""

    @abstractmethod
    def euler_class(self, problem: ToricProblem, x: MultiPoly, seed: Optional[int] = None) -> Fraction:
        """Integrate a class over the quotient.

        Args:
            problem: Weight system and regular level
            x: Class in S(t*)
            seed: Path planning seed

        Returns:
            The exact value of the Euler class on x
        """
        pass

    @abstractmethod
    def wall_crossing_difference(
        self,
        ws: WeightSystem,
        wall: Wall,
        tau0: Sequence[Fraction],
        eta: Sequence[Fraction],
        x: MultiPoly,
        seed: Optional[int] = None,
    ) -> Fraction:
        """Jump of the Euler class across a wall.

        Args:
            ws: Weight system
            wall: Wall crossed
            tau0: Point of the wall's cone on no other wall
            eta: Crossing direction, transverse to the wall
            x: Class in S(t*)
            seed: Seed for the reduced problem

        Returns:
            Value on the side eta points to minus value on the other side
        """
        pass

    @abstractmethod
    def euler_trace(
        self, problem: ToricProblem, x: MultiPoly, seed: Optional[int] = None
    ) -> Tuple[Fraction, CrossingTrace]:
        """Evaluate and return the tree of crossings that produced the value."""
        pass

    @abstractmethod
    def euler_table(self, problem: ToricProblem, seed: Optional[int] = None) -> Dict[Exponent, Fraction]:
        """Values on every monomial of the selection degree."""
        pass
