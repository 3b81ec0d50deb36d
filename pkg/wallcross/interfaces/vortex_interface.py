"""
Vortex invariant interface.
"""

from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Optional, Tuple

from ..models.problems import ModuliReport, ToricProblem, VortexProblem


class VortexEngineInterface(ABC):
    """Interface for vortex moduli data and invariants."""

    @abstractmethod
    def moduli_data(self, vp: VortexProblem) -> Tuple[ModuliReport, Optional[ToricProblem]]:
        """Describe the moduli space of vortices of degree kappa.

        Args:
            vp: Vortex problem

        Returns:
            The report and, in genus zero, the toric problem of the moduli space
        """
        pass

    @abstractmethod
    def vortex_invariant(self, vp: VortexProblem, seed: Optional[int] = None) -> Fraction:
        """Genus-zero vortex invariant of the class vp.alpha."""
        pass
