"""
Test utilities and helper functions.
"""

import asyncio
import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Coroutine, Sequence, TypeVar

from wallcross.data_structures.multipoly import MultiPoly
from wallcross.models.problems import ToricProblem
from wallcross.models.weights import WeightSystem

T = TypeVar('T')


async def async_test_with_timeout(
    coro: Coroutine[Any, Any, T],
    timeout: float = 30.0
) -> T:
    """Run an async test with a timeout."""
    try:
        return await asyncio.wait_for(coro, timeout=timeout)
    except asyncio.TimeoutError:
        raise TimeoutError(f"Test timed out after {timeout} seconds")


def write_problem(directory: Path, name: str = "problem.json", **document: Any) -> str:
    """Write a problem document as JSON and return its path."""
    path = directory / name
    path.write_text(json.dumps(document))
    return str(path)


def toric(weights: Sequence[Sequence[int]], mults: Sequence[int], tau: Sequence[Any]) -> ToricProblem:
    """ToricProblem from plain lists; tau entries may be ints or Fractions."""
    ws = WeightSystem.from_lists(weights, mults)
    return ToricProblem(ws=ws, tau=tuple(Fraction(t) for t in tau))


def monomial(*exponent: int) -> MultiPoly:
    """Monomial with coefficient 1"""
    return MultiPoly.monomial(exponent)
