"""
Pytest configuration and fixtures.
"""

import logging
import os
from pathlib import Path
from typing import Any, Callable, Dict, Generator

import pytest

# Keep a developer's .env settings out of the test run
os.environ["WALLCROSS_SEED"] = "0"
os.environ["WALLCROSS_RETRIES"] = "25"
os.environ["WALLCROSS_MEMOIZE"] = "true"
os.environ["WALLCROSS_FORMAT"] = "text"

from wallcross.models.weights import WeightSystem  # noqa: E402
from wallcross.monitoring.metrics import metrics  # noqa: E402
from wallcross.services.euler_service import WallCrossingEngine  # noqa: E402
from wallcross.services.vortex_service import VortexService  # noqa: E402

from .utils import write_problem  # noqa: E402


@pytest.fixture(autouse=True)
def reset_logging() -> Generator[None, None, None]:
    """Drop handlers the CLI attaches so they do not outlive captured streams."""
    yield
    root = logging.getLogger("wallcross")
    for handler in list(root.handlers):
        if getattr(handler, "_wallcross", False):
            root.removeHandler(handler)
    root.setLevel(logging.NOTSET)


@pytest.fixture
def engine() -> WallCrossingEngine:
    """A fresh engine with its own memo table."""
    return WallCrossingEngine(seed=0, retries=25, memoize=True)


@pytest.fixture
def vortex_service(engine: WallCrossingEngine) -> VortexService:
    return VortexService(engine)


@pytest.fixture
def fresh_metrics() -> Generator[Any, None, None]:
    metrics.reset()
    yield metrics
    metrics.reset()


@pytest.fixture
def three_weights() -> WeightSystem:
    """Weights (1,0), (0,1), (1,1) with multiplicity 1 each."""
    return WeightSystem.from_lists([(1, 0), (0, 1), (1, 1)])


@pytest.fixture
def cp2() -> WeightSystem:
    """Rank one, weight (1) with multiplicity 3."""
    return WeightSystem.from_lists([(1,)], [3])


@pytest.fixture
def cp1_target() -> WeightSystem:
    """The action of the circle on C^2 with weights (1), (1)."""
    return WeightSystem.from_lists([(1,), (1,)])


@pytest.fixture
def product_system() -> Callable[[int, int], WeightSystem]:
    """Factory for CP^a x CP^b."""
    def build(a: int, b: int) -> WeightSystem:
        return WeightSystem.from_lists([(1, 0), (0, 1)], [a + 1, b + 1])
    return build


@pytest.fixture
def problem_writer(tmp_path: Path) -> Callable[..., str]:
    """Writes a JSON problem file under tmp_path and returns its path."""
    def write(name: str = "problem.json", **document: Any) -> str:
        return write_problem(tmp_path, name, **document)
    return write


@pytest.fixture
def test_data() -> Dict[str, Any]:
    """Problem documents shared by the CLI and loader tests."""
    return {
        "cp2": {
            "k": 1,
            "weights": [{"w": [1], "mult": 3}],
            "tau": ["1"],
            "class": "x1^2",
        },
        "three_weights": {
            "k": 2,
            "weights": [{"w": [1, 0], "mult": 1}, {"w": [0, 1], "mult": 1}, {"w": [1, 1], "mult": 1}],
            "tau": ["2", "1"],
            "class": "x2",
        },
        "cp1_vortex": {
            "k": 1,
            "weights": [{"w": [1]}, {"w": [1]}],
            "tau": ["1"],
            "class": "x1^3",
            "kappa": [1],
        },
    }
