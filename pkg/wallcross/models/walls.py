"""
Walls of the chamber structure, crossings of them and level classification.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Optional, Tuple

from ..utils.rationals import IntegerVector, RationalVector
from .base import BaseModel, to_jsonable


def render_index_set(indices: Tuple[int, ...]) -> str:
    """Render 0-based indices as the 1-based set notation "{1,3}" """
    return "{" + ",".join(str(i + 1) for i in indices) + "}"


@dataclass(frozen=True)
class Wall(BaseModel):
    """Cone of a complete index set of weights spanning a hyperplane

    Attributes:
        index_set: Sorted 0-based entry indices of every weight on the hyperplane
        normal: Primitive normal, first nonzero entry positive
        span_rank: Always k - 1
    """
    index_set: Tuple[int, ...]
    normal: IntegerVector
    span_rank: int

    def render(self) -> str:
        return f"I={render_index_set(self.index_set)} e={list(self.normal)}"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "index_set": [i + 1 for i in self.index_set],
            "normal": list(self.normal),
            "span_rank": self.span_rank,
        }


@dataclass(frozen=True)
class CrossingEvent(BaseModel):
    """A transverse crossing of one wall by a path

    Attributes:
        parameter: Path parameter in (0, 1)
        wall: The wall crossed
        point: Crossing point tau_0, in the wall's cone and no other
        e1: Wall normal, sign fixed so that <direction, e1> > 0
        sign: +1 when crossed in the e1 direction
    """
    parameter: Fraction
    wall: Wall
    point: RationalVector
    e1: IntegerVector
    sign: int = 1

    def to_dict(self) -> Dict[str, Any]:
        return {
            "parameter": to_jsonable(self.parameter),
            "wall": self.wall.to_dict(),
            "point": to_jsonable(self.point),
            "e1": list(self.e1),
            "sign": self.sign,
        }


class LevelKind(str, Enum):
    """Position of a level tau relative to the chamber structure"""
    REGULAR = "regular"
    SUPER_REGULAR = "super_regular"
    ON_WALL = "on_wall"
    OUTSIDE_CONE = "outside_cone"
    SINGULAR = "singular"


@dataclass(frozen=True)
class LevelClass(BaseModel):
    """Result of classifying a level; wall is set only for ON_WALL"""
    kind: LevelKind
    wall: Optional[Wall] = None

    @property
    def is_regular(self) -> bool:
        return self.kind in (LevelKind.REGULAR, LevelKind.SUPER_REGULAR)

    @property
    def is_orbifold(self) -> bool:
        return self.kind == LevelKind.REGULAR

    def render(self) -> str:
        if self.kind == LevelKind.ON_WALL and self.wall is not None:
            return f"on_wall I={render_index_set(self.wall.index_set)}"
        return self.kind.value

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"kind": self.kind.value}
        if self.wall is not None:
            data["wall"] = self.wall.to_dict()
        return data


@dataclass(frozen=True)
class PathPlan(BaseModel):
    """Straight segment from an outside endpoint to tau and the walls it crosses"""
    endpoint: RationalVector
    tau: RationalVector
    events: Tuple[CrossingEvent, ...]
    attempts: int = 1

    def to_dict(self) -> Dict[str, Any]:
        return {
            "endpoint": to_jsonable(self.endpoint),
            "tau": to_jsonable(self.tau),
            "events": [event.to_dict() for event in self.events],
            "attempts": self.attempts,
        }
