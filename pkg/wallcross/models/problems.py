"""
Problem and report models for the Euler class and vortex engines.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from ..data_structures.multipoly import MultiPoly
from ..utils.rationals import IntegerMatrix, IntegerVector, RationalVector
from .base import BaseModel, to_jsonable
from .error_codes import ValidationError
from .walls import CrossingEvent
from .weights import WeightSystem


@dataclass(frozen=True)
class ToricProblem(BaseModel):
    """A toric quotient mu^-1(tau)/T described by its weight system and level

    Attributes:
        ws: Weight system
        tau: Level in t*
        orientation_sign: Global orientation bookkeeping, +1 or -1
    """
    ws: WeightSystem
    tau: RationalVector
    orientation_sign: int = 1

    def __post_init__(self) -> None:
        if len(self.tau) != self.ws.k:
            raise ValidationError(
                f"tau has dimension {len(self.tau)}, expected {self.ws.k}", "tau"
            )
        if self.orientation_sign not in (1, -1):
            raise ValidationError("orientation sign must be +1 or -1", "orientation_sign")

    @property
    def k(self) -> int:
        return self.ws.k

    @property
    def selection_degree(self) -> int:
        """Degree n - k of the classes that integrate nontrivially"""
        return self.ws.total_multiplicity - self.ws.k

    def to_dict(self) -> Dict[str, Any]:
        return {
            **self.ws.to_dict(),
            "tau": to_jsonable(self.tau),
            "orientation_sign": self.orientation_sign,
        }


@dataclass(frozen=True)
class ReducedProblem(BaseModel):
    """The rank k - 1 problem attached to a wall crossing

    Attributes:
        crossing: The crossing that produced it
        child: Wall weights and crossing point in the coordinates of t_0*
        pushed_class: Residue pushdown of the parent class, in k - 1 variables
        change_of_basis: Unimodular U with xi = U xi'; its last column is e1
    """
    crossing: CrossingEvent
    child: ToricProblem
    pushed_class: MultiPoly
    change_of_basis: IntegerMatrix

    def to_dict(self) -> Dict[str, Any]:
        return {
            "crossing": self.crossing.to_dict(),
            "child": self.child.to_dict(),
            "pushed_class": self.pushed_class.render(),
        }


@dataclass(frozen=True)
class VortexProblem(BaseModel):
    """Vortex data: the action on C^N, level, degree and class

    Attributes:
        target: Weights of the action, every multiplicity 1
        tau: Level
        kappa: Degree, an element of the lattice
        alpha: Class in S(t*)
        genus: Genus of the source surface
    """
    target: WeightSystem
    tau: RationalVector
    kappa: IntegerVector
    alpha: MultiPoly
    genus: int = 0

    def __post_init__(self) -> None:
        k = self.target.k
        for i, m in enumerate(self.target.multiplicities):
            if m != 1:
                raise ValidationError(
                    "vortex targets need multiplicity 1 per entry", f"weights[{i}].mult"
                )
        if len(self.tau) != k:
            raise ValidationError(f"tau has dimension {len(self.tau)}, expected {k}", "tau")
        if len(self.kappa) != k:
            raise ValidationError(
                f"kappa has dimension {len(self.kappa)}, expected {k}", "kappa"
            )
        if self.alpha.k != k:
            raise ValidationError(f"class is in {self.alpha.k} variables, expected {k}", "class")
        if self.genus < 0:
            raise ValidationError("genus must be nonnegative", "genus")

    def to_dict(self) -> Dict[str, Any]:
        return {
            **self.target.to_dict(),
            "tau": to_jsonable(self.tau),
            "kappa": list(self.kappa),
            "class": self.alpha.render(),
            "genus": self.genus,
        }


@dataclass(frozen=True)
class ModuliReport(BaseModel):
    """Dimension and index bookkeeping for a vortex moduli space"""
    genus: int
    degrees: Tuple[int, ...]
    n: Tuple[int, ...]
    m: Tuple[int, ...]
    real_dimension: int
    index: int
    level: str
    orbifold: bool
    empty: bool
    jacobian_dimension: int = 0
    window_ok: bool = True
    fiber: Optional[ToricProblem] = None

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "genus": self.genus,
            "degrees": list(self.degrees),
            "n": list(self.n),
            "m": list(self.m),
            "real_dimension": self.real_dimension,
            "index": self.index,
            "level": self.level,
            "orbifold": self.orbifold,
            "empty": self.empty,
        }
        if self.genus > 0:
            data["jacobian_dimension"] = self.jacobian_dimension
            data["window_ok"] = self.window_ok
        if self.fiber is not None:
            data["fiber"] = self.fiber.to_dict()
        return data


@dataclass(frozen=True)
class CrossingTrace(BaseModel):
    """One node of the crossing tree emitted by the trace command"""
    k: int
    weights: Tuple[IntegerVector, ...]
    multiplicities: Tuple[int, ...]
    tau: RationalVector
    pushed_class: str
    value: Fraction
    crossing: Optional[CrossingEvent] = None
    children: Tuple["CrossingTrace", ...] = field(default_factory=tuple)
    note: str = ""

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "k": self.k,
            "weights": [list(w) for w in self.weights],
            "multiplicities": list(self.multiplicities),
            "tau": to_jsonable(self.tau),
            "class": self.pushed_class,
            "value": to_jsonable(self.value),
        }
        if self.crossing is not None:
            data["wall"] = [i + 1 for i in self.crossing.wall.index_set]
            data["tau0"] = to_jsonable(self.crossing.point)
            data["e1"] = list(self.crossing.e1)
        if self.note:
            data["note"] = self.note
        if self.children:
            data["crossings"] = [child.to_dict() for child in self.children]
        return data

    def count_nodes(self) -> int:
        return 1 + sum(child.count_nodes() for child in self.children)

    def flatten(self) -> List["CrossingTrace"]:
        nodes = [self]
        for child in self.children:
            nodes.extend(child.flatten())
        return nodes
