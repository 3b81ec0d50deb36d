"""
Weight systems: a linear torus action on a sum of complex vector spaces.
"""

from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Sequence, Tuple

from ..utils.rationals import IntegerVector, integer_vector
from .base import BaseModel
from .error_codes import ValidationError


@dataclass(frozen=True)
class WeightEntry(BaseModel):
    """One summand V_nu: a weight and its multiplicity n_nu = dim V_nu"""
    weight: IntegerVector
    multiplicity: int

    def to_dict(self) -> Dict[str, Any]:
        return {"w": list(self.weight), "mult": self.multiplicity}


@dataclass(frozen=True)
class WeightSystem(BaseModel):
    """Weights of a torus of rank k with multiplicities

    Entries keep their input order; indices are 0-based internally and
    rendered 1-based.
    """
    k: int
    entries: Tuple[WeightEntry, ...]

    def __post_init__(self) -> None:
        if self.k < 0:
            raise ValidationError(f"torus rank must be nonnegative, got {self.k}", "k")
        for i, entry in enumerate(self.entries):
            field = f"weights[{i}]"
            if len(entry.weight) != self.k:
                raise ValidationError(
                    f"weight has dimension {len(entry.weight)}, expected {self.k}", f"{field}.w"
                )
            if all(x == 0 for x in entry.weight):
                raise ValidationError("weights must be nonzero", f"{field}.w")
            if isinstance(entry.multiplicity, bool) or not isinstance(entry.multiplicity, int):
                raise ValidationError("multiplicity must be an integer", f"{field}.mult")
            if entry.multiplicity < 0:
                raise ValidationError("multiplicity must be nonnegative", f"{field}.mult")

    @classmethod
    def from_lists(
        cls, weights: Iterable[Sequence[int]], multiplicities: Iterable[int] = ()
    ) -> "WeightSystem":
        """Build a system from parallel lists; multiplicities default to 1"""
        weights = [integer_vector(w, f"weights[{i}].w") for i, w in enumerate(weights)]
        mults = list(multiplicities) or [1] * len(weights)
        if len(mults) != len(weights):
            raise ValidationError(
                f"{len(weights)} weights but {len(mults)} multiplicities", "weights"
            )
        if not weights:
            raise ValidationError("cannot infer the rank of an empty system", "weights")
        k = len(weights[0])
        return cls(k, tuple(WeightEntry(w, m) for w, m in zip(weights, mults)))

    @property
    def weights(self) -> List[IntegerVector]:
        return [entry.weight for entry in self.entries]

    @property
    def multiplicities(self) -> List[int]:
        return [entry.multiplicity for entry in self.entries]

    @property
    def total_multiplicity(self) -> int:
        """n = sum of n_nu, the complex dimension of V"""
        return sum(self.multiplicities)

    @property
    def active_indices(self) -> List[int]:
        """Indices of entries with positive multiplicity"""
        return [i for i, entry in enumerate(self.entries) if entry.multiplicity > 0]

    @property
    def active_weights(self) -> List[IntegerVector]:
        return [self.entries[i].weight for i in self.active_indices]

    def is_empty(self) -> bool:
        return not self.active_indices

    def with_multiplicities(self, multiplicities: Sequence[int]) -> "WeightSystem":
        if len(multiplicities) != len(self.entries):
            raise ValidationError("multiplicity list length mismatch", "mult")
        return WeightSystem(
            self.k,
            tuple(WeightEntry(e.weight, m) for e, m in zip(self.entries, multiplicities)),
        )

    def canonical_key(self) -> Tuple[Tuple[IntegerVector, int], ...]:
        """Order-independent key used for memoization"""
        return tuple(sorted((e.weight, e.multiplicity) for e in self.entries))

    def to_dict(self) -> Dict[str, Any]:
        return {"k": self.k, "weights": [entry.to_dict() for entry in self.entries]}
