"""
Problem file handling for wallcross.

This module reads and writes the JSON problem files consumed by the command
line driver. The document shape is validated by pydantic models; the domain
objects (weight system, level, class) are built from the validated data.
"""

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from pydantic import BaseModel as SchemaModel
from pydantic import ConfigDict, Field, StrictInt
from pydantic import ValidationError as SchemaError

from ..data_structures.multipoly import MultiPoly, parse_polynomial
from ..models.error_codes import ValidationError
from ..models.problems import ToricProblem, VortexProblem
from ..models.weights import WeightEntry, WeightSystem
from ..utils.rationals import RationalVector, format_rational, parse_rational, rational_vector

logger = logging.getLogger(__name__)

RationalText = Union[StrictInt, str]


class WeightSpecModel(SchemaModel):
    """One weight entry {"w": [...], "mult": n}"""
    model_config = ConfigDict(extra="forbid")

    w: List[StrictInt]
    mult: StrictInt = Field(default=1, ge=0)


class MonomialSpecModel(SchemaModel):
    """One monomial {"coeff": "p/q", "exp": [...]}"""
    model_config = ConfigDict(extra="forbid")

    coeff: RationalText
    exp: List[StrictInt]


class MonomialListModel(SchemaModel):
    model_config = ConfigDict(extra="forbid")

    monomials: List[MonomialSpecModel]


class ProblemFileModel(SchemaModel):
    """Top-level problem document"""
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    k: StrictInt = Field(ge=0)
    weights: List[WeightSpecModel]
    tau: List[RationalText]
    class_: Optional[Union[str, MonomialListModel]] = Field(default=None, alias="class")
    kappa: Optional[List[StrictInt]] = None
    genus: StrictInt = Field(default=0, ge=0)
    eta: Optional[List[RationalText]] = None


def _field_name(location: Tuple[Union[int, str], ...]) -> str:
    """Render a pydantic error location as weights[1].mult"""
    name = ""
    for part in location:
        if isinstance(part, int):
            name += f"[{part}]"
        elif part in ("str", "int", "MonomialListModel", "function-after"):
            continue
        else:
            name += ("." if name else "") + str(part)
    return name or "document"


def class_from_spec(spec: Union[str, MonomialListModel], k: int) -> MultiPoly:
    """Build the class polynomial from its string or monomial-list form"""
    if isinstance(spec, str):
        return parse_polynomial(spec, k, "class")
    terms: Dict[Tuple[int, ...], Fraction] = {}
    for i, monomial in enumerate(spec.monomials):
        if len(monomial.exp) != k:
            raise ValidationError(
                f"exponent has length {len(monomial.exp)}, expected {k}",
                f"class.monomials[{i}].exp",
            )
        if any(e < 0 for e in monomial.exp):
            raise ValidationError("negative exponent", f"class.monomials[{i}].exp")
        exponent = tuple(monomial.exp)
        coefficient = parse_rational(monomial.coeff, f"class.monomials[{i}].coeff")
        terms[exponent] = terms.get(exponent, Fraction(0)) + coefficient
    return MultiPoly(k, terms)


@dataclass
class ProblemFile:
    """Reads and writes problem files."""

    filename: str = "problem.json"
    document: Optional[ProblemFileModel] = None
    weight_system: Optional[WeightSystem] = None
    tau: RationalVector = field(default_factory=tuple)
    polynomial: Optional[MultiPoly] = None
    kappa: Optional[Tuple[int, ...]] = None
    genus: int = 0
    eta: Optional[RationalVector] = None

    def load(self) -> "ProblemFile":
        """Load and validate the problem file.

        Returns:
            self, with the domain fields populated

        Raises:
            ValidationError: If the file is missing, not JSON, or fails validation
        """
        path = Path(self.filename)
        if not path.exists():
            raise ValidationError(f"problem file {self.filename} not found", "input")
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as e:
            raise ValidationError(f"invalid JSON: {e}", "input") from e
        self.load_data(data)
        logger.info(f"Loaded problem with k={self.document.k if self.document else '?'} from {self.filename}")
        return self

    def load_data(self, data: Any) -> "ProblemFile":
        """Validate an already parsed document"""
        try:
            document = ProblemFileModel.model_validate(data)
        except SchemaError as e:
            first = e.errors()[0]
            raise ValidationError(first["msg"], _field_name(tuple(first["loc"]))) from e
        k = document.k
        self.document = document
        if not document.weights:
            raise ValidationError("at least one weight is required", "weights")
        entries = []
        for i, spec in enumerate(document.weights):
            if len(spec.w) != k:
                raise ValidationError(
                    f"weight has dimension {len(spec.w)}, expected {k}", f"weights[{i}].w"
                )
            entries.append(WeightEntry(tuple(spec.w), spec.mult))
        self.weight_system = WeightSystem(k, tuple(entries))
        if len(document.tau) != k:
            raise ValidationError(f"tau has dimension {len(document.tau)}, expected {k}", "tau")
        self.tau = rational_vector(document.tau, "tau")
        self.polynomial = (
            class_from_spec(document.class_, k) if document.class_ is not None else None
        )
        if document.kappa is not None and len(document.kappa) != k:
            raise ValidationError(
                f"kappa has dimension {len(document.kappa)}, expected {k}", "kappa"
            )
        self.kappa = tuple(document.kappa) if document.kappa is not None else None
        self.genus = document.genus
        if document.eta is not None:
            if len(document.eta) != k:
                raise ValidationError(f"eta has dimension {len(document.eta)}, expected {k}", "eta")
            self.eta = rational_vector(document.eta, "eta")
        return self

    def require_class(self) -> MultiPoly:
        if self.polynomial is None:
            raise ValidationError("this command needs a class", "class")
        return self.polynomial

    def toric_problem(self) -> ToricProblem:
        if self.weight_system is None:
            raise ValidationError("no problem loaded", "input")
        return ToricProblem(ws=self.weight_system, tau=self.tau)

    def vortex_problem(self) -> VortexProblem:
        if self.weight_system is None:
            raise ValidationError("no problem loaded", "input")
        if self.kappa is None:
            raise ValidationError("vortex problems need kappa", "kappa")
        return VortexProblem(
            target=self.weight_system,
            tau=self.tau,
            kappa=self.kappa,
            alpha=self.require_class(),
            genus=self.genus,
        )

    def to_dict(self) -> Dict[str, Any]:
        if self.weight_system is None:
            raise ValidationError("no problem loaded", "input")
        data: Dict[str, Any] = {
            "k": self.weight_system.k,
            "weights": [entry.to_dict() for entry in self.weight_system.entries],
            "tau": [format_rational(t) for t in self.tau],
        }
        if self.polynomial is not None:
            data["class"] = self.polynomial.render()
        if self.kappa is not None:
            data["kappa"] = list(self.kappa)
        if self.genus:
            data["genus"] = self.genus
        if self.eta is not None:
            data["eta"] = [format_rational(t) for t in self.eta]
        return data

    def save(self) -> None:
        """Write the problem back to filename"""
        Path(self.filename).write_text(json.dumps(self.to_dict(), indent=2) + "\n")
        logger.info(f"Saved problem to {self.filename}")


def load_problem(filename: str) -> ProblemFile:
    return ProblemFile(filename=filename).load()
