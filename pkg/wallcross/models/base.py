"""
Base model functionality for wallcross.
"""

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict

from ..utils.rationals import format_rational


def to_jsonable(value: Any) -> Any:
    """Convert nested model data to JSON-ready values; rationals become "p/q" strings"""
    if isinstance(value, BaseModel):
        return value.to_dict()
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if hasattr(value, "render"):
        return value.render()
    return value


@dataclass(frozen=True)
class BaseModel:
    """Base class for all data models

    All models should inherit from this class and implement to_dict for
    serialization.
    """

    def to_dict(self) -> Dict[str, Any]:
        """Convert model to a JSON-ready dictionary

        Returns:
            Serialized model data
        """
        raise NotImplementedError

    def to_json(self, indent: int = 2) -> str:
        """Serialize model to JSON text

        Returns:
            JSON document
        """
        return json.dumps(self.to_dict(), indent=indent)
