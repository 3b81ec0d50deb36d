"""
Sparse multivariate polynomials over the rationals.

A MultiPoly is an element of the symmetric algebra S(t*) in k variables
x1..xk. The arithmetic lives in a sympy PolyRing over QQ, one ring per k;
this wrapper pins the number of variables, speaks Fractions at its edges and
owns the text form used by problem files and traces: terms joined by + or -,
each term an optional "p/q*" coefficient followed by a product of "xi^e"
factors.
"""

import re
from fractions import Fraction
from functools import lru_cache
from tokenize import TokenError
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import logging

from sympy import QQ, Expr, Symbol
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyRing

from ..models.error_codes import ValidationError
from ..utils.rationals import format_rational, from_qq, to_qq

logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]
Scalar = Union[int, Fraction]

# Only digits, x-variables, whitespace and + - * / ^ ( ) reach the sympy parser
_ALLOWED_TEXT = re.compile(r"^[x0-9\s^*/+\-()]*$")
_TRANSFORMATIONS = standard_transformations + (convert_xor,)


@lru_cache(maxsize=None)
def polynomial_ring(k: int) -> PolyRing:
    """QQ[x1..xk] with lexicographic order"""
    return PolyRing(tuple(Symbol(f"x{i + 1}") for i in range(k)), QQ, lex)


class MultiPoly:
    """Polynomial in k variables with exact rational coefficients"""

    __slots__ = ("_k", "_element")

    def __init__(self, k: int, terms: Optional[Mapping[Exponent, Scalar]] = None):
        """Create a polynomial

        Args:
            k: Number of variables
            terms: Map from exponent tuple (length k) to coefficient

        Raises:
            ValidationError: If an exponent has the wrong length or a negative entry
        """
        if k < 0:
            raise ValidationError(f"negative number of variables {k}", "k")
        cleaned: Dict[Exponent, Fraction] = {}
        for exponent, coefficient in (terms or {}).items():
            exponent = tuple(int(e) for e in exponent)
            if len(exponent) != k:
                raise ValidationError(
                    f"exponent {exponent} has length {len(exponent)}, expected {k}", "exp"
                )
            if any(e < 0 for e in exponent):
                raise ValidationError(f"negative exponent in {exponent}", "exp")
            cleaned[exponent] = cleaned.get(exponent, Fraction(0)) + Fraction(coefficient)
        self._k = k
        self._element = polynomial_ring(k).from_dict(
            {e: to_qq(c) for e, c in cleaned.items()}
        )

    # -- Constructors -----------------------------------------------------

    @classmethod
    def from_element(cls, k: int, element: Any) -> "MultiPoly":
        """Wrap an element of polynomial_ring(k) without copying"""
        poly = cls.__new__(cls)
        poly._k = k
        poly._element = element
        return poly

    @classmethod
    def zero(cls, k: int) -> "MultiPoly":
        return cls.from_element(k, polynomial_ring(k).zero)

    @classmethod
    def constant(cls, k: int, value: Scalar) -> "MultiPoly":
        return cls.from_element(k, polynomial_ring(k).ground_new(to_qq(value)))

    @classmethod
    def variable(cls, k: int, index: int) -> "MultiPoly":
        """The coordinate x_{index+1} (index is 0-based)"""
        if not 0 <= index < k:
            raise ValidationError(f"variable index {index + 1} outside 1..{k}", "class")
        return cls.from_element(k, polynomial_ring(k).gens[index])

    @classmethod
    def monomial(cls, exponent: Sequence[int], coefficient: Scalar = 1) -> "MultiPoly":
        return cls(len(exponent), {tuple(exponent): coefficient})

    @classmethod
    def linear_form(cls, weight: Sequence[Scalar]) -> "MultiPoly":
        """The linear polynomial xi -> <weight, xi>"""
        k = len(weight)
        ring = polynomial_ring(k)
        element = ring.zero
        for generator, w in zip(ring.gens, weight):
            element += generator.mul_ground(to_qq(w))
        return cls.from_element(k, element)

    # -- Accessors --------------------------------------------------------

    @property
    def k(self) -> int:
        return self._k

    @property
    def element(self) -> Any:
        """The underlying sympy PolyElement"""
        return self._element

    @property
    def terms(self) -> Mapping[Exponent, Fraction]:
        return {e: from_qq(c) for e, c in self._element.items()}

    def items(self) -> Iterator[Tuple[Exponent, Fraction]]:
        return iter(sorted(self.terms.items(), key=_term_order))

    def is_zero(self) -> bool:
        return not self._element

    def is_constant(self) -> bool:
        return self._element.is_ground

    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * self._k)

    def coefficient(self, exponent: Sequence[int]) -> Fraction:
        return from_qq(self._element.get(tuple(exponent), QQ.zero))

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial"""
        return max((sum(e) for e in self._element), default=-1)

    def degrees(self) -> List[int]:
        """Sorted list of the degrees that carry a nonzero homogeneous part"""
        return sorted({sum(e) for e in self._element})

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def homogeneous_part(self, degree: int) -> "MultiPoly":
        ring = polynomial_ring(self._k)
        return MultiPoly.from_element(
            self._k,
            ring.from_dict({e: c for e, c in self._element.items() if sum(e) == degree}),
        )

    def involves_variable(self, index: int) -> bool:
        return any(e[index] != 0 for e in self._element)

    def drop_last_variable(self) -> "MultiPoly":
        """Reinterpret a polynomial free of x_k as one in k - 1 variables"""
        if self._k == 0 or self.involves_variable(self._k - 1):
            raise ValidationError("polynomial depends on its last variable")
        ring = polynomial_ring(self._k - 1)
        return MultiPoly.from_element(
            self._k - 1, ring.from_dict({e[:-1]: c for e, c in self._element.items()})
        )

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        if len(point) != self._k:
            raise ValidationError(f"point has dimension {len(point)}, expected {self._k}")
        if self._k == 0:
            return self.constant_term()
        ring = polynomial_ring(self._k)
        return from_qq(
            self._element.evaluate([(g, to_qq(x)) for g, x in zip(ring.gens, point)])
        )

    # -- Arithmetic -------------------------------------------------------

    def _coerce(self, other: Union["MultiPoly", Scalar]) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other._k != self._k:
                raise ValidationError(
                    f"cannot combine polynomials in {self._k} and {other._k} variables"
                )
            return other
        return MultiPoly.constant(self._k, other)

    def __add__(self, other: Union["MultiPoly", Scalar]) -> "MultiPoly":
        return MultiPoly.from_element(self._k, self._element + self._coerce(other)._element)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly.from_element(self._k, -self._element)

    def __sub__(self, other: Union["MultiPoly", Scalar]) -> "MultiPoly":
        return MultiPoly.from_element(self._k, self._element - self._coerce(other)._element)

    def __rsub__(self, other: Scalar) -> "MultiPoly":
        return self._coerce(other) - self

    def __mul__(self, other: Union["MultiPoly", Scalar]) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            return MultiPoly.from_element(self._k, self._element.mul_ground(to_qq(other)))
        return MultiPoly.from_element(self._k, self._element * self._coerce(other)._element)

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> "MultiPoly":
        divisor = Fraction(other)
        if divisor == 0:
            raise ZeroDivisionError("polynomial division by zero")
        return self * (1 / divisor)

    def __pow__(self, power: int) -> "MultiPoly":
        if power < 0:
            raise ValidationError(f"negative power {power}")
        return MultiPoly.from_element(self._k, self._element ** power)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, MultiPoly):
            return self._k == other._k and self._element == other._element
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_term() == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self._k, self._element))

    def __reduce__(self) -> Tuple[Any, ...]:
        return (MultiPoly, (self._k, dict(self.terms)))

    # -- Linear substitutions ---------------------------------------------

    def compose_linear(self, matrix: Sequence[Sequence[Scalar]]) -> "MultiPoly":
        """Substitute xi = matrix @ xi'.

        Args:
            matrix: k x m matrix; row i expresses old variable x_{i+1} in the m new ones

        Returns:
            Polynomial in m variables
        """
        if len(matrix) != self._k:
            raise ValidationError(f"matrix has {len(matrix)} rows, expected {self._k}")
        width = len(matrix[0]) if matrix else 0
        if width == self._k:
            # square: a simultaneous substitution inside the same ring
            images = [MultiPoly.linear_form(row)._element for row in matrix]
            ring = polynomial_ring(self._k)
            return MultiPoly.from_element(
                self._k, self._element.compose(list(zip(ring.gens, images)))
            )
        target = polynomial_ring(width)
        images = [MultiPoly.linear_form(row)._element for row in matrix]
        result = target.zero
        for exponent, coefficient in self._element.iterterms():
            term = target.ground_new(coefficient)
            for image, e in zip(images, exponent):
                if e:
                    term *= image ** e
            result += term
        return MultiPoly.from_element(width, result)

    # -- Rendering --------------------------------------------------------

    def render(self) -> str:
        """Text form, e.g. "3/2*x1^2*x2 - x3 + 1" """
        if self.is_zero():
            return "0"
        pieces: List[str] = []
        for exponent, coefficient in self.items():
            factors = [
                f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}"
                for i, e in enumerate(exponent)
                if e
            ]
            magnitude = abs(coefficient)
            if not factors:
                body = format_rational(magnitude)
            elif magnitude == 1:
                body = "*".join(factors)
            else:
                body = format_rational(magnitude) + "*" + "*".join(factors)
            if not pieces:
                pieces.append(("-" if coefficient < 0 else "") + body)
            else:
                pieces.append((" - " if coefficient < 0 else " + ") + body)
        return "".join(pieces)

    def to_monomials(self) -> List[Dict[str, object]]:
        """JSON-ready monomial list [{"coeff": "p/q", "exp": [...]}, ...]"""
        return [
            {"coeff": format_rational(c), "exp": list(e)} for e, c in self.items()
        ]

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"MultiPoly(k={self._k}, {self.render()!r})"


def _term_order(item: Tuple[Exponent, Fraction]) -> Tuple[int, Tuple[int, ...]]:
    exponent = item[0]
    return (-sum(exponent), tuple(-e for e in exponent))


def parse_polynomial(text: str, k: int, field: str = "class") -> MultiPoly:
    """Parse the problem-file polynomial grammar.

    The text is screened to digits, x-variables and arithmetic, handed to
    sympy's parser with ^ read as a power, and converted into
    polynomial_ring(k). Products must be written with *.

    Args:
        text: e.g. "x1^2 - 3/2*x1*x2 + 1"
        k: Number of variables
        field: Field name reported on failure

    Returns:
        The parsed polynomial

    Raises:
        ValidationError: On any syntax error or out-of-range variable
    """
    cleaned = text.replace("−", "-").strip()
    if not cleaned:
        raise ValidationError("empty polynomial", field)
    if not _ALLOWED_TEXT.match(cleaned):
        raise ValidationError(f"cannot parse polynomial {text!r}", field)
    ring = polynomial_ring(k)
    names = {str(symbol): symbol for symbol in ring.symbols}
    try:
        expression = parse_expr(cleaned, local_dict=dict(names), transformations=_TRANSFORMATIONS)
    except (SyntaxError, TokenError, TypeError, ValueError) as e:
        raise ValidationError(f"cannot parse polynomial {text!r}: {e}", field)
    if not isinstance(expression, Expr):
        raise ValidationError(f"cannot parse polynomial {text!r}", field)
    for symbol in sorted(expression.free_symbols, key=str):
        if str(symbol) not in names:
            raise ValidationError(f"variable {symbol} outside x1..x{k}", field)
    try:
        element = ring.from_expr(expression)
    except ValueError:
        raise ValidationError(f"{text!r} is not a polynomial", field)
    result = MultiPoly.from_element(k, element)
    logger.debug(f"Parsed polynomial {result.render()} from {text!r}")
    return result


def monomials_of_degree(k: int, degree: int) -> List[Exponent]:
    """All exponent tuples in k variables with the given total degree"""
    if degree < 0:
        return []
    if k == 0:
        return [()] if degree == 0 else []
    if k == 1:
        return [(degree,)]
    result: List[Exponent] = []
    for first in range(degree, -1, -1):
        for rest in monomials_of_degree(k - 1, degree - first):
            result.append((first,) + rest)
    return result
