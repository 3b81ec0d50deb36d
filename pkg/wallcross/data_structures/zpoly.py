"""
Polynomials in one auxiliary variable z with MultiPoly coefficients.

A ZPoly is an element of QQ[x1..xk, z], the sympy PolyRing with z as its
last generator. This module holds the line substitution xi -> xi + z*e, the
total residue of numerator / prod(factor^mult) read off the ring_series
expansion at infinity, and the restriction of a shift-invariant class to the
quotient by a lattice direction.
"""

from fractions import Fraction
from functools import lru_cache
from typing import Any, List, Sequence, Tuple, Union

import logging

from sympy import QQ, Symbol
from sympy.polys.orderings import lex
from sympy.polys.ring_series import rs_mul, rs_pow
from sympy.polys.rings import PolyRing

from ..models.error_codes import EngineInvariantError, ValidationError
from ..utils.exact_linalg import hermite_extend
from ..utils.rationals import to_qq
from .multipoly import MultiPoly, polynomial_ring

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]


@lru_cache(maxsize=None)
def z_ring(k: int) -> PolyRing:
    """QQ[x1..xk, z]; z is generator k"""
    symbols = tuple(Symbol(f"x{i + 1}") for i in range(k)) + (Symbol("z"),)
    return PolyRing(symbols, QQ, lex)


def _lift(c: MultiPoly, power: int = 0) -> Any:
    return z_ring(c.k).from_dict({e + (power,): v for e, v in c.element.items()})


class ZPoly:
    """Polynomial in z with coefficients in QQ[x1..xk]; coeffs[j] multiplies z^j"""

    __slots__ = ("_k", "_element")

    def __init__(self, k: int, coeffs: Sequence[MultiPoly] = ()):
        element = z_ring(k).zero
        for power, c in enumerate(coeffs):
            if c.k != k:
                raise ValidationError(f"coefficient in {c.k} variables, expected {k}")
            element += _lift(c, power)
        self._k = k
        self._element = element

    @classmethod
    def from_element(cls, k: int, element: Any) -> "ZPoly":
        poly = cls.__new__(cls)
        poly._k = k
        poly._element = element
        return poly

    @classmethod
    def constant(cls, value: MultiPoly) -> "ZPoly":
        return cls.from_element(value.k, _lift(value))

    @classmethod
    def linear(cls, slope: MultiPoly, intercept: MultiPoly) -> "ZPoly":
        """slope * z + intercept"""
        return cls(slope.k, [intercept, slope])

    @property
    def k(self) -> int:
        return self._k

    @property
    def element(self) -> Any:
        return self._element

    @property
    def coeffs(self) -> Tuple[MultiPoly, ...]:
        return tuple(self.coefficient(j) for j in range(self.degree + 1))

    @property
    def degree(self) -> int:
        """Degree in z; -1 for the zero polynomial"""
        return max((e[-1] for e in self._element), default=-1)

    def is_zero(self) -> bool:
        return not self._element

    def coefficient(self, power: int) -> MultiPoly:
        terms = {e[:-1]: c for e, c in self._element.items() if e[-1] == power}
        return MultiPoly.from_element(self._k, polynomial_ring(self._k).from_dict(terms))

    def leading_coefficient(self) -> MultiPoly:
        return self.coefficient(max(self.degree, 0))

    def __add__(self, other: "ZPoly") -> "ZPoly":
        return ZPoly.from_element(self._k, self._element + other._element)

    def __mul__(self, other: Union["ZPoly", MultiPoly, Scalar]) -> "ZPoly":
        if isinstance(other, ZPoly):
            return ZPoly.from_element(self._k, self._element * other._element)
        if isinstance(other, MultiPoly):
            return ZPoly.from_element(self._k, self._element * _lift(other))
        return ZPoly.from_element(self._k, self._element.mul_ground(to_qq(other)))

    def __pow__(self, power: int) -> "ZPoly":
        return ZPoly.from_element(self._k, self._element ** power)

    def shift(self, s: Scalar) -> "ZPoly":
        """Substitute z -> z + s"""
        ring = z_ring(self._k)
        z = ring.gens[-1]
        return ZPoly.from_element(
            self._k, self._element.compose(z, z + ring.ground_new(to_qq(s)))
        )

    def map_coefficients(self, matrix: Sequence[Sequence[Scalar]]) -> "ZPoly":
        """Apply MultiPoly.compose_linear to every coefficient"""
        width = len(matrix[0]) if matrix else 0
        return ZPoly(width, [c.compose_linear(matrix) for c in self.coeffs])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ZPoly):
            return NotImplemented
        return self._k == other._k and self._element == other._element

    def __hash__(self) -> int:
        return hash((self._k, self._element))

    def __reduce__(self) -> Tuple[Any, ...]:
        return (ZPoly, (self._k, self.coeffs))

    def render(self) -> str:
        if self.is_zero():
            return "0"
        pieces = []
        for j, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            power = "" if j == 0 else ("*z" if j == 1 else f"*z^{j}")
            pieces.append(f"({c.render()}){power}")
        return " + ".join(pieces)

    def __repr__(self) -> str:
        return f"ZPoly(k={self._k}, {self.render()!r})"


def substitute_line(p: MultiPoly, e: Sequence[int]) -> ZPoly:
    """Evaluate p at xi + z*e, expanded in powers of z

    Raises:
        ValidationError: If e does not have length k
    """
    if len(e) != p.k:
        raise ValidationError(f"direction has dimension {len(e)}, expected {p.k}", "e")
    ring = z_ring(p.k)
    z = ring.gens[-1]
    moves = [(g, g + z.mul_ground(to_qq(d))) for g, d in zip(ring.gens, e) if d]
    lifted = _lift(p)
    if moves:
        lifted = lifted.compose(moves)
    return ZPoly.from_element(p.k, lifted)


def total_residue(
    numerator: ZPoly, denominator_factors: Sequence[Tuple[ZPoly, int]]
) -> MultiPoly:
    """Sum of the residues of numerator / prod(factor^mult) over all poles.

    Each factor is b*z + a with b a nonzero rational. Writing the
    denominator as B * z^M * prod(1 + c_i/z)^m_i and t = 1/z, the residue
    sum is the z^-1 coefficient of the expansion at infinity:
    (1/B) * sum_j N_j * s_{j-M+1}, where s_r are the coefficients of the
    truncated series prod(1 + c_i t)^(-m_i), computed by ring_series with
    the z generator standing in for t.

    Args:
        numerator: Polynomial in z
        denominator_factors: (linear ZPoly, multiplicity) pairs; multiplicity 0 is skipped

    Returns:
        The residue sum, a polynomial in xi

    Raises:
        ValidationError: If a factor is not linear in z with a constant nonzero slope
    """
    k = numerator.k
    total_multiplicity = 0
    leading = Fraction(1)
    shifts: List[Tuple[MultiPoly, int]] = []
    for position, (factor, multiplicity) in enumerate(denominator_factors):
        if multiplicity < 0:
            raise ValidationError(f"negative multiplicity {multiplicity}", f"factors[{position}]")
        if multiplicity == 0:
            continue
        if factor.k != k:
            raise ValidationError("factor lives in a different ring", f"factors[{position}]")
        slope = factor.coefficient(1)
        if factor.degree != 1 or not slope.is_constant() or slope.is_zero():
            raise ValidationError(
                "denominator factor must be b*z + a with b a nonzero constant",
                f"factors[{position}]",
            )
        b = slope.constant_term()
        total_multiplicity += multiplicity
        leading *= b ** multiplicity
        shifts.append((factor.coefficient(0) / b, multiplicity))

    degree = numerator.degree
    if numerator.is_zero() or degree <= total_multiplicity - 2:
        return MultiPoly.zero(k)

    order = degree - total_multiplicity + 1
    ring = z_ring(k)
    t = ring.gens[-1]
    series = ring.one
    for c, multiplicity in shifts:
        factor = ring.one + _lift(c, 1)
        series = rs_mul(series, rs_pow(factor, -multiplicity, t, order + 1), t, order + 1)
    coefficients = ZPoly.from_element(k, series)

    result = MultiPoly.zero(k)
    for j in range(max(total_multiplicity - 1, 0), degree + 1):
        result = result + numerator.coefficient(j) * coefficients.coefficient(
            j - total_multiplicity + 1
        )
    logger.debug(f"Residue sum over {len(shifts)} poles with series order {order}")
    return result / leading


def restrict_off_direction(p: MultiPoly, e: Sequence[int]) -> MultiPoly:
    """Express an e-shift-invariant class in k - 1 variables.

    Changes coordinates by xi = U xi' with U = hermite_extend(e), so e
    becomes the last basis direction, and drops the last variable.

    Raises:
        ValidationError: If e is not primitive
        EngineInvariantError: If p is not invariant under xi -> xi + s*e
    """
    if len(e) != p.k:
        raise ValidationError(f"direction has dimension {len(e)}, expected {p.k}", "e")
    unimodular = hermite_extend(e)
    transformed = p.compose_linear(unimodular)
    if transformed.involves_variable(p.k - 1):
        raise EngineInvariantError(
            f"class {p.render()} is not e-invariant for e={tuple(e)}", "e"
        )
    return transformed.drop_last_variable()


def is_shift_invariant(p: MultiPoly, e: Sequence[int]) -> bool:
    """True iff p(xi + s*e) == p(xi) identically"""
    return substitute_line(p, e).degree <= 0
