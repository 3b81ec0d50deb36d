"""
Invariant pushforward over spheres.

For a weight system whose weights all pair nontrivially with a lattice
direction e1, the circle generated by e1 acts locally freely on the unit
sphere and the invariant pushforward of a class x is the total residue of

    x(xi + z*e1) / prod_nu <w_nu, xi + z*e1>^{n_nu}

in z. sphere_pushforward computes it from the expansion at infinity;
colinear_pushforward computes the same number as a single residue when all
weights lie on one ray, and serves as its cross-check.
"""

import logging
from fractions import Fraction
from math import gcd
from typing import List, Sequence, Tuple

from ..data_structures.multipoly import MultiPoly
from ..data_structures.zpoly import ZPoly, is_shift_invariant, substitute_line, total_residue
from ..models.error_codes import EngineInvariantError, PreconditionError, ValidationError
from ..models.weights import WeightSystem
from ..utils.exact_linalg import rank
from ..utils.rationals import IntegerVector, pairing

logger = logging.getLogger(__name__)


def _check_inputs(ws: WeightSystem, x: MultiPoly, e1: Sequence[int]) -> None:
    if x.k != ws.k:
        raise ValidationError(f"class is in {x.k} variables, expected {ws.k}", "class")
    if len(e1) != ws.k:
        raise ValidationError(f"e1 has dimension {len(e1)}, expected {ws.k}", "e1")


def weight_factors(
    ws: WeightSystem, e1: Sequence[int], skip: Sequence[int] = ()
) -> List[Tuple[ZPoly, int]]:
    """Denominator factors <w_nu, xi + z*e1> with exponents n_nu

    Entries listed in skip and entries of multiplicity zero are left out.
    """
    factors = []
    for i, entry in enumerate(ws.entries):
        if i in skip or entry.multiplicity == 0:
            continue
        factors.append((substitute_line(MultiPoly.linear_form(entry.weight), e1), entry.multiplicity))
    return factors


def _negative_multiples(a: Sequence[int], b: Sequence[int]) -> bool:
    if rank([a, b]) != 1:
        return False
    return pairing(a, b) < 0


def sphere_pushforward(ws: WeightSystem, x: MultiPoly, e1: Sequence[int]) -> MultiPoly:
    """Invariant pushforward of x along the circle generated by e1.

    Args:
        ws: Weights acting on the sphere in V
        x: Class in S(t*)
        e1: Lattice direction generating the circle

    Returns:
        The pushforward, as a polynomial in all k variables

    Raises:
        PreconditionError: If some weight of positive multiplicity pairs to
            zero with e1, or two weights are negative multiples of each other
        EngineInvariantError: If the result is not invariant under e1 shifts
    """
    _check_inputs(ws, x, e1)
    active = ws.active_weights
    for i, w in enumerate(active):
        if pairing(w, e1) == 0:
            raise PreconditionError(f"weight {list(w)} pairs to zero with e1", "e1")
        for v in active[i + 1:]:
            if _negative_multiples(w, v):
                raise PreconditionError(
                    f"weights {list(w)} and {list(v)} are negative multiples", "weights"
                )
    result = total_residue(substitute_line(x, e1), weight_factors(ws, e1))
    if not is_shift_invariant(result, e1):
        raise EngineInvariantError(f"pushforward {result.render()} is not e1-invariant", "e1")
    return result


def _common_direction(weights: Sequence[IntegerVector]) -> Tuple[IntegerVector, List[int]]:
    """Primitive w and positive integers l with weights[i] = l[i] * w"""
    first = weights[0]
    content = 0
    for x in first:
        content = gcd(content, x)
    direction = tuple(x // content for x in first)
    scales = []
    for w in weights:
        index = next(i for i, x in enumerate(direction) if x != 0)
        scale = Fraction(w[index], direction[index])
        if scale <= 0 or scale.denominator != 1 or tuple(scale * d for d in direction) != tuple(w):
            raise ValidationError(
                f"weight {list(w)} is not a positive multiple of {list(direction)}", "weights"
            )
        scales.append(int(scale))
    return direction, scales


def colinear_pushforward(ws: WeightSystem, x: MultiPoly, e1: Sequence[int]) -> MultiPoly:
    """Pushforward for weights on a single ray, by one residue.

    With w primitive, w_nu = l_nu * w and c = <w, e1>, the only pole is at
    z0 = -<w, xi>/c. Substituting z = z0 + u turns the denominator into
    prod(l_nu^n_nu) * c^n * u^n, so the residue is the u^(n-1) coefficient of
    x(P xi + u*e1) divided by that constant, where P xi = xi - e1 <w, xi>/c.

    Raises:
        ValidationError: If the weights are not positive multiples of one vector
        PreconditionError: If <w, e1> = 0
    """
    _check_inputs(ws, x, e1)
    active = [i for i in ws.active_indices]
    if not active:
        return MultiPoly.zero(ws.k)
    direction, scales = _common_direction([ws.entries[i].weight for i in active])
    c = pairing(direction, e1)
    if c == 0:
        raise PreconditionError("weights pair to zero with e1", "e1")
    total = sum(ws.entries[i].multiplicity for i in active)
    constant = c ** total
    for i, scale in zip(active, scales):
        constant *= Fraction(scale) ** ws.entries[i].multiplicity

    projection = [
        [Fraction(int(i == j)) - Fraction(e1[i] * direction[j]) / c for j in range(ws.k)]
        for i in range(ws.k)
    ]
    shifted = substitute_line(x, e1).map_coefficients(projection)
    return shifted.coefficient(total - 1) / constant
