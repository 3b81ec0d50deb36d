"""
Exact rational and integer linear algebra.

Matrices are handed to sympy's DomainMatrix over QQ and ZZ for row
reduction, rank, determinants, kernels, inverses and the Hermite and Smith
normal forms. Nonnegative feasibility is a phase-one simplex with Bland's
rule over Fractions.
"""

import logging
from fractions import Fraction
from math import gcd
from typing import List, Optional, Sequence, Tuple, Union

from sympy import QQ, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices import normalforms
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError

from ..models.error_codes import EngineInvariantError, ValidationError
from .rationals import IntegerMatrix, IntegerVector, RationalVector, from_qq, to_qq

logger = logging.getLogger(__name__)

Number = Union[int, Fraction]


def _check_dimensions(vectors: Sequence[Sequence[Number]], dimension: int, field: str) -> None:
    for i, v in enumerate(vectors):
        if len(v) != dimension:
            raise ValidationError(
                f"dimension mismatch: expected {dimension}, got {len(v)}", f"{field}[{i}]"
            )


def _infer_dimension(vectors: Sequence[Sequence[Number]], dimension: Optional[int]) -> int:
    if dimension is not None:
        return dimension
    if not vectors:
        raise ValidationError("cannot infer the dimension of an empty vector list")
    return len(vectors[0])


def rational_matrix(rows: Sequence[Sequence[Number]], width: int) -> DomainMatrix:
    """DomainMatrix over QQ with the given rows"""
    return DomainMatrix([[to_qq(x) for x in row] for row in rows], (len(rows), width), QQ)


def integer_matrix(rows: Sequence[Sequence[int]], width: int) -> DomainMatrix:
    """DomainMatrix over ZZ with the given rows"""
    return DomainMatrix([[ZZ(int(x)) for x in row] for row in rows], (len(rows), width), ZZ)


def _rational_rows(matrix: DomainMatrix) -> List[List[Fraction]]:
    return [[from_qq(x) for x in row] for row in matrix.to_list()]


def _integer_rows(matrix: DomainMatrix) -> List[List[int]]:
    return [[int(x) for x in row] for row in matrix.to_list()]


def row_reduce(rows: Sequence[Sequence[Number]]) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon form over the rationals.

    Args:
        rows: Matrix given as a list of rows

    Returns:
        Tuple of (nonzero reduced rows, pivot column indices)
    """
    if not rows or not rows[0]:
        return [], []
    reduced, pivots = rational_matrix(rows, len(rows[0])).rref()
    pivots = list(pivots)
    return _rational_rows(reduced)[: len(pivots)], pivots


def rank(vectors: Sequence[Sequence[Number]]) -> int:
    """Rank of a family of vectors."""
    if not vectors or not vectors[0]:
        return 0
    return rational_matrix(vectors, len(vectors[0])).rank()


def determinant(matrix: Sequence[Sequence[Number]]) -> Fraction:
    """Determinant of a square matrix."""
    size = len(matrix)
    if size == 0:
        return Fraction(1)
    return from_qq(rational_matrix(matrix, size).det())


def solve_linear(
    matrix: Sequence[Sequence[Number]], rhs: Sequence[Number]
) -> Optional[List[Fraction]]:
    """Solve matrix @ x = rhs when the solution exists and is unique."""
    width = len(matrix[0]) if matrix else 0
    augmented = [list(row) + [b] for row, b in zip(matrix, rhs)]
    reduced, pivots = row_reduce(augmented)
    if width in pivots or len(pivots) != width:
        return None
    return [reduced[i][-1] for i in range(width)]


def kernel_basis(rows: Sequence[Sequence[Number]], dimension: int) -> List[List[Fraction]]:
    """Basis of {x : row . x = 0 for all rows}."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(dimension)] for i in range(dimension)]
    reduced, pivots = rational_matrix(rows, dimension).rref()
    if len(pivots) == dimension:
        return []
    return _rational_rows(reduced.nullspace_from_rref(pivots))


def scale_to_primitive(vector: Sequence[Fraction]) -> IntegerVector:
    """Clear denominators and divide by the content."""
    denominators = 1
    for x in vector:
        denominators = denominators * Fraction(x).denominator // gcd(
            denominators, Fraction(x).denominator
        )
    integers = [int(Fraction(x) * denominators) for x in vector]
    content = 0
    for x in integers:
        content = gcd(content, x)
    if content == 0:
        return tuple(integers)
    return tuple(x // content for x in integers)


def canonical_sign(vector: IntegerVector) -> IntegerVector:
    """Flip the sign so that the first nonzero entry is positive."""
    for x in vector:
        if x != 0:
            return vector if x > 0 else tuple(-y for y in vector)
    return vector


# -- Nonnegative feasibility ------------------------------------------------


def _phase_one(
    matrix: Sequence[Sequence[Number]], rhs: Sequence[Number]
) -> Optional[List[Fraction]]:
    """Find x >= 0 with matrix @ x = rhs, or None.

    Phase-one simplex on the artificial problem min sum(a) with Bland's rule,
    which guarantees termination on degenerate instances.
    """
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    if rows == 0:
        return [Fraction(0)] * cols
    tableau: List[List[Fraction]] = []
    for i in range(rows):
        sign = -1 if rhs[i] < 0 else 1
        row = [Fraction(sign * x) for x in matrix[i]]
        row += [Fraction(int(j == i)) for j in range(rows)]
        row.append(Fraction(sign * rhs[i]))
        tableau.append(row)
    basis = [cols + i for i in range(rows)]
    width = cols + rows
    objective = [Fraction(0)] * (width + 1)
    for row in tableau:
        for j in range(cols):
            objective[j] -= row[j]
        objective[-1] -= row[-1]

    while True:
        entering = next((j for j in range(width) if objective[j] < 0), None)
        if entering is None:
            break
        leaving = None
        best: Optional[Fraction] = None
        for i in range(rows):
            coefficient = tableau[i][entering]
            if coefficient > 0:
                ratio = tableau[i][-1] / coefficient
                if (
                    best is None
                    or ratio < best
                    or (ratio == best and leaving is not None and basis[i] < basis[leaving])
                ):
                    best = ratio
                    leaving = i
        if leaving is None:
            # Bounded below by zero, so this cannot happen for phase one
            raise EngineInvariantError("phase-one simplex reported an unbounded direction")
        pivot_row = tableau[leaving]
        lead = pivot_row[entering]
        pivot_row[:] = [x / lead for x in pivot_row]
        for i in range(rows):
            if i != leaving and tableau[i][entering] != 0:
                factor = tableau[i][entering]
                tableau[i] = [a - factor * b for a, b in zip(tableau[i], pivot_row)]
        if objective[entering] != 0:
            factor = objective[entering]
            objective = [a - factor * b for a, b in zip(objective, pivot_row)]
        basis[leaving] = entering

    if objective[-1] != 0:
        return None
    solution = [Fraction(0)] * cols
    for i, b in enumerate(basis):
        if b < cols:
            solution[b] = tableau[i][-1]
    return solution


def solve_nonneg_combination(
    vectors: Sequence[Sequence[Number]], target: Sequence[Number]
) -> Optional[List[Fraction]]:
    """Find rational c_i >= 0 with sum(c_i * v_i) == target.

    Args:
        vectors: Generators, each of the same dimension as target
        target: Point to represent

    Returns:
        Coefficients, or None if target is not in the cone of the vectors

    Raises:
        ValidationError: On dimension mismatch
    """
    dimension = len(target)
    _check_dimensions(vectors, dimension, "vectors")
    if not vectors:
        return [] if all(t == 0 for t in target) else None
    matrix = [[v[i] for v in vectors] for i in range(dimension)]
    coefficients = _phase_one(matrix, list(target))
    if coefficients is None:
        return None
    for i in range(dimension):
        if sum(c * v[i] for c, v in zip(coefficients, vectors)) != target[i]:
            raise EngineInvariantError("nonnegative combination does not reproduce the target")
    return coefficients


def find_strictly_negative(
    vectors: Sequence[Sequence[Number]], dimension: Optional[int] = None
) -> Optional[IntegerVector]:
    """Find an integer xi with <v, xi> < 0 for every vector, or None.

    Solves <v, xi+ - xi-> + s_v = -1 with xi+, xi-, s >= 0; any solution has
    every pairing at most -1, and a positive rescaling to integers keeps them
    negative.
    """
    dimension = _infer_dimension(vectors, dimension)
    _check_dimensions(vectors, dimension, "vectors")
    if not vectors:
        return tuple([0] * dimension)
    count = len(vectors)
    matrix = []
    for n, v in enumerate(vectors):
        row = [Fraction(x) for x in v] + [Fraction(-x) for x in v]
        row += [Fraction(int(j == n)) for j in range(count)]
        matrix.append(row)
    solution = _phase_one(matrix, [Fraction(-1)] * count)
    if solution is None:
        return None
    xi = [solution[j] - solution[dimension + j] for j in range(dimension)]
    certificate = scale_to_primitive(xi)
    if any(sum(a * b for a, b in zip(v, certificate)) >= 0 for v in vectors):
        raise EngineInvariantError("properness certificate failed verification")
    return certificate


# -- Lattices -----------------------------------------------------------------


def primitive_normal(
    span_vectors: Sequence[Sequence[int]], dimension: Optional[int] = None
) -> IntegerVector:
    """Primitive integer normal to a family of rank dimension - 1.

    Args:
        span_vectors: Integer vectors spanning a hyperplane
        dimension: Ambient dimension; required when span_vectors is empty

    Returns:
        Primitive e with <v, e> = 0 for all inputs, first nonzero entry positive

    Raises:
        ValidationError: If the family does not have rank dimension - 1
    """
    dimension = _infer_dimension(span_vectors, dimension)
    _check_dimensions(span_vectors, dimension, "span_vectors")
    if rank(span_vectors) != dimension - 1:
        raise ValidationError(
            f"span vectors must have rank {dimension - 1}", "span_vectors"
        )
    basis = kernel_basis(span_vectors, dimension)
    return canonical_sign(scale_to_primitive(basis[0]))


def hermite_extend(v: Sequence[int]) -> IntegerMatrix:
    """Complete a primitive vector to a unimodular matrix.

    The Smith decomposition S @ v = +-e_1 of v as a column gives a unimodular
    S; the first column of S^-1 is +-v. Moving that column last yields U with
    determinant +-1 and last column v.

    Raises:
        ValidationError: If v is zero or not primitive
    """
    size = len(v)
    content = 0
    for x in v:
        content = gcd(content, x)
    if content != 1:
        raise ValidationError(f"vector {tuple(v)} is not primitive", "v")
    smith, left, _ = normalforms.smith_normal_decomp(integer_matrix([[x] for x in v], 1))
    unit = int(smith.to_list()[0][0])
    inverse = _rational_rows(left.convert_to(QQ).inv())
    for row in inverse:
        row[0] *= unit
    if any(x.denominator != 1 for row in inverse for x in row):
        raise EngineInvariantError("Smith transform is not unimodular")
    matrix = tuple(tuple(int(x) for x in row[1:] + row[:1]) for row in inverse)
    if tuple(row[-1] for row in matrix) != tuple(v) or abs(determinant(matrix)) != 1:
        raise EngineInvariantError("unimodular completion lost the prescribed column")
    logger.debug(f"Completed {tuple(v)} to a unimodular basis of Z^{size}")
    return matrix


def integer_inverse(matrix: Sequence[Sequence[int]]) -> IntegerMatrix:
    """Inverse of a unimodular integer matrix."""
    size = len(matrix)
    try:
        inverse = _rational_rows(rational_matrix(matrix, size).inv())
    except DMNonInvertibleMatrixError:
        raise ValidationError("matrix is singular", "matrix")
    if any(x.denominator != 1 for row in inverse for x in row):
        raise ValidationError("matrix is not unimodular", "matrix")
    return tuple(tuple(int(x) for x in row) for row in inverse)


def transpose_apply(matrix: Sequence[Sequence[int]], vector: Sequence[Number]) -> Tuple[Number, ...]:
    """Compute matrix^T @ vector (how covectors transform under xi = U xi')."""
    size = len(matrix)
    return tuple(
        sum(matrix[i][j] * vector[i] for i in range(size)) for j in range(len(matrix[0]))
    )


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> List[List[int]]:
    """Hermite normal form basis of the lattice spanned by the rows.

    sympy normalizes the column module, so the rows are passed as columns
    and the result is transposed back: one row per basis vector, as many
    rows as the rank.
    """
    if not rows:
        return []
    width = len(rows[0])
    columns = integer_matrix(rows, width).transpose()
    return _integer_rows(normalforms.hermite_normal_form(columns).transpose())


def lattice_generates(
    vectors: Sequence[Sequence[int]], dimension: Optional[int] = None
) -> bool:
    """True iff the integer span of the vectors is all of Z^dimension."""
    if not vectors:
        return dimension == 0
    dimension = _infer_dimension(vectors, dimension)
    _check_dimensions(vectors, dimension, "vectors")
    basis = hermite_normal_form(vectors)
    if len(basis) != dimension:
        return False
    return abs(determinant(basis)) == 1


def as_rational_vector(values: Sequence[Number]) -> RationalVector:
    return tuple(Fraction(x) for x in values)
