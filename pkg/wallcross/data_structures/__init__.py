"""
Polynomial rings: sparse polynomials in k variables and dense polynomials in z.
"""

from .multipoly import MultiPoly, parse_polynomial
from .zpoly import ZPoly, restrict_off_direction, substitute_line, total_residue

__all__ = [
    'MultiPoly',
    'parse_polynomial',
    'ZPoly',
    'restrict_off_direction',
    'substitute_line',
    'total_residue'
]
