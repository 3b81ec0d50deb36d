"""
wallcross: exact Euler classes of toric quotients by wall crossing, and
genus-zero vortex invariants of linear torus actions.
"""

__version__ = "0.1.0"
