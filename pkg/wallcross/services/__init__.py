"""
Engines for wallcross: chamber combinatorics, sphere localization, the
wall-crossing recursion, vortex invariants, problem files and self tests.
"""
