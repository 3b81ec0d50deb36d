"""
Command line entry point.
"""

from .main import WallcrossCLI, main

__all__ = ['WallcrossCLI', 'main']
